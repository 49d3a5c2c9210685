#include "dinfra/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "dinfra/error.hpp"

namespace dinfra {
namespace {

std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

template <typename T>
T parse_integer(const std::string& key, const std::string& value) {
  T out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size())
    throw Error(ErrorKind::Config, "config key '" + key + "': not an integer: '" + value + "'");
  return out;
}

double parse_real(const std::string& key, const std::string& value) {
  double out = 0.0;
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size())
    throw Error(ErrorKind::Config, "config key '" + key + "': not a number: '" + value + "'");
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "on" || value == "yes" || value == "1") return true;
  if (value == "false" || value == "off" || value == "no" || value == "0") return false;
  throw Error(ErrorKind::Config, "config key '" + key + "': not a boolean: '" + value + "'");
}

}  // namespace

std::map<std::string, std::string> parse_key_values(std::string_view text) {
  std::map<std::string, std::string> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const auto where = "line " + std::to_string(line_no) + ": ";
    if (eq == std::string_view::npos)
      throw Error(ErrorKind::Parse, where + "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw Error(ErrorKind::Parse, where + "empty key");
    if (!out.emplace(key, value).second)
      throw Error(ErrorKind::Parse, where + "duplicate key '" + key + "'");
  }
  return out;
}

std::map<std::string, std::string> read_key_value_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open config file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_key_values(buffer.str());
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

BuildConfig parse_build_config(const std::map<std::string, std::string>& entries) {
  BuildConfig c;
  for (const auto& [key, value] : entries) {
    if (key == "language") c.language = value;
    else if (key == "min_count") c.min_count = parse_integer<std::uint64_t>(key, value);
    else if (key == "window_size") c.window_size = parse_integer<int>(key, value);
    else if (key == "stemming") c.stemming = parse_bool(key, value);
    else if (key == "dimension") c.dimension = parse_integer<std::uint32_t>(key, value);
    else if (key == "seed") c.seed = parse_integer<std::uint64_t>(key, value);
    else if (key == "nnz") c.nnz = parse_integer<std::uint32_t>(key, value);
    else if (key == "weighting") c.weighting = value;
    else if (key == "power_iterations") c.power_iterations = parse_integer<int>(key, value);
    else if (key == "oversampling") c.oversampling = parse_integer<int>(key, value);
    else if (key == "prune_window") c.prune_window = parse_integer<std::uint32_t>(key, value);
    else if (key == "prune_threshold") c.prune_threshold = parse_real(key, value);
    else if (key == "stopwords") c.stopwords = value;
    else throw Error(ErrorKind::Config, "unknown config key '" + key + "'");
  }
  return c;
}

}  // namespace dinfra
