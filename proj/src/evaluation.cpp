#include "dinfra/evaluation.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "dinfra/error.hpp"

namespace dinfra {

namespace {

std::string lowercase_ascii(std::string_view text) {
  std::string s(text);
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::optional<double> parse_number(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::nullopt;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return fields;
}

}  // namespace

std::string_view to_string(DatasetName name) noexcept {
  switch (name) {
    case DatasetName::WS353: return "ws353";
    case DatasetName::RG: return "rg";
    case DatasetName::MC: return "mc";
    case DatasetName::Custom: return "custom";
  }
  return "?";
}

DatasetName parse_dataset_name(std::string_view text) {
  const auto s = lowercase_ascii(text);
  if (s == "ws353") return DatasetName::WS353;
  if (s == "rg") return DatasetName::RG;
  if (s == "mc") return DatasetName::MC;
  if (s == "custom") return DatasetName::Custom;
  throw Error(ErrorKind::Config, "unknown dataset: '" + std::string(text) + "'");
}

std::optional<std::size_t> expected_pair_count(DatasetName name) noexcept {
  switch (name) {
    case DatasetName::WS353: return 353;
    case DatasetName::RG: return 65;
    case DatasetName::MC: return 30;
    case DatasetName::Custom: return std::nullopt;
  }
  return std::nullopt;
}

WordPairDataset parse_dataset(DatasetName name, std::string language,
                              std::string_view contents) {
  WordPairDataset out;
  out.name = name;
  out.language = std::move(language);

  bool seen_data = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= contents.size()) {
    const auto nl = contents.find('\n', pos);
    std::string_view line = contents.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
    pos = nl == std::string_view::npos ? contents.size() + 1 : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty() || trim(line).front() == '#') continue;

    const auto fields = split_tabs(line);
    const auto where = "line " + std::to_string(line_no) + ": ";
    if (fields.size() != 3)
      throw Error(ErrorKind::Parse, where + "expected 3 tab-separated fields, found " +
                                        std::to_string(fields.size()));
    const auto score = parse_number(fields[2]);
    if (!score) {
      if (!seen_data) {  // header row
        seen_data = true;
        continue;
      }
      throw Error(ErrorKind::Parse, where + "score is not a number: '" +
                                        std::string(fields[2]) + "'");
    }
    seen_data = true;
    if (!std::isfinite(*score))
      throw Error(ErrorKind::Parse, where + "score is not finite");
    const auto w1 = trim(fields[0]), w2 = trim(fields[1]);
    if (w1.empty() || w2.empty()) throw Error(ErrorKind::Parse, where + "empty word");
    out.pairs.push_back({std::string(w1), std::string(w2), *score});
  }

  if (out.pairs.empty())
    throw Error(ErrorKind::Integrity, "dataset contains no pairs");
  if (auto expected = expected_pair_count(name); expected && *expected != out.pairs.size())
    throw Error(ErrorKind::Integrity,
                std::string(to_string(name)) + " must contain " + std::to_string(*expected) +
                    " pairs, found " + std::to_string(out.pairs.size()));
  return out;
}

WordPairDataset load_dataset(DatasetName name, std::string language,
                             const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::NotFound, "dataset file not found: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_dataset(name, std::move(language), buffer.str());
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

std::filesystem::path dataset_path(const std::filesystem::path& root, DatasetName name,
                                   std::string_view language) {
  return root / std::string(to_string(name)) / (std::string(language) + ".tsv");
}

std::vector<double> average_ranks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i + 1;
    while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
    // Positions i..j-1 hold ranks i+1..j.
    const double rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t p = i; p < j; ++p) ranks[order[p]] = rank;
    i = j;
  }
  return ranks;
}

double spearman(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size())
    throw Error(ErrorKind::Config, "spearman: lists differ in length");
  if (xs.size() < 2) throw Error(ErrorKind::Config, "spearman: need at least two values");
  const auto rx = average_ranks(xs);
  const auto ry = average_ranks(ys);
  const double n = static_cast<double>(rx.size());
  const double mean = (n + 1.0) / 2.0;  // average ranks always sum to n(n+1)/2
  double cov = 0.0, vx = 0.0, vy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    const double a = rx[i] - mean, b = ry[i] - mean;
    cov += a * b;
    vx += a * a;
    vy += b * b;
  }
  if (vx == 0.0 || vy == 0.0)
    throw Error(ErrorKind::UndefinedCorrelation, "spearman: constant list");
  return std::clamp(cov / std::sqrt(vx * vy), -1.0, 1.0);
}

std::string_view to_string(OovPolicy p) noexcept {
  return p == OovPolicy::Skip ? "skip" : "zero";
}

OovPolicy parse_oov_policy(std::string_view text) {
  const auto s = lowercase_ascii(text);
  if (s == "skip") return OovPolicy::Skip;
  if (s == "zero") return OovPolicy::Zero;
  throw Error(ErrorKind::Config, "unknown OOV policy: '" + std::string(text) + "'");
}

EvalResult evaluate(const DsmModel& model, const WordPairDataset& dataset, Measure measure,
                    OovPolicy policy) {
  if (model.language() != dataset.language)
    throw Error(ErrorKind::Config, "model language '" + model.language() +
                                       "' does not match dataset language '" +
                                       dataset.language + "'");
  EvalResult result;
  result.policy = policy;
  result.per_pair.reserve(dataset.pairs.size());
  std::vector<double> human, scores;
  for (const auto& pair : dataset.pairs) {
    std::optional<double> score;
    try {
      score = relatedness(model, pair.word1, pair.word2, measure).raw;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::TermNotFound && e.kind() != ErrorKind::UndefinedSimilarity)
        throw;
    }
    if (!score) {
      ++result.n_skipped;
      if (policy == OovPolicy::Zero) {
        human.push_back(pair.human_score);
        scores.push_back(0.0);
      }
      result.per_pair.push_back({pair, policy == OovPolicy::Zero ? std::optional(0.0)
                                                                 : std::nullopt});
      continue;
    }
    ++result.n_scored;
    human.push_back(pair.human_score);
    scores.push_back(*score);
    result.per_pair.push_back({pair, score});
  }
  if (result.n_scored < 2)
    throw Error(ErrorKind::Coverage,
                "only " + std::to_string(result.n_scored) + " of " +
                    std::to_string(dataset.pairs.size()) + " pairs are covered by the model");
  result.rho = spearman(human, scores);
  return result;
}

}  // namespace dinfra
