#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace dinfra {

/// `key = value` lines; `#` starts a comment; blank lines ignored; keys are
/// case-sensitive and must be unique. Throws Error(Parse) with line numbers.
std::map<std::string, std::string> parse_key_values(std::string_view text);
std::map<std::string, std::string> read_key_value_file(
    const std::filesystem::path& path);

/// Training settings recognized in build config files. Unset fields keep
/// the per-model defaults.
struct BuildConfig {
  std::optional<std::string> language;
  std::optional<std::uint64_t> min_count;
  std::optional<int> window_size;
  std::optional<bool> stemming;
  std::optional<std::uint32_t> dimension;    // RI vector length / LSA k / ESA max_concepts
  std::optional<std::uint64_t> seed;         // RI index seed / LSA svd seed
  std::optional<std::uint32_t> nnz;          // RI
  std::optional<std::string> weighting;      // LSA
  std::optional<int> power_iterations;       // LSA
  std::optional<int> oversampling;           // LSA
  std::optional<std::uint32_t> prune_window; // ESA
  std::optional<double> prune_threshold;     // ESA
  std::optional<std::filesystem::path> stopwords;
};

/// Unknown keys and malformed values throw Error(Config).
BuildConfig parse_build_config(const std::map<std::string, std::string>& entries);

}  // namespace dinfra
