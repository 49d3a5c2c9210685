#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dinfra/model.hpp"
#include "dinfra/similarity.hpp"

namespace dinfra {

/// Custom is a free-size gold set (no pair-count validation).
enum class DatasetName { WS353, RG, MC, Custom };

std::string_view to_string(DatasetName name) noexcept;
/// "ws353" | "rg" | "mc" | "custom", case-insensitive.
DatasetName parse_dataset_name(std::string_view text);
/// 353 / 65 / 30; nullopt for Custom.
std::optional<std::size_t> expected_pair_count(DatasetName name) noexcept;

struct WordPair {
  std::string word1;
  std::string word2;
  double human_score = 0.0;
};

struct WordPairDataset {
  DatasetName name = DatasetName::Custom;
  std::string language;
  std::vector<WordPair> pairs;
};

/// UTF-8 TSV `word1<TAB>word2<TAB>score`; `#` comments and blank lines are
/// ignored; the first data line is a header iff its score is non-numeric.
/// Throws Error(Parse) with the 1-based line number, Error(Integrity) on a
/// pair-count mismatch.
WordPairDataset load_dataset(DatasetName name, std::string language,
                             const std::filesystem::path& path);
WordPairDataset parse_dataset(DatasetName name, std::string language,
                              std::string_view contents);

/// `<root>/<name>/<lang>.tsv`
std::filesystem::path dataset_path(const std::filesystem::path& root,
                                   DatasetName name, std::string_view language);

/// 1-based ranks; tied values share the mean of the ranks they span.
std::vector<double> average_ranks(std::span<const double> values);

/// Pearson correlation of average ranks. Throws Error(Config) on length
/// mismatch or n < 2, Error(UndefinedCorrelation) on a constant list.
double spearman(std::span<const double> xs, std::span<const double> ys);

enum class OovPolicy { Skip, Zero };

std::string_view to_string(OovPolicy p) noexcept;
OovPolicy parse_oov_policy(std::string_view text);

struct PairScore {
  WordPair pair;
  std::optional<double> model_score;  // nullopt when skipped
};

struct EvalResult {
  std::optional<double> rho;
  std::size_t n_scored = 0;
  std::size_t n_skipped = 0;
  OovPolicy policy = OovPolicy::Skip;
  std::vector<PairScore> per_pair;
};

/// Scores every pair with the raw measure value. Throws Error(Config) on a
/// language mismatch and Error(Coverage) when fewer than two pairs score.
EvalResult evaluate(const DsmModel& model, const WordPairDataset& dataset,
                    Measure measure, OovPolicy policy = OovPolicy::Skip);

}  // namespace dinfra
