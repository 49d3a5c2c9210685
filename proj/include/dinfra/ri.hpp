#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "dinfra/corpus.hpp"
#include "dinfra/model.hpp"

namespace dinfra {

struct RiConfig {
  std::uint32_t dimension = 15000;  // vector length
  std::uint32_t nnz = 8;            // non-zeros per index vector, even
  int window_size = 5;
  std::uint64_t seed = 42;

  /// Throws Error(Config) unless 0 < nnz <= dimension, nnz even, dimension >= 2.
  void validate() const;
};

/// Sparse ternary signature. `positions` are distinct; the first half carry
/// +1 and the second half -1, in selection order.
struct IndexVector {
  std::vector<std::uint32_t> positions;
  std::vector<std::int8_t> signs;
};

/// Deterministic function of (term, seed, dimension, nnz).
IndexVector index_vector(std::string_view term, const RiConfig& config);

/// Exact integer context vectors: row t = sum_c counts(t, c) * index(c).
/// Row-major, vocab.size() x dimension.
std::vector<std::int64_t> accumulate_context_vectors(
    const CooccurrenceCounts& counts, const Vocabulary& vocab,
    const RiConfig& config);

class RiModel final : public DsmModel {
 public:
  /// `vectors` row-major, L2-normalized (zero rows = untrained); `raw_norms`
  /// holds each row's norm before normalization.
  RiModel(RiConfig config, Vocabulary vocab, std::vector<float> vectors,
          std::vector<double> raw_norms);

  ModelKind kind() const noexcept override { return ModelKind::RI; }
  const Vocabulary& vocabulary() const noexcept override { return vocab_; }
  using DsmModel::vector;
  std::optional<TermVector> vector(TermId id) const override;
  bool trained(TermId id) const override;

  const RiConfig& config() const noexcept { return config_; }
  std::span<const float> stored_vectors() const noexcept { return vectors_; }
  std::span<const double> raw_norms() const noexcept { return raw_norms_; }
  std::span<const float> row(TermId id) const;

 private:
  RiConfig config_;
  Vocabulary vocab_;
  std::vector<float> vectors_;
  std::vector<double> raw_norms_;
};

/// Throws Error(Config) when counts were built for another vocabulary or
/// another window size.
RiModel train_ri(const CooccurrenceCounts& counts, const Vocabulary& vocab,
                 const RiConfig& config);

/// Normalized context vector; nullopt for OOV or untrained terms.
std::optional<DenseVector> ri_vector(const RiModel& model, std::string_view term);

}  // namespace dinfra
