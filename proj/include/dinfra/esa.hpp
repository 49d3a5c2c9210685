#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

#include "dinfra/corpus.hpp"
#include "dinfra/model.hpp"
#include "dinfra/sparse_matrix.hpp"

namespace dinfra {

struct EsaConfig {
  std::uint32_t max_concepts = 10000;
  std::uint32_t prune_window = 100;
  double prune_threshold = 0.05;

  void validate() const;
};

struct Concept {
  std::uint32_t id;
  float weight;
  friend bool operator==(const Concept&, const Concept&) = default;
};

/// Per-term concept weights, log(1+tf) * log(n_docs/df), sorted by weight
/// descending (ties by concept id), before any pruning.
std::vector<std::vector<std::pair<std::uint32_t, double>>> esa_weights(
    const SparseMatrix& counts);

/// Sliding-window pruning over a descending weight list: cut at the first
/// i >= window with w[i-window] - w[i] < threshold * w[0], then cap length.
std::size_t esa_prune_length(std::span<const double> sorted_weights,
                             std::uint32_t window, double threshold,
                             std::uint32_t max_concepts);

class EsaModel final : public DsmModel {
 public:
  /// `concepts[t]` sorted by descending weight, all weights > 0.
  EsaModel(EsaConfig config, Vocabulary vocab,
           std::vector<std::vector<Concept>> concepts, std::uint32_t n_concepts);

  ModelKind kind() const noexcept override { return ModelKind::ESA; }
  const Vocabulary& vocabulary() const noexcept override { return vocab_; }
  using DsmModel::vector;
  /// Sparse vector with ascending concept ids, L2-normalized.
  std::optional<TermVector> vector(TermId id) const override;
  bool trained(TermId id) const override;

  const EsaConfig& config() const noexcept { return config_; }
  std::uint32_t n_concepts() const noexcept { return n_concepts_; }
  std::span<const Concept> concepts(TermId id) const;

 private:
  EsaConfig config_;
  Vocabulary vocab_;
  std::vector<std::vector<Concept>> concepts_;
  std::uint32_t n_concepts_;
};

/// Throws Error(Config) when fewer than two documents exist.
EsaModel train_esa(const SparseMatrix& counts, const Vocabulary& vocab,
                   const EsaConfig& config);

std::optional<SparseVector> esa_vector(const EsaModel& model, std::string_view term);

}  // namespace dinfra
