#include "dinfra/esa.hpp"

#include <algorithm>
#include <cmath>

#include "dinfra/error.hpp"

namespace dinfra {

void EsaConfig::validate() const {
  if (max_concepts < 1) throw Error(ErrorKind::Config, "ESA max_concepts must be >= 1");
  if (!(prune_threshold >= 0.0 && prune_threshold < 1.0))
    throw Error(ErrorKind::Config, "ESA prune_threshold must lie in [0, 1)");
}

std::vector<std::vector<std::pair<std::uint32_t, double>>> esa_weights(
    const SparseMatrix& counts) {
  if (counts.cols() < 2)
    throw Error(ErrorKind::Config, "ESA needs at least two documents (idf is degenerate)");
  const double n_docs = static_cast<double>(counts.cols());
  std::vector<std::vector<std::pair<std::uint32_t, double>>> out(counts.rows());
  for (std::size_t t = 0; t < counts.rows(); ++t) {
    auto& row = out[t];
    counts.for_each_in_row(t, [&](std::uint32_t d, double tf) { row.emplace_back(d, tf); });
    const double idf = std::log(n_docs / static_cast<double>(row.size()));
    for (auto& [d, w] : row) w = std::log1p(w) * idf;
    std::erase_if(row, [](const auto& e) { return !(e.second > 0.0); });
    std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first < b.first;
    });
  }
  return out;
}

std::size_t esa_prune_length(std::span<const double> w, std::uint32_t window,
                             double threshold, std::uint32_t max_concepts) {
  std::size_t length = w.size();
  if (!w.empty()) {
    const double cutoff = threshold * w[0];
    for (std::size_t i = window; i < w.size(); ++i) {
      if (w[i - window] - w[i] < cutoff) {
        length = i;
        break;
      }
    }
  }
  return std::min<std::size_t>(length, max_concepts);
}

EsaModel train_esa(const SparseMatrix& counts, const Vocabulary& vocab,
                   const EsaConfig& config) {
  config.validate();
  if (vocab.empty()) throw Error(ErrorKind::EmptyInput, "vocabulary is empty");
  if (counts.rows() != vocab.size())
    throw Error(ErrorKind::Config, "term-document matrix rows do not match vocabulary");
  const auto weights = esa_weights(counts);

  std::vector<std::vector<Concept>> concepts(vocab.size());
  std::vector<double> sorted;
  for (std::size_t t = 0; t < weights.size(); ++t) {
    sorted.clear();
    for (const auto& [d, w] : weights[t]) sorted.push_back(w);
    const std::size_t keep = esa_prune_length(sorted, config.prune_window,
                                              config.prune_threshold, config.max_concepts);
    concepts[t].reserve(keep);
    for (std::size_t i = 0; i < keep; ++i)
      concepts[t].push_back({weights[t][i].first, static_cast<float>(weights[t][i].second)});
  }
  return EsaModel(config, vocab, std::move(concepts),
                  static_cast<std::uint32_t>(counts.cols()));
}

EsaModel::EsaModel(EsaConfig config, Vocabulary vocab,
                   std::vector<std::vector<Concept>> concepts, std::uint32_t n_concepts)
    : config_(config),
      vocab_(std::move(vocab)),
      concepts_(std::move(concepts)),
      n_concepts_(n_concepts) {
  config_.validate();
  if (concepts_.size() != vocab_.size())
    throw Error(ErrorKind::Config, "ESA concept index does not match vocabulary");
  for (const auto& row : concepts_) {
    if (row.size() > config_.max_concepts)
      throw Error(ErrorKind::Config, "ESA concept vector exceeds max_concepts");
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (!(row[i].weight > 0.0f) || row[i].id >= n_concepts_ ||
          (i > 0 && row[i].weight > row[i - 1].weight))
        throw Error(ErrorKind::Config, "ESA concept vector is not sorted/positive/in range");
    }
  }
}

std::span<const Concept> EsaModel::concepts(TermId id) const { return concepts_.at(id); }

bool EsaModel::trained(TermId id) const {
  return id < concepts_.size() && !concepts_[id].empty();
}

std::optional<TermVector> EsaModel::vector(TermId id) const {
  if (!trained(id)) return std::nullopt;
  std::vector<Concept> row = concepts_[id];
  std::sort(row.begin(), row.end(), [](const Concept& a, const Concept& b) { return a.id < b.id; });
  SparseVector v;
  v.dimension = n_concepts_;
  double sq = 0.0;
  for (const auto& c : row) sq += static_cast<double>(c.weight) * c.weight;
  const double norm = std::sqrt(sq);
  for (const auto& c : row) {
    v.indices.push_back(c.id);
    v.values.push_back(c.weight / norm);
  }
  return v;
}

std::optional<SparseVector> esa_vector(const EsaModel& model, std::string_view term) {
  auto v = model.vector(term);
  if (!v) return std::nullopt;
  return std::get<SparseVector>(std::move(*v));
}

}  // namespace dinfra
