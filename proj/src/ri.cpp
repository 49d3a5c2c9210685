#include "dinfra/ri.hpp"

#include <algorithm>
#include <cmath>

#include "dinfra/error.hpp"
#include "dinfra/hash.hpp"

namespace dinfra {

void RiConfig::validate() const {
  if (dimension < 2) throw Error(ErrorKind::Config, "RI dimension must be >= 2");
  if (nnz == 0 || nnz > dimension)
    throw Error(ErrorKind::Config, "RI nnz must satisfy 0 < nnz <= dimension");
  if (nnz % 2 != 0) throw Error(ErrorKind::Config, "RI nnz must be even");
  if (window_size < 1) throw Error(ErrorKind::Config, "RI window size must be >= 1");
}

IndexVector index_vector(std::string_view term, const RiConfig& config) {
  config.validate();
  SplitMix64 rng(mix64(fnv1a64(term) ^ mix64(config.seed)));
  IndexVector out;
  out.positions.reserve(config.nnz);
  while (out.positions.size() < config.nnz) {
    const auto p = static_cast<std::uint32_t>(rng.below(config.dimension));
    if (std::find(out.positions.begin(), out.positions.end(), p) == out.positions.end())
      out.positions.push_back(p);
  }
  out.signs.assign(config.nnz, -1);
  std::fill(out.signs.begin(), out.signs.begin() + config.nnz / 2, std::int8_t{1});
  return out;
}

namespace {

void check_inputs(const CooccurrenceCounts& counts, const Vocabulary& vocab,
                  const RiConfig& config) {
  config.validate();
  if (vocab.empty()) throw Error(ErrorKind::EmptyInput, "vocabulary is empty");
  if (counts.vocab_fingerprint() != vocab.fingerprint() || counts.n_terms() != vocab.size())
    throw Error(ErrorKind::Config, "co-occurrence counts were built for a different vocabulary");
  if (counts.window_size() != config.window_size)
    throw Error(ErrorKind::Config,
                "co-occurrence window " + std::to_string(counts.window_size()) +
                    " does not match RI window " + std::to_string(config.window_size));
}

std::vector<IndexVector> all_index_vectors(const Vocabulary& vocab, const RiConfig& config) {
  std::vector<IndexVector> out;
  out.reserve(vocab.size());
  for (const auto& e : vocab.entries()) out.push_back(index_vector(e.term, config));
  return out;
}

// Accumulates one term's integer context vector into `row` (cleared first).
void accumulate_row(const CooccurrenceCounts& counts, TermId target,
                    const std::vector<IndexVector>& index, std::span<std::int64_t> row) {
  std::fill(row.begin(), row.end(), 0);
  for (const auto& cell : counts.row(target)) {
    const auto& iv = index[cell.context];
    const auto weight = static_cast<std::int64_t>(cell.count);
    for (std::size_t k = 0; k < iv.positions.size(); ++k)
      row[iv.positions[k]] += weight * iv.signs[k];
  }
}

}  // namespace

std::vector<std::int64_t> accumulate_context_vectors(const CooccurrenceCounts& counts,
                                                     const Vocabulary& vocab,
                                                     const RiConfig& config) {
  check_inputs(counts, vocab, config);
  const auto index = all_index_vectors(vocab, config);
  const std::size_t dim = config.dimension;
  std::vector<std::int64_t> out(vocab.size() * dim, 0);
  for (TermId t = 0; t < vocab.size(); ++t)
    accumulate_row(counts, t, index, std::span(out).subspan(t * dim, dim));
  return out;
}

RiModel train_ri(const CooccurrenceCounts& counts, const Vocabulary& vocab,
                 const RiConfig& config) {
  check_inputs(counts, vocab, config);
  const auto index = all_index_vectors(vocab, config);
  const std::size_t dim = config.dimension;
  std::vector<float> vectors(vocab.size() * dim, 0.0f);
  std::vector<double> norms(vocab.size(), 0.0);
  std::vector<std::int64_t> row(dim);
  for (TermId t = 0; t < vocab.size(); ++t) {
    accumulate_row(counts, t, index, row);
    double sq = 0.0;
    for (auto x : row) sq += static_cast<double>(x) * static_cast<double>(x);
    const double norm = std::sqrt(sq);
    norms[t] = norm;
    if (norm == 0.0) continue;
    float* out = vectors.data() + t * dim;
    for (std::size_t i = 0; i < dim; ++i)
      out[i] = static_cast<float>(static_cast<double>(row[i]) / norm);
  }
  return RiModel(config, vocab, std::move(vectors), std::move(norms));
}

RiModel::RiModel(RiConfig config, Vocabulary vocab, std::vector<float> vectors,
                 std::vector<double> raw_norms)
    : config_(config),
      vocab_(std::move(vocab)),
      vectors_(std::move(vectors)),
      raw_norms_(std::move(raw_norms)) {
  config_.validate();
  if (vectors_.size() != vocab_.size() * config_.dimension || raw_norms_.size() != vocab_.size())
    throw Error(ErrorKind::Config, "RI model shape does not match vocabulary");
  for (float x : vectors_)
    if (!std::isfinite(x)) throw Error(ErrorKind::Config, "RI vector entry is not finite");
}

std::span<const float> RiModel::row(TermId id) const {
  return std::span(vectors_).subspan(static_cast<std::size_t>(id) * config_.dimension,
                                     config_.dimension);
}

bool RiModel::trained(TermId id) const {
  return id < vocab_.size() && raw_norms_[id] > 0.0;
}

namespace {

DenseVector normalized_copy(std::span<const float> row) {
  DenseVector v(row.begin(), row.end());
  double sq = 0.0;
  for (double x : v) sq += x * x;
  const double norm = std::sqrt(sq);
  for (double& x : v) x /= norm;
  return v;
}

}  // namespace

std::optional<TermVector> RiModel::vector(TermId id) const {
  if (!trained(id)) return std::nullopt;
  return normalized_copy(row(id));
}

std::optional<DenseVector> ri_vector(const RiModel& model, std::string_view term) {
  auto v = model.vector(term);
  if (!v) return std::nullopt;
  return std::get<DenseVector>(std::move(*v));
}

}  // namespace dinfra
