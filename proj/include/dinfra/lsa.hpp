#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "dinfra/corpus.hpp"
#include "dinfra/model.hpp"
#include "dinfra/sparse_matrix.hpp"

namespace dinfra {

enum class Weighting { LogEntropy, TfIdf, Raw };

std::string_view to_string(Weighting w) noexcept;
/// "log-entropy" | "tf-idf" | "raw". Throws Error(Config) otherwise.
Weighting parse_weighting(std::string_view text);

struct LsaConfig {
  std::uint32_t k = 300;
  Weighting weighting = Weighting::LogEntropy;
  std::uint64_t svd_seed = 7;
  int power_iterations = 4;
  int oversampling = 10;
  /// Extra subspace iterations continue until the top-k singular values move
  /// by less than this relative amount (0 disables the check).
  double tolerance = 1e-10;
  int max_power_iterations = 100;
};

/// log-entropy: log(1+tf) * (1 - H(t)/log n_docs); tf-idf: log(1+tf) *
/// log(n_docs/df); raw: identity. Entries that weigh to zero are dropped.
SparseMatrix weight_matrix(const SparseMatrix& counts, Weighting scheme);

struct SvdResult {
  Eigen::MatrixXd u;                 // rows x k, orthonormal columns
  Eigen::VectorXd singular_values;   // k, descending, non-negative
  Eigen::MatrixXd v;                 // cols x k
};

/// Randomized truncated SVD (Gaussian range finder, power iterations with
/// re-orthonormalization). Deterministic for a given svd_seed. The largest
/// magnitude entry of every left singular vector is made positive.
SvdResult truncated_svd(const SparseMatrix& m, std::uint32_t k,
                        const LsaConfig& config);

class LsaModel final : public DsmModel {
 public:
  LsaModel(LsaConfig config, Vocabulary vocab, std::vector<float> vectors,
           std::vector<double> raw_norms, std::vector<double> singular_values);

  ModelKind kind() const noexcept override { return ModelKind::LSA; }
  const Vocabulary& vocabulary() const noexcept override { return vocab_; }
  using DsmModel::vector;
  std::optional<TermVector> vector(TermId id) const override;
  bool trained(TermId id) const override;

  const LsaConfig& config() const noexcept { return config_; }
  std::uint32_t dimension() const noexcept { return config_.k; }
  std::span<const float> stored_vectors() const noexcept { return vectors_; }
  std::span<const double> raw_norms() const noexcept { return raw_norms_; }
  std::span<const double> singular_values() const noexcept {
    return singular_values_;
  }

 private:
  LsaConfig config_;
  Vocabulary vocab_;
  std::vector<float> vectors_;
  std::vector<double> raw_norms_;
  std::vector<double> singular_values_;
};

/// Term vectors are the rows of U_k * Sigma_k of the weighted matrix, stored
/// L2-normalized.
LsaModel train_lsa(const SparseMatrix& counts, const Vocabulary& vocab,
                   const LsaConfig& config);

std::optional<DenseVector> lsa_vector(const LsaModel& model, std::string_view term);

}  // namespace dinfra
