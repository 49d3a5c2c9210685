#include "dinfra/lsa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "dinfra/error.hpp"
#include "dinfra/hash.hpp"

namespace dinfra {

std::string_view to_string(Weighting w) noexcept {
  switch (w) {
    case Weighting::LogEntropy: return "log-entropy";
    case Weighting::TfIdf: return "tf-idf";
    case Weighting::Raw: return "raw";
  }
  return "?";
}

Weighting parse_weighting(std::string_view text) {
  if (text == "log-entropy") return Weighting::LogEntropy;
  if (text == "tf-idf") return Weighting::TfIdf;
  if (text == "raw") return Weighting::Raw;
  throw Error(ErrorKind::Config, "unknown weighting scheme: '" + std::string(text) + "'");
}

SparseMatrix weight_matrix(const SparseMatrix& counts, Weighting scheme) {
  for (const auto& [r, c, v] : counts.triplets())
    if (v < 0.0 || v != std::floor(v))
      throw Error(ErrorKind::Config, "count matrix must hold non-negative integers");
  if (scheme == Weighting::Raw) return counts;

  const double n_docs = static_cast<double>(counts.cols());
  std::vector<SparseMatrix::Triplet> out;
  out.reserve(counts.nnz());
  for (std::size_t t = 0; t < counts.rows(); ++t) {
    double global = 1.0;
    if (scheme == Weighting::LogEntropy) {
      double gf = 0.0;
      counts.for_each_in_row(t, [&](std::uint32_t, double tf) { gf += tf; });
      if (gf == 0.0) continue;
      double entropy = 0.0;
      counts.for_each_in_row(t, [&](std::uint32_t, double tf) {
        const double p = tf / gf;
        entropy -= p * std::log(p);
      });
      // A single document leaves log(n_docs) = 0; keep the local weight.
      if (n_docs > 1.0) global = 1.0 - entropy / std::log(n_docs);
      if (std::abs(global) < 1e-12) global = 0.0;
    } else {
      std::size_t df = 0;
      counts.for_each_in_row(t, [&](std::uint32_t, double) { ++df; });
      if (df == 0) continue;
      global = std::log(n_docs / static_cast<double>(df));
    }
    if (global == 0.0) continue;
    counts.for_each_in_row(t, [&](std::uint32_t d, double tf) {
      out.emplace_back(static_cast<std::uint32_t>(t), d, std::log1p(tf) * global);
    });
  }
  return SparseMatrix::from_triplets(counts.rows(), counts.cols(), out);
}

namespace {

Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& y) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(y);
  return qr.householderQ() * Eigen::MatrixXd::Identity(y.rows(), y.cols());
}

struct Projection {
  Eigen::MatrixXd left;    // l x l, left singular vectors of B = Q^T A
  Eigen::VectorXd values;  // l
  Eigen::MatrixXd right;   // cols x l
};

// SVD of the short-wide B = Q^T A through a thin QR of B^T, so the dense
// decomposition only ever sees an l x l matrix.
Projection project(const SparseMatrix::Storage& a, const Eigen::MatrixXd& q) {
  const Eigen::MatrixXd bt = a.transpose() * q;  // cols x l
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(bt);
  const Eigen::Index l = bt.cols();
  const Eigen::MatrixXd q2 = qr.householderQ() * Eigen::MatrixXd::Identity(bt.rows(), l);
  const Eigen::MatrixXd r =
      qr.matrixQR().topRows(l).triangularView<Eigen::Upper>();
  // B^T = Q2 R  =>  B = R^T Q2^T; SVD R = Ur S Vr^T  =>  B = Vr S (Q2 Ur)^T
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return {svd.matrixV(), svd.singularValues(), q2 * svd.matrixU()};
}

}  // namespace

SvdResult truncated_svd(const SparseMatrix& m, std::uint32_t k, const LsaConfig& config) {
  if (m.nnz() == 0) throw Error(ErrorKind::EmptyInput, "cannot factorize an all-zero matrix");
  const std::size_t n_min = std::min(m.rows(), m.cols());
  if (k < 1 || k > n_min)
    throw Error(ErrorKind::Config, "SVD rank k=" + std::to_string(k) +
                                       " must lie in [1, " + std::to_string(n_min) + "]");
  if (config.power_iterations < 0 || config.oversampling < 0)
    throw Error(ErrorKind::Config, "power iterations and oversampling must be >= 0");

  const auto& a = m.storage();
  auto width = std::min<std::size_t>(k + static_cast<std::size_t>(config.oversampling), n_min);
  // A sketch this wide costs as much as the exact range; take all of it.
  if (2 * width >= n_min) width = n_min;
  const auto l = static_cast<Eigen::Index>(width);

  SplitMix64 rng(config.svd_seed);
  Eigen::MatrixXd omega(a.cols(), l);
  for (Eigen::Index j = 0; j < l; ++j)
    for (Eigen::Index i = 0; i < a.cols(); ++i) omega(i, j) = rng.gaussian();

  Eigen::MatrixXd q = orthonormalize(a * omega);
  auto power_step = [&] {
    const Eigen::MatrixXd z = orthonormalize(a.transpose() * q);
    q = orthonormalize(a * z);
  };
  for (int i = 0; i < config.power_iterations; ++i) power_step();

  Projection p = project(a, q);
  if (config.tolerance > 0.0 && width < n_min) {
    for (int i = 0; i < config.max_power_iterations; ++i) {
      power_step();
      Projection next = project(a, q);
      const double scale = std::max(next.values(0), std::numeric_limits<double>::min());
      const double change =
          (next.values.head(k) - p.values.head(k)).cwiseAbs().maxCoeff() / scale;
      p = std::move(next);
      if (change < config.tolerance) break;
    }
  }

  SvdResult out;
  out.u = q * p.left.leftCols(k);
  out.singular_values = p.values.head(k);
  out.v = p.right.leftCols(k);
  for (Eigen::Index j = 0; j < out.u.cols(); ++j) {
    Eigen::Index arg = 0;
    out.u.col(j).cwiseAbs().maxCoeff(&arg);
    if (out.u(arg, j) < 0.0) {
      out.u.col(j) *= -1.0;
      out.v.col(j) *= -1.0;
    }
  }
  return out;
}

LsaModel train_lsa(const SparseMatrix& counts, const Vocabulary& vocab,
                   const LsaConfig& config) {
  if (vocab.empty()) throw Error(ErrorKind::EmptyInput, "vocabulary is empty");
  if (counts.rows() != vocab.size())
    throw Error(ErrorKind::Config, "term-document matrix rows do not match vocabulary");
  const SparseMatrix weighted = weight_matrix(counts, config.weighting);
  const SvdResult svd = truncated_svd(weighted, config.k, config);

  const std::size_t k = config.k;
  std::vector<float> vectors(vocab.size() * k, 0.0f);
  std::vector<double> norms(vocab.size(), 0.0);
  for (std::size_t t = 0; t < vocab.size(); ++t) {
    const Eigen::VectorXd row =
        svd.u.row(static_cast<Eigen::Index>(t)).transpose().cwiseProduct(svd.singular_values);
    const double norm = row.norm();
    // Rows of terms removed by weighting are numerically zero, not exactly.
    if (weighted.storage().row(static_cast<std::int64_t>(t)).nonZeros() == 0 || norm == 0.0)
      continue;
    norms[t] = norm;
    for (std::size_t i = 0; i < k; ++i)
      vectors[t * k + i] = static_cast<float>(row(static_cast<Eigen::Index>(i)) / norm);
  }
  std::vector<double> sigma(svd.singular_values.data(),
                            svd.singular_values.data() + svd.singular_values.size());
  return LsaModel(config, vocab, std::move(vectors), std::move(norms), std::move(sigma));
}

LsaModel::LsaModel(LsaConfig config, Vocabulary vocab, std::vector<float> vectors,
                   std::vector<double> raw_norms, std::vector<double> singular_values)
    : config_(config),
      vocab_(std::move(vocab)),
      vectors_(std::move(vectors)),
      raw_norms_(std::move(raw_norms)),
      singular_values_(std::move(singular_values)) {
  if (vectors_.size() != vocab_.size() * config_.k || raw_norms_.size() != vocab_.size() ||
      singular_values_.size() != config_.k)
    throw Error(ErrorKind::Config, "LSA model shape does not match vocabulary");
}

bool LsaModel::trained(TermId id) const {
  return id < vocab_.size() && raw_norms_[id] > 0.0;
}

std::optional<TermVector> LsaModel::vector(TermId id) const {
  if (!trained(id)) return std::nullopt;
  const auto k = config_.k;
  DenseVector v(vectors_.begin() + static_cast<std::ptrdiff_t>(id) * k,
                vectors_.begin() + static_cast<std::ptrdiff_t>(id + 1) * k);
  double sq = 0.0;
  for (double x : v) sq += x * x;
  const double norm = std::sqrt(sq);
  for (double& x : v) x /= norm;
  return v;
}

std::optional<DenseVector> lsa_vector(const LsaModel& model, std::string_view term) {
  auto v = model.vector(term);
  if (!v) return std::nullopt;
  return std::get<DenseVector>(std::move(*v));
}

}  // namespace dinfra
