#include "dinfra/sparse_matrix.hpp"

#include <cmath>

#include "dinfra/error.hpp"

namespace dinfra {

SparseMatrix::SparseMatrix(std::size_t n_rows, std::size_t n_cols)
    : m_(static_cast<std::int64_t>(n_rows), static_cast<std::int64_t>(n_cols)) {}

SparseMatrix SparseMatrix::from_triplets(std::size_t n_rows, std::size_t n_cols,
                                         const std::vector<Triplet>& triplets) {
  std::vector<Eigen::Triplet<double, std::int64_t>> entries;
  entries.reserve(triplets.size());
  for (const auto& [r, c, v] : triplets) {
    if (r >= n_rows || c >= n_cols)
      throw Error(ErrorKind::Config, "sparse coordinate out of range");
    if (!std::isfinite(v))
      throw Error(ErrorKind::Config, "sparse value is not finite");
    entries.emplace_back(r, c, v);
  }
  SparseMatrix out(n_rows, n_cols);
  out.m_.setFromTriplets(entries.begin(), entries.end());
  out.m_.prune(0.0, 0.0);
  out.m_.makeCompressed();
  return out;
}

SparseMatrix SparseMatrix::from_dense(const Eigen::MatrixXd& dense) {
  std::vector<Triplet> triplets;
  for (Eigen::Index r = 0; r < dense.rows(); ++r)
    for (Eigen::Index c = 0; c < dense.cols(); ++c)
      if (dense(r, c) != 0.0)
        triplets.emplace_back(static_cast<std::uint32_t>(r),
                              static_cast<std::uint32_t>(c), dense(r, c));
  return from_triplets(static_cast<std::size_t>(dense.rows()),
                       static_cast<std::size_t>(dense.cols()), triplets);
}

double SparseMatrix::coeff(std::size_t row, std::size_t col) const {
  return m_.coeff(static_cast<std::int64_t>(row), static_cast<std::int64_t>(col));
}

std::vector<SparseMatrix::Triplet> SparseMatrix::triplets() const {
  std::vector<Triplet> out;
  out.reserve(nnz());
  for (std::int64_t r = 0; r < m_.outerSize(); ++r)
    for (Storage::InnerIterator it(m_, r); it; ++it)
      out.emplace_back(static_cast<std::uint32_t>(r),
                       static_cast<std::uint32_t>(it.col()), it.value());
  return out;
}

Eigen::MatrixXd SparseMatrix::to_dense() const { return Eigen::MatrixXd(m_); }

bool operator==(const SparseMatrix& a, const SparseMatrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && a.triplets() == b.triplets();
}

}  // namespace dinfra
