#pragma once

#include <cstdint>
#include <tuple>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace dinfra {

/// Rows are terms, columns are documents (or concepts). No duplicate
/// coordinates and no explicitly stored zeros; all values finite.
class SparseMatrix {
 public:
  using Storage = Eigen::SparseMatrix<double, Eigen::RowMajor, std::int64_t>;
  using Triplet = std::tuple<std::uint32_t, std::uint32_t, double>;

  SparseMatrix() = default;
  SparseMatrix(std::size_t n_rows, std::size_t n_cols);
  /// Duplicate coordinates are summed, resulting zeros dropped. Throws
  /// Error(Config) on out-of-range coordinates or non-finite values.
  static SparseMatrix from_triplets(std::size_t n_rows, std::size_t n_cols,
                                    const std::vector<Triplet>& triplets);
  static SparseMatrix from_dense(const Eigen::MatrixXd& dense);

  std::size_t rows() const noexcept { return static_cast<std::size_t>(m_.rows()); }
  std::size_t cols() const noexcept { return static_cast<std::size_t>(m_.cols()); }
  std::size_t nnz() const noexcept { return static_cast<std::size_t>(m_.nonZeros()); }
  double coeff(std::size_t row, std::size_t col) const;

  /// Visits the stored entries of one row in ascending column order.
  template <typename Fn>
  void for_each_in_row(std::size_t row, Fn&& fn) const {
    for (Storage::InnerIterator it(m_, static_cast<std::int64_t>(row)); it; ++it)
      fn(static_cast<std::uint32_t>(it.col()), it.value());
  }

  /// Row-major (row, col, value) listing; deterministic.
  std::vector<Triplet> triplets() const;
  Eigen::MatrixXd to_dense() const;
  double frobenius_norm() const { return m_.norm(); }

  const Storage& storage() const noexcept { return m_; }

  friend bool operator==(const SparseMatrix& a, const SparseMatrix& b);

 private:
  Storage m_;
};

}  // namespace dinfra
