#include <cmath>
#include <limits>

#include "doctest.h"

#include "dinfra/error.hpp"
#include "dinfra/sparse_matrix.hpp"
#include "gen.hpp"

using namespace dinfra;

TEST_CASE("from_triplets sums duplicates and drops zeros") {
  const auto m = SparseMatrix::from_triplets(2, 3, {{0, 1, 2.0}, {0, 1, 3.0}, {1, 2, 1.0}, {1, 0, 0.0}, {1, 2, -1.0}});
  CHECK(m.rows() == 2);
  CHECK(m.cols() == 3);
  CHECK(m.nnz() == 1);
  CHECK(m.coeff(0, 1) == 5.0);
  CHECK(m.coeff(1, 2) == 0.0);
  CHECK(m.triplets() == std::vector<SparseMatrix::Triplet>{{0, 1, 5.0}});
}

TEST_CASE("from_triplets validates input") {
  CHECK_THROWS_AS(SparseMatrix::from_triplets(2, 2, {{2, 0, 1.0}}), Error);
  CHECK_THROWS_AS(SparseMatrix::from_triplets(2, 2, {{0, 2, 1.0}}), Error);
  CHECK_THROWS_AS(SparseMatrix::from_triplets(2, 2, {{0, 0, std::nan("")}}), Error);
  CHECK_THROWS_AS(
      SparseMatrix::from_triplets(2, 2, {{0, 0, std::numeric_limits<double>::infinity()}}), Error);
}

TEST_CASE("dense round trip and row iteration") {
  gen::Gen g(71);
  for (int trial = 0; trial < 50; ++trial) {
    const auto rows = static_cast<std::size_t>(g.integer(1, 12));
    const auto cols = static_cast<std::size_t>(g.integer(1, 12));
    const auto dense = g.sparse_real(rows, cols, 0.3);
    const auto m = gen::to_sparse(dense);
    CHECK(SparseMatrix::from_dense(m.to_dense()) == m);
    const Eigen::MatrixXd back = m.to_dense();
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c)
        CHECK(back(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) == dense[r][c]);
    std::size_t nnz = 0;
    double sq = 0.0;
    for (std::size_t r = 0; r < rows; ++r) {
      std::uint32_t last = 0;
      bool first = true;
      m.for_each_in_row(r, [&](std::uint32_t c, double v) {
        CHECK(v == dense[r][c]);
        CHECK(v != 0.0);
        if (!first) CHECK(c > last);
        first = false;
        last = c;
        ++nnz;
        sq += v * v;
      });
    }
    CHECK(nnz == m.nnz());
    CHECK(m.frobenius_norm() == doctest::Approx(std::sqrt(sq)).epsilon(1e-12));
  }
}
