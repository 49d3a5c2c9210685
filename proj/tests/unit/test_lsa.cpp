#include <cmath>

#include "doctest.h"

#include "dinfra/error.hpp"
#include "dinfra/lsa.hpp"
#include "gen.hpp"
#include "oracles.hpp"

using namespace dinfra;

namespace {

oracle::Dense to_rows(const Eigen::MatrixXd& m) {
  oracle::Dense out(static_cast<std::size_t>(m.rows()),
                    std::vector<double>(static_cast<std::size_t>(m.cols())));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m(i, j);
  return out;
}

double reconstruction_error(const SparseMatrix& m, const SvdResult& s) {
  const Eigen::MatrixXd approx = s.u * s.singular_values.asDiagonal() * s.v.transpose();
  return (m.to_dense() - approx).norm();
}

double orthonormality_defect(const Eigen::MatrixXd& u) {
  return (u.transpose() * u - Eigen::MatrixXd::Identity(u.cols(), u.cols())).cwiseAbs().maxCoeff();
}

Vocabulary vocab_of(const std::vector<std::string>& docs) {
  VocabularyOptions o;
  o.min_count = 1;
  return build_vocabulary(CorpusSource::from_documents(docs, "en"), o);
}

}  // namespace

TEST_CASE("weighting names") {
  CHECK(parse_weighting("log-entropy") == Weighting::LogEntropy);
  CHECK(parse_weighting("tf-idf") == Weighting::TfIdf);
  CHECK(parse_weighting("raw") == Weighting::Raw);
  CHECK_THROWS_AS(parse_weighting("bm25"), Error);
}

TEST_CASE("log-entropy edge cases") {
  // Row 0 has equal tf in every document; row 1 lives in one document.
  const auto counts = gen::to_sparse({{2, 2, 2}, {0, 3, 0}});
  const auto w = weight_matrix(counts, Weighting::LogEntropy);
  for (std::size_t d = 0; d < 3; ++d) CHECK(w.coeff(0, d) == 0.0);
  CHECK(w.coeff(1, 1) == doctest::Approx(std::log(4.0)).epsilon(1e-15));
  CHECK(w.nnz() == 1);
}

TEST_CASE("log-entropy on a 4x3 hand table") {
  const oracle::Dense counts = {{1, 1, 0}, {2, 0, 0}, {1, 2, 1}, {0, 0, 4}};
  const auto w = weight_matrix(gen::to_sparse(counts), Weighting::LogEntropy);
  // Hand computation, n = 3 documents.
  const double l3 = std::log(3.0);
  const double g0 = 1.0 - std::log(2.0) / l3;                        // p = (1/2, 1/2)
  const double h2 = -(0.25 * std::log(0.25) * 2 + 0.5 * std::log(0.5));  // p = (1/4, 1/2, 1/4)
  const double g2 = 1.0 - h2 / l3;
  const oracle::Dense hand = {{std::log(2.0) * g0, std::log(2.0) * g0, 0},
                              {std::log(3.0), 0, 0},
                              {std::log(2.0) * g2, std::log(3.0) * g2, std::log(2.0) * g2},
                              {0, 0, std::log(5.0)}};
  const auto table = oracle::log_entropy(counts);
  for (std::size_t t = 0; t < 4; ++t)
    for (std::size_t d = 0; d < 3; ++d) {
      CHECK(w.coeff(t, d) == doctest::Approx(hand[t][d]).epsilon(1e-12));
      CHECK(table[t][d] == doctest::Approx(hand[t][d]).epsilon(1e-12));
    }
}

TEST_CASE("tf-idf and raw weighting") {
  const oracle::Dense counts = {{1, 1, 0, 0}, {3, 0, 0, 0}, {1, 1, 1, 1}};
  const auto w = weight_matrix(gen::to_sparse(counts), Weighting::TfIdf);
  const auto table = oracle::tf_idf(counts);
  CHECK(w.coeff(0, 0) == doctest::Approx(std::log(2.0) * std::log(2.0)));
  CHECK(w.coeff(1, 0) == doctest::Approx(std::log(4.0) * std::log(4.0)));
  CHECK(w.coeff(2, 0) == 0.0);
  for (std::size_t t = 0; t < 3; ++t)
    for (std::size_t d = 0; d < 4; ++d)
      CHECK(w.coeff(t, d) == doctest::Approx(table[t][d]).epsilon(1e-12));
  const auto counts_sparse = gen::to_sparse(counts);
  CHECK(weight_matrix(counts_sparse, Weighting::Raw) == counts_sparse);
}

TEST_CASE("weighting requires non-negative integer counts") {
  CHECK_THROWS_AS(weight_matrix(gen::to_sparse({{1.5, 0}}), Weighting::Raw), Error);
  CHECK_THROWS_AS(weight_matrix(gen::to_sparse({{-1, 0}}), Weighting::TfIdf), Error);
}

TEST_CASE("SVD of a diagonal matrix") {
  const auto m = gen::to_sparse({{3, 0, 0}, {0, 2, 0}, {0, 0, 1}});
  const auto s = truncated_svd(m, 2, {});
  REQUIRE(s.singular_values.size() == 2);
  CHECK(s.singular_values(0) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(s.singular_values(1) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(reconstruction_error(m, s) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("SVD argument checks") {
  const auto m = gen::to_sparse({{1, 0}, {0, 1}, {1, 1}});
  CHECK_THROWS_AS(truncated_svd(m, 0, {}), Error);
  CHECK_THROWS_AS(truncated_svd(m, 3, {}), Error);
  CHECK_THROWS_AS(truncated_svd(SparseMatrix(3, 3), 1, {}), Error);
  LsaConfig bad;
  bad.oversampling = -1;
  CHECK_THROWS_AS(truncated_svd(m, 1, bad), Error);
}

TEST_CASE("SVD matches the dense Jacobi reference on random sparse matrices") {
  gen::Gen g(31);
  for (int trial = 0; trial < 20; ++trial) {
    const auto dense = g.sparse_real(30, 20, 0.25);
    const auto m = gen::to_sparse(dense);
    const auto ref = oracle::singular_values(dense);
    LsaConfig c;
    c.svd_seed = static_cast<std::uint64_t>(trial);
    const auto s = truncated_svd(m, 5, c);
    for (int i = 0; i < 5; ++i)
      CHECK(std::abs(s.singular_values(i) - ref[static_cast<std::size_t>(i)]) <=
            1e-6 * ref[static_cast<std::size_t>(i)]);
    CHECK(orthonormality_defect(s.u) <= 1e-6);
    CHECK(orthonormality_defect(s.v) <= 1e-6);
    CHECK(reconstruction_error(m, s) ==
          doctest::Approx(oracle::optimal_rank_k_error(dense, 5)).epsilon(1e-6));
  }
}

TEST_CASE("SVD exact recovery at k = rank") {
  gen::Gen g(32);
  for (int trial = 0; trial < 10; ++trial) {
    // Low-rank product of random factors.
    const std::size_t rows = 12, cols = 9, rank = static_cast<std::size_t>(g.integer(1, 6));
    oracle::Dense a(rows, std::vector<double>(cols, 0.0));
    const auto left = g.sparse_real(rows, rank, 0.8), right = g.sparse_real(rank, cols, 0.8);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j)
        for (std::size_t r = 0; r < rank; ++r) a[i][j] += left[i][r] * right[r][j];
    const auto r = oracle::numerical_rank(a);
    const auto m = gen::to_sparse(a);
    const auto s = truncated_svd(m, static_cast<std::uint32_t>(r), {});
    CHECK(reconstruction_error(m, s) <= 1e-6 * m.frobenius_norm());
  }
}

TEST_CASE("SVD reconstruction error is non-increasing in k") {
  gen::Gen g(33);
  const auto dense = g.sparse_real(25, 18, 0.3);
  const auto m = gen::to_sparse(dense);
  double previous = m.frobenius_norm();
  for (std::uint32_t k = 1; k <= 18; ++k) {
    const double e = reconstruction_error(m, truncated_svd(m, k, {}));
    CHECK(e <= previous + 1e-9 * m.frobenius_norm());
    previous = e;
  }
  CHECK(previous <= 1e-9 * m.frobenius_norm());
}

TEST_CASE("SVD is deterministic and follows the sign convention") {
  gen::Gen g(34);
  const auto m = gen::to_sparse(g.sparse_real(40, 40, 0.1));
  const auto a = truncated_svd(m, 6, {});
  const auto b = truncated_svd(m, 6, {});
  CHECK(a.u == b.u);
  CHECK(a.singular_values == b.singular_values);
  for (Eigen::Index j = 0; j < a.u.cols(); ++j) {
    Eigen::Index arg = 0;
    a.u.col(j).cwiseAbs().maxCoeff(&arg);
    CHECK(a.u(arg, j) > 0.0);
  }
  for (Eigen::Index j = 1; j < a.singular_values.size(); ++j)
    CHECK(a.singular_values(j - 1) >= a.singular_values(j));
}

TEST_CASE("SVD on matrices wider than tall") {
  gen::Gen g(35);
  const auto dense = g.sparse_real(8, 30, 0.3);
  const auto ref = oracle::singular_values(dense);
  const auto s = truncated_svd(gen::to_sparse(dense), 3, {});
  for (int i = 0; i < 3; ++i)
    CHECK(s.singular_values(i) == doctest::Approx(ref[static_cast<std::size_t>(i)]).epsilon(1e-6));
}

TEST_CASE("LSA separates disjoint document families") {
  std::vector<std::string> docs;
  for (int i = 0; i < 5; ++i) {
    docs.push_back("apple banana cherry apple");
    docs.push_back("river stone cloud cloud");
  }
  const auto v = vocab_of(docs);
  LsaConfig c;
  c.k = 2;
  c.weighting = Weighting::Raw;
  const auto model = train_lsa(count_term_document(CorpusSource::from_documents(docs, "en"), v),
                               v, c);
  auto cos = [&](const char* a, const char* b) {
    return oracle::cosine(*lsa_vector(model, a), *lsa_vector(model, b));
  };
  CHECK(cos("apple", "banana") == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(cos("stone", "cloud") == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(cos("apple", "stone")) <= 1e-9);
}

TEST_CASE("LSA at full rank preserves cosines of weighted rows") {
  const std::vector<std::string> docs = {"a b c", "b c d d", "a d e", "e e a b", "c e"};
  const auto v = vocab_of(docs);
  const auto counts = count_term_document(CorpusSource::from_documents(docs, "en"), v);
  LsaConfig c;
  c.k = 5;
  const auto model = train_lsa(counts, v, c);
  const auto weighted = to_rows(weight_matrix(counts, c.weighting).to_dense());
  for (TermId i = 0; i < v.size(); ++i) {
    for (TermId j = 0; j < v.size(); ++j) {
      const auto vi = lsa_vector(model, v.term(i));
      const auto vj = lsa_vector(model, v.term(j));
      if (!vi || !vj) continue;
      CHECK(oracle::cosine(*vi, *vj) ==
            doctest::Approx(oracle::cosine(weighted[i], weighted[j])).epsilon(1e-6));
    }
  }
}

TEST_CASE("LSA vectors, singular values and errors") {
  const std::vector<std::string> docs = {"a b c", "b c d d", "a d e", "e e a b", "c e f"};
  const auto v = vocab_of(docs);
  const auto counts = count_term_document(CorpusSource::from_documents(docs, "en"), v);
  LsaConfig c;
  c.k = 3;
  const auto model = train_lsa(counts, v, c);
  CHECK(model.dimension() == 3);
  const auto sv = model.singular_values();
  CHECK(sv[0] >= sv[1]);
  CHECK(sv[1] >= sv[2]);
  CHECK(sv[2] >= 0.0);
  const auto vec = lsa_vector(model, "a");
  REQUIRE(vec);
  CHECK(vec->size() == 3);
  CHECK(oracle::norm(*vec) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_FALSE(lsa_vector(model, "zzzqqq"));

  // Stored row is the normalized row of U_k * Sigma_k.
  const auto svd = truncated_svd(weight_matrix(counts, c.weighting), 3, c);
  const auto id = *v.id("a");
  std::vector<double> row(3);
  for (int i = 0; i < 3; ++i) row[static_cast<std::size_t>(i)] = svd.u(id, i) * svd.singular_values(i);
  CHECK(oracle::cosine(*vec, row) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(model.raw_norms()[id] == doctest::Approx(oracle::norm(row)).epsilon(1e-9));

  CHECK_THROWS_AS(train_lsa(counts, Vocabulary(), c), Error);
  c.k = 50;
  CHECK_THROWS_AS(train_lsa(counts, v, c), Error);
}

TEST_CASE("LSA marks terms removed by weighting as untrained") {
  // "common" appears once in every document: log-entropy global weight 0.
  const std::vector<std::string> docs = {"common a", "common b", "common c a"};
  const auto v = vocab_of(docs);
  LsaConfig c;
  c.k = 2;
  const auto model =
      train_lsa(count_term_document(CorpusSource::from_documents(docs, "en"), v), v, c);
  CHECK_FALSE(model.trained(*v.id("common")));
  CHECK_FALSE(lsa_vector(model, "common"));
  CHECK(lsa_vector(model, "a"));
}
