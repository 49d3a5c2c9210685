#pragma once

// Small hand-rolled property-test generators on top of std::mt19937_64.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "dinfra/sparse_matrix.hpp"
#include "oracles.hpp"

namespace gen {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double real(double lo = -1.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  std::int64_t integer(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_);
  }
  bool coin(double p = 0.5) { return real(0.0, 1.0) < p; }

  std::vector<double> vec(std::size_t n, double lo = -1.0, double hi = 1.0) {
    std::vector<double> v(n);
    for (auto& x : v) x = real(lo, hi);
    return v;
  }

  /// Distinct values, so no ties.
  std::vector<double> distinct_vec(std::size_t n) {
    std::vector<double> v;
    while (v.size() < n) {
      const double x = real(-100.0, 100.0);
      if (std::find(v.begin(), v.end(), x) == v.end()) v.push_back(x);
    }
    return v;
  }

  /// Vector with non-zero variance.
  std::vector<double> varied_vec(std::size_t n) {
    for (;;) {
      auto v = vec(n);
      if (std::any_of(v.begin(), v.end(), [&](double x) { return x != v[0]; })) return v;
    }
  }

  /// Non-negative integer counts with the given density.
  oracle::Dense count_matrix(std::size_t rows, std::size_t cols, double density, int max = 9) {
    oracle::Dense m(rows, std::vector<double>(cols, 0.0));
    for (auto& row : m)
      for (auto& x : row)
        if (coin(density)) x = static_cast<double>(integer(1, max));
    return m;
  }

  /// Real-valued sparse matrix with at least one non-zero.
  oracle::Dense sparse_real(std::size_t rows, std::size_t cols, double density) {
    oracle::Dense m(rows, std::vector<double>(cols, 0.0));
    bool any = false;
    for (auto& row : m)
      for (auto& x : row)
        if (coin(density)) {
          x = real(-5.0, 5.0);
          any = true;
        }
    if (!any) m[0][0] = 1.0;
    return m;
  }

  /// Lowercase ASCII word of 3..8 letters.
  std::string word() {
    std::string w;
    const auto len = integer(3, 8);
    for (std::int64_t i = 0; i < len; ++i) w.push_back(static_cast<char>('a' + integer(0, 25)));
    return w;
  }

  std::vector<std::string> words(std::size_t n) {
    std::vector<std::string> out;
    while (out.size() < n) {
      auto w = word();
      if (std::find(out.begin(), out.end(), w) == out.end()) out.push_back(w);
    }
    return out;
  }

  /// Document drawn from `vocab` with Zipf(1) rank weights.
  std::string zipf_document(const std::vector<std::string>& vocab, std::size_t length) {
    std::vector<double> w(vocab.size());
    for (std::size_t r = 0; r < w.size(); ++r) w[r] = 1.0 / static_cast<double>(r + 1);
    std::discrete_distribution<std::size_t> pick(w.begin(), w.end());
    std::string doc;
    for (std::size_t i = 0; i < length; ++i) {
      if (i) doc += ' ';
      doc += vocab[pick(rng_)];
    }
    return doc;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

inline dinfra::SparseMatrix to_sparse(const oracle::Dense& m) {
  std::vector<dinfra::SparseMatrix::Triplet> t;
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[i].size(); ++j)
      if (m[i][j] != 0.0)
        t.emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), m[i][j]);
  return dinfra::SparseMatrix::from_triplets(m.size(), m.empty() ? 0 : m[0].size(), t);
}

/// Temporary directory removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("dinfra-test-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace gen
