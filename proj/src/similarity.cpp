#include "dinfra/similarity.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "dinfra/error.hpp"

namespace dinfra {

std::string_view to_string(Measure m) noexcept {
  switch (m) {
    case Measure::Cosine: return "cosine";
    case Measure::Euclidean: return "euclidean";
    case Measure::Correlation: return "correlation";
  }
  return "?";
}

Measure parse_measure(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "cosine") return Measure::Cosine;
  if (lower == "euclidean") return Measure::Euclidean;
  if (lower == "correlation") return Measure::Correlation;
  throw Error(ErrorKind::Config, "unknown similarity measure: '" + std::string(text) + "'");
}

namespace {

[[noreturn]] void undefined(const char* what) {
  throw Error(ErrorKind::UndefinedSimilarity, what);
}

void require_same_length(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size())
    throw Error(ErrorKind::Config, "vectors differ in length");
}

void require_same_dimension(const SparseVector& u, const SparseVector& v) {
  if (u.dimension != v.dimension)
    throw Error(ErrorKind::Config, "sparse vectors differ in dimension");
}

double clamp_unit(double x) { return std::clamp(x, -1.0, 1.0); }

double norm(std::span<const double> u) {
  double sq = 0.0;
  for (double x : u) sq += x * x;
  return std::sqrt(sq);
}

double norm(const SparseVector& u) { return norm(u.values); }

// Visits the union of supports in ascending index order with both values.
template <typename Fn>
void merge_join(const SparseVector& u, const SparseVector& v, Fn&& fn) {
  std::size_t i = 0, j = 0;
  while (i < u.nnz() || j < v.nnz()) {
    if (j == v.nnz() || (i < u.nnz() && u.indices[i] < v.indices[j])) {
      fn(u.values[i++], 0.0);
    } else if (i == u.nnz() || v.indices[j] < u.indices[i]) {
      fn(0.0, v.values[j++]);
    } else {
      fn(u.values[i++], v.values[j++]);
    }
  }
}

}  // namespace

double cosine(std::span<const double> u, std::span<const double> v) {
  require_same_length(u, v);
  const double nu = norm(u), nv = norm(v);
  if (nu == 0.0 || nv == 0.0) undefined("cosine of a zero vector");
  double dot = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) dot += u[i] * v[i];
  return clamp_unit(dot / (nu * nv));
}

double cosine(const SparseVector& u, const SparseVector& v) {
  require_same_dimension(u, v);
  const double nu = norm(u), nv = norm(v);
  if (nu == 0.0 || nv == 0.0) undefined("cosine of a zero vector");
  double dot = 0.0;
  merge_join(u, v, [&](double a, double b) { dot += a * b; });
  return clamp_unit(dot / (nu * nv));
}

double euclidean_similarity(std::span<const double> u, std::span<const double> v) {
  require_same_length(u, v);
  const double nu = norm(u), nv = norm(v);
  if (nu == 0.0 || nv == 0.0) undefined("euclidean similarity of a zero vector");
  double sq = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double d = u[i] / nu - v[i] / nv;
    sq += d * d;
  }
  return 1.0 / (1.0 + std::sqrt(sq));
}

double euclidean_similarity(const SparseVector& u, const SparseVector& v) {
  require_same_dimension(u, v);
  const double nu = norm(u), nv = norm(v);
  if (nu == 0.0 || nv == 0.0) undefined("euclidean similarity of a zero vector");
  double sq = 0.0;
  merge_join(u, v, [&](double a, double b) {
    const double d = a / nu - b / nv;
    sq += d * d;
  });
  return 1.0 / (1.0 + std::sqrt(sq));
}

double correlation_similarity(std::span<const double> u, std::span<const double> v) {
  require_same_length(u, v);
  if (u.empty()) undefined("correlation of empty vectors");
  const auto n = static_cast<double>(u.size());
  double mu = 0.0, mv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    mu += u[i];
    mv += v[i];
  }
  mu /= n;
  mv /= n;
  double cov = 0.0, vu = 0.0, vv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double a = u[i] - mu, b = v[i] - mv;
    cov += a * b;
    vu += a * a;
    vv += b * b;
  }
  if (vu == 0.0 || vv == 0.0) undefined("correlation of a zero-variance vector");
  return clamp_unit(cov / std::sqrt(vu * vv));
}

double correlation_similarity(const SparseVector& u, const SparseVector& v) {
  require_same_dimension(u, v);
  if (u.dimension == 0) undefined("correlation of empty vectors");
  const auto n = static_cast<double>(u.dimension);
  double su = 0.0, sv = 0.0, suu = 0.0, svv = 0.0, suv = 0.0;
  merge_join(u, v, [&](double a, double b) {
    su += a;
    sv += b;
    suu += a * a;
    svv += b * b;
    suv += a * b;
  });
  const double cov = suv - su * sv / n;
  const double vu = suu - su * su / n;
  const double vv = svv - sv * sv / n;
  // Relative guard: cancellation leaves tiny positive residue for constants.
  if (vu <= 1e-14 * suu || vv <= 1e-14 * svv) undefined("correlation of a zero-variance vector");
  return clamp_unit(cov / std::sqrt(vu * vv));
}

double similarity(const TermVector& u, const TermVector& v, Measure m) {
  if (u.index() != v.index())
    throw Error(ErrorKind::Config, "cannot compare dense and sparse vectors");
  return std::visit(
      [&](const auto& a) -> double {
        using T = std::decay_t<decltype(a)>;
        const auto& b = std::get<T>(v);
        if constexpr (std::is_same_v<T, DenseVector>) {
          switch (m) {
            case Measure::Cosine: return cosine(std::span(a), std::span(b));
            case Measure::Euclidean: return euclidean_similarity(std::span(a), std::span(b));
            case Measure::Correlation: return correlation_similarity(std::span(a), std::span(b));
          }
        } else {
          switch (m) {
            case Measure::Cosine: return cosine(a, b);
            case Measure::Euclidean: return euclidean_similarity(a, b);
            case Measure::Correlation: return correlation_similarity(a, b);
          }
        }
        return 0.0;
      },
      u);
}

double normalize_score(double raw, Measure m) noexcept {
  if (m == Measure::Euclidean) return std::clamp((raw - 1.0 / 3.0) * 1.5, 0.0, 1.0);
  return std::clamp(raw, 0.0, 1.0);
}

RelatednessScore relatedness(const DsmModel& model, std::string_view term1,
                             std::string_view term2, Measure m) {
  const auto id1 = model.resolve(term1);
  if (!id1) throw TermNotFoundError(std::string(term1));
  const auto id2 = model.resolve(term2);
  if (!id2) throw TermNotFoundError(std::string(term2));
  const auto u = model.vector(*id1);
  const auto v = model.vector(*id2);
  RelatednessScore score;
  score.raw = similarity(*u, *v, m);
  if (*id1 == *id2) score.raw = 1.0;  // identical vectors
  score.normalized = normalize_score(score.raw, m);
  return score;
}

}  // namespace dinfra
