#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace oracle {

double mean(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double mx = mean(xs), my = mean(ys);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

std::vector<double> average_ranks(const std::vector<double>& xs) {
  std::vector<double> r(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    double less = 0.0, equal = 0.0;
    for (std::size_t j = 0; j < xs.size(); ++j) {
      if (xs[j] < xs[i]) less += 1.0;
      else if (j != i && xs[j] == xs[i]) equal += 1.0;
    }
    r[i] = 1.0 + less + equal / 2.0;
  }
  return r;
}

double spearman_rank_pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
  return pearson(average_ranks(xs), average_ranks(ys));
}

double spearman_closed_form(const std::vector<double>& xs, const std::vector<double>& ys) {
  const auto rx = average_ranks(xs), ry = average_ranks(ys);
  double d2 = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) d2 += (rx[i] - ry[i]) * (rx[i] - ry[i]);
  const double n = static_cast<double>(rx.size());
  return 1.0 - 6.0 * d2 / (n * (n * n - 1.0));
}

double dot(const std::vector<double>& u, const std::vector<double>& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
  return s;
}

double norm(const std::vector<double>& u) { return std::sqrt(dot(u, u)); }

double cosine(const std::vector<double>& u, const std::vector<double>& v) {
  return dot(u, v) / (norm(u) * norm(v));
}

namespace {

Dense transpose(const Dense& a) {
  if (a.empty()) return {};
  Dense t(a[0].size(), std::vector<double>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[0].size(); ++j) t[j][i] = a[i][j];
  return t;
}

}  // namespace

std::vector<double> singular_values(const Dense& input) {
  if (input.empty() || input[0].empty()) return {};
  // Work on columns of a tall matrix: cols[j] is column j.
  Dense cols = input.size() >= input[0].size() ? transpose(input) : input;
  const std::size_t n = cols.size();
  const std::size_t m = cols[0].size();
  for (int sweep = 0; sweep < 200; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
          alpha += cols[p][i] * cols[p][i];
          beta += cols[q][i] * cols[q][i];
          gamma += cols[p][i] * cols[q][i];
        }
        if (gamma == 0.0 || std::abs(gamma) <= 1e-15 * std::sqrt(alpha * beta)) continue;
        off = std::max(off, std::abs(gamma) / std::sqrt(alpha * beta));
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < m; ++i) {
          const double x = cols[p][i], y = cols[q][i];
          cols[p][i] = c * x - s * y;
          cols[q][i] = s * x + c * y;
        }
      }
    }
    if (off <= 1e-15) break;
  }
  std::vector<double> sigma;
  for (const auto& c : cols) sigma.push_back(norm(c));
  std::sort(sigma.rbegin(), sigma.rend());
  sigma.resize(std::min(input.size(), input[0].size()));
  return sigma;
}

double optimal_rank_k_error(const Dense& a, std::size_t k) {
  const auto s = singular_values(a);
  double tail = 0.0;
  for (std::size_t i = k; i < s.size(); ++i) tail += s[i] * s[i];
  return std::sqrt(tail);
}

double frobenius(const Dense& a) {
  double s = 0.0;
  for (const auto& row : a)
    for (double x : row) s += x * x;
  return std::sqrt(s);
}

std::size_t numerical_rank(const Dense& a, double rel_tol) {
  const auto s = singular_values(a);
  if (s.empty() || s[0] == 0.0) return 0;
  return static_cast<std::size_t>(
      std::count_if(s.begin(), s.end(), [&](double x) { return x > rel_tol * s[0]; }));
}

std::vector<Doc> split_documents(const std::vector<std::string>& texts) {
  std::vector<Doc> docs;
  for (const auto& t : texts) {
    std::istringstream in(t);
    Doc d;
    for (std::string w; in >> w;) d.push_back(w);
    if (!d.empty()) docs.push_back(d);
  }
  return docs;
}

std::map<std::string, std::uint64_t> frequency_table(const std::vector<Doc>& docs) {
  std::map<std::string, std::uint64_t> f;
  for (const auto& d : docs)
    for (const auto& w : d) ++f[w];
  return f;
}

std::map<std::pair<std::string, std::string>, std::uint64_t> window_pairs(
    const std::vector<Doc>& docs, int ws, const std::map<std::string, std::uint64_t>& keep) {
  std::map<std::pair<std::string, std::string>, std::uint64_t> out;
  for (const auto& d : docs) {
    const int n = static_cast<int>(d.size());
    for (int i = 0; i < n; ++i) {
      if (!keep.contains(d[i])) continue;
      for (int j = 0; j < n; ++j) {
        if (j == i || std::abs(i - j) > ws || !keep.contains(d[j])) continue;
        ++out[{d[i], d[j]}];
      }
    }
  }
  return out;
}

std::map<std::pair<std::string, std::size_t>, std::uint64_t> term_document(
    const std::vector<Doc>& docs, const std::map<std::string, std::uint64_t>& keep) {
  std::map<std::pair<std::string, std::size_t>, std::uint64_t> out;
  for (std::size_t d = 0; d < docs.size(); ++d)
    for (const auto& w : docs[d])
      if (keep.contains(w)) ++out[{w, d}];
  return out;
}

Dense log_entropy(const Dense& counts) {
  const std::size_t n_docs = counts.empty() ? 0 : counts[0].size();
  Dense out = counts;
  for (std::size_t t = 0; t < counts.size(); ++t) {
    double gf = 0.0;
    for (double x : counts[t]) gf += x;
    double h = 0.0;
    for (double x : counts[t]) {
      if (x <= 0.0) continue;
      const double p = x / gf;
      h -= p * std::log(p);
    }
    const double g = n_docs > 1 ? 1.0 - h / std::log(static_cast<double>(n_docs)) : 1.0;
    for (std::size_t d = 0; d < n_docs; ++d) out[t][d] = std::log1p(counts[t][d]) * g;
  }
  return out;
}

Dense tf_idf(const Dense& counts) {
  const std::size_t n_docs = counts.empty() ? 0 : counts[0].size();
  Dense out = counts;
  for (std::size_t t = 0; t < counts.size(); ++t) {
    double df = 0.0;
    for (double x : counts[t]) df += x > 0.0 ? 1.0 : 0.0;
    const double idf = df > 0 ? std::log(static_cast<double>(n_docs) / df) : 0.0;
    for (std::size_t d = 0; d < n_docs; ++d) out[t][d] = std::log1p(counts[t][d]) * idf;
  }
  return out;
}

std::vector<std::int64_t> ri_context(const std::vector<Doc>& docs, const std::string& term,
                                     const std::map<std::string, std::uint64_t>& keep,
                                     const dinfra::RiConfig& config) {
  std::vector<std::int64_t> v(config.dimension, 0);
  for (const auto& d : docs) {
    const int n = static_cast<int>(d.size());
    for (int i = 0; i < n; ++i) {
      if (d[i] != term) continue;
      for (int j = std::max(0, i - config.window_size);
           j <= std::min(n - 1, i + config.window_size); ++j) {
        if (j == i || !keep.contains(d[j])) continue;
        const auto iv = dinfra::index_vector(d[j], config);
        for (std::size_t p = 0; p < iv.positions.size(); ++p) v[iv.positions[p]] += iv.signs[p];
      }
    }
  }
  return v;
}

std::vector<double> densify(const dinfra::IndexVector& iv, std::uint32_t dimension) {
  std::vector<double> v(dimension, 0.0);
  for (std::size_t p = 0; p < iv.positions.size(); ++p) v[iv.positions[p]] += iv.signs[p];
  return v;
}

}  // namespace oracle
