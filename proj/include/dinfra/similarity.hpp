#pragma once

#include <span>
#include <string_view>

#include "dinfra/model.hpp"

namespace dinfra {

enum class Measure { Cosine, Euclidean, Correlation };

std::string_view to_string(Measure m) noexcept;
/// "cosine" | "euclidean" | "correlation", case-insensitive.
Measure parse_measure(std::string_view text);

// All measures throw Error(UndefinedSimilarity) on zero vectors; correlation
// also on zero-variance vectors. Dense inputs must have equal length.

double cosine(std::span<const double> u, std::span<const double> v);
double cosine(const SparseVector& u, const SparseVector& v);

/// 1 / (1 + |u/|u| - v/|v||), in (1/3, 1].
double euclidean_similarity(std::span<const double> u, std::span<const double> v);
double euclidean_similarity(const SparseVector& u, const SparseVector& v);

/// Pearson correlation of components (mean-adjusted cosine).
double correlation_similarity(std::span<const double> u, std::span<const double> v);
double correlation_similarity(const SparseVector& u, const SparseVector& v);

/// Dispatches on representation; dense-vs-sparse throws Error(Config).
double similarity(const TermVector& u, const TermVector& v, Measure m);

/// Monotone map of a raw score onto [0, 1]: clamp for cosine and
/// correlation, affine rescale of (1/3, 1] for euclidean.
double normalize_score(double raw, Measure m) noexcept;

struct RelatednessScore {
  double raw = 0.0;
  double normalized = 0.0;
};

/// Throws TermNotFoundError naming the first unresolvable term.
RelatednessScore relatedness(const DsmModel& model, std::string_view term1,
                             std::string_view term2, Measure m);

}  // namespace dinfra
