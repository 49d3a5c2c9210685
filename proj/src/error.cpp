#include "dinfra/error.hpp"

#include <cmath>

#include "dinfra/hash.hpp"

namespace dinfra {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Ingestion: return "ingestion";
    case ErrorKind::Config: return "config";
    case ErrorKind::EmptyInput: return "empty_input";
    case ErrorKind::TermNotFound: return "term_not_found";
    case ErrorKind::UndefinedSimilarity: return "undefined_similarity";
    case ErrorKind::UndefinedCorrelation: return "undefined_correlation";
    case ErrorKind::Coverage: return "insufficient_coverage";
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Integrity: return "integrity";
    case ErrorKind::Checksum: return "checksum";
    case ErrorKind::Io: return "io";
    case ErrorKind::Duplicate: return "duplicate";
    case ErrorKind::NotFound: return "not_found";
  }
  return "unknown";
}

double SplitMix64::gaussian() noexcept {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // Box-Muller; 1 - uniform() lies in (0, 1] so the log is finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 6.283185307179586 * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

}  // namespace dinfra
