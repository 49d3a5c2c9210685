#pragma once

#include <stdexcept>
#include <string>

namespace dinfra {

enum class ErrorKind {
  Ingestion,            // unreadable corpus, invalid UTF-8
  Config,               // invalid parameters or mismatched inputs
  EmptyInput,           // empty corpus / vocabulary / matrix
  TermNotFound,         // OOV or untrained query term
  UndefinedSimilarity,  // zero vector, zero variance
  UndefinedCorrelation, // constant rank list
  Coverage,             // fewer than two scorable pairs
  Parse,                // malformed dataset / manifest line
  Integrity,            // dataset size mismatch, manifest inconsistency
  Checksum,             // corrupted model file
  Io,                   // filesystem errors
  Duplicate,            // registry key collision
  NotFound,             // missing model / dataset
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Raised for query terms that cannot be resolved; carries the offending term.
class TermNotFoundError : public Error {
 public:
  explicit TermNotFoundError(std::string term)
      : Error(ErrorKind::TermNotFound, "term not found: " + term),
        term_(std::move(term)) {}

  const std::string& term() const noexcept { return term_; }

 private:
  std::string term_;
};

}  // namespace dinfra
