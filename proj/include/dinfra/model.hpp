#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dinfra/corpus.hpp"

namespace dinfra {

using DenseVector = std::vector<double>;

/// Sparse vector with strictly ascending indices. `dimension` is the length
/// of the implied dense vector (needed for mean-centering).
struct SparseVector {
  std::vector<std::uint32_t> indices;
  std::vector<double> values;
  std::size_t dimension = 0;

  std::size_t nnz() const noexcept { return indices.size(); }
  DenseVector densify() const;

  friend bool operator==(const SparseVector&, const SparseVector&) = default;
};

using TermVector = std::variant<DenseVector, SparseVector>;

enum class ModelKind { RI, LSA, ESA };

std::string_view to_string(ModelKind kind) noexcept;
/// Accepts "ri" | "lsa" | "esa", case-insensitive. Throws Error(Config).
ModelKind parse_model_kind(std::string_view text);

/// A trained distributional model: a vocabulary plus one vector per trained
/// term. Immutable once constructed and safe to share between threads.
class DsmModel {
 public:
  virtual ~DsmModel() = default;

  virtual ModelKind kind() const noexcept = 0;
  virtual const Vocabulary& vocabulary() const noexcept = 0;
  /// L2-normalized vector, or nullopt for untrained ids.
  virtual std::optional<TermVector> vector(TermId id) const = 0;
  virtual bool trained(TermId id) const = 0;

  const std::string& language() const noexcept { return vocabulary().language(); }

  /// Resolves a raw user term (normalized like corpus tokens). nullopt for
  /// OOV and untrained terms alike.
  std::optional<TermId> resolve(std::string_view term) const;
  std::optional<TermVector> vector(std::string_view term) const;
};

}  // namespace dinfra
