#include "dinfra/model.hpp"

#include <algorithm>
#include <cctype>

#include "dinfra/error.hpp"

namespace dinfra {

DenseVector SparseVector::densify() const {
  DenseVector out(dimension, 0.0);
  for (std::size_t i = 0; i < indices.size(); ++i) out.at(indices[i]) = values[i];
  return out;
}

std::string_view to_string(ModelKind kind) noexcept {
  switch (kind) {
    case ModelKind::RI: return "ri";
    case ModelKind::LSA: return "lsa";
    case ModelKind::ESA: return "esa";
  }
  return "?";
}

ModelKind parse_model_kind(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "ri") return ModelKind::RI;
  if (lower == "lsa") return ModelKind::LSA;
  if (lower == "esa") return ModelKind::ESA;
  throw Error(ErrorKind::Config, "unknown model kind: '" + std::string(text) + "'");
}

std::optional<TermId> DsmModel::resolve(std::string_view term) const {
  auto id = vocabulary().lookup(term);
  if (!id || !trained(*id)) return std::nullopt;
  return id;
}

std::optional<TermVector> DsmModel::vector(std::string_view term) const {
  auto id = resolve(term);
  if (!id) return std::nullopt;
  return vector(*id);
}

}  // namespace dinfra
