#pragma once

#include <cstdint>
#include <filesystem>
#include <list>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "dinfra/model.hpp"

namespace dinfra {

struct ModelDescriptor {
  std::string language;
  ModelKind kind = ModelKind::RI;
  std::string config_fingerprint;  // 16 lowercase hex digits
  std::string corpus_id;
  std::string created_at;          // ISO 8601 UTC
  std::filesystem::path file_path; // relative to the registry root on disk

  friend bool operator==(const ModelDescriptor&, const ModelDescriptor&) = default;
};

nlohmann::json to_json(const ModelDescriptor& d);

/// Canonical training configuration of a model (tokenizer options, kind
/// specific hyperparameters, vocabulary fingerprint).
nlohmann::json model_config_json(const DsmModel& model);
std::string config_fingerprint(const DsmModel& model);

/// Builds a descriptor for `model` with the current time and a default file
/// name `<lang>-<kind>-<fingerprint>.dsm`.
ModelDescriptor describe(const DsmModel& model, std::string corpus_id);

// Container format, little-endian throughout:
//   magic "DINFRADSM\0" (10 bytes) | u32 version
//   u64 length + UTF-8 JSON metadata (descriptor + config)
//   vocabulary block | vector block | u64 FNV-1a checksum of preceding bytes
std::vector<unsigned char> serialize_model(const DsmModel& model,
                                           const ModelDescriptor& descriptor);
/// Throws Error(Checksum) on corruption, Error(Parse) on malformed blocks.
std::shared_ptr<const DsmModel> deserialize_model(
    std::span<const unsigned char> bytes, ModelDescriptor* descriptor = nullptr);

struct SaveOptions {
  bool overwrite = false;
};

/// Writes the model file and appends it to `<root>/manifest.tsv`, both via
/// write-temp-then-rename. Returns the absolute file path.
std::filesystem::path save_model(const DsmModel& model,
                                 const ModelDescriptor& descriptor,
                                 const std::filesystem::path& root,
                                 SaveOptions options = {});

std::shared_ptr<const DsmModel> load_model(const std::filesystem::path& root,
                                           const ModelDescriptor& descriptor);
std::shared_ptr<const DsmModel> load_model_file(const std::filesystem::path& file);

struct ModelFilter {
  std::optional<std::string> language;
  std::optional<ModelKind> kind;
};

/// Manifest scan sorted by (language, kind, fingerprint). Missing root or
/// manifest yields an empty list.
std::vector<ModelDescriptor> list_models(const std::filesystem::path& root,
                                         const ModelFilter& filter = {});

/// Every manifest entry must exist and checksum-validate; returns one
/// message per problem (empty when consistent).
std::vector<std::string> check_registry(const std::filesystem::path& root);

/// DINFRA_MODEL_DIR, falling back to ./models.
std::filesystem::path default_model_dir();

/// Lazily loads models from a registry root and keeps at most `capacity`
/// of them resident (least recently used evicted). Thread-safe.
class ModelRegistry {
 public:
  explicit ModelRegistry(std::filesystem::path root, std::size_t capacity = 6);

  const std::filesystem::path& root() const noexcept { return root_; }

  std::vector<ModelDescriptor> list(const ModelFilter& filter = {}) const;
  /// Most recently created model for (language, kind), if any.
  std::optional<ModelDescriptor> find(const std::string& language,
                                      ModelKind kind) const;
  std::shared_ptr<const DsmModel> get(const ModelDescriptor& descriptor);
  std::shared_ptr<const DsmModel> get(const std::string& language, ModelKind kind);

  std::size_t loaded_count() const;

 private:
  std::filesystem::path root_;
  std::size_t capacity_;
  mutable std::mutex mutex_;
  // Front = most recently used.
  std::list<std::pair<std::string, std::shared_ptr<const DsmModel>>> cache_;
};

}  // namespace dinfra
