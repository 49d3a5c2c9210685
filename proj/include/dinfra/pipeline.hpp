#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "dinfra/config.hpp"
#include "dinfra/corpus.hpp"
#include "dinfra/esa.hpp"
#include "dinfra/lsa.hpp"
#include "dinfra/model.hpp"
#include "dinfra/ri.hpp"

namespace dinfra {

/// Everything needed to train one model from a corpus.
struct TrainOptions {
  ModelKind kind = ModelKind::ESA;
  std::string language = "en";
  VocabularyOptions vocabulary;
  RiConfig ri;
  LsaConfig lsa;
  EsaConfig esa;
};

/// Overlays the keys present in `config` onto `options`. `dimension` and
/// `seed` go to the section matching `options.kind`.
void apply_build_config(const BuildConfig& config, TrainOptions& options);

/// Sets the model size: VL for RI, k for LSA, max_concepts for ESA.
void set_dimension(TrainOptions& options, std::uint32_t dimension);

/// Validates the whole option set; throws Error(Config).
void validate(const TrainOptions& options);

/// Builds the vocabulary and the counts the model needs, then trains it.
std::unique_ptr<DsmModel> train_model(const CorpusSource& source,
                                      const TrainOptions& options);

/// `<data dir>/stopwords/<lang>.txt`, where the data dir is DINFRA_DATA_DIR
/// or the bundled data directory. Nullopt when no such file exists.
std::optional<std::filesystem::path> default_stopwords_path(std::string_view language);

}  // namespace dinfra
