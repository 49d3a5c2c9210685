#include "dinfra/pipeline.hpp"

#include <cstdlib>

#include "dinfra/error.hpp"

#ifndef DINFRA_BUNDLED_DATA_DIR
#define DINFRA_BUNDLED_DATA_DIR "data"
#endif

namespace dinfra {

void set_dimension(TrainOptions& options, std::uint32_t dimension) {
  switch (options.kind) {
    case ModelKind::RI: options.ri.dimension = dimension; break;
    case ModelKind::LSA: options.lsa.k = dimension; break;
    case ModelKind::ESA: options.esa.max_concepts = dimension; break;
  }
}

void apply_build_config(const BuildConfig& c, TrainOptions& o) {
  if (c.language) o.language = *c.language;
  if (c.min_count) o.vocabulary.min_count = *c.min_count;
  if (c.stemming) o.vocabulary.stemming = *c.stemming;
  if (c.window_size) o.ri.window_size = *c.window_size;
  if (c.dimension) set_dimension(o, *c.dimension);
  if (c.seed) {
    o.ri.seed = *c.seed;
    o.lsa.svd_seed = *c.seed;
  }
  if (c.nnz) o.ri.nnz = *c.nnz;
  if (c.weighting) o.lsa.weighting = parse_weighting(*c.weighting);
  if (c.power_iterations) o.lsa.power_iterations = *c.power_iterations;
  if (c.oversampling) o.lsa.oversampling = *c.oversampling;
  if (c.prune_window) o.esa.prune_window = *c.prune_window;
  if (c.prune_threshold) o.esa.prune_threshold = *c.prune_threshold;
}

void validate(const TrainOptions& o) {
  require_supported_language(o.language);
  if (o.vocabulary.min_count < 1) throw Error(ErrorKind::Config, "min_count must be >= 1");
  switch (o.kind) {
    case ModelKind::RI: o.ri.validate(); break;
    case ModelKind::LSA:
      if (o.lsa.k < 1) throw Error(ErrorKind::Config, "LSA dimension k must be >= 1");
      if (o.lsa.power_iterations < 0 || o.lsa.oversampling < 0)
        throw Error(ErrorKind::Config, "power_iterations and oversampling must be >= 0");
      break;
    case ModelKind::ESA: o.esa.validate(); break;
  }
}

std::unique_ptr<DsmModel> train_model(const CorpusSource& source, const TrainOptions& options) {
  validate(options);
  if (source.language() != options.language)
    throw Error(ErrorKind::Config, "corpus language '" + source.language() +
                                       "' does not match requested language '" +
                                       options.language + "'");
  const Vocabulary vocab = build_vocabulary(source, options.vocabulary);
  switch (options.kind) {
    case ModelKind::RI: {
      const auto counts = count_cooccurrences(source, vocab, options.ri.window_size);
      return std::make_unique<RiModel>(train_ri(counts, vocab, options.ri));
    }
    case ModelKind::LSA: {
      const auto counts = count_term_document(source, vocab);
      return std::make_unique<LsaModel>(train_lsa(counts, vocab, options.lsa));
    }
    case ModelKind::ESA: {
      const auto counts = count_term_document(source, vocab);
      return std::make_unique<EsaModel>(train_esa(counts, vocab, options.esa));
    }
  }
  throw Error(ErrorKind::Config, "unknown model kind");
}

std::optional<std::filesystem::path> default_stopwords_path(std::string_view language) {
  std::filesystem::path root = DINFRA_BUNDLED_DATA_DIR;
  if (const char* env = std::getenv("DINFRA_DATA_DIR"); env && *env) root = env;
  auto path = root / "stopwords" / (std::string(language) + ".txt");
  if (std::filesystem::is_regular_file(path)) return path;
  return std::nullopt;
}

}  // namespace dinfra
