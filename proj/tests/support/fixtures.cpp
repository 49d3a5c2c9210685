#include "fixtures.hpp"

#include "dinfra/registry.hpp"
#include <algorithm>
#include <cmath>

#include "gen.hpp"

namespace fixtures {

std::vector<std::string> family_corpus() {
  const std::vector<std::vector<std::string>> themes = {
      {"mother", "wife", "child", "love", "husband", "family", "home", "daughter"},
      {"rain", "storm", "cloud", "wind", "snow", "cold", "sun", "weather"},
      {"bank", "money", "loan", "market", "price", "stock", "trade", "love"},
  };
  gen::Gen g(2024);
  std::vector<std::string> docs;
  for (int d = 0; d < 60; ++d) {
    const auto& words = themes[static_cast<std::size_t>(d % 3)];
    docs.push_back(g.zipf_document(words, 12));
  }
  return docs;
}

dinfra::Vocabulary family_vocabulary() {
  dinfra::VocabularyOptions o;
  o.min_count = 2;
  return dinfra::build_vocabulary(dinfra::CorpusSource::from_documents(family_corpus(), "en"), o);
}

dinfra::RiModel toy_ri() {
  const auto vocab = family_vocabulary();
  dinfra::RiConfig c;
  c.dimension = 512;
  c.window_size = 2;
  const auto src = dinfra::CorpusSource::from_documents(family_corpus(), "en");
  return dinfra::train_ri(dinfra::count_cooccurrences(src, vocab, c.window_size), vocab, c);
}

dinfra::LsaModel toy_lsa() {
  const auto vocab = family_vocabulary();
  dinfra::LsaConfig c;
  c.k = 4;
  const auto src = dinfra::CorpusSource::from_documents(family_corpus(), "en");
  return dinfra::train_lsa(dinfra::count_term_document(src, vocab), vocab, c);
}

dinfra::EsaModel toy_esa() {
  const auto vocab = family_vocabulary();
  const auto src = dinfra::CorpusSource::from_documents(family_corpus(), "en");
  return dinfra::train_esa(dinfra::count_term_document(src, vocab), vocab, {});
}

void populate_registry(const std::filesystem::path& root) {
  const auto ri = toy_ri();
  const auto lsa = toy_lsa();
  const auto esa = toy_esa();
  for (const dinfra::DsmModel* m : {static_cast<const dinfra::DsmModel*>(&ri),
                                    static_cast<const dinfra::DsmModel*>(&lsa),
                                    static_cast<const dinfra::DsmModel*>(&esa)})
    dinfra::save_model(*m, dinfra::describe(*m, "family-toy"), root);
}

}  // namespace fixtures

namespace fixtures {

dinfra::LsaModel perfect_model(const std::vector<dinfra::WordPair>& pairs,
                               const std::string& language) {
  double max_score = 0.0;
  for (const auto& p : pairs) max_score = std::max(max_score, p.human_score);
  std::vector<dinfra::Vocabulary::Entry> entries;
  std::vector<float> vectors;
  std::vector<double> norms;
  for (const auto& p : pairs) {
    const double theta = (1.0 - p.human_score / max_score) * 1.5707963267948966;
    entries.push_back({p.word1, 1, 1});
    entries.push_back({p.word2, 1, 1});
    vectors.insert(vectors.end(), {1.0f, 0.0f, static_cast<float>(std::cos(theta)),
                                    static_cast<float>(std::sin(theta))});
    norms.insert(norms.end(), {1.0, 1.0});
  }
  dinfra::LsaConfig c;
  c.k = 2;
  dinfra::Vocabulary vocab(dinfra::TokenizerOptions{language, false}, std::move(entries));
  return dinfra::LsaModel(c, std::move(vocab), std::move(vectors), std::move(norms), {1.0, 1.0});
}

}  // namespace fixtures
