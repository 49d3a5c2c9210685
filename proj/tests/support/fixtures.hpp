#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "dinfra/esa.hpp"
#include "dinfra/lsa.hpp"
#include "dinfra/ri.hpp"

namespace fixtures {

/// 60 short English documents in three loose themes (family, weather,
/// finance); contains mother, wife, child and love many times.
std::vector<std::string> family_corpus();

dinfra::Vocabulary family_vocabulary();
dinfra::RiModel toy_ri();
dinfra::LsaModel toy_lsa();
dinfra::EsaModel toy_esa();

/// Saves the three toy models for "en" under `root`.
void populate_registry(const std::filesystem::path& root);

}  // namespace fixtures

#include "dinfra/evaluation.hpp"

namespace fixtures {

/// 2-dimensional LSA model over the words of `pairs` (all distinct) where
/// cosine(word1, word2) = cos((1 - score / max_score) * pi / 2), a strictly
/// increasing function of the human score.
dinfra::LsaModel perfect_model(const std::vector<dinfra::WordPair>& pairs,
                               const std::string& language = "en");

}  // namespace fixtures
