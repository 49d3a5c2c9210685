#include <fstream>

#include "doctest.h"

#include "dinfra/config.hpp"
#include "dinfra/error.hpp"
#include "dinfra/pipeline.hpp"
#include "gen.hpp"

using namespace dinfra;

TEST_CASE("key-value parsing") {
  const auto kv = parse_key_values("# build\nmin_count = 3\n  window_size=2   # inline\n\nlanguage = de\n");
  CHECK(kv.size() == 3);
  CHECK(kv.at("min_count") == "3");
  CHECK(kv.at("window_size") == "2");
  CHECK(kv.at("language") == "de");
}

TEST_CASE("key-value errors carry line numbers") {
  try {
    parse_key_values("a = 1\nb\n");
    FAIL("expected parse error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Parse);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  try {
    parse_key_values("a = 1\n\na = 2\n");
    FAIL("expected parse error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_key_values(" = 4"), Error);
}

TEST_CASE("build config keys") {
  const auto c = parse_build_config(parse_key_values(
      "min_count = 2\nwindow_size = 3\nstemming = yes\nlanguage = en\ndimension = 64\nseed = 9\n"
      "nnz = 4\nweighting = tf-idf\nprune_threshold = 0.1\n"));
  CHECK(c.min_count == 2u);
  CHECK(c.window_size == 3);
  CHECK(c.stemming == true);
  CHECK(c.language == std::optional<std::string>("en"));
  CHECK(c.prune_threshold == 0.1);
  CHECK_THROWS_AS(parse_build_config({{"colour", "red"}}), Error);
  CHECK_THROWS_AS(parse_build_config({{"min_count", "many"}}), Error);
  CHECK_THROWS_AS(parse_build_config({{"stemming", "maybe"}}), Error);
  CHECK_THROWS_AS(parse_build_config({{"window_size", "3.5"}}), Error);
}

TEST_CASE("applying a build config") {
  BuildConfig c;
  c.dimension = 64;
  c.seed = 5;
  c.window_size = 3;
  c.weighting = "raw";
  TrainOptions ri;
  ri.kind = ModelKind::RI;
  apply_build_config(c, ri);
  CHECK(ri.ri.dimension == 64);
  CHECK(ri.ri.seed == 5);
  CHECK(ri.ri.window_size == 3);
  TrainOptions lsa;
  lsa.kind = ModelKind::LSA;
  apply_build_config(c, lsa);
  CHECK(lsa.lsa.k == 64);
  CHECK(lsa.lsa.weighting == Weighting::Raw);
  TrainOptions esa;
  esa.kind = ModelKind::ESA;
  apply_build_config(c, esa);
  CHECK(esa.esa.max_concepts == 64);
  c.weighting = "bm25";
  CHECK_THROWS_AS(apply_build_config(c, lsa), Error);
}

TEST_CASE("train options validation") {
  TrainOptions o;
  o.kind = ModelKind::LSA;
  set_dimension(o, 0);
  CHECK_THROWS_AS(validate(o), Error);
  o.kind = ModelKind::RI;
  set_dimension(o, 0);
  CHECK_THROWS_AS(validate(o), Error);
  o = TrainOptions{};
  o.language = "xx";
  CHECK_THROWS_AS(validate(o), Error);
}

TEST_CASE("bundled stopword lists exist for every language") {
  for (auto lang : supported_languages()) CHECK(default_stopwords_path(lang));
}

TEST_CASE("config file on disk") {
  gen::TempDir dir;
  {
    std::ofstream(dir.path() / "b.conf") << "min_count = 1\nbad line\n";
  }
  try {
    read_key_value_file(dir.path() / "b.conf");
    FAIL("expected parse error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("b.conf") != std::string::npos);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK_THROWS_AS(read_key_value_file(dir.path() / "none.conf"), Error);
}
