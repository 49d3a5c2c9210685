// dinfra command-line interface: build, eval, query, serve, list, fsck.

#include <csignal>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include <pthread.h>

#include "CLI11.hpp"
#include "json.hpp"

#include "dinfra/config.hpp"
#include "dinfra/error.hpp"
#include "dinfra/evaluation.hpp"
#include "dinfra/pipeline.hpp"
#include "dinfra/registry.hpp"
#include "dinfra/service.hpp"

namespace {

using namespace dinfra;
using nlohmann::json;

constexpr int kUsage = 2;
constexpr int kData = 3;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Config:
    case ErrorKind::Parse:
    case ErrorKind::NotFound:
    case ErrorKind::Io:
    case ErrorKind::Duplicate: return kUsage;
    default: return kData;
  }
}

std::filesystem::path dataset_dir_default() {
  if (const char* env = std::getenv("DINFRA_DATASET_DIR"); env && *env) return env;
  return "datasets";
}

std::filesystem::path model_root(const std::string& flag) {
  return flag.empty() ? default_model_dir() : std::filesystem::path(flag);
}

std::filesystem::path dataset_root(const std::string& flag) {
  return flag.empty() ? dataset_dir_default() : std::filesystem::path(flag);
}

std::string format_rho(const std::optional<double>& rho) {
  if (!rho) return "nan";
  std::ostringstream out;
  out << std::fixed << std::setprecision(6) << *rho;
  return out.str();
}

struct BuildArgs {
  std::string model;
  std::string lang;
  std::string corpus;
  std::optional<std::uint32_t> dim;
  std::optional<int> window;
  std::string config;
  std::optional<std::uint64_t> min_count;
  std::optional<std::uint64_t> seed;
  std::string stopwords;
  bool no_stopwords = false;
  std::string model_dir;
  std::string corpus_id;
  bool overwrite = false;
  bool json = false;
};

int run_build(const BuildArgs& a) {
  TrainOptions options;
  options.kind = parse_model_kind(a.model);
  BuildConfig file_config;
  if (!a.config.empty()) file_config = parse_build_config(read_key_value_file(a.config));
  apply_build_config(file_config, options);
  if (!a.lang.empty()) options.language = a.lang;
  else if (!file_config.language)
    throw Error(ErrorKind::Config, "--lang is required (or set language in the config file)");
  if (a.dim) set_dimension(options, *a.dim);
  if (a.window) options.ri.window_size = *a.window;
  if (a.min_count) options.vocabulary.min_count = *a.min_count;
  if (a.seed) {
    options.ri.seed = *a.seed;
    options.lsa.svd_seed = *a.seed;
  }
  validate(options);

  std::optional<std::filesystem::path> stopwords;
  if (!a.no_stopwords) {
    if (!a.stopwords.empty()) stopwords = a.stopwords;
    else if (file_config.stopwords) stopwords = *file_config.stopwords;
    else stopwords = default_stopwords_path(options.language);
  }
  if (stopwords) {
    if (!std::filesystem::is_regular_file(*stopwords))
      throw Error(ErrorKind::NotFound, "stopword file not found: " + stopwords->string());
    options.vocabulary.stopwords = load_stopwords(
        *stopwords, TokenizerOptions{options.language, options.vocabulary.stemming});
  }

  const std::filesystem::path corpus_path = a.corpus;
  if (!std::filesystem::exists(corpus_path))
    throw Error(ErrorKind::NotFound, "corpus not found: " + corpus_path.string());
  const auto format = std::filesystem::is_directory(corpus_path) ? CorpusFormat::DocPerFile
                                                                 : CorpusFormat::DocPerLine;
  const auto source = CorpusSource::from_file(corpus_path, options.language, format);

  const auto model = train_model(source, options);
  const std::string corpus_id =
      a.corpus_id.empty() ? corpus_path.filename().replace_extension().string() : a.corpus_id;
  auto descriptor = describe(*model, corpus_id);
  const std::filesystem::path root = model_root(a.model_dir);
  descriptor.file_path = save_model(*model, descriptor, root, {a.overwrite});

  if (a.json) {
    json out = to_json(descriptor);
    out["n_terms"] = model->vocabulary().size();
    std::cout << out.dump() << "\n";
  } else {
    std::cout << descriptor.language << "\t" << to_string(descriptor.kind) << "\t"
              << descriptor.config_fingerprint << "\t" << descriptor.corpus_id << "\t"
              << descriptor.created_at << "\t" << descriptor.file_path.string() << "\t"
              << model->vocabulary().size() << " terms\n";
  }
  return 0;
}

struct EvalArgs {
  std::string dataset;
  std::string gold;
  std::string lang;
  std::string model;
  std::string measure = "cosine";
  std::string oov = "skip";
  std::string model_dir;
  std::string dataset_dir;
  bool json = false;
};

int run_eval(const EvalArgs& a) {
  require_supported_language(a.lang);
  const auto kind = parse_model_kind(a.model);
  const auto measure = parse_measure(a.measure);
  const auto policy = parse_oov_policy(a.oov);
  if (a.dataset.empty() == a.gold.empty())
    throw Error(ErrorKind::Config, "exactly one of --dataset or --gold is required");

  DatasetName name = DatasetName::Custom;
  std::filesystem::path path = a.gold;
  if (!a.dataset.empty()) {
    name = parse_dataset_name(a.dataset);
    if (name == DatasetName::Custom)
      throw Error(ErrorKind::Config, "use --gold <path> for a custom dataset");
    path = dataset_path(dataset_root(a.dataset_dir), name,
                        a.lang);
  }
  if (!std::filesystem::is_regular_file(path))
    throw Error(ErrorKind::NotFound, "dataset file not found: " + path.string());
  WordPairDataset dataset;
  try {
    dataset = load_dataset(name, a.lang, path);
  } catch (const Error& e) {
    throw Error(e.kind() == ErrorKind::Parse ? ErrorKind::Integrity : e.kind(), e.what());
  }

  ModelRegistry registry(model_root(a.model_dir));
  const auto model = registry.get(a.lang, kind);
  const auto result = evaluate(*model, dataset, measure, policy);

  if (a.json) {
    json out = {{"rho", result.rho ? json(*result.rho) : json(nullptr)},
                {"n_scored", result.n_scored},
                {"n_skipped", result.n_skipped},
                {"dataset", std::string(to_string(name))},
                {"language", a.lang},
                {"measure", std::string(to_string(measure))},
                {"model_kind", std::string(to_string(kind))},
                {"oov_policy", std::string(to_string(policy))}};
    std::cout << out.dump() << "\n";
  } else {
    std::cout << format_rho(result.rho) << " " << result.n_scored << " " << result.n_skipped
              << "\n";
  }
  return 0;
}

struct QueryArgs {
  std::string main;
  std::string targets;
  std::string lang;
  std::string model;
  std::string measure = "cosine";
  std::string model_dir;
  bool json = false;
};

int run_query(const QueryArgs& a) {
  json body = {{"main_term", a.main},
               {"language", a.lang},
               {"measure", a.measure},
               {"model_kind", a.model}};
  json targets = json::array();
  std::stringstream ss(a.targets);
  for (std::string t; std::getline(ss, t, ',');) targets.push_back(t);
  body["target_set"] = targets;

  ServiceOptions options;
  options.model_dir = model_root(a.model_dir);
  Service service(options);
  json out;
  try {
    out = service.relatedness_json(parse_relatedness_request(body));
  } catch (const ApiError& e) {
    std::cerr << "dinfra: " << e.code() << ": " << e.what() << "\n";
    return e.status() == 400 || e.status() == 404 ? kUsage : kData;
  }
  if (a.json) {
    std::cout << out.dump() << "\n";
    return 0;
  }
  for (const auto& r : out["results"]) {
    std::cout << r["target"].get<std::string>() << "\t";
    if (r.contains("error")) {
      std::cout << "error: " << r["error"].get<std::string>() << "\n";
    } else {
      std::cout << std::setprecision(17) << r["score"].get<double>() << "\t"
                << r["raw"].get<double>() << "\n";
    }
  }
  return 0;
}

struct ServeArgs {
  std::optional<int> port;
  std::string host = "127.0.0.1";
  std::string model_dir;
  std::string dataset_dir;
  std::string ui_dir;
};

int run_serve(const ServeArgs& a) {
  ServiceOptions options;
  options.model_dir = model_root(a.model_dir);
  options.dataset_dir = dataset_root(a.dataset_dir);
  if (!a.ui_dir.empty()) options.ui_dir = a.ui_dir;
  else if (const char* env = std::getenv("DINFRA_UI_DIR"); env && *env) options.ui_dir = env;
  else options.ui_dir = DINFRA_BUNDLED_UI_DIR;
  const int port = a.port ? *a.port : default_port();
  if (port < 1 || port > 65535) throw Error(ErrorKind::Config, "port out of range");

  // Signals are taken synchronously by this thread; workers inherit the mask.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  Service service(options);
  if (!service.bind(a.host, port)) {
    std::cerr << "dinfra: cannot bind " << a.host << ":" << port << "\n";
    return kUsage;
  }
  std::cout << "listening on http://" << a.host << ":" << port << std::endl;
  std::thread worker([&] { service.run(); });
  int sig = 0;
  sigwait(&signals, &sig);
  service.stop();
  worker.join();
  std::cout << "shutdown" << std::endl;
  return 0;
}

int run_list(const std::string& model_dir, const std::string& lang, const std::string& model,
             bool as_json) {
  ModelFilter filter;
  if (!lang.empty()) filter.language = lang;
  if (!model.empty()) filter.kind = parse_model_kind(model);
  const auto models = list_models(model_root(model_dir), filter);
  if (as_json) {
    json out = json::array();
    for (const auto& d : models) out.push_back(to_json(d));
    std::cout << out.dump() << "\n";
    return 0;
  }
  for (const auto& d : models)
    std::cout << d.language << "\t" << to_string(d.kind) << "\t" << d.config_fingerprint << "\t"
              << d.corpus_id << "\t" << d.created_at << "\t" << d.file_path.string() << "\n";
  return 0;
}

int run_fsck(const std::string& model_dir) {
  const auto problems = check_registry(model_root(model_dir));
  for (const auto& p : problems) std::cout << p << "\n";
  if (problems.empty()) std::cout << "ok\n";
  return problems.empty() ? 0 : kData;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dinfra: distributional semantic models, evaluation and relatedness service"};
  app.require_subcommand(1);

  BuildArgs build;
  auto* b = app.add_subcommand("build", "train a model from a corpus and save it");
  b->add_option("--model", build.model, "ri, lsa or esa")->required();
  b->add_option("--lang", build.lang, "language code");
  b->add_option("--corpus", build.corpus, "one-document-per-line file or a directory")
      ->required();
  b->add_option("--dim", build.dim, "RI vector length, LSA k or ESA max concepts");
  b->add_option("--window", build.window, "RI co-occurrence window radius");
  b->add_option("--config", build.config, "key = value build config file");
  b->add_option("--min-count", build.min_count, "minimum term frequency");
  b->add_option("--seed", build.seed, "RI index / LSA sketch seed");
  b->add_option("--stopwords", build.stopwords, "stopword list");
  b->add_flag("--no-stopwords", build.no_stopwords, "disable stopword filtering");
  b->add_option("--model-dir", build.model_dir, "registry root (default $DINFRA_MODEL_DIR)");
  b->add_option("--corpus-id", build.corpus_id, "corpus label stored with the model");
  b->add_flag("--overwrite", build.overwrite, "replace an existing model with the same key");
  b->add_flag("--json", build.json, "print the descriptor as JSON");

  EvalArgs eval;
  auto* e = app.add_subcommand("eval", "Spearman correlation against a word-pair dataset");
  e->add_option("--dataset", eval.dataset, "ws353, rg or mc");
  e->add_option("--gold", eval.gold, "custom word1<TAB>word2<TAB>score file");
  e->add_option("--lang", eval.lang, "language code")->required();
  e->add_option("--model", eval.model, "ri, lsa or esa")->required();
  e->add_option("--measure", eval.measure, "cosine, euclidean or correlation");
  e->add_option("--oov", eval.oov, "skip or zero");
  e->add_option("--model-dir", eval.model_dir, "registry root");
  e->add_option("--dataset-dir", eval.dataset_dir, "dataset root (default $DINFRA_DATASET_DIR)");
  e->add_flag("--json", eval.json, "JSON output");

  QueryArgs query;
  auto* q = app.add_subcommand("query", "relatedness of a main term to target terms");
  q->add_option("--main", query.main, "main term")->required();
  q->add_option("--targets", query.targets, "comma-separated target terms")->required();
  q->add_option("--lang", query.lang, "language code")->required();
  q->add_option("--model", query.model, "ri, lsa or esa")->required();
  q->add_option("--measure", query.measure, "cosine, euclidean or correlation");
  q->add_option("--model-dir", query.model_dir, "registry root");
  q->add_flag("--json", query.json, "JSON output");

  ServeArgs serve;
  auto* s = app.add_subcommand("serve", "run the JSON HTTP service");
  s->add_option("--port", serve.port, "port (default $DINFRA_PORT or 8008)");
  s->add_option("--host", serve.host, "bind address");
  s->add_option("--model-dir", serve.model_dir, "registry root");
  s->add_option("--dataset-dir", serve.dataset_dir, "dataset root");
  s->add_option("--ui-dir", serve.ui_dir, "static files served under /ui/ (default $DINFRA_UI_DIR or the bundled ui/)");

  std::string list_dir, list_lang, list_model;
  bool list_json = false;
  auto* l = app.add_subcommand("list", "list registered models");
  l->add_option("--model-dir", list_dir, "registry root");
  l->add_option("--lang", list_lang, "filter by language");
  l->add_option("--model", list_model, "filter by kind");
  l->add_flag("--json", list_json, "JSON output");

  std::string fsck_dir;
  auto* f = app.add_subcommand("fsck", "verify every registered model file");
  f->add_option("--model-dir", fsck_dir, "registry root");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& err) {
    return app.exit(err);
  } catch (const CLI::CallForAllHelp& err) {
    return app.exit(err);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return kUsage;
  }

  try {
    if (b->parsed()) return run_build(build);
    if (e->parsed()) return run_eval(eval);
    if (q->parsed()) return run_query(query);
    if (s->parsed()) return run_serve(serve);
    if (l->parsed()) return run_list(list_dir, list_lang, list_model, list_json);
    if (f->parsed()) return run_fsck(fsck_dir);
  } catch (const Error& err) {
    std::cerr << "dinfra: " << to_string(err.kind()) << ": " << err.what() << "\n";
    return exit_code_for(err.kind());
  } catch (const std::exception& err) {
    std::cerr << "dinfra: " << err.what() << "\n";
    return kData;
  }
  return kUsage;
}
