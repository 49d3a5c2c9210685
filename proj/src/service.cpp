#include "dinfra/service.hpp"

#include <cstdlib>
#include <sstream>

#include "httplib.h"

#include "dinfra/error.hpp"

namespace dinfra {

using nlohmann::json;

namespace {

[[noreturn]] void bad_request(const std::string& message) {
  throw ApiError(400, "bad_request", message);
}

const json& require_field(const json& body, const char* name) {
  if (!body.contains(name)) bad_request(std::string("missing field '") + name + "'");
  return body.at(name);
}

std::string require_string(const json& body, const char* name) {
  const json& v = require_field(body, name);
  if (!v.is_string()) bad_request(std::string("field '") + name + "' must be a string");
  return v.get<std::string>();
}

void require_object(const json& body) {
  if (!body.is_object()) bad_request("request body must be a JSON object");
}

std::string require_language(const json& body) {
  auto language = require_string(body, "language");
  if (!is_supported_language(language))
    throw ApiError(400, "unsupported_language", "unsupported language: '" + language + "'");
  return language;
}

template <typename Fn>
auto parse_enum(const json& body, const char* name, Fn&& parse) {
  const auto text = require_string(body, name);
  try {
    return parse(text);
  } catch (const Error& e) {
    bad_request(e.what());
  }
}

ApiResponse error_response(int status, const std::string& code, const std::string& message) {
  return {status, error_body(code, message), {}};
}

// Maps the failure of a handler onto the documented error responses.
template <typename Fn>
ApiResponse guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const ApiError& e) {
    return error_response(e.status(), e.code(), e.what());
  } catch (const TermNotFoundError& e) {
    return error_response(422, "term_not_found", e.what());
  } catch (const Error& e) {
    switch (e.kind()) {
      case ErrorKind::Coverage: return error_response(422, "insufficient_coverage", e.what());
      case ErrorKind::UndefinedSimilarity:
        return error_response(422, "undefined_similarity", e.what());
      case ErrorKind::Config: return error_response(400, "bad_request", e.what());
      default: return error_response(500, "internal_error", e.what());
    }
  } catch (const std::exception& e) {
    return error_response(500, "internal_error", e.what());
  }
}

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

// GET alias: query parameters -> the JSON body the POST route expects.
json body_from_query(const httplib::Request& req, bool relatedness) {
  json body = json::object();
  for (const auto& [key, value] : req.params) {
    if (relatedness && (key == "target_set" || key == "targets")) {
      auto& set = body["target_set"];
      if (!set.is_array()) set = json::array();
      for (auto& t : split_commas(value)) set.push_back(t);
    } else {
      body[key] = value;
    }
  }
  return body;
}

void send(httplib::Response& res, const ApiResponse& r) {
  res.status = r.status;
  for (const auto& [k, v] : r.headers) res.set_header(k, v);
  res.set_content(r.dump(), "application/json");
}

json parse_body_or_throw(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ApiError(400, "bad_request", std::string("malformed JSON body: ") + e.what());
  }
}

const json& schema_document() {
  static const json doc = json::parse(R"JSON({
  "openapi": "3.0.3",
  "info": {"title": "dinfra semantic relatedness service", "version": "1.0.0"},
  "paths": {
    "/relatedness": {
      "post": {"requestBody": {"$ref": "#/components/schemas/RelatednessRequest"},
               "responses": {"200": {"$ref": "#/components/schemas/RelatednessResponse"},
                             "400": {"$ref": "#/components/schemas/Error"},
                             "404": {"$ref": "#/components/schemas/Error"},
                             "422": {"$ref": "#/components/schemas/Error"}}},
      "get": {"parameters": ["main_term", "target_set (comma separated)", "language",
                             "measure", "model_kind"]}
    },
    "/correlation": {
      "post": {"requestBody": {"$ref": "#/components/schemas/CorrelationRequest"},
               "responses": {"200": {"$ref": "#/components/schemas/CorrelationResponse"},
                             "400": {"$ref": "#/components/schemas/Error"},
                             "404": {"$ref": "#/components/schemas/Error"},
                             "422": {"$ref": "#/components/schemas/Error"}}},
      "get": {"parameters": ["dataset", "language", "measure", "model_kind", "oov_policy"]}
    },
    "/models": {"get": {"responses": {"200": {"type": "array",
                                              "items": {"$ref": "#/components/schemas/ModelDescriptor"}}}}},
    "/languages": {"get": {"responses": {"200": {"type": "array", "items": {"type": "string"}}}}},
    "/health": {"get": {"responses": {"200": {"type": "object",
                                              "properties": {"status": {"type": "string"},
                                                             "loaded_models": {"type": "integer"}}}}}},
    "/schema": {"get": {}}
  },
  "components": {"schemas": {
    "Language": {"type": "string",
                 "enum": ["en", "pt", "de", "es", "fr", "sv", "it", "nl", "zh", "ru", "ar", "fa"]},
    "Measure": {"type": "string", "enum": ["cosine", "euclidean", "correlation"]},
    "ModelKind": {"type": "string", "enum": ["ri", "lsa", "esa"]},
    "RelatednessRequest": {
      "type": "object",
      "required": ["main_term", "target_set", "language", "measure", "model_kind"],
      "properties": {
        "main_term": {"type": "string"},
        "target_set": {"type": "array", "items": {"type": "string"}, "minItems": 1, "maxItems": 100},
        "language": {"$ref": "#/components/schemas/Language"},
        "measure": {"$ref": "#/components/schemas/Measure"},
        "model_kind": {"$ref": "#/components/schemas/ModelKind"}}},
    "RelatednessResponse": {
      "type": "object",
      "properties": {
        "main_term": {"type": "string"}, "language": {"type": "string"},
        "measure": {"type": "string"}, "model_kind": {"type": "string"},
        "results": {"type": "array", "items": {"oneOf": [
          {"type": "object", "required": ["target", "score", "raw"],
           "properties": {"target": {"type": "string"},
                          "score": {"type": "number", "minimum": 0, "maximum": 1},
                          "raw": {"type": "number"}}},
          {"type": "object", "required": ["target", "error"],
           "properties": {"target": {"type": "string"}, "error": {"type": "string"}}}]}}}},
    "CorrelationRequest": {
      "type": "object",
      "required": ["dataset", "language", "measure", "model_kind"],
      "properties": {
        "dataset": {"type": "string", "enum": ["ws353", "rg", "mc"]},
        "language": {"$ref": "#/components/schemas/Language"},
        "measure": {"$ref": "#/components/schemas/Measure"},
        "model_kind": {"$ref": "#/components/schemas/ModelKind"},
        "oov_policy": {"type": "string", "enum": ["skip", "zero"], "default": "skip"}}},
    "CorrelationResponse": {
      "type": "object",
      "properties": {
        "rho": {"type": ["number", "null"], "minimum": -1, "maximum": 1},
        "n_scored": {"type": "integer"}, "n_skipped": {"type": "integer"},
        "dataset": {"type": "string"}, "language": {"type": "string"},
        "measure": {"type": "string"}, "model_kind": {"type": "string"},
        "oov_policy": {"type": "string"}, "model_fingerprint": {"type": "string"}}},
    "ModelDescriptor": {
      "type": "object",
      "properties": {"language": {"type": "string"}, "kind": {"type": "string"},
                     "config_fingerprint": {"type": "string"}, "corpus_id": {"type": "string"},
                     "created_at": {"type": "string"}, "file_path": {"type": "string"}}},
    "Error": {"type": "object", "required": ["code", "message"],
              "properties": {"code": {"type": "string"}, "message": {"type": "string"}}}
  }}
})JSON");
  return doc;
}

}  // namespace

json error_body(const std::string& code, const std::string& message) {
  return {{"code", code}, {"message", message}};
}

int default_port() {
  if (const char* env = std::getenv("DINFRA_PORT"); env && *env) {
    try {
      return std::stoi(env);
    } catch (const std::exception&) {
    }
  }
  return 8008;
}

RelatednessRequest parse_relatedness_request(const json& body) {
  require_object(body);
  RelatednessRequest r;
  r.main_term = require_string(body, "main_term");
  if (r.main_term.empty()) bad_request("main_term must not be empty");
  const json& targets = require_field(body, "target_set");
  if (!targets.is_array()) bad_request("target_set must be an array of strings");
  if (targets.empty() || targets.size() > 100)
    bad_request("target_set must hold between 1 and 100 terms");
  for (const auto& t : targets) {
    if (!t.is_string()) bad_request("target_set must be an array of strings");
    r.target_set.push_back(t.get<std::string>());
  }
  r.language = require_language(body);
  r.measure = parse_enum(body, "measure", parse_measure);
  r.model_kind = parse_enum(body, "model_kind", parse_model_kind);
  return r;
}

CorrelationRequest parse_correlation_request(const json& body) {
  require_object(body);
  CorrelationRequest r;
  r.dataset = parse_enum(body, "dataset", parse_dataset_name);
  if (r.dataset == DatasetName::Custom) bad_request("dataset must be one of ws353, rg, mc");
  r.language = require_language(body);
  r.measure = parse_enum(body, "measure", parse_measure);
  r.model_kind = parse_enum(body, "model_kind", parse_model_kind);
  if (body.contains("oov_policy")) r.oov_policy = parse_enum(body, "oov_policy", parse_oov_policy);
  return r;
}

Service::Service(ServiceOptions options)
    : options_(std::move(options)),
      registry_(std::make_unique<ModelRegistry>(
          options_.model_dir.empty() ? default_model_dir() : options_.model_dir,
          options_.model_cache_capacity)) {}

Service::~Service() = default;

std::shared_ptr<const DsmModel> Service::require_model(const std::string& language,
                                                       ModelKind kind,
                                                       std::string* fingerprint) {
  const auto d = registry_->find(language, kind);
  if (!d)
    throw ApiError(404, "model_not_found", "no " + std::string(to_string(kind)) +
                                               " model available for language '" + language +
                                               "'");
  if (fingerprint) *fingerprint = d->config_fingerprint;
  return registry_->get(*d);
}

json Service::relatedness_json(const RelatednessRequest& request) {
  const auto model = require_model(request.language, request.model_kind);
  if (!model->resolve(request.main_term)) throw TermNotFoundError(request.main_term);

  json results = json::array();
  for (const auto& target : request.target_set) {
    try {
      const auto score = dinfra::relatedness(*model, request.main_term, target, request.measure);
      results.push_back({{"target", target}, {"score", score.normalized}, {"raw", score.raw}});
    } catch (const TermNotFoundError& e) {
      results.push_back({{"target", target}, {"error", "term not found"}});
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::UndefinedSimilarity) throw;
      results.push_back({{"target", target}, {"error", e.what()}});
    }
  }
  return {{"main_term", request.main_term},
          {"language", request.language},
          {"measure", std::string(to_string(request.measure))},
          {"model_kind", std::string(to_string(request.model_kind))},
          {"results", std::move(results)}};
}

ApiResponse Service::relatedness(const json& body) {
  return guarded([&] {
    return ApiResponse{200, relatedness_json(parse_relatedness_request(body)), {}};
  });
}

ApiResponse Service::correlation(const json& body) {
  return guarded([&] {
    const auto request = parse_correlation_request(body);
    const auto path = dataset_path(options_.dataset_dir, request.dataset, request.language);
    if (!std::filesystem::is_regular_file(path))
      throw ApiError(404, "dataset_not_found",
                     "no " + std::string(to_string(request.dataset)) + " dataset for language '" +
                         request.language + "'");
    std::string fingerprint;
    const auto model = require_model(request.language, request.model_kind, &fingerprint);
    const std::string key = std::string(to_string(request.dataset)) + "|" + request.language + "|" +
                            std::string(to_string(request.measure)) + "|" +
                            std::string(to_string(request.model_kind)) + "|" + fingerprint + "|" +
                            std::string(to_string(request.oov_policy));
    {
      std::lock_guard guard(cache_mutex_);
      if (auto it = correlation_cache_.find(key); it != correlation_cache_.end())
        return ApiResponse{200, json::parse(it->second), {{"X-Dinfra-Cache", "hit"}}};
    }

    WordPairDataset dataset;
    try {
      dataset = load_dataset(request.dataset, request.language, path);
    } catch (const Error& e) {
      throw ApiError(500, "dataset_invalid", e.what());
    }
    const auto result = evaluate(*model, dataset, request.measure, request.oov_policy);
    json out = {{"rho", result.rho ? json(*result.rho) : json(nullptr)},
                {"n_scored", result.n_scored},
                {"n_skipped", result.n_skipped},
                {"dataset", std::string(to_string(request.dataset))},
                {"language", request.language},
                {"measure", std::string(to_string(request.measure))},
                {"model_kind", std::string(to_string(request.model_kind))},
                {"oov_policy", std::string(to_string(request.oov_policy))},
                {"model_fingerprint", fingerprint}};
    {
      std::lock_guard guard(cache_mutex_);
      correlation_cache_.emplace(key, out.dump());
    }
    return ApiResponse{200, std::move(out), {{"X-Dinfra-Cache", "miss"}}};
  });
}

ApiResponse Service::models() const {
  return guarded([&] {
    json list = json::array();
    for (const auto& d : registry_->list()) list.push_back(to_json(d));
    return ApiResponse{200, std::move(list), {}};
  });
}

ApiResponse Service::languages() const {
  json list = json::array();
  for (auto code : supported_languages()) list.push_back(std::string(code));
  return {200, std::move(list), {}};
}

ApiResponse Service::health() const {
  return {200, {{"status", "ok"}, {"loaded_models", registry_->loaded_count()}}, {}};
}

ApiResponse Service::schema() const { return {200, schema_document(), {}}; }

void Service::install_routes() {
  auto& s = *server_;
  s.Post("/relatedness", [this](const httplib::Request& req, httplib::Response& res) {
    ApiResponse r;
    try {
      r = relatedness(parse_body_or_throw(req.body));
    } catch (const ApiError& e) {
      r = error_response(e.status(), e.code(), e.what());
    }
    send(res, r);
  });
  s.Get("/relatedness", [this](const httplib::Request& req, httplib::Response& res) {
    send(res, relatedness(body_from_query(req, true)));
  });
  s.Post("/correlation", [this](const httplib::Request& req, httplib::Response& res) {
    ApiResponse r;
    try {
      r = correlation(parse_body_or_throw(req.body));
    } catch (const ApiError& e) {
      r = error_response(e.status(), e.code(), e.what());
    }
    send(res, r);
  });
  s.Get("/correlation", [this](const httplib::Request& req, httplib::Response& res) {
    send(res, correlation(body_from_query(req, false)));
  });
  s.Get("/models", [this](const httplib::Request&, httplib::Response& res) { send(res, models()); });
  s.Get("/languages",
        [this](const httplib::Request&, httplib::Response& res) { send(res, languages()); });
  s.Get("/health", [this](const httplib::Request&, httplib::Response& res) { send(res, health()); });
  s.Get("/schema", [this](const httplib::Request&, httplib::Response& res) { send(res, schema()); });

  if (!options_.ui_dir.empty() && std::filesystem::is_directory(options_.ui_dir))
    s.set_mount_point("/ui", options_.ui_dir.string());

  s.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
    // Routes that already produced a JSON body keep it.
    if (!res.body.empty()) return;
    const std::string code = res.status == 404 ? "not_found" : "http_error";
    res.set_content(error_body(code, "no route for " + req.method + " " + req.path).dump(),
                    "application/json");
  });
  s.set_exception_handler(
      [](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        std::string message = "unknown error";
        try {
          std::rethrow_exception(ep);
        } catch (const std::exception& e) {
          message = e.what();
        } catch (...) {
        }
        res.status = 500;
        res.set_content(error_body("internal_error", message).dump(), "application/json");
      });
}

void Service::make_server() {
  server_ = std::make_unique<httplib::Server>();
  // The library default adds SO_REUSEPORT, which lets a second server share
  // an occupied port; plain SO_REUSEADDR makes the bind fail instead.
  server_->set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  install_routes();
}

bool Service::bind(const std::string& host, int port) {
  make_server();
  return server_->bind_to_port(host, port);
}

int Service::bind_any_port(const std::string& host) {
  make_server();
  return server_->bind_to_any_port(host);
}

void Service::run() {
  if (server_) server_->listen_after_bind();
}

bool Service::listen(const std::string& host, int port) {
  if (!bind(host, port)) return false;
  run();
  return true;
}

void Service::stop() {
  if (server_) server_->stop();
}

}  // namespace dinfra
