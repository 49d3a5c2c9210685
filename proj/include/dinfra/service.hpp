#pragma once

#include <atomic>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "dinfra/evaluation.hpp"
#include "dinfra/registry.hpp"
#include "dinfra/similarity.hpp"

namespace httplib {
class Server;
}

namespace dinfra {

struct ServiceOptions {
  std::filesystem::path model_dir;
  std::filesystem::path dataset_dir = "datasets";
  /// Static UI assets served under /ui/ when the directory exists.
  std::filesystem::path ui_dir;
  std::size_t model_cache_capacity = 6;
};

struct RelatednessRequest {
  std::string main_term;
  std::vector<std::string> target_set;
  std::string language;
  Measure measure = Measure::Cosine;
  ModelKind model_kind = ModelKind::ESA;
};

struct CorrelationRequest {
  DatasetName dataset = DatasetName::WS353;
  std::string language;
  Measure measure = Measure::Cosine;
  ModelKind model_kind = ModelKind::ESA;
  OovPolicy oov_policy = OovPolicy::Skip;
};

/// Error carrying the HTTP status and machine-readable code of the response.
class ApiError : public std::runtime_error {
 public:
  ApiError(int status, std::string code, const std::string& message)
      : std::runtime_error(message), status_(status), code_(std::move(code)) {}
  int status() const noexcept { return status_; }
  const std::string& code() const noexcept { return code_; }

 private:
  int status_;
  std::string code_;
};

/// Throws ApiError(400, "bad_request" | "unsupported_language").
RelatednessRequest parse_relatedness_request(const nlohmann::json& body);
CorrelationRequest parse_correlation_request(const nlohmann::json& body);

struct ApiResponse {
  int status = 200;
  nlohmann::json body;
  std::map<std::string, std::string> headers;

  std::string dump() const { return body.dump(); }
};

/// Transport-independent request handling; HTTP routes are thin adapters
/// over these. All handlers are safe to call concurrently.
class Service {
 public:
  explicit Service(ServiceOptions options);
  ~Service();

  ApiResponse relatedness(const nlohmann::json& body);
  ApiResponse correlation(const nlohmann::json& body);
  ApiResponse models() const;
  ApiResponse languages() const;
  ApiResponse health() const;
  ApiResponse schema() const;

  /// Computes a relatedness response, shared by the HTTP route and the CLI.
  nlohmann::json relatedness_json(const RelatednessRequest& request);

  /// Binds and serves until stop(). Returns false if the port is unavailable.
  bool listen(const std::string& host, int port);
  /// Binds only; use with run() for callers that need to know the port.
  bool bind(const std::string& host, int port);
  int bind_any_port(const std::string& host);
  void run();
  void stop();

  ModelRegistry& registry() noexcept { return *registry_; }

 private:
  void make_server();
  void install_routes();
  std::shared_ptr<const DsmModel> require_model(const std::string& language,
                                                ModelKind kind,
                                                std::string* fingerprint = nullptr);

  ServiceOptions options_;
  std::unique_ptr<ModelRegistry> registry_;
  std::unique_ptr<httplib::Server> server_;
  std::mutex cache_mutex_;
  std::map<std::string, std::string> correlation_cache_;
};

/// `{code, message}` error body.
nlohmann::json error_body(const std::string& code, const std::string& message);

/// DINFRA_PORT, falling back to 8008.
int default_port();

}  // namespace dinfra
