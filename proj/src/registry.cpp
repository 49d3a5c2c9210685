#include "dinfra/registry.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <ctime>
#include <fstream>
#include <sstream>

#include "dinfra/error.hpp"
#include "dinfra/esa.hpp"
#include "dinfra/hash.hpp"
#include "dinfra/lsa.hpp"
#include "dinfra/ri.hpp"

namespace dinfra {

using nlohmann::json;

namespace {

constexpr char kMagic[10] = {'D', 'I', 'N', 'F', 'R', 'A', 'D', 'S', 'M', '\0'};
constexpr std::uint32_t kFormatVersion = 1;
constexpr const char* kManifest = "manifest.tsv";
constexpr const char* kManifestHeader =
    "language\tkind\tfingerprint\tcorpus_id\tcreated_at\tfile";

static_assert(std::endian::native == std::endian::little,
              "model container I/O assumes a little-endian host");

class Writer {
 public:
  template <typename T>
  void put(T value) {
    static_assert(std::is_trivially_copyable_v<T>);
    const auto* p = reinterpret_cast<const unsigned char*>(&value);
    bytes_.insert(bytes_.end(), p, p + sizeof(T));
  }
  void put_bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    bytes_.insert(bytes_.end(), p, p + n);
  }
  void put_string(std::string_view s) {
    put(static_cast<std::uint32_t>(s.size()));
    put_bytes(s.data(), s.size());
  }
  template <typename T>
  void put_array(std::span<const T> values) {
    put_bytes(values.data(), values.size_bytes());
  }
  std::vector<unsigned char>& bytes() { return bytes_; }

 private:
  std::vector<unsigned char> bytes_;
};

class Reader {
 public:
  explicit Reader(std::span<const unsigned char> bytes) : bytes_(bytes) {}

  template <typename T>
  T get() {
    T value;
    std::memcpy(&value, take(sizeof(T)).data(), sizeof(T));
    return value;
  }
  std::string get_string() {
    const auto n = get<std::uint32_t>();
    const auto s = take(n);
    return {reinterpret_cast<const char*>(s.data()), s.size()};
  }
  template <typename T>
  std::vector<T> get_array(std::size_t count) {
    if (count > bytes_.size() / sizeof(T) + 1) truncated();
    std::vector<T> out(count);
    const auto s = take(count * sizeof(T));
    std::memcpy(out.data(), s.data(), s.size());
    return out;
  }
  std::span<const unsigned char> take(std::size_t n) {
    if (n > bytes_.size() - pos_) truncated();
    auto s = bytes_.subspan(pos_, n);
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  [[noreturn]] static void truncated() {
    throw Error(ErrorKind::Parse, "model file is truncated or malformed");
  }
  std::span<const unsigned char> bytes_;
  std::size_t pos_ = 0;
};

std::string hex16(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string utc_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  const auto ms =
      std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() %
      1000;
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  char out[48];
  std::snprintf(out, sizeof out, "%s.%03lldZ", buf, static_cast<long long>(ms));
  return out;
}

std::string sanitize_field(std::string s) {
  for (char& c : s)
    if (c == '\t' || c == '\n' || c == '\r') c = ' ';
  return s;
}

ModelDescriptor descriptor_from_json(const json& j) {
  ModelDescriptor d;
  d.language = j.at("language").get<std::string>();
  d.kind = parse_model_kind(j.at("kind").get<std::string>());
  d.config_fingerprint = j.at("config_fingerprint").get<std::string>();
  d.corpus_id = j.at("corpus_id").get<std::string>();
  d.created_at = j.at("created_at").get<std::string>();
  d.file_path = j.at("file_path").get<std::string>();
  return d;
}

void write_vocabulary(Writer& w, const Vocabulary& vocab) {
  w.put(static_cast<std::uint64_t>(vocab.size()));
  for (const auto& e : vocab.entries()) {
    w.put_string(e.term);
    w.put(e.frequency);
    w.put(e.doc_frequency);
  }
}

Vocabulary read_vocabulary(Reader& r, TokenizerOptions tokenizer) {
  const auto n = r.get<std::uint64_t>();
  std::vector<Vocabulary::Entry> entries;
  for (std::uint64_t i = 0; i < n; ++i) {
    Vocabulary::Entry e;
    e.term = r.get_string();
    e.frequency = r.get<std::uint64_t>();
    e.doc_frequency = r.get<std::uint64_t>();
    entries.push_back(std::move(e));
  }
  return Vocabulary(std::move(tokenizer), std::move(entries));
}

// Serializes in-process saves; flock covers other processes.
std::mutex& save_mutex() {
  static std::mutex m;
  return m;
}

class DirectoryLock {
 public:
  explicit DirectoryLock(const std::filesystem::path& root) {
    fd_ = ::open((root / ".lock").c_str(), O_CREAT | O_RDWR, 0644);
    if (fd_ >= 0) ::flock(fd_, LOCK_EX);
  }
  ~DirectoryLock() {
    if (fd_ >= 0) {
      ::flock(fd_, LOCK_UN);
      ::close(fd_);
    }
  }
  DirectoryLock(const DirectoryLock&) = delete;
  DirectoryLock& operator=(const DirectoryLock&) = delete;

 private:
  int fd_ = -1;
};

std::filesystem::path temp_sibling(const std::filesystem::path& target) {
  static std::atomic<unsigned> counter{0};
  return target.parent_path() / ("." + target.filename().string() + ".tmp-" +
                                 std::to_string(::getpid()) + "-" +
                                 std::to_string(counter.fetch_add(1)));
}

void write_atomically(const std::filesystem::path& target, std::span<const unsigned char> data) {
  const auto tmp = temp_sibling(target);
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write " + tmp.string());
    out.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(data.size()));
    out.flush();
    if (!out) throw Error(ErrorKind::Io, "write failed: " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw Error(ErrorKind::Io, "cannot rename into " + target.string() + ": " + ec.message());
  }
}

std::vector<ModelDescriptor> read_manifest(const std::filesystem::path& root) {
  std::vector<ModelDescriptor> out;
  std::ifstream in(root / kManifest, std::ios::binary);
  if (!in) return out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line == kManifestHeader) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, '\t')) f.push_back(field);
    if (f.size() != 6)
      throw Error(ErrorKind::Parse, "manifest line " + std::to_string(line_no) +
                                        ": expected 6 fields");
    out.push_back({f[0], parse_model_kind(f[1]), f[2], f[3], f[4], f[5]});
  }
  return out;
}

void write_manifest(const std::filesystem::path& root,
                    const std::vector<ModelDescriptor>& entries) {
  std::string text = std::string(kManifestHeader) + "\n";
  for (const auto& d : entries) {
    text += d.language + "\t" + std::string(to_string(d.kind)) + "\t" + d.config_fingerprint +
            "\t" + sanitize_field(d.corpus_id) + "\t" + d.created_at + "\t" +
            d.file_path.generic_string() + "\n";
  }
  write_atomically(root / kManifest,
                   std::span(reinterpret_cast<const unsigned char*>(text.data()), text.size()));
}

bool same_key(const ModelDescriptor& a, const ModelDescriptor& b) {
  return a.language == b.language && a.kind == b.kind &&
         a.config_fingerprint == b.config_fingerprint;
}

std::string cache_key(const ModelDescriptor& d) {
  return d.language + "|" + std::string(to_string(d.kind)) + "|" + d.config_fingerprint;
}

}  // namespace

json to_json(const ModelDescriptor& d) {
  return {{"language", d.language},
          {"kind", std::string(to_string(d.kind))},
          {"config_fingerprint", d.config_fingerprint},
          {"corpus_id", d.corpus_id},
          {"created_at", d.created_at},
          {"file_path", d.file_path.generic_string()}};
}

json model_config_json(const DsmModel& model) {
  const auto& vocab = model.vocabulary();
  json j = {{"kind", std::string(to_string(model.kind()))},
            {"language", vocab.language()},
            {"stemming", vocab.tokenizer().stemming},
            {"vocabulary_size", vocab.size()},
            {"vocabulary_fingerprint", hex16(vocab.fingerprint())}};
  if (const auto* ri = dynamic_cast<const RiModel*>(&model)) {
    const auto& c = ri->config();
    j["dimension"] = c.dimension;
    j["nnz"] = c.nnz;
    j["window_size"] = c.window_size;
    j["seed"] = c.seed;
  } else if (const auto* lsa = dynamic_cast<const LsaModel*>(&model)) {
    const auto& c = lsa->config();
    j["k"] = c.k;
    j["weighting"] = std::string(to_string(c.weighting));
    j["svd_seed"] = c.svd_seed;
    j["power_iterations"] = c.power_iterations;
    j["oversampling"] = c.oversampling;
    j["tolerance"] = c.tolerance;
    j["max_power_iterations"] = c.max_power_iterations;
  } else if (const auto* esa = dynamic_cast<const EsaModel*>(&model)) {
    const auto& c = esa->config();
    j["max_concepts"] = c.max_concepts;
    j["prune_window"] = c.prune_window;
    j["prune_threshold"] = c.prune_threshold;
    j["n_concepts"] = esa->n_concepts();
  }
  return j;
}

std::string config_fingerprint(const DsmModel& model) {
  return hex16(fnv1a64(model_config_json(model).dump()));
}

ModelDescriptor describe(const DsmModel& model, std::string corpus_id) {
  ModelDescriptor d;
  d.language = model.language();
  d.kind = model.kind();
  d.config_fingerprint = config_fingerprint(model);
  d.corpus_id = std::move(corpus_id);
  d.created_at = utc_now();
  d.file_path = d.language + "-" + std::string(to_string(d.kind)) + "-" +
                d.config_fingerprint + ".dsm";
  return d;
}

std::vector<unsigned char> serialize_model(const DsmModel& model,
                                           const ModelDescriptor& descriptor) {
  Writer w;
  w.put_bytes(kMagic, sizeof kMagic);
  w.put(kFormatVersion);
  const json meta = {{"descriptor", to_json(descriptor)}, {"config", model_config_json(model)}};
  const std::string meta_text = meta.dump();
  w.put(static_cast<std::uint64_t>(meta_text.size()));
  w.put_bytes(meta_text.data(), meta_text.size());
  write_vocabulary(w, model.vocabulary());

  if (const auto* ri = dynamic_cast<const RiModel*>(&model)) {
    w.put(ri->config().dimension);
    w.put(static_cast<std::uint64_t>(ri->vocabulary().size()));
    w.put_array(ri->raw_norms());
    w.put_array(ri->stored_vectors());
  } else if (const auto* lsa = dynamic_cast<const LsaModel*>(&model)) {
    w.put(lsa->config().k);
    w.put(static_cast<std::uint64_t>(lsa->vocabulary().size()));
    w.put_array(lsa->singular_values());
    w.put_array(lsa->raw_norms());
    w.put_array(lsa->stored_vectors());
  } else if (const auto* esa = dynamic_cast<const EsaModel*>(&model)) {
    std::uint64_t nnz = 0;
    for (TermId t = 0; t < esa->vocabulary().size(); ++t) nnz += esa->concepts(t).size();
    w.put(esa->n_concepts());
    w.put(nnz);
    for (TermId t = 0; t < esa->vocabulary().size(); ++t) {
      for (const auto& c : esa->concepts(t)) {
        w.put(static_cast<std::uint32_t>(t));
        w.put(c.id);
        w.put(c.weight);
      }
    }
  } else {
    throw Error(ErrorKind::Config, "unsupported model type for serialization");
  }
  const std::uint64_t checksum = fnv1a64(std::span<const unsigned char>(w.bytes()));
  w.put(checksum);
  return std::move(w.bytes());
}

std::shared_ptr<const DsmModel> deserialize_model(std::span<const unsigned char> bytes,
                                                  ModelDescriptor* descriptor) {
  if (bytes.size() < sizeof kMagic + sizeof(std::uint32_t) + 2 * sizeof(std::uint64_t))
    throw Error(ErrorKind::Parse, "model file is too short");
  const auto body = bytes.first(bytes.size() - sizeof(std::uint64_t));
  std::uint64_t stored;
  std::memcpy(&stored, bytes.data() + body.size(), sizeof stored);
  if (fnv1a64(body) != stored)
    throw Error(ErrorKind::Checksum, "model file checksum mismatch (corrupted file)");

  Reader r(body);
  if (std::memcmp(r.take(sizeof kMagic).data(), kMagic, sizeof kMagic) != 0)
    throw Error(ErrorKind::Parse, "not a model file (bad magic)");
  if (const auto version = r.get<std::uint32_t>(); version != kFormatVersion)
    throw Error(ErrorKind::Parse, "unsupported model format version " + std::to_string(version));
  const auto meta_len = r.get<std::uint64_t>();
  const auto meta_bytes = r.take(meta_len);
  json meta;
  try {
    meta = json::parse(meta_bytes.begin(), meta_bytes.end());
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("model metadata is not valid JSON: ") + e.what());
  }
  try {
    const json& config = meta.at("config");
    const ModelKind kind = parse_model_kind(config.at("kind").get<std::string>());
    TokenizerOptions tokenizer{config.at("language").get<std::string>(),
                               config.at("stemming").get<bool>()};
    Vocabulary vocab = read_vocabulary(r, std::move(tokenizer));
    if (descriptor) *descriptor = descriptor_from_json(meta.at("descriptor"));

    std::shared_ptr<const DsmModel> model;
    if (kind == ModelKind::RI) {
      RiConfig c;
      c.dimension = config.at("dimension").get<std::uint32_t>();
      c.nnz = config.at("nnz").get<std::uint32_t>();
      c.window_size = config.at("window_size").get<int>();
      c.seed = config.at("seed").get<std::uint64_t>();
      if (r.get<std::uint32_t>() != c.dimension || r.get<std::uint64_t>() != vocab.size())
        throw Error(ErrorKind::Parse, "RI vector block shape mismatch");
      auto norms = r.get_array<double>(vocab.size());
      auto vectors = r.get_array<float>(vocab.size() * c.dimension);
      model = std::make_shared<RiModel>(c, std::move(vocab), std::move(vectors), std::move(norms));
    } else if (kind == ModelKind::LSA) {
      LsaConfig c;
      c.k = config.at("k").get<std::uint32_t>();
      c.weighting = parse_weighting(config.at("weighting").get<std::string>());
      c.svd_seed = config.at("svd_seed").get<std::uint64_t>();
      c.power_iterations = config.at("power_iterations").get<int>();
      c.oversampling = config.at("oversampling").get<int>();
      c.tolerance = config.at("tolerance").get<double>();
      c.max_power_iterations = config.at("max_power_iterations").get<int>();
      if (r.get<std::uint32_t>() != c.k || r.get<std::uint64_t>() != vocab.size())
        throw Error(ErrorKind::Parse, "LSA vector block shape mismatch");
      auto sigma = r.get_array<double>(c.k);
      auto norms = r.get_array<double>(vocab.size());
      auto vectors = r.get_array<float>(vocab.size() * c.k);
      model = std::make_shared<LsaModel>(c, std::move(vocab), std::move(vectors),
                                         std::move(norms), std::move(sigma));
    } else {
      EsaConfig c;
      c.max_concepts = config.at("max_concepts").get<std::uint32_t>();
      c.prune_window = config.at("prune_window").get<std::uint32_t>();
      c.prune_threshold = config.at("prune_threshold").get<double>();
      const auto n_concepts = r.get<std::uint32_t>();
      const auto nnz = r.get<std::uint64_t>();
      std::vector<std::vector<Concept>> concepts(vocab.size());
      for (std::uint64_t i = 0; i < nnz; ++i) {
        const auto t = r.get<std::uint32_t>();
        const auto id = r.get<std::uint32_t>();
        const auto weight = r.get<float>();
        if (t >= concepts.size()) throw Error(ErrorKind::Parse, "ESA term id out of range");
        concepts[t].push_back({id, weight});
      }
      model = std::make_shared<EsaModel>(c, std::move(vocab), std::move(concepts), n_concepts);
    }
    if (!r.done()) throw Error(ErrorKind::Parse, "trailing bytes in model file");
    return model;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("model metadata is incomplete: ") + e.what());
  }
}

std::filesystem::path save_model(const DsmModel& model, const ModelDescriptor& descriptor,
                                 const std::filesystem::path& root, SaveOptions options) {
  std::error_code ec;
  std::filesystem::create_directories(root, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create registry root " + root.string() + ": " +
                                         ec.message());
  ModelDescriptor d = descriptor;
  if (d.file_path.empty())
    d.file_path = d.language + "-" + std::string(to_string(d.kind)) + "-" +
                  d.config_fingerprint + ".dsm";
  if (d.file_path.is_absolute())
    d.file_path = std::filesystem::relative(d.file_path, root);

  std::lock_guard guard(save_mutex());
  DirectoryLock lock(root);
  auto entries = read_manifest(root);
  auto existing = std::find_if(entries.begin(), entries.end(),
                               [&](const auto& e) { return same_key(e, d); });
  if (existing != entries.end() && !options.overwrite)
    throw Error(ErrorKind::Duplicate, "model (" + d.language + ", " +
                                          std::string(to_string(d.kind)) + ", " +
                                          d.config_fingerprint + ") already registered");

  const auto bytes = serialize_model(model, d);
  const auto target = root / d.file_path;
  write_atomically(target, bytes);
  if (existing != entries.end()) {
    *existing = d;
  } else {
    entries.push_back(d);
  }
  write_manifest(root, entries);
  return std::filesystem::absolute(target);
}

std::shared_ptr<const DsmModel> load_model_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorKind::NotFound, "model file not found: " + file.string());
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                   std::istreambuf_iterator<char>());
  try {
    return deserialize_model(bytes);
  } catch (const Error& e) {
    throw Error(e.kind(), file.string() + ": " + e.what());
  }
}

std::shared_ptr<const DsmModel> load_model(const std::filesystem::path& root,
                                           const ModelDescriptor& descriptor) {
  return load_model_file(root / descriptor.file_path);
}

std::vector<ModelDescriptor> list_models(const std::filesystem::path& root,
                                         const ModelFilter& filter) {
  auto entries = read_manifest(root);
  std::erase_if(entries, [&](const ModelDescriptor& d) {
    return (filter.language && d.language != *filter.language) ||
           (filter.kind && d.kind != *filter.kind);
  });
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    return std::tie(a.language, a.kind, a.config_fingerprint) <
           std::tie(b.language, b.kind, b.config_fingerprint);
  });
  return entries;
}

std::vector<std::string> check_registry(const std::filesystem::path& root) {
  std::vector<std::string> problems;
  std::vector<ModelDescriptor> entries;
  try {
    entries = read_manifest(root);
  } catch (const Error& e) {
    return {e.what()};
  }
  for (const auto& d : entries) {
    const auto file = root / d.file_path;
    if (!std::filesystem::exists(file)) {
      problems.push_back("missing model file: " + file.string());
      continue;
    }
    try {
      std::ifstream in(file, std::ios::binary);
      std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                       std::istreambuf_iterator<char>());
      ModelDescriptor stored;
      const auto model = deserialize_model(bytes, &stored);
      if (!same_key(stored, d) || config_fingerprint(*model) != d.config_fingerprint)
        problems.push_back("descriptor mismatch: " + file.string());
    } catch (const Error& e) {
      problems.push_back(file.string() + ": " + e.what());
    }
  }
  return problems;
}

std::filesystem::path default_model_dir() {
  if (const char* env = std::getenv("DINFRA_MODEL_DIR"); env && *env) return env;
  return "models";
}

// ---------------------------------------------------------------------------

ModelRegistry::ModelRegistry(std::filesystem::path root, std::size_t capacity)
    : root_(std::move(root)), capacity_(std::max<std::size_t>(capacity, 1)) {}

std::vector<ModelDescriptor> ModelRegistry::list(const ModelFilter& filter) const {
  return list_models(root_, filter);
}

std::optional<ModelDescriptor> ModelRegistry::find(const std::string& language,
                                                   ModelKind kind) const {
  const auto entries = list({language, kind});
  if (entries.empty()) return std::nullopt;
  return *std::max_element(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    return std::tie(a.created_at, a.config_fingerprint) <
           std::tie(b.created_at, b.config_fingerprint);
  });
}

std::shared_ptr<const DsmModel> ModelRegistry::get(const ModelDescriptor& descriptor) {
  const auto key = cache_key(descriptor);
  std::lock_guard guard(mutex_);
  for (auto it = cache_.begin(); it != cache_.end(); ++it) {
    if (it->first == key) {
      cache_.splice(cache_.begin(), cache_, it);
      return cache_.front().second;
    }
  }
  auto model = load_model(root_, descriptor);
  cache_.emplace_front(key, model);
  while (cache_.size() > capacity_) cache_.pop_back();
  return model;
}

std::shared_ptr<const DsmModel> ModelRegistry::get(const std::string& language,
                                                   ModelKind kind) {
  const auto d = find(language, kind);
  if (!d)
    throw Error(ErrorKind::NotFound, "no " + std::string(to_string(kind)) +
                                         " model registered for language '" + language + "'");
  return get(*d);
}

std::size_t ModelRegistry::loaded_count() const {
  std::lock_guard guard(mutex_);
  return cache_.size();
}

}  // namespace dinfra
