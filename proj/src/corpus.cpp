#include "dinfra/corpus.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include "dinfra/error.hpp"
#include "dinfra/hash.hpp"
#include "dinfra/sparse_matrix.hpp"

namespace dinfra {
namespace {

constexpr std::array<std::string_view, 12> kLanguages = {
    "en", "pt", "de", "es", "fr", "sv", "it", "nl", "zh", "ru", "ar", "fa"};

// Returns the byte offset of the first malformed sequence, if any.
std::optional<std::size_t> find_invalid_utf8(std::string_view text) {
  const auto* s = reinterpret_cast<const std::uint8_t*>(text.data());
  const auto length = static_cast<std::int32_t>(text.size());
  std::int32_t i = 0;
  while (i < length) {
    const std::int32_t start = i;
    UChar32 c;
    U8_NEXT(s, i, length, c);
    if (c < 0) return static_cast<std::size_t>(start);
  }
  return std::nullopt;
}

const icu::Normalizer2& nfc() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* instance = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status) || instance == nullptr)
    throw Error(ErrorKind::Ingestion, "ICU NFC normalizer unavailable");
  return *instance;
}

icu::UnicodeString normalize_nfc(const icu::UnicodeString& in) {
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString out = nfc().normalize(in, status);
  if (U_FAILURE(status))
    throw Error(ErrorKind::Ingestion, u_errorName(status));
  return out;
}

bool is_mark(UChar32 c) {
  const auto type = static_cast<UCharCategory>(u_charType(c));
  return type == U_NON_SPACING_MARK || type == U_COMBINING_SPACING_MARK ||
         type == U_ENCLOSING_MARK;
}

// ZWNJ/ZWJ occur inside Persian and Arabic words.
bool is_joiner(UChar32 c) { return c == 0x200C || c == 0x200D; }

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() >= suffix.size() &&
         s.substr(s.size() - suffix.size()) == suffix;
}

bool is_vowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u';
}

}  // namespace

std::span<const std::string_view> supported_languages() noexcept {
  return kLanguages;
}

bool is_supported_language(std::string_view code) noexcept {
  return std::find(kLanguages.begin(), kLanguages.end(), code) != kLanguages.end();
}

void require_supported_language(std::string_view code) {
  if (!is_supported_language(code))
    throw Error(ErrorKind::Config,
                "unsupported language: '" + std::string(code) + "'");
}

std::string stem_english(std::string_view token) {
  std::string t(token);
  if (ends_with(t, "sses")) {
    t.resize(t.size() - 2);
  } else if (ends_with(t, "ies") && t.size() > 4) {
    t.resize(t.size() - 3);
    t += 'y';
  } else if (ends_with(t, "s") && !ends_with(t, "ss") && !ends_with(t, "us") &&
             !ends_with(t, "is") && t.size() > 3) {
    t.pop_back();
  }
  for (std::string_view suffix : {std::string_view("ing"), std::string_view("ed")}) {
    if (ends_with(t, suffix) && t.size() >= suffix.size() + 3) {
      std::string stem = t.substr(0, t.size() - suffix.size());
      if (std::none_of(stem.begin(), stem.end(), is_vowel)) continue;
      const std::size_t n = stem.size();
      if (n >= 2 && stem[n - 1] == stem[n - 2] && !is_vowel(stem[n - 1]) &&
          stem[n - 1] != 'l' && stem[n - 1] != 's' && stem[n - 1] != 'z')
        stem.pop_back();
      t = std::move(stem);
      break;
    }
  }
  return t;
}

std::vector<std::string> tokenize(std::string_view text,
                                  const TokenizerOptions& options,
                                  std::uint64_t base_offset) {
  if (auto bad = find_invalid_utf8(text)) {
    throw Error(ErrorKind::Ingestion,
                "invalid UTF-8 at byte offset " + std::to_string(base_offset + *bad));
  }
  std::vector<std::string> tokens;
  if (text.empty()) return tokens;

  icu::UnicodeString u = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<std::int32_t>(text.size())));
  u = normalize_nfc(u);
  u.toLower(icu::Locale::getRoot());
  u = normalize_nfc(u);

  const bool stem = options.stemming && options.language == "en";
  icu::UnicodeString current;
  auto flush = [&] {
    if (current.isEmpty()) return;
    std::string token;
    current.toUTF8String(token);
    current.remove();
    tokens.push_back(stem ? stem_english(token) : std::move(token));
  };
  for (std::int32_t i = 0; i < u.length();) {
    const UChar32 c = u.char32At(i);
    i += U16_LENGTH(c);
    const bool word = u_isalnum(c) || (!current.isEmpty() && (is_mark(c) || is_joiner(c)));
    if (word) {
      current.append(c);
    } else {
      flush();
    }
  }
  flush();
  // Joiners may trail a token; drop them.
  for (auto& token : tokens) {
    while (ends_with(token, "\xE2\x80\x8C") || ends_with(token, "\xE2\x80\x8D"))
      token.resize(token.size() - 3);
  }
  std::erase_if(tokens, [](const std::string& t) { return t.empty(); });
  return tokens;
}

std::optional<std::string> normalize_term(std::string_view term,
                                          const TokenizerOptions& options) {
  std::vector<std::string> tokens;
  try {
    tokens = tokenize(term, options);
  } catch (const Error&) {
    return std::nullopt;
  }
  if (tokens.size() != 1) return std::nullopt;
  return std::move(tokens.front());
}

Stopwords load_stopwords(const std::filesystem::path& path,
                         const TokenizerOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open stopword file: " + path.string());
  Stopwords words;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    for (auto& token : tokenize(line, options)) words.insert(std::move(token));
  }
  return words;
}

// ---------------------------------------------------------------------------

CorpusSource CorpusSource::from_file(std::filesystem::path path,
                                     std::string language, CorpusFormat format) {
  require_supported_language(language);
  std::error_code ec;
  const bool ok = format == CorpusFormat::DocPerFile
                      ? std::filesystem::is_directory(path, ec)
                      : std::filesystem::is_regular_file(path, ec);
  if (!ok) throw Error(ErrorKind::Ingestion, "corpus not found: " + path.string());
  CorpusSource source;
  source.path_ = std::move(path);
  source.language_ = std::move(language);
  source.format_ = format;
  return source;
}

CorpusSource CorpusSource::from_documents(std::vector<std::string> documents,
                                          std::string language) {
  require_supported_language(language);
  CorpusSource source;
  source.language_ = std::move(language);
  source.documents_ = std::move(documents);
  source.in_memory_ = true;
  return source;
}

namespace {

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v';
  });
}

}  // namespace

void CorpusSource::for_each_raw(
    const std::function<void(std::size_t, std::string_view, std::uint64_t)>& visit)
    const {
  std::size_t doc = 0;
  auto emit = [&](std::string_view text, std::uint64_t offset) {
    if (is_blank(text)) return;
    visit(doc++, text, offset);
  };

  if (in_memory_) {
    for (const auto& d : documents_) emit(d, 0);
  } else if (format_ == CorpusFormat::DocPerLine) {
    std::ifstream in(path_, std::ios::binary);
    if (!in) throw Error(ErrorKind::Ingestion, "cannot open corpus: " + path_.string());
    std::string line;
    std::uint64_t offset = 0;
    while (std::getline(in, line)) {
      const std::uint64_t next = offset + line.size() + 1;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      emit(line, offset);
      offset = next;
    }
  } else {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(path_))
      if (entry.is_regular_file()) files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
      std::ifstream in(file, std::ios::binary);
      if (!in) throw Error(ErrorKind::Ingestion, "cannot open corpus file: " + file.string());
      std::ostringstream buffer;
      buffer << in.rdbuf();
      try {
        emit(buffer.str(), 0);
      } catch (const Error& e) {
        throw Error(e.kind(), file.string() + ": " + e.what());
      }
    }
  }
  if (doc == 0) throw Error(ErrorKind::EmptyInput, "corpus contains no documents");
}

void CorpusSource::for_each_document(
    const TokenizerOptions& options,
    const std::function<void(std::size_t, const std::vector<std::string>&)>& visit)
    const {
  for_each_raw([&](std::size_t doc, std::string_view text, std::uint64_t offset) {
    visit(doc, tokenize(text, options, offset));
  });
}

// ---------------------------------------------------------------------------

Vocabulary::Vocabulary(TokenizerOptions options, std::vector<Entry> entries)
    : tokenizer_(std::move(options)), entries_(std::move(entries)) {
  index_.reserve(entries_.size());
  std::uint64_t h = fnv1a64(tokenizer_.language);
  h = fnv1a64(tokenizer_.stemming ? std::string_view("\1") : std::string_view("\0", 1), h);
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (!index_.emplace(entries_[i].term, static_cast<TermId>(i)).second)
      throw Error(ErrorKind::Config, "duplicate vocabulary term: " + entries_[i].term);
    h = fnv1a64(entries_[i].term, h);
    h = fnv1a64(std::string_view("\0", 1), h);
  }
  fingerprint_ = h;
}

std::optional<TermId> Vocabulary::id(std::string_view term) const {
  auto it = index_.find(std::string(term));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<TermId> Vocabulary::lookup(std::string_view raw_term) const {
  auto normalized = normalize_term(raw_term, tokenizer_);
  if (!normalized) return std::nullopt;
  return id(*normalized);
}

bool operator==(const Vocabulary& a, const Vocabulary& b) {
  if (a.tokenizer_.language != b.tokenizer_.language ||
      a.tokenizer_.stemming != b.tokenizer_.stemming ||
      a.entries_.size() != b.entries_.size())
    return false;
  for (std::size_t i = 0; i < a.entries_.size(); ++i) {
    const auto& x = a.entries_[i];
    const auto& y = b.entries_[i];
    if (x.term != y.term || x.frequency != y.frequency ||
        x.doc_frequency != y.doc_frequency)
      return false;
  }
  return true;
}

Vocabulary build_vocabulary(const CorpusSource& source,
                            const VocabularyOptions& options) {
  if (options.min_count < 1)
    throw Error(ErrorKind::Config, "min_count must be >= 1");
  const TokenizerOptions tokenizer{source.language(), options.stemming};

  struct Stats {
    std::uint64_t frequency = 0;
    std::uint64_t doc_frequency = 0;
    std::size_t last_doc = static_cast<std::size_t>(-1);
  };
  std::unordered_map<std::string, Stats> stats;
  source.for_each_document(tokenizer, [&](std::size_t doc, const auto& tokens) {
    for (const auto& token : tokens) {
      auto& s = stats[token];
      ++s.frequency;
      if (s.last_doc != doc) {
        ++s.doc_frequency;
        s.last_doc = doc;
      }
    }
  });

  std::vector<Vocabulary::Entry> entries;
  for (auto& [term, s] : stats) {
    if (s.frequency < options.min_count || options.stopwords.contains(term)) continue;
    entries.push_back({term, s.frequency, s.doc_frequency});
  }
  if (entries.empty())
    throw Error(ErrorKind::EmptyInput,
                "vocabulary is empty after min_count/stopword filtering");
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    if (a.frequency != b.frequency) return a.frequency > b.frequency;
    return a.term < b.term;
  });
  return Vocabulary(tokenizer, std::move(entries));
}

// ---------------------------------------------------------------------------

CooccurrenceCounts CooccurrenceCounts::from_triplets(
    std::size_t n_terms, int window_size, std::uint64_t vocab_fingerprint,
    std::vector<std::tuple<TermId, TermId, std::uint64_t>> triplets) {
  std::sort(triplets.begin(), triplets.end());
  CooccurrenceCounts out;
  out.window_size_ = window_size;
  out.vocab_fingerprint_ = vocab_fingerprint;
  out.offsets_.assign(n_terms + 1, 0);
  for (std::size_t i = 0; i < triplets.size();) {
    const auto [target, context, first] = triplets[i];
    if (target >= n_terms || context >= n_terms)
      throw Error(ErrorKind::Config, "co-occurrence id out of range");
    std::uint64_t total = first;
    std::size_t j = i + 1;
    for (; j < triplets.size() && std::get<0>(triplets[j]) == target &&
           std::get<1>(triplets[j]) == context;
         ++j)
      total += std::get<2>(triplets[j]);
    if (total > 0) {
      out.cells_.push_back({context, total});
      ++out.offsets_[target + 1];
    }
    i = j;
  }
  for (std::size_t t = 0; t < n_terms; ++t) out.offsets_[t + 1] += out.offsets_[t];
  return out;
}

std::span<const CooccurrenceCounts::Cell> CooccurrenceCounts::row(TermId target) const {
  if (target + 1 >= offsets_.size()) return {};
  return std::span(cells_).subspan(offsets_[target],
                                   offsets_[target + 1] - offsets_[target]);
}

std::uint64_t CooccurrenceCounts::count(TermId target, TermId context) const {
  auto cells = row(target);
  auto it = std::lower_bound(cells.begin(), cells.end(), context,
                             [](const Cell& c, TermId id) { return c.context < id; });
  return it != cells.end() && it->context == context ? it->count : 0;
}

std::uint64_t CooccurrenceCounts::total() const noexcept {
  std::uint64_t sum = 0;
  for (const auto& c : cells_) sum += c.count;
  return sum;
}

CooccurrenceCounts CooccurrenceCounts::merged(const CooccurrenceCounts& other) const {
  if (window_size_ != other.window_size_ ||
      vocab_fingerprint_ != other.vocab_fingerprint_ || n_terms() != other.n_terms())
    throw Error(ErrorKind::Config, "cannot merge counts from different vocabularies/windows");
  std::vector<std::tuple<TermId, TermId, std::uint64_t>> triplets;
  triplets.reserve(nnz() + other.nnz());
  for (const auto* counts : {this, &other})
    for (TermId t = 0; t < counts->n_terms(); ++t)
      for (const auto& c : counts->row(t)) triplets.emplace_back(t, c.context, c.count);
  return from_triplets(n_terms(), window_size_, vocab_fingerprint_, std::move(triplets));
}

void accumulate_window_pairs(std::span<const std::optional<TermId>> document,
                             int window_size,
                             std::unordered_map<std::uint64_t, std::uint64_t>& pair_counts) {
  const auto n = static_cast<std::ptrdiff_t>(document.size());
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    if (!document[i]) continue;
    const std::uint64_t target = *document[i];
    const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, i - window_size);
    const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(n - 1, i + window_size);
    for (std::ptrdiff_t j = lo; j <= hi; ++j) {
      if (j == i || !document[j]) continue;
      ++pair_counts[(target << 32) | *document[j]];
    }
  }
}

namespace {

std::vector<std::optional<TermId>> to_ids(const std::vector<std::string>& tokens,
                                          const Vocabulary& vocab) {
  std::vector<std::optional<TermId>> ids;
  ids.reserve(tokens.size());
  for (const auto& t : tokens) ids.push_back(vocab.id(t));
  return ids;
}

void require_same_language(const CorpusSource& source, const Vocabulary& vocab) {
  if (source.language() != vocab.language())
    throw Error(ErrorKind::Config, "corpus language '" + source.language() +
                                       "' does not match vocabulary language '" +
                                       vocab.language() + "'");
}

}  // namespace

CooccurrenceCounts count_cooccurrences(const CorpusSource& source,
                                       const Vocabulary& vocab, int window_size) {
  if (window_size < 1) throw Error(ErrorKind::Config, "window size must be >= 1");
  require_same_language(source, vocab);
  std::unordered_map<std::uint64_t, std::uint64_t> pairs;
  source.for_each_document(vocab.tokenizer(), [&](std::size_t, const auto& tokens) {
    const auto ids = to_ids(tokens, vocab);
    accumulate_window_pairs(ids, window_size, pairs);
  });
  std::vector<std::tuple<TermId, TermId, std::uint64_t>> triplets;
  triplets.reserve(pairs.size());
  for (const auto& [key, count] : pairs)
    triplets.emplace_back(static_cast<TermId>(key >> 32),
                          static_cast<TermId>(key & 0xffffffffu), count);
  return CooccurrenceCounts::from_triplets(vocab.size(), window_size,
                                           vocab.fingerprint(), std::move(triplets));
}

SparseMatrix count_term_document(const CorpusSource& source, const Vocabulary& vocab) {
  if (vocab.empty()) throw Error(ErrorKind::EmptyInput, "vocabulary is empty");
  require_same_language(source, vocab);
  std::vector<SparseMatrix::Triplet> triplets;
  std::size_t n_docs = 0;
  std::unordered_map<TermId, std::uint64_t> doc_counts;
  source.for_each_document(vocab.tokenizer(), [&](std::size_t doc, const auto& tokens) {
    doc_counts.clear();
    for (const auto& t : tokens)
      if (auto id = vocab.id(t)) ++doc_counts[*id];
    for (const auto& [id, count] : doc_counts)
      triplets.emplace_back(id, static_cast<std::uint32_t>(doc), static_cast<double>(count));
    n_docs = doc + 1;
  });
  return SparseMatrix::from_triplets(vocab.size(), n_docs, triplets);
}

}  // namespace dinfra
