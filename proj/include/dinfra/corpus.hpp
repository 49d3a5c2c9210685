#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace dinfra {

using TermId = std::uint32_t;

// ---------------------------------------------------------------------------
// Languages and tokenization

/// The twelve supported language codes, in a fixed order.
std::span<const std::string_view> supported_languages() noexcept;
bool is_supported_language(std::string_view code) noexcept;
/// Throws Error(Config) for codes outside the supported set.
void require_supported_language(std::string_view code);

struct TokenizerOptions {
  std::string language = "en";
  /// Experimental English suffix stripping; ignored for other languages.
  bool stemming = false;
};

/// NFC-normalize, lowercase and split on anything that is not a letter, a
/// digit or a combining mark. Throws Error(Ingestion) naming the byte offset
/// of the first invalid UTF-8 sequence; `base_offset` is added to it so that
/// stream readers can report file offsets.
std::vector<std::string> tokenize(std::string_view text,
                                  const TokenizerOptions& options,
                                  std::uint64_t base_offset = 0);

/// Normalizes a single query term exactly like the corpus tokenizer.
/// Returns nullopt when the input does not reduce to exactly one token.
std::optional<std::string> normalize_term(std::string_view term,
                                          const TokenizerOptions& options);

/// Light English suffix stripping (plural and -ing/-ed endings).
std::string stem_english(std::string_view token);

using Stopwords = std::unordered_set<std::string>;

/// One term per line, `#` starts a comment, blank lines ignored. Entries are
/// normalized with `options` so they match tokenizer output.
Stopwords load_stopwords(const std::filesystem::path& path,
                         const TokenizerOptions& options);

// ---------------------------------------------------------------------------
// Corpus sources

enum class CorpusFormat { DocPerLine, DocPerFile };

/// A corpus: a file of one document per line, a directory of one document
/// per file, or (mainly for tests) an in-memory list of documents.
class CorpusSource {
 public:
  static CorpusSource from_file(std::filesystem::path path,
                                std::string language,
                                CorpusFormat format = CorpusFormat::DocPerLine);
  static CorpusSource from_documents(std::vector<std::string> documents,
                                     std::string language);

  const std::filesystem::path& path() const noexcept { return path_; }
  const std::string& language() const noexcept { return language_; }
  CorpusFormat format() const noexcept { return format_; }

  /// Streams raw (untokenized) documents in ingestion order. Blank documents
  /// are skipped and do not receive an index. Throws if no document exists.
  void for_each_raw(
      const std::function<void(std::size_t doc, std::string_view text,
                               std::uint64_t offset)>& visit) const;

  /// Streams tokenized documents in ingestion order.
  void for_each_document(
      const TokenizerOptions& options,
      const std::function<void(std::size_t doc,
                               const std::vector<std::string>& tokens)>& visit)
      const;

 private:
  CorpusSource() = default;

  std::filesystem::path path_;
  std::string language_;
  CorpusFormat format_ = CorpusFormat::DocPerLine;
  std::vector<std::string> documents_;
  bool in_memory_ = false;
};

// ---------------------------------------------------------------------------
// Vocabulary

struct VocabularyOptions {
  std::uint64_t min_count = 5;
  Stopwords stopwords;
  bool stemming = false;
};

class Vocabulary {
 public:
  struct Entry {
    std::string term;
    std::uint64_t frequency = 0;
    std::uint64_t doc_frequency = 0;
  };

  Vocabulary() = default;
  /// Entries are taken in id order. Throws on duplicate terms.
  Vocabulary(TokenizerOptions options, std::vector<Entry> entries);

  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  std::optional<TermId> id(std::string_view term) const;
  /// Normalizes `term` with the vocabulary's tokenizer options, then looks it up.
  std::optional<TermId> lookup(std::string_view raw_term) const;
  const std::string& term(TermId id) const { return entries_.at(id).term; }
  std::uint64_t frequency(TermId id) const { return entries_.at(id).frequency; }
  std::uint64_t doc_frequency(TermId id) const {
    return entries_.at(id).doc_frequency;
  }
  std::span<const Entry> entries() const noexcept { return entries_; }
  const TokenizerOptions& tokenizer() const noexcept { return tokenizer_; }
  const std::string& language() const noexcept { return tokenizer_.language; }

  /// Hash over language, stemming flag and terms in id order.
  std::uint64_t fingerprint() const noexcept { return fingerprint_; }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b);

 private:
  TokenizerOptions tokenizer_;
  std::vector<Entry> entries_;
  std::unordered_map<std::string, TermId> index_;
  std::uint64_t fingerprint_ = 0;
};

/// Retains terms with frequency >= min_count that are not stopwords; ids in
/// descending frequency order, ties broken by byte-wise term order.
Vocabulary build_vocabulary(const CorpusSource& source,
                            const VocabularyOptions& options);

// ---------------------------------------------------------------------------
// Windowed co-occurrence counts

/// Immutable symmetric-window co-occurrence counts in compressed row form.
class CooccurrenceCounts {
 public:
  struct Cell {
    TermId context;
    std::uint64_t count;
    friend bool operator==(const Cell&, const Cell&) = default;
  };

  CooccurrenceCounts() = default;
  /// Builds from unsorted (target, context, count) contributions; duplicate
  /// coordinates are summed and zero counts dropped.
  static CooccurrenceCounts from_triplets(
      std::size_t n_terms, int window_size, std::uint64_t vocab_fingerprint,
      std::vector<std::tuple<TermId, TermId, std::uint64_t>> triplets);

  int window_size() const noexcept { return window_size_; }
  std::size_t n_terms() const noexcept {
    return offsets_.empty() ? 0 : offsets_.size() - 1;
  }
  std::uint64_t vocab_fingerprint() const noexcept { return vocab_fingerprint_; }
  std::size_t nnz() const noexcept { return cells_.size(); }
  std::span<const Cell> row(TermId target) const;
  std::uint64_t count(TermId target, TermId context) const;
  std::uint64_t total() const noexcept;

  /// Entrywise sum; order-independent. Throws on window/vocabulary mismatch.
  CooccurrenceCounts merged(const CooccurrenceCounts& other) const;

  friend bool operator==(const CooccurrenceCounts&,
                         const CooccurrenceCounts&) = default;

 private:
  int window_size_ = 0;
  std::uint64_t vocab_fingerprint_ = 0;
  std::vector<std::size_t> offsets_;
  std::vector<Cell> cells_;
};

/// Counts token pairs within +/- window_size positions inside each document.
CooccurrenceCounts count_cooccurrences(const CorpusSource& source,
                                       const Vocabulary& vocab,
                                       int window_size);

/// Same as above over an already tokenized document mapped to term ids
/// (nullopt for out-of-vocabulary positions). Used for sharded ingestion.
void accumulate_window_pairs(
    std::span<const std::optional<TermId>> document, int window_size,
    std::unordered_map<std::uint64_t, std::uint64_t>& pair_counts);

class SparseMatrix;

/// Term-by-document occurrence counts; columns follow ingestion order and
/// documents without in-vocabulary terms stay as empty columns.
SparseMatrix count_term_document(const CorpusSource& source,
                                 const Vocabulary& vocab);

}  // namespace dinfra
