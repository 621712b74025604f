#pragma once

#include "muto/core.hpp"

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace muto {

// Per-language term inventory. Ids are dense and ordered by descending
// frequency, ties broken lexicographically.
class Vocabulary {
 public:
  Vocabulary() = default;
  Vocabulary(Language language, std::vector<std::string> terms);

  Language language() const { return language_; }
  const std::vector<std::string>& terms() const { return terms_; }
  const std::string& term(int id) const { return terms_.at(id); }
  int size() const { return static_cast<int>(terms_.size()); }
  bool empty() const { return terms_.empty(); }

  std::optional<int> find(const std::string& term) const;

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.language_ == b.language_ && a.terms_ == b.terms_;
  }

 private:
  Language language_ = Language::Source;
  std::vector<std::string> terms_;
  std::unordered_map<std::string, int> index_;
};

struct Document {
  std::string id;
  Language language = Language::Source;
  std::vector<int> tokens;
};

// A document before vocabulary encoding.
struct RawDocument {
  std::string id;
  Language language = Language::Source;
  std::vector<std::string> tokens;
};

struct Corpus {
  std::vector<Document> documents;
  Vocabulary vocab_s;
  Vocabulary vocab_t;
  std::vector<std::pair<std::string, std::string>> gold_pairs;

  const Vocabulary& vocab(Language lang) const {
    return lang == Language::Source ? vocab_s : vocab_t;
  }
  std::optional<std::size_t> find_document(const std::string& id) const;

  // Throws Error when a token id is out of range or a gold pair is dangling
  // or repeated.
  void validate() const;
};

struct CorpusOptions {
  int max_terms = 2500;
  std::set<std::string> stopwords;
};

enum class CorpusFormat { Jsonl, Tsv };

CorpusFormat parse_corpus_format(std::string_view name);

Vocabulary build_vocabulary(const std::vector<std::vector<std::string>>& docs,
                            Language language, int max_terms,
                            const std::set<std::string>& stopwords = {});

std::vector<RawDocument> read_raw_documents(const std::filesystem::path& path,
                                            CorpusFormat format);

// Builds both vocabularies from the raw documents and encodes them;
// out-of-vocabulary tokens are dropped.
Corpus encode_corpus(const std::vector<RawDocument>& raw,
                     const CorpusOptions& options);

Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format,
                   const CorpusOptions& options = {});

std::vector<std::pair<std::string, std::string>> read_gold_pairs(
    const std::filesystem::path& path);

// Attaches gold pairs and checks referential integrity.
void attach_gold_pairs(Corpus& corpus,
                       std::vector<std::pair<std::string, std::string>> pairs);

std::set<std::string> read_stopwords(const std::filesystem::path& path);

void write_corpus_jsonl(const Corpus& corpus, const std::filesystem::path& path);
void write_gold_pairs(const Corpus& corpus, const std::filesystem::path& path);

}  // namespace muto
