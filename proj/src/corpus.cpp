#include "muto/corpus.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace muto {

std::string_view language_tag(Language lang) {
  return lang == Language::Source ? "s" : "t";
}

Language parse_language_tag(std::string_view tag) {
  if (tag == "s") return Language::Source;
  if (tag == "t") return Language::Target;
  throw Error("unknown language tag '" + std::string(tag) + "'");
}

void Hyperparams::validate() const {
  if (k < 1) throw ConfigError("hyper.k must be >= 1");
  if (!(alpha > 0)) throw ConfigError("hyper.alpha must be positive");
  if (!(lambda > 0)) throw ConfigError("hyper.lambda must be positive");
  if (!(gamma > 0)) throw ConfigError("hyper.gamma must be positive");
}

Vocabulary::Vocabulary(Language language, std::vector<std::string> terms)
    : language_(language), terms_(std::move(terms)) {
  index_.reserve(terms_.size());
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (!index_.emplace(terms_[i], static_cast<int>(i)).second)
      throw Error("duplicate vocabulary term '" + terms_[i] + "'");
  }
}

std::optional<int> Vocabulary::find(const std::string& term) const {
  auto it = index_.find(term);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> Corpus::find_document(const std::string& id) const {
  for (std::size_t d = 0; d < documents.size(); ++d)
    if (documents[d].id == id) return d;
  return std::nullopt;
}

void Corpus::validate() const {
  std::map<std::string, Language> ids;
  for (const auto& doc : documents) {
    const int v = vocab(doc.language).size();
    for (int w : doc.tokens)
      if (w < 0 || w >= v)
        throw Error("document '" + doc.id + "' has token id " +
                    std::to_string(w) + " outside its vocabulary");
    ids.emplace(doc.id, doc.language);
  }
  std::set<std::string> seen_s, seen_t;
  for (const auto& [s, t] : gold_pairs) {
    auto is = ids.find(s);
    auto it = ids.find(t);
    if (is == ids.end() || it == ids.end())
      throw Error("gold pair (" + s + ", " + t + ") references unknown document");
    if (is->second != Language::Source || it->second != Language::Target)
      throw Error("gold pair (" + s + ", " + t + ") must be source -> target");
    if (!seen_s.insert(s).second || !seen_t.insert(t).second)
      throw Error("gold pair (" + s + ", " + t + ") repeats a document");
  }
}

CorpusFormat parse_corpus_format(std::string_view name) {
  if (name == "jsonl") return CorpusFormat::Jsonl;
  if (name == "tsv") return CorpusFormat::Tsv;
  throw ConfigError("unknown corpus format '" + std::string(name) + "'");
}

Vocabulary build_vocabulary(const std::vector<std::vector<std::string>>& docs,
                            Language language, int max_terms,
                            const std::set<std::string>& stopwords) {
  if (max_terms < 1) throw Error("max_terms must be >= 1");
  std::map<std::string, long> freq;
  for (const auto& doc : docs)
    for (const auto& tok : doc)
      if (!stopwords.contains(tok)) ++freq[tok];
  if (freq.empty()) throw Error("empty vocabulary");

  std::vector<std::pair<std::string, long>> ranked(freq.begin(), freq.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  if (static_cast<int>(ranked.size()) > max_terms) ranked.resize(max_terms);

  std::vector<std::string> terms;
  terms.reserve(ranked.size());
  for (auto& [term, count] : ranked) terms.push_back(std::move(term));
  return Vocabulary(language, std::move(terms));
}

namespace {

std::vector<std::string> split_ws(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string tok; in >> tok;) out.push_back(std::move(tok));
  return out;
}

std::string at_line(const std::filesystem::path& path, std::size_t line) {
  return path.string() + ":" + std::to_string(line) + ": ";
}

}  // namespace

std::vector<RawDocument> read_raw_documents(const std::filesystem::path& path,
                                            CorpusFormat format) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open corpus file " + path.string());

  std::vector<RawDocument> docs;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;

    RawDocument doc;
    std::string lang;
    if (format == CorpusFormat::Jsonl) {
      nlohmann::json rec;
      try {
        rec = nlohmann::json::parse(line);
        doc.id = rec.at("id").get<std::string>();
        lang = rec.at("lang").get<std::string>();
        doc.tokens = rec.at("tokens").get<std::vector<std::string>>();
      } catch (const nlohmann::json::exception& e) {
        throw Error(at_line(path, lineno) + "malformed record: " + e.what());
      }
    } else {
      const auto t1 = line.find('\t');
      const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
      if (t2 == std::string::npos)
        throw Error(at_line(path, lineno) +
                    "malformed record: expected id<TAB>lang<TAB>tokens");
      doc.id = line.substr(0, t1);
      lang = line.substr(t1 + 1, t2 - t1 - 1);
      doc.tokens = split_ws(line.substr(t2 + 1));
    }
    if (doc.id.empty()) throw Error(at_line(path, lineno) + "empty document id");
    try {
      doc.language = parse_language_tag(lang);
    } catch (const Error& e) {
      throw Error(at_line(path, lineno) + e.what());
    }
    docs.push_back(std::move(doc));
  }
  return docs;
}

Corpus encode_corpus(const std::vector<RawDocument>& raw,
                     const CorpusOptions& options) {
  std::array<std::vector<std::vector<std::string>>, 2> per_lang;
  std::set<std::string> ids;
  for (const auto& doc : raw) {
    if (!ids.insert(doc.id).second)
      throw Error("duplicate document id '" + doc.id + "'");
    per_lang[index_of(doc.language)].push_back(doc.tokens);
  }

  Corpus corpus;
  corpus.vocab_s = build_vocabulary(per_lang[0], Language::Source,
                                    options.max_terms, options.stopwords);
  corpus.vocab_t = build_vocabulary(per_lang[1], Language::Target,
                                    options.max_terms, options.stopwords);
  corpus.documents.reserve(raw.size());
  for (const auto& doc : raw) {
    const Vocabulary& vocab = corpus.vocab(doc.language);
    Document out{doc.id, doc.language, {}};
    out.tokens.reserve(doc.tokens.size());
    for (const auto& tok : doc.tokens)
      if (auto id = vocab.find(tok)) out.tokens.push_back(*id);
    corpus.documents.push_back(std::move(out));
  }
  corpus.validate();
  return corpus;
}

Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format,
                   const CorpusOptions& options) {
  return encode_corpus(read_raw_documents(path, format), options);
}

std::vector<std::pair<std::string, std::string>> read_gold_pairs(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open gold pairs file " + path.string());
  std::vector<std::pair<std::string, std::string>> pairs;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos)
      throw Error(at_line(path, lineno) + "expected source_id<TAB>target_id");
    pairs.emplace_back(line.substr(0, tab), line.substr(tab + 1));
  }
  return pairs;
}

void attach_gold_pairs(Corpus& corpus,
                       std::vector<std::pair<std::string, std::string>> pairs) {
  corpus.gold_pairs = std::move(pairs);
  corpus.validate();
}

std::set<std::string> read_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open stopword file " + path.string());
  std::set<std::string> words;
  for (std::string w; in >> w;) words.insert(w);
  return words;
}

void write_corpus_jsonl(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  for (const auto& doc : corpus.documents) {
    const Vocabulary& vocab = corpus.vocab(doc.language);
    nlohmann::json tokens = nlohmann::json::array();
    for (int w : doc.tokens) tokens.push_back(vocab.term(w));
    nlohmann::ordered_json rec;
    rec["id"] = doc.id;
    rec["lang"] = std::string(language_tag(doc.language));
    rec["tokens"] = std::move(tokens);
    out << rec.dump() << '\n';
  }
}

void write_gold_pairs(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  for (const auto& [s, t] : corpus.gold_pairs) out << s << '\t' << t << '\n';
}

}  // namespace muto
