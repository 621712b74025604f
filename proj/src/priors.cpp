#include "muto/priors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <unordered_map>

namespace muto {

PriorMatrix::PriorMatrix(int n_source, int n_target, double default_weight)
    : stored_(n_source, n_target), default_weight_(default_weight) {
  if (!(default_weight >= 0) || !std::isfinite(default_weight))
    throw Error("prior: default weight must be finite and nonnegative");
}

PriorMatrix PriorMatrix::from_entries(int n_source, int n_target,
                                      const std::vector<WeightedEdge>& entries,
                                      double default_weight) {
  PriorMatrix prior(n_source, n_target, default_weight);
  std::vector<Eigen::Triplet<double, int>> triplets;
  triplets.reserve(entries.size());
  for (const auto& e : entries) {
    if (e.source < 0 || e.source >= n_source || e.target < 0 || e.target >= n_target)
      throw Error("prior: entry outside vocabulary");
    if (!std::isfinite(e.weight)) throw Error("prior: non-finite weight");
    if (e.weight > 0) triplets.emplace_back(e.source, e.target, e.weight);
  }
  prior.stored_.setFromTriplets(triplets.begin(), triplets.end(),
                                [](double, double b) { return b; });
  prior.stored_.makeCompressed();
  return prior;
}

double PriorMatrix::weight(int source, int target) const {
  const int* inner_begin = stored_.innerIndexPtr() + stored_.outerIndexPtr()[source];
  const int* inner_end = stored_.innerIndexPtr() + stored_.outerIndexPtr()[source + 1];
  const int* it = std::lower_bound(inner_begin, inner_end, target);
  if (it != inner_end && *it == target)
    return stored_.valuePtr()[it - stored_.innerIndexPtr()];
  return default_weight_;
}

std::vector<WeightedEdge> PriorMatrix::entries() const {
  std::vector<WeightedEdge> out;
  out.reserve(stored_.nonZeros());
  for (int i = 0; i < stored_.outerSize(); ++i)
    for (Storage::InnerIterator it(stored_, i); it; ++it)
      out.push_back({i, static_cast<int>(it.col()), it.value()});
  return out;
}

bool Lexicon::consistent(const std::string& source, const std::string& target) const {
  auto it = translations.find(source);
  return it != translations.end() && it->second.contains(target);
}

Lexicon read_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open lexicon file " + path.string());
  Lexicon lexicon;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw Error(path.string() + ":" + std::to_string(lineno) +
                  ": expected source_term<TAB>target_term");
    auto end = line.find('\t', tab + 1);
    lexicon.add(line.substr(0, tab), line.substr(tab + 1, end - tab - 1));
  }
  return lexicon;
}

void write_lexicon(const Lexicon& lexicon, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  for (const auto& [s, targets] : lexicon.translations)
    for (const auto& t : targets) out << s << '\t' << t << '\n';
}

namespace {

std::u32string decode_utf8(std::string_view s) {
  std::u32string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) {
    const auto lead = static_cast<unsigned char>(s[i]);
    std::size_t extra = lead >= 0xF0 ? 3 : lead >= 0xE0 ? 2 : lead >= 0xC0 ? 1 : 0;
    if (i + extra >= s.size()) extra = 0;  // truncated sequence: keep the byte
    char32_t cp = extra == 0 ? lead : lead & (0x3F >> extra);
    for (std::size_t k = 1; k <= extra; ++k)
      cp = (cp << 6) | (static_cast<unsigned char>(s[i + k]) & 0x3F);
    out.push_back(cp);
    i += 1 + extra;
  }
  return out;
}

}  // namespace

int levenshtein(std::string_view a_utf8, std::string_view b_utf8) {
  const std::u32string a = decode_utf8(a_utf8);
  const std::u32string b = decode_utf8(b_utf8);
  std::vector<int> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<int>(j);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = static_cast<int>(i);
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

PriorMatrix edit_distance_prior(const Vocabulary& vocab_s,
                                const Vocabulary& vocab_t,
                                std::optional<int> max_distance) {
  if (vocab_s.empty() || vocab_t.empty())
    throw Error("edit_distance_prior: vocabularies must be nonempty");
  if (max_distance && *max_distance < 0)
    throw Error("edit_distance_prior: max_distance must be nonnegative");

  const double fallback = max_distance ? 1.0 / (0.1 + *max_distance + 1) : 0.0;
  std::vector<WeightedEdge> entries;
  for (int i = 0; i < vocab_s.size(); ++i) {
    for (int j = 0; j < vocab_t.size(); ++j) {
      const int ed = levenshtein(vocab_s.term(i), vocab_t.term(j));
      if (max_distance && ed > *max_distance) continue;
      entries.push_back({i, j, 1.0 / (0.1 + ed)});
    }
  }
  return PriorMatrix::from_entries(vocab_s.size(), vocab_t.size(), entries, fallback);
}

PriorMatrix dictionary_prior(const Lexicon& lexicon, const Vocabulary& vocab_s,
                             const Vocabulary& vocab_t) {
  std::vector<WeightedEdge> entries;
  for (const auto& [source, targets] : lexicon.translations) {
    auto i = vocab_s.find(source);
    if (!i) continue;
    std::vector<int> reachable;
    for (const auto& t : targets)
      if (auto j = vocab_t.find(t)) reachable.push_back(*j);
    for (int j : reachable)
      entries.push_back({*i, j, 1.0 / static_cast<double>(reachable.size())});
  }
  return PriorMatrix::from_entries(vocab_s.size(), vocab_t.size(), entries, 0.0);
}

PmiTransform parse_pmi_transform(std::string_view name) {
  if (name == "ratio") return PmiTransform::Ratio;
  if (name == "shifted-positive") return PmiTransform::ShiftedPositive;
  throw ConfigError("unknown PMI transform '" + std::string(name) + "'");
}

PriorMatrix pmi_prior(const std::vector<AlignedPair>& aligned_pairs,
                      const Vocabulary& vocab_s, const Vocabulary& vocab_t,
                      double epsilon, PmiTransform transform) {
  if (aligned_pairs.empty()) throw Error("pmi_prior: no aligned sentence pairs");
  if (!(epsilon > 0)) throw Error("pmi_prior: epsilon must be positive");

  std::vector<long> count_s(vocab_s.size(), 0), count_t(vocab_t.size(), 0);
  std::unordered_map<std::uint64_t, long> joint;

  auto present = [](const std::vector<std::string>& sentence, const Vocabulary& v) {
    std::vector<int> ids;
    for (const auto& tok : sentence)
      if (auto id = v.find(tok)) ids.push_back(*id);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
  };

  for (const auto& [src, tgt] : aligned_pairs) {
    const auto s_ids = present(src, vocab_s);
    const auto t_ids = present(tgt, vocab_t);
    for (int i : s_ids) ++count_s[i];
    for (int j : t_ids) ++count_t[j];
    for (int i : s_ids)
      for (int j : t_ids)
        ++joint[(static_cast<std::uint64_t>(i) << 32) | static_cast<std::uint32_t>(j)];
  }

  const double n = static_cast<double>(aligned_pairs.size());
  std::vector<WeightedEdge> entries;
  entries.reserve(joint.size());
  for (const auto& [key, c] : joint) {
    const int i = static_cast<int>(key >> 32);
    const int j = static_cast<int>(key & 0xffffffffu);
    // p(i,j) / (p(i) p(j)) with sentence-pair frequencies.
    const double ratio = static_cast<double>(c) * n /
                         (static_cast<double>(count_s[i]) * static_cast<double>(count_t[j]));
    if (transform == PmiTransform::Ratio)
      entries.push_back({i, j, std::max(ratio, epsilon)});
    else if (ratio > 1.0)
      entries.push_back({i, j, ratio});
  }
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
    return std::tie(a.source, a.target) < std::tie(b.source, b.target);
  });
  const double fallback = transform == PmiTransform::Ratio ? epsilon : 1.0;
  return PriorMatrix::from_entries(vocab_s.size(), vocab_t.size(), entries, fallback);
}

PriorMatrix uniform_prior(const Vocabulary& vocab_s, const Vocabulary& vocab_t) {
  return PriorMatrix(vocab_s.size(), vocab_t.size(), 1.0);
}

std::vector<AlignedPair> read_aligned_pairs(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open aligned pairs file " + path.string());
  std::vector<AlignedPair> pairs;
  std::string line;
  auto split = [](const std::string& text) {
    std::vector<std::string> toks;
    std::istringstream ss(text);
    for (std::string t; ss >> t;) toks.push_back(std::move(t));
    return toks;
  };
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw Error(path.string() + ":" + std::to_string(lineno) +
                  ": expected source sentence<TAB>target sentence");
    pairs.emplace_back(split(line.substr(0, tab)), split(line.substr(tab + 1)));
  }
  return pairs;
}

void write_prior(const PriorMatrix& prior, const Vocabulary& vocab_s,
                 const Vocabulary& vocab_t, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << std::setprecision(17);
  out << "#default_weight=" << prior.default_weight() << '\n';
  for (const auto& e : prior.entries())
    out << vocab_s.term(e.source) << '\t' << vocab_t.term(e.target) << '\t'
        << e.weight << '\n';
}

PriorMatrix read_prior(const std::filesystem::path& path,
                       const Vocabulary& vocab_s, const Vocabulary& vocab_t) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open prior file " + path.string());
  std::string line;
  if (!std::getline(in, line) || line.rfind("#default_weight=", 0) != 0)
    throw Error(path.string() + ":1: missing #default_weight header");
  double fallback = 0.0;
  try {
    fallback = std::stod(line.substr(16));
  } catch (const std::exception&) {
    throw Error(path.string() + ":1: bad default weight");
  }

  std::vector<WeightedEdge> entries;
  for (std::size_t lineno = 2; std::getline(in, line); ++lineno) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos)
      throw Error(path.string() + ":" + std::to_string(lineno) +
                  ": expected source<TAB>target<TAB>weight");
    double w = 0.0;
    try {
      w = std::stod(line.substr(t2 + 1));
    } catch (const std::exception&) {
      throw Error(path.string() + ":" + std::to_string(lineno) + ": bad weight");
    }
    if (w < 0) throw Error(path.string() + ":" + std::to_string(lineno) + ": negative weight");
    auto i = vocab_s.find(line.substr(0, t1));
    auto j = vocab_t.find(line.substr(t1 + 1, t2 - t1 - 1));
    if (i && j) entries.push_back({*i, *j, w});
  }
  return PriorMatrix::from_entries(vocab_s.size(), vocab_t.size(), entries, fallback);
}

std::vector<TermPair> candidate_edges(const PriorMatrix& prior, int max_per_source) {
  std::vector<TermPair> out;
  const bool dense = prior.default_weight() > 0;
  std::vector<std::pair<double, int>> row;
  for (int i = 0; i < prior.n_source(); ++i) {
    row.clear();
    if (dense) {
      for (int j = 0; j < prior.n_target(); ++j) row.emplace_back(prior.weight(i, j), j);
    } else {
      for (PriorMatrix::Storage::InnerIterator it(prior.stored(), i); it; ++it)
        row.emplace_back(it.value(), static_cast<int>(it.col()));
    }
    if (max_per_source > 0 && static_cast<int>(row.size()) > max_per_source) {
      std::stable_sort(row.begin(), row.end(),
                       [](const auto& a, const auto& b) { return a.first > b.first; });
      row.resize(max_per_source);
      std::sort(row.begin(), row.end(),
                [](const auto& a, const auto& b) { return a.second < b.second; });
    }
    for (const auto& [w, j] : row) out.push_back({i, j});
  }
  return out;
}

}  // namespace muto
