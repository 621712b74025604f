#include "muto/matching.hpp"

#include "muto/hungarian.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>

namespace muto {

namespace {

std::size_t utf8_length(const std::string& s) {
  return static_cast<std::size_t>(std::count_if(
      s.begin(), s.end(), [](char c) { return (c & 0xC0) != 0x80; }));
}

}  // namespace

Matching::Matching(std::vector<TermPair> pairs) : pairs_(std::move(pairs)) {
  std::sort(pairs_.begin(), pairs_.end());
  std::vector<int> sources, targets;
  for (const auto& p : pairs_) {
    if (p.source < 0 || p.target < 0) throw Error("matching: negative term id");
    sources.push_back(p.source);
    targets.push_back(p.target);
  }
  std::sort(sources.begin(), sources.end());
  std::sort(targets.begin(), targets.end());
  if (std::adjacent_find(sources.begin(), sources.end()) != sources.end())
    throw Error("matching: source term paired twice");
  if (std::adjacent_find(targets.begin(), targets.end()) != targets.end())
    throw Error("matching: target term paired twice");
}

bool Matching::contains(TermPair p) const {
  return std::binary_search(pairs_.begin(), pairs_.end(), p);
}

std::vector<int> Matching::pair_index(Language side, int vocab_size) const {
  std::vector<int> index(vocab_size, -1);
  for (std::size_t t = 0; t < pairs_.size(); ++t) {
    const int w = side == Language::Source ? pairs_[t].source : pairs_[t].target;
    if (w >= vocab_size) throw Error("matching: term id outside vocabulary");
    index[w] = static_cast<int>(t);
  }
  return index;
}

WeightMatrix::WeightMatrix(std::vector<WeightedEdge> edges)
    : edges_(std::move(edges)) {
  std::sort(edges_.begin(), edges_.end(), [](const auto& a, const auto& b) {
    return std::tie(a.source, a.target) < std::tie(b.source, b.target);
  });
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    if (!std::isfinite(edges_[e].weight))
      throw Error("weight matrix: non-finite weight");
    if (e > 0 && edges_[e].source == edges_[e - 1].source &&
        edges_[e].target == edges_[e - 1].target)
      throw Error("weight matrix: duplicate edge");
  }
}

std::optional<double> WeightMatrix::find(int source, int target) const {
  auto it = std::lower_bound(
      edges_.begin(), edges_.end(), std::pair{source, target},
      [](const WeightedEdge& e, const std::pair<int, int>& key) {
        return std::tie(e.source, e.target) < std::tie(key.first, key.second);
      });
  if (it == edges_.end() || it->source != source || it->target != target)
    return std::nullopt;
  return it->weight;
}

Matching initial_matching(const Vocabulary& vocab_s, const Vocabulary& vocab_t,
                          int min_length) {
  if (min_length < 1) throw Error("initial_matching: min_length must be >= 1");
  std::vector<TermPair> pairs;
  for (int i = 0; i < vocab_s.size(); ++i) {
    const std::string& term = vocab_s.term(i);
    if (utf8_length(term) < static_cast<std::size_t>(min_length)) continue;
    if (auto j = vocab_t.find(term)) pairs.push_back({i, *j});
  }
  return Matching(std::move(pairs));
}

Matching max_weight_matching(const WeightMatrix& weights, std::size_t max_size) {
  std::map<int, Eigen::Index> rows, cols;
  for (const auto& e : weights.edges()) {
    if (e.weight <= 0) continue;
    rows.emplace(e.source, 0);
    cols.emplace(e.target, 0);
  }
  if (rows.empty() || max_size == 0) return {};

  std::vector<int> row_terms, col_terms;
  for (auto& [term, idx] : rows) {
    idx = static_cast<Eigen::Index>(row_terms.size());
    row_terms.push_back(term);
  }
  for (auto& [term, idx] : cols) {
    idx = static_cast<Eigen::Index>(col_terms.size());
    col_terms.push_back(term);
  }

  // Square benefit matrix; a zero entry stands for "leave both unmatched".
  const Eigen::Index n = std::max<Eigen::Index>(row_terms.size(), col_terms.size());
  Eigen::MatrixXd benefit = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : weights.edges())
    if (e.weight > 0) benefit(rows.at(e.source), cols.at(e.target)) = e.weight;

  const auto row_to_col = solve_assignment(-benefit);

  std::vector<WeightedEdge> chosen;
  for (Eigen::Index r = 0; r < static_cast<Eigen::Index>(row_terms.size()); ++r) {
    const Eigen::Index c = row_to_col[r];
    if (c < 0 || c >= static_cast<Eigen::Index>(col_terms.size())) continue;
    if (benefit(r, c) > 0) chosen.push_back({row_terms[r], col_terms[c], benefit(r, c)});
  }
  if (chosen.size() > max_size) {
    std::stable_sort(chosen.begin(), chosen.end(),
                     [](const auto& a, const auto& b) { return a.weight > b.weight; });
    chosen.resize(max_size);
  }

  std::vector<TermPair> pairs;
  pairs.reserve(chosen.size());
  for (const auto& e : chosen) pairs.push_back({e.source, e.target});
  return Matching(std::move(pairs));
}

namespace {

struct BruteForceSearch {
  std::vector<std::vector<WeightedEdge>> by_source;
  std::size_t max_size = 0;
  std::vector<int> used_targets;
  std::vector<TermPair> current, best;
  double current_weight = 0.0;
  double best_weight = 0.0;

  void visit(std::size_t s) {
    if (s == by_source.size()) {
      if (current_weight > best_weight ||
          (current_weight == best_weight && current < best)) {
        best_weight = current_weight;
        best = current;
      }
      return;
    }
    visit(s + 1);
    if (current.size() == max_size) return;
    for (const auto& e : by_source[s]) {
      if (std::find(used_targets.begin(), used_targets.end(), e.target) !=
          used_targets.end())
        continue;
      used_targets.push_back(e.target);
      current.push_back({e.source, e.target});
      current_weight += e.weight;
      visit(s + 1);
      current_weight -= e.weight;
      current.pop_back();
      used_targets.pop_back();
    }
  }
};

}  // namespace

Matching brute_force_matching(const WeightMatrix& weights, std::size_t max_size) {
  std::map<int, std::vector<WeightedEdge>> by_source;
  std::map<int, int> targets;
  for (const auto& e : weights.edges()) {
    by_source[e.source];
    targets[e.target];
    if (e.weight > 0) by_source[e.source].push_back(e);
  }
  if (by_source.size() > 8 || targets.size() > 8) throw Error("oracle too large");

  BruteForceSearch search;
  search.max_size = max_size;
  for (auto& [s, edges] : by_source) search.by_source.push_back(std::move(edges));
  search.visit(0);
  return Matching(std::move(search.best));
}

double matching_weight(const Matching& matching, const WeightMatrix& weights) {
  double total = 0.0;
  for (const auto& p : matching.pairs()) {
    auto w = weights.find(p.source, p.target);
    if (!w) throw Error("matching_weight: pair is not a candidate edge");
    total += *w;
  }
  return total;
}

void SizeSchedule::validate() const {
  if (fractions.empty()) throw ConfigError("schedule: fractions must be nonempty");
  for (std::size_t i = 0; i < fractions.size(); ++i) {
    if (!(fractions[i] > 0 && fractions[i] <= 1))
      throw ConfigError("schedule: fractions must lie in (0, 1]");
    if (i > 0 && fractions[i] < fractions[i - 1])
      throw ConfigError("schedule: fractions must be nondecreasing");
  }
  if (fractions.back() != 1.0) throw ConfigError("schedule: final fraction must be 1");
  if (cap < 1) throw ConfigError("schedule: cap must be >= 1");
}

int schedule_size(const SizeSchedule& schedule, int m_step_index) {
  if (m_step_index < 0 ||
      m_step_index >= static_cast<int>(schedule.fractions.size()))
    throw Error("schedule_size: M-step index out of range");
  // The slack absorbs rounding in fractions such as 1/3 * 300.
  const double raw = schedule.fractions[m_step_index] * schedule.cap;
  return std::max(1, static_cast<int>(std::ceil(raw - 1e-9)));
}

void write_matching_tsv(const Matching& matching, const WeightMatrix& weights,
                        const Vocabulary& vocab_s, const Vocabulary& vocab_t,
                        const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << std::setprecision(17);
  for (const auto& p : matching.pairs()) {
    const double w = weights.find(p.source, p.target).value_or(0.0);
    out << vocab_s.term(p.source) << '\t' << vocab_t.term(p.target) << '\t' << w
        << '\n';
  }
}

}  // namespace muto
