#pragma once

#include "muto/core.hpp"
#include "muto/corpus.hpp"

#include <compare>
#include <filesystem>
#include <optional>
#include <vector>

namespace muto {

struct TermPair {
  int source = 0;
  int target = 0;
  auto operator<=>(const TermPair&) const = default;
};

// Injective partial pairing of source and target term ids. Pairs are kept
// sorted by (source, target).
class Matching {
 public:
  Matching() = default;
  // Throws Error if a source or target id appears twice.
  explicit Matching(std::vector<TermPair> pairs);

  const std::vector<TermPair>& pairs() const { return pairs_; }
  std::size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }
  bool contains(TermPair p) const;

  // partner[w] = index into pairs() of the pair holding term w, or -1.
  std::vector<int> pair_index(Language side, int vocab_size) const;

  friend bool operator==(const Matching&, const Matching&) = default;

 private:
  std::vector<TermPair> pairs_;
};

struct WeightedEdge {
  int source = 0;
  int target = 0;
  double weight = 0.0;
};

// Sparse candidate edges with their weights, sorted by (source, target).
class WeightMatrix {
 public:
  WeightMatrix() = default;
  // Sorts edges; throws Error on duplicates or non-finite weights.
  explicit WeightMatrix(std::vector<WeightedEdge> edges);

  const std::vector<WeightedEdge>& edges() const { return edges_; }
  std::size_t size() const { return edges_.size(); }
  bool empty() const { return edges_.empty(); }
  // Weight of an edge, if it is a candidate.
  std::optional<double> find(int source, int target) const;

 private:
  std::vector<WeightedEdge> edges_;
};

// Identical strings present in both vocabularies whose length is at least
// min_length characters.
Matching initial_matching(const Vocabulary& vocab_s, const Vocabulary& vocab_t,
                          int min_length = 6);

// Maximum total weight matching using only edges with positive weight. If the
// optimum holds more than max_size edges, the heaviest max_size are kept.
Matching max_weight_matching(const WeightMatrix& weights, std::size_t max_size);

// Exhaustive enumeration of every matching with at most max_size edges.
// Test oracle; throws Error("oracle too large") beyond 8 vertices per side.
Matching brute_force_matching(const WeightMatrix& weights, std::size_t max_size);

// Sum of edge weights in pair order. Every pair must be a candidate edge.
double matching_weight(const Matching& matching, const WeightMatrix& weights);

struct SizeSchedule {
  std::vector<double> fractions{1.0 / 3.0, 2.0 / 3.0, 1.0};
  int cap = 0;  // 0: resolved by the caller (run_muto uses the candidate pool)

  void validate() const;
};

int schedule_size(const SizeSchedule& schedule, int m_step_index);

// TSV `source_term<TAB>target_term<TAB>mu_weight`.
void write_matching_tsv(const Matching& matching, const WeightMatrix& weights,
                        const Vocabulary& vocab_s, const Vocabulary& vocab_t,
                        const std::filesystem::path& path);

}  // namespace muto
