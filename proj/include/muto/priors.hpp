#pragma once

#include "muto/core.hpp"
#include "muto/corpus.hpp"
#include "muto/matching.hpp"

#include <Eigen/SparseCore>

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace muto {

// Edge preferences pi(i, j) over V_S x V_T. Stored weights are strictly
// positive; every other edge takes default_weight, where 0 means disallowed.
class PriorMatrix {
 public:
  using Storage = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;

  PriorMatrix() = default;
  PriorMatrix(int n_source, int n_target, double default_weight = 0.0);

  // Entries with non-positive weight are dropped; duplicates keep the last.
  static PriorMatrix from_entries(int n_source, int n_target,
                                  const std::vector<WeightedEdge>& entries,
                                  double default_weight);

  int n_source() const { return static_cast<int>(stored_.rows()); }
  int n_target() const { return static_cast<int>(stored_.cols()); }
  double default_weight() const { return default_weight_; }
  const Storage& stored() const { return stored_; }
  Eigen::Index stored_count() const { return stored_.nonZeros(); }

  double weight(int source, int target) const;
  bool allowed(int source, int target) const { return weight(source, target) > 0; }

  // Stored entries in (source, target) order.
  std::vector<WeightedEdge> entries() const;

 private:
  Storage stored_;
  double default_weight_ = 0.0;
};

// Source term -> nonempty set of target translations.
struct Lexicon {
  std::map<std::string, std::set<std::string>> translations;

  void add(const std::string& source, const std::string& target) {
    translations[source].insert(target);
  }
  bool covers(const std::string& source) const {
    return translations.contains(source);
  }
  bool consistent(const std::string& source, const std::string& target) const;
};

Lexicon read_lexicon(const std::filesystem::path& path);
void write_lexicon(const Lexicon& lexicon, const std::filesystem::path& path);

// Unit-cost edit distance over Unicode code points (UTF-8 input).
int levenshtein(std::string_view a, std::string_view b);

// pi = 1 / (0.1 + ED). With a cutoff, pairs beyond it are not stored and take
// default 1 / (0.1 + max_distance + 1).
PriorMatrix edit_distance_prior(const Vocabulary& vocab_s,
                                const Vocabulary& vocab_t,
                                std::optional<int> max_distance = std::nullopt);

// Each in-vocabulary source term with N in-vocabulary translations gives each
// of them weight 1/N; every other edge is disallowed.
PriorMatrix dictionary_prior(const Lexicon& lexicon, const Vocabulary& vocab_s,
                             const Vocabulary& vocab_t);

enum class PmiTransform {
  Ratio,           // pi = max(p(i,j) / (p(i) p(j)), epsilon); absent = epsilon
  ShiftedPositive  // log pi = max(PMI, 0); absent = 1
};

PmiTransform parse_pmi_transform(std::string_view name);

using AlignedPair = std::pair<std::vector<std::string>, std::vector<std::string>>;

PriorMatrix pmi_prior(const std::vector<AlignedPair>& aligned_pairs,
                      const Vocabulary& vocab_s, const Vocabulary& vocab_t,
                      double epsilon = 1e-4,
                      PmiTransform transform = PmiTransform::Ratio);

// All weights 1, so log pi vanishes from the edge weight.
PriorMatrix uniform_prior(const Vocabulary& vocab_s, const Vocabulary& vocab_t);

// TSV `source sentence tokens<TAB>target sentence tokens`, space separated.
std::vector<AlignedPair> read_aligned_pairs(const std::filesystem::path& path);

// TSV `source_term<TAB>target_term<TAB>weight` with a `#default_weight=<w>`
// header line. Terms outside the vocabularies are skipped on read.
void write_prior(const PriorMatrix& prior, const Vocabulary& vocab_s,
                 const Vocabulary& vocab_t, const std::filesystem::path& path);
PriorMatrix read_prior(const std::filesystem::path& path,
                       const Vocabulary& vocab_s, const Vocabulary& vocab_t);

// Edges eligible for matching: every edge with pi > 0. A positive
// max_per_source keeps only the strongest edges of each source term
// (ties by target id).
std::vector<TermPair> candidate_edges(const PriorMatrix& prior,
                                      int max_per_source = 0);

}  // namespace muto
