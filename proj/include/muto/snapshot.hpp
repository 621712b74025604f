#pragma once

#include "muto/core.hpp"
#include "muto/matching.hpp"

#include <array>
#include <vector>

namespace muto {

// Frozen view of the sampler's sufficient statistics. Everything here is a
// function of the per-term topic counts and the matching, so a snapshot can
// also be assembled directly from hand-set counts.
struct SamplerSnapshot {
  Hyperparams hyper;
  Matching matching;
  // term_topic[L](w, k): tokens of term w in language L assigned topic k,
  // for every term whether matched or not.
  std::array<CountMatrix, 2> term_topic;
  // pair_index[L][w]: index of w's pair in matching.pairs(), or -1.
  std::array<std::vector<int>, 2> pair_index;
  // Matched tokens per topic (both languages), C_{k,.}.
  CountVector matched_topic_total;
  // Token frequency of each term, N_{L,w}.
  std::array<CountVector, 2> term_frequency;
  // Tokens of currently unmatched terms per language.
  std::array<std::int64_t, 2> background_total{0, 0};

  static SamplerSnapshot from_counts(const Hyperparams& hyper, Matching matching,
                                     CountMatrix term_topic_s,
                                     CountMatrix term_topic_t);

  int vocab_size(Language lang) const {
    return static_cast<int>(term_topic[index_of(lang)].rows());
  }
  bool is_matched(Language lang, int w) const {
    return pair_index[index_of(lang)][w] >= 0;
  }
};

}  // namespace muto
