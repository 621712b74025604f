#pragma once

#include "muto/core.hpp"
#include "muto/corpus.hpp"
#include "muto/matching.hpp"
#include "muto/random.hpp"
#include "muto/snapshot.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace muto {

// Collapsed Gibbs state for a fixed matching. The topic assignments z are the
// whole state; every count below is a function of z, the corpus and the
// matching, and is maintained incrementally.
struct SamplerState {
  Hyperparams hyper;
  Matching matching;

  std::vector<Language> doc_language;
  std::vector<std::vector<int>> words;
  std::vector<std::vector<int>> z;

  CountMatrix doc_topic;                 // D_{d,k}
  std::array<CountMatrix, 2> term_topic; // per-term topic counts, all terms
  CountMatrix pair_topic;                // C_{t,k}, row per matched pair
  CountVector matched_topic_total;       // C_{k,.}
  std::array<std::vector<int>, 2> pair_index;
  std::array<CountVector, 2> term_frequency;  // N_{L,w}
  std::array<std::int64_t, 2> background_total{0, 0};

  Rng rng;

  int num_topics() const { return hyper.k; }
  int num_docs() const { return static_cast<int>(words.size()); }
  bool token_matched(int d, int n) const {
    return pair_index[index_of(doc_language[d])][words[d][n]] >= 0;
  }
};

// Draws every z uniformly. Each token's initial draw is keyed by
// (seed, document id, position), so it does not depend on document order.
SamplerState init_state(const Corpus& corpus, const Matching& matching,
                        const Hyperparams& hyper, std::uint64_t seed);

// Rebuilds a state from explicit assignments (checkpoint resume, audits).
SamplerState state_from_assignments(const Corpus& corpus, const Matching& matching,
                                    const Hyperparams& hyper,
                                    std::vector<std::vector<int>> z);

// Removes token (d, n) from all counts, leaving z[d][n] as is.
void detach_token(SamplerState& state, int d, int n);
// Sets z[d][n] = topic and adds the token back into all counts.
void attach_token(SamplerState& state, int d, int n, int topic);

// Topic conditional for a detached token. Matched tokens use the document
// factor times the pair factor; unmatched tokens use the document factor.
Eigen::VectorXd conditional_distribution(const SamplerState& state, int d, int n);

// One pass over every token in document order.
void gibbs_sweep(SamplerState& state);

// Swaps in a new matching; z is kept and the matching-dependent counts are
// rebuilt from it.
void rematch(SamplerState& state, Matching new_matching);

// True when every count equals a from-scratch rebuild from z.
bool counts_consistent(const SamplerState& state);

SamplerSnapshot take_snapshot(const SamplerState& state);

// theta(d, k) = (D_{d,k} + alpha/K) / (M_d + alpha)
Eigen::MatrixXd estimate_theta(const SamplerState& state);
// beta(k, t) = (C_{k,t} + lambda/|m|) / (C_{k,.} + lambda); K x |m|
Eigen::MatrixXd estimate_beta(const SamplerState& state);
// rho[L](w) = (N_{L,w} + gamma/U_L) / (N_{L,.} + gamma) over the U_L
// unmatched terms; matched terms get 0.
std::array<Eigen::VectorXd, 2> estimate_rho(const SamplerState& state);

// Tokens of each language assigned to each topic; K x 2.
Eigen::Matrix<std::int64_t, Eigen::Dynamic, 2> topic_language_counts(
    const SamplerState& state);

}  // namespace muto
