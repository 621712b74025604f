#pragma once

#include "muto/matching.hpp"
#include "muto/priors.hpp"
#include "muto/snapshot.hpp"

#include <vector>

namespace muto {

// Gain in log posterior from adding edge (i, j) to the matching:
//
//   mu = sum_k C_k log beta_k - N_S,i log rho_S,i - N_T,j log rho_T,j + log pi
//
// where C_k pools the topic-k counts of both terms. beta uses the current
// topic totals C_{k,.} and the current |m| (at least 1); rho is evaluated as
// if the edge were not in the matching (a matched term's tokens join the
// background total). Requires pi(i, j) > 0.
double edge_weight(int i, int j, const SamplerSnapshot& snapshot,
                   const PriorMatrix& prior);

WeightMatrix compute_weights(const SamplerSnapshot& snapshot,
                             const PriorMatrix& prior,
                             const std::vector<TermPair>& candidates);

// Weights for the prior-only ablation: log pi, offset so the weakest
// candidate has weight 1 and every candidate is eligible.
WeightMatrix prior_only_weights(const PriorMatrix& prior,
                                const std::vector<TermPair>& candidates);

}  // namespace muto
