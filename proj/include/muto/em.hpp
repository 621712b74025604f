#pragma once

#include "muto/corpus.hpp"
#include "muto/matching.hpp"
#include "muto/model.hpp"
#include "muto/priors.hpp"
#include "muto/sampler.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace muto {

// Sampler state after a completed M-step; enough to resume the run exactly.
struct Checkpoint {
  int completed_steps = 0;
  Matching matching;
  std::vector<double> matching_weights;  // pair order
  std::vector<std::vector<int>> z;
  std::string rng_state;
  std::vector<EmStep> trace;
};

nlohmann::ordered_json checkpoint_to_json(const Checkpoint& cp,
                                          const Vocabulary& vocab_s,
                                          const Vocabulary& vocab_t);
Checkpoint checkpoint_from_json(const nlohmann::json& j, const Vocabulary& vocab_s,
                                const Vocabulary& vocab_t);

struct EMConfig {
  int m_steps = 3;
  int gibbs_iters = 250;
  SizeSchedule schedule;   // cap <= 0 means: derive from the candidate pool
  bool prior_only = false;
  int initial_min_length = 6;
  int max_candidates_per_source = 0;  // 0 = keep every pi > 0 edge
  std::uint64_t seed = 0;
  std::optional<Checkpoint> resume;
};

// Observer called after each M-step, once the new matching is in place.
struct MStepEvent {
  const EmStep& trace;
  const WeightMatrix& weights;
  const SamplerState& state;
  Checkpoint checkpoint;
};
using MStepObserver = std::function<void(const MStepEvent&)>;
// Observer called after every Gibbs sweep (M-step index, sweep index).
using SweepObserver = std::function<void(const SamplerState&, int, int)>;

struct EmHooks {
  MStepObserver on_m_step;
  SweepObserver on_sweep;
  std::function<void(const SamplerState&)> on_rematch;
};

// Largest matching the candidate pool admits, bounded by the number of
// distinct source and target terms it touches.
int candidate_pool_cap(const std::vector<TermPair>& candidates);

// Stochastic EM: alternate gibbs_iters sweeps with a MAP re-matching for
// m_steps rounds, then one more E-step before reading off estimates.
TrainedModel run_muto(const Corpus& corpus, const PriorMatrix& prior,
                      const Hyperparams& hyper, const EMConfig& config,
                      const EmHooks& hooks = {});

// Builds the model from a sampler state (estimates plus vocabulary echo).
TrainedModel model_from_state(const Corpus& corpus, const SamplerState& state,
                              std::vector<double> matching_weights,
                              std::vector<EmStep> trace);

}  // namespace muto
