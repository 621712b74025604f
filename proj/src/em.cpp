#include "muto/em.hpp"

#include "muto/edge_weights.hpp"

#include <algorithm>
#include <set>

namespace muto {

nlohmann::ordered_json checkpoint_to_json(const Checkpoint& cp,
                                          const Vocabulary& vocab_s,
                                          const Vocabulary& vocab_t) {
  nlohmann::ordered_json j;
  j["completed_steps"] = cp.completed_steps;
  auto pairs = nlohmann::ordered_json::array();
  for (std::size_t t = 0; t < cp.matching.size(); ++t) {
    const auto& p = cp.matching.pairs()[t];
    pairs.push_back({vocab_s.term(p.source), vocab_t.term(p.target),
                     t < cp.matching_weights.size() ? cp.matching_weights[t] : 0.0});
  }
  j["matching"] = std::move(pairs);
  j["z"] = cp.z;
  j["rng"] = cp.rng_state;
  j["trace"] = em_trace_to_json(cp.trace);
  return j;
}

Checkpoint checkpoint_from_json(const nlohmann::json& j, const Vocabulary& vocab_s,
                                const Vocabulary& vocab_t) {
  Checkpoint cp;
  try {
    cp.completed_steps = j.at("completed_steps").get<int>();
    std::vector<std::pair<TermPair, double>> pairs;
    for (const auto& e : j.at("matching")) {
      auto i = vocab_s.find(e.at(0).get<std::string>());
      auto t = vocab_t.find(e.at(1).get<std::string>());
      if (!i || !t) throw Error("checkpoint: matched term missing from the corpus");
      pairs.push_back({{*i, *t}, e.at(2).get<double>()});
    }
    std::sort(pairs.begin(), pairs.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<TermPair> ids;
    for (const auto& [p, w] : pairs) {
      ids.push_back(p);
      cp.matching_weights.push_back(w);
    }
    cp.matching = Matching(std::move(ids));
    cp.z = j.at("z").get<std::vector<std::vector<int>>>();
    cp.rng_state = j.at("rng").get<std::string>();
    cp.trace = em_trace_from_json(j.at("trace"));
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed checkpoint: ") + e.what());
  }
  return cp;
}

int candidate_pool_cap(const std::vector<TermPair>& candidates) {
  std::set<int> sources, targets;
  for (const auto& c : candidates) {
    sources.insert(c.source);
    targets.insert(c.target);
  }
  return std::max<int>(1, static_cast<int>(std::min(sources.size(), targets.size())));
}

TrainedModel model_from_state(const Corpus& corpus, const SamplerState& state,
                              std::vector<double> matching_weights,
                              std::vector<EmStep> trace) {
  TrainedModel model;
  model.kind = ModelKind::Muto;
  model.hyper = state.hyper;
  for (const auto& doc : corpus.documents) {
    model.doc_ids.push_back(doc.id);
    model.doc_languages.push_back(doc.language);
  }
  model.theta = estimate_theta(state);
  model.beta = estimate_beta(state);
  model.vocab_terms = {corpus.vocab_s.terms(), corpus.vocab_t.terms()};
  for (const auto& p : state.matching.pairs())
    model.unit_labels.push_back(corpus.vocab_s.term(p.source) + ":" +
                                corpus.vocab_t.term(p.target));
  model.rho = estimate_rho(state);
  model.final_matching = state.matching;
  matching_weights.resize(state.matching.size(), 0.0);
  model.matching_weights = std::move(matching_weights);
  model.em_trace = std::move(trace);
  model.topic_language_tokens = topic_language_counts(state);
  return model;
}

TrainedModel run_muto(const Corpus& corpus, const PriorMatrix& prior,
                      const Hyperparams& hyper, const EMConfig& config,
                      const EmHooks& hooks) {
  hyper.validate();
  if (config.m_steps < 0) throw ConfigError("em.m_steps must be >= 0");
  if (config.gibbs_iters < 0) throw ConfigError("em.gibbs_iters must be >= 0");
  if (prior.n_source() != corpus.vocab_s.size() || prior.n_target() != corpus.vocab_t.size())
    throw Error("prior dimensions do not match the corpus vocabularies");

  const std::vector<TermPair> candidates =
      candidate_edges(prior, config.max_candidates_per_source);
  SizeSchedule schedule = config.schedule;
  if (schedule.cap <= 0) schedule.cap = candidate_pool_cap(candidates);
  schedule.validate();
  if (static_cast<int>(schedule.fractions.size()) < config.m_steps)
    throw ConfigError("em.fractions needs one entry per M-step");

  SamplerState state;
  std::vector<EmStep> trace;
  std::vector<double> matching_weights;
  int first_step = 0;
  if (config.resume) {
    const Checkpoint& cp = *config.resume;
    if (cp.completed_steps < 0 || cp.completed_steps > config.m_steps)
      throw ConfigError("checkpoint step is outside this run's M-steps");
    state = state_from_assignments(corpus, cp.matching, hyper, cp.z);
    state.rng.restore(cp.rng_state);
    trace = cp.trace;
    matching_weights = cp.matching_weights;
    first_step = cp.completed_steps;
  } else {
    std::vector<TermPair> seeds;
    for (const auto& p : initial_matching(corpus.vocab_s, corpus.vocab_t,
                                          config.initial_min_length).pairs())
      if (prior.allowed(p.source, p.target)) seeds.push_back(p);
    state = init_state(corpus, Matching(std::move(seeds)), hyper, config.seed);
  }

  auto e_step = [&](int step) {
    for (int it = 0; it < config.gibbs_iters; ++it) {
      gibbs_sweep(state);
      if (hooks.on_sweep) hooks.on_sweep(state, step, it);
    }
  };

  for (int step = first_step; step < config.m_steps; ++step) {
    e_step(step);
    const WeightMatrix weights =
        config.prior_only ? prior_only_weights(prior, candidates)
                          : compute_weights(take_snapshot(state), prior, candidates);
    const int limit = schedule_size(schedule, step);
    Matching next = max_weight_matching(weights, static_cast<std::size_t>(limit));

    EmStep record;
    record.step = step + 1;
    record.size_limit = limit;
    record.matching_size = static_cast<int>(next.size());
    record.objective = matching_weight(next, weights);
    for (const auto& p : next.pairs()) record.changed_pairs += !state.matching.contains(p);
    matching_weights.clear();
    for (const auto& p : next.pairs())
      matching_weights.push_back(*weights.find(p.source, p.target));

    rematch(state, std::move(next));
    if (hooks.on_rematch) hooks.on_rematch(state);
    trace.push_back(record);

    if (hooks.on_m_step) {
      Checkpoint cp{step + 1, state.matching, matching_weights, state.z,
                    state.rng.save(), trace};
      hooks.on_m_step(MStepEvent{trace.back(), weights, state, std::move(cp)});
    }
  }
  e_step(config.m_steps);

  return model_from_state(corpus, state, std::move(matching_weights), std::move(trace));
}

}  // namespace muto
