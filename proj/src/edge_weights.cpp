#include "muto/edge_weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace muto {

SamplerSnapshot SamplerSnapshot::from_counts(const Hyperparams& hyper,
                                             Matching matching,
                                             CountMatrix term_topic_s,
                                             CountMatrix term_topic_t) {
  if (term_topic_s.cols() != hyper.k || term_topic_t.cols() != hyper.k)
    throw Error("snapshot: count matrices must have K columns");
  SamplerSnapshot snap;
  snap.hyper = hyper;
  snap.term_topic = {std::move(term_topic_s), std::move(term_topic_t)};
  snap.pair_index = {
      matching.pair_index(Language::Source, static_cast<int>(snap.term_topic[0].rows())),
      matching.pair_index(Language::Target, static_cast<int>(snap.term_topic[1].rows()))};
  snap.matching = std::move(matching);
  snap.matched_topic_total = CountVector::Zero(hyper.k);
  for (std::size_t l = 0; l < 2; ++l) {
    const CountMatrix& counts = snap.term_topic[l];
    snap.term_frequency[l] = counts.cast<std::int64_t>().rowwise().sum();
    for (Eigen::Index w = 0; w < counts.rows(); ++w) {
      if (snap.pair_index[l][w] >= 0)
        snap.matched_topic_total += counts.row(w).transpose().cast<std::int64_t>();
      else
        snap.background_total[l] += snap.term_frequency[l](w);
    }
  }
  return snap;
}

double edge_weight(int i, int j, const SamplerSnapshot& snapshot,
                   const PriorMatrix& prior) {
  const double pi = prior.weight(i, j);
  if (!(pi > 0)) throw Error("edge_weight: edge is disallowed by the prior");

  const Hyperparams& h = snapshot.hyper;
  const bool i_matched = snapshot.is_matched(Language::Source, i);
  const bool j_matched = snapshot.is_matched(Language::Target, j);
  // An empty matching would leave lambda / |m| undefined; count it as one pair.
  const double pairs = std::max<double>(1.0, static_cast<double>(snapshot.matching.size()));

  const auto row_s = snapshot.term_topic[0].row(i);
  const auto row_t = snapshot.term_topic[1].row(j);

  double topic_term = 0.0;
  for (int k = 0; k < h.k; ++k) {
    const double count = static_cast<double>(row_s(k)) + row_t(k);
    if (count == 0) continue;
    const double total = static_cast<double>(snapshot.matched_topic_total(k));
    topic_term += count * std::log((count + h.lambda / pairs) / (total + h.lambda));
  }

  auto background_term = [&](Language lang, int w, bool matched) {
    const std::size_t l = index_of(lang);
    const double n = static_cast<double>(snapshot.term_frequency[l](w));
    if (n == 0) return 0.0;
    const double vocab = snapshot.vocab_size(lang);
    const double denom =
        static_cast<double>(snapshot.background_total[l]) + (matched ? n : 0.0) + h.gamma;
    return n * std::log((n + h.gamma / vocab) / denom);
  };

  return topic_term - background_term(Language::Source, i, i_matched) -
         background_term(Language::Target, j, j_matched) + std::log(pi);
}

WeightMatrix compute_weights(const SamplerSnapshot& snapshot,
                             const PriorMatrix& prior,
                             const std::vector<TermPair>& candidates) {
  std::vector<WeightedEdge> edges;
  edges.reserve(candidates.size());
  for (const auto& c : candidates)
    edges.push_back({c.source, c.target, edge_weight(c.source, c.target, snapshot, prior)});
  return WeightMatrix(std::move(edges));
}

WeightMatrix prior_only_weights(const PriorMatrix& prior,
                                const std::vector<TermPair>& candidates) {
  double floor = std::numeric_limits<double>::infinity();
  for (const auto& c : candidates) {
    const double pi = prior.weight(c.source, c.target);
    if (!(pi > 0)) throw Error("prior_only_weights: edge is disallowed by the prior");
    floor = std::min(floor, std::log(pi));
  }
  std::vector<WeightedEdge> edges;
  edges.reserve(candidates.size());
  for (const auto& c : candidates)
    edges.push_back(
        {c.source, c.target, std::log(prior.weight(c.source, c.target)) - floor + 1.0});
  return WeightMatrix(std::move(edges));
}

}  // namespace muto
