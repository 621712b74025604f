#include "muto/sampler.hpp"

namespace muto {

namespace {

void check_compatible(const Corpus& corpus, const Matching& matching) {
  for (const auto& p : matching.pairs())
    if (p.source >= corpus.vocab_s.size() || p.target >= corpus.vocab_t.size())
      throw Error("matching refers to terms outside the corpus vocabularies");
}

// Sizes and zeroes every count; fills structure that does not depend on z.
void reset_counts(SamplerState& s, const std::array<int, 2>& vocab_sizes) {
  const int k = s.hyper.k;
  s.doc_topic = CountMatrix::Zero(s.num_docs(), k);
  for (std::size_t l = 0; l < 2; ++l) {
    s.term_topic[l] = CountMatrix::Zero(vocab_sizes[l], k);
    s.term_frequency[l] = CountVector::Zero(vocab_sizes[l]);
    s.pair_index[l] = s.matching.pair_index(kLanguages[l], vocab_sizes[l]);
  }
  s.pair_topic = CountMatrix::Zero(static_cast<Eigen::Index>(s.matching.size()), k);
  s.matched_topic_total = CountVector::Zero(k);
  s.background_total = {0, 0};
}

void count_all(SamplerState& s) {
  for (int d = 0; d < s.num_docs(); ++d) {
    const std::size_t l = index_of(s.doc_language[d]);
    for (std::size_t n = 0; n < s.words[d].size(); ++n) {
      const int w = s.words[d][n];
      const int topic = s.z[d][n];
      ++s.doc_topic(d, topic);
      ++s.term_topic[l](w, topic);
      ++s.term_frequency[l](w);
      const int t = s.pair_index[l][w];
      if (t >= 0) {
        ++s.pair_topic(t, topic);
        ++s.matched_topic_total(topic);
      } else {
        ++s.background_total[l];
      }
    }
  }
}

void adjust(SamplerState& s, int d, int n, int topic, int delta) {
  const std::size_t l = index_of(s.doc_language[d]);
  const int w = s.words[d][n];
  s.doc_topic(d, topic) += delta;
  s.term_topic[l](w, topic) += delta;
  const int t = s.pair_index[l][w];
  if (t >= 0) {
    s.pair_topic(t, topic) += delta;
    s.matched_topic_total(topic) += delta;
  }
}

// Unnormalized conditional into `out`; returns the sum.
double conditional_weights(const SamplerState& s, int d, int n, Eigen::VectorXd& out) {
  const Hyperparams& h = s.hyper;
  const double doc_alpha = h.alpha / h.k;
  const double doc_denom = static_cast<double>(s.words[d].size()) - 1.0 + h.alpha;
  const int t = s.pair_index[index_of(s.doc_language[d])][s.words[d][n]];
  out.resize(h.k);
  if (t < 0) {
    for (int k = 0; k < h.k; ++k) out(k) = (s.doc_topic(d, k) + doc_alpha) / doc_denom;
  } else {
    const double pair_lambda = h.lambda / static_cast<double>(s.matching.size());
    for (int k = 0; k < h.k; ++k)
      out(k) = (s.doc_topic(d, k) + doc_alpha) / doc_denom *
               (s.pair_topic(t, k) + pair_lambda) /
               (static_cast<double>(s.matched_topic_total(k)) + h.lambda);
  }
  return out.sum();
}

}  // namespace

SamplerState state_from_assignments(const Corpus& corpus, const Matching& matching,
                                    const Hyperparams& hyper,
                                    std::vector<std::vector<int>> z) {
  hyper.validate();
  check_compatible(corpus, matching);
  if (z.size() != corpus.documents.size())
    throw Error("assignments: document count mismatch");

  SamplerState s;
  s.hyper = hyper;
  s.matching = matching;
  for (std::size_t d = 0; d < corpus.documents.size(); ++d) {
    const auto& doc = corpus.documents[d];
    if (z[d].size() != doc.tokens.size())
      throw Error("assignments: token count mismatch in document '" + doc.id + "'");
    for (int topic : z[d])
      if (topic < 0 || topic >= hyper.k) throw Error("assignments: topic out of range");
    s.doc_language.push_back(doc.language);
    s.words.push_back(doc.tokens);
  }
  s.z = std::move(z);
  reset_counts(s, {corpus.vocab_s.size(), corpus.vocab_t.size()});
  count_all(s);
  return s;
}

SamplerState init_state(const Corpus& corpus, const Matching& matching,
                        const Hyperparams& hyper, std::uint64_t seed) {
  hyper.validate();
  std::vector<std::vector<int>> z(corpus.documents.size());
  for (std::size_t d = 0; d < corpus.documents.size(); ++d) {
    const auto& doc = corpus.documents[d];
    const std::uint64_t doc_key = mix64(seed, hash_string(doc.id));
    z[d].resize(doc.tokens.size());
    for (std::size_t n = 0; n < doc.tokens.size(); ++n) {
      const double u = static_cast<double>(mix64(doc_key, n) >> 11) * 0x1.0p-53;
      z[d][n] = std::min(hyper.k - 1, static_cast<int>(u * hyper.k));
    }
  }
  SamplerState s = state_from_assignments(corpus, matching, hyper, std::move(z));
  s.rng = Rng(mix64(seed, 0x5eedULL));
  return s;
}

void detach_token(SamplerState& state, int d, int n) {
  adjust(state, d, n, state.z[d][n], -1);
}

void attach_token(SamplerState& state, int d, int n, int topic) {
  state.z[d][n] = topic;
  adjust(state, d, n, topic, +1);
}

Eigen::VectorXd conditional_distribution(const SamplerState& state, int d, int n) {
  Eigen::VectorXd p;
  const double total = conditional_weights(state, d, n, p);
  return p / total;
}

void gibbs_sweep(SamplerState& state) {
  Eigen::VectorXd weights(state.hyper.k);
  for (int d = 0; d < state.num_docs(); ++d) {
    const int len = static_cast<int>(state.words[d].size());
    for (int n = 0; n < len; ++n) {
      detach_token(state, d, n);
      const double total = conditional_weights(state, d, n, weights);
      attach_token(state, d, n, static_cast<int>(state.rng.categorical(weights, total)));
    }
  }
}

void rematch(SamplerState& state, Matching new_matching) {
  state.matching = std::move(new_matching);
  const std::array<int, 2> sizes{static_cast<int>(state.term_topic[0].rows()),
                                 static_cast<int>(state.term_topic[1].rows())};
  for (std::size_t l = 0; l < 2; ++l) {
    state.pair_index[l] = state.matching.pair_index(kLanguages[l], sizes[l]);
    state.background_total[l] = 0;
  }
  const int k = state.hyper.k;
  state.pair_topic = CountMatrix::Zero(static_cast<Eigen::Index>(state.matching.size()), k);
  const auto& pairs = state.matching.pairs();
  for (std::size_t t = 0; t < pairs.size(); ++t)
    state.pair_topic.row(t) =
        state.term_topic[0].row(pairs[t].source) + state.term_topic[1].row(pairs[t].target);
  state.matched_topic_total = state.pair_topic.cast<std::int64_t>().colwise().sum().transpose();
  for (std::size_t l = 0; l < 2; ++l)
    for (int w = 0; w < sizes[l]; ++w)
      if (state.pair_index[l][w] < 0) state.background_total[l] += state.term_frequency[l](w);
}

bool counts_consistent(const SamplerState& state) {
  SamplerState fresh;
  fresh.hyper = state.hyper;
  fresh.matching = state.matching;
  fresh.doc_language = state.doc_language;
  fresh.words = state.words;
  fresh.z = state.z;
  reset_counts(fresh, {static_cast<int>(state.term_topic[0].rows()),
                       static_cast<int>(state.term_topic[1].rows())});
  count_all(fresh);
  return fresh.doc_topic == state.doc_topic && fresh.term_topic == state.term_topic &&
         fresh.pair_topic == state.pair_topic &&
         fresh.matched_topic_total == state.matched_topic_total &&
         fresh.pair_index == state.pair_index &&
         fresh.term_frequency == state.term_frequency &&
         fresh.background_total == state.background_total;
}

SamplerSnapshot take_snapshot(const SamplerState& state) {
  SamplerSnapshot snap;
  snap.hyper = state.hyper;
  snap.matching = state.matching;
  snap.term_topic = state.term_topic;
  snap.pair_index = state.pair_index;
  snap.matched_topic_total = state.matched_topic_total;
  snap.term_frequency = state.term_frequency;
  snap.background_total = state.background_total;
  return snap;
}

Eigen::MatrixXd estimate_theta(const SamplerState& state) {
  const Hyperparams& h = state.hyper;
  Eigen::MatrixXd theta = state.doc_topic.cast<double>().array() + h.alpha / h.k;
  for (int d = 0; d < state.num_docs(); ++d)
    theta.row(d) /= static_cast<double>(state.words[d].size()) + h.alpha;
  return theta;
}

Eigen::MatrixXd estimate_beta(const SamplerState& state) {
  const Hyperparams& h = state.hyper;
  const Eigen::Index pairs = static_cast<Eigen::Index>(state.matching.size());
  if (pairs == 0) return Eigen::MatrixXd(h.k, 0);
  Eigen::MatrixXd beta =
      state.pair_topic.transpose().cast<double>().array() + h.lambda / static_cast<double>(pairs);
  for (int k = 0; k < h.k; ++k)
    beta.row(k) /= static_cast<double>(state.matched_topic_total(k)) + h.lambda;
  return beta;
}

std::array<Eigen::VectorXd, 2> estimate_rho(const SamplerState& state) {
  std::array<Eigen::VectorXd, 2> rho;
  const double gamma = state.hyper.gamma;
  for (std::size_t l = 0; l < 2; ++l) {
    const Eigen::Index v = state.term_frequency[l].size();
    Eigen::Index unmatched = 0;
    for (Eigen::Index w = 0; w < v; ++w) unmatched += state.pair_index[l][w] < 0;
    rho[l] = Eigen::VectorXd::Zero(v);
    if (unmatched == 0) continue;
    const double denom = static_cast<double>(state.background_total[l]) + gamma;
    for (Eigen::Index w = 0; w < v; ++w)
      if (state.pair_index[l][w] < 0)
        rho[l](w) = (static_cast<double>(state.term_frequency[l](w)) +
                     gamma / static_cast<double>(unmatched)) / denom;
  }
  return rho;
}

Eigen::Matrix<std::int64_t, Eigen::Dynamic, 2> topic_language_counts(
    const SamplerState& state) {
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, 2> counts(state.hyper.k, 2);
  for (std::size_t l = 0; l < 2; ++l)
    counts.col(l) = state.term_topic[l].cast<std::int64_t>().colwise().sum().transpose();
  return counts;
}

}  // namespace muto
