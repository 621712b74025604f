#include "muto/lda.hpp"

#include <unordered_map>

namespace muto {

VocabMode parse_vocab_mode(std::string_view name) {
  if (name == "union") return VocabMode::Union;
  if (name == "intersection") return VocabMode::Intersection;
  throw ConfigError("unknown baseline vocabulary '" + std::string(name) + "'");
}

namespace {

double lda_weights(const LdaState& s, int d, int n, Eigen::VectorXd& out) {
  const Hyperparams& h = s.hyper;
  const double doc_alpha = h.alpha / h.k;
  const double doc_denom = static_cast<double>(s.words[d].size()) - 1.0 + h.alpha;
  const double term_lambda = h.lambda / s.vocab_size();
  const int w = s.words[d][n];
  out.resize(h.k);
  for (int k = 0; k < h.k; ++k)
    out(k) = (s.doc_topic(d, k) + doc_alpha) / doc_denom *
             (s.term_topic(w, k) + term_lambda) /
             (static_cast<double>(s.topic_total(k)) + h.lambda);
  return out.sum();
}

}  // namespace

LdaState init_lda_state(const Corpus& corpus, VocabMode mode, const Hyperparams& hyper,
                        std::uint64_t seed) {
  hyper.validate();
  LdaState s;
  s.hyper = hyper;

  std::unordered_map<std::string, int> index;
  std::array<std::vector<int>, 2> remap;
  for (Language lang : kLanguages)
    remap[index_of(lang)].assign(corpus.vocab(lang).size(), -1);
  if (mode == VocabMode::Union) {
    for (Language lang : kLanguages) {
      const Vocabulary& v = corpus.vocab(lang);
      for (int w = 0; w < v.size(); ++w) {
        auto [it, fresh] = index.emplace(v.term(w), static_cast<int>(s.terms.size()));
        if (fresh) s.terms.push_back(v.term(w));
        remap[index_of(lang)][w] = it->second;
      }
    }
  } else {
    for (int w = 0; w < corpus.vocab_s.size(); ++w) {
      if (auto j = corpus.vocab_t.find(corpus.vocab_s.term(w))) {
        const int id = static_cast<int>(s.terms.size());
        s.terms.push_back(corpus.vocab_s.term(w));
        remap[0][w] = id;
        remap[1][*j] = id;
      }
    }
    if (s.terms.empty()) throw Error("empty intersection vocabulary");
  }

  for (const auto& doc : corpus.documents) {
    s.doc_language.push_back(doc.language);
    std::vector<int> ids;
    for (int w : doc.tokens)
      if (int id = remap[index_of(doc.language)][w]; id >= 0) ids.push_back(id);
    s.words.push_back(std::move(ids));
  }

  s.doc_topic = CountMatrix::Zero(s.num_docs(), hyper.k);
  s.term_topic = CountMatrix::Zero(s.vocab_size(), hyper.k);
  s.topic_total = CountVector::Zero(hyper.k);
  s.z.resize(s.words.size());
  for (int d = 0; d < s.num_docs(); ++d) {
    const std::uint64_t doc_key = mix64(seed, hash_string(corpus.documents[d].id));
    for (std::size_t n = 0; n < s.words[d].size(); ++n) {
      const double u = static_cast<double>(mix64(doc_key, n) >> 11) * 0x1.0p-53;
      const int topic = std::min(hyper.k - 1, static_cast<int>(u * hyper.k));
      s.z[d].push_back(topic);
      ++s.doc_topic(d, topic);
      ++s.term_topic(s.words[d][n], topic);
      ++s.topic_total(topic);
    }
  }
  s.rng = Rng(mix64(seed, 0x1daULL));
  return s;
}

void lda_detach_token(LdaState& s, int d, int n) {
  const int topic = s.z[d][n];
  --s.doc_topic(d, topic);
  --s.term_topic(s.words[d][n], topic);
  --s.topic_total(topic);
}

void lda_attach_token(LdaState& s, int d, int n, int topic) {
  s.z[d][n] = topic;
  ++s.doc_topic(d, topic);
  ++s.term_topic(s.words[d][n], topic);
  ++s.topic_total(topic);
}

Eigen::VectorXd lda_conditional(const LdaState& state, int d, int n) {
  Eigen::VectorXd p;
  const double total = lda_weights(state, d, n, p);
  return p / total;
}

void lda_sweep(LdaState& state) {
  Eigen::VectorXd weights(state.hyper.k);
  for (int d = 0; d < state.num_docs(); ++d) {
    const int len = static_cast<int>(state.words[d].size());
    for (int n = 0; n < len; ++n) {
      lda_detach_token(state, d, n);
      const double total = lda_weights(state, d, n, weights);
      lda_attach_token(state, d, n, static_cast<int>(state.rng.categorical(weights, total)));
    }
  }
}

TrainedModel lda_model(const Corpus& corpus, const LdaState& state, VocabMode mode) {
  const Hyperparams& h = state.hyper;
  TrainedModel model;
  model.kind = mode == VocabMode::Union ? ModelKind::LdaUnion : ModelKind::LdaIntersection;
  model.hyper = h;
  for (const auto& doc : corpus.documents) {
    model.doc_ids.push_back(doc.id);
    model.doc_languages.push_back(doc.language);
  }
  model.theta = state.doc_topic.cast<double>().array() + h.alpha / h.k;
  for (int d = 0; d < state.num_docs(); ++d)
    model.theta.row(d) /= static_cast<double>(state.words[d].size()) + h.alpha;

  model.beta = state.term_topic.transpose().cast<double>().array() +
               h.lambda / state.vocab_size();
  for (int k = 0; k < h.k; ++k)
    model.beta.row(k) /= static_cast<double>(state.topic_total(k)) + h.lambda;
  model.unit_labels = state.terms;
  model.vocab_terms = {corpus.vocab_s.terms(), corpus.vocab_t.terms()};
  model.rho = {Eigen::VectorXd(0), Eigen::VectorXd(0)};

  model.topic_language_tokens =
      Eigen::Matrix<std::int64_t, Eigen::Dynamic, 2>::Zero(h.k, 2);
  for (int d = 0; d < state.num_docs(); ++d)
    for (int topic : state.z[d])
      ++model.topic_language_tokens(topic, index_of(state.doc_language[d]));
  return model;
}

TrainedModel run_lda(const Corpus& corpus, VocabMode mode, const Hyperparams& hyper,
                     const LdaConfig& config) {
  if (config.iters < 0) throw ConfigError("lda iterations must be >= 0");
  LdaState state = init_lda_state(corpus, mode, hyper, config.seed);
  for (int it = 0; it < config.iters; ++it) lda_sweep(state);
  return lda_model(corpus, state, mode);
}

}  // namespace muto
