#include "muto/synthetic.hpp"

#include "muto/random.hpp"

#include <cstdio>
#include <fstream>
#include <numeric>

namespace muto {

std::string synthetic_term(Language lang, int index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%05d", lang == Language::Source ? "src" : "tgt", index);
  return buf;
}

Matching random_matching(int n_source, int n_target, int size, std::uint64_t seed) {
  if (size < 0 || size > std::min(n_source, n_target))
    throw Error("random_matching: size exceeds the smaller vocabulary");
  Rng rng(seed);
  auto shuffled = [&rng](int n) {
    std::vector<int> v(n);
    std::iota(v.begin(), v.end(), 0);
    for (int i = n - 1; i > 0; --i)
      std::swap(v[i], v[rng.below(static_cast<std::size_t>(i) + 1)]);
    return v;
  };
  const auto s = shuffled(n_source);
  const auto t = shuffled(n_target);
  std::vector<TermPair> pairs;
  for (int i = 0; i < size; ++i) pairs.push_back({s[i], t[i]});
  return Matching(std::move(pairs));
}

std::pair<Corpus, GroundTruth> generate_synthetic_corpus(
    int k, const Matching& true_matching, std::pair<int, int> vocab_sizes,
    int n_docs_per_lang, int doc_len, const Hyperparams& hyper, std::uint64_t seed) {
  Hyperparams h = hyper;
  h.k = k;
  h.validate();
  if (doc_len < 1) throw Error("synthetic: doc_len must be >= 1");
  if (n_docs_per_lang < 0) throw Error("synthetic: document count must be >= 0");
  const std::array<int, 2> sizes{vocab_sizes.first, vocab_sizes.second};
  if (sizes[0] < 1 || sizes[1] < 1) throw Error("synthetic: vocabularies must be nonempty");
  for (const auto& p : true_matching.pairs())
    if (p.source >= sizes[0] || p.target >= sizes[1])
      throw Error("synthetic: matching outside the vocabularies");

  Rng rng(seed);
  const auto& pairs = true_matching.pairs();
  const Eigen::Index n_pairs = static_cast<Eigen::Index>(pairs.size());

  std::array<std::vector<int>, 2> unmatched;
  for (std::size_t l = 0; l < 2; ++l) {
    const auto index = true_matching.pair_index(kLanguages[l], sizes[l]);
    for (int w = 0; w < sizes[l]; ++w)
      if (index[w] < 0) unmatched[l].push_back(w);
  }

  GroundTruth truth;
  for (std::size_t l = 0; l < 2; ++l) {
    const Eigen::Index u = static_cast<Eigen::Index>(unmatched[l].size());
    truth.background[l] = u > 0 ? rng.dirichlet(u, h.gamma / u) : Eigen::VectorXd(0);
    for (int w : unmatched[l]) truth.background_terms[l].push_back(synthetic_term(kLanguages[l], w));
  }
  truth.true_topics = Eigen::MatrixXd::Zero(k, n_pairs);
  if (n_pairs > 0)
    for (int topic = 0; topic < k; ++topic)
      truth.true_topics.row(topic) = rng.dirichlet(n_pairs, h.lambda / n_pairs).transpose();
  for (const auto& p : pairs)
    truth.pairs.emplace_back(synthetic_term(Language::Source, p.source),
                             synthetic_term(Language::Target, p.target));

  std::vector<RawDocument> raw;
  std::vector<Eigen::VectorXd> doc_theta;
  for (int d = 0; d < n_docs_per_lang; ++d) {
    const Eigen::VectorXd theta = rng.dirichlet(k, h.alpha / k);
    for (Language lang : kLanguages) {
      const std::size_t l = index_of(lang);
      RawDocument doc;
      doc.id = std::string(lang == Language::Source ? "sdoc" : "tdoc") + std::to_string(d);
      doc.language = lang;
      for (int n = 0; n < doc_len; ++n) {
        const auto topic = rng.categorical(theta);
        bool matched = rng.uniform() < 0.5;
        if (matched && n_pairs == 0) matched = false;
        if (!matched && unmatched[l].empty()) matched = true;
        int w;
        if (matched) {
          const auto& pair = pairs[rng.categorical(truth.true_topics.row(topic))];
          w = lang == Language::Source ? pair.source : pair.target;
        } else {
          w = unmatched[l][rng.categorical(truth.background[l])];
        }
        doc.tokens.push_back(synthetic_term(lang, w));
      }
      raw.push_back(std::move(doc));
      doc_theta.push_back(theta);
    }
  }

  // Source documents first, then target documents, pair order within each.
  std::vector<RawDocument> ordered;
  std::vector<Eigen::VectorXd> ordered_theta;
  for (std::size_t side = 0; side < 2; ++side)
    for (std::size_t i = side; i < raw.size(); i += 2) {
      ordered.push_back(std::move(raw[i]));
      ordered_theta.push_back(doc_theta[i]);
    }

  CorpusOptions options;
  options.max_terms = std::max(sizes[0], sizes[1]);
  Corpus corpus = encode_corpus(ordered, options);
  for (int d = 0; d < n_docs_per_lang; ++d)
    corpus.gold_pairs.emplace_back("sdoc" + std::to_string(d), "tdoc" + std::to_string(d));
  corpus.validate();

  truth.true_theta.resize(static_cast<Eigen::Index>(ordered_theta.size()), k);
  for (std::size_t d = 0; d < ordered_theta.size(); ++d)
    truth.true_theta.row(d) = ordered_theta[d].transpose();

  std::vector<TermPair> present;
  for (const auto& [s, t] : truth.pairs) {
    auto i = corpus.vocab_s.find(s);
    auto j = corpus.vocab_t.find(t);
    if (i && j) present.push_back({*i, *j});
  }
  truth.true_matching = Matching(std::move(present));
  return {std::move(corpus), std::move(truth)};
}

nlohmann::ordered_json ground_truth_to_json(const GroundTruth& truth, const Corpus& corpus) {
  nlohmann::ordered_json j;
  auto pairs = nlohmann::ordered_json::array();
  for (const auto& [s, t] : truth.pairs) pairs.push_back({s, t});
  j["pairs"] = std::move(pairs);

  auto beta = nlohmann::ordered_json::array();
  for (Eigen::Index k = 0; k < truth.true_topics.rows(); ++k) {
    auto row = nlohmann::ordered_json::array();
    for (Eigen::Index t = 0; t < truth.true_topics.cols(); ++t)
      row.push_back(truth.true_topics(k, t));
    beta.push_back(std::move(row));
  }
  j["beta"] = std::move(beta);

  nlohmann::ordered_json theta;
  for (std::size_t d = 0; d < corpus.documents.size(); ++d) {
    auto row = nlohmann::ordered_json::array();
    for (Eigen::Index k = 0; k < truth.true_theta.cols(); ++k)
      row.push_back(truth.true_theta(static_cast<Eigen::Index>(d), k));
    theta[corpus.documents[d].id] = std::move(row);
  }
  j["theta"] = std::move(theta);

  nlohmann::ordered_json rho;
  for (Language lang : kLanguages) {
    const std::size_t l = index_of(lang);
    nlohmann::ordered_json dist;
    for (std::size_t w = 0; w < truth.background_terms[l].size(); ++w)
      dist[truth.background_terms[l][w]] = truth.background[l](static_cast<Eigen::Index>(w));
    rho[std::string(language_tag(lang))] = std::move(dist);
  }
  j["rho"] = std::move(rho);
  return j;
}

void write_ground_truth(const GroundTruth& truth, const Corpus& corpus,
                        const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << ground_truth_to_json(truth, corpus).dump(1) << '\n';
}

}  // namespace muto
