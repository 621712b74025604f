#pragma once

#include "muto/corpus.hpp"
#include "muto/lda.hpp"
#include "muto/sampler.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

namespace support {

using muto::Language;

struct ToyDoc {
  std::string id;
  Language lang;
  std::vector<int> tokens;
};

// Corpus over fixed vocabularies (bypasses frequency ranking).
inline muto::Corpus toy_corpus(std::vector<std::string> vs, std::vector<std::string> vt,
                               const std::vector<ToyDoc>& docs) {
  muto::Corpus c;
  c.vocab_s = muto::Vocabulary(Language::Source, std::move(vs));
  c.vocab_t = muto::Vocabulary(Language::Target, std::move(vt));
  for (const auto& d : docs) c.documents.push_back({d.id, d.lang, d.tokens});
  c.validate();
  return c;
}

inline std::vector<std::string> numbered(const std::string& prefix, int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("muto_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

inline std::string read_text(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// log p(z | m) up to a z-free constant, from words and z alone:
//   prod_d G(a)/G(M_d+a) prod_k G(D_dk + a/K)/G(a/K)
//   prod_k G(l)/G(C_k. + l) prod_t G(C_kt + l/|m|)/G(l/|m|)
// Unmatched tokens enter only through the document term.
inline double muto_log_joint(const std::vector<std::vector<int>>& words,
                             const std::vector<Language>& langs,
                             const std::vector<std::vector<int>>& z,
                             const muto::Matching& matching, const muto::Hyperparams& h) {
  const int K = h.k;
  const auto& pairs = matching.pairs();
  const int m = static_cast<int>(pairs.size());
  std::vector<std::vector<double>> C(K, std::vector<double>(m, 0.0));
  double lp = 0.0;
  for (std::size_t d = 0; d < words.size(); ++d) {
    std::vector<double> D(K, 0.0);
    for (std::size_t n = 0; n < words[d].size(); ++n) {
      const int k = z[d][n];
      D[k] += 1;
      for (int t = 0; t < m; ++t) {
        const int member = langs[d] == Language::Source ? pairs[t].source : pairs[t].target;
        if (member == words[d][n]) C[k][t] += 1;
      }
    }
    lp += std::lgamma(h.alpha) - std::lgamma(words[d].size() + h.alpha);
    for (int k = 0; k < K; ++k) lp += std::lgamma(D[k] + h.alpha / K) - std::lgamma(h.alpha / K);
  }
  if (m > 0) {
    for (int k = 0; k < K; ++k) {
      double tot = 0.0;
      for (int t = 0; t < m; ++t) {
        tot += C[k][t];
        lp += std::lgamma(C[k][t] + h.lambda / m) - std::lgamma(h.lambda / m);
      }
      lp += std::lgamma(h.lambda) - std::lgamma(tot + h.lambda);
    }
  }
  return lp;
}

// Same for LDA over a single vocabulary of size V.
inline double lda_log_joint(const std::vector<std::vector<int>>& words,
                            const std::vector<std::vector<int>>& z, int V,
                            const muto::Hyperparams& h) {
  const int K = h.k;
  std::vector<std::vector<double>> nw(K, std::vector<double>(V, 0.0));
  double lp = 0.0;
  for (std::size_t d = 0; d < words.size(); ++d) {
    std::vector<double> D(K, 0.0);
    for (std::size_t n = 0; n < words[d].size(); ++n) {
      D[z[d][n]] += 1;
      nw[z[d][n]][words[d][n]] += 1;
    }
    lp += std::lgamma(h.alpha) - std::lgamma(words[d].size() + h.alpha);
    for (int k = 0; k < K; ++k) lp += std::lgamma(D[k] + h.alpha / K) - std::lgamma(h.alpha / K);
  }
  for (int k = 0; k < K; ++k) {
    double tot = 0.0;
    for (int w = 0; w < V; ++w) {
      tot += nw[k][w];
      lp += std::lgamma(nw[k][w] + h.lambda / V) - std::lgamma(h.lambda / V);
    }
    lp += std::lgamma(h.lambda) - std::lgamma(tot + h.lambda);
  }
  return lp;
}

// Enumerates every assignment of all tokens (K^N of them) and returns, for
// token (d, n), p(z_dn = k | rest of `z`) from the summed joint table.
template <typename LogJoint>
Eigen::VectorXd enumerated_conditional(const std::vector<std::vector<int>>& shape, int K,
                                       const std::vector<std::vector<int>>& z, int d, int n,
                                       LogJoint&& log_joint) {
  std::vector<std::pair<int, int>> slots;
  for (std::size_t i = 0; i < shape.size(); ++i)
    for (std::size_t j = 0; j < shape[i].size(); ++j) slots.emplace_back(int(i), int(j));
  std::vector<std::vector<int>> cfg = z;
  for (auto& row : cfg) std::fill(row.begin(), row.end(), 0);

  Eigen::VectorXd mass = Eigen::VectorXd::Zero(K);
  double peak = -INFINITY;
  std::vector<std::pair<int, double>> hits;
  while (true) {
    bool rest_equal = true;
    for (auto [a, b] : slots)
      if (!(a == d && b == n) && cfg[a][b] != z[a][b]) rest_equal = false;
    if (rest_equal) {
      const double lp = log_joint(cfg);
      hits.emplace_back(cfg[d][n], lp);
      peak = std::max(peak, lp);
    }
    std::size_t s = 0;
    for (; s < slots.size(); ++s) {
      int& v = cfg[slots[s].first][slots[s].second];
      if (++v < K) break;
      v = 0;
    }
    if (s == slots.size()) break;
  }
  for (auto [k, lp] : hits) mass(k) += std::exp(lp - peak);
  return mass / mass.sum();
}

// Edge weight written out directly from raw per-term counts cs[w][k], ct[w][k]:
//   log pi + sum_k C_k log beta_k - N_S log rho_S - N_T log rho_T
inline double literal_mu(int i, int j, const std::vector<std::vector<int>>& cs,
                         const std::vector<std::vector<int>>& ct,
                         const std::vector<std::pair<int, int>>& matching,
                         const muto::Hyperparams& h, double pi) {
  auto matched_s = [&](int w) {
    for (auto [a, b] : matching) if (a == w) return true;
    return false;
  };
  auto matched_t = [&](int w) {
    for (auto [a, b] : matching) if (b == w) return true;
    return false;
  };
  const double m = std::max<double>(1.0, static_cast<double>(matching.size()));
  double mu = std::log(pi);
  for (int k = 0; k < h.k; ++k) {
    double c = cs[i][k] + ct[j][k];
    double tot = 0.0;
    for (auto [a, b] : matching) tot += cs[a][k] + ct[b][k];
    if (c > 0) mu += c * std::log((c + h.lambda / m) / (tot + h.lambda));
  }
  auto bg = [&](const std::vector<std::vector<int>>& counts, int w, bool matched,
                auto&& is_matched) {
    double n = 0.0, bg_total = 0.0;
    for (int k = 0; k < h.k; ++k) n += counts[w][k];
    for (std::size_t v = 0; v < counts.size(); ++v)
      if (!is_matched(int(v)))
        for (int k = 0; k < h.k; ++k) bg_total += counts[v][k];
    if (n == 0) return 0.0;
    const double rho = (n + h.gamma / counts.size()) / (bg_total + (matched ? n : 0.0) + h.gamma);
    return n * std::log(rho);
  };
  mu -= bg(cs, i, matched_s(i), matched_s);
  mu -= bg(ct, j, matched_t(j), matched_t);
  return mu;
}

}  // namespace support

namespace support {

// Small random sampler instance: up to 3 documents, at most 8 tokens in
// total, K <= 3, |m| <= 2 over 3 x 3 vocabularies.
struct GibbsInstance {
  muto::Corpus corpus;
  muto::Matching matching;
  muto::Hyperparams hyper;
  std::vector<std::vector<int>> z;
};

inline GibbsInstance random_gibbs_instance(muto::Rng& rng) {
  GibbsInstance g;
  const int docs = 1 + static_cast<int>(rng.below(3));
  int budget = 1 + static_cast<int>(rng.below(8));
  std::vector<ToyDoc> raw;
  for (int d = 0; d < docs; ++d) {
    const int len = d + 1 == docs ? budget : static_cast<int>(rng.below(budget + 1));
    budget -= len;
    ToyDoc doc{"d" + std::to_string(d), rng.below(2) ? Language::Target : Language::Source, {}};
    for (int n = 0; n < len; ++n) doc.tokens.push_back(static_cast<int>(rng.below(3)));
    raw.push_back(doc);
  }
  g.corpus = toy_corpus(numbered("s", 3), numbered("t", 3), raw);
  g.hyper = {1 + static_cast<int>(rng.below(3)), 0.2 + 3 * rng.uniform(), 0.2 + 3 * rng.uniform(),
             1.0};
  std::vector<muto::TermPair> pairs;
  const int m = static_cast<int>(rng.below(3));
  std::vector<int> s{0, 1, 2}, t{0, 1, 2};
  for (int p = 0; p < m; ++p) {
    std::swap(s[p], s[p + rng.below(3 - p)]);
    std::swap(t[p], t[p + rng.below(3 - p)]);
    pairs.push_back({s[p], t[p]});
  }
  g.matching = muto::Matching(pairs);
  for (const auto& d : g.corpus.documents) {
    g.z.emplace_back();
    for (std::size_t n = 0; n < d.tokens.size(); ++n)
      g.z.back().push_back(static_cast<int>(rng.below(g.hyper.k)));
  }
  return g;
}

// Largest gap, over every token, between the sampler's conditional and the
// enumerated one.
inline double gibbs_oracle_error(const GibbsInstance& g) {
  std::vector<std::vector<int>> words;
  std::vector<Language> langs;
  for (const auto& d : g.corpus.documents) {
    words.push_back(d.tokens);
    langs.push_back(d.language);
  }
  double worst = 0.0;
  for (std::size_t d = 0; d < words.size(); ++d) {
    for (std::size_t n = 0; n < words[d].size(); ++n) {
      auto state = muto::state_from_assignments(g.corpus, g.matching, g.hyper, g.z);
      muto::detach_token(state, int(d), int(n));
      const Eigen::VectorXd fast = muto::conditional_distribution(state, int(d), int(n));
      const Eigen::VectorXd exact = enumerated_conditional(
          words, g.hyper.k, g.z, int(d), int(n), [&](const std::vector<std::vector<int>>& cfg) {
            return muto_log_joint(words, langs, cfg, g.matching, g.hyper);
          });
      worst = std::max(worst, (fast - exact).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

}  // namespace support
