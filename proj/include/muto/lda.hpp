#pragma once

#include "muto/corpus.hpp"
#include "muto/model.hpp"
#include "muto/random.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace muto {

// Monolingual-LDA baselines over a bilingual corpus with document language
// ignored. Union keeps every term of both languages (identical strings
// merge); intersection keeps only terms whose exact string occurs in both.
enum class VocabMode { Union, Intersection };

VocabMode parse_vocab_mode(std::string_view name);

struct LdaConfig {
  int iters = 1000;
  std::uint64_t seed = 0;
};

struct LdaState {
  Hyperparams hyper;
  std::vector<std::string> terms;
  std::vector<Language> doc_language;
  std::vector<std::vector<int>> words;
  std::vector<std::vector<int>> z;
  CountMatrix doc_topic;   // D x K
  CountMatrix term_topic;  // V x K
  CountVector topic_total;
  Rng rng;

  int num_docs() const { return static_cast<int>(words.size()); }
  int vocab_size() const { return static_cast<int>(terms.size()); }
};

LdaState init_lda_state(const Corpus& corpus, VocabMode mode, const Hyperparams& hyper,
                        std::uint64_t seed);

void lda_detach_token(LdaState& state, int d, int n);
void lda_attach_token(LdaState& state, int d, int n, int topic);

// (D_{d,k} + alpha/K) / (D_{d,.} + alpha) * (n_{w,k} + lambda/V) / (n_k + lambda)
// for a detached token, normalized.
Eigen::VectorXd lda_conditional(const LdaState& state, int d, int n);

void lda_sweep(LdaState& state);

TrainedModel lda_model(const Corpus& corpus, const LdaState& state, VocabMode mode);

TrainedModel run_lda(const Corpus& corpus, VocabMode mode, const Hyperparams& hyper,
                     const LdaConfig& config);

}  // namespace muto
