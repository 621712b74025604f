#pragma once

#include "muto/corpus.hpp"
#include "muto/matching.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace muto {

// Parameters the corpus was drawn from. Pairs are listed by term string so
// they stay meaningful after the vocabulary is re-ranked by frequency.
struct GroundTruth {
  std::vector<std::pair<std::string, std::string>> pairs;
  // The planted matching in corpus vocabulary ids (pairs whose terms never
  // occur are dropped).
  Matching true_matching;
  Eigen::MatrixXd true_topics;  // K x |pairs|, rows sum to 1
  Eigen::MatrixXd true_theta;   // one row per corpus document
  std::array<std::vector<std::string>, 2> background_terms;
  std::array<Eigen::VectorXd, 2> background;  // rho over background_terms
};

std::string synthetic_term(Language lang, int index);

// Random injective matching of `size` pairs over [0, n_source) x [0, n_target).
Matching random_matching(int n_source, int n_target, int size, std::uint64_t seed);

// Draws a bilingual corpus from the generative process: rho_L ~ Dir(gamma)
// over unmatched terms, beta_k ~ Dir(lambda) over pairs, and for each of
// n_docs_per_lang document pairs one theta ~ Dir(alpha) shared by a source
// and a target document. Each token picks z ~ theta and a fair coin for
// matched/unmatched; matched tokens emit the pair member of the document's
// language. A coin landing on an empty branch takes the other branch.
//
// true_matching indexes the synthetic term lists (synthetic_term(L, i)).
std::pair<Corpus, GroundTruth> generate_synthetic_corpus(
    int k, const Matching& true_matching, std::pair<int, int> vocab_sizes,
    int n_docs_per_lang, int doc_len, const Hyperparams& hyper, std::uint64_t seed);

nlohmann::ordered_json ground_truth_to_json(const GroundTruth& truth, const Corpus& corpus);
void write_ground_truth(const GroundTruth& truth, const Corpus& corpus,
                        const std::filesystem::path& path);

}  // namespace muto
