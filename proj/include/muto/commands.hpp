#pragma once

#include "muto/core.hpp"
#include "muto/corpus.hpp"
#include "muto/priors.hpp"
#include "muto/synthetic.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace muto {

enum class RunPurpose { Prior, Train };

struct PriorSpec {
  std::string source = "edit";  // edit | lexicon | pmi | file | none
  std::filesystem::path file;
  std::filesystem::path lexicon;
  std::filesystem::path aligned;
  std::optional<int> max_distance;
  double epsilon = 1e-4;
  std::string transform = "ratio";
};

// Everything a run depends on. JSON layout:
//   {"corpus": {"path", "format", "gold", "stopwords", "max_terms"},
//    "prior": {"source", "file", "lexicon", "aligned", "max_distance",
//              "epsilon", "transform"},
//    "hyper": {"k", "alpha", "lambda", "gamma"},
//    "em": {"m_steps", "gibbs_iters", "fractions", "cap", "prior_only",
//           "initial_min_length", "max_candidates_per_source"},
//    "baseline", "lda_iters", "seed", "out", "resume"}
struct RunConfig {
  std::filesystem::path corpus;
  std::string format = "jsonl";
  std::filesystem::path gold;
  std::filesystem::path stopwords;
  int max_terms = 2500;

  PriorSpec prior;
  Hyperparams hyper;

  int m_steps = 3;
  int gibbs_iters = 250;
  std::vector<double> fractions{1.0 / 3.0, 2.0 / 3.0, 1.0};
  int cap = 0;  // 0: largest matching the candidate pool admits
  bool prior_only = false;
  int initial_min_length = 6;
  int max_candidates_per_source = 0;

  std::string baseline = "none";  // none | union | intersection
  int lda_iters = 0;              // 0: (m_steps + 1) * gibbs_iters

  std::optional<std::uint64_t> seed;
  std::filesystem::path out;
  std::filesystem::path resume;

  static RunConfig from_json(const nlohmann::json& j);
  // Echo stored in artifacts. Output and resume locations are left out so
  // that reruns into another directory produce identical files.
  nlohmann::ordered_json to_json() const;
  // ConfigError naming the offending field. Building a prior needs neither
  // a seed nor the EM settings.
  void validate(RunPurpose purpose) const;
};

RunConfig load_run_config(const std::filesystem::path& path);

Corpus load_run_corpus(const RunConfig& config);
PriorMatrix build_prior(const PriorSpec& spec, const Corpus& corpus);

struct SynthConfig {
  int k = 5;
  int pairs = 50;
  int vocab_s = 150;
  int vocab_t = 150;
  int docs = 200;
  int doc_len = 100;
  double alpha = 0.5;
  double lambda = 3.0;
  double gamma = 100.0;
  std::optional<std::uint64_t> seed;
  std::filesystem::path out;

  nlohmann::ordered_json to_json() const;
  void validate() const;
};

// Planted matching and corpus exactly as `synth` writes them.
std::pair<Corpus, GroundTruth> make_synthetic(const SynthConfig& config);

struct EvalConfig {
  std::filesystem::path model;
  std::filesystem::path gold;
  std::filesystem::path lexicon;
  std::filesystem::path out;
};

struct TopicsConfig {
  std::filesystem::path model;
  int top_n = 10;
  std::filesystem::path out;
};

// Each command writes into config.out and reports to `log`.
void cmd_prior(const RunConfig& config, std::ostream& log);
void cmd_train(const RunConfig& config, std::ostream& log);
void cmd_eval(const EvalConfig& config, std::ostream& log);
void cmd_topics(const TopicsConfig& config, std::ostream& log);
void cmd_synth(const SynthConfig& config, std::ostream& log);

}  // namespace muto
