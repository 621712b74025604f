#include "muto/commands.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>

using muto::ConfigError;
using Json = nlohmann::json;

namespace {

// Flags land in `overrides` under a JSON pointer and are merged over the
// --config file once parsing is done, so flags win regardless of order.
template <typename T>
CLI::Option* flag(CLI::App* app, Json& overrides, const std::string& name,
                  const std::string& pointer, const std::string& help) {
  return app->add_option_function<T>(
      name, [&overrides, pointer](const T& v) { overrides[Json::json_pointer(pointer)] = v; },
      help);
}

void add_corpus_flags(CLI::App* app, Json& o) {
  flag<std::string>(app, o, "--corpus", "/corpus/path", "corpus file (jsonl or tsv)");
  flag<std::string>(app, o, "--format", "/corpus/format", "jsonl | tsv");
  flag<std::string>(app, o, "--gold", "/corpus/gold", "gold document pairs (TSV)");
  flag<std::string>(app, o, "--stopwords", "/corpus/stopwords", "stopword list");
  flag<int>(app, o, "--max-terms", "/corpus/max_terms", "vocabulary size per language");
}

void add_prior_flags(CLI::App* app, Json& o) {
  flag<std::string>(app, o, "--source", "/prior/source", "edit | lexicon | pmi | file | none");
  flag<std::string>(app, o, "--prior-file", "/prior/file", "prior TSV (source file)");
  flag<std::string>(app, o, "--lexicon", "/prior/lexicon", "bilingual dictionary TSV");
  flag<std::string>(app, o, "--aligned", "/prior/aligned", "aligned sentence pairs TSV");
  flag<int>(app, o, "--max-distance", "/prior/max_distance", "edit distance cutoff");
  flag<double>(app, o, "--epsilon", "/prior/epsilon", "PMI floor");
  flag<std::string>(app, o, "--transform", "/prior/transform", "ratio | shifted-positive");
}

muto::RunConfig run_config(const std::string& config_path, Json overrides) {
  Json base = Json::object();
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw ConfigError("cannot open config file " + config_path);
    try {
      base = Json::parse(in);
    } catch (const Json::exception& e) {
      throw ConfigError(config_path + ": " + e.what());
    }
  }
  base.merge_patch(overrides);
  return muto::RunConfig::from_json(base);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MuTo: multilingual topic model with a learned word matching"};
  app.require_subcommand(1);

  std::string config_path;
  Json overrides = Json::object();

  auto* prior = app.add_subcommand("prior", "build a matching prior");
  prior->add_option("--config", config_path, "JSON run config");
  add_corpus_flags(prior, overrides);
  add_prior_flags(prior, overrides);
  flag<std::string>(prior, overrides, "--out", "/out", "output directory");

  auto* train = app.add_subcommand("train", "train MuTo or an LDA baseline");
  train->add_option("--config", config_path, "JSON run config");
  add_corpus_flags(train, overrides);
  add_prior_flags(train, overrides);
  flag<int>(train, overrides, "--k", "/hyper/k", "number of topics");
  flag<double>(train, overrides, "--alpha", "/hyper/alpha", "total document-topic concentration");
  flag<double>(train, overrides, "--lambda", "/hyper/lambda", "total topic-pair concentration");
  flag<double>(train, overrides, "--gamma", "/hyper/gamma", "total background concentration");
  flag<int>(train, overrides, "--m-steps", "/em/m_steps", "number of M-steps");
  flag<int>(train, overrides, "--gibbs-iters", "/em/gibbs_iters", "sweeps per E-step");
  flag<std::vector<double>>(train, overrides, "--fractions", "/em/fractions",
                            "matching size fraction per M-step")
      ->delimiter(',');
  flag<int>(train, overrides, "--cap", "/em/cap", "matching size cap (0 = candidate pool)");
  train->add_flag_callback("--prior-only", [&] { overrides["em"]["prior_only"] = true; },
                           "choose matchings from the prior alone");
  flag<int>(train, overrides, "--min-length", "/em/initial_min_length",
            "shortest identical string used to seed the matching");
  flag<int>(train, overrides, "--max-candidates", "/em/max_candidates_per_source",
            "keep the strongest edges per source term (0 = all)");
  flag<std::string>(train, overrides, "--baseline", "/baseline", "none | union | intersection");
  flag<int>(train, overrides, "--lda-iters", "/lda_iters", "LDA sweeps (0 = match MuTo)");
  flag<std::uint64_t>(train, overrides, "--seed", "/seed", "random seed");
  flag<std::string>(train, overrides, "--out", "/out", "output directory");
  flag<std::string>(train, overrides, "--resume", "/resume", "state_step<k>.json to resume from");

  muto::EvalConfig eval_cfg;
  std::string eval_model, eval_gold, eval_lexicon, eval_out;
  auto* eval = app.add_subcommand("eval", "score a trained model");
  eval->add_option("--model", eval_model, "model.json")->required();
  eval->add_option("--gold", eval_gold, "gold document pairs (TSV)");
  eval->add_option("--lexicon", eval_lexicon, "reference dictionary TSV");
  eval->add_option("--out", eval_out, "output directory")->required();

  muto::TopicsConfig topics_cfg;
  std::string topics_model, topics_out;
  auto* topics = app.add_subcommand("topics", "export top pairs per topic");
  topics->add_option("--model", topics_model, "model.json")->required();
  topics->add_option("--top-n", topics_cfg.top_n, "entries per topic");
  topics->add_option("--out", topics_out, "output directory")->required();

  muto::SynthConfig synth_cfg;
  std::string synth_out;
  std::uint64_t synth_seed = 0;
  auto* synth = app.add_subcommand("synth", "generate a synthetic bilingual corpus");
  synth->add_option("--k", synth_cfg.k, "number of topics");
  synth->add_option("--pairs", synth_cfg.pairs, "planted translation pairs");
  synth->add_option("--vocab-s", synth_cfg.vocab_s, "source vocabulary size");
  synth->add_option("--vocab-t", synth_cfg.vocab_t, "target vocabulary size");
  synth->add_option("--docs", synth_cfg.docs, "documents per language");
  synth->add_option("--doc-len", synth_cfg.doc_len, "tokens per document");
  synth->add_option("--alpha", synth_cfg.alpha, "total document-topic concentration");
  synth->add_option("--lambda", synth_cfg.lambda, "total topic-pair concentration");
  synth->add_option("--gamma", synth_cfg.gamma, "total background concentration");
  auto* seed_opt = synth->add_option("--seed", synth_seed, "random seed");
  synth->add_option("--out", synth_out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*prior) {
      muto::cmd_prior(run_config(config_path, overrides), std::cout);
    } else if (*train) {
      muto::cmd_train(run_config(config_path, overrides), std::cout);
    } else if (*eval) {
      eval_cfg.model = eval_model;
      eval_cfg.gold = eval_gold;
      eval_cfg.lexicon = eval_lexicon;
      eval_cfg.out = eval_out;
      muto::cmd_eval(eval_cfg, std::cout);
    } else if (*topics) {
      topics_cfg.model = topics_model;
      topics_cfg.out = topics_out;
      muto::cmd_topics(topics_cfg, std::cout);
    } else if (*synth) {
      if (seed_opt->count() > 0) synth_cfg.seed = synth_seed;
      synth_cfg.out = synth_out;
      muto::cmd_synth(synth_cfg, std::cout);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
