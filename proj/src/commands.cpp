#include "muto/commands.hpp"

#include "muto/em.hpp"
#include "muto/eval.hpp"
#include "muto/lda.hpp"
#include "muto/random.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <set>

namespace muto {

namespace fs = std::filesystem;

namespace {

using Json = nlohmann::json;
using OJson = nlohmann::ordered_json;

void check_keys(const Json& obj, const std::string& prefix,
                std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError("config field '" + prefix + "' must be an object");
  for (const auto& [key, value] : obj.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* a) { return key == a; });
    if (!known) throw ConfigError("unknown config field '" + prefix + key + "'");
  }
}

template <typename T>
void read_field(const Json& obj, const std::string& prefix, const char* key, T& dst) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return;
  try {
    if constexpr (std::is_same_v<T, fs::path>)
      dst = it->template get<std::string>();
    else
      dst = it->template get<T>();
  } catch (const Json::exception&) {
    throw ConfigError("config field '" + prefix + key + "' has the wrong type");
  }
}

void read_seed(const Json& obj, std::optional<std::uint64_t>& seed) {
  auto it = obj.find("seed");
  if (it == obj.end() || it->is_null()) return;
  if (!it->is_number_unsigned())
    throw ConfigError("config field 'seed' must be a non-negative integer");
  seed = it->get<std::uint64_t>();
}

OJson path_json(const fs::path& p) {
  return p.empty() ? OJson(nullptr) : OJson(p.generic_string());
}

void require_file(const fs::path& p, const std::string& field) {
  if (p.empty()) throw ConfigError(field + " is required");
  if (!fs::is_regular_file(p))
    throw ConfigError(field + ": no such file '" + p.string() + "'");
}

void optional_file(const fs::path& p, const std::string& field) {
  if (!p.empty()) require_file(p, field);
}

void prepare_out(const fs::path& out) {
  if (out.empty()) throw ConfigError("out is required");
  fs::create_directories(out);
}

void write_json(const OJson& j, const fs::path& path) {
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path.string());
  f << j.dump(1) << '\n';
}

}  // namespace

RunConfig RunConfig::from_json(const Json& j) {
  RunConfig c;
  check_keys(j, "", {"corpus", "prior", "hyper", "em", "baseline", "lda_iters", "seed",
                     "out", "resume"});
  if (auto it = j.find("corpus"); it != j.end()) {
    check_keys(*it, "corpus.", {"path", "format", "gold", "stopwords", "max_terms"});
    read_field(*it, "corpus.", "path", c.corpus);
    read_field(*it, "corpus.", "format", c.format);
    read_field(*it, "corpus.", "gold", c.gold);
    read_field(*it, "corpus.", "stopwords", c.stopwords);
    read_field(*it, "corpus.", "max_terms", c.max_terms);
  }
  if (auto it = j.find("prior"); it != j.end()) {
    check_keys(*it, "prior.", {"source", "file", "lexicon", "aligned", "max_distance",
                               "epsilon", "transform"});
    read_field(*it, "prior.", "source", c.prior.source);
    read_field(*it, "prior.", "file", c.prior.file);
    read_field(*it, "prior.", "lexicon", c.prior.lexicon);
    read_field(*it, "prior.", "aligned", c.prior.aligned);
    if (auto md = it->find("max_distance"); md != it->end() && !md->is_null()) {
      int v = 0;
      read_field(*it, "prior.", "max_distance", v);
      c.prior.max_distance = v;
    }
    read_field(*it, "prior.", "epsilon", c.prior.epsilon);
    read_field(*it, "prior.", "transform", c.prior.transform);
  }
  if (auto it = j.find("hyper"); it != j.end()) {
    check_keys(*it, "hyper.", {"k", "alpha", "lambda", "gamma"});
    read_field(*it, "hyper.", "k", c.hyper.k);
    read_field(*it, "hyper.", "alpha", c.hyper.alpha);
    read_field(*it, "hyper.", "lambda", c.hyper.lambda);
    read_field(*it, "hyper.", "gamma", c.hyper.gamma);
  }
  if (auto it = j.find("em"); it != j.end()) {
    check_keys(*it, "em.", {"m_steps", "gibbs_iters", "fractions", "cap", "prior_only",
                            "initial_min_length", "max_candidates_per_source"});
    read_field(*it, "em.", "m_steps", c.m_steps);
    read_field(*it, "em.", "gibbs_iters", c.gibbs_iters);
    read_field(*it, "em.", "fractions", c.fractions);
    read_field(*it, "em.", "cap", c.cap);
    read_field(*it, "em.", "prior_only", c.prior_only);
    read_field(*it, "em.", "initial_min_length", c.initial_min_length);
    read_field(*it, "em.", "max_candidates_per_source", c.max_candidates_per_source);
  }
  read_field(j, "", "baseline", c.baseline);
  read_field(j, "", "lda_iters", c.lda_iters);
  read_seed(j, c.seed);
  read_field(j, "", "out", c.out);
  read_field(j, "", "resume", c.resume);
  return c;
}

OJson RunConfig::to_json() const {
  OJson j;
  j["corpus"] = {{"path", path_json(corpus)},
                 {"format", format},
                 {"gold", path_json(gold)},
                 {"stopwords", path_json(stopwords)},
                 {"max_terms", max_terms}};
  j["prior"] = {{"source", prior.source},
                {"file", path_json(prior.file)},
                {"lexicon", path_json(prior.lexicon)},
                {"aligned", path_json(prior.aligned)},
                {"max_distance", prior.max_distance ? OJson(*prior.max_distance) : OJson()},
                {"epsilon", prior.epsilon},
                {"transform", prior.transform}};
  j["hyper"] = {{"k", hyper.k},
                {"alpha", hyper.alpha},
                {"lambda", hyper.lambda},
                {"gamma", hyper.gamma}};
  j["em"] = {{"m_steps", m_steps},
             {"gibbs_iters", gibbs_iters},
             {"fractions", fractions},
             {"cap", cap},
             {"prior_only", prior_only},
             {"initial_min_length", initial_min_length},
             {"max_candidates_per_source", max_candidates_per_source}};
  j["baseline"] = baseline;
  j["lda_iters"] = lda_iters;
  j["seed"] = seed ? OJson(*seed) : OJson();
  return j;
}

void RunConfig::validate(RunPurpose purpose) const {
  require_file(corpus, "corpus.path");
  try {
    parse_corpus_format(format);
  } catch (const Error&) {
    throw ConfigError("corpus.format must be jsonl or tsv, got '" + format + "'");
  }
  optional_file(gold, "corpus.gold");
  optional_file(stopwords, "corpus.stopwords");
  if (max_terms < 1) throw ConfigError("corpus.max_terms must be >= 1");
  if (out.empty()) throw ConfigError("out is required");

  const bool train = purpose == RunPurpose::Train;
  if (train) {
    if (!seed) throw ConfigError("seed is required");
    hyper.validate();
    if (baseline != "none" && baseline != "union" && baseline != "intersection")
      throw ConfigError("baseline must be none, union or intersection, got '" + baseline + "'");
    if (lda_iters < 0) throw ConfigError("lda_iters must be >= 0");
    if (m_steps < 0) throw ConfigError("em.m_steps must be >= 0");
    if (gibbs_iters < 0) throw ConfigError("em.gibbs_iters must be >= 0");
    if (cap < 0) throw ConfigError("em.cap must be >= 0");
    SizeSchedule schedule{fractions, std::max(cap, 1)};
    try {
      schedule.validate();
    } catch (const ConfigError& e) {
      throw ConfigError(std::string("em.fractions: ") + e.what());
    }
    if (static_cast<int>(fractions.size()) < m_steps)
      throw ConfigError("em.fractions needs one entry per M-step");
    if (initial_min_length < 1) throw ConfigError("em.initial_min_length must be >= 1");
    if (max_candidates_per_source < 0)
      throw ConfigError("em.max_candidates_per_source must be >= 0");
    optional_file(resume, "resume");
    if (baseline != "none") return;
  }

  const std::string& src = prior.source;
  if (src == "edit") {
    if (prior.max_distance && *prior.max_distance < 0)
      throw ConfigError("prior.max_distance must be >= 0");
  } else if (src == "lexicon") {
    require_file(prior.lexicon, "prior.lexicon");
  } else if (src == "pmi") {
    require_file(prior.aligned, "prior.aligned");
    if (!(prior.epsilon > 0)) throw ConfigError("prior.epsilon must be positive");
    try {
      parse_pmi_transform(prior.transform);
    } catch (const Error&) {
      throw ConfigError("prior.transform must be ratio or shifted-positive, got '" +
                        prior.transform + "'");
    }
  } else if (src == "file") {
    require_file(prior.file, "prior.file");
  } else if (src != "none") {
    throw ConfigError("prior.source must be edit, lexicon, pmi, file or none, got '" + src +
                      "'");
  }
}

RunConfig load_run_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return RunConfig::from_json(j);
}

Corpus load_run_corpus(const RunConfig& config) {
  CorpusOptions options;
  options.max_terms = config.max_terms;
  if (!config.stopwords.empty()) options.stopwords = read_stopwords(config.stopwords);
  Corpus corpus = load_corpus(config.corpus, parse_corpus_format(config.format), options);
  if (!config.gold.empty()) attach_gold_pairs(corpus, read_gold_pairs(config.gold));
  return corpus;
}

PriorMatrix build_prior(const PriorSpec& spec, const Corpus& corpus) {
  const auto& vs = corpus.vocab_s;
  const auto& vt = corpus.vocab_t;
  if (spec.source == "edit") return edit_distance_prior(vs, vt, spec.max_distance);
  if (spec.source == "lexicon") return dictionary_prior(read_lexicon(spec.lexicon), vs, vt);
  if (spec.source == "pmi")
    return pmi_prior(read_aligned_pairs(spec.aligned), vs, vt, spec.epsilon,
                     parse_pmi_transform(spec.transform));
  if (spec.source == "file") return read_prior(spec.file, vs, vt);
  if (spec.source == "none") return uniform_prior(vs, vt);
  throw ConfigError("prior.source: unknown source '" + spec.source + "'");
}

void cmd_prior(const RunConfig& config, std::ostream& log) {
  config.validate(RunPurpose::Prior);
  const Corpus corpus = load_run_corpus(config);
  const PriorMatrix prior = build_prior(config.prior, corpus);
  prepare_out(config.out);
  write_prior(prior, corpus.vocab_s, corpus.vocab_t, config.out / "prior.tsv");
  OJson echo = config.to_json();
  echo.erase("em");
  echo.erase("baseline");
  echo.erase("lda_iters");
  write_json(echo, config.out / "config.json");

  const auto& values = prior.stored();
  log << "prior " << config.prior.source << ": " << values.nonZeros() << " stored edges over "
      << corpus.vocab_s.size() << " x " << corpus.vocab_t.size() << " terms, default weight "
      << prior.default_weight() << '\n';
  if (values.nonZeros() > 0) {
    const Eigen::Map<const Eigen::VectorXd> w(values.valuePtr(), values.nonZeros());
    log << "weights min " << w.minCoeff() << " mean " << w.mean() << " max " << w.maxCoeff()
        << '\n';
  }
}

namespace {

void write_trace_csv(const std::vector<EmStep>& trace, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << std::setprecision(17);
  out << "step,size_limit,matching_size,objective,changed_pairs\n";
  for (const auto& s : trace)
    out << s.step << ',' << s.size_limit << ',' << s.matching_size << ',' << s.objective << ','
        << s.changed_pairs << '\n';
}

}  // namespace

void cmd_train(const RunConfig& config, std::ostream& log) {
  config.validate(RunPurpose::Train);
  const Corpus corpus = load_run_corpus(config);
  prepare_out(config.out);
  const OJson echo = config.to_json();
  write_json(echo, config.out / "config.json");

  if (config.baseline != "none") {
    const VocabMode mode = parse_vocab_mode(config.baseline);
    LdaConfig lda;
    lda.iters = config.lda_iters > 0 ? config.lda_iters
                                     : (config.m_steps + 1) * config.gibbs_iters;
    lda.seed = *config.seed;
    TrainedModel model = run_lda(corpus, mode, config.hyper, lda);
    model.config = echo;
    write_model(model, config.out / "model.json");
    log << "trained " << model_kind_name(model.kind) << " (" << lda.iters
        << " sweeps, " << model.unit_labels.size() << " terms)\n";
    return;
  }

  const PriorMatrix prior = build_prior(config.prior, corpus);
  EMConfig em;
  em.m_steps = config.m_steps;
  em.gibbs_iters = config.gibbs_iters;
  em.schedule = SizeSchedule{config.fractions, config.cap};
  em.prior_only = config.prior_only;
  em.initial_min_length = config.initial_min_length;
  em.max_candidates_per_source = config.max_candidates_per_source;
  em.seed = *config.seed;
  if (!config.resume.empty()) {
    std::ifstream in(config.resume);
    Json j;
    try {
      j = Json::parse(in);
    } catch (const Json::exception& e) {
      throw Error(config.resume.string() + ": " + e.what());
    }
    em.resume = checkpoint_from_json(j, corpus.vocab_s, corpus.vocab_t);
    log << "resuming after M-step " << em.resume->completed_steps << '\n';
  }

  EmHooks hooks;
  hooks.on_m_step = [&](const MStepEvent& ev) {
    const std::string tag = std::to_string(ev.trace.step);
    write_matching_tsv(ev.state.matching, ev.weights, corpus.vocab_s, corpus.vocab_t,
                       config.out / ("matching_step" + tag + ".tsv"));
    OJson cp = checkpoint_to_json(ev.checkpoint, corpus.vocab_s, corpus.vocab_t);
    cp["config"] = echo;
    write_json(cp, config.out / ("state_step" + tag + ".json"));
    log << "M-step " << tag << ": " << ev.trace.matching_size << " pairs (limit "
        << ev.trace.size_limit << "), objective " << ev.trace.objective << ", "
        << ev.trace.changed_pairs << " new\n";
  };

  TrainedModel model = run_muto(corpus, prior, config.hyper, em, hooks);
  model.config = echo;
  write_model(model, config.out / "model.json");
  write_trace_csv(model.em_trace, config.out / "trace.csv");
  log << "trained muto: " << model.final_matching.size() << " matched pairs, K="
      << model.num_topics() << '\n';
}

void cmd_eval(const EvalConfig& config, std::ostream& log) {
  require_file(config.model, "model");
  if (config.gold.empty() && config.lexicon.empty())
    throw ConfigError("eval needs gold pairs and/or a lexicon");
  optional_file(config.gold, "gold");
  optional_file(config.lexicon, "lexicon");
  prepare_out(config.out);

  const TrainedModel model = read_model(config.model);
  EvalReport report;
  if (!config.lexicon.empty()) {
    const Lexicon lexicon = read_lexicon(config.lexicon);
    const auto terms = model.matched_terms();
    report.translation = translation_accuracy(terms, lexicon);
    std::ofstream out(config.out / "translation.csv");
    if (!out) throw Error("cannot write translation.csv");
    out << "source,target,covered,consistent\n";
    for (const auto& [s, t] : terms)
      out << s << ',' << t << ',' << lexicon.covers(s) << ',' << lexicon.consistent(s, t)
          << '\n';
  }
  if (!config.gold.empty()) {
    report.document_match = document_match_score(model, read_gold_pairs(config.gold));
    std::ofstream out(config.out / "doc_match.csv");
    if (!out) throw Error("cannot write doc_match.csv");
    out << std::setprecision(17) << "doc_id,proportion\n";
    for (const auto& [id, p] : report.document_match->per_document)
      out << id << ',' << p << '\n';
  }

  OJson echo;
  echo["model"] = config.model.generic_string();
  echo["gold"] = path_json(config.gold);
  echo["lexicon"] = path_json(config.lexicon);
  echo["model_config"] = model.config;
  OJson j = report_to_json(report, echo);
  const auto purity = language_purity(model);
  if (!purity.empty()) {
    double mean = 0.0;
    for (double p : purity) mean += p;
    j["language_purity"] = purity;
    j["language_purity_mean"] = mean / static_cast<double>(purity.size());
  }
  write_json(j, config.out / "report.json");

  log << std::setprecision(4);
  if (report.translation) {
    const auto& t = *report.translation;
    log << "translation accuracy: " << t.accuracy_all << " (all " << t.pairs << " pairs), "
        << t.accuracy_covered << " (" << t.covered << " covered)"
        << (t.empty_matching ? " [empty matching]" : "") << '\n';
  }
  if (report.document_match)
    log << "document match: " << report.document_match->mean << " over "
        << report.document_match->per_document.size() << " queries\n";
  if (!purity.empty()) log << "language purity: " << j["language_purity_mean"].get<double>() << '\n';
}

void cmd_topics(const TopicsConfig& config, std::ostream& log) {
  require_file(config.model, "model");
  if (config.top_n < 1) throw ConfigError("top_n must be >= 1");
  prepare_out(config.out);
  const TrainedModel model = read_model(config.model);
  const TopicTable table = export_topics(model, config.top_n);
  write_topics_tsv(table, config.out / "topics.tsv");
  const std::string text = render_topics_text(table);
  std::ofstream txt(config.out / "topics.txt");
  if (!txt) throw Error("cannot write topics.txt");
  txt << text;
  log << text;
}

OJson SynthConfig::to_json() const {
  OJson j;
  j["k"] = k;
  j["pairs"] = pairs;
  j["vocab_s"] = vocab_s;
  j["vocab_t"] = vocab_t;
  j["docs"] = docs;
  j["doc_len"] = doc_len;
  j["alpha"] = alpha;
  j["lambda"] = lambda;
  j["gamma"] = gamma;
  j["seed"] = seed ? OJson(*seed) : OJson();
  return j;
}

void SynthConfig::validate() const {
  if (!seed) throw ConfigError("seed is required");
  Hyperparams{k, alpha, lambda, gamma}.validate();
  if (vocab_s < 1 || vocab_t < 1) throw ConfigError("vocab sizes must be >= 1");
  if (pairs < 0 || pairs > std::min(vocab_s, vocab_t))
    throw ConfigError("pairs must lie in [0, min(vocab_s, vocab_t)]");
  if (docs < 1) throw ConfigError("docs must be >= 1");
  if (doc_len < 1) throw ConfigError("doc_len must be >= 1");
}

std::pair<Corpus, GroundTruth> make_synthetic(const SynthConfig& config) {
  config.validate();
  const Matching planted =
      random_matching(config.vocab_s, config.vocab_t, config.pairs, mix64(*config.seed, 1));
  return generate_synthetic_corpus(config.k, planted, {config.vocab_s, config.vocab_t},
                                   config.docs, config.doc_len,
                                   Hyperparams{config.k, config.alpha, config.lambda,
                                               config.gamma},
                                   mix64(*config.seed, 2));
}

void cmd_synth(const SynthConfig& config, std::ostream& log) {
  auto [corpus, truth] = make_synthetic(config);
  prepare_out(config.out);
  write_corpus_jsonl(corpus, config.out / "corpus.jsonl");
  write_gold_pairs(corpus, config.out / "gold.tsv");
  OJson t = ground_truth_to_json(truth, corpus);
  t["config"] = config.to_json();
  write_json(t, config.out / "truth.json");
  Lexicon lexicon;
  for (const auto& [s, tt] : truth.pairs) lexicon.add(s, tt);
  write_lexicon(lexicon, config.out / "lexicon.tsv");
  write_json(config.to_json(), config.out / "config.json");
  log << "wrote " << corpus.documents.size() << " documents, " << corpus.vocab_s.size()
      << " + " << corpus.vocab_t.size() << " terms, " << truth.true_matching.size()
      << " planted pairs in use\n";
}

}  // namespace muto
