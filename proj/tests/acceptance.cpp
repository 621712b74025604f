// Acceptance suite: one PASS/FAIL line per criterion. Exits 1 if any
// criterion fails; with --report it exits 0 once every criterion has been
// evaluated, so a failing criterion shows up in the log but not as a crash.
#include "muto/commands.hpp"
#include "muto/em.hpp"
#include "muto/edge_weights.hpp"
#include "muto/eval.hpp"
#include "muto/lda.hpp"
#include "support.hpp"

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <set>

using namespace muto;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;
std::ofstream results("acceptance_results.txt");

void report(int id, const std::string& title, const Outcome& o, double secs) {
  if (!o.pass) ++failures;
  char line[512];
  std::snprintf(line, sizeof line, "[%2d] %s  %s  (%s; %.2fs)\n", id, o.pass ? "PASS" : "FAIL",
                title.c_str(), o.detail.c_str(), secs);
  std::fputs(line, stdout);
  std::fflush(stdout);
  results << line << std::flush;
}

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// The synthetic benchmark shared by criteria 3-7.
struct Benchmark {
  Corpus corpus;
  GroundTruth truth;
  Lexicon planted;
  PriorMatrix prior;
  Hyperparams hyper{5, 50.0, 1.0, 1.0};
};

Benchmark make_benchmark() {
  Benchmark b;
  SynthConfig cfg;  // K=5, 50 pairs, 200 docs per language, 100 tokens each
  cfg.seed = 1;
  std::tie(b.corpus, b.truth) = make_synthetic(cfg);
  for (const auto& [s, t] : b.truth.pairs) b.planted.add(s, t);

  std::vector<WeightedEdge> entries;
  std::set<std::pair<int, int>> used;
  for (const auto& p : b.truth.true_matching.pairs()) {
    entries.push_back({p.source, p.target, 10.0});
    used.insert({p.source, p.target});
  }
  Rng rng(mix64(1, 0xd15));
  for (int need = 10 * static_cast<int>(b.truth.true_matching.size()); need > 0;) {
    const int i = static_cast<int>(rng.below(b.corpus.vocab_s.size()));
    const int j = static_cast<int>(rng.below(b.corpus.vocab_t.size()));
    if (used.insert({i, j}).second) {
      entries.push_back({i, j, 1.0});
      --need;
    }
  }
  b.prior = PriorMatrix::from_entries(b.corpus.vocab_s.size(), b.corpus.vocab_t.size(), entries, 0.0);
  return b;
}

Outcome gibbs_oracle() {
  Rng rng(2718);
  double worst = 0.0;
  for (int rep = 0; rep < 50; ++rep) worst = std::max(worst, support::gibbs_oracle_error(support::random_gibbs_instance(rng)));
  return {worst <= 1e-10, "50 instances, max |diff| = " + fmt("%.3g", worst)};
}

Outcome solver_oracle() {
  Rng rng(1618);
  int mismatches = 0, nonpositive = 0;
  for (int rep = 0; rep < 100; ++rep) {
    const int rows = 1 + static_cast<int>(rng.below(6)), cols = 1 + static_cast<int>(rng.below(6));
    std::vector<WeightedEdge> edges;
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) edges.push_back({i, j, 10.0 * rng.uniform() - 4.0});
    const WeightMatrix w(edges);
    const auto fast = max_weight_matching(w, 100);
    const auto slow = brute_force_matching(w, 100);
    // identical matchings sum identically; distinct optima must tie exactly
    if (!(fast == slow) && matching_weight(fast, w) != matching_weight(slow, w)) ++mismatches;
    for (const auto& p : fast.pairs()) nonpositive += *w.find(p.source, p.target) <= 0;
  }
  return {mismatches == 0 && nonpositive == 0, std::to_string(mismatches) + " weight mismatches, " +
                                                   std::to_string(nonpositive) + " non-positive edges"};
}

struct MainRun {
  TrainedModel model;
  double seconds = 0.0;
  long audits = 0;
  long audit_failures = 0;
};

MainRun run_benchmark(const Benchmark& b, const PriorMatrix& prior, bool audit) {
  MainRun r;
  EMConfig em;
  em.seed = 42;
  EmHooks hooks;
  if (audit) {
    auto check = [&r](const SamplerState& s) {
      ++r.audits;
      r.audit_failures += !counts_consistent(s);
    };
    hooks.on_sweep = [check](const SamplerState& s, int, int) { check(s); };
    hooks.on_rematch = check;
  }
  const auto t0 = Clock::now();
  r.model = run_muto(b.corpus, prior, b.hyper, em, hooks);
  r.seconds = seconds_since(t0);
  return r;
}

Outcome closed_forms() {
  std::vector<std::string> bad;
  auto expect = [&](bool ok, const std::string& what) {
    if (!ok) bad.push_back(what);
  };
  const Vocabulary s(Language::Source, {"hund", "katze", "baum", "haus"});
  const Vocabulary t(Language::Target, {"hund", "hound", "cat", "kitty", "tree"});
  const auto ed = edit_distance_prior(s, t);
  expect(ed.weight(0, 0) == 10.0, "identical term weight");
  expect(std::abs(ed.weight(0, 1) - 1.0 / 1.1) <= 1e-12, "distance-one weight");

  Eigen::Vector2d a(1, 0), c(0, 1);
  expect(hellinger(a, a) == 0.0, "H(p,p)");
  expect(std::abs(hellinger(a, c) - 1.0) <= 1e-12, "H disjoint");

  Lexicon lex;  // five entries
  lex.add("katze", "cat");
  lex.add("katze", "kitty");
  lex.add("baum", "tree");
  lex.add("baum", "wood");
  lex.add("baum", "timber");
  const auto dict = dictionary_prior(lex, s, t);
  expect(std::abs(dict.weight(1, 2) - 0.5) <= 1e-12 && std::abs(dict.weight(1, 3) - 0.5) <= 1e-12,
         "two translations");
  expect(std::abs(dict.weight(2, 4) - 1.0) <= 1e-12, "one in-vocabulary translation");
  expect(dict.weight(0, 0) == 0.0 && dict.weight(3, 4) == 0.0, "unlisted pairs");
  std::string detail = bad.empty() ? "all exact" : "wrong:";
  for (const auto& w : bad) detail += " " + w + ";";
  return {bad.empty(), detail};
}

int exit_code(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome cli_determinism() {
  const auto dir = support::scratch_dir("acceptance_cli");
  const std::string bin = MUTO_BIN;
  if (exit_code(bin + " synth --k 3 --pairs 20 --vocab-s 60 --vocab-t 60 --docs 40 --doc-len 50 --seed 3 --out " +
                (dir / "data").string() + " > /dev/null") != 0)
    return {false, "synth failed"};
  support::write_text(dir / "run.json", R"({
  "corpus": {"path": ")" + (dir / "data" / "corpus.jsonl").string() + R"(", "gold": ")" +
                                            (dir / "data" / "gold.tsv").string() + R"("},
  "prior": {"source": "lexicon", "lexicon": ")" + (dir / "data" / "lexicon.tsv").string() + R"("},
  "hyper": {"k": 3, "alpha": 30, "lambda": 1, "gamma": 1},
  "em": {"gibbs_iters": 30},
  "seed": 11
})");
  for (const char* out : {"a", "b"})
    if (exit_code(bin + " train --config " + (dir / "run.json").string() + " --out " + (dir / out).string() +
                  " > /dev/null") != 0)
      return {false, "train failed"};
  const bool same = exit_code("cmp -s " + (dir / "a" / "model.json").string() + " " +
                              (dir / "b" / "model.json").string()) == 0;
  return {same, same ? "model.json byte-identical" : "model.json differs"};
}

Outcome metric_properties(const Benchmark& b) {
  Rng rng(99);
  auto simplex = [&](int k) {
    Eigen::VectorXd p(k);
    for (int i = 0; i < k; ++i) p(i) = -std::log(1.0 - rng.uniform());
    return Eigen::VectorXd(p / p.sum());
  };
  int hell_bad = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    const auto p = simplex(6), q = simplex(6), r = simplex(6);
    hell_bad += hellinger(p, q) != hellinger(q, p);
    hell_bad += hellinger(p, r) > hellinger(p, q) + hellinger(q, r) + 1e-12;
  }
  int acc_bad = 0;
  for (int rep = 0; rep < 100; ++rep) {
    const auto m = random_matching(b.corpus.vocab_s.size(), b.corpus.vocab_t.size(),
                                   1 + static_cast<int>(rng.below(100)), rng.below(1u << 30));
    std::vector<std::pair<std::string, std::string>> terms;
    for (const auto& p : m.pairs()) terms.emplace_back(b.corpus.vocab_s.term(p.source), b.corpus.vocab_t.term(p.target));
    const auto acc = translation_accuracy(terms, b.planted);
    acc_bad += acc.accuracy_covered < acc.accuracy_all;
  }
  int mono_bad = 0;
  for (int rep = 0; rep < 100; ++rep) {
    const int k = 1 + static_cast<int>(rng.below(5));
    CountMatrix cs(8, k), ct(8, k);
    for (int w = 0; w < 8; ++w)
      for (int j = 0; j < k; ++j) cs(w, j) = static_cast<int>(rng.below(12)), ct(w, j) = static_cast<int>(rng.below(12));
    const auto snap = SamplerSnapshot::from_counts(Hyperparams{k, 1.0, 0.1 + 5 * rng.uniform(), 0.1 + 50 * rng.uniform()},
                                                   random_matching(8, 8, static_cast<int>(rng.below(6)), rep), cs, ct);
    const int i = static_cast<int>(rng.below(8)), j = static_cast<int>(rng.below(8));
    const double lo = 0.01 + rng.uniform(), hi = lo * (1.01 + 3 * rng.uniform());
    const double d = edge_weight(i, j, snap, PriorMatrix(8, 8, hi)) - edge_weight(i, j, snap, PriorMatrix(8, 8, lo));
    mono_bad += !(d > 0 && std::abs(d - std::log(hi / lo)) <= 1e-9);
  }
  return {hell_bad + acc_bad + mono_bad == 0,
          "violations: hellinger " + std::to_string(hell_bad) + ", accuracy " + std::to_string(acc_bad) +
              ", monotone prior " + std::to_string(mono_bad)};
}

}  // namespace

int main(int argc, char** argv) {
  const bool report_only = argc > 1 && std::string(argv[1]) == "--report";
  auto timed = [](auto&& f) {
    const auto t0 = Clock::now();
    auto o = f();
    return std::make_pair(o, seconds_since(t0));
  };

  {
    auto [o, s] = timed(gibbs_oracle);
    if (s >= 10) o.pass = false, o.detail += ", over 10s";
    report(1, "collapsed conditional equals joint enumeration", o, s);
  }
  {
    auto [o, s] = timed(solver_oracle);
    if (s >= 10) o.pass = false, o.detail += ", over 10s";
    report(2, "matching solver equals brute force on 100 matrices", o, s);
  }

  const auto bench = make_benchmark();
  const MainRun main_run = run_benchmark(bench, bench.prior, true);

  report(3, "live counts equal rebuilt counts after every sweep and rematch",
         {main_run.audits > 0 && main_run.audit_failures == 0,
          std::to_string(main_run.audits) + " audits, " + std::to_string(main_run.audit_failures) + " mismatches"},
         main_run.seconds);

  const auto acc = translation_accuracy(main_run.model.matched_terms(), bench.planted);
  {
    Outcome o{acc.accuracy_covered >= 0.8 && main_run.seconds < 300,
              "accuracy_covered " + fmt("%.4f", acc.accuracy_covered) + " (" + std::to_string(acc.consistent) +
                  "/" + std::to_string(acc.covered) + "), planted pairs recovered " +
                  std::to_string(acc.consistent) + "/" + std::to_string(bench.truth.true_matching.size())};
    report(4, "planted pairs recovered with the planted-plus-distractor prior", o, main_run.seconds);
  }
  {
    const auto t0 = Clock::now();
    const double dm = document_match_score(main_run.model, bench.corpus).mean;
    Rng rng(mix64(1, 0x7e7a));
    Eigen::MatrixXd random_theta(main_run.model.theta.rows(), main_run.model.theta.cols());
    for (Eigen::Index d = 0; d < random_theta.rows(); ++d)
      random_theta.row(d) = rng.dirichlet(random_theta.cols(), 1.0).transpose();
    const double control = document_match_score(random_theta, main_run.model.doc_ids,
                                                 main_run.model.doc_languages, bench.corpus.gold_pairs)
                               .mean;
    const double s = seconds_since(t0);
    Outcome o{dm >= 0.9 && std::abs(control - 0.5) <= 0.05 && s < 60,
              "model " + fmt("%.4f", dm) + ", random theta " + fmt("%.4f", control)};
    report(5, "document retrieval beats chance", o, s);
  }
  {
    const auto t0 = Clock::now();
    LdaConfig cfg;
    cfg.iters = 1000;
    cfg.seed = 42;
    const auto lda = run_lda(bench.corpus, VocabMode::Union, Hyperparams{10, 50.0, 1.0, 1.0}, cfg);
    const auto purity = language_purity(lda);
    double mean = 0;
    for (double p : purity) mean += p / static_cast<double>(purity.size());
    report(6, "union-vocabulary LDA topics are language-specific",
           {mean > 0.9, "mean language purity " + fmt("%.4f", mean)}, seconds_since(t0));
  }
  {
    const MainRun flat = run_benchmark(bench, uniform_prior(bench.corpus.vocab_s, bench.corpus.vocab_t), false);
    const auto none = translation_accuracy(flat.model.matched_terms(), bench.planted);
    const double limit = 0.2 * acc.accuracy_covered;
    report(7, "without a prior almost no correct pairs are chosen",
           {none.accuracy_covered < limit, "accuracy_covered " + fmt("%.4f", none.accuracy_covered) + " (" +
                                                std::to_string(none.consistent) + "/" + std::to_string(none.covered) +
                                                "), limit " + fmt("%.4f", limit)},
           flat.seconds);
  }
  {
    auto [o, s] = timed(closed_forms);
    report(8, "closed-form prior and distance values", o, s);
  }
  {
    auto [o, s] = timed(cli_determinism);
    report(9, "train is deterministic given config and seed", o, s);
  }
  {
    auto [o, s] = timed([&] { return metric_properties(bench); });
    report(10, "metric and prior monotonicity properties", o, s);
  }

  std::printf("%d of 10 criteria failed\n", failures);
  results << failures << " of 10 criteria failed\n";
  return failures == 0 || report_only ? 0 : 1;
}
