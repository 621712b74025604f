#include "muto/eval.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <map>
#include <numeric>
#include <sstream>

namespace muto {

DocumentMatchScore document_match_score(
    const Eigen::MatrixXd& theta, const std::vector<std::string>& doc_ids,
    const std::vector<Language>& doc_languages,
    const std::vector<std::pair<std::string, std::string>>& gold_pairs) {
  if (gold_pairs.empty()) throw Error("document matching needs gold pairs");
  std::map<std::string, Eigen::Index> row_of;
  for (std::size_t d = 0; d < doc_ids.size(); ++d)
    row_of[doc_ids[d]] = static_cast<Eigen::Index>(d);

  std::array<std::vector<Eigen::Index>, 2> by_lang;
  for (std::size_t d = 0; d < doc_languages.size(); ++d)
    by_lang[index_of(doc_languages[d])].push_back(static_cast<Eigen::Index>(d));

  auto lookup = [&](const std::string& id) {
    auto it = row_of.find(id);
    if (it == row_of.end()) throw Error("gold pair references unknown document '" + id + "'");
    return it->second;
  };

  DocumentMatchScore score;
  auto rank = [&](Eigen::Index query, Eigen::Index match) {
    const auto& others = by_lang[index_of(doc_languages[match])];
    if (others.size() < 2) return;
    const double target = hellinger(theta.row(query), theta.row(match));
    double farther = 0.0;
    for (Eigen::Index d : others) {
      if (d == match) continue;
      const double h = hellinger(theta.row(query), theta.row(d));
      if (h > target) farther += 1.0;
      else if (h == target) farther += 0.5;
    }
    score.per_document.emplace_back(doc_ids[query],
                                    farther / static_cast<double>(others.size() - 1));
  };

  for (const auto& [s, t] : gold_pairs) {
    const Eigen::Index ds = lookup(s);
    const Eigen::Index dt = lookup(t);
    rank(ds, dt);
    rank(dt, ds);
  }
  if (!score.per_document.empty()) {
    double total = 0.0;
    for (const auto& [id, p] : score.per_document) total += p;
    score.mean = total / static_cast<double>(score.per_document.size());
  }
  return score;
}

DocumentMatchScore document_match_score(
    const TrainedModel& model,
    const std::vector<std::pair<std::string, std::string>>& gold_pairs) {
  return document_match_score(model.theta, model.doc_ids, model.doc_languages, gold_pairs);
}

DocumentMatchScore document_match_score(const TrainedModel& model, const Corpus& corpus) {
  return document_match_score(model, corpus.gold_pairs);
}

TranslationAccuracy translation_accuracy(
    const std::vector<std::pair<std::string, std::string>>& matched_terms,
    const Lexicon& lexicon) {
  TranslationAccuracy acc;
  acc.pairs = static_cast<int>(matched_terms.size());
  for (const auto& [s, t] : matched_terms) {
    if (!lexicon.covers(s)) continue;
    ++acc.covered;
    acc.consistent += lexicon.consistent(s, t);
  }
  acc.empty_matching = matched_terms.empty();
  if (acc.pairs > 0) acc.accuracy_all = static_cast<double>(acc.consistent) / acc.pairs;
  if (acc.covered > 0) acc.accuracy_covered = static_cast<double>(acc.consistent) / acc.covered;
  return acc;
}

namespace {

std::vector<TopicTable::Entry> top_entries(const Eigen::VectorXd& weights,
                                           const std::vector<std::string>& labels,
                                           int top_n, bool skip_zero) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(weights.size()));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return weights(a) > weights(b); });
  std::vector<TopicTable::Entry> out;
  for (Eigen::Index idx : order) {
    if (static_cast<int>(out.size()) == top_n) break;
    if (skip_zero && weights(idx) <= 0) break;
    out.push_back({labels[idx], weights(idx)});
  }
  return out;
}

}  // namespace

TopicTable export_topics(const TrainedModel& model, int top_n) {
  if (top_n < 1) throw Error("export_topics: top_n must be >= 1");
  TopicTable table;
  for (Eigen::Index k = 0; k < model.beta.rows(); ++k)
    table.topics.push_back(
        top_entries(model.beta.row(k).transpose(), model.unit_labels, top_n, false));
  // Models without a topic-free background keep an empty background table.
  for (std::size_t l = 0; l < 2; ++l)
    if (model.rho[l].size() == static_cast<Eigen::Index>(model.vocab_terms[l].size()))
      table.background[l] = top_entries(model.rho[l], model.vocab_terms[l], top_n, true);
  return table;
}

void write_topics_tsv(const TopicTable& table, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << std::setprecision(17);
  out << "topic\trank\tunit\tprobability\n";
  for (std::size_t k = 0; k < table.topics.size(); ++k)
    for (std::size_t r = 0; r < table.topics[k].size(); ++r)
      out << k << '\t' << r << '\t' << table.topics[k][r].label << '\t'
          << table.topics[k][r].probability << '\n';
  for (Language lang : kLanguages)
    for (std::size_t r = 0; r < table.background[index_of(lang)].size(); ++r)
      out << "background-" << language_tag(lang) << '\t' << r << '\t'
          << table.background[index_of(lang)][r].label << '\t'
          << table.background[index_of(lang)][r].probability << '\n';
}

std::string render_topics_text(const TopicTable& table) {
  std::ostringstream out;
  for (std::size_t k = 0; k < table.topics.size(); ++k) {
    out << "Topic " << k << '\n';
    for (const auto& e : table.topics[k])
      out << "  " << e.label << "  " << std::fixed << std::setprecision(4)
          << e.probability << '\n';
  }
  for (Language lang : kLanguages) {
    const auto& bg = table.background[index_of(lang)];
    if (bg.empty()) continue;
    out << "Background (" << language_tag(lang) << ")\n";
    for (const auto& e : bg)
      out << "  " << e.label << "  " << std::fixed << std::setprecision(4)
          << e.probability << '\n';
  }
  return out.str();
}

std::vector<double> language_purity(const TrainedModel& model) {
  std::vector<double> purity;
  const auto& counts = model.topic_language_tokens;
  for (Eigen::Index k = 0; k < counts.rows(); ++k) {
    const auto total = counts(k, 0) + counts(k, 1);
    purity.push_back(total == 0 ? 0.5
                                : static_cast<double>(std::max(counts(k, 0), counts(k, 1))) /
                                      static_cast<double>(total));
  }
  return purity;
}

nlohmann::ordered_json report_to_json(const EvalReport& report,
                                      const nlohmann::ordered_json& config) {
  nlohmann::ordered_json j;
  if (report.translation) {
    const auto& t = *report.translation;
    j["translation_accuracy_all"] = t.accuracy_all;
    j["translation_accuracy_covered"] = t.accuracy_covered;
    j["matched_pairs"] = t.pairs;
    j["covered_pairs"] = t.covered;
    j["consistent_pairs"] = t.consistent;
    j["empty_matching"] = t.empty_matching;
  }
  if (report.document_match) {
    j["doc_match_mean"] = report.document_match->mean;
    j["doc_match_documents"] = report.document_match->per_document.size();
  }
  j["config"] = config;
  return j;
}

}  // namespace muto
