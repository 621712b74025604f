#pragma once

#include "muto/corpus.hpp"
#include "muto/model.hpp"
#include "muto/priors.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <array>
#include <cmath>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace muto {

// H(p, q) = sqrt(1/2 * sum_k (sqrt(p_k) - sqrt(q_k))^2)
template <typename DerivedP, typename DerivedQ>
typename DerivedP::Scalar hellinger(const Eigen::MatrixBase<DerivedP>& p,
                                    const Eigen::MatrixBase<DerivedQ>& q) {
  using Scalar = typename DerivedP::Scalar;
  if (p.size() != q.size()) throw Error("hellinger: length mismatch");
  const Scalar sq = (p.array().sqrt() - q.array().sqrt()).square().sum();
  // Rounding can push the sum slightly above 2 for disjoint supports.
  return std::min(Scalar(1), std::sqrt(Scalar(0.5) * sq));
}

struct DocumentMatchScore {
  double mean = 0.0;
  std::vector<std::pair<std::string, double>> per_document;
};

// For every document with a designated match, the fraction of the other
// opposite-language documents whose theta is farther (Hellinger) than the
// match's; ties count one half. Both retrieval directions are included.
DocumentMatchScore document_match_score(
    const TrainedModel& model,
    const std::vector<std::pair<std::string, std::string>>& gold_pairs);
DocumentMatchScore document_match_score(const TrainedModel& model, const Corpus& corpus);

// Same score for a bare theta matrix (rows aligned with ids / languages).
DocumentMatchScore document_match_score(
    const Eigen::MatrixXd& theta, const std::vector<std::string>& doc_ids,
    const std::vector<Language>& doc_languages,
    const std::vector<std::pair<std::string, std::string>>& gold_pairs);

struct TranslationAccuracy {
  double accuracy_all = 0.0;
  double accuracy_covered = 0.0;
  int pairs = 0;
  int covered = 0;
  int consistent = 0;
  bool empty_matching = false;
};

TranslationAccuracy translation_accuracy(
    const std::vector<std::pair<std::string, std::string>>& matched_terms,
    const Lexicon& lexicon);

struct TopicTable {
  struct Entry {
    std::string label;
    double probability = 0.0;
  };
  std::vector<std::vector<Entry>> topics;
  std::array<std::vector<Entry>, 2> background;
};

TopicTable export_topics(const TrainedModel& model, int top_n);
void write_topics_tsv(const TopicTable& table, const std::filesystem::path& path);
std::string render_topics_text(const TopicTable& table);

// Per topic, the share of its tokens that belong to the majority language.
std::vector<double> language_purity(const TrainedModel& model);

struct EvalReport {
  std::optional<TranslationAccuracy> translation;
  std::optional<DocumentMatchScore> document_match;
};

nlohmann::ordered_json report_to_json(const EvalReport& report,
                                      const nlohmann::ordered_json& config);

}  // namespace muto
