#pragma once

#include "muto/core.hpp"
#include "muto/matching.hpp"

#include <json.hpp>

#include <array>
#include <filesystem>
#include <string>
#include <vector>

namespace muto {

enum class ModelKind { Muto, LdaUnion, LdaIntersection };

std::string_view model_kind_name(ModelKind kind);
ModelKind parse_model_kind(std::string_view name);

struct EmStep {
  int step = 0;            // 1-based M-step index
  int size_limit = 0;      // scheduled maximum matching size
  int matching_size = 0;
  double objective = 0.0;  // total weight of the selected edges
  int changed_pairs = 0;   // pairs not present in the previous matching
};

// Point estimates read off the final Gibbs state, plus everything needed to
// interpret them without the corpus.
struct TrainedModel {
  ModelKind kind = ModelKind::Muto;
  Hyperparams hyper;

  std::vector<std::string> doc_ids;
  std::vector<Language> doc_languages;
  Eigen::MatrixXd theta;  // documents x K

  // Topics are distributions over units: matched pairs for MuTo, terms for
  // the LDA baselines. unit_labels renders each unit ("source:target" or the
  // term itself).
  Eigen::MatrixXd beta;  // K x units
  std::vector<std::string> unit_labels;

  std::array<std::vector<std::string>, 2> vocab_terms;
  std::array<Eigen::VectorXd, 2> rho;  // zero at matched terms; empty for LDA

  Matching final_matching;
  std::vector<double> matching_weights;  // mu of each final pair, pair order
  std::vector<EmStep> em_trace;

  Eigen::Matrix<std::int64_t, Eigen::Dynamic, 2> topic_language_tokens;

  nlohmann::ordered_json config;  // echo of the producing configuration

  int num_topics() const { return static_cast<int>(theta.cols()); }
  std::vector<std::pair<std::string, std::string>> matched_terms() const;
};

nlohmann::ordered_json em_trace_to_json(const std::vector<EmStep>& trace);
std::vector<EmStep> em_trace_from_json(const nlohmann::json& j);

nlohmann::ordered_json model_to_json(const TrainedModel& model);
TrainedModel model_from_json(const nlohmann::json& j);

void write_model(const TrainedModel& model, const std::filesystem::path& path);
TrainedModel read_model(const std::filesystem::path& path);

}  // namespace muto
