#include "muto/model.hpp"

#include <algorithm>
#include <fstream>
#include <map>

namespace muto {

std::string_view model_kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::Muto: return "muto";
    case ModelKind::LdaUnion: return "lda-union";
    case ModelKind::LdaIntersection: return "lda-intersection";
  }
  return "muto";
}

ModelKind parse_model_kind(std::string_view name) {
  if (name == "muto") return ModelKind::Muto;
  if (name == "lda-union") return ModelKind::LdaUnion;
  if (name == "lda-intersection") return ModelKind::LdaIntersection;
  throw Error("unknown model kind '" + std::string(name) + "'");
}

std::vector<std::pair<std::string, std::string>> TrainedModel::matched_terms() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& p : final_matching.pairs())
    out.emplace_back(vocab_terms[0].at(p.source), vocab_terms[1].at(p.target));
  return out;
}

namespace {

using ojson = nlohmann::ordered_json;

ojson matrix_rows(const Eigen::MatrixXd& m) {
  ojson rows = ojson::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    ojson row = ojson::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd rows_matrix(const nlohmann::json& rows, Eigen::Index cols) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), cols);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    const auto& row = rows.at(r);
    if (static_cast<Eigen::Index>(row.size()) != cols)
      throw Error("model: ragged matrix row");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = row.at(c).get<double>();
  }
  return m;
}

}  // namespace

nlohmann::ordered_json em_trace_to_json(const std::vector<EmStep>& trace) {
  ojson out = ojson::array();
  for (const auto& s : trace)
    out.push_back({{"step", s.step},
                   {"size_limit", s.size_limit},
                   {"matching_size", s.matching_size},
                   {"objective", s.objective},
                   {"changed_pairs", s.changed_pairs}});
  return out;
}

std::vector<EmStep> em_trace_from_json(const nlohmann::json& j) {
  std::vector<EmStep> trace;
  for (const auto& s : j)
    trace.push_back({s.at("step").get<int>(), s.at("size_limit").get<int>(),
                     s.at("matching_size").get<int>(), s.at("objective").get<double>(),
                     s.at("changed_pairs").get<int>()});
  return trace;
}

nlohmann::ordered_json model_to_json(const TrainedModel& model) {
  ojson j;
  j["kind"] = std::string(model_kind_name(model.kind));
  j["config"] = model.config;
  j["hyper"] = {{"k", model.hyper.k},
                {"alpha", model.hyper.alpha},
                {"lambda", model.hyper.lambda},
                {"gamma", model.hyper.gamma}};

  ojson docs = ojson::array();
  for (std::size_t d = 0; d < model.doc_ids.size(); ++d)
    docs.push_back({{"id", model.doc_ids[d]},
                    {"lang", std::string(language_tag(model.doc_languages[d]))}});
  j["documents"] = std::move(docs);
  j["theta"] = matrix_rows(model.theta);
  j["units"] = model.unit_labels;
  j["beta"] = matrix_rows(model.beta);

  ojson vocab, rho;
  for (Language lang : kLanguages) {
    const std::string tag(language_tag(lang));
    vocab[tag] = model.vocab_terms[index_of(lang)];
    const Eigen::VectorXd& r = model.rho[index_of(lang)];
    rho[tag] = std::vector<double>(r.data(), r.data() + r.size());
  }
  j["vocab"] = std::move(vocab);
  j["rho"] = std::move(rho);

  ojson matching = ojson::array();
  const auto& pairs = model.final_matching.pairs();
  for (std::size_t t = 0; t < pairs.size(); ++t)
    matching.push_back({{"source", model.vocab_terms[0].at(pairs[t].source)},
                        {"target", model.vocab_terms[1].at(pairs[t].target)},
                        {"weight", t < model.matching_weights.size()
                                       ? model.matching_weights[t] : 0.0}});
  j["matching"] = std::move(matching);

  j["em_trace"] = em_trace_to_json(model.em_trace);

  ojson tl = ojson::array();
  for (Eigen::Index k = 0; k < model.topic_language_tokens.rows(); ++k)
    tl.push_back({model.topic_language_tokens(k, 0), model.topic_language_tokens(k, 1)});
  j["topic_language_tokens"] = std::move(tl);
  return j;
}

TrainedModel model_from_json(const nlohmann::json& j) {
  TrainedModel m;
  try {
    m.kind = parse_model_kind(j.at("kind").get<std::string>());
    m.config = j.at("config");
    const auto& h = j.at("hyper");
    m.hyper = {h.at("k").get<int>(), h.at("alpha").get<double>(),
               h.at("lambda").get<double>(), h.at("gamma").get<double>()};

    for (const auto& doc : j.at("documents")) {
      m.doc_ids.push_back(doc.at("id").get<std::string>());
      m.doc_languages.push_back(parse_language_tag(doc.at("lang").get<std::string>()));
    }
    m.theta = rows_matrix(j.at("theta"), m.hyper.k);
    m.unit_labels = j.at("units").get<std::vector<std::string>>();
    m.beta = rows_matrix(j.at("beta"), static_cast<Eigen::Index>(m.unit_labels.size()));

    for (Language lang : kLanguages) {
      const std::string tag(language_tag(lang));
      m.vocab_terms[index_of(lang)] = j.at("vocab").at(tag).get<std::vector<std::string>>();
      const auto r = j.at("rho").at(tag).get<std::vector<double>>();
      m.rho[index_of(lang)] = Eigen::Map<const Eigen::VectorXd>(r.data(), r.size());
    }

    std::array<std::map<std::string, int>, 2> index;
    for (std::size_t l = 0; l < 2; ++l)
      for (std::size_t w = 0; w < m.vocab_terms[l].size(); ++w)
        index[l][m.vocab_terms[l][w]] = static_cast<int>(w);
    std::vector<std::pair<TermPair, double>> pairs;
    for (const auto& e : j.at("matching"))
      pairs.push_back({{index[0].at(e.at("source").get<std::string>()),
                        index[1].at(e.at("target").get<std::string>())},
                       e.at("weight").get<double>()});
    std::sort(pairs.begin(), pairs.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<TermPair> ids;
    for (const auto& [p, w] : pairs) {
      ids.push_back(p);
      m.matching_weights.push_back(w);
    }
    m.final_matching = Matching(std::move(ids));

    m.em_trace = em_trace_from_json(j.at("em_trace"));

    const auto& tl = j.at("topic_language_tokens");
    m.topic_language_tokens.resize(static_cast<Eigen::Index>(tl.size()), 2);
    for (Eigen::Index k = 0; k < m.topic_language_tokens.rows(); ++k)
      for (int l = 0; l < 2; ++l)
        m.topic_language_tokens(k, l) = tl.at(k).at(l).get<std::int64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed model: ") + e.what());
  } catch (const std::out_of_range& e) {
    throw Error(std::string("malformed model: unknown term in matching"));
  }
  return m;
}

void write_model(const TrainedModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << model_to_json(model).dump(1) << '\n';
}

TrainedModel read_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open model file " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(path.string() + ": " + e.what());
  }
  return model_from_json(j);
}

}  // namespace muto
