#include "hcal/report_json.hpp"

#include <cmath>

#include "hcal/error.hpp"

namespace hcal {

using nlohmann::json;

json to_json(const EvaluationReport& r) {
  return {
      {"method", r.method},
      {"labels", r.labels},
      {"macro_f1", r.macro_f1},
      {"accuracy", r.accuracy},
      {"per_class_precision", r.per_class_precision},
      {"per_class_recall", r.per_class_recall},
      {"per_class_f1", r.per_class_f1},
      {"confusion", r.confusion},
      {"total", r.total},
      {"m_used", r.m_used},
      {"k", r.k},
      {"seed", r.seed},
      {"source_metadata", r.source_metadata},
  };
}

EvaluationReport evaluation_report_from_json(const json& j) {
  try {
    EvaluationReport r;
    r.method = j.at("method").get<std::string>();
    r.labels = j.at("labels").get<std::vector<std::string>>();
    r.macro_f1 = j.at("macro_f1").get<double>();
    r.accuracy = j.at("accuracy").get<double>();
    r.per_class_precision = j.at("per_class_precision").get<std::vector<double>>();
    r.per_class_recall = j.at("per_class_recall").get<std::vector<double>>();
    r.per_class_f1 = j.at("per_class_f1").get<std::vector<double>>();
    r.confusion = j.at("confusion").get<std::vector<std::vector<std::size_t>>>();
    r.total = j.at("total").get<std::size_t>();
    r.m_used = j.at("m_used").get<std::size_t>();
    r.k = j.at("k").get<int>();
    r.seed = j.at("seed").get<long long>();
    if (j.contains("source_metadata")) r.source_metadata = j.at("source_metadata").get<Metadata>();
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Format, std::string("evaluation report: ") + e.what());
  }
}

json to_json(const OverlapReport& r, bool include_curves) {
  json matrix = json::array();
  for (const auto& row : r.pair_overlaps) {
    json jrow = json::array();
    for (double v : row) jrow.push_back(std::isnan(v) ? json(nullptr) : json(v));
    matrix.push_back(std::move(jrow));
  }
  json pairs = json::array();
  for (const auto& p : r.pairs) {
    json entry = {
        {"first", r.labels[static_cast<std::size_t>(p.first)]},
        {"second", r.labels[static_cast<std::size_t>(p.second)]},
        {"overlap", p.overlap},
        {"error_lower_bound", error_lower_bound(std::min(1.0, p.overlap))},
        {"bandwidths", {p.first_density.bandwidth, p.second_density.bandwidth}},
        {"sample_counts", {p.first_density.sample_count, p.second_density.sample_count}},
    };
    if (include_curves) {
      entry["first_density"] = p.first_density.density;
      entry["second_density"] = p.second_density.density;
    }
    pairs.push_back(std::move(entry));
  }
  json out = {
      {"method", r.method},
      {"labels", r.labels},
      {"averaged_overlap", r.averaged},
      {"pair_overlaps", std::move(matrix)},
      {"pairs", std::move(pairs)},
      {"skipped", r.skipped},
  };
  if (include_curves && !r.pairs.empty()) out["grid"] = r.pairs.front().first_density.grid;
  return out;
}

json to_json(std::span<const MethodSummary> summaries) {
  json out = json::array();
  for (const auto& s : summaries) {
    out.push_back({
        {"method", s.method},
        {"trials", s.trials},
        {"macro_f1_mean", s.macro_f1_mean},
        {"macro_f1_std", s.macro_f1_std},
        {"accuracy_mean", s.accuracy_mean},
        {"accuracy_std", s.accuracy_std},
    });
  }
  return out;
}

json pca_plot_json(const FeatureBundle& bundle, const PcaMap& map, const UnembeddingSet* unembedding) {
  json points = json::array();
  for (auto i : bundle.indices_of(RecordKind::real_query)) {
    points.push_back({{"class_id", bundle.record(i).class_id}, {"coords", pca_project(map, bundle.row_as_vector(i))}});
  }
  json out = {
      {"labels", bundle.labels().names()},
      {"dims", map.output_dimension()},
      {"eigenvalues", map.eigenvalues},
      {"mean", map.mean},
      {"warnings", map.warnings},
      {"points", std::move(points)},
  };
  if (unembedding != nullptr) {
    if (unembedding->dimension() != bundle.dimension() || unembedding->size() != bundle.num_classes()) {
      throw Error(ErrorKind::DimensionMismatch, "un-embedding set does not match the bundle");
    }
    json directions = json::array();
    for (std::size_t l = 0; l < unembedding->size(); ++l) {
      directions.push_back({{"label", bundle.labels().name(static_cast<int>(l))},
                            {"direction", pca_project_direction(map, (*unembedding)[l])}});
    }
    json boundaries = json::array();
    for (std::size_t a = 0; a < unembedding->size(); ++a) {
      for (std::size_t b = a + 1; b < unembedding->size(); ++b) {
        Vector diff((*unembedding)[a]);
        for (std::size_t j = 0; j < diff.size(); ++j) diff[j] -= (*unembedding)[b][j];
        boundaries.push_back({
            {"first", bundle.labels().name(static_cast<int>(a))},
            {"second", bundle.labels().name(static_cast<int>(b))},
            {"normal", pca_project_direction(map, diff)},
            {"offset", dot(map.mean, diff)},
        });
      }
    }
    out["unembedding_directions"] = std::move(directions);
    out["token_boundaries"] = std::move(boundaries);
  }
  return out;
}

}  // namespace hcal
