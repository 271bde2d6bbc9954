#pragma once

#include <span>
#include <string>
#include <vector>

#include "hcal/analysis.hpp"
#include "hcal/decoder.hpp"
#include "hcal/evaluation.hpp"
#include "hcal/pca.hpp"
#include "json.hpp"

namespace hcal {

nlohmann::json to_json(const EvaluationReport& report);
EvaluationReport evaluation_report_from_json(const nlohmann::json& j);

/// Skipped pair entries become null. Curves carry the shared grid plus both
/// densities per pair so the figures can be re-plotted elsewhere.
nlohmann::json to_json(const OverlapReport& report, bool include_curves);

nlohmann::json to_json(std::span<const MethodSummary> summaries);

/// Projected real queries, plus (when given) each label's un-embedding
/// direction PCA(E) - PCA(0) and the offset <mean, E_a - E_b> of every
/// pairwise token boundary.
nlohmann::json pca_plot_json(const FeatureBundle& bundle, const PcaMap& map, const UnembeddingSet* unembedding);

}  // namespace hcal
