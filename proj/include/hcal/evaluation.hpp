#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hcal/feature.hpp"
#include "hcal/predictor.hpp"

namespace hcal {

struct EvaluationReport {
  std::string method;
  std::vector<std::string> labels;
  double macro_f1 = 0.0;
  double accuracy = 0.0;
  std::vector<double> per_class_precision;
  std::vector<double> per_class_recall;
  std::vector<double> per_class_f1;
  /// confusion[truth][predicted]
  std::vector<std::vector<std::size_t>> confusion;
  std::size_t total = 0;
  std::size_t m_used = 0;
  int k = 0;
  long long seed = 0;
  Metadata source_metadata;
};

/// Confusion matrix, precision, recall and F1 per class (0/0 counts as 0),
/// macro F1 as the unweighted mean of per-class F1.
EvaluationReport score_predictions(std::span<const int> truth, std::span<const int> predicted,
                                   std::size_t num_classes);

/// Predicts every real query of `test` and scores the result.
EvaluationReport evaluate(const FeatureBundle& test, const Predictor& predictor);

/// Evaluates a predictor fitted on another bundle. Labels are matched by
/// name, so the two label spaces may list them in different orders; any
/// other difference is a LabelMismatch.
EvaluationReport evaluate_transfer(const FeatureBundle& test, const Predictor& predictor);

struct MethodSummary {
  std::string method;
  std::size_t trials = 0;
  double macro_f1_mean = 0.0;
  double macro_f1_std = 0.0;
  double accuracy_mean = 0.0;
  double accuracy_std = 0.0;
};

/// Groups reports by method (first-seen order) and reports mean and sample
/// standard deviation across trials.
std::vector<MethodSummary> summarize(std::span<const EvaluationReport> reports);

}  // namespace hcal
