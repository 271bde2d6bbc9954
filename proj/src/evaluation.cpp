#include "hcal/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "hcal/error.hpp"

namespace hcal {

namespace {

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

void mean_std(const std::vector<double>& xs, double& mean, double& sd) {
  mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  sd = 0.0;
  if (xs.size() < 2) return;
  for (double x : xs) sd += (x - mean) * (x - mean);
  sd = std::sqrt(sd / static_cast<double>(xs.size() - 1));
}

long long metadata_number(const Metadata& meta, const std::string& key, long long fallback) {
  const auto it = meta.find(key);
  if (it == meta.end()) return fallback;
  try {
    return std::stoll(it->second);
  } catch (const std::exception&) {
    return fallback;
  }
}

EvaluationReport describe(EvaluationReport report, const FeatureBundle& test, const Predictor& predictor) {
  report.method = std::string(to_string(predictor.method()));
  report.labels = test.labels().names();
  report.m_used = predictor.m_used();
  const auto real = test.indices_of(RecordKind::real_query);
  report.k = real.empty() ? 0 : test.record(real.front()).demo_count;
  report.seed = metadata_number(predictor.source_metadata(), "fit_seed", 0);
  report.source_metadata = predictor.source_metadata();
  return report;
}

std::vector<int> truth_of(const FeatureBundle& test) {
  std::vector<int> truth;
  for (auto i : test.indices_of(RecordKind::real_query)) truth.push_back(test.record(i).class_id);
  if (truth.empty()) throw Error(ErrorKind::Size, "test bundle has no real queries");
  return truth;
}

}  // namespace

EvaluationReport score_predictions(std::span<const int> truth, std::span<const int> predicted,
                                   std::size_t num_classes) {
  if (truth.size() != predicted.size()) {
    throw Error(ErrorKind::DimensionMismatch, "truth and prediction counts differ");
  }
  if (truth.empty()) throw Error(ErrorKind::Size, "nothing to score");
  EvaluationReport r;
  r.total = truth.size();
  r.confusion.assign(num_classes, std::vector<std::size_t>(num_classes, 0));
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const auto t = truth[i];
    const auto p = predicted[i];
    const auto n = static_cast<int>(num_classes);
    if (t < 0 || t >= n || p < 0 || p >= n) throw Error(ErrorKind::InvalidArgument, "class id out of range");
    ++r.confusion[static_cast<std::size_t>(t)][static_cast<std::size_t>(p)];
  }

  std::size_t correct = 0;
  for (std::size_t c = 0; c < num_classes; ++c) {
    const auto tp = r.confusion[c][c];
    std::size_t row = 0;
    std::size_t col = 0;
    for (std::size_t o = 0; o < num_classes; ++o) {
      row += r.confusion[c][o];
      col += r.confusion[o][c];
    }
    const double precision = ratio(tp, col);
    const double recall = ratio(tp, row);
    r.per_class_precision.push_back(precision);
    r.per_class_recall.push_back(recall);
    r.per_class_f1.push_back(precision + recall == 0.0 ? 0.0 : 2.0 * precision * recall / (precision + recall));
    correct += tp;
  }
  double f1_sum = 0.0;
  for (double f : r.per_class_f1) f1_sum += f;
  r.macro_f1 = f1_sum / static_cast<double>(num_classes);
  r.accuracy = ratio(correct, r.total);
  return r;
}

EvaluationReport evaluate(const FeatureBundle& test, const Predictor& predictor) {
  if (!(test.labels() == predictor.labels())) {
    throw Error(ErrorKind::LabelMismatch, "test bundle and model use different label spaces; use transfer");
  }
  const auto truth = truth_of(test);
  const auto predicted = predictor.predict(test);
  return describe(score_predictions(truth, predicted, test.num_classes()), test, predictor);
}

EvaluationReport evaluate_transfer(const FeatureBundle& test, const Predictor& predictor) {
  const auto& source = predictor.labels();
  const auto& target = test.labels();
  if (source.size() != target.size()) {
    throw Error(ErrorKind::LabelMismatch, "model has " + std::to_string(source.size()) + " labels, bundle has " +
                                              std::to_string(target.size()));
  }
  std::vector<int> to_target(source.size());
  for (std::size_t c = 0; c < source.size(); ++c) {
    const auto found = target.find(source.name(static_cast<int>(c)));
    if (!found) throw Error(ErrorKind::LabelMismatch, "label '" + source.name(static_cast<int>(c)) + "' not in bundle");
    to_target[c] = *found;
  }
  const auto truth = truth_of(test);
  auto predicted = predictor.predict(test);
  for (auto& p : predicted) p = to_target[static_cast<std::size_t>(p)];
  return describe(score_predictions(truth, predicted, test.num_classes()), test, predictor);
}

std::vector<MethodSummary> summarize(std::span<const EvaluationReport> reports) {
  std::vector<std::string> order;
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> groups;
  for (const auto& r : reports) {
    if (!groups.count(r.method)) order.push_back(r.method);
    groups[r.method].first.push_back(r.macro_f1);
    groups[r.method].second.push_back(r.accuracy);
  }
  std::vector<MethodSummary> out;
  for (const auto& method : order) {
    const auto& [f1s, accs] = groups[method];
    MethodSummary s;
    s.method = method;
    s.trials = f1s.size();
    mean_std(f1s, s.macro_f1_mean, s.macro_f1_std);
    mean_std(accs, s.accuracy_mean, s.accuracy_std);
    out.push_back(s);
  }
  return out;
}

}  // namespace hcal
