#include "hcal/centroid.hpp"

#include <cmath>

#include "hcal/decoder.hpp"
#include "hcal/error.hpp"

namespace hcal {

namespace {

void check_query(std::span<const double> hidden, const CentroidModel& model) {
  if (model.centroids.empty()) throw Error(ErrorKind::UnfittedModel, "centroid model has no centroids");
  if (hidden.size() != model.dimension()) {
    throw Error(ErrorKind::DimensionMismatch, "query has dimension " + std::to_string(hidden.size()) +
                                                  ", centroids have " + std::to_string(model.dimension()));
  }
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    acc += diff * diff;
  }
  return acc;
}

double norm(std::span<const double> v) { return std::sqrt(dot(v, v)); }

Vector cosine_similarities(std::span<const double> hidden, const CentroidModel& model) {
  const double hn = norm(hidden);
  if (hn == 0.0) throw Error(ErrorKind::ZeroVector, "cosine similarity of a zero query");
  Vector out(model.num_classes());
  for (std::size_t l = 0; l < out.size(); ++l) {
    const double cn = norm(model.centroids[l]);
    if (cn == 0.0) throw Error(ErrorKind::ZeroVector, "centroid " + std::to_string(l) + " is zero");
    out[l] = dot(hidden, model.centroids[l]) / (hn * cn);
  }
  return out;
}

}  // namespace

std::string_view to_string(Similarity similarity) noexcept {
  return similarity == Similarity::cosine ? "cosine" : "neg_euclidean";
}

Similarity parse_similarity(std::string_view text) {
  if (text == "neg_euclidean" || text == "euclidean") return Similarity::neg_euclidean;
  if (text == "cosine") return Similarity::cosine;
  throw Error(ErrorKind::Format, "unknown similarity '" + std::string(text) + "'");
}

CentroidModel fit_centroids(const FeatureBundle& training, Similarity similarity) {
  const auto k = training.num_classes();
  const auto dim = training.dimension();
  CentroidModel model;
  model.similarity = similarity;
  model.centroids.assign(k, Vector(dim, 0.0));
  model.per_class_counts.assign(k, 0);
  model.source_metadata = training.metadata();
  model.source_metadata["space"] = std::string(to_string(training.space()));

  for (std::size_t i = 0; i < training.size(); ++i) {
    const auto& rec = training.record(i);
    if (rec.kind != RecordKind::real_query) {
      throw Error(ErrorKind::KindMismatch, "centroids are fitted on real queries only (record " +
                                               std::to_string(i) + " is " +
                                               std::string(to_string(rec.kind)) + ")");
    }
    const auto c = static_cast<std::size_t>(rec.class_id);
    const auto row = training.row(i);
    auto& acc = model.centroids[c];
    for (std::size_t j = 0; j < dim; ++j) acc[j] += row[j];
    ++model.per_class_counts[c];
  }
  for (std::size_t c = 0; c < k; ++c) {
    if (model.per_class_counts[c] == 0) {
      throw Error(ErrorKind::EmptyClass,
                  "class '" + training.labels().name(static_cast<int>(c)) + "' has no training records");
    }
    for (auto& v : model.centroids[c]) v /= static_cast<double>(model.per_class_counts[c]);
  }
  return model;
}

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw Error(ErrorKind::DimensionMismatch, "distance between vectors of different length");
  return std::sqrt(squared_distance(a, b));
}

Vector centroid_logits(std::span<const double> hidden, const CentroidModel& model) {
  check_query(hidden, model);
  if (model.similarity == Similarity::cosine) return cosine_similarities(hidden, model);
  Vector out(model.num_classes());
  for (std::size_t l = 0; l < out.size(); ++l) {
    out[l] = -std::sqrt(std::sqrt(squared_distance(hidden, model.centroids[l])));
  }
  return out;
}

int nearest_centroid_predict(std::span<const double> hidden, const CentroidModel& model) {
  check_query(hidden, model);
  if (model.similarity == Similarity::cosine) return argmax(cosine_similarities(hidden, model));
  std::size_t best = 0;
  double best_d2 = squared_distance(hidden, model.centroids[0]);
  for (std::size_t l = 1; l < model.num_classes(); ++l) {
    const double d2 = squared_distance(hidden, model.centroids[l]);
    if (d2 < best_d2) {
      best_d2 = d2;
      best = l;
    }
  }
  return static_cast<int>(best);
}

std::pair<double, double> centroid_pair_probabilities(std::span<const double> hidden,
                                                      const CentroidModel& model, int a, int b) {
  check_query(hidden, model);
  const auto n = static_cast<int>(model.num_classes());
  if (a < 0 || b < 0 || a >= n || b >= n) throw Error(ErrorKind::MissingLabel, "label pair out of range");
  double sa = 0.0;
  double sb = 0.0;
  if (model.similarity == Similarity::cosine) {
    const auto sims = cosine_similarities(hidden, model);
    sa = sims[static_cast<std::size_t>(a)];
    sb = sims[static_cast<std::size_t>(b)];
  } else {
    sa = -euclidean_distance(hidden, model.centroids[static_cast<std::size_t>(a)]);
    sb = -euclidean_distance(hidden, model.centroids[static_cast<std::size_t>(b)]);
  }
  const double pair[2] = {sa, sb};
  const auto p = softmax(pair);
  return {p[0], p[1]};
}

}  // namespace hcal
