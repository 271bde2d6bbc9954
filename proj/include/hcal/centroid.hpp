#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "hcal/feature.hpp"

namespace hcal {

enum class Similarity { neg_euclidean, cosine };

std::string_view to_string(Similarity similarity) noexcept;
Similarity parse_similarity(std::string_view text);

/// Per-label mean feature vectors. Fitted on hidden states this is Hidden
/// Calibration; fitted on vocabulary distributions it is the Cent.C control.
struct CentroidModel {
  std::vector<Vector> centroids;
  Similarity similarity = Similarity::neg_euclidean;
  std::vector<std::size_t> per_class_counts;
  Metadata source_metadata;

  std::size_t num_classes() const noexcept { return centroids.size(); }
  std::size_t dimension() const noexcept { return centroids.empty() ? 0 : centroids.front().size(); }
  bool operator==(const CentroidModel&) const = default;
};

/// Means of the real_query rows of each class. Throws EmptyClassError when a
/// class has no rows and KindMismatch when pseudo records are present.
CentroidModel fit_centroids(const FeatureBundle& training,
                            Similarity similarity = Similarity::neg_euclidean);

double euclidean_distance(std::span<const double> a, std::span<const double> b);

/// Reported logits. neg_euclidean gives -(||h - c_l||)^(1/2); cosine gives
/// the cosine similarity.
Vector centroid_logits(std::span<const double> hidden, const CentroidModel& model);

/// Nearest centroid by plain distance (or largest cosine); lowest id on ties.
/// Identical to the argmax of centroid_logits since the reported form is a
/// strictly monotone transform of distance.
int nearest_centroid_predict(std::span<const double> hidden, const CentroidModel& model);

/// Two-way normalised probabilities (f_a, f_b) for a label pair: a softmax
/// over negative distances (neg_euclidean) or cosine similarities.
std::pair<double, double> centroid_pair_probabilities(std::span<const double> hidden,
                                                      const CentroidModel& model, int a, int b);

}  // namespace hcal
