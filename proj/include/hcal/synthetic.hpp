#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "hcal/decoder.hpp"
#include "hcal/feature.hpp"

namespace hcal {

/// Gaussian class clusters standing in for last hidden states.
///
/// Centroids sit on a regular simplex with the requested pairwise distance,
/// offset by a common mean vector of norm `mean_norm`. The label
/// un-embedding vectors span a plane rotated by `misalignment_deg` away from
/// the centroid-difference plane: at 0 degrees the dot-product decision
/// boundary separates the clusters, at 90 degrees it is blind to them.
/// `prior_bias` adds that many logits in favour of label 0 at the mean,
/// which is what the token calibrations are meant to remove.
struct SyntheticSpec {
  std::size_t num_classes = 2;
  std::size_t dim = 32;
  double inter_centroid_distance = 20.0;
  double intra_class_std = 1.0;
  std::size_t records_per_class = 250;
  double misalignment_deg = 0.0;
  std::uint64_t seed = 0;
  double mean_norm = 0.0;
  double prior_bias = 0.0;
  /// Records of each pseudo kind, drawn around the common mean.
  std::size_t pseudo_records = 32;
  int demo_count = 0;
};

struct SyntheticTask {
  FeatureBundle bundle;
  UnembeddingSet unembedding;
  /// The designed (not empirical) class centroids.
  std::vector<Vector> centroids;
};

/// Deterministic in the spec; equal specs give bit-identical tasks. Real
/// queries are interleaved by class (record i has class i mod |Y|).
SyntheticTask generate_gaussian_task(const SyntheticSpec& spec);

inline constexpr double kDefaultConvergence = 0.5;

struct SweepPoint {
  int k = 0;
  SyntheticTask task;
};

/// One task per demonstration count k with intra-class std shrunk to
/// std / (1 + convergence * k). Centroids and noise draws are shared across
/// k (same seed), so only the spread changes.
std::vector<SweepPoint> dynamics_sweep(const SyntheticSpec& base, const std::vector<int>& k_values,
                                       double convergence = kDefaultConvergence);

/// Vocabulary-distribution view of a hidden-state bundle: softmax(W h) where
/// the first |Y| rows of W are the label un-embedding vectors and the rest
/// are random token rows of similar scale.
FeatureBundle vocab_view(const FeatureBundle& hidden, const UnembeddingSet& unembedding,
                         std::size_t vocab_size, std::uint64_t seed);

}  // namespace hcal
