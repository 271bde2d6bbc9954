#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hcal/centroid.hpp"
#include "hcal/feature.hpp"
#include "hcal/predictor.hpp"

namespace hcal {

inline constexpr std::size_t kDefaultGridSize = 512;
inline constexpr double kBandwidthFloor = 1e-3;

/// Per-class samples of the pairwise criterion f_a - f_b, in [-1, 1].
struct CriterionSamples {
  std::vector<double> first;   // records whose ground truth is the first label
  std::vector<double> second;  // records whose ground truth is the second label
};

/// Throws MissingLabel when either label has no real queries in `bundle`
/// and UnfittedModel when the predictor still needs an inference batch.
CriterionSamples binary_criterion_samples(const FeatureBundle& bundle, const Predictor& predictor,
                                          int first, int second);

/// Gaussian KDE evaluated on a uniform grid over [-1, 1]. Mass beyond the
/// interval is not renormalised, so `mass()` can be below one.
struct DensityEstimate {
  Vector grid;
  Vector density;
  double bandwidth = 0.0;
  std::size_t sample_count = 0;

  double mass() const;
};

/// Silverman's rule 0.9 * min(sd, IQR / 1.34) * n^(-1/5), floored.
double silverman_bandwidth(std::span<const double> samples, double floor = kBandwidthFloor);

/// Uniform grid of `size` points from -1 to 1, exactly antisymmetric.
Vector unit_grid(std::size_t size);

DensityEstimate kde(std::span<const double> samples, std::size_t grid_size = kDefaultGridSize);
DensityEstimate kde_with_bandwidth(std::span<const double> samples, double bandwidth,
                                   std::size_t grid_size = kDefaultGridSize);

/// Trapezoidal integral of min(d1, d2) over the shared grid.
double overlap_area(const DensityEstimate& a, const DensityEstimate& b);

struct PairOverlap {
  int first = 0;
  int second = 0;
  double overlap = 0.0;
  DensityEstimate first_density;
  DensityEstimate second_density;
};

struct OverlapReport {
  std::string method;
  std::vector<std::string> labels;
  /// |Y| x |Y|, symmetric, unit diagonal; NaN for pairs that were skipped.
  std::vector<std::vector<double>> pair_overlaps;
  std::vector<PairOverlap> pairs;
  std::vector<std::string> skipped;
  double averaged = 0.0;
};

/// Macro average of the pair overlaps over all label 2-combinations that
/// have samples on both sides. Pairs missing a label are skipped and listed.
OverlapReport averaged_overlap(const FeatureBundle& bundle, const Predictor& predictor,
                               std::size_t grid_size = kDefaultGridSize);

/// Lower bound on the pairwise error rate implied by an overlap area: S / 2.
double error_lower_bound(double overlap);

/// Mean pairwise distance between class centroids.
double averaged_centroid_distance(const CentroidModel& model);

/// Averaged intra-class spread: per class, the square root of the
/// unnormalised scatter diagonal sum_n (h_nj - mean_j)^2 summed over j, then
/// averaged over classes and dimensions. `normalized` divides the scatter by
/// the class size first (a plain standard deviation).
double averaged_intra_class_spread(const FeatureBundle& bundle, bool normalized = false);

}  // namespace hcal
