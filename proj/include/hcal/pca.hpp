#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hcal/feature.hpp"

namespace hcal {

/// Principal component map fitted on the 1/n-normalised covariance.
///
/// components[i] is the i-th principal direction (a row of P^T), ordered by
/// descending eigenvalue, and signed so that its largest-magnitude entry is
/// positive. Projection is (h - mean) P.
struct PcaMap {
  Vector mean;
  std::vector<Vector> components;
  Vector eigenvalues;
  /// Non-fatal findings such as RankError for near-zero trailing eigenvalues.
  std::vector<std::string> warnings;

  std::size_t input_dimension() const noexcept { return mean.size(); }
  std::size_t output_dimension() const noexcept { return components.size(); }
};

PcaMap pca_fit(std::span<const Vector> rows, std::size_t dims);

/// Fits on the bundle's real_query rows.
PcaMap pca_fit(const FeatureBundle& bundle, std::size_t dims);

/// (h - mean) P
Vector pca_project(const PcaMap& map, std::span<const double> point);

/// PCA(direction) - PCA(0) = direction P: the image of a direction such as
/// an un-embedding vector, without the centring offset.
Vector pca_project_direction(const PcaMap& map, std::span<const double> direction);

}  // namespace hcal
