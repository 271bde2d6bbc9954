#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hcal/feature.hpp"

namespace hcal {

inline constexpr std::size_t kDefaultNeighbors = 3;

/// Calibration vocabulary distributions kept verbatim as k-NN anchors.
struct AnchorSet {
  std::vector<Vector> anchors;
  std::vector<int> class_ids;
  std::size_t num_classes = 0;
  std::size_t k_neighbors = kDefaultNeighbors;

  std::size_t size() const noexcept { return anchors.size(); }
  std::size_t dimension() const noexcept { return anchors.empty() ? 0 : anchors.front().size(); }
  bool operator==(const AnchorSet&) const = default;
};

AnchorSet build_anchors(const FeatureBundle& calibration, std::size_t k_neighbors = kDefaultNeighbors);

/// Euclidean k-NN vote. Majority wins; a tied vote goes to the tied class
/// with the smaller summed neighbour distance, then to the lower class id.
int knn_predict(std::span<const double> probe, const AnchorSet& anchors);

/// Per-class vote counts among the k nearest anchors.
std::vector<std::size_t> knn_votes(std::span<const double> probe, const AnchorSet& anchors);

}  // namespace hcal
