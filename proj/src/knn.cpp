#include "hcal/knn.hpp"

#include <algorithm>
#include <numeric>

#include "hcal/centroid.hpp"
#include "hcal/error.hpp"

namespace hcal {

namespace {

struct Neighbour {
  double distance;
  std::size_t index;
};

// k nearest anchors. Equal distances are ordered by class id, so the chosen
// neighbourhood (as distance/class pairs) is independent of anchor order.
std::vector<Neighbour> nearest(std::span<const double> probe, const AnchorSet& anchors) {
  if (anchors.anchors.empty()) throw Error(ErrorKind::UnfittedModel, "anchor set is empty");
  if (probe.size() != anchors.dimension()) {
    throw Error(ErrorKind::DimensionMismatch, "probe has dimension " + std::to_string(probe.size()) +
                                                  ", anchors have " + std::to_string(anchors.dimension()));
  }
  std::vector<Neighbour> all(anchors.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = {euclidean_distance(probe, anchors.anchors[i]), i};
  const auto k = std::min(anchors.k_neighbors, all.size());
  const auto& ids = anchors.class_ids;
  const auto by_distance = [&ids](const Neighbour& a, const Neighbour& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    if (ids[a.index] != ids[b.index]) return ids[a.index] < ids[b.index];
    return a.index < b.index;
  };
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end(), by_distance);
  all.resize(k);
  return all;
}

}  // namespace

AnchorSet build_anchors(const FeatureBundle& calibration, std::size_t k_neighbors) {
  if (calibration.space() != FeatureSpace::vocab_prob) {
    throw Error(ErrorKind::SpaceMismatch, "k-NN anchors are built from vocab_prob bundles");
  }
  if (k_neighbors == 0) throw Error(ErrorKind::InvalidArgument, "k_neighbors must be positive");
  AnchorSet set;
  set.k_neighbors = k_neighbors;
  set.num_classes = calibration.num_classes();
  for (auto i : calibration.indices_of(RecordKind::real_query)) {
    set.anchors.push_back(calibration.row_as_vector(i));
    set.class_ids.push_back(calibration.record(i).class_id);
  }
  if (set.size() < k_neighbors) {
    throw Error(ErrorKind::TooFewAnchors, std::to_string(set.size()) + " anchors for k=" + std::to_string(k_neighbors));
  }
  const auto counts = calibration.class_counts();
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] == 0) {
      throw Error(ErrorKind::EmptyClass,
                  "class '" + calibration.labels().name(static_cast<int>(c)) + "' has no anchors");
    }
  }
  return set;
}

std::vector<std::size_t> knn_votes(std::span<const double> probe, const AnchorSet& anchors) {
  std::vector<std::size_t> votes(anchors.num_classes, 0);
  for (const auto& n : nearest(probe, anchors)) ++votes[static_cast<std::size_t>(anchors.class_ids[n.index])];
  return votes;
}

int knn_predict(std::span<const double> probe, const AnchorSet& anchors) {
  const auto neighbours = nearest(probe, anchors);
  std::vector<std::size_t> votes(anchors.num_classes, 0);
  std::vector<double> distance_sum(anchors.num_classes, 0.0);
  for (const auto& n : neighbours) {
    const auto c = static_cast<std::size_t>(anchors.class_ids[n.index]);
    ++votes[c];
    distance_sum[c] += n.distance;
  }
  std::size_t best = 0;
  for (std::size_t c = 1; c < votes.size(); ++c) {
    if (votes[c] > votes[best] || (votes[c] == votes[best] && distance_sum[c] < distance_sum[best])) best = c;
  }
  return static_cast<int>(best);
}

}  // namespace hcal
