#include "hcal/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "hcal/error.hpp"

namespace hcal {

namespace {

double trapezoid(std::span<const double> grid, std::span<const double> values) {
  double acc = 0.0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    acc += 0.5 * (values[i] + values[i - 1]) * (grid[i] - grid[i - 1]);
  }
  return acc;
}

// Linear-interpolation quantile of sorted data (the common "type 7").
double quantile(std::span<const double> sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

CriterionSamples binary_criterion_samples(const FeatureBundle& bundle, const Predictor& predictor,
                                          int first, int second) {
  if (predictor.needs_batch()) {
    throw Error(ErrorKind::UnfittedModel, "batch calibration must be bound to a batch before analysis");
  }
  CriterionSamples out;
  for (auto i : bundle.indices_of(RecordKind::real_query)) {
    const int truth = bundle.record(i).class_id;
    if (truth != first && truth != second) continue;
    const auto [fa, fb] = predictor.pair_probabilities(bundle.row_as_vector(i), first, second);
    (truth == first ? out.first : out.second).push_back(fa - fb);
  }
  if (out.first.empty() || out.second.empty()) {
    const int missing = out.first.empty() ? first : second;
    throw Error(ErrorKind::MissingLabel, "no records labelled '" + bundle.labels().name(missing) + "'");
  }
  return out;
}

double DensityEstimate::mass() const { return trapezoid(grid, density); }

double silverman_bandwidth(std::span<const double> samples, double floor) {
  if (samples.size() < 2) throw Error(ErrorKind::TooFewSamples, "bandwidth needs at least 2 samples");
  const auto n = static_cast<double>(samples.size());
  double mean = 0.0;
  for (double s : samples) mean += s;
  mean /= n;
  double ss = 0.0;
  for (double s : samples) ss += (s - mean) * (s - mean);
  const double sd = std::sqrt(ss / (n - 1.0));

  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double iqr = quantile(sorted, 0.75) - quantile(sorted, 0.25);

  const double b = 0.9 * std::min(sd, iqr / 1.34) * std::pow(n, -0.2);
  return std::max(b, floor);
}

Vector unit_grid(std::size_t size) {
  if (size < 2) throw Error(ErrorKind::InvalidArgument, "grid needs at least 2 points");
  Vector grid(size);
  const auto last = static_cast<double>(size - 1);
  for (std::size_t i = 0; i < size; ++i) {
    grid[i] = (2.0 * static_cast<double>(i) - last) / last;
  }
  return grid;
}

DensityEstimate kde_with_bandwidth(std::span<const double> samples, double bandwidth, std::size_t grid_size) {
  if (samples.size() < 2) throw Error(ErrorKind::TooFewSamples, "KDE needs at least 2 samples");
  if (!(bandwidth > 0.0)) throw Error(ErrorKind::InvalidArgument, "bandwidth must be positive");
  DensityEstimate est;
  est.grid = unit_grid(grid_size);
  est.density.assign(grid_size, 0.0);
  est.bandwidth = bandwidth;
  est.sample_count = samples.size();

  const double norm = 1.0 / (static_cast<double>(samples.size()) * bandwidth * std::sqrt(2.0 * std::numbers::pi));
  for (std::size_t g = 0; g < grid_size; ++g) {
    double acc = 0.0;
    for (double s : samples) {
      const double z = (est.grid[g] - s) / bandwidth;
      acc += std::exp(-0.5 * z * z);
    }
    est.density[g] = acc * norm;
  }
  return est;
}

DensityEstimate kde(std::span<const double> samples, std::size_t grid_size) {
  return kde_with_bandwidth(samples, silverman_bandwidth(samples), grid_size);
}

double overlap_area(const DensityEstimate& a, const DensityEstimate& b) {
  if (a.grid != b.grid || a.density.size() != a.grid.size() || b.density.size() != b.grid.size()) {
    throw Error(ErrorKind::GridMismatch, "densities are evaluated on different grids");
  }
  Vector lower(a.grid.size());
  for (std::size_t i = 0; i < lower.size(); ++i) lower[i] = std::min(a.density[i], b.density[i]);
  // The exact integral is at most 1; trapezoid overshoot on a sharp peak is clipped.
  return std::min(1.0, trapezoid(a.grid, lower));
}

OverlapReport averaged_overlap(const FeatureBundle& bundle, const Predictor& predictor, std::size_t grid_size) {
  const auto k = bundle.num_classes();
  const auto bound = predictor.bind(bundle);

  OverlapReport report;
  report.method = std::string(to_string(predictor.method()));
  report.labels = bundle.labels().names();
  report.pair_overlaps.assign(k, std::vector<double>(k, std::numeric_limits<double>::quiet_NaN()));
  for (std::size_t i = 0; i < k; ++i) report.pair_overlaps[i][i] = 1.0;

  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      const auto a = static_cast<int>(i);
      const auto b = static_cast<int>(j);
      try {
        const auto samples = binary_criterion_samples(bundle, bound, a, b);
        PairOverlap pair{a, b, 0.0, kde(samples.first, grid_size), kde(samples.second, grid_size)};
        pair.overlap = overlap_area(pair.first_density, pair.second_density);
        report.pair_overlaps[i][j] = report.pair_overlaps[j][i] = pair.overlap;
        total += pair.overlap;
        report.pairs.push_back(std::move(pair));
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::MissingLabel && e.kind() != ErrorKind::TooFewSamples) throw;
        report.skipped.push_back(bundle.labels().name(a) + "/" + bundle.labels().name(b) + ": " + e.what());
      }
    }
  }
  if (report.pairs.empty()) {
    throw Error(ErrorKind::MissingLabel, "no label pair has samples on both sides");
  }
  report.averaged = total / static_cast<double>(report.pairs.size());
  return report;
}

double error_lower_bound(double overlap) {
  if (!(overlap >= 0.0 && overlap <= 1.0)) {
    throw Error(ErrorKind::Range, "overlap area must lie in [0, 1], got " + std::to_string(overlap));
  }
  return overlap / 2.0;
}

double averaged_centroid_distance(const CentroidModel& model) {
  const auto k = model.num_classes();
  if (k < 2) throw Error(ErrorKind::SingleClass, "centroid distance needs at least 2 classes");
  double total = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      total += euclidean_distance(model.centroids[i], model.centroids[j]);
      ++pairs;
    }
  }
  return total / static_cast<double>(pairs);
}

double averaged_intra_class_spread(const FeatureBundle& bundle, bool normalized) {
  const auto k = bundle.num_classes();
  const auto dim = bundle.dimension();
  std::vector<std::vector<std::size_t>> members(k);
  for (auto i : bundle.indices_of(RecordKind::real_query)) {
    members[static_cast<std::size_t>(bundle.record(i).class_id)].push_back(i);
  }

  double total = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    const auto& rows = members[c];
    const auto& name = bundle.labels().name(static_cast<int>(c));
    if (rows.empty()) throw Error(ErrorKind::EmptyClass, "class '" + name + "' has no records");
    if (rows.size() < 2) throw Error(ErrorKind::SingletonClass, "class '" + name + "' has a single record");

    Vector mean(dim, 0.0);
    for (auto i : rows) {
      const auto r = bundle.row(i);
      for (std::size_t j = 0; j < dim; ++j) mean[j] += r[j];
    }
    for (auto& m : mean) m /= static_cast<double>(rows.size());

    Vector scatter(dim, 0.0);
    for (auto i : rows) {
      const auto r = bundle.row(i);
      for (std::size_t j = 0; j < dim; ++j) {
        const double diff = r[j] - mean[j];
        scatter[j] += diff * diff;
      }
    }
    for (double s : scatter) total += std::sqrt(normalized ? s / static_cast<double>(rows.size()) : s);
  }
  return total / (static_cast<double>(k) * static_cast<double>(dim));
}

}  // namespace hcal
