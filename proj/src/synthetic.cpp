#include "hcal/synthetic.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "hcal/error.hpp"
#include "hcal/rng.hpp"

namespace hcal {

namespace {

void axpy(double a, const Vector& x, Vector& y) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

double norm(const Vector& v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

// Modified Gram-Schmidt; returns orthonormal versions of the inputs.
std::vector<Vector> orthonormalize(std::vector<Vector> vs) {
  for (std::size_t i = 0; i < vs.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      double proj = 0.0;
      for (std::size_t t = 0; t < vs[i].size(); ++t) proj += vs[i][t] * vs[j][t];
      axpy(-proj, vs[j], vs[i]);
    }
    const double n = norm(vs[i]);
    if (n < 1e-12) throw Error(ErrorKind::Spec, "degenerate random frame; try another seed");
    for (auto& x : vs[i]) x /= n;
  }
  return vs;
}

// Coordinates of a regular simplex with unit pairwise distance in R^(k-1).
std::vector<Vector> simplex_coordinates(std::size_t k) {
  std::vector<Vector> centered(k, Vector(k, -1.0 / static_cast<double>(k)));
  for (std::size_t l = 0; l < k; ++l) centered[l][l] += 1.0;
  const auto basis = orthonormalize(std::vector<Vector>(centered.begin(), centered.end() - 1));
  std::vector<Vector> coords(k, Vector(k - 1, 0.0));
  for (std::size_t l = 0; l < k; ++l) {
    for (std::size_t i = 0; i + 1 < k; ++i) {
      double c = 0.0;
      for (std::size_t t = 0; t < k; ++t) c += centered[l][t] * basis[i][t];
      coords[l][i] = c / std::numbers::sqrt2;
    }
  }
  return coords;
}

void validate(const SyntheticSpec& spec) {
  const auto fail = [](const std::string& what) { throw Error(ErrorKind::Spec, what); };
  if (spec.num_classes < 2) fail("need at least 2 classes");
  if (spec.dim < 2) fail("need at least 2 dimensions");
  if (spec.records_per_class < 1) fail("need at least 1 record per class");
  if (!(spec.inter_centroid_distance > 0.0)) fail("inter-centroid distance must be positive");
  if (!(spec.intra_class_std > 0.0)) fail("intra-class std must be positive");
  if (!(spec.misalignment_deg >= 0.0 && spec.misalignment_deg <= 90.0)) fail("misalignment must lie in [0, 90]");
  if (spec.mean_norm < 0.0) fail("mean norm must be non-negative");
  if (spec.demo_count < 0) fail("demo count must be non-negative");
  const auto rank = spec.num_classes - 1;
  if (spec.dim < 2 * rank) {
    fail("dimension " + std::to_string(spec.dim) + " cannot hold " + std::to_string(spec.num_classes) +
         " classes and a rotated un-embedding plane (need >= " + std::to_string(2 * rank) + ")");
  }
  if ((spec.mean_norm > 0.0 || spec.prior_bias != 0.0) && spec.dim < 2 * rank + 1) {
    fail("a common mean or prior bias needs dimension >= " + std::to_string(2 * rank + 1));
  }
  if (spec.prior_bias != 0.0 && spec.mean_norm == 0.0) fail("a prior bias needs a non-zero mean norm");
}

std::string format_double(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

Metadata spec_metadata(const SyntheticSpec& spec) {
  return {
      {"dataset", "synthetic"},
      {"generator", "gaussian_simplex"},
      {"num_classes", std::to_string(spec.num_classes)},
      {"dim", std::to_string(spec.dim)},
      {"inter_centroid_distance", format_double(spec.inter_centroid_distance)},
      {"intra_class_std", format_double(spec.intra_class_std)},
      {"records_per_class", std::to_string(spec.records_per_class)},
      {"misalignment_deg", format_double(spec.misalignment_deg)},
      {"mean_norm", format_double(spec.mean_norm)},
      {"prior_bias", format_double(spec.prior_bias)},
      {"pseudo_records", std::to_string(spec.pseudo_records)},
      {"seed", std::to_string(spec.seed)},
      {"k", std::to_string(spec.demo_count)},
  };
}

}  // namespace

SyntheticTask generate_gaussian_task(const SyntheticSpec& spec) {
  validate(spec);
  const auto k = spec.num_classes;
  const auto d = spec.dim;
  const auto rank = k - 1;
  const bool has_mean_axis = d >= 2 * rank + 1;

  SplitMix64 frame_rng(spec.seed);
  std::vector<Vector> raw(2 * rank + (has_mean_axis ? 1 : 0), Vector(d));
  for (auto& v : raw) {
    for (auto& x : v) x = frame_rng.normal();
  }
  const auto frame = orthonormalize(std::move(raw));
  // frame[0, rank): centroid plane, frame[rank, 2 rank): rotation partners,
  // frame[2 rank]: common-mean axis.

  Vector mean(d, 0.0);
  if (has_mean_axis) axpy(spec.mean_norm, frame[2 * rank], mean);

  const auto coords = simplex_coordinates(k);
  const double theta = spec.misalignment_deg * std::numbers::pi / 180.0;
  const double distance = spec.inter_centroid_distance;

  std::vector<Vector> centroids(k, mean);
  std::vector<Vector> unembedding(k, Vector(d, 0.0));
  for (std::size_t l = 0; l < k; ++l) {
    for (std::size_t i = 0; i < rank; ++i) {
      const double c = coords[l][i];
      axpy(c * distance, frame[i], centroids[l]);
      axpy(c * std::cos(theta), frame[i], unembedding[l]);
      axpy(c * std::sin(theta), frame[rank + i], unembedding[l]);
    }
  }
  if (spec.prior_bias != 0.0) {
    axpy(spec.prior_bias / (spec.mean_norm * spec.mean_norm), mean, unembedding[0]);
  }

  // Noise streams are independent of the std, so tasks that differ only in
  // spread share their draws.
  SplitMix64 noise_rng(spec.seed ^ 0xA5A5A5A5DEADBEEFULL);
  const auto n_real = k * spec.records_per_class;
  const auto n_total = n_real + 2 * spec.pseudo_records;
  std::vector<float> values;
  values.reserve(n_total * d);
  std::vector<RecordInfo> records;
  records.reserve(n_total);

  const auto emit = [&](const Vector& center, RecordInfo info) {
    for (std::size_t j = 0; j < d; ++j) {
      values.push_back(static_cast<float>(center[j] + spec.intra_class_std * noise_rng.normal()));
    }
    records.push_back(info);
  };
  for (std::size_t i = 0; i < n_real; ++i) {
    const auto l = i % k;
    emit(centroids[l], {static_cast<int>(l), RecordKind::real_query, spec.demo_count});
  }
  for (std::size_t i = 0; i < spec.pseudo_records; ++i) {
    emit(mean, {kNoClass, RecordKind::pseudo_empty, spec.demo_count});
  }
  for (std::size_t i = 0; i < spec.pseudo_records; ++i) {
    emit(mean, {kNoClass, RecordKind::pseudo_domain, spec.demo_count});
  }

  std::vector<std::string> names;
  for (std::size_t l = 0; l < k; ++l) names.push_back("label_" + std::to_string(l));

  FeatureBundle bundle(FeatureSpace::hidden, d, LabelSpace(std::move(names)), std::move(records),
                       std::move(values), spec_metadata(spec));
  return {std::move(bundle), UnembeddingSet(std::move(unembedding)), std::move(centroids)};
}

std::vector<SweepPoint> dynamics_sweep(const SyntheticSpec& base, const std::vector<int>& k_values,
                                       double convergence) {
  if (k_values.empty()) throw Error(ErrorKind::Spec, "no k values given");
  if (!(convergence >= 0.0)) throw Error(ErrorKind::Spec, "convergence constant must be non-negative");
  std::vector<SweepPoint> out;
  out.reserve(k_values.size());
  for (int k : k_values) {
    if (k < 0) throw Error(ErrorKind::Spec, "k values must be non-negative");
    auto spec = base;
    spec.intra_class_std = base.intra_class_std / (1.0 + convergence * static_cast<double>(k));
    spec.demo_count = k;
    auto task = generate_gaussian_task(spec);
    auto meta = task.bundle.metadata();
    meta["sweep_convergence"] = format_double(convergence);
    meta["sweep_base_std"] = format_double(base.intra_class_std);
    task.bundle = task.bundle.with_metadata(std::move(meta));
    out.push_back({k, std::move(task)});
  }
  return out;
}

FeatureBundle vocab_view(const FeatureBundle& hidden, const UnembeddingSet& unembedding, std::size_t vocab_size,
                         std::uint64_t seed) {
  if (hidden.space() != FeatureSpace::hidden) throw Error(ErrorKind::SpaceMismatch, "vocab view needs a hidden bundle");
  const auto k = unembedding.size();
  const auto d = hidden.dimension();
  if (k != hidden.num_classes() || unembedding.dimension() != d) {
    throw Error(ErrorKind::DimensionMismatch, "un-embedding set does not match the bundle");
  }
  if (vocab_size <= k) throw Error(ErrorKind::Spec, "vocabulary must be larger than the label set");

  double mean_norm = 0.0;
  for (const auto& u : unembedding.vectors()) mean_norm += norm(u);
  mean_norm /= static_cast<double>(k);
  const double entry_scale = mean_norm / std::sqrt(static_cast<double>(d));

  std::vector<Vector> rows(unembedding.vectors());
  SplitMix64 rng(seed);
  for (std::size_t t = k; t < vocab_size; ++t) {
    Vector row(d);
    for (auto& x : row) x = entry_scale * rng.normal();
    rows.push_back(std::move(row));
  }

  std::vector<float> values;
  values.reserve(hidden.size() * vocab_size);
  Vector logits(vocab_size);
  for (std::size_t i = 0; i < hidden.size(); ++i) {
    const auto h = hidden.row(i);
    double peak = -INFINITY;
    for (std::size_t t = 0; t < vocab_size; ++t) {
      double acc = 0.0;
      for (std::size_t j = 0; j < d; ++j) acc += rows[t][j] * h[j];
      logits[t] = acc;
      peak = std::max(peak, acc);
    }
    double total = 0.0;
    for (auto& v : logits) {
      v = std::exp(v - peak);
      total += v;
    }
    for (double v : logits) values.push_back(static_cast<float>(v / total));
  }

  auto meta = hidden.metadata();
  meta["view"] = "vocab";
  meta["vocab_size"] = std::to_string(vocab_size);
  meta["vocab_seed"] = std::to_string(seed);
  return FeatureBundle(FeatureSpace::vocab_prob, vocab_size, hidden.labels(), hidden.records(), std::move(values),
                       std::move(meta));
}

}  // namespace hcal
