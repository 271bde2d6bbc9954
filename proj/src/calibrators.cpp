#include "hcal/calibrators.hpp"

#include <algorithm>

#include "hcal/decoder.hpp"
#include "hcal/error.hpp"

namespace hcal {

namespace {

Vector componentwise_mean(std::span<const Vector> probs) {
  if (probs.empty()) throw Error(ErrorKind::EmptyEstimationSet, "no probability vectors to estimate from");
  const auto dim = probs.front().size();
  Vector mean(dim, 0.0);
  for (const auto& p : probs) {
    if (p.size() != dim) throw Error(ErrorKind::DimensionMismatch, "probability vectors differ in length");
    for (std::size_t i = 0; i < dim; ++i) mean[i] += p[i];
  }
  for (auto& v : mean) v /= static_cast<double>(probs.size());
  return mean;
}

}  // namespace

std::string_view to_string(AffineMethod method) noexcept {
  switch (method) {
    case AffineMethod::identity: return "identity";
    case AffineMethod::contextual: return "contextual";
    case AffineMethod::domain: return "domain";
    case AffineMethod::batch: return "batch";
  }
  return "identity";
}

AffineMethod parse_affine_method(std::string_view text) {
  if (text == "identity") return AffineMethod::identity;
  if (text == "contextual") return AffineMethod::contextual;
  if (text == "domain") return AffineMethod::domain;
  if (text == "batch") return AffineMethod::batch;
  throw Error(ErrorKind::Format, "unknown calibration method '" + std::string(text) + "'");
}

AffineCalibration AffineCalibration::identity(std::size_t num_labels) {
  return {Vector(num_labels, 1.0), Vector(num_labels, 0.0), AffineMethod::identity, 0};
}

AffineCalibration estimate_reciprocal(std::span<const Vector> pseudo_probs, AffineMethod method) {
  if (method != AffineMethod::contextual && method != AffineMethod::domain) {
    throw Error(ErrorKind::InvalidArgument, "reciprocal estimation is for contextual or domain calibration");
  }
  auto mean = componentwise_mean(pseudo_probs);
  Vector scale(mean.size());
  std::transform(mean.begin(), mean.end(), scale.begin(),
                 [](double p) { return 1.0 / std::max(p, kReciprocalFloor); });
  return {std::move(scale), Vector(mean.size(), 0.0), method, pseudo_probs.size()};
}

AffineCalibration estimate_reciprocal(std::span<const Vector> pseudo_probs,
                                      std::span<const RecordKind> kinds, AffineMethod method) {
  if (kinds.size() != pseudo_probs.size()) {
    throw Error(ErrorKind::InvalidArgument, "one record kind per probability vector expected");
  }
  const auto expected = method == AffineMethod::contextual ? RecordKind::pseudo_empty : RecordKind::pseudo_domain;
  for (auto kind : kinds) {
    if (kind != expected) {
      throw Error(ErrorKind::KindMismatch, std::string(to_string(method)) + " calibration expects " +
                                               std::string(to_string(expected)) + " records, got " +
                                               std::string(to_string(kind)));
    }
  }
  return estimate_reciprocal(pseudo_probs, method);
}

AffineCalibration estimate_batch(std::span<const Vector> inference_probs) {
  auto mean = componentwise_mean(inference_probs);
  for (auto& v : mean) v = -v;
  return {Vector(mean.size(), 1.0), std::move(mean), AffineMethod::batch, inference_probs.size()};
}

AffineResult apply_affine(std::span<const double> probs, const AffineCalibration& calibration) {
  if (probs.size() != calibration.size() || calibration.offset.size() != calibration.size()) {
    throw Error(ErrorKind::DimensionMismatch, "probability vector has " + std::to_string(probs.size()) +
                                                  " entries, calibration has " +
                                                  std::to_string(calibration.size()));
  }
  AffineResult out;
  out.scores.resize(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i) {
    out.scores[i] = calibration.scale[i] * probs[i] + calibration.offset[i];
  }
  out.class_id = argmax(out.scores);
  return out;
}

}  // namespace hcal
