#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "hcal/feature.hpp"

namespace hcal {

enum class AffineMethod { identity, contextual, domain, batch };

std::string_view to_string(AffineMethod method) noexcept;
AffineMethod parse_affine_method(std::string_view text);

/// Affine correction of label probabilities: scores = A * p + B (elementwise).
struct AffineCalibration {
  Vector scale;   // A, strictly positive
  Vector offset;  // B
  AffineMethod method = AffineMethod::identity;
  std::size_t m_used = 0;

  static AffineCalibration identity(std::size_t num_labels);

  std::size_t size() const noexcept { return scale.size(); }
  bool operator==(const AffineCalibration&) const = default;
};

/// Floor applied to mean probabilities before taking reciprocals.
inline constexpr double kReciprocalFloor = 1e-6;

/// Contextual / domain calibration: A = 1 / mean(p), B = 0. The caller picks
/// the probabilities from pseudo_empty (contextual) or pseudo_domain (domain)
/// records.
AffineCalibration estimate_reciprocal(std::span<const Vector> pseudo_probs, AffineMethod method);

/// Same estimate, but checks record kinds against the method first.
AffineCalibration estimate_reciprocal(std::span<const Vector> pseudo_probs,
                                      std::span<const RecordKind> kinds, AffineMethod method);

/// Batch calibration: A = 1, B = -mean(p) over the inference batch.
AffineCalibration estimate_batch(std::span<const Vector> inference_probs);

struct AffineResult {
  Vector scores;
  int class_id = 0;
};

AffineResult apply_affine(std::span<const double> probs, const AffineCalibration& calibration);

}  // namespace hcal
