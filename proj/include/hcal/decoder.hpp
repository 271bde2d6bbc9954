#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hcal/feature.hpp"

namespace hcal {

/// Output-head rows of the label tokens, one per label, in label order.
class UnembeddingSet {
 public:
  explicit UnembeddingSet(std::vector<Vector> vectors);

  std::size_t size() const noexcept { return vectors_.size(); }
  std::size_t dimension() const noexcept { return vectors_.front().size(); }
  const Vector& operator[](std::size_t label) const { return vectors_.at(label); }
  const std::vector<Vector>& vectors() const noexcept { return vectors_; }

  bool operator==(const UnembeddingSet&) const = default;

 private:
  std::vector<Vector> vectors_;
};

double dot(std::span<const double> a, std::span<const double> b);

/// Index of the largest value; the lowest index wins ties.
int argmax(std::span<const double> values);

/// logits[l] = <h, E_l>. No output-head bias.
Vector dot_logits(std::span<const double> hidden, const UnembeddingSet& unembedding);

/// Max-shifted softmax; never overflows for finite input.
Vector softmax(std::span<const double> logits);

int vanilla_predict(std::span<const double> hidden, const UnembeddingSet& unembedding);

}  // namespace hcal
