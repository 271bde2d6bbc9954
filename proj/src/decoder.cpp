#include "hcal/decoder.hpp"

#include <algorithm>
#include <cmath>

#include "hcal/error.hpp"

namespace hcal {

UnembeddingSet::UnembeddingSet(std::vector<Vector> vectors) : vectors_(std::move(vectors)) {
  if (vectors_.size() < 2) throw Error(ErrorKind::InvalidArgument, "need one un-embedding vector per label (>= 2)");
  const auto dim = vectors_.front().size();
  if (dim == 0) throw Error(ErrorKind::InvalidArgument, "un-embedding dimension must be positive");
  for (const auto& v : vectors_) {
    if (v.size() != dim) throw Error(ErrorKind::DimensionMismatch, "un-embedding vectors differ in dimension");
    if (std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; })) {
      throw Error(ErrorKind::ZeroVector, "un-embedding vector is all zero");
    }
  }
}

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::DimensionMismatch,
                std::to_string(a.size()) + " vs " + std::to_string(b.size()));
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

int argmax(std::span<const double> values) {
  if (values.empty()) throw Error(ErrorKind::InvalidArgument, "argmax of empty vector");
  std::size_t best = 0;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return static_cast<int>(best);
}

Vector dot_logits(std::span<const double> hidden, const UnembeddingSet& unembedding) {
  if (hidden.size() != unembedding.dimension()) {
    throw Error(ErrorKind::DimensionMismatch, "hidden state has dimension " + std::to_string(hidden.size()) +
                                                  ", un-embedding has " +
                                                  std::to_string(unembedding.dimension()));
  }
  Vector logits(unembedding.size());
  for (std::size_t l = 0; l < logits.size(); ++l) logits[l] = dot(hidden, unembedding[l]);
  return logits;
}

Vector softmax(std::span<const double> logits) {
  if (logits.empty()) throw Error(ErrorKind::InvalidArgument, "softmax of empty vector");
  const double peak = *std::max_element(logits.begin(), logits.end());
  Vector out(logits.size());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - peak);
    total += out[i];
  }
  for (auto& v : out) v /= total;
  return out;
}

int vanilla_predict(std::span<const double> hidden, const UnembeddingSet& unembedding) {
  return argmax(dot_logits(hidden, unembedding));
}

}  // namespace hcal
