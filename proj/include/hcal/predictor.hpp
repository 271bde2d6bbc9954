#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "hcal/calibrators.hpp"
#include "hcal/centroid.hpp"
#include "hcal/decoder.hpp"
#include "hcal/feature.hpp"
#include "hcal/knn.hpp"

namespace hcal {

/// The seven decoding methods compared by the toolkit. CLI names in comments.
enum class Method {
  vanilla,     // vanilla
  contextual,  // conc
  batch,       // batc
  domain,      // domc
  knn,         // knn
  central,     // centc: nearest centroid on vocabulary distributions
  hidden,      // hiddc: nearest centroid on last hidden states
};

std::string_view to_string(Method method) noexcept;
Method parse_method(std::string_view text);
bool is_token_method(Method method) noexcept;
bool is_centroid_method(Method method) noexcept;

/// Where batch calibration takes its estimation batch from.
enum class BatchSource { test, calibration };

std::string_view to_string(BatchSource source) noexcept;
BatchSource parse_batch_source(std::string_view text);

/// Label-token decoding: softmax over <h, E_l>, then an affine correction.
struct TokenModel {
  UnembeddingSet unembedding;
  AffineCalibration calibration;
  BatchSource batch_source = BatchSource::test;
  /// True for test-sourced batch calibration that has not seen its batch yet.
  bool awaiting_batch = false;

  bool operator==(const TokenModel&) const = default;
};

using MethodState = std::variant<TokenModel, CentroidModel, AnchorSet>;

struct FitOptions {
  Method method = Method::hidden;
  /// Estimation samples per class (m = per_class * |Y|). Zero uses everything.
  std::size_t per_class = 16;
  std::uint64_t seed = 0;
  Similarity similarity = Similarity::neg_euclidean;
  std::size_t k_neighbors = kDefaultNeighbors;
  BatchSource batch_source = BatchSource::test;
};

class Predictor {
 public:
  Predictor(Method method, LabelSpace labels, FeatureSpace space, std::size_t dimension,
            MethodState state, std::size_t m_used, Metadata source_metadata);

  Method method() const noexcept { return method_; }
  const LabelSpace& labels() const noexcept { return labels_; }
  FeatureSpace space() const noexcept { return space_; }
  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t m_used() const noexcept { return m_used_; }
  const Metadata& source_metadata() const noexcept { return source_metadata_; }
  const MethodState& state() const noexcept { return state_; }

  const TokenModel* token_model() const noexcept { return std::get_if<TokenModel>(&state_); }
  const CentroidModel* centroid_model() const noexcept { return std::get_if<CentroidModel>(&state_); }
  const AnchorSet* anchor_set() const noexcept { return std::get_if<AnchorSet>(&state_); }

  /// Whether the predictor still needs an inference batch (see bind).
  bool needs_batch() const noexcept;

  /// Resolves inference-time state against the real queries of `batch`;
  /// a no-op for every method except test-sourced batch calibration.
  Predictor bind(const FeatureBundle& batch) const;

  /// Label probabilities softmax(<h, E_l>) for token methods.
  Vector label_probabilities(std::span<const double> features) const;

  int predict_one(std::span<const double> features) const;

  /// One prediction per real_query record of `bundle`, in record order.
  /// Binds to `bundle` first when the method needs an inference batch.
  std::vector<int> predict(const FeatureBundle& bundle) const;

  /// Two-way normalised probabilities (f_a, f_b) used by the overlap
  /// analysis. Ratio normalisation of the calibrated scores for B = 0
  /// token methods, a two-way softmax of the scores for batch calibration,
  /// and the centroid pair softmax for centroid methods.
  std::pair<double, double> pair_probabilities(std::span<const double> features, int a, int b) const;

  bool operator==(const Predictor&) const = default;

 private:
  void check_input(std::span<const double> features) const;

  Method method_;
  LabelSpace labels_;
  FeatureSpace space_;
  std::size_t dimension_;
  MethodState state_;
  std::size_t m_used_;
  Metadata source_metadata_;
};

/// Fits `options.method` on a calibration bundle. Token methods need the
/// label un-embedding vectors; the others ignore the argument.
Predictor fit(const FeatureBundle& calibration, const FitOptions& options,
              const UnembeddingSet* unembedding = nullptr);

}  // namespace hcal
