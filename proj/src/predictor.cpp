#include "hcal/predictor.hpp"

#include <algorithm>
#include <cmath>

#include "hcal/error.hpp"
#include "hcal/rng.hpp"

namespace hcal {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

Vector token_probabilities(std::span<const double> hidden, const TokenModel& model) {
  return softmax(dot_logits(hidden, model.unembedding));
}

std::vector<Vector> probabilities_of(const FeatureBundle& bundle, std::span<const std::size_t> rows,
                                     const TokenModel& model) {
  std::vector<Vector> out;
  out.reserve(rows.size());
  for (auto i : rows) out.push_back(token_probabilities(bundle.row_as_vector(i), model));
  return out;
}

FeatureBundle estimation_sample(const FeatureBundle& calibration, const FitOptions& options) {
  if (options.per_class == 0) {
    const auto real = calibration.indices_of(RecordKind::real_query);
    return calibration.select(real);
  }
  return sample_per_class(calibration, options.per_class, options.seed);
}

}  // namespace

std::string_view to_string(Method method) noexcept {
  switch (method) {
    case Method::vanilla: return "vanilla";
    case Method::contextual: return "conc";
    case Method::batch: return "batc";
    case Method::domain: return "domc";
    case Method::knn: return "knn";
    case Method::central: return "centc";
    case Method::hidden: return "hiddc";
  }
  return "vanilla";
}

Method parse_method(std::string_view text) {
  for (auto m : {Method::vanilla, Method::contextual, Method::batch, Method::domain, Method::knn,
                 Method::central, Method::hidden}) {
    if (text == to_string(m)) return m;
  }
  throw Error(ErrorKind::UnsupportedMethod, "unknown method '" + std::string(text) + "'");
}

bool is_token_method(Method method) noexcept {
  return method == Method::vanilla || method == Method::contextual || method == Method::batch ||
         method == Method::domain;
}

bool is_centroid_method(Method method) noexcept {
  return method == Method::central || method == Method::hidden;
}

std::string_view to_string(BatchSource source) noexcept {
  return source == BatchSource::test ? "test" : "calibration";
}

BatchSource parse_batch_source(std::string_view text) {
  if (text == "test") return BatchSource::test;
  if (text == "calibration") return BatchSource::calibration;
  throw Error(ErrorKind::InvalidArgument, "unknown batch source '" + std::string(text) + "'");
}

Predictor::Predictor(Method method, LabelSpace labels, FeatureSpace space, std::size_t dimension,
                     MethodState state, std::size_t m_used, Metadata source_metadata)
    : method_(method),
      labels_(std::move(labels)),
      space_(space),
      dimension_(dimension),
      state_(std::move(state)),
      m_used_(m_used),
      source_metadata_(std::move(source_metadata)) {
  const bool consistent = std::visit(
      Overloaded{
          [&](const TokenModel& t) {
            return is_token_method(method_) && t.unembedding.size() == labels_.size() &&
                   t.unembedding.dimension() == dimension_ && t.calibration.size() == labels_.size();
          },
          [&](const CentroidModel& c) {
            return is_centroid_method(method_) && c.num_classes() == labels_.size() && c.dimension() == dimension_;
          },
          [&](const AnchorSet& a) {
            return method_ == Method::knn && a.num_classes == labels_.size() && a.dimension() == dimension_;
          }},
      state_);
  if (!consistent) {
    throw Error(ErrorKind::InvalidArgument,
                "model state does not match method '" + std::string(to_string(method_)) + "' or its label space");
  }
}

bool Predictor::needs_batch() const noexcept {
  const auto* t = token_model();
  return t != nullptr && t->awaiting_batch;
}

void Predictor::check_input(std::span<const double> features) const {
  if (features.size() != dimension_) {
    throw Error(ErrorKind::DimensionMismatch, "input has dimension " + std::to_string(features.size()) +
                                                  ", model expects " + std::to_string(dimension_));
  }
}

Predictor Predictor::bind(const FeatureBundle& batch) const {
  if (!needs_batch()) return *this;
  if (batch.dimension() != dimension_) {
    throw Error(ErrorKind::DimensionMismatch, "batch dimension does not match the model");
  }
  auto token = *token_model();
  const auto rows = batch.indices_of(RecordKind::real_query);
  token.calibration = estimate_batch(probabilities_of(batch, rows, token));
  token.awaiting_batch = false;
  return Predictor(method_, labels_, space_, dimension_, std::move(token), m_used_, source_metadata_);
}

Vector Predictor::label_probabilities(std::span<const double> features) const {
  const auto* t = token_model();
  if (t == nullptr) {
    throw Error(ErrorKind::UnsupportedMethod,
                "label probabilities are defined for token methods, not " + std::string(to_string(method_)));
  }
  check_input(features);
  return token_probabilities(features, *t);
}

int Predictor::predict_one(std::span<const double> features) const {
  check_input(features);
  return std::visit(Overloaded{[&](const TokenModel& t) {
                                 if (t.awaiting_batch) {
                                   throw Error(ErrorKind::UnfittedModel,
                                               "batch calibration has not been estimated; bind a batch first");
                                 }
                                 return apply_affine(token_probabilities(features, t), t.calibration).class_id;
                               },
                               [&](const CentroidModel& c) { return nearest_centroid_predict(features, c); },
                               [&](const AnchorSet& a) { return knn_predict(features, a); }},
                    state_);
}

std::vector<int> Predictor::predict(const FeatureBundle& bundle) const {
  if (bundle.dimension() != dimension_) {
    throw Error(ErrorKind::DimensionMismatch, "bundle dimension " + std::to_string(bundle.dimension()) +
                                                  " does not match model dimension " +
                                                  std::to_string(dimension_));
  }
  if (bundle.space() != space_) {
    throw Error(ErrorKind::SpaceMismatch, "model was fitted on " + std::string(to_string(space_)) +
                                              " features, bundle holds " +
                                              std::string(to_string(bundle.space())));
  }
  const auto bound = bind(bundle);
  const auto rows = bundle.indices_of(RecordKind::real_query);
  std::vector<int> out;
  out.reserve(rows.size());
  for (auto i : rows) out.push_back(bound.predict_one(bundle.row_as_vector(i)));
  return out;
}

std::pair<double, double> Predictor::pair_probabilities(std::span<const double> features, int a, int b) const {
  check_input(features);
  const auto n = static_cast<int>(labels_.size());
  if (a < 0 || b < 0 || a >= n || b >= n || a == b) {
    throw Error(ErrorKind::MissingLabel, "invalid label pair");
  }
  return std::visit(
      Overloaded{
          [&](const TokenModel& t) -> std::pair<double, double> {
            if (t.awaiting_batch) {
              throw Error(ErrorKind::UnfittedModel, "batch calibration has not been estimated; bind a batch first");
            }
            const auto scores = apply_affine(token_probabilities(features, t), t.calibration).scores;
            const double sa = scores[static_cast<std::size_t>(a)];
            const double sb = scores[static_cast<std::size_t>(b)];
            if (t.calibration.method == AffineMethod::batch) {
              const double pair[2] = {sa, sb};
              const auto p = softmax(pair);
              return {p[0], p[1]};
            }
            const double total = sa + sb;
            if (total <= 0.0) return {0.5, 0.5};
            return {sa / total, sb / total};
          },
          [&](const CentroidModel& c) { return centroid_pair_probabilities(features, c, a, b); },
          [&](const AnchorSet&) -> std::pair<double, double> {
            throw Error(ErrorKind::UnsupportedMethod, "k-NN has no pairwise probability criterion");
          }},
      state_);
}

Predictor fit(const FeatureBundle& calibration, const FitOptions& options, const UnembeddingSet* unembedding) {
  const auto& labels = calibration.labels();
  const auto dim = calibration.dimension();
  auto source = calibration.metadata();
  source["fit_method"] = std::string(to_string(options.method));
  source["fit_per_class"] = std::to_string(options.per_class);
  source["fit_seed"] = std::to_string(options.seed);
  source["space"] = std::string(to_string(calibration.space()));

  if (is_token_method(options.method)) {
    if (unembedding == nullptr) {
      throw Error(ErrorKind::InvalidArgument,
                  std::string(to_string(options.method)) + " needs the label un-embedding vectors");
    }
    if (calibration.space() != FeatureSpace::hidden) {
      throw Error(ErrorKind::SpaceMismatch, "token methods decode hidden-state bundles");
    }
    if (unembedding->size() != labels.size() || unembedding->dimension() != dim) {
      throw Error(ErrorKind::DimensionMismatch, "un-embedding set does not match the bundle's labels or dimension");
    }
    TokenModel token{*unembedding, AffineCalibration::identity(labels.size()), options.batch_source, false};
    std::size_t m_used = 0;

    if (options.method == Method::contextual || options.method == Method::domain) {
      const auto kind = options.method == Method::contextual ? RecordKind::pseudo_empty : RecordKind::pseudo_domain;
      auto rows = calibration.indices_of(kind);
      if (rows.empty()) {
        throw Error(ErrorKind::EmptyEstimationSet,
                    "calibration bundle has no " + std::string(to_string(kind)) + " records");
      }
      SplitMix64 rng(options.seed);
      shuffle(std::span<std::size_t>(rows), rng);
      const auto m = options.per_class * labels.size();
      if (m > 0 && rows.size() > m) rows.resize(m);
      const std::vector<RecordKind> kinds(rows.size(), kind);
      const auto affine = options.method == Method::contextual ? AffineMethod::contextual : AffineMethod::domain;
      token.calibration = estimate_reciprocal(probabilities_of(calibration, rows, token), kinds, affine);
      m_used = rows.size();
    } else if (options.method == Method::batch) {
      if (options.batch_source == BatchSource::calibration) {
        const auto sample = estimation_sample(calibration, options);
        const auto rows = sample.indices_of(RecordKind::real_query);
        token.calibration = estimate_batch(probabilities_of(sample, rows, token));
        m_used = rows.size();
      } else {
        token.calibration.method = AffineMethod::batch;
        token.awaiting_batch = true;
      }
    }
    return Predictor(options.method, labels, calibration.space(), dim, std::move(token), m_used, std::move(source));
  }

  const auto sample = estimation_sample(calibration, options);
  if (options.method == Method::knn) {
    auto anchors = build_anchors(sample, options.k_neighbors);
    const auto m = anchors.size();
    return Predictor(Method::knn, labels, calibration.space(), dim, std::move(anchors), m, std::move(source));
  }

  const auto expected = options.method == Method::hidden ? FeatureSpace::hidden : FeatureSpace::vocab_prob;
  if (calibration.space() != expected) {
    throw Error(ErrorKind::SpaceMismatch, std::string(to_string(options.method)) + " expects a " +
                                              std::string(to_string(expected)) + " bundle");
  }
  auto model = fit_centroids(sample, options.similarity);
  model.source_metadata = source;
  const auto m = sample.size();
  return Predictor(options.method, labels, calibration.space(), dim, std::move(model), m, std::move(source));
}

}  // namespace hcal
