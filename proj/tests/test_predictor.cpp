#include <cmath>

#include "helpers.hpp"
#include "hcal/evaluation.hpp"
#include "hcal/predictor.hpp"
#include "hcal/synthetic.hpp"

using namespace hcal;

namespace {

SyntheticTask biased_task() {
  SyntheticSpec spec;
  spec.num_classes = 3;
  spec.dim = 16;
  spec.inter_centroid_distance = 6.0;
  spec.intra_class_std = 1.0;
  spec.records_per_class = 200;
  spec.mean_norm = 3.0;
  spec.prior_bias = 4.0;
  spec.seed = 17;
  return generate_gaussian_task(spec);
}

}  // namespace

TEST_CASE("method names round-trip") {
  for (auto m : {Method::vanilla, Method::contextual, Method::batch, Method::domain, Method::knn, Method::central,
                 Method::hidden}) {
    CHECK(parse_method(to_string(m)) == m);
  }
  CHECK_THROWS_KIND(parse_method("svm"), ErrorKind::UnsupportedMethod);
}

TEST_CASE("every method fits and predicts") {
  auto task = biased_task();
  auto split = split_dataset(task.bundle, {42, 300, 300});
  auto vocab_cal = vocab_view(split.calibration, task.unembedding, 40, 1);
  auto vocab_test = vocab_view(split.test, task.unembedding, 40, 1);

  for (auto m : {Method::vanilla, Method::contextual, Method::batch, Method::domain}) {
    FitOptions opts;
    opts.method = m;
    auto p = fit(split.calibration, opts, &task.unembedding);
    CHECK(p.method() == m);
    auto preds = p.predict(split.test);
    CHECK(preds.size() == 300);
    CHECK(p.source_metadata().at("fit_method") == std::string(to_string(m)));
  }
  for (auto m : {Method::knn, Method::central}) {
    FitOptions opts;
    opts.method = m;
    auto p = fit(vocab_cal, opts);
    CHECK(p.m_used() == 48);
    CHECK(p.predict(vocab_test).size() == 300);
  }
  FitOptions hidden;
  auto h = fit(split.calibration, hidden);
  CHECK(h.m_used() == 48);
  CHECK(evaluate(split.test, h).macro_f1 > 0.95);
}

TEST_CASE("calibrations remove a prior bias") {
  auto task = biased_task();
  auto split = split_dataset(task.bundle, {42, 300, 300});
  FitOptions opts;
  opts.method = Method::vanilla;
  double vanilla = evaluate(split.test, fit(split.calibration, opts, &task.unembedding)).macro_f1;
  opts.method = Method::batch;
  double batch = evaluate(split.test, fit(split.calibration, opts, &task.unembedding)).macro_f1;
  opts.method = Method::contextual;
  double contextual = evaluate(split.test, fit(split.calibration, opts, &task.unembedding)).macro_f1;
  CHECK(batch > vanilla);
  CHECK(contextual > vanilla);
}

TEST_CASE("batch calibration binding") {
  auto task = biased_task();
  auto split = split_dataset(task.bundle, {42, 300, 300});
  FitOptions opts;
  opts.method = Method::batch;
  auto p = fit(split.calibration, opts, &task.unembedding);
  CHECK(p.needs_batch());
  CHECK_THROWS_KIND(p.predict_one(split.test.row_as_vector(0)), ErrorKind::UnfittedModel);
  auto bound = p.bind(split.test);
  CHECK_FALSE(bound.needs_batch());
  CHECK(bound.token_model()->calibration.method == AffineMethod::batch);
  CHECK(p.predict(split.test) == bound.predict(split.test));

  opts.batch_source = BatchSource::calibration;
  auto from_cal = fit(split.calibration, opts, &task.unembedding);
  CHECK_FALSE(from_cal.needs_batch());
  CHECK(from_cal.m_used() == 48);
}

TEST_CASE("contextual and domain use their pseudo records") {
  auto task = biased_task();
  auto split = split_dataset(task.bundle, {42, 300, 300});
  FitOptions opts;
  opts.method = Method::contextual;
  opts.per_class = 4;
  auto p = fit(split.calibration, opts, &task.unembedding);
  CHECK(p.m_used() == 12);
  CHECK(p.token_model()->calibration.method == AffineMethod::contextual);

  auto no_pseudo = split.calibration.select(split.calibration.indices_of(RecordKind::real_query));
  opts.method = Method::domain;
  CHECK_THROWS_KIND(fit(no_pseudo, opts, &task.unembedding), ErrorKind::EmptyEstimationSet);
}

TEST_CASE("fit preconditions") {
  auto task = biased_task();
  auto split = split_dataset(task.bundle, {42, 300, 300});
  FitOptions opts;
  opts.method = Method::vanilla;
  CHECK_THROWS_KIND(fit(split.calibration, opts), ErrorKind::InvalidArgument);
  opts.method = Method::central;
  CHECK_THROWS_KIND(fit(split.calibration, opts), ErrorKind::SpaceMismatch);
  opts.method = Method::knn;
  CHECK_THROWS_KIND(fit(split.calibration, opts), ErrorKind::SpaceMismatch);
  opts.method = Method::hidden;
  opts.per_class = 1000;
  CHECK_THROWS_KIND(fit(split.calibration, opts), ErrorKind::InsufficientClass);

  opts.per_class = 16;
  auto p = fit(split.calibration, opts);
  auto vocab_test = vocab_view(split.test, task.unembedding, 40, 1);
  CHECK_THROWS_KIND(p.predict(vocab_test), ErrorKind::DimensionMismatch);
  CHECK_THROWS_KIND(p.predict_one(Vector{1.0}), ErrorKind::DimensionMismatch);
}

TEST_CASE("pair probabilities") {
  auto task = biased_task();
  auto split = split_dataset(task.bundle, {42, 300, 300});
  auto h = split.test.row_as_vector(0);

  FitOptions opts;
  opts.method = Method::vanilla;
  auto v = fit(split.calibration, opts, &task.unembedding);
  auto probs = v.label_probabilities(h);
  auto [a, b] = v.pair_probabilities(h, 0, 2);
  CHECK(a == doctest::Approx(probs[0] / (probs[0] + probs[2])));
  CHECK(a + b == doctest::Approx(1.0));

  opts.method = Method::batch;
  auto bc = fit(split.calibration, opts, &task.unembedding).bind(split.test);
  auto [c, d] = bc.pair_probabilities(h, 1, 2);
  CHECK(c + d == doctest::Approx(1.0));

  CHECK_THROWS_KIND(v.pair_probabilities(h, 1, 1), ErrorKind::MissingLabel);

  auto vocab_cal = vocab_view(split.calibration, task.unembedding, 40, 1);
  opts.method = Method::knn;
  auto knn = fit(vocab_cal, opts);
  CHECK_THROWS_KIND(knn.pair_probabilities(vocab_cal.row_as_vector(0), 0, 1), ErrorKind::UnsupportedMethod);
}
