#include <cmath>

#include "helpers.hpp"
#include "hcal/calibrators.hpp"
#include "hcal/rng.hpp"
#include "oracles.hpp"

using namespace hcal;

namespace {

Vector simplex(SplitMix64& rng, std::size_t n) {
  Vector p(n);
  double s = 0;
  for (auto& v : p) s += (v = -std::log(1.0 - rng.uniform()));
  for (auto& v : p) v /= s;
  return p;
}

}  // namespace

TEST_CASE("estimate_reciprocal") {
  std::vector<Vector> probs = {{0.8, 0.2}};
  auto c = estimate_reciprocal(probs, AffineMethod::contextual);
  CHECK(c.scale[0] == doctest::Approx(1.25));
  CHECK(c.scale[1] == doctest::Approx(5.0));
  CHECK(c.offset == Vector{0.0, 0.0});
  CHECK(c.method == AffineMethod::contextual);
  CHECK(c.m_used == 1);

  std::vector<Vector> uniform = {{0.5, 0.5}, {0.5, 0.5}};
  auto u = estimate_reciprocal(uniform, AffineMethod::domain);
  CHECK(u.scale == Vector{2.0, 2.0});

  SplitMix64 rng(12);
  std::vector<Vector> random;
  for (int i = 0; i < 16; ++i) random.push_back(simplex(rng, 4));
  auto r = estimate_reciprocal(random, AffineMethod::contextual);
  auto mean = oracle::mean(random);
  for (std::size_t j = 0; j < 4; ++j) CHECK(std::abs(r.scale[j] - 1.0 / mean[j]) < 1e-12);
}

TEST_CASE("estimate_reciprocal errors and floor") {
  std::vector<Vector> none;
  CHECK_THROWS_KIND(estimate_reciprocal(none, AffineMethod::contextual), ErrorKind::EmptyEstimationSet);
  std::vector<Vector> probs = {{0.5, 0.5}};
  CHECK_THROWS_KIND(estimate_reciprocal(probs, AffineMethod::batch), ErrorKind::InvalidArgument);
  std::vector<RecordKind> wrong = {RecordKind::pseudo_domain};
  CHECK_THROWS_KIND(estimate_reciprocal(probs, wrong, AffineMethod::contextual), ErrorKind::KindMismatch);
  std::vector<RecordKind> right = {RecordKind::pseudo_empty};
  CHECK_NOTHROW(estimate_reciprocal(probs, right, AffineMethod::contextual));

  std::vector<Vector> degenerate = {{1.0, 0.0}};
  auto c = estimate_reciprocal(degenerate, AffineMethod::domain);
  CHECK(c.scale[1] == doctest::Approx(1.0 / kReciprocalFloor));
}

TEST_CASE("estimate_batch") {
  std::vector<Vector> batch = {{0.6, 0.4}, {0.8, 0.2}};
  auto c = estimate_batch(batch);
  CHECK(c.offset[0] == doctest::Approx(-0.7));
  CHECK(c.offset[1] == doctest::Approx(-0.3));
  CHECK(c.scale == Vector{1.0, 1.0});

  std::vector<Vector> single = {{0.3, 0.7}};
  auto s = estimate_batch(single);
  CHECK(apply_affine(single[0], s).scores == Vector{0.0, 0.0});

  SplitMix64 rng(13);
  std::vector<Vector> random;
  for (int i = 0; i < 64; ++i) random.push_back(simplex(rng, 3));
  auto r = estimate_batch(random);
  auto mean = oracle::kahan_mean(random);
  for (std::size_t j = 0; j < 3; ++j) CHECK(std::abs(r.offset[j] + mean[j]) < 1e-12);

  std::vector<Vector> none;
  CHECK_THROWS_KIND(estimate_batch(none), ErrorKind::EmptyEstimationSet);
}

TEST_CASE("apply_affine") {
  auto id = AffineCalibration::identity(2);
  auto r = apply_affine(Vector{0.3, 0.7}, id);
  CHECK(r.scores == Vector{0.3, 0.7});
  CHECK(r.class_id == 1);

  AffineCalibration flip{{1.0, 1.0}, {-0.6, -0.4}, AffineMethod::batch, 2};
  auto f = apply_affine(Vector{0.55, 0.45}, flip);
  CHECK(f.scores[0] == doctest::Approx(-0.05));
  CHECK(f.scores[1] == doctest::Approx(0.05));
  CHECK(f.class_id == 1);

  std::vector<Vector> pseudo = {{0.8, 0.2}};
  auto con = estimate_reciprocal(pseudo, AffineMethod::contextual);
  auto c = apply_affine(Vector{0.7, 0.3}, con);
  CHECK(c.scores[0] == doctest::Approx(0.875));
  CHECK(c.scores[1] == doctest::Approx(1.5));
  CHECK(c.class_id == 1);

  CHECK_THROWS_KIND(apply_affine(Vector{0.2, 0.3, 0.5}, id), ErrorKind::DimensionMismatch);
}

TEST_CASE("apply_affine argmax invariant under shared positive scaling") {
  SplitMix64 rng(14);
  for (int t = 0; t < 200; ++t) {
    auto p = simplex(rng, 4);
    AffineCalibration c{simplex(rng, 4), Vector(4, 0.0), AffineMethod::contextual, 1};
    for (auto& a : c.scale) a += 0.1;
    auto scaled = c;
    double k = 0.1 + 10.0 * rng.uniform();
    for (auto& a : scaled.scale) a *= k;
    CHECK(apply_affine(p, c).class_id == apply_affine(p, scaled).class_id);
    CHECK(apply_affine(p, AffineCalibration::identity(4)).class_id == oracle::argmax(p));
  }
}
