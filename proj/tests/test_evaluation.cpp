#include <algorithm>
#include <cmath>

#include "helpers.hpp"
#include "hcal/evaluation.hpp"
#include "hcal/predictor.hpp"
#include "hcal/report_json.hpp"
#include "hcal/rng.hpp"
#include "hcal/synthetic.hpp"
#include "oracles.hpp"

using namespace hcal;

TEST_CASE("score_predictions") {
  SUBCASE("perfect") {
    std::vector<int> t = {0, 1, 2, 1};
    auto r = score_predictions(t, t, 3);
    CHECK(r.macro_f1 == 1.0);
    CHECK(r.accuracy == 1.0);
  }
  SUBCASE("always class 0 on a balanced binary set") {
    std::vector<int> t = {0, 1, 0, 1}, p = {0, 0, 0, 0};
    auto r = score_predictions(t, p, 2);
    CHECK(r.accuracy == 0.5);
    CHECK(r.per_class_f1[0] == doctest::Approx(2.0 / 3.0));
    CHECK(r.per_class_f1[1] == 0.0);
    CHECK(r.macro_f1 == doctest::Approx(1.0 / 3.0));
    CHECK(r.per_class_precision[1] == 0.0);  // 0/0
  }
  SUBCASE("random three-class logs vs confusion oracle") {
    SplitMix64 rng(61);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<int> t(150), p(150);
      for (std::size_t i = 0; i < 150; ++i) {
        t[i] = static_cast<int>(rng.below(3));
        p[i] = static_cast<int>(rng.below(3));
      }
      auto r = score_predictions(t, p, 3);
      auto ref = oracle::score(t, p, 3);
      CHECK(std::abs(r.macro_f1 - ref.macro_f1) < 1e-12);
      CHECK(std::abs(r.accuracy - ref.accuracy) < 1e-12);
      std::size_t trace = 0;
      for (std::size_t c = 0; c < 3; ++c) {
        trace += r.confusion[c][c];
        std::size_t row = 0;
        for (auto v : r.confusion[c]) row += v;
        CHECK(row == static_cast<std::size_t>(std::count(t.begin(), t.end(), static_cast<int>(c))));
        for (std::size_t o = 0; o < 3; ++o) CHECK(r.confusion[c][o] == static_cast<std::size_t>(ref.confusion[c][o]));
      }
      CHECK(r.accuracy == static_cast<double>(trace) / 150.0);
    }
  }
  SUBCASE("symmetric confusion on a balanced set gives macro F1 = accuracy") {
    // confusion [[8, 2], [2, 8]]
    std::vector<int> t, p;
    for (int i = 0; i < 10; ++i) {
      t.push_back(0);
      p.push_back(i < 8 ? 0 : 1);
      t.push_back(1);
      p.push_back(i < 8 ? 1 : 0);
    }
    auto r = score_predictions(t, p, 2);
    CHECK(r.macro_f1 == doctest::Approx(r.accuracy));
  }
  std::vector<int> a = {0, 1}, b = {0};
  CHECK_THROWS_KIND(score_predictions(a, b, 2), ErrorKind::DimensionMismatch);
}

TEST_CASE("evaluate on a fitted predictor") {
  SyntheticSpec spec;
  spec.num_classes = 3;
  spec.dim = 8;
  spec.inter_centroid_distance = 2.5;
  spec.records_per_class = 100;
  auto task = generate_gaussian_task(spec);
  auto split = split_dataset(task.bundle, {42, 150, 150});
  FitOptions opts;
  opts.per_class = 16;
  opts.seed = 5;
  auto p = fit(split.calibration, opts);
  auto r = evaluate(split.test, p);
  CHECK(r.method == "hiddc");
  CHECK(r.total == 150);
  CHECK(r.m_used == 48);
  CHECK(r.seed == 5);

  // Order invariance.
  std::vector<std::size_t> order(split.test.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = order.size() - 1 - i;
  auto reversed = evaluate(split.test.select(order), p);
  CHECK(reversed.macro_f1 == r.macro_f1);
  CHECK(reversed.confusion == r.confusion);

  // Transfer to a bundle listing the labels in another order.
  std::vector<std::string> names = {"label_2", "label_0", "label_1"};
  std::vector<RecordInfo> records = split.test.records();
  for (auto& rec : records) rec.class_id = (rec.class_id + 1) % 3;
  FeatureBundle relabelled(FeatureSpace::hidden, split.test.dimension(), LabelSpace(names), records,
                           split.test.values());
  CHECK_THROWS_KIND(evaluate(relabelled, p), ErrorKind::LabelMismatch);
  auto moved = evaluate_transfer(relabelled, p);
  CHECK(moved.accuracy == r.accuracy);
  CHECK(moved.macro_f1 == doctest::Approx(r.macro_f1));

  FeatureBundle foreign(FeatureSpace::hidden, split.test.dimension(), LabelSpace({"x", "y", "z"}), records,
                        split.test.values());
  CHECK_THROWS_KIND(evaluate_transfer(foreign, p), ErrorKind::LabelMismatch);
}

TEST_CASE("summaries and report JSON") {
  EvaluationReport a, b, c;
  a.method = b.method = "hiddc";
  c.method = "vanilla";
  a.macro_f1 = 0.5;
  b.macro_f1 = 0.7;
  c.macro_f1 = 0.4;
  a.accuracy = b.accuracy = c.accuracy = 0.6;
  std::vector<EvaluationReport> all = {a, c, b};
  auto s = summarize(all);
  REQUIRE(s.size() == 2);
  CHECK(s[0].method == "hiddc");
  CHECK(s[0].trials == 2);
  CHECK(s[0].macro_f1_mean == doctest::Approx(0.6));
  CHECK(s[0].macro_f1_std == doctest::Approx(std::sqrt(0.02)));
  CHECK(s[1].macro_f1_std == 0.0);

  std::vector<int> t = {0, 1, 1}, p = {0, 1, 0};
  auto r = score_predictions(t, p, 2);
  r.method = "knn";
  r.labels = {"a", "b"};
  auto back = evaluation_report_from_json(to_json(r));
  CHECK(back.macro_f1 == r.macro_f1);
  CHECK(back.confusion == r.confusion);
  CHECK(back.method == "knn");
  CHECK_THROWS_KIND(evaluation_report_from_json(nlohmann::json::object()), ErrorKind::Format);
}
