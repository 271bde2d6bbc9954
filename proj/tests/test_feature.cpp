#include <algorithm>
#include <set>

#include "helpers.hpp"
#include "hcal/rng.hpp"

using namespace hcal;

TEST_CASE("label space validation") {
  CHECK_THROWS_KIND(LabelSpace({"only"}), ErrorKind::InvalidArgument);
  CHECK_THROWS_KIND(LabelSpace({"a", ""}), ErrorKind::InvalidArgument);
  CHECK_THROWS_KIND(LabelSpace({"a", "a"}), ErrorKind::InvalidArgument);
  LabelSpace ls({"neg", "pos"});
  CHECK(ls.size() == 2);
  CHECK(ls.find("pos") == 1);
  CHECK_FALSE(ls.find("neutral").has_value());
}

TEST_CASE("bundle invariants") {
  auto ls = test::labels(2);
  SUBCASE("pseudo records carry no class") {
    CHECK_THROWS_KIND(FeatureBundle(FeatureSpace::hidden, 1, ls, {{0, RecordKind::pseudo_empty, 0}}, {1.0f}),
                      ErrorKind::InvalidArgument);
    CHECK_NOTHROW(FeatureBundle(FeatureSpace::hidden, 1, ls, {{kNoClass, RecordKind::pseudo_empty, 0}}, {1.0f}));
  }
  SUBCASE("class ids in range") {
    CHECK_THROWS_KIND(FeatureBundle(FeatureSpace::hidden, 1, ls, {{2, RecordKind::real_query, 0}}, {1.0f}),
                      ErrorKind::InvalidArgument);
  }
  SUBCASE("value count matches shape") {
    CHECK_THROWS_KIND(FeatureBundle(FeatureSpace::hidden, 2, ls, {{0, RecordKind::real_query, 0}}, {1.0f}),
                      ErrorKind::DimensionMismatch);
  }
  SUBCASE("vocab rows are distributions") {
    CHECK_NOTHROW(FeatureBundle(FeatureSpace::vocab_prob, 2, ls, {{0, RecordKind::real_query, 0}}, {0.25f, 0.75f}));
    CHECK_THROWS_KIND(FeatureBundle(FeatureSpace::vocab_prob, 2, ls, {{0, RecordKind::real_query, 0}}, {0.5f, 0.6f}),
                      ErrorKind::InvalidArgument);
    CHECK_THROWS_KIND(FeatureBundle(FeatureSpace::vocab_prob, 2, ls, {{0, RecordKind::real_query, 0}}, {-0.1f, 1.1f}),
                      ErrorKind::InvalidArgument);
  }
  SUBCASE("non-finite values rejected") {
    CHECK_THROWS_KIND(
        FeatureBundle(FeatureSpace::hidden, 1, ls, {{0, RecordKind::real_query, 0}}, {std::nanf("")}),
        ErrorKind::InvalidArgument);
  }
}

TEST_CASE("rng is reproducible") {
  SplitMix64 a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
  // Reference value of splitmix64 for seed 0.
  SplitMix64 zero(0);
  CHECK(zero.next() == 0xE220A8397B1DCDAFull);
}

namespace {

std::vector<double> first_coords(const FeatureBundle& b) {
  std::vector<double> out;
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (b.record(i).kind == RecordKind::real_query) out.push_back(b.row(i)[0]);
  }
  return out;
}

}  // namespace

TEST_CASE("split_dataset: 1024 records, 512/512") {
  auto b = test::counting(2, 1024);
  auto s = split_dataset(b, {42, 512, 512});
  auto cal = first_coords(s.calibration), tst = first_coords(s.test);
  CHECK(cal.size() == 512);
  CHECK(tst.size() == 512);
  std::set<double> all(cal.begin(), cal.end());
  all.insert(tst.begin(), tst.end());
  CHECK(all.size() == 1024);
  CHECK(s.calibration.metadata().at("split_seed") == "42");
}

TEST_CASE("split_dataset: minimal") {
  auto b = test::counting(2, 2);
  auto s = split_dataset(b, {0, 1, 1});
  CHECK(s.calibration.size() == 1);
  CHECK(s.test.size() == 1);
  std::set<double> all{s.calibration.row(0)[0], s.test.row(0)[0]};
  CHECK(all == std::set<double>{0.0, 1.0});
  // Each side misses one class.
  CHECK(s.warnings.size() == 2);
}

TEST_CASE("split_dataset: deterministic, disjoint, pseudo to calibration") {
  auto base = test::counting(4, 100);
  std::vector<RecordInfo> records = base.records();
  std::vector<float> values = base.values();
  for (int i = 0; i < 3; ++i) {
    records.push_back({kNoClass, RecordKind::pseudo_domain, 0});
    values.insert(values.end(), {-1.0f, -1.0f});
  }
  FeatureBundle b(FeatureSpace::hidden, 2, base.labels(), records, values);
  auto s1 = split_dataset(b, {7, 30, 30});
  auto s2 = split_dataset(b, {7, 30, 30});
  CHECK(s1.calibration == s2.calibration);
  CHECK(s1.test == s2.test);
  CHECK(s1.calibration.indices_of(RecordKind::pseudo_domain).size() == 3);
  CHECK(s1.test.indices_of(RecordKind::pseudo_domain).empty());
  auto cal = first_coords(s1.calibration), tst = first_coords(s1.test);
  for (double v : tst) CHECK(std::find(cal.begin(), cal.end(), v) == cal.end());
  auto other = split_dataset(b, {8, 30, 30});
  CHECK_FALSE(other.test == s1.test);
}

TEST_CASE("split_dataset: sizes") {
  auto b = test::counting(2, 10);
  CHECK_THROWS_KIND(split_dataset(b, {1, 6, 5}), ErrorKind::Size);
  CHECK_THROWS_KIND(split_dataset(b, {1, 0, 5}), ErrorKind::Size);
}

TEST_CASE("sample_per_class") {
  SUBCASE("|Y|=3, 16 per class") {
    auto b = test::counting(3, 90);
    auto s = sample_per_class(b, 16, 1);
    CHECK(s.size() == 48);
    CHECK(s.class_counts() == std::vector<std::size_t>{16, 16, 16});
  }
  SUBCASE("forced selection") {
    auto b = test::counting(2, 2);
    auto s = sample_per_class(b, 1, 9);
    CHECK(s.size() == 2);
  }
  SUBCASE("count audit") {
    auto b = test::counting(2, 20);
    auto s = sample_per_class(b, 5, 3);
    std::size_t zero = 0, one = 0;
    for (const auto& r : s.records()) (r.class_id == 0 ? zero : one)++;
    CHECK(zero == 5);
    CHECK(one == 5);
    CHECK(sample_per_class(b, 5, 3) == s);
  }
  SUBCASE("insufficient class") {
    auto b = test::counting(2, 7);
    CHECK_THROWS_KIND(sample_per_class(b, 4, 0), ErrorKind::InsufficientClass);
  }
}
