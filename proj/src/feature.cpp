#include "hcal/feature.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "hcal/error.hpp"
#include "hcal/rng.hpp"

namespace hcal {

namespace {

constexpr double kSimplexTolerance = 1e-5;

}  // namespace

std::string_view to_string(FeatureSpace space) noexcept {
  return space == FeatureSpace::hidden ? "hidden" : "vocab_prob";
}

std::string_view to_string(RecordKind kind) noexcept {
  switch (kind) {
    case RecordKind::real_query: return "real_query";
    case RecordKind::pseudo_empty: return "pseudo_empty";
    case RecordKind::pseudo_domain: return "pseudo_domain";
  }
  return "real_query";
}

FeatureSpace parse_feature_space(std::string_view text) {
  if (text == "hidden") return FeatureSpace::hidden;
  if (text == "vocab_prob") return FeatureSpace::vocab_prob;
  throw Error(ErrorKind::Format, "unknown feature space '" + std::string(text) + "'");
}

RecordKind parse_record_kind(std::string_view text) {
  if (text == "real_query") return RecordKind::real_query;
  if (text == "pseudo_empty") return RecordKind::pseudo_empty;
  if (text == "pseudo_domain") return RecordKind::pseudo_domain;
  throw Error(ErrorKind::Format, "unknown record kind '" + std::string(text) + "'");
}

LabelSpace::LabelSpace(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.size() < 2) {
    throw Error(ErrorKind::InvalidArgument, "a label space needs at least 2 labels");
  }
  std::set<std::string_view> seen;
  for (const auto& label : labels_) {
    if (label.empty()) throw Error(ErrorKind::InvalidArgument, "empty label name");
    if (!seen.insert(label).second) {
      throw Error(ErrorKind::InvalidArgument, "duplicate label '" + label + "'");
    }
  }
}

std::optional<int> LabelSpace::find(std::string_view name) const noexcept {
  const auto it = std::find(labels_.begin(), labels_.end(), name);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<int>(it - labels_.begin());
}

FeatureBundle::FeatureBundle(FeatureSpace space, std::size_t dimension, LabelSpace labels,
                             std::vector<RecordInfo> records, std::vector<float> values,
                             Metadata metadata)
    : space_(space),
      dimension_(dimension),
      labels_(std::move(labels)),
      records_(std::move(records)),
      values_(std::move(values)),
      metadata_(std::move(metadata)) {
  if (dimension_ == 0) throw Error(ErrorKind::InvalidArgument, "bundle dimension must be positive");
  if (values_.size() != records_.size() * dimension_) {
    throw Error(ErrorKind::DimensionMismatch,
                "expected " + std::to_string(records_.size() * dimension_) + " values, got " +
                    std::to_string(values_.size()));
  }
  const auto num_classes = static_cast<int>(labels_.size());
  for (std::size_t i = 0; i < records_.size(); ++i) {
    const auto& rec = records_[i];
    const auto where = "record " + std::to_string(i);
    if (rec.kind == RecordKind::real_query) {
      if (rec.class_id < 0 || rec.class_id >= num_classes) {
        throw Error(ErrorKind::InvalidArgument, where + ": class_id out of range");
      }
    } else if (rec.class_id != kNoClass) {
      throw Error(ErrorKind::InvalidArgument, where + ": pseudo records must carry class_id -1");
    }
    if (rec.demo_count < 0) throw Error(ErrorKind::InvalidArgument, where + ": negative demo count");

    const auto r = row(i);
    double sum = 0.0;
    for (float v : r) {
      if (!std::isfinite(v)) throw Error(ErrorKind::InvalidArgument, where + ": non-finite value");
      if (space_ == FeatureSpace::vocab_prob && v < 0.0f) {
        throw Error(ErrorKind::InvalidArgument, where + ": negative probability");
      }
      sum += v;
    }
    if (space_ == FeatureSpace::vocab_prob && std::abs(sum - 1.0) > kSimplexTolerance) {
      throw Error(ErrorKind::InvalidArgument, where + ": probabilities sum to " + std::to_string(sum));
    }
  }
}

FeatureBundle FeatureBundle::from_rows(FeatureSpace space, LabelSpace labels,
                                       const std::vector<Vector>& rows,
                                       std::vector<RecordInfo> records, Metadata metadata) {
  if (rows.empty()) throw Error(ErrorKind::InvalidArgument, "no rows");
  const auto dim = rows.front().size();
  std::vector<float> values;
  values.reserve(rows.size() * dim);
  for (const auto& r : rows) {
    if (r.size() != dim) throw Error(ErrorKind::DimensionMismatch, "ragged rows");
    for (double v : r) values.push_back(static_cast<float>(v));
  }
  return FeatureBundle(space, dim, std::move(labels), std::move(records), std::move(values),
                       std::move(metadata));
}

std::span<const float> FeatureBundle::row(std::size_t i) const {
  if (i >= records_.size()) throw Error(ErrorKind::InvalidArgument, "row index out of range");
  return {values_.data() + i * dimension_, dimension_};
}

Vector FeatureBundle::row_as_vector(std::size_t i) const {
  const auto r = row(i);
  return Vector(r.begin(), r.end());
}

std::vector<std::size_t> FeatureBundle::indices_of(RecordKind kind) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < records_.size(); ++i) {
    if (records_[i].kind == kind) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> FeatureBundle::class_counts() const {
  std::vector<std::size_t> counts(labels_.size(), 0);
  for (const auto& rec : records_) {
    if (rec.kind == RecordKind::real_query) ++counts[static_cast<std::size_t>(rec.class_id)];
  }
  return counts;
}

FeatureBundle FeatureBundle::select(std::span<const std::size_t> indices) const {
  std::vector<RecordInfo> records;
  std::vector<float> values;
  records.reserve(indices.size());
  values.reserve(indices.size() * dimension_);
  for (auto i : indices) {
    const auto r = row(i);
    records.push_back(records_[i]);
    values.insert(values.end(), r.begin(), r.end());
  }
  return FeatureBundle(space_, dimension_, labels_, std::move(records), std::move(values), metadata_);
}

FeatureBundle FeatureBundle::with_metadata(Metadata metadata) const {
  FeatureBundle copy = *this;
  copy.metadata_ = std::move(metadata);
  return copy;
}

SplitResult split_dataset(const FeatureBundle& bundle, const SplitSpec& spec) {
  auto real = bundle.indices_of(RecordKind::real_query);
  if (spec.calibration_size == 0 || spec.test_size == 0) {
    throw Error(ErrorKind::Size, "calibration and test sizes must be positive");
  }
  if (spec.calibration_size + spec.test_size > real.size()) {
    throw Error(ErrorKind::Size, "requested " + std::to_string(spec.calibration_size) + "+" +
                                     std::to_string(spec.test_size) + " records but only " +
                                     std::to_string(real.size()) + " real queries exist");
  }

  SplitMix64 rng(spec.seed);
  shuffle(std::span<std::size_t>(real), rng);

  std::vector<std::size_t> calib(real.begin(),
                                 real.begin() + static_cast<std::ptrdiff_t>(spec.calibration_size));
  std::vector<std::size_t> test(real.end() - static_cast<std::ptrdiff_t>(spec.test_size), real.end());
  for (auto kind : {RecordKind::pseudo_empty, RecordKind::pseudo_domain}) {
    const auto pseudo = bundle.indices_of(kind);
    calib.insert(calib.end(), pseudo.begin(), pseudo.end());
  }

  auto meta = bundle.metadata();
  meta["split_seed"] = std::to_string(spec.seed);
  SplitResult result{bundle.select(calib).with_metadata(meta), bundle.select(test).with_metadata(meta),
                     {}};

  const auto cal_counts = result.calibration.class_counts();
  const auto test_counts = result.test.class_counts();
  for (std::size_t c = 0; c < cal_counts.size(); ++c) {
    const auto& name = bundle.labels().name(static_cast<int>(c));
    if (cal_counts[c] == 0) result.warnings.push_back("EmptyClassError: calibration split has no '" + name + "' records");
    if (test_counts[c] == 0) result.warnings.push_back("EmptyClassError: test split has no '" + name + "' records");
  }
  return result;
}

FeatureBundle sample_per_class(const FeatureBundle& bundle, std::size_t per_class,
                               std::uint64_t seed) {
  if (per_class == 0) throw Error(ErrorKind::InvalidArgument, "per_class must be positive");
  const auto counts = bundle.class_counts();
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] < per_class) {
      throw Error(ErrorKind::InsufficientClass,
                  "class '" + bundle.labels().name(static_cast<int>(c)) + "' has " +
                      std::to_string(counts[c]) + " records, need " + std::to_string(per_class));
    }
  }

  auto real = bundle.indices_of(RecordKind::real_query);
  SplitMix64 rng(seed);
  shuffle(std::span<std::size_t>(real), rng);

  std::vector<std::size_t> taken_per_class(counts.size(), 0);
  std::vector<std::size_t> chosen;
  chosen.reserve(per_class * counts.size());
  for (auto i : real) {
    auto& taken = taken_per_class[static_cast<std::size_t>(bundle.record(i).class_id)];
    if (taken < per_class) {
      ++taken;
      chosen.push_back(i);
    }
  }
  return bundle.select(chosen);
}

}  // namespace hcal
