#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hcal {

using Vector = std::vector<double>;
using Metadata = std::map<std::string, std::string>;

enum class FeatureSpace { hidden, vocab_prob };
enum class RecordKind { real_query, pseudo_empty, pseudo_domain };

std::string_view to_string(FeatureSpace space) noexcept;
std::string_view to_string(RecordKind kind) noexcept;
FeatureSpace parse_feature_space(std::string_view text);
RecordKind parse_record_kind(std::string_view text);

/// Class id carried by pseudo records, which have no ground truth.
inline constexpr int kNoClass = -1;

/// Ordered, unique label names. A label's position is its class id.
class LabelSpace {
 public:
  explicit LabelSpace(std::vector<std::string> labels);

  std::size_t size() const noexcept { return labels_.size(); }
  const std::string& name(int class_id) const { return labels_.at(static_cast<std::size_t>(class_id)); }
  const std::vector<std::string>& names() const noexcept { return labels_; }
  std::optional<int> find(std::string_view name) const noexcept;

  bool operator==(const LabelSpace&) const = default;

 private:
  std::vector<std::string> labels_;
};

struct RecordInfo {
  int class_id = kNoClass;
  RecordKind kind = RecordKind::real_query;
  int demo_count = 0;

  bool operator==(const RecordInfo&) const = default;
};

/// A labeled matrix of feature vectors. Rows are stored as f32, matching the
/// on-disk layout; arithmetic on them is done in double.
class FeatureBundle {
 public:
  FeatureBundle(FeatureSpace space, std::size_t dimension, LabelSpace labels,
                std::vector<RecordInfo> records, std::vector<float> values,
                Metadata metadata = {});

  /// Convenience constructor from double rows (rounded to f32).
  static FeatureBundle from_rows(FeatureSpace space, LabelSpace labels,
                                 const std::vector<Vector>& rows,
                                 std::vector<RecordInfo> records,
                                 Metadata metadata = {});

  FeatureSpace space() const noexcept { return space_; }
  std::size_t dimension() const noexcept { return dimension_; }
  const LabelSpace& labels() const noexcept { return labels_; }
  std::size_t num_classes() const noexcept { return labels_.size(); }
  std::size_t size() const noexcept { return records_.size(); }
  const std::vector<RecordInfo>& records() const noexcept { return records_; }
  const RecordInfo& record(std::size_t i) const { return records_.at(i); }
  std::span<const float> row(std::size_t i) const;
  Vector row_as_vector(std::size_t i) const;
  const std::vector<float>& values() const noexcept { return values_; }
  const Metadata& metadata() const noexcept { return metadata_; }

  std::vector<std::size_t> indices_of(RecordKind kind) const;
  /// Real-query counts per class.
  std::vector<std::size_t> class_counts() const;

  /// New bundle holding the given rows, in the given order.
  FeatureBundle select(std::span<const std::size_t> indices) const;
  FeatureBundle with_metadata(Metadata metadata) const;

  bool operator==(const FeatureBundle&) const = default;

 private:
  FeatureSpace space_;
  std::size_t dimension_;
  LabelSpace labels_;
  std::vector<RecordInfo> records_;
  std::vector<float> values_;
  Metadata metadata_;
};

struct SplitSpec {
  std::uint64_t seed = 42;
  std::size_t calibration_size = 0;
  std::size_t test_size = 0;
};

struct SplitResult {
  FeatureBundle calibration;
  FeatureBundle test;
  /// Non-fatal findings, e.g. a class absent from one side of the split.
  std::vector<std::string> warnings;
};

/// Shuffles real queries with SplitMix64-seeded Fisher-Yates, takes the head
/// for calibration and the tail for test. Pseudo records go to calibration.
SplitResult split_dataset(const FeatureBundle& bundle, const SplitSpec& spec);

/// Exactly `per_class` real queries of every class, chosen in seeded
/// shuffle order.
FeatureBundle sample_per_class(const FeatureBundle& bundle, std::size_t per_class,
                               std::uint64_t seed);

}  // namespace hcal
