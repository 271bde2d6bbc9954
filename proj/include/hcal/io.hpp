#pragma once

// On-disk formats.
//
// A bundle is a directory holding
//   manifest.json  schema_version (1), space, dimension, labels, one
//                  {class_id, kind, k} entry per record, a free-form string
//                  metadata map, record_count and payload_crc32c.
//   features.bin   "HCAL1\0", u32 record count, u32 dimension, then the
//                  row-major f32 values. Everything little-endian. The CRC
//                  covers the f32 section only.
//
// A model artifact is a directory holding model.json and, for methods that
// carry vectors (un-embeddings, centroids, anchors), vectors.bin in the same
// binary layout as features.bin.

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "hcal/feature.hpp"
#include "hcal/predictor.hpp"

namespace hcal {

inline constexpr int kSchemaVersion = 1;
inline constexpr char kMagic[6] = {'H', 'C', 'A', 'L', '1', '\0'};
inline constexpr std::size_t kHeaderBytes = sizeof(kMagic) + 2 * sizeof(std::uint32_t);

/// Encodes rows into the features.bin layout.
std::vector<std::byte> encode_matrix(std::span<const float> values, std::size_t rows, std::size_t dimension);

struct DecodedMatrix {
  std::size_t rows = 0;
  std::size_t dimension = 0;
  std::vector<float> values;
  std::uint32_t payload_crc = 0;
};

/// Throws FormatError (with byte offsets) on bad magic or truncation.
DecodedMatrix decode_matrix(std::span<const std::byte> bytes, const std::string& what = "features.bin");

/// CRC-32C of the f32 section of an encoded matrix.
std::uint32_t payload_crc(std::span<const std::byte> encoded);

void write_bundle(const FeatureBundle& bundle, const std::filesystem::path& dir);
FeatureBundle read_bundle(const std::filesystem::path& dir);

void write_model(const Predictor& predictor, const std::filesystem::path& dir);
Predictor read_model(const std::filesystem::path& dir);

std::vector<std::byte> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::byte> bytes);

}  // namespace hcal
