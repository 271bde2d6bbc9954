#include "hcal/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "hcal/crc32c.hpp"
#include "hcal/error.hpp"
#include "json.hpp"

namespace hcal {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kManifest = "manifest.json";
constexpr const char* kFeatures = "features.bin";
constexpr const char* kModel = "model.json";
constexpr const char* kVectors = "vectors.bin";

void put_u32(std::vector<std::byte>& out, std::uint32_t v) {
  for (int shift = 0; shift < 32; shift += 8) out.push_back(static_cast<std::byte>((v >> shift) & 0xFFU));
}

std::uint32_t get_u32(std::span<const std::byte> bytes, std::size_t offset) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes[offset + static_cast<std::size_t>(i)]) << (8 * i);
  return v;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::span<const std::byte> as_bytes(const std::string& s) {
  return {reinterpret_cast<const std::byte*>(s.data()), s.size()};
}

json parse_json(const fs::path& path) {
  const auto bytes = read_file(path);
  try {
    return json::parse(reinterpret_cast<const char*>(bytes.data()),
                       reinterpret_cast<const char*>(bytes.data()) + bytes.size());
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Format, path.filename().string() + " at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

template <typename F>
auto with_format_errors(const std::string& what, F&& body) {
  try {
    return body();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Format, what + ": " + e.what());
  } catch (const Error& e) {
    if (e.category() == ErrorCategory::Format) throw;
    throw Error(ErrorKind::Format, what + ": invalid contents: " + e.what());
  }
}

void check_schema(const json& j, const std::string& what) {
  const int version = j.at("schema_version").get<int>();
  if (version != kSchemaVersion) {
    throw Error(ErrorKind::Format, what + ": unsupported schema_version " + std::to_string(version));
  }
}

std::vector<float> flatten(const std::vector<Vector>& rows) {
  std::vector<float> out;
  for (const auto& r : rows) {
    for (double v : r) out.push_back(static_cast<float>(v));
  }
  return out;
}

std::vector<Vector> unflatten(const DecodedMatrix& m) {
  std::vector<Vector> rows(m.rows);
  for (std::size_t i = 0; i < m.rows; ++i) {
    rows[i].assign(m.values.begin() + static_cast<std::ptrdiff_t>(i * m.dimension),
                   m.values.begin() + static_cast<std::ptrdiff_t>((i + 1) * m.dimension));
  }
  return rows;
}

}  // namespace

std::vector<std::byte> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  in.seekg(0, std::ios::end);
  const auto size = static_cast<std::size_t>(in.tellg());
  in.seekg(0, std::ios::beg);
  std::vector<std::byte> bytes(size);
  if (size > 0 && !in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(size))) {
    throw Error(ErrorKind::Io, "cannot read " + path.string());
  }
  return bytes;
}

void write_file(const fs::path& path, std::span<const std::byte> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot create " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
}

std::vector<std::byte> encode_matrix(std::span<const float> values, std::size_t rows, std::size_t dimension) {
  if (values.size() != rows * dimension) throw Error(ErrorKind::DimensionMismatch, "matrix shape does not match data");
  if (rows > UINT32_MAX || dimension > UINT32_MAX) throw Error(ErrorKind::Format, "matrix too large for u32 header");
  std::vector<std::byte> out;
  out.reserve(kHeaderBytes + values.size() * 4);
  for (char c : kMagic) out.push_back(static_cast<std::byte>(c));
  put_u32(out, static_cast<std::uint32_t>(rows));
  put_u32(out, static_cast<std::uint32_t>(dimension));
  for (float v : values) put_u32(out, std::bit_cast<std::uint32_t>(v));
  return out;
}

DecodedMatrix decode_matrix(std::span<const std::byte> bytes, const std::string& what) {
  if (bytes.size() < kHeaderBytes) {
    throw Error(ErrorKind::Format, what + " truncated in header: " + std::to_string(bytes.size()) + " of " +
                                       std::to_string(kHeaderBytes) + " bytes");
  }
  if (std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
    throw Error(ErrorKind::Format, what + ": bad magic at byte 0");
  }
  DecodedMatrix m;
  m.rows = get_u32(bytes, sizeof(kMagic));
  m.dimension = get_u32(bytes, sizeof(kMagic) + 4);
  const auto expected = kHeaderBytes + m.rows * m.dimension * 4;
  if (bytes.size() < expected) {
    throw Error(ErrorKind::Format, what + " truncated in payload at byte " + std::to_string(bytes.size()) +
                                       ": header declares " + std::to_string(m.rows) + " x " +
                                       std::to_string(m.dimension) + " values ending at byte " +
                                       std::to_string(expected));
  }
  if (bytes.size() > expected) {
    throw Error(ErrorKind::Format, what + ": " + std::to_string(bytes.size() - expected) +
                                       " trailing bytes after byte " + std::to_string(expected));
  }
  m.values.resize(m.rows * m.dimension);
  for (std::size_t i = 0; i < m.values.size(); ++i) {
    m.values[i] = std::bit_cast<float>(get_u32(bytes, kHeaderBytes + 4 * i));
  }
  m.payload_crc = payload_crc(bytes);
  return m;
}

std::uint32_t payload_crc(std::span<const std::byte> encoded) {
  if (encoded.size() < kHeaderBytes) return crc32c({});
  return crc32c(encoded.subspan(kHeaderBytes));
}

void write_bundle(const FeatureBundle& bundle, const fs::path& dir) {
  fs::create_directories(dir);
  const auto payload = encode_matrix(bundle.values(), bundle.size(), bundle.dimension());

  json records = json::array();
  for (const auto& r : bundle.records()) {
    records.push_back({{"class_id", r.class_id}, {"kind", to_string(r.kind)}, {"k", r.demo_count}});
  }
  json manifest = {
      {"schema_version", kSchemaVersion},
      {"space", to_string(bundle.space())},
      {"dimension", bundle.dimension()},
      {"labels", bundle.labels().names()},
      {"records", std::move(records)},
      {"record_count", bundle.size()},
      {"metadata", bundle.metadata()},
      {"payload_crc32c", payload_crc(payload)},
  };
  write_file(dir / kFeatures, payload);
  write_file(dir / kManifest, as_bytes(dump(manifest)));
}

FeatureBundle read_bundle(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw Error(ErrorKind::Io, dir.string() + " is not a bundle directory");
  if (!fs::exists(dir / kManifest)) throw Error(ErrorKind::Format, "bundle is missing manifest.json");
  if (!fs::exists(dir / kFeatures)) throw Error(ErrorKind::Format, "bundle is missing features.bin");
  const auto manifest = parse_json(dir / kManifest);
  const auto matrix = decode_matrix(read_file(dir / kFeatures));

  return with_format_errors(kManifest, [&] {
    check_schema(manifest, kManifest);
    const auto stored_crc = manifest.at("payload_crc32c").get<std::uint32_t>();
    if (stored_crc != matrix.payload_crc) {
      throw Error(ErrorKind::Checksum, "features.bin payload CRC32C is " + std::to_string(matrix.payload_crc) +
                                           ", manifest records " + std::to_string(stored_crc));
    }
    const auto dimension = manifest.at("dimension").get<std::size_t>();
    const auto& recs = manifest.at("records");
    if (dimension != matrix.dimension) {
      throw Error(ErrorKind::Format, "manifest dimension " + std::to_string(dimension) +
                                         " disagrees with features.bin (" + std::to_string(matrix.dimension) + ")");
    }
    if (recs.size() != matrix.rows || manifest.at("record_count").get<std::size_t>() != matrix.rows) {
      throw Error(ErrorKind::Format, "manifest lists " + std::to_string(recs.size()) +
                                         " records, features.bin holds " + std::to_string(matrix.rows));
    }
    std::vector<RecordInfo> records;
    records.reserve(recs.size());
    for (const auto& r : recs) {
      records.push_back({r.at("class_id").get<int>(), parse_record_kind(r.at("kind").get<std::string>()),
                         r.at("k").get<int>()});
    }
    return FeatureBundle(parse_feature_space(manifest.at("space").get<std::string>()), dimension,
                         LabelSpace(manifest.at("labels").get<std::vector<std::string>>()), std::move(records),
                         matrix.values, manifest.at("metadata").get<Metadata>());
  });
}

void write_model(const Predictor& predictor, const fs::path& dir) {
  fs::create_directories(dir);
  json model = {
      {"schema_version", kSchemaVersion},
      {"method", to_string(predictor.method())},
      {"labels", predictor.labels().names()},
      {"space", to_string(predictor.space())},
      {"dimension", predictor.dimension()},
      {"m_used", predictor.m_used()},
      {"source_metadata", predictor.source_metadata()},
  };

  std::vector<Vector> vectors;
  std::string role;
  if (const auto* t = predictor.token_model()) {
    vectors = t->unembedding.vectors();
    role = "unembedding";
    model["calibration"] = {
        {"method", to_string(t->calibration.method)}, {"A", t->calibration.scale},
        {"B", t->calibration.offset},                 {"m_used", t->calibration.m_used},
        {"batch_source", to_string(t->batch_source)}, {"awaiting_batch", t->awaiting_batch},
    };
  } else if (const auto* c = predictor.centroid_model()) {
    vectors = c->centroids;
    role = "centroids";
    model["centroid"] = {{"similarity", to_string(c->similarity)}, {"per_class_counts", c->per_class_counts}};
  } else if (const auto* a = predictor.anchor_set()) {
    vectors = a->anchors;
    role = "anchors";
    model["anchors"] = {{"k_neighbors", a->k_neighbors}, {"class_ids", a->class_ids}};
  }

  const auto payload = encode_matrix(flatten(vectors), vectors.size(), predictor.dimension());
  model["vectors"] = {{"file", kVectors}, {"role", role}, {"rows", vectors.size()}, {"crc32c", payload_crc(payload)}};
  write_file(dir / kVectors, payload);
  write_file(dir / kModel, as_bytes(dump(model)));
}

Predictor read_model(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw Error(ErrorKind::Io, dir.string() + " is not a model directory");
  if (!fs::exists(dir / kModel)) throw Error(ErrorKind::Format, "model artifact is missing model.json");
  const auto model = parse_json(dir / kModel);

  return with_format_errors(kModel, [&] {
    check_schema(model, kModel);
    const auto method = parse_method(model.at("method").get<std::string>());
    const auto& vec_info = model.at("vectors");
    const auto file = vec_info.at("file").get<std::string>();
    if (file.find('/') != std::string::npos || file.find("..") != std::string::npos) {
      throw Error(ErrorKind::Format, "vectors file must be a plain name inside the artifact");
    }
    if (!fs::exists(dir / file)) throw Error(ErrorKind::Format, "model artifact is missing " + file);
    const auto matrix = decode_matrix(read_file(dir / file), file);
    if (matrix.payload_crc != vec_info.at("crc32c").get<std::uint32_t>()) {
      throw Error(ErrorKind::Checksum, file + " payload CRC32C does not match model.json");
    }
    const auto dimension = model.at("dimension").get<std::size_t>();
    if (matrix.dimension != dimension) throw Error(ErrorKind::Format, file + " dimension disagrees with model.json");
    auto vectors = unflatten(matrix);

    LabelSpace labels(model.at("labels").get<std::vector<std::string>>());
    const auto space = parse_feature_space(model.at("space").get<std::string>());
    const auto m_used = model.at("m_used").get<std::size_t>();
    auto source = model.at("source_metadata").get<Metadata>();

    MethodState state = [&]() -> MethodState {
      if (is_token_method(method)) {
        const auto& cal = model.at("calibration");
        AffineCalibration affine{cal.at("A").get<Vector>(), cal.at("B").get<Vector>(),
                                 parse_affine_method(cal.at("method").get<std::string>()),
                                 cal.at("m_used").get<std::size_t>()};
        return TokenModel{UnembeddingSet(std::move(vectors)), std::move(affine),
                          parse_batch_source(cal.at("batch_source").get<std::string>()),
                          cal.at("awaiting_batch").get<bool>()};
      }
      if (is_centroid_method(method)) {
        const auto& c = model.at("centroid");
        return CentroidModel{std::move(vectors), parse_similarity(c.at("similarity").get<std::string>()),
                             c.at("per_class_counts").get<std::vector<std::size_t>>(), source};
      }
      const auto& a = model.at("anchors");
      auto ids = a.at("class_ids").get<std::vector<int>>();
      if (ids.size() != vectors.size()) throw Error(ErrorKind::Format, "anchor class ids do not match vectors.bin");
      for (int id : ids) {
        if (id < 0 || static_cast<std::size_t>(id) >= labels.size()) {
          throw Error(ErrorKind::Format, "anchor class id out of range");
        }
      }
      return AnchorSet{std::move(vectors), std::move(ids), labels.size(), a.at("k_neighbors").get<std::size_t>()};
    }();
    return Predictor(method, std::move(labels), space, dimension, std::move(state), m_used, std::move(source));
  });
}

}  // namespace hcal
