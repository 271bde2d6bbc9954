#include "hcal/hcal.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <optional>
#include <string>

#include "hcal/analysis.hpp"
#include "hcal/error.hpp"
#include "hcal/evaluation.hpp"
#include "hcal/io.hpp"
#include "hcal/pca.hpp"
#include "hcal/predictor.hpp"
#include "hcal/report_json.hpp"
#include "hcal/synthetic.hpp"

struct hcal_bundle {
  hcal::FeatureBundle value;
};

struct hcal_model {
  hcal::Predictor value;
};

namespace {

using nlohmann::json;

thread_local std::string g_last_error;

hcal_status fail(hcal_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

template <typename F>
hcal_status guarded(F&& body) {
  g_last_error.clear();
  try {
    body();
    return HCAL_OK;
  } catch (const hcal::Error& e) {
    return fail(static_cast<hcal_status>(e.category()), e.what());
  } catch (const json::exception& e) {
    return fail(HCAL_ERR_FORMAT, std::string("FormatError: ") + e.what());
  } catch (const std::bad_alloc&) {
    return fail(HCAL_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(HCAL_ERR_INTERNAL, e.what());
  }
}

void require(const void* ptr, const char* name) {
  if (ptr == nullptr) throw hcal::Error(hcal::ErrorKind::InvalidArgument, std::string(name) + " is null");
}

char* duplicate(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void emit(const json& j, char** out) {
  require(out, "out_json");
  *out = duplicate(j.dump(2));
}

hcal::SyntheticSpec to_spec(const hcal_synth_spec& s) {
  hcal::SyntheticSpec spec;
  spec.num_classes = s.num_classes;
  spec.dim = s.dim;
  spec.inter_centroid_distance = s.inter_centroid_distance;
  spec.intra_class_std = s.intra_class_std;
  spec.records_per_class = s.records_per_class;
  spec.misalignment_deg = s.misalignment_deg;
  spec.seed = s.seed;
  spec.mean_norm = s.mean_norm;
  spec.prior_bias = s.prior_bias;
  spec.pseudo_records = s.pseudo_records;
  return spec;
}

hcal::Predictor unembedding_model(const hcal::SyntheticTask& task) {
  const auto& b = task.bundle;
  hcal::TokenModel token{task.unembedding, hcal::AffineCalibration::identity(b.num_classes()),
                         hcal::BatchSource::test, false};
  auto meta = b.metadata();
  meta["role"] = "unembedding";
  return hcal::Predictor(hcal::Method::vanilla, b.labels(), b.space(), b.dimension(), std::move(token), 0,
                         std::move(meta));
}

void emit_task(hcal::SyntheticTask task, hcal_bundle** bundle_out, hcal_model** unembedding_out) {
  require(bundle_out, "bundle_out");
  require(unembedding_out, "unembedding_out");
  auto model = std::make_unique<hcal_model>(hcal_model{unembedding_model(task)});
  *bundle_out = new hcal_bundle{std::move(task.bundle)};
  *unembedding_out = model.release();
}

const hcal::UnembeddingSet& unembedding_of(const hcal_model* model) {
  require(model, "unembedding");
  const auto* token = model->value.token_model();
  if (token == nullptr) {
    throw hcal::Error(hcal::ErrorKind::InvalidArgument, "un-embedding source must be a token-method model");
  }
  return token->unembedding;
}

}  // namespace

extern "C" {

const char* hcal_version(void) { return "1.0.0"; }

const char* hcal_last_error(void) { return g_last_error.c_str(); }

void hcal_string_free(char* str) { std::free(str); }

hcal_status hcal_bundle_read(const char* dir, hcal_bundle** out) {
  return guarded([&] {
    require(dir, "dir");
    require(out, "out");
    *out = new hcal_bundle{hcal::read_bundle(dir)};
  });
}

hcal_status hcal_bundle_write(const hcal_bundle* bundle, const char* dir) {
  return guarded([&] {
    require(bundle, "bundle");
    require(dir, "dir");
    hcal::write_bundle(bundle->value, dir);
  });
}

void hcal_bundle_free(hcal_bundle* bundle) { delete bundle; }

size_t hcal_bundle_size(const hcal_bundle* bundle) { return bundle ? bundle->value.size() : 0; }
size_t hcal_bundle_dimension(const hcal_bundle* bundle) { return bundle ? bundle->value.dimension() : 0; }
size_t hcal_bundle_num_classes(const hcal_bundle* bundle) { return bundle ? bundle->value.num_classes() : 0; }

hcal_status hcal_bundle_summary_json(const hcal_bundle* bundle, char** out_json) {
  return guarded([&] {
    require(bundle, "bundle");
    const auto& b = bundle->value;
    json kinds = json::object();
    for (auto kind : {hcal::RecordKind::real_query, hcal::RecordKind::pseudo_empty, hcal::RecordKind::pseudo_domain}) {
      kinds[std::string(hcal::to_string(kind))] = b.indices_of(kind).size();
    }
    emit({{"space", hcal::to_string(b.space())},
          {"dimension", b.dimension()},
          {"labels", b.labels().names()},
          {"record_count", b.size()},
          {"records_by_kind", std::move(kinds)},
          {"class_counts", b.class_counts()},
          {"metadata", b.metadata()}},
         out_json);
  });
}

hcal_status hcal_split(const hcal_bundle* bundle, uint64_t seed, size_t calibration_size, size_t test_size,
                       hcal_bundle** calibration_out, hcal_bundle** test_out, char** warnings_json) {
  return guarded([&] {
    require(bundle, "bundle");
    require(calibration_out, "calibration_out");
    require(test_out, "test_out");
    auto result = hcal::split_dataset(bundle->value, {seed, calibration_size, test_size});
    auto cal = std::make_unique<hcal_bundle>(hcal_bundle{std::move(result.calibration)});
    auto test = std::make_unique<hcal_bundle>(hcal_bundle{std::move(result.test)});
    if (warnings_json != nullptr) *warnings_json = duplicate(json(result.warnings).dump());
    *calibration_out = cal.release();
    *test_out = test.release();
  });
}

void hcal_synth_spec_default(hcal_synth_spec* spec) {
  if (spec == nullptr) return;
  const hcal::SyntheticSpec d;
  *spec = {d.num_classes, d.dim,  d.inter_centroid_distance, d.intra_class_std, d.records_per_class,
           d.misalignment_deg, d.seed, d.mean_norm,            d.prior_bias,      d.pseudo_records};
}

hcal_status hcal_synth(const hcal_synth_spec* spec, hcal_bundle** bundle_out, hcal_model** unembedding_out) {
  return guarded([&] {
    require(spec, "spec");
    emit_task(hcal::generate_gaussian_task(to_spec(*spec)), bundle_out, unembedding_out);
  });
}

hcal_status hcal_synth_sweep_point(const hcal_synth_spec* base, int k, double convergence, hcal_bundle** bundle_out,
                                   hcal_model** unembedding_out) {
  return guarded([&] {
    require(base, "base");
    auto points = hcal::dynamics_sweep(to_spec(*base), {k}, convergence);
    emit_task(std::move(points.front().task), bundle_out, unembedding_out);
  });
}

hcal_status hcal_vocab_view(const hcal_bundle* hidden, const hcal_model* unembedding, size_t vocab_size,
                            uint64_t seed, hcal_bundle** out) {
  return guarded([&] {
    require(hidden, "hidden");
    require(out, "out");
    *out = new hcal_bundle{hcal::vocab_view(hidden->value, unembedding_of(unembedding), vocab_size, seed)};
  });
}

void hcal_fit_options_default(hcal_fit_options* options) {
  if (options == nullptr) return;
  *options = {"hiddc", 16, 0, "neg_euclidean", hcal::kDefaultNeighbors, "test"};
}

hcal_status hcal_fit(const hcal_bundle* calibration, const hcal_fit_options* options, const hcal_model* unembedding,
                     hcal_model** out) {
  return guarded([&] {
    require(calibration, "calibration");
    require(options, "options");
    require(out, "out");
    hcal::FitOptions opts;
    opts.method = hcal::parse_method(options->method ? options->method : "hiddc");
    opts.per_class = options->per_class;
    opts.seed = options->seed;
    opts.similarity = hcal::parse_similarity(options->similarity ? options->similarity : "neg_euclidean");
    opts.k_neighbors = options->k_neighbors;
    opts.batch_source = hcal::parse_batch_source(options->batch_source ? options->batch_source : "test");
    const hcal::UnembeddingSet* u = nullptr;
    if (hcal::is_token_method(opts.method)) u = &unembedding_of(unembedding);
    *out = new hcal_model{hcal::fit(calibration->value, opts, u)};
  });
}

hcal_status hcal_model_read(const char* dir, hcal_model** out) {
  return guarded([&] {
    require(dir, "dir");
    require(out, "out");
    *out = new hcal_model{hcal::read_model(dir)};
  });
}

hcal_status hcal_model_write(const hcal_model* model, const char* dir) {
  return guarded([&] {
    require(model, "model");
    require(dir, "dir");
    hcal::write_model(model->value, dir);
  });
}

void hcal_model_free(hcal_model* model) { delete model; }

hcal_status hcal_model_summary_json(const hcal_model* model, char** out_json) {
  return guarded([&] {
    require(model, "model");
    const auto& p = model->value;
    json j = {{"method", hcal::to_string(p.method())},
              {"labels", p.labels().names()},
              {"space", hcal::to_string(p.space())},
              {"dimension", p.dimension()},
              {"m_used", p.m_used()},
              {"needs_batch", p.needs_batch()},
              {"source_metadata", p.source_metadata()}};
    if (const auto* t = p.token_model()) {
      j["calibration"] = {{"method", hcal::to_string(t->calibration.method)},
                          {"A", t->calibration.scale},
                          {"B", t->calibration.offset}};
    }
    if (const auto* c = p.centroid_model()) j["per_class_counts"] = c->per_class_counts;
    if (const auto* a = p.anchor_set()) j["anchors"] = a->size();
    emit(j, out_json);
  });
}

hcal_status hcal_predict(const hcal_model* model, const hcal_bundle* bundle, int32_t* class_ids, size_t capacity,
                         size_t* count) {
  return guarded([&] {
    require(model, "model");
    require(bundle, "bundle");
    require(count, "count");
    const auto predicted = model->value.predict(bundle->value);
    *count = predicted.size();
    if (capacity < predicted.size()) {
      throw hcal::Error(hcal::ErrorKind::InvalidArgument,
                        "output buffer holds " + std::to_string(capacity) + " ids, need " +
                            std::to_string(predicted.size()));
    }
    require(class_ids, "class_ids");
    for (std::size_t i = 0; i < predicted.size(); ++i) class_ids[i] = predicted[i];
  });
}

hcal_status hcal_evaluate(const hcal_model* model, const hcal_bundle* test, int transfer, char** report_json) {
  return guarded([&] {
    require(model, "model");
    require(test, "test");
    const auto report = transfer != 0 ? hcal::evaluate_transfer(test->value, model->value)
                                      : hcal::evaluate(test->value, model->value);
    auto j = hcal::to_json(report);
    if (transfer != 0) {
      j["transfer"] = {{"target_metadata", test->value.metadata()}};
    }
    emit(j, report_json);
  });
}

hcal_status hcal_overlap(const hcal_model* model, const hcal_bundle* bundle, size_t grid_size, int include_curves,
                         char** out_json) {
  return guarded([&] {
    require(model, "model");
    require(bundle, "bundle");
    const auto report = hcal::averaged_overlap(bundle->value, model->value, grid_size);
    emit(hcal::to_json(report, include_curves != 0), out_json);
  });
}

hcal_status hcal_pca(const hcal_bundle* bundle, size_t dims, const hcal_model* unembedding, char** out_json) {
  return guarded([&] {
    require(bundle, "bundle");
    const auto map = hcal::pca_fit(bundle->value, dims);
    const hcal::UnembeddingSet* u = unembedding ? &unembedding_of(unembedding) : nullptr;
    emit(hcal::pca_plot_json(bundle->value, map, u), out_json);
  });
}

hcal_status hcal_cluster_metrics(const hcal_bundle* bundle, char** out_json) {
  return guarded([&] {
    require(bundle, "bundle");
    const auto& b = bundle->value;
    const auto real = b.indices_of(hcal::RecordKind::real_query);
    const auto model = hcal::fit_centroids(b.select(real));
    emit({{"acd", hcal::averaged_centroid_distance(model)},
          {"ais", hcal::averaged_intra_class_spread(b)},
          {"ais_normalized", hcal::averaged_intra_class_spread(b, true)},
          {"per_class_counts", model.per_class_counts},
          {"metadata", b.metadata()}},
         out_json);
  });
}

hcal_status hcal_report(const char* const* report_jsons, size_t count, char** out_json) {
  return guarded([&] {
    if (count > 0) require(report_jsons, "report_jsons");
    std::vector<hcal::EvaluationReport> reports;
    for (std::size_t i = 0; i < count; ++i) {
      require(report_jsons[i], "report json");
      json parsed;
      try {
        parsed = json::parse(report_jsons[i]);
      } catch (const json::parse_error& e) {
        throw hcal::Error(hcal::ErrorKind::Format, "report " + std::to_string(i) + " at byte " +
                                                       std::to_string(e.byte) + ": " + e.what());
      }
      reports.push_back(hcal::evaluation_report_from_json(parsed));
    }
    if (reports.empty()) throw hcal::Error(hcal::ErrorKind::Size, "no reports to aggregate");
    emit({{"methods", hcal::to_json(hcal::summarize(reports))}}, out_json);
  });
}

}  // extern "C"
