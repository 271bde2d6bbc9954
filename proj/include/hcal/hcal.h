/*
 * hcal: nearest-centroid calibration of in-context-learning classifiers.
 *
 * Plain C interface over the C++ core. Objects are opaque handles released
 * with the matching *_free function. Every fallible call returns an
 * hcal_status; on failure hcal_last_error() describes the problem (the
 * message starts with the error name, e.g. "ChecksumError: ..."). Strings
 * returned through char** out-parameters are owned by the caller and must be
 * released with hcal_string_free().
 *
 * Status values double as the CLI exit codes.
 */
#ifndef HCAL_H
#define HCAL_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  ifdef HCAL_BUILDING_LIBRARY
#    define HCAL_API __declspec(dllexport)
#  else
#    define HCAL_API __declspec(dllimport)
#  endif
#else
#  define HCAL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hcal_status {
  HCAL_OK = 0,
  HCAL_ERR_INTERNAL = 1,
  HCAL_ERR_FORMAT = 2,
  HCAL_ERR_PRECONDITION = 3,
  HCAL_ERR_INSUFFICIENT_DATA = 4
} hcal_status;

typedef struct hcal_bundle hcal_bundle;
typedef struct hcal_model hcal_model;

HCAL_API const char* hcal_version(void);

/* Message for the last failed call on this thread; "" when none. */
HCAL_API const char* hcal_last_error(void);

HCAL_API void hcal_string_free(char* str);

/* ---- feature bundles ---------------------------------------------------- */

HCAL_API hcal_status hcal_bundle_read(const char* dir, hcal_bundle** out);
HCAL_API hcal_status hcal_bundle_write(const hcal_bundle* bundle, const char* dir);
HCAL_API void hcal_bundle_free(hcal_bundle* bundle);

HCAL_API size_t hcal_bundle_size(const hcal_bundle* bundle);
HCAL_API size_t hcal_bundle_dimension(const hcal_bundle* bundle);
HCAL_API size_t hcal_bundle_num_classes(const hcal_bundle* bundle);

/* Space, labels, record counts per kind and class, metadata. */
HCAL_API hcal_status hcal_bundle_summary_json(const hcal_bundle* bundle, char** out_json);

/* Seeded shuffle; head -> calibration, tail -> test. warnings_json may be
 * NULL; otherwise it receives a JSON array of non-fatal findings. */
HCAL_API hcal_status hcal_split(const hcal_bundle* bundle, uint64_t seed, size_t calibration_size,
                                size_t test_size, hcal_bundle** calibration_out, hcal_bundle** test_out,
                                char** warnings_json);

/* ---- synthetic tasks ---------------------------------------------------- */

typedef struct hcal_synth_spec {
  size_t num_classes;
  size_t dim;
  double inter_centroid_distance;
  double intra_class_std;
  size_t records_per_class;
  double misalignment_deg;
  uint64_t seed;
  double mean_norm;
  double prior_bias;
  size_t pseudo_records;
} hcal_synth_spec;

HCAL_API void hcal_synth_spec_default(hcal_synth_spec* spec);

/* Hidden-state bundle plus a "vanilla" model carrying the label
 * un-embedding vectors. */
HCAL_API hcal_status hcal_synth(const hcal_synth_spec* spec, hcal_bundle** bundle_out,
                                hcal_model** unembedding_out);

/* The task at demonstration count k of a dynamics sweep: intra-class std
 * divided by (1 + convergence * k). */
HCAL_API hcal_status hcal_synth_sweep_point(const hcal_synth_spec* base, int k, double convergence,
                                            hcal_bundle** bundle_out, hcal_model** unembedding_out);

HCAL_API hcal_status hcal_vocab_view(const hcal_bundle* hidden, const hcal_model* unembedding,
                                     size_t vocab_size, uint64_t seed, hcal_bundle** out);

/* ---- models ------------------------------------------------------------- */

typedef struct hcal_fit_options {
  const char* method;       /* vanilla|conc|batc|domc|knn|centc|hiddc */
  size_t per_class;         /* 0 = use every record */
  uint64_t seed;
  const char* similarity;   /* neg_euclidean|cosine */
  size_t k_neighbors;
  const char* batch_source; /* test|calibration */
} hcal_fit_options;

HCAL_API void hcal_fit_options_default(hcal_fit_options* options);

/* Token methods (vanilla, conc, batc, domc) take their un-embedding vectors
 * from `unembedding`, which must itself be a token-method model. */
HCAL_API hcal_status hcal_fit(const hcal_bundle* calibration, const hcal_fit_options* options,
                              const hcal_model* unembedding, hcal_model** out);

HCAL_API hcal_status hcal_model_read(const char* dir, hcal_model** out);
HCAL_API hcal_status hcal_model_write(const hcal_model* model, const char* dir);
HCAL_API void hcal_model_free(hcal_model* model);
HCAL_API hcal_status hcal_model_summary_json(const hcal_model* model, char** out_json);

/* ---- inference and analysis -------------------------------------------- */

/* One class id per real query. When capacity is too small, *count receives
 * the required size and HCAL_ERR_PRECONDITION is returned. */
HCAL_API hcal_status hcal_predict(const hcal_model* model, const hcal_bundle* bundle, int32_t* class_ids,
                                  size_t capacity, size_t* count);

/* Evaluation report as JSON. With transfer != 0 labels are matched by name,
 * for models fitted on a different dataset. */
HCAL_API hcal_status hcal_evaluate(const hcal_model* model, const hcal_bundle* test, int transfer,
                                   char** report_json);

HCAL_API hcal_status hcal_overlap(const hcal_model* model, const hcal_bundle* bundle, size_t grid_size,
                                  int include_curves, char** out_json);

/* unembedding may be NULL. */
HCAL_API hcal_status hcal_pca(const hcal_bundle* bundle, size_t dims, const hcal_model* unembedding,
                              char** out_json);

/* Averaged centroid distance and intra-class spread of the real queries. */
HCAL_API hcal_status hcal_cluster_metrics(const hcal_bundle* bundle, char** out_json);

/* Mean and sample std of macro F1 / accuracy per method over evaluation
 * report JSON documents. */
HCAL_API hcal_status hcal_report(const char* const* report_jsons, size_t count, char** out_json);

#ifdef __cplusplus
}
#endif

#endif /* HCAL_H */
