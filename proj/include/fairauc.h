#ifndef FAIRAUC_H
#define FAIRAUC_H

/* C API for the fairauc library.
 *
 * All functions return a fairauc_status; FAIRAUC_OK is 0.  On any failure the
 * thread-local message from fairauc_last_error() describes what went wrong.
 * Strings returned through char** out-parameters are heap-allocated and must
 * be released with fairauc_string_free(). */

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define FAIRAUC_API __declspec(dllexport)
#else
#define FAIRAUC_API __attribute__((visibility("default")))
#endif

typedef enum fairauc_status {
  FAIRAUC_OK = 0,
  FAIRAUC_ERR_ARGUMENT = 1,   /* bad argument / config / schema */
  FAIRAUC_ERR_PARSE = 2,      /* malformed input file */
  FAIRAUC_ERR_VALUE = 3,      /* unmapped label/group cell value */
  FAIRAUC_ERR_DATA = 4,       /* degenerate dataset, empty stratum/class, split */
  FAIRAUC_ERR_NUMERIC = 5,    /* non-finite values, divergence */
  FAIRAUC_ERR_IO = 6,         /* file read/write failure */
  FAIRAUC_ERR_INTERNAL = 7    /* anything else */
} fairauc_status;

typedef struct fairauc_dataset fairauc_dataset; /* opaque */

FAIRAUC_API const char* fairauc_version(void);

/* Message for the most recent failure on this thread; empty string if none. */
FAIRAUC_API const char* fairauc_last_error(void);

FAIRAUC_API void fairauc_string_free(char* s);

/* --- datasets ----------------------------------------------------------- */

/* schema_json: {"label":{"column","positive","negative"},
 *               "group":{"column","a","b"},
 *               "categorical":[...],"numeric":[...],"drop":[...]}.
 * Pass NULL to auto-detect the synthetic layout x0..x{d-1},label,group. */
FAIRAUC_API fairauc_status fairauc_dataset_load_csv(const char* path,
                                                    const char* schema_json,
                                                    fairauc_dataset** out);

/* spec_json: {"spec":"gaussian2d_paper"} or {"spec":"custom","a_pos":{...},...};
 * cells take {"mean":[x,y],"variance":v,"count":n}. */
FAIRAUC_API fairauc_status fairauc_dataset_synth(const char* spec_json,
                                                 uint64_t seed,
                                                 fairauc_dataset** out);

FAIRAUC_API fairauc_status fairauc_dataset_write_csv(const fairauc_dataset* ds,
                                                     const char* path);

/* train/val/test splits as new handles; any out pointer may be NULL. */
FAIRAUC_API fairauc_status fairauc_dataset_split(const fairauc_dataset* ds,
                                                 double train_frac,
                                                 double val_frac,
                                                 double test_frac,
                                                 uint64_t seed,
                                                 fairauc_dataset** out_train,
                                                 fairauc_dataset** out_val,
                                                 fairauc_dataset** out_test);

FAIRAUC_API fairauc_status fairauc_dataset_stats_json(const fairauc_dataset* ds,
                                                      char** out_json);

FAIRAUC_API int64_t fairauc_dataset_rows(const fairauc_dataset* ds);
FAIRAUC_API int64_t fairauc_dataset_dim(const fairauc_dataset* ds);

FAIRAUC_API void fairauc_dataset_free(fairauc_dataset* ds);

/* --- experiment harness -------------------------------------------------- */

/* config_json drives everything (dataset source, split, model, algorithm,
 * trainer hyperparameters, seeds).  Writes per-seed artifacts plus
 * manifest.json under out_dir.  out_manifest_json may be NULL.  Returns
 * FAIRAUC_OK even when some seeds fail, as long as the run itself completes;
 * failed seeds are recorded in the manifest. */
FAIRAUC_API fairauc_status fairauc_train(const char* config_json,
                                         const char* out_dir,
                                         char** out_manifest_json);

/* Scores the dataset with a saved checkpoint; writes report.json plus ROC
 * CSVs (and SVG plots when write_svg != 0) under out_dir. */
FAIRAUC_API fairauc_status fairauc_evaluate(const char* checkpoint_path,
                                            const fairauc_dataset* ds,
                                            const char* out_dir,
                                            int write_svg,
                                            char** out_report_json);

/* Aggregates manifests from completed runs into a comparison table.
 * Either out pointer may be NULL. */
FAIRAUC_API fairauc_status fairauc_compare(const char* const* run_dirs,
                                           int n_dirs,
                                           char** out_csv,
                                           char** out_text);

/* Hyperparameter grid search; config_json is a train config plus a "grid"
 * object.  Writes sweep.csv and best_config.json under out_dir. */
FAIRAUC_API fairauc_status fairauc_sweep(const char* config_json,
                                         const char* out_dir,
                                         char** out_csv);

#ifdef __cplusplus
}
#endif

#endif /* FAIRAUC_H */
