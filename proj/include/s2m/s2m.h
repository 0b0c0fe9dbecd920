/*
 * SPDX-FileCopyrightText: (c) 2026 The sent2matrix authors
 *
 * SPDX-License-Identifier: Apache-2.0
 */

/* C interface to the sent2matrix library. Every call returns an s2m_status;
 * on failure s2m_last_error() describes the problem (per thread, valid until
 * the next failing call on that thread).
 *
 * Functions that produce text take (buf, cap, needed): *needed receives the
 * byte count including the terminating NUL. Pass buf = NULL to query the
 * size; a non-NULL buffer that is too small yields S2M_ERR_USAGE. */

#ifndef S2M_H
#define S2M_H

#include <stddef.h>
#include <stdint.h>

#if defined(S2M_BUILDING_LIBRARY)
#define S2M_API __attribute__((visibility("default")))
#else
#define S2M_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum s2m_status {
  S2M_OK = 0,
  S2M_ERR_USAGE = 1,   /* bad arguments, flags or configuration */
  S2M_ERR_DATA = 2,    /* unreadable or malformed data files */
  S2M_ERR_NUMERIC = 3, /* a numerical check exceeded its tolerance */
  S2M_ERR_INTERNAL = 4
} s2m_status;

S2M_API const char* s2m_version(void);
S2M_API const char* s2m_last_error(void);

/* ---- Encoding ------------------------------------------------------------ */

/* Grid of padded word slices, one row per slice. For "serpentine" this is
 * the fold: reversed slices are laid out right-to-left. */
S2M_API s2m_status s2m_fold_render(const char* text, size_t m, const char* strategy, char* buf,
                                   size_t cap, size_t* needed);

/* Encodes one raw sentence to a [slices, m, channels] tensor, slice-major
 * with channels innermost. shape (3 entries) is always filled; values are
 * written when cap >= slices * m * channels. */
S2M_API s2m_status s2m_encode_sentence(const char* text, size_t n, size_t m, const char* strategy,
                                       int use_position, double* values, size_t cap,
                                       size_t shape[3]);

/* ---- Experiments --------------------------------------------------------- */

typedef struct s2m_experiment s2m_experiment;

S2M_API s2m_status s2m_experiment_new(s2m_experiment** out);
S2M_API s2m_status s2m_experiment_load(const char* ini_path, s2m_experiment** out);
S2M_API void s2m_experiment_free(s2m_experiment* exp);

/* key is "section.key", e.g. "train.seed" or "model.strategy". */
S2M_API s2m_status s2m_experiment_set(s2m_experiment* exp, const char* key, const char* value);

/* A preset name (ag_news, yelp_full, mr) under the data directory, or a
 * directory holding train.csv and test.csv. */
S2M_API s2m_status s2m_experiment_use_dataset(s2m_experiment* exp, const char* name_or_dir,
                                              const char* data_dir);
S2M_API s2m_status s2m_experiment_to_ini(const s2m_experiment* exp, char* buf, size_t cap,
                                         size_t* needed);

/* Per-run directory <out_root>/<config digest>-s<seed>. */
S2M_API s2m_status s2m_experiment_run_dir(const s2m_experiment* exp, const char* out_root,
                                          char* buf, size_t cap, size_t* needed);

/* Writes the encoded-batch dump of the training split (or of `text` when
 * non-NULL) to out_path. *count receives the number of tensors. */
S2M_API s2m_status s2m_encode(const s2m_experiment* exp, const char* text, const char* out_path,
                              size_t* count);

S2M_API s2m_status s2m_train(const s2m_experiment* exp, const char* out_root,
                             double* test_accuracy);

/* Evaluates the finished run of this experiment on its test split and
 * writes predictions_eval.csv into the run directory. */
S2M_API s2m_status s2m_eval(const s2m_experiment* exp, const char* out_root, double* accuracy,
                            size_t* correct, size_t* total);

/* Trains every padding strategy for each seed; report text as for
 * s2m_experiment_to_ini. */
S2M_API s2m_status s2m_compare_paddings(const s2m_experiment* exp, const uint64_t* seeds,
                                        size_t n_seeds, const char* out_root, char* report,
                                        size_t cap, size_t* needed);

S2M_API s2m_status s2m_prepare_mr(const char* negative_path, const char* positive_path,
                                  uint64_t seed, const char* out_dir);

/* ---- Trained models ------------------------------------------------------ */

typedef struct s2m_model s2m_model;

S2M_API s2m_status s2m_model_load(const char* run_dir, s2m_model** out);
S2M_API void s2m_model_free(s2m_model* model);
S2M_API s2m_status s2m_model_predict(s2m_model* model, const char* text, size_t* label);

/* ---- Numerical checks ---------------------------------------------------- */

typedef struct s2m_gradcheck_entry {
  char family[32];
  double max_rel_error;
} s2m_gradcheck_entry;

/* Runs the finite-difference suite. *count receives the number of families
 * (entries beyond cap are not written). Returns S2M_ERR_NUMERIC when any
 * family exceeds tolerance. */
S2M_API s2m_status s2m_gradcheck(uint64_t seed, double tolerance, s2m_gradcheck_entry* entries,
                                 size_t cap, size_t* count);

#ifdef __cplusplus
}
#endif

#endif /* S2M_H */
