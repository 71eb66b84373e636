#ifndef PATCHGUARD_H
#define PATCHGUARD_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PgStatus {
  PG_STATUS_OK = 0,
  PG_STATUS_NULL_ARGUMENT = 1,
  PG_STATUS_INVALID_UTF8 = 2,
  PG_STATUS_IO = 3,
  PG_STATUS_UNSUPPORTED_FILE = 4,
  PG_STATUS_PARSE = 5,
  PG_STATUS_DIFF = 6,
  PG_STATUS_SCHEMA_MISMATCH = 7,
  PG_STATUS_MODEL_FORMAT = 8,
  PG_STATUS_BUFFER_TOO_SMALL = 9,
  PG_STATUS_PANIC = 10,
  PG_STATUS_EMPTY_PATCH = 11,
} PgStatus;

/**
 * An encoded feature vector of one patch.
 */
typedef struct PgFeatures PgFeatures;

/**
 * A loaded model.
 */
typedef struct PgModel PgModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the calling thread's last error message, NUL-terminated, into
 * `buf` and returns the message length in bytes, without the NUL. With
 * a null `buf` or a too small `len` nothing is written, so a caller can
 * size the buffer first.
 */
size_t pg_last_error(char *buf, size_t len);

/**
 * The feature schema version this library encodes, as a static string.
 */
const char *pg_schema_version(void);

/**
 * Loads a model file. On success `*out` holds a handle to free with
 * [`pg_model_free`].
 */
enum PgStatus pg_model_load(const char *path, struct PgModel **out);

void pg_model_free(struct PgModel *model);

/**
 * Number of input columns the model expects; 0 for a null handle.
 */
size_t pg_model_columns(const struct PgModel *model);

/**
 * Diffs and encodes one patch made of `count` changed files. Each file is
 * given by its buggy and patched source text and a path whose extension
 * selects the grammar. On success `*out` holds a handle to free with
 * [`pg_features_free`].
 */
enum PgStatus pg_extract(const char *const *buggy,
                         const char *const *patched,
                         const char *const *paths,
                         size_t count,
                         struct PgFeatures **out);

void pg_features_free(struct PgFeatures *features);

/**
 * Number of encoded values; 0 for a null handle.
 */
size_t pg_features_len(const struct PgFeatures *features);

/**
 * Copies the encoded values into `buf`, which must hold
 * [`pg_features_len`] entries.
 */
enum PgStatus pg_features_values(const struct PgFeatures *features, uint32_t *buf, size_t len);

/**
 * Overfitting probability of an extracted patch. Models trained on a
 * subset of the columns pick their columns by name.
 */
enum PgStatus pg_predict(const struct PgModel *model,
                         const struct PgFeatures *features,
                         double *out_proba);

/**
 * Overfitting probability of a raw row of `len` values in model column
 * order.
 */
enum PgStatus pg_predict_values(const struct PgModel *model,
                                const double *values,
                                size_t len,
                                double *out_proba);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PATCHGUARD_H */
