#ifndef TSCANON_C_H
#define TSCANON_C_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes returned by every call. */
enum {
  TSCANON_OK = 0,
  TSCANON_EMPTY_INPUT = 1,
  TSCANON_NON_FINITE_SAMPLE = 2,
  TSCANON_INVALID_ARGUMENT = 3,
  TSCANON_INTERNAL_ERROR = 4
};

/* Per-feature flags. A flagged value is NaN. */
enum {
  TSCANON_FLAG_NONE = 0,
  TSCANON_FLAG_NOT_COMPUTABLE = 1,
  TSCANON_FLAG_DEGENERATE_INPUT = 2
};

size_t tscanon_feature_count(void);

/* Canonical feature name, or NULL when i is out of range. */
const char* tscanon_feature_name(size_t i);

/* Extracts all features of x[0..n). `values` and `flags` hold
   tscanon_feature_count() entries each; `flags` may be NULL. On
   TSCANON_NON_FINITE_SAMPLE, *bad_index (if non-NULL) receives the offending
   sample index. */
int tscanon_extract(const double* x, size_t n, double* values, uint8_t* flags, size_t* bad_index);

/* Batch form. Row k of `values`/`flags` (row-major, feature_count columns)
   belongs to series[k]. Failures are recorded per series in `statuses` and
   `bad_indices` (either may be NULL) and never abort the batch; the return
   value is TSCANON_OK unless the arguments themselves are invalid. */
int tscanon_extract_batch(const double* const* series, const size_t* lengths, size_t count, unsigned threads,
                          double* values, uint8_t* flags, int* statuses, size_t* bad_indices);

#ifdef __cplusplus
}
#endif

#endif
