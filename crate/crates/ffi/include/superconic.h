#ifndef SUPERCONIC_H
#define SUPERCONIC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Region codes used in [`ScSample::region`].
#define SC_REGION_EXACT 0

#define SC_REGION_INTERPOLATED 1

// Result codes returned by every entry point.
typedef enum ScStatus {
  SC_STATUS_OK = 0,
  SC_STATUS_INVALID_INPUT = 1,
  SC_STATUS_DEGENERATE = 2,
  SC_STATUS_NULL_POINTER = 3,
  SC_STATUS_OUT_OF_RANGE = 4,
  SC_STATUS_EVALUATION_FAILED = 5,
  SC_STATUS_BRANCH_PLAN_FAILED = 6,
  SC_STATUS_PANIC = 7,
} ScStatus;

// Branch-planned oval, created by [`sc_oval_create`].
typedef struct ScOval ScOval;

// One evaluated point of the profile.
typedef struct ScSample {
  double z;
  // `SC_REGION_EXACT` or `SC_REGION_INTERPOLATED`.
  int32_t region;
  double lambda;
  double one_minus_ab;
} ScSample;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Validates the parameters and builds the branch plan over `[0, y_max]`.
//
// # Safety
// `out` must be null or point to writable storage for one pointer. The
// handle must be released with [`sc_oval_destroy`].
enum ScStatus sc_oval_create(double m,
                             double eta_i,
                             double eta_o,
                             double epsilon,
                             double y_max,
                             struct ScOval **out);

// Releases a handle; null is ignored.
//
// # Safety
// `h` must be null or a handle from [`sc_oval_create`] not yet destroyed.
void sc_oval_destroy(struct ScOval *h);

// Evaluates the profile at `y` (`|y| <= y_max`).
//
// # Safety
// `h` must be a live handle; `out` must be null or writable.
enum ScStatus sc_oval_evaluate(const struct ScOval *h, double y, struct ScSample *out);

// Profile plus aspheric terms `sum f[n] y^(2n+4)`.
//
// # Safety
// `h` must be a live handle; `f` must point to `n` doubles (or be null
// with `n == 0`); `out_z` must be null or writable.
enum ScStatus sc_oval_evaluate_superconic(const struct ScOval *h,
                                          const double *f,
                                          size_t n,
                                          double y,
                                          double *out_z);

// Vertex curvature `c0` of the oval.
//
// # Safety
// `h` must be a live handle; `out` must be null or writable.
enum ScStatus sc_oval_curvature(const struct ScOval *h, double *out);

// Writes up to `cap` joint positions to `out` and the total count to
// `count`. Pass `cap == 0` to query the count.
//
// # Safety
// `h` must be a live handle; `out` must hold `cap` doubles (may be null
// when `cap == 0`); `count` must be writable.
enum ScStatus sc_oval_joints(const struct ScOval *h, double *out, size_t cap, size_t *count);

// Sag of the conic with curvature `c0` and conic constant `k`.
//
// # Safety
// `out_z` must be writable; `out_region` must be null or writable.
enum ScStatus sc_conic_sag(double c0, double k, double y, double *out_z, int32_t *out_region);

// Static description of a status code; unknown codes get a generic text.
const char *sc_status_message(int32_t status);

// Message of the last failure on this thread, or null. The pointer stays
// valid until the next failing call on the same thread.
const char *sc_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SUPERCONIC_H */
