#ifndef POLYVOL_H
#define POLYVOL_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

#define PV_FLAG_POLE_PROXIMITY 1

#define PV_FLAG_BOUNDARY_HIT 2

#define PV_FLAG_CLAMP_APPLIED 4

typedef enum PvMethod {
  PV_METHOD_MOM = 0,
  PV_METHOD_MLE = 1,
  PV_METHOD_TMOM = 2,
  PV_METHOD_TMLE = 3,
  PV_METHOD_EM = 4,
  PV_METHOD_MOM3D = 5,
  PV_METHOD_MLE3D = 6,
  PV_METHOD_TMOM3D = 7,
} PvMethod;

typedef enum PvStatus {
  PV_STATUS_OK = 0,
  PV_STATUS_NULL_POINTER = 1,
  PV_STATUS_INVALID_ARGUMENT = 2,
  PV_STATUS_NUMERICAL = 3,
  PV_STATUS_PANIC = 4,
} PvStatus;

// Opaque distance sample handle.
typedef struct PvSample PvSample;

// Opaque shape handle.
typedef struct PvShape PvShape;

// `V(r) = mu + l0 r + m r^2 + phi0 omega_d r^d` on `[0, r_max]`; `m` is 0 in 2D.
typedef struct PvVolume {
  uint32_t dimension;
  double mu;
  double l0;
  double m;
  double phi0;
  double r_max;
} PvVolume;

// Result of [`pv_estimate`]. Fields that do not apply are NaN.
typedef struct PvEstimate {
  double l0;
  double m;
  double asymp_var_l0;
  double asymp_var_m;
  uint64_t n;
  enum PvMethod method;
  // Bitwise OR of the `PV_FLAG_*` constants.
  uint32_t flags;
} PvEstimate;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *pv_version(void);

// Message of the last failed call on this thread, or NULL. Valid until the
// next failing call on the same thread.
const char *pv_last_error_message(void);

// Parses a shape from NUL-terminated JSON.
//
// # Safety
// `json` must be a valid C string and `out` a writable pointer.
enum PvStatus pv_shape_from_json(const char *json, struct PvShape **out);

// # Safety
// `shape` must come from [`pv_shape_from_json`] and not be used afterwards.
void pv_shape_free(struct PvShape *shape);

// Closed-form volume polynomial of the shape.
//
// # Safety
// `shape` must be a live handle and `out` writable.
enum PvStatus pv_shape_volume(const struct PvShape *shape, struct PvVolume *out);

// Distance from a point with `dim` coordinates to the shape.
//
// # Safety
// `point` must hold `dim` doubles and `out` be writable.
enum PvStatus pv_shape_distance(const struct PvShape *shape,
                                const double *point,
                                size_t dim,
                                double *out);

// Distances of `n` uniform points in the band of radius `band` around the shape.
//
// # Safety
// `shape` must be a live handle and `out` writable.
enum PvStatus pv_sample_band(const struct PvShape *shape,
                             double band,
                             size_t n,
                             uint64_t seed,
                             struct PvSample **out);

// Wraps observed distances. `solid` selects the model with `0 < d <= R`,
// otherwise `0 <= d <= R`.
//
// # Safety
// `values` must hold `len` doubles (it may be NULL when `len` is 0) and `out` be writable.
enum PvStatus pv_sample_from_values(const double *values,
                                    size_t len,
                                    double band,
                                    bool solid,
                                    struct PvSample **out);

// Number of distances; 0 for NULL.
//
// # Safety
// `sample` must be NULL or a live handle.
size_t pv_sample_len(const struct PvSample *sample);

// Copies the distances into `buf`, which must have room for `pv_sample_len` values.
//
// # Safety
// `buf` must be writable for `cap` doubles.
enum PvStatus pv_sample_copy_values(const struct PvSample *sample, double *buf, size_t cap);

// # Safety
// `sample` must come from this library and not be used afterwards.
void pv_sample_free(struct PvSample *sample);

// Applies `method` with known `phi0` and truncation order `k`.
//
// # Safety
// `sample` must be a live handle and `out` writable.
enum PvStatus pv_estimate(const struct PvSample *sample,
                          enum PvMethod method,
                          double phi0,
                          uint32_t k,
                          struct PvEstimate *out);

// Asymptotic variance of the planar moment estimator of `L0`.
double pv_mom_asymp_var(double l0, double band, double phi0);

// Inverse Fisher information of one observation about `L0`.
double pv_mle_asymp_var(double l0, double band, double phi0);

// Asymptotic variances of the spatial moment estimators of `L0` and `M`.
//
// # Safety
// `out_l0` and `out_m` must be writable.
enum PvStatus pv_mom3d_asymp_var(double l0,
                                 double m,
                                 double band,
                                 double phi0,
                                 double *out_l0,
                                 double *out_m);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* POLYVOL_H */
