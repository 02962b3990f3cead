#ifndef QLM_H
#define QLM_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QlmStatus {
  QLM_STATUS_OK = 0,
  QLM_STATUS_NULL_POINTER = 1,
  QLM_STATUS_INVALID_STRING = 2,
  QLM_STATUS_PARAMETER = 3,
  QLM_STATUS_UNKNOWN = 4,
  QLM_STATUS_DOMAIN = 5,
  QLM_STATUS_GEOMETRY = 6,
  QLM_STATUS_FRAME = 7,
  QLM_STATUS_NON_CONVEX = 8,
  QLM_STATUS_NOT_AXISYMMETRIC = 9,
  QLM_STATUS_NON_EMBEDDABLE = 10,
  QLM_STATUS_CONVEXITY = 11,
  QLM_STATUS_RESOLUTION = 12,
  QLM_STATUS_FLAG = 13,
  QLM_STATUS_CONFIG = 14,
  QLM_STATUS_IO = 15,
  QLM_STATUS_BUFFER_TOO_SMALL = 16,
  QLM_STATUS_PANIC = 17,
} QlmStatus;

typedef struct QlmMassSurface QlmMassSurface;

typedef struct QlmSpacetime QlmSpacetime;

typedef struct QlmSurface QlmSurface;

/**
 * Energy summary of one surface.
 */
typedef struct QlmEnergy {
  double e;
  double area;
  double m_irr;
  double int_norm_h;
  double int_h_flat;
} QlmEnergy;

/**
 * Residuals of the integral identities.
 */
typedef struct QlmResiduals {
  double theorem1;
  double theorem1_relative;
  double pairing_pointwise;
  double pairing_difference;
} QlmResiduals;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread; empty if none.
 */
const char *qlm_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *qlm_version(void);

/**
 * Look up a spacetime by name with `n` key/value parameters.
 *
 * # Safety
 * `name` and the `n` keys must be NUL-terminated strings, `values` must hold
 * `n` doubles and `out` must be writable.
 */
enum QlmStatus qlm_spacetime_new(const char *name,
                                 const char *const *keys,
                                 const double *values,
                                 size_t n,
                                 struct QlmSpacetime **out);

/**
 * # Safety
 * `p` must come from `qlm_spacetime_new` and not be freed twice.
 */
void qlm_spacetime_free(struct QlmSpacetime *p);

/**
 * Look up a catalog surface by name with `n` key/value parameters.
 *
 * # Safety
 * As for `qlm_spacetime_new`.
 */
enum QlmStatus qlm_surface_new(const char *name,
                               const char *const *keys,
                               const double *values,
                               size_t n,
                               struct QlmSurface **out);

/**
 * # Safety
 * `p` must come from `qlm_surface_new` and not be freed twice.
 */
void qlm_surface_free(struct QlmSurface *p);

/**
 * Build the geometry, embedding and flat comparison data of a surface at
 * band limit `band_limit`.
 *
 * # Safety
 * Handles must be live; `out` must be writable.
 */
enum QlmStatus qlm_mass_surface_new(const struct QlmSpacetime *spacetime,
                                    const struct QlmSurface *surface,
                                    size_t band_limit,
                                    struct QlmMassSurface **out);

/**
 * # Safety
 * `p` must come from `qlm_mass_surface_new` and not be freed twice.
 */
void qlm_mass_surface_free(struct QlmMassSurface *p);

/**
 * # Safety
 * `s` must be live and `out` writable.
 */
enum QlmStatus qlm_mass_surface_energy(const struct QlmMassSurface *s, struct QlmEnergy *out);

/**
 * # Safety
 * `s` must be live and `out` writable.
 */
enum QlmStatus qlm_mass_surface_residuals(const struct QlmMassSurface *s, struct QlmResiduals *out);

/**
 * Number of quadrature nodes of the surface grid.
 *
 * # Safety
 * `s` must be live or null (null gives 0).
 */
size_t qlm_mass_surface_node_count(const struct QlmMassSurface *s);

/**
 * Copy θ, φ, |H| and |H|_flat per node into caller buffers of length `len`.
 * Any output pointer may be null to skip it.
 *
 * # Safety
 * Non-null buffers must hold `len` doubles.
 */
enum QlmStatus qlm_mass_surface_fields(const struct QlmMassSurface *s,
                                       double *theta,
                                       double *phi,
                                       double *norm_h,
                                       double *h_flat,
                                       size_t len);

/**
 * Full mass report as JSON. The string must be released with
 * `qlm_string_free`.
 *
 * # Safety
 * Handles must be live; `out` must be writable.
 */
enum QlmStatus qlm_mass_report_json(const struct QlmSpacetime *spacetime,
                                    const struct QlmSurface *surface,
                                    size_t band_limit,
                                    char **out);

/**
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void qlm_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QLM_H */
