#ifndef PILOTWAVE_H
#define PILOTWAVE_H

/* Generated by cbindgen from the pilotwave-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum PwStatus {
  PW_STATUS_OK = 0,
  PW_STATUS_NULL_POINTER = 1,
  PW_STATUS_INVALID_ARGUMENT = 2,
  PW_STATUS_OUT_OF_RANGE = 3,
  PW_STATUS_DOMAIN_ERROR = 4,
  PW_STATUS_NODE_SINGULARITY = 5,
  PW_STATUS_SINGULAR_POINT = 6,
  PW_STATUS_OUT_OF_ASYMPTOTIC_RANGE = 7,
  PW_STATUS_NOT_CONVERGED = 8,
  PW_STATUS_CONFIG_ERROR = 9,
  PW_STATUS_IO_ERROR = 10,
  PW_STATUS_INVALID_UTF8 = 11,
  PW_STATUS_INDEX_OUT_OF_BOUNDS = 12,
  PW_STATUS_INTERNAL_PANIC = 13,
} PwStatus;

// Boundary condition on the obstacle.
typedef enum PwBoundaryCondition {
  PW_BOUNDARY_CONDITION_NEUMANN = 0,
  PW_BOUNDARY_CONDITION_DIRICHLET = 1,
} PwBoundaryCondition;

// Why a trajectory ended.
typedef enum PwTrajectoryStatus {
  PW_TRAJECTORY_STATUS_COMPLETED = 0,
  PW_TRAJECTORY_STATUS_NODE_ENCOUNTER = 1,
  PW_TRAJECTORY_STATUS_LEFT_DOMAIN = 2,
  PW_TRAJECTORY_STATUS_STEP_FAILURE = 3,
} PwTrajectoryStatus;

// Opaque guidance-field handle.
typedef struct PwField PwField;

// Opaque trajectory handle.
typedef struct PwTrajectory PwTrajectory;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Free Gaussian packet field.
enum PwStatus pw_field_new_free_packet(double center_x,
                                       double center_y,
                                       double momentum_x,
                                       double momentum_y,
                                       double sigma,
                                       double hbar,
                                       double mass,
                                       struct PwField **out);

// Free propagator (delta source) field; valid for t > 0.
enum PwStatus pw_field_new_free_propagator(double source_x,
                                           double source_y,
                                           double hbar,
                                           double mass,
                                           struct PwField **out);

// Packet against the hard wall y = 0 (`center_y > 0`).
enum PwStatus pw_field_new_wall_packet(double center_x,
                                       double center_y,
                                       double momentum_x,
                                       double momentum_y,
                                       double sigma,
                                       enum PwBoundaryCondition bc,
                                       double hbar,
                                       double mass,
                                       struct PwField **out);

// Wall propagator field (`source_y > 0`); velocity ((x-x0)/t, y/t).
enum PwStatus pw_field_new_wall_propagator(double source_x,
                                           double source_y,
                                           double hbar,
                                           double mass,
                                           struct PwField **out);

// Half-line barrier propagator field (delta source).
enum PwStatus pw_field_new_halfline_propagator(double source_x,
                                               double source_y,
                                               enum PwBoundaryCondition bc,
                                               double hbar,
                                               double mass,
                                               struct PwField **out);

// Gaussian packet in the half-line geometry, synthesized by quadrature.
// `order = 0` keeps the adaptive default (start 64, cap 256); a nonzero
// order pins the tensor rule.
enum PwStatus pw_field_new_halfline_packet(double center_x,
                                           double center_y,
                                           double momentum_x,
                                           double momentum_y,
                                           double sigma,
                                           enum PwBoundaryCondition bc,
                                           size_t order,
                                           double hbar,
                                           double mass,
                                           struct PwField **out);

// Stationary plane-wave scattering state with wave vector
// `-k0 (cos theta0, sin theta0)`.
enum PwStatus pw_field_new_plane_wave(double k0,
                                      double theta0,
                                      enum PwBoundaryCondition bc,
                                      double hbar,
                                      double mass,
                                      struct PwField **out);

// Release a field handle. Passing NULL is a no-op.
//
// # Safety
// `field` must be a pointer previously returned by one of the
// `pw_field_new_*` constructors and not yet freed.
void pw_field_free(struct PwField *field);

// Guidance velocity at (x, y) and time t.
//
// # Safety
// `field` must be a live handle; `vx` and `vy` must be writable.
enum PwStatus pw_field_velocity(const struct PwField *field,
                                double x,
                                double y,
                                double t,
                                double *vx,
                                double *vy);

// Complex amplitude of the field's wave function at (x, y) and time t.
//
// # Safety
// `field` must be a live handle; `re` and `im` must be writable.
enum PwStatus pw_field_psi(const struct PwField *field,
                           double x,
                           double y,
                           double t,
                           double *re,
                           double *im);

// Integrate one trajectory with fixed-step RK4 (step-halving guard near
// singular points). On success the caller owns the returned trajectory.
//
// # Safety
// `field` must be a live handle; `out` must be writable.
enum PwStatus pw_field_integrate(const struct PwField *field,
                                 double seed_x,
                                 double seed_y,
                                 double t_init,
                                 double t_end,
                                 double h,
                                 struct PwTrajectory **out);

// Number of (t, x, y) samples in the trajectory.
//
// # Safety
// `trajectory` must be a live handle.
size_t pw_trajectory_len(const struct PwTrajectory *trajectory);

// Termination status of the trajectory.
//
// # Safety
// `trajectory` must be a live handle.
enum PwTrajectoryStatus pw_trajectory_status(const struct PwTrajectory *trajectory);

// Fetch sample `index`.
//
// # Safety
// `trajectory` must be a live handle; `t`, `x`, `y` must be writable.
enum PwStatus pw_trajectory_sample(const struct PwTrajectory *trajectory,
                                   size_t index,
                                   double *t,
                                   double *x,
                                   double *y);

// Release a trajectory handle. Passing NULL is a no-op.
//
// # Safety
// `trajectory` must be a pointer previously returned by
// [`pw_field_integrate`] and not yet freed.
void pw_trajectory_free(struct PwTrajectory *trajectory);

// Run a scenario file end to end (trajectory file plus optional density
// grid) with outputs under `out_dir`. `threads = 0` keeps the default pool.
//
// # Safety
// `scenario_path` and `out_dir` must be valid nul-terminated strings.
enum PwStatus pw_run_scenario_file(const char *scenario_path, const char *out_dir, size_t threads);

// Static name of a status code (never NULL).
const char *pw_status_name(enum PwStatus status);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PILOTWAVE_H */
