#ifndef POLARITON_H
#define POLARITON_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum PolaritonStatus {
  POLARITON_STATUS_OK = 0,
  POLARITON_STATUS_NULL_POINTER = 1,
  POLARITON_STATUS_INVALID_INPUT = 2,
  POLARITON_STATUS_SOLVER_FAILURE = 3,
  POLARITON_STATUS_IO_FAILURE = 4,
  POLARITON_STATUS_BUFFER_TOO_SMALL = 5,
  POLARITON_STATUS_PANIC = 6,
} PolaritonStatus;

// Values accepted by the `model` parameters.
typedef enum PolaritonModel {
  POLARITON_MODEL_RWA = 0,
  POLARITON_MODEL_QUADRATIC = 1,
} PolaritonModel;

// Values accepted by the `axis` parameters.
typedef enum PolaritonAxis {
  POLARITON_AXIS_X = 0,
  POLARITON_AXIS_Y = 1,
  POLARITON_AXIS_Z = 2,
} PolaritonAxis;

// Opaque excitation set.
typedef struct PolaritonExcitationSet PolaritonExcitationSet;

// Opaque solution. Keeps a copy of the excitations it was solved for.
typedef struct PolaritonSolution PolaritonSolution;

// Cavity description. `loss_rate_ev = 0` is a single lossless mode.
// For a lossy cavity `mode_spacing_ev` must be positive;
// `window_halfwidth_ev = 0` selects the default of ten loss rates.
typedef struct PolaritonCavity {
  double center_energy_ev;
  double strength;
  double polarization[3];
  double loss_rate_ev;
  double mode_spacing_ev;
  double window_halfwidth_ev;
} PolaritonCavity;

typedef struct PolaritonStick {
  double energy_ev;
  double strength_eva2;
  double photonic_weight;
} PolaritonStick;

typedef struct PolaritonLowerMetrics {
  uintptr_t state;
  double energy_ev;
  double peak_absorption_eva2;
  double photonic_weight;
  double effective_dipole_ea;
} PolaritonLowerMetrics;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *polariton_version(void);

// Message of the last failed call on this thread, or NULL.
// The pointer stays valid until the next library call on this thread.
const char *polariton_last_error_message(void);

// Builds an excitation set from `count` energies (eV) and `3 * count`
// dipole components (e·Å, xyz interleaved).
//
// # Safety
// `energies` must hold `count` values and `dipoles` `3 * count` values;
// `out` must be a valid pointer.
enum PolaritonStatus polariton_excitations_new(const double *energies,
                                               const double *dipoles,
                                               uintptr_t count,
                                               struct PolaritonExcitationSet **out);

// Reads an excitation CSV (or `.json`) file.
//
// # Safety
// `path` must be a NUL-terminated string; `out` must be a valid pointer.
enum PolaritonStatus polariton_excitations_read(const char *path,
                                                struct PolaritonExcitationSet **out);

// Loads a bundled system by name (`pristine`, `CHB`, `CBCB`, `CBVN`).
//
// # Safety
// `name` must be a NUL-terminated string; `out` must be a valid pointer.
enum PolaritonStatus polariton_excitations_bundled(const char *name,
                                                   struct PolaritonExcitationSet **out);

// Number of excitations, or 0 for a null handle.
//
// # Safety
// `set` must be null or a live handle.
uintptr_t polariton_excitations_len(const struct PolaritonExcitationSet *set);

// # Safety
// `set` must be null or a handle not yet freed.
void polariton_excitations_free(struct PolaritonExcitationSet *set);

// Coupling ħg (eV) between one transition and one cavity mode.
//
// # Safety
// `dipole` and `polarization` must each point to 3 values; `out` must be valid.
enum PolaritonStatus polariton_coupling_rate(double energy_ev,
                                             const double *dipole,
                                             double mode_energy_ev,
                                             const double *polarization,
                                             double strength,
                                             double *out);

// Solves `set` against `cavity` with `model` (a [`PolaritonModel`] value).
//
// # Safety
// `set` and `cavity` must be valid; `out` must be a valid pointer.
enum PolaritonStatus polariton_solve(const struct PolaritonExcitationSet *set,
                                     const struct PolaritonCavity *cavity,
                                     uint32_t model,
                                     struct PolaritonSolution **out);

// Number of polariton states, or 0 for a null handle.
//
// # Safety
// `sol` must be null or a live handle.
uintptr_t polariton_solution_len(const struct PolaritonSolution *sol);

// Polariton energies in eV, ascending.
//
// # Safety
// `sol` must be valid; `buf` must hold `capacity` values.
enum PolaritonStatus polariton_solution_energies(const struct PolaritonSolution *sol,
                                                 double *buf,
                                                 uintptr_t capacity,
                                                 uintptr_t *out_len);

// Photonic weight of every state.
//
// # Safety
// `sol` must be valid; `buf` must hold `capacity` values.
enum PolaritonStatus polariton_solution_photonic_weights(const struct PolaritonSolution *sol,
                                                         double *buf,
                                                         uintptr_t capacity,
                                                         uintptr_t *out_len);

// Stick spectrum along `axis` (a [`PolaritonAxis`] value).
//
// # Safety
// `sol` must be valid; `buf` must hold `capacity` sticks.
enum PolaritonStatus polariton_solution_sticks(const struct PolaritonSolution *sol,
                                               uint32_t axis,
                                               struct PolaritonStick *buf,
                                               uintptr_t capacity,
                                               uintptr_t *out_len);

// Lower-polariton metrics along `axis`.
//
// # Safety
// `sol` and `out` must be valid.
enum PolaritonStatus polariton_solution_lower_polariton(const struct PolaritonSolution *sol,
                                                        uint32_t axis,
                                                        struct PolaritonLowerMetrics *out);

// # Safety
// `sol` must be null or a handle not yet freed.
void polariton_solution_free(struct PolaritonSolution *sol);

// Lorentzian-broadened absorption on the grid `lo, lo + step, …, ≤ hi`.
//
// # Safety
// `sticks` must hold `count` sticks; `buf` must hold `capacity` values.
enum PolaritonStatus polariton_broaden(const struct PolaritonStick *sticks,
                                       uintptr_t count,
                                       double gamma_ev,
                                       double step_ev,
                                       double lo_ev,
                                       double hi_ev,
                                       double *buf,
                                       uintptr_t capacity,
                                       uintptr_t *out_len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* POLARITON_H */
