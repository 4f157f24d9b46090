#ifndef RESONET_H
#define RESONET_H

/* Generated from the Rust sources by the crate build script; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Outcome of an API call.
 */
typedef enum RnStatus {
  /**
   * Success.
   */
  RN_STATUS_OK = 0,
  /**
   * Input text could not be read or parsed.
   */
  RN_STATUS_PARSE = 1,
  /**
   * A numerical procedure failed (singularity, poor fit, ...).
   */
  RN_STATUS_NUMERIC = 2,
  /**
   * The requested feature (mode, resonance, port) is not present.
   */
  RN_STATUS_FEATURE_NOT_FOUND = 3,
  /**
   * An argument value is out of range.
   */
  RN_STATUS_INVALID_ARGUMENT = 4,
  /**
   * A required pointer argument was null.
   */
  RN_STATUS_NULL_POINTER = 5,
} RnStatus;

/**
 * Opaque parsed-netlist handle.
 */
typedef struct RnNetlist RnNetlist;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread; empty string after
 * a success. Valid until the next API call on the same thread.
 */
const char *rn_last_error_message(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *rn_version(void);

/**
 * Parse a netlist from NUL-terminated text into a new handle.
 *
 * # Safety
 * `text` must point to a NUL-terminated string; `out` must be a valid
 * pointer to receive the handle.
 */
enum RnStatus rn_netlist_parse(const char *text, struct RnNetlist **out);

/**
 * Release a handle from [`rn_netlist_parse`]. A null handle is a no-op.
 *
 * # Safety
 * `net` must be a handle returned by [`rn_netlist_parse`] that has not
 * been freed already, or null.
 */
void rn_netlist_free(struct RnNetlist *net);

/**
 * Number of ports declared in the netlist.
 *
 * # Safety
 * `net` must be a live handle; `out` must be valid to write.
 */
enum RnStatus rn_netlist_port_count(const struct RnNetlist *net, size_t *out);

/**
 * Sweep one scattering coefficient S(row, col) over a linear frequency
 * grid. `row` and `col` are 1-based port numbers. The three output arrays
 * must hold `points` elements; samples where the network is singular are
 * reported as NaN in `out_re`/`out_im`.
 *
 * # Safety
 * `net` must be a live handle; the output arrays must each be valid for
 * `points` writes.
 */
enum RnStatus rn_sweep_pair(const struct RnNetlist *net,
                            size_t row,
                            size_t col,
                            double fmin_hz,
                            double fmax_hz,
                            size_t points,
                            double *out_freq_hz,
                            double *out_re,
                            double *out_im);

/**
 * Find resonant modes of the loaded network in a frequency window.
 * Up to `cap` modes are written to the output arrays (resonant frequency
 * in Hz and decay rate as kappa/2pi in Hz); `out_count` receives the
 * total number found, which may exceed `cap`.
 *
 * # Safety
 * `net` must be a live handle; `out_f_r_hz` and `out_kappa_over_2pi_hz`
 * must be valid for `cap` writes (may be null when `cap` is 0);
 * `out_count` must be valid to write.
 */
enum RnStatus rn_find_modes(const struct RnNetlist *net,
                            double fmin_hz,
                            double fmax_hz,
                            double *out_f_r_hz,
                            double *out_kappa_over_2pi_hz,
                            size_t cap,
                            size_t *out_count);

/**
 * Fit the decay rate of the resonance seen in reflection at the named
 * port, from a line-shape fit over `span_hz` centered on `f_center_hz`.
 *
 * # Safety
 * `net` must be a live handle; `port_name` must be NUL-terminated; the
 * three outputs must be valid to write.
 */
enum RnStatus rn_ringdown_kappa(const struct RnNetlist *net,
                                const char *port_name,
                                double f_center_hz,
                                double span_hz,
                                double *out_f0_hz,
                                double *out_kappa_over_2pi_hz,
                                double *out_residual);

/**
 * Decay rate (rad/s) of a transmissively probed resonator from its
 * coupler transmission magnitude at resonance.
 *
 * # Safety
 * `out_kappa_rad_per_s` must be valid to write.
 */
enum RnStatus rn_kappa_transmissive(double s21_mag, double f0_hz, double *out_kappa_rad_per_s);

/**
 * Decay rate (rad/s) of a reflectively probed resonator (twice the
 * transmissive rate for the same coupler).
 *
 * # Safety
 * `out_kappa_rad_per_s` must be valid to write.
 */
enum RnStatus rn_kappa_reflective(double s21_mag, double f0_hz, double *out_kappa_rad_per_s);

/**
 * Line-to-line coupling coefficient of an ideal backward coupler with
 * voltage coupling `zeta` at modal electrical angle `theta` (radians):
 * the complex S21 of the 4-port.
 *
 * # Safety
 * `out_re` and `out_im` must be valid to write.
 */
enum RnStatus rn_backward_coupler_s21(double zeta, double theta, double *out_re, double *out_im);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RESONET_H */
