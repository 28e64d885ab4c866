#ifndef FMQ_H
#define FMQ_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Columns of a simulated trajectory, in CSV order.
 */
typedef enum FmqColumn {
  FMQ_COLUMN_TIME = 0,
  FMQ_COLUMN_COHERENCE_ABS = 1,
  FMQ_COLUMN_PG = 2,
  FMQ_COLUMN_PE = 3,
  FMQ_COLUMN_GAMMA1 = 4,
  FMQ_COLUMN_GAMMA2 = 5,
  FMQ_COLUMN_GAMMA3 = 6,
  FMQ_COLUMN_BIG_GAMMA = 7,
  FMQ_COLUMN_GAMMA_TILDE = 8,
  /**
   * 1.0 where the dissipative rates are undefined, else 0.0.
   */
  FMQ_COLUMN_SINGULAR = 9,
} FmqColumn;

typedef enum FmqStatus {
  FMQ_STATUS_OK = 0,
  FMQ_STATUS_NULL_POINTER = 1,
  FMQ_STATUS_INVALID_UTF8 = 2,
  FMQ_STATUS_INVALID_CONFIG = 3,
  FMQ_STATUS_SOLVER = 4,
  FMQ_STATUS_BRACKET = 5,
  FMQ_STATUS_BUFFER_TOO_SMALL = 6,
  FMQ_STATUS_PANIC = 7,
} FmqStatus;

/**
 * A simulation configuration.
 */
typedef struct FmqConfig FmqConfig;

/**
 * A finished simulation.
 */
typedef struct FmqSimulation FmqSimulation;

/**
 * A finished threshold search.
 */
typedef struct FmqThreshold FmqThreshold;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer
 * stays valid until the next `fmq_*` call on the same thread.
 */
const char *fmq_last_error(void);

/**
 * Library version as a static NUL-terminated string.
 */
const char *fmq_version(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void fmq_string_free(char *s);

/**
 * Parse a JSON configuration; missing fields take their defaults.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
enum FmqStatus fmq_config_from_json(const char *json, struct FmqConfig **out);

/**
 * Base configuration of a named preset.
 *
 * # Safety
 * `name` must be a NUL-terminated string; `out` must be writable.
 */
enum FmqStatus fmq_config_preset(const char *name, struct FmqConfig **out);

/**
 * Serialize a configuration to JSON. Release the string with
 * [`fmq_string_free`].
 *
 * # Safety
 * `config` must be a live handle; `out` must be writable.
 */
enum FmqStatus fmq_config_to_json(const struct FmqConfig *config, char **out);

/**
 * # Safety
 * `config` must be null or a handle not yet freed.
 */
void fmq_config_free(struct FmqConfig *config);

/**
 * Validate and simulate `config`.
 *
 * # Safety
 * `config` must be a live handle; `out` must be writable.
 */
enum FmqStatus fmq_simulate(const struct FmqConfig *config, struct FmqSimulation **out);

/**
 * Number of grid samples, or 0 for a null handle.
 *
 * # Safety
 * `sim` must be null or a live handle.
 */
size_t fmq_simulation_len(const struct FmqSimulation *sim);

/**
 * Copy one column into `buf`, which must hold at least
 * [`fmq_simulation_len`] values.
 *
 * # Safety
 * `sim` must be a live handle; `buf` must point to `len` writable doubles.
 */
enum FmqStatus fmq_simulation_copy_column(const struct FmqSimulation *sim,
                                          enum FmqColumn column,
                                          double *buf,
                                          size_t len);

/**
 * Coherence time of the simulated trajectory. `*found` is false when the
 * envelope never reaches `|ζ(0)|/e` on the grid, in which case `*t_c` is
 * left untouched.
 *
 * # Safety
 * `sim` must be a live handle; `t_c` and `found` must be writable.
 */
enum FmqStatus fmq_simulation_coherence_time(const struct FmqSimulation *sim,
                                             double *t_c,
                                             bool *found);

/**
 * # Safety
 * `sim` must be null or a handle not yet freed.
 */
void fmq_simulation_free(struct FmqSimulation *sim);

/**
 * Bisect for the dephasing coupling at which driven and undriven coherence
 * times match, with default tolerances.
 *
 * # Safety
 * `config` must be a live handle; `out` must be writable.
 */
enum FmqStatus fmq_threshold(const struct FmqConfig *config,
                             double alpha_lo,
                             double alpha_hi,
                             struct FmqThreshold **out);

/**
 * Threshold coupling, or NaN for a null handle.
 *
 * # Safety
 * `result` must be null or a live handle.
 */
double fmq_threshold_alpha(const struct FmqThreshold *result);

/**
 * Full result, including the bisection history, as JSON. Release the
 * string with [`fmq_string_free`].
 *
 * # Safety
 * `result` must be a live handle; `out` must be writable.
 */
enum FmqStatus fmq_threshold_to_json(const struct FmqThreshold *result, char **out);

/**
 * # Safety
 * `result` must be null or a handle not yet freed.
 */
void fmq_threshold_free(struct FmqThreshold *result);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* FMQ_H */
