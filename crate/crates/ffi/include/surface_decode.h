#ifndef SURFACE_DECODE_H
#define SURFACE_DECODE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SdBackend {
  SD_BACKEND_EXACT = 0,
  SD_BACKEND_FLOAT = 1,
} SdBackend;

typedef enum SdFamily {
  SD_FAMILY_TORIC = 0,
  SD_FAMILY_PLANAR = 1,
  SD_FAMILY_ROTATED = 2,
} SdFamily;

typedef enum SdSide {
  SD_SIDE_PRIMAL = 0,
  SD_SIDE_DUAL = 1,
} SdSide;

typedef enum SdSolver {
  SD_SOLVER_BLOSSOM = 0,
  SD_SOLVER_SEPARATOR = 1,
} SdSolver;

typedef enum SdStatus {
  SD_STATUS_OK = 0,
  SD_STATUS_NULL_POINTER = 1,
  SD_STATUS_INVALID_ARGUMENT = 2,
  SD_STATUS_INVALID_SYNDROME = 3,
  SD_STATUS_INTERNAL = 4,
  SD_STATUS_PANIC = 5,
} SdStatus;

/**
 * Primal and dual lattice of one code.
 */
typedef struct SdCode SdCode;

/**
 * Most-likely-coset decoder for one side of a code at fixed noise.
 */
typedef struct SdSmlc SdSmlc;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failure on this thread; empty if none. The pointer
 * stays valid until the next failing call on the same thread.
 */
const char *sd_last_error(void);

/**
 * Builds the primal and dual lattice of a code of distance `distance`.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum SdStatus sd_code_new(enum SdFamily family, size_t distance, struct SdCode **out);

/**
 * # Safety
 * `code` must come from `sd_code_new` and not have been freed; null is
 * ignored.
 */
void sd_code_free(struct SdCode *code);

/**
 * Qubit and check counts of one side.
 *
 * # Safety
 * `code` must be a live handle; `n_qubits` and `n_checks` writable.
 */
enum SdStatus sd_code_sizes(const struct SdCode *code,
                            enum SdSide side,
                            size_t *n_qubits,
                            size_t *n_checks);

/**
 * Syndrome of an error on one side.
 *
 * # Safety
 * `error` holds `n_qubits` bytes and `syndrome` has room for `n_checks`.
 */
enum SdStatus sd_syndrome(const struct SdCode *code,
                          enum SdSide side,
                          const uint8_t *error,
                          size_t n_qubits,
                          uint8_t *syndrome,
                          size_t n_checks);

/**
 * Whether `a + b` is a stabilizer of the side, i.e. the two errors are
 * logically equivalent.
 *
 * # Safety
 * `a` and `b` hold `n_qubits` bytes each; `equivalent` is writable.
 */
enum SdStatus sd_equivalent(const struct SdCode *code,
                            enum SdSide side,
                            const uint8_t *a,
                            const uint8_t *b,
                            size_t n_qubits,
                            bool *equivalent);

/**
 * Minimum-weight correction for a syndrome; `weight` receives its size.
 *
 * # Safety
 * `syndrome` holds `n_checks` bytes, `correction` has room for
 * `n_qubits`, and `weight` is writable or null.
 */
enum SdStatus sd_decode_smw(const struct SdCode *code,
                            enum SdSide side,
                            enum SdSolver solver,
                            const uint8_t *syndrome,
                            size_t n_checks,
                            uint8_t *correction,
                            size_t n_qubits,
                            uint64_t *weight);

/**
 * Most-likely-coset decoder for independent flips with probability
 * `p_num / p_den` on every qubit (at most 1/2).
 *
 * # Safety
 * `code` must be a live handle and `out` writable.
 */
enum SdStatus sd_smlc_new(const struct SdCode *code,
                          enum SdSide side,
                          uint64_t p_num,
                          uint64_t p_den,
                          enum SdBackend backend,
                          struct SdSmlc **out);

/**
 * # Safety
 * `dec` must come from `sd_smlc_new` and not have been freed; null is
 * ignored.
 */
void sd_smlc_free(struct SdSmlc *dec);

/**
 * Writes a representative of the most likely coset. `chosen` receives its
 * index among the candidates (0 or 1; 0 to 3 on the torus) and `tie`
 * whether another candidate scored the same; either may be null.
 *
 * # Safety
 * `syndrome` holds `n_checks` bytes and `correction` has room for
 * `n_qubits`.
 */
enum SdStatus sd_smlc_decode(const struct SdSmlc *dec,
                             const uint8_t *syndrome,
                             size_t n_checks,
                             uint8_t *correction,
                             size_t n_qubits,
                             size_t *chosen,
                             bool *tie);

/**
 * Library version as a static NUL-terminated string.
 */
const char *sd_version(void);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* SURFACE_DECODE_H */
