#ifndef PMDS_H
#define PMDS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stddef.h>
#include <stdint.h>
#include <stdbool.h>

/**
 * Result of every fallible call.
 */
typedef enum PmdsStatus {
  PMDS_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  PMDS_STATUS_NULL_POINTER = 1,
  /**
   * Arguments are inconsistent (lengths, parameters, non-field values).
   */
  PMDS_STATUS_INVALID_ARGUMENT = 2,
  /**
   * Text could not be parsed as a code file.
   */
  PMDS_STATUS_PARSE = 3,
  /**
   * The field is too small for the requested construction.
   */
  PMDS_STATUS_FIELD_TOO_SMALL = 4,
  /**
   * The erasure pattern cannot be corrected.
   */
  PMDS_STATUS_UNCORRECTABLE = 5,
  /**
   * The received word agrees with no codeword.
   */
  PMDS_STATUS_INCONSISTENT = 6,
  /**
   * The output buffer is too small; the required size was reported.
   */
  PMDS_STATUS_BUFFER_TOO_SMALL = 7,
  /**
   * The operation is not available for these parameters.
   */
  PMDS_STATUS_UNSUPPORTED = 8,
  /**
   * An internal panic was caught.
   */
  PMDS_STATUS_PANIC = 9,
} PmdsStatus;

/**
 * Which PMDS check [`pmds_code_verify`] runs.
 */
typedef enum PmdsVerifyMode {
  /**
   * Brute-force block and puncture checks.
   */
  PMDS_VERIFY_MODE_ORACLE = 0,
  /**
   * Standard-form classification; needs one global parity.
   */
  PMDS_VERIFY_MODE_CLASSIFY = 1,
  /**
   * Every erasure pattern against the correctable family.
   */
  PMDS_VERIFY_MODE_MR = 2,
} PmdsVerifyMode;

/**
 * A generator matrix with its block parameters.
 */
typedef struct PmdsCode PmdsCode;

/**
 * Decoder state for one code; safe to share between threads for reading.
 */
typedef struct PmdsDecoder PmdsDecoder;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *pmds_version(void);

/**
 * Copies the calling thread's last error message into `buf`. Returns the
 * message length including the NUL; copies nothing if `len` is too small.
 *
 * # Safety
 * `buf` must be null or valid for `len` bytes.
 */
size_t pmds_last_error_message(char *buf, size_t len);

/**
 * Parses a code file (`field`, `params` and matrix rows).
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be valid for writes.
 */
enum PmdsStatus pmds_code_parse(const char *text, struct PmdsCode **out);

/**
 * Builds a PMDS code with `m` blocks of locality `ell`, local redundancies
 * `r[0..m]` and `s` global parities over the field named by `field`
 * (e.g. `"gf(7)"`, `"gf(2^3)"`). Supported: `s = 1`, and `ell = 1` with
 * any `1 <= s < m`.
 *
 * # Safety
 * `r` must be valid for `m` reads, `field` NUL-terminated, `out` writable.
 */
enum PmdsStatus pmds_code_construct(size_t m,
                                    size_t ell,
                                    const size_t *r,
                                    size_t s,
                                    const char *field,
                                    struct PmdsCode **out);

/**
 * Frees a code. Null is ignored.
 *
 * # Safety
 * `code` must come from this library and not be used afterwards.
 */
void pmds_code_free(struct PmdsCode *code);

/**
 * Reports the dimension `k`, length `n` and field order `q`. Null
 * outputs are skipped.
 *
 * # Safety
 * `code` must be a live handle; non-null outputs must be writable.
 */
enum PmdsStatus pmds_code_dims(const struct PmdsCode *code, size_t *k, size_t *n, uint32_t *q);

/**
 * Writes the canonical code file text, NUL-terminated, into `buf`.
 * `needed` receives the required size including the NUL, so a first call
 * with a null buffer can size the second.
 *
 * # Safety
 * `code` must be live; `buf` null or valid for `len` bytes; `needed` null or writable.
 */
enum PmdsStatus pmds_code_to_text(const struct PmdsCode *code,
                                  char *buf,
                                  size_t len,
                                  size_t *needed);

/**
 * Checks whether the code is PMDS (or, for [`PmdsVerifyMode::Mr`],
 * maximally recoverable) and stores the verdict in `is_pmds`.
 *
 * # Safety
 * `code` must be live and `is_pmds` writable.
 */
enum PmdsStatus pmds_code_verify(const struct PmdsCode *code,
                                 enum PmdsVerifyMode mode,
                                 bool *is_pmds);

/**
 * `codeword[0..n] = message[0..k] · G`.
 *
 * # Safety
 * `message` valid for `k` reads, `codeword` for `n` writes.
 */
enum PmdsStatus pmds_code_encode(const struct PmdsCode *code,
                                 const uint32_t *message,
                                 size_t k,
                                 uint32_t *codeword,
                                 size_t n);

/**
 * Prepares a decoder. Codes with one global parity that admit a block
 * standard form get the structured decoder; every code gets the generic
 * rank-based fallback.
 *
 * # Safety
 * `code` must be live and `out` writable.
 */
enum PmdsStatus pmds_decoder_new(const struct PmdsCode *code, struct PmdsDecoder **out);

/**
 * Frees a decoder. Null is ignored.
 *
 * # Safety
 * `decoder` must come from this library and not be used afterwards.
 */
void pmds_decoder_free(struct PmdsDecoder *decoder);

/**
 * Recovers a codeword. `values[i]` is ignored where `erased[i]` is
 * nonzero. On success `codeword[0..n]` holds the result.
 *
 * # Safety
 * `values`, `erased` valid for `n` reads and `codeword` for `n` writes.
 */
enum PmdsStatus pmds_decode(const struct PmdsDecoder *decoder,
                            const uint32_t *values,
                            const uint8_t *erased,
                            size_t n,
                            uint32_t *codeword);

/**
 * Smallest field order admitting a PMDS code with one global parity,
 * locality `ell` and largest local redundancy `max_r` (0 if either is 0).
 */
size_t pmds_field_size_bound_s1(size_t ell, size_t max_r);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PMDS_H */
