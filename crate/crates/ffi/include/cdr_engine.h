#ifndef CDR_ENGINE_H
#define CDR_ENGINE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes.
typedef enum CdrStatus {
  CDR_STATUS_OK = 0,
  CDR_STATUS_NULL_POINTER = 1,
  CDR_STATUS_INVALID_UTF8 = 2,
  CDR_STATUS_PARSE_ERROR = 3,
  CDR_STATUS_INVALID_ARGUMENT = 4,
  CDR_STATUS_OVERFLOW = 5,
  CDR_STATUS_PANIC = 6,
} CdrStatus;

// Opaque handle to a state of the Fock module.
typedef struct CdrState CdrState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failing call on this thread; empty after a
// success. Valid until the next call into the library on this thread.
const char *cdr_last_error(void);

// Library version, a static string.
const char *cdr_version(void);

// # Safety
// `s` must be null or a string returned by this library, freed once.
void cdr_string_free(char *s);

// Parses a state such as `b[1,-1] g[2,0]^2|0>`.
//
// # Safety
// `text` must be a nul-terminated string, `out` writable.
enum CdrStatus cdr_state_parse(const char *text, struct CdrState **out);

// # Safety
// `s` must be null or a handle from this library, freed once.
void cdr_state_free(struct CdrState *s);

// # Safety
// `s` must be a live handle, `out` writable.
enum CdrStatus cdr_state_to_string(const struct CdrState *s, char **out);

// `A_(n) B`, dropping monomials whose `gamma_0` degree exceeds `cutoff`
// (negative for no cutoff). `truncated` may be null.
//
// # Safety
// `a`, `b` must be live handles, `out` writable.
enum CdrStatus cdr_nth_product(const struct CdrState *a,
                               int64_t n,
                               const struct CdrState *b,
                               int32_t cutoff,
                               struct CdrState **out,
                               bool *truncated);

// Singular part of the OPE of two state literals as JSON.
//
// # Safety
// `a`, `b` must be nul-terminated strings, `out` writable.
enum CdrStatus cdr_ope_json(const char *a, const char *b, int32_t cutoff, char **out);

// The recursive length formula at `(n, r)` as a decimal string.
//
// # Safety
// `out` must be writable.
enum CdrStatus cdr_formula_length(uint32_t n, uint32_t r, char **out);

// The length formula as `u64`; `Overflow` when it does not fit.
//
// # Safety
// `out` must be writable.
enum CdrStatus cdr_formula_length_u64(uint32_t n, uint32_t r, uint64_t *out);

// Partitions of `m` into at most `n` parts; `Overflow` past `u64`.
//
// # Safety
// `out` must be writable.
enum CdrStatus cdr_partitions_at_most(uint32_t n, int64_t m, uint64_t *out);

// Formula against oracle for `r = 1..=r_max` as JSON. A negative cutoff
// selects the default.
//
// # Safety
// `out` must be writable.
enum CdrStatus cdr_character_report_json(uint32_t n, uint32_t r_max, int32_t cutoff, char **out);

// Étaleness of the map from the monoid generated by `gens` (`(3,0);(0,3);(1,1)`)
// into `target` (`N2` or a generator list), induced by the identity of
// the ambient lattice, over a field of characteristic `p` (0 or prime).
//
// # Safety
// `gens`, `target` must be nul-terminated strings, `out` writable.
enum CdrStatus cdr_monoid_etale_json(const char *gens, const char *target, uint64_t p, char **out);

// Checks the transformed generating fields for `t -> f(t)` (a polynomial
// in `g` such as `g+g^2`) under `rule` (`log-second-derivative`,
// `log-jacobian` or `ordinary`; null for the first). The JSON carries a
// `pass` flag; a failing check is still `Ok`.
//
// # Safety
// `f` must be a nul-terminated string, `rule` null or one, `out` writable.
enum CdrStatus cdr_transform_verify_json(const char *f,
                                         size_t order,
                                         uint32_t cutoff,
                                         const char *rule,
                                         char **out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* CDR_ENGINE_H */
