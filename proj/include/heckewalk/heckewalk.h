#ifndef HECKEWALK_H
#define HECKEWALK_H

/* C interface to the heckewalk library.
 *
 * Every function returns an hw_status; on failure a description is
 * available from hw_last_error() (thread-local, valid until the next call on
 * the same thread). Strings returned through char** are heap-allocated and
 * must be released with hw_string_free. Rationals cross the interface as
 * strings "p/r" (integers and terminating decimals are also accepted). */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hw_status {
  HW_OK = 0,
  HW_INVALID_ARGUMENT = 1,
  HW_DOMAIN = 2,
  HW_TOO_LARGE = 3,
  HW_NOT_STOCHASTIC = 4,
  HW_BOUNDARY_CONTACT = 5,
  HW_PLATEAU_NOT_REACHED = 6,
  HW_EXCESSIVE_DISCARDS = 7,
  HW_IO = 8,
  HW_INTERNAL = 99
} hw_status;

const char* hw_last_error(void);
const char* hw_status_name(hw_status status);
const char* hw_version(void);
void hw_string_free(char* s);

/* ---- Hecke algebra elements ------------------------------------------- */

typedef struct hw_element hw_element;

/* JSON: {"family":"A"|"B","rank":n,"q":"p/r",
 *        "terms":[{"perm":[w(1),...,w(n)],"coeff":"p/r"}, ...]}
 * where "perm" is the one-line notation of the group element (signed
 * images in type B). */
hw_status hw_element_from_json(const char* json, hw_element** out);
hw_status hw_element_to_json(const hw_element* h, char** out);
/* T_w for the reduced word (last letter acts first). */
hw_status hw_element_basis(char family, int rank, const char* q, const int* word,
                           size_t word_len, hw_element** out);
hw_status hw_element_mul(const hw_element* a, const hw_element* b, hw_element** out);
hw_status hw_element_involution(const hw_element* h, hw_element** out);
/* Writes 1 if the coefficients are nonnegative and sum to 1, else 0. */
hw_status hw_element_is_stochastic(const hw_element* h, int* out);
hw_status hw_element_equal(const hw_element* a, const hw_element* b, int* out);
void hw_element_free(hw_element* h);

/* Exact relation checks (quadratic, braid, associativity on `triples`
 * random triples, anti-homomorphism on `pairs` random stochastic pairs).
 * Writes a JSON report and 1/0 to all_ok. */
hw_status hw_algebra_check(char family, int rank, const char* q, uint64_t seed, int triples,
                           int pairs, char** report_json, int* all_ok);

/* ---- Mallows measure -------------------------------------------------- */

/* `count` arrangements of 1..n, row-major into out[count * n]. */
hw_status hw_mallows_sample(int n, const char* q, uint64_t seed, size_t count, int* out);
/* Exact probability of an arrangement of 1..n as "p/r". */
hw_status hw_mallows_pmf(const int* arrangement, int n, const char* q, char** out);

/* ---- Simulation ------------------------------------------------------- */

/* Receives one JSON line per trial (no trailing newline). A nonzero return
 * stops the run with HW_OK. */
typedef int (*hw_line_callback)(const char* line, void* user);

/* model: masep | halfline | second-class | six-vertex | asep-qm | qtazrp.
 * config_json holds the model parameters (see the README). */
hw_status hw_simulate(const char* model, const char* config_json, double t_max, long trials,
                      uint64_t seed, hw_line_callback callback, void* user);

/* ---- Theory and experiments ------------------------------------------- */

/* name: q-pochhammer | rho | block-occupancy | exit | survival | kappa |
 * alpha-of-kappa | qtazrp-marginal | speed-cdf | reservoir-density;
 * params_json is an object of numeric parameters. */
hw_status hw_theory(const char* name, const char* params_json, double* out);

/* name: exit | survival | qtazrp-marginal | second-class-speed;
 * format: "csv" or "json". Writes the serialized reports and the largest
 * |z-score| among reports that have a theory value (NaN if none). */
hw_status hw_experiment(const char* name, const char* config_json, const char* format,
                        char** report, double* max_abs_z);

#ifdef __cplusplus
}
#endif

#endif /* HECKEWALK_H */
