#ifndef OPRADIUS_H
#define OPRADIUS_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Outcome of a call.
typedef enum OprStatus {
  OPR_STATUS_OK = 0,
  // A required pointer argument was null.
  OPR_STATUS_NULL_POINTER = 1,
  // Bad dimension, options, norm selector, sampler or mismatched sizes.
  OPR_STATUS_INVALID_ARGUMENT = 2,
  // Malformed JSON or a string that is not UTF-8.
  OPR_STATUS_PARSE = 3,
  // A numerical kernel failed.
  OPR_STATUS_NUMERICAL = 4,
  OPR_STATUS_IO = 5,
  // The library panicked. This is a bug.
  OPR_STATUS_PANIC = 6,
} OprStatus;

// Opaque square complex matrix.
typedef struct OprMatrix OprMatrix;

// Opaque norm descriptor.
typedef struct OprNorm OprNorm;

// Grid options; see [`opr_options_default`].
typedef struct OprOptions {
  size_t theta_grid;
  size_t t_grid;
  size_t phi_grid;
  size_t refine_passes;
  double refine_tol;
  size_t escalation_rounds;
} OprOptions;

// A radius value with its maximizing angles.
typedef struct OprRadius {
  double value;
  double theta;
  double t;
  double phi;
  size_t escalations_used;
} OprRadius;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null after a
// successful call. Owned by the library; valid until the next call.
const char *opr_last_error(void);

// Releases a string returned by the library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void opr_string_free(char *s);

// Writes the default grid options.
//
// # Safety
// `out` must be valid for writes.
enum OprStatus opr_options_default(struct OprOptions *out);

// Builds an `n x n` matrix from `2 n²` doubles: row-major entries, each as
// real part followed by imaginary part.
//
// # Safety
// `data` must point to `len` readable doubles and `out` must be valid for
// writes.
enum OprStatus opr_matrix_new(size_t n, const double *data, size_t len, struct OprMatrix **out);

// Parses a matrix from its JSON file format.
//
// # Safety
// `json` must be a NUL-terminated string and `out` valid for writes.
enum OprStatus opr_matrix_from_json(const char *json, struct OprMatrix **out);

// Serializes a matrix to JSON. Free the result with [`opr_string_free`].
//
// # Safety
// `m` must be a live handle and `out` valid for writes.
enum OprStatus opr_matrix_to_json(const struct OprMatrix *m, char **out);

// Writes the dimension of `m`.
//
// # Safety
// `m` must be a live handle and `out` valid for writes.
enum OprStatus opr_matrix_dim(const struct OprMatrix *m, size_t *out);

// Copies the entries of `m` into `data` in the layout of
// [`opr_matrix_new`]. `len` must be at least `2 n²`.
//
// # Safety
// `m` must be a live handle and `data` valid for `len` writes.
enum OprStatus opr_matrix_entries(const struct OprMatrix *m, double *data, size_t len);

// Releases a matrix. Null is ignored.
//
// # Safety
// `m` must come from this library and not have been freed.
void opr_matrix_free(struct OprMatrix *m);

// Parses a norm selector: `op`, `hs`, `trace`, `schatten:<p>` or `wnum`.
//
// # Safety
// `selector` must be a NUL-terminated string and `out` valid for writes.
enum OprStatus opr_norm_parse(const char *selector, struct OprNorm **out);

// Releases a norm. Null is ignored.
//
// # Safety
// `norm` must come from this library and not have been freed.
void opr_norm_free(struct OprNorm *norm);

// `N(m)`.
//
// # Safety
// Handles must be live and `out` valid for writes.
enum OprStatus opr_norm_evaluate(const struct OprNorm *norm,
                                 const struct OprMatrix *m,
                                 double *out);

// Generalized numerical radius `w_N(t)`. `opts` may be null for defaults.
//
// # Safety
// Handles must be live, `opts` null or readable, `out` valid for writes.
enum OprStatus opr_w_n(const struct OprMatrix *t,
                       const struct OprNorm *norm,
                       const struct OprOptions *opts,
                       struct OprRadius *out);

// Generalized Euclidean operator radius `w_(N,e)(b, c)`.
//
// # Safety
// Handles must be live, `opts` null or readable, `out` valid for writes.
enum OprStatus opr_w_ne(const struct OprMatrix *b,
                        const struct OprMatrix *c,
                        const struct OprNorm *norm,
                        const struct OprOptions *opts,
                        struct OprRadius *out);

// `w_(N,e)(b, c)` through the real-coefficient evaluation path.
//
// # Safety
// Handles must be live, `opts` null or readable, `out` valid for writes.
enum OprStatus opr_w_ne_alpha_beta(const struct OprMatrix *b,
                                   const struct OprMatrix *c,
                                   const struct OprNorm *norm,
                                   const struct OprOptions *opts,
                                   struct OprRadius *out);

// Hilbert-Schmidt numerical radius of `t` in closed form.
//
// # Safety
// `t` must be live and `out` valid for writes.
enum OprStatus opr_w2_closed_form(const struct OprMatrix *t, double *out);

// Hilbert-Schmidt Euclidean operator radius over the reduced `(t, φ)` grid.
//
// # Safety
// Handles must be live, `opts` null or readable, `out` valid for writes.
enum OprStatus opr_w2e_reduced(const struct OprMatrix *b,
                               const struct OprMatrix *c,
                               const struct OprOptions *opts,
                               struct OprRadius *out);

// Lower estimate of the vector-based Euclidean operator radius.
//
// # Safety
// Handles must be live and `out` valid for writes.
enum OprStatus opr_vector_oracle(const struct OprMatrix *b,
                                 const struct OprMatrix *c,
                                 size_t samples,
                                 uint64_t seed,
                                 size_t polish_iters,
                                 double *out);

// Runs every registered check on `(b, c)` for each of `count` norms and
// writes the verdicts as a JSON array. Free the result with
// [`opr_string_free`].
//
// # Safety
// Handles must be live, `norms` must point to `count` live norm handles,
// `opts` null or readable, `out` valid for writes.
enum OprStatus opr_run_suite_json(const struct OprMatrix *b,
                                  const struct OprMatrix *c,
                                  const struct OprNorm *const *norms,
                                  size_t count,
                                  const struct OprOptions *opts,
                                  char **out);

// Draws a seeded sample from a family selector `name[:n]`. `out_b` receives
// the first matrix. `out_c` may be null; otherwise it receives the second
// matrix of the pair (`T*` for `nilpotent-pairs`, an independent draw for
// the other families).
//
// # Safety
// `family` must be a NUL-terminated string, `out_b` valid for writes and
// `out_c` null or valid for writes.
enum OprStatus opr_sample(const char *family,
                          uint64_t seed,
                          struct OprMatrix **out_b,
                          struct OprMatrix **out_c);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* OPRADIUS_H */
