#ifndef QOSC_H
#define QOSC_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum QoscStatus {
  QOSC_STATUS_OK = 0,
  QOSC_STATUS_NULL_POINTER = 1,
  QOSC_STATUS_INVALID_ARGUMENT = 2,
  QOSC_STATUS_DOMAIN = 3,
  QOSC_STATUS_POLE = 4,
  QOSC_STATUS_CONVERGENCE = 5,
  QOSC_STATUS_INSUFFICIENT_CUTOFF = 6,
  QOSC_STATUS_EVALUATION = 7,
  QOSC_STATUS_BUFFER_TOO_SMALL = 8,
  QOSC_STATUS_PANIC = 9,
} QoscStatus;

typedef enum QoscOperatorKind {
  // `a_i`
  QOSC_OPERATOR_KIND_ANNIHILATOR = 0,
  // `a†_i`
  QOSC_OPERATOR_KIND_CREATOR = 1,
  // `N_i`
  QOSC_OPERATOR_KIND_NUMBER = 2,
  // `q^{N_i}`
  QOSC_OPERATOR_KIND_SCALE = 3,
  // `q^{N_i + ... + N_n}`; mode `n + 1` is the identity.
  QOSC_OPERATOR_KIND_SCALE_PRODUCT = 4,
  // `(a_i + a†_i)/sqrt(2)`
  QOSC_OPERATOR_KIND_POSITION = 5,
  // `-i (a_i - a†_i)/sqrt(2)`
  QOSC_OPERATOR_KIND_MOMENTUM = 6,
  // Sum of `(a_i a†_i + a†_i a_i)/2`; the mode argument is ignored.
  QOSC_OPERATOR_KIND_HAMILTONIAN = 7,
} QoscOperatorKind;

// Sparse operator on a [`QoscSpace`].
typedef struct QoscOperator QoscOperator;

// Truncated Fock space.
typedef struct QoscSpace QoscSpace;

typedef struct QoscComplex {
  double re;
  double im;
} QoscComplex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. Owned by the
// library; valid until the next call.
const char *qosc_last_error_message(void);

// `[x] = (q^x - 1)/(q - 1)`.
//
// # Safety
// `out` must be valid for writes.
enum QoscStatus qosc_q_number(double q, double x, double *out);

// `[m]! = [1][2]...[m]`.
//
// # Safety
// `out` must be valid for writes.
enum QoscStatus qosc_q_factorial(double q, size_t m, double *out);

// `exp_q(x)` from its power series; needs `|x| < 1/(1-q)`.
//
// # Safety
// `out` must be valid for writes.
enum QoscStatus qosc_q_exp_series(double q,
                                  struct QoscComplex x,
                                  double tol,
                                  struct QoscComplex *out);

// `exp_q(x)` from its infinite product.
//
// # Safety
// `out` must be valid for writes.
enum QoscStatus qosc_q_exp_product(double q,
                                   struct QoscComplex x,
                                   double tol,
                                   struct QoscComplex *out);

// Jackson integral of `f` over `[0, 1/(1-q)]`. `f(x, user)` is called
// at each node; a non-finite return aborts the integral.
//
// # Safety
// `out` must be valid for writes; `f` is called with `user` unchanged.
enum QoscStatus qosc_jackson_integral(double q,
                                      double (*f)(double x, void *user),
                                      void *user,
                                      double tol,
                                      double *out);

// Creates the space of `n_modes` modes with occupations `0..=cutoff`.
//
// # Safety
// `out` must be valid for writes.
enum QoscStatus qosc_space_new(size_t n_modes, size_t cutoff, struct QoscSpace **out);

// # Safety
// `space` must come from [`qosc_space_new`] and not be used afterwards.
void qosc_space_free(struct QoscSpace *space);

// Basis dimension `(cutoff + 1)^n_modes`, or 0 for a null handle.
//
// # Safety
// `space` must be null or a live handle.
size_t qosc_space_dim(const struct QoscSpace *space);

// Basis index of the occupation vector `occupations[0..n_modes]`.
//
// # Safety
// `space` must be a live handle, `occupations` must hold `n_modes`
// entries and `out` must be valid for writes.
enum QoscStatus qosc_space_index(const struct QoscSpace *space,
                                 const size_t *occupations,
                                 size_t n_modes,
                                 size_t *out);

// Builds operator `kind` for 1-based `mode`.
//
// # Safety
// `space` must be a live handle and `out` valid for writes.
enum QoscStatus qosc_operator_new(const struct QoscSpace *space,
                                  double q,
                                  enum QoscOperatorKind kind,
                                  size_t mode,
                                  struct QoscOperator **out);

// # Safety
// `op` must come from [`qosc_operator_new`] and not be used afterwards.
void qosc_operator_free(struct QoscOperator *op);

// # Safety
// `op` must be null or a live handle.
size_t qosc_operator_dim(const struct QoscOperator *op);

// Stored nonzero count, or 0 for a null handle.
//
// # Safety
// `op` must be null or a live handle.
size_t qosc_operator_nnz(const struct QoscOperator *op);

// Copies the nonzero entries as coordinate triplets. `written` receives
// the nonzero count; with `capacity` below it nothing is copied and
// `BufferTooSmall` is returned.
//
// # Safety
// `op` must be a live handle; `rows`, `cols` and `values` must each hold
// `capacity` elements; `written` must be valid for writes.
enum QoscStatus qosc_operator_entries(const struct QoscOperator *op,
                                      size_t *rows,
                                      size_t *cols,
                                      struct QoscComplex *values,
                                      size_t capacity,
                                      size_t *written);

// `output = op * input`, both of length `len == dim`.
//
// # Safety
// `op` must be a live handle; `input` and `output` must hold `len`
// elements and must not overlap.
enum QoscStatus qosc_operator_apply(const struct QoscOperator *op,
                                    const struct QoscComplex *input,
                                    struct QoscComplex *output,
                                    size_t len);

// Runs a verification command (`"relations"`, `"spectrum"`, `"report"`,
// ...) and returns the JSON report. `config_json` is a JSON object whose
// fields override the defaults (`q`, `modes`, `cutoff`, `tol`, `margin`,
// `z`, `s`, `t`, `levels`, `degeneracy_tol`, `sweep`); null means all
// defaults. `passed` receives 1 when every check passed. The report must
// be released with [`qosc_string_free`].
//
// # Safety
// `command` must be a NUL-terminated string, `config_json` null or
// NUL-terminated, and `report_json` and `passed` valid for writes.
enum QoscStatus qosc_run(const char *command,
                         const char *config_json,
                         char **report_json,
                         int32_t *passed);

// # Safety
// `s` must be null or a string returned by this library.
void qosc_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QOSC_H */
