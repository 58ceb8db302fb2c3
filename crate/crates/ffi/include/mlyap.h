#ifndef MLYAP_H
#define MLYAP_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum MlyapForm {
  MLYAP_FORM_MAX = 0,
  MLYAP_FORM_SUM = 1,
} MlyapForm;

// Result codes. Values 2–4 match the command-line exit codes.
typedef enum MlyapStatus {
  MLYAP_STATUS_OK = 0,
  MLYAP_STATUS_NULL_POINTER = 1,
  MLYAP_STATUS_INPUT = 2,
  MLYAP_STATUS_PRECONDITION = 3,
  MLYAP_STATUS_NUMERICAL = 4,
  MLYAP_STATUS_PANIC = 5,
} MlyapStatus;

// Opaque Minkowski–Lyapunov certificate.
typedef struct MlyapCertificate MlyapCertificate;

// Opaque set description.
typedef struct MlyapSet MlyapSet;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failure on this thread, or null. The pointer stays
// valid until the next failing call on the same thread.
const char *mlyap_last_error(void);

// Release a string returned by this library.
//
// # Safety
// `s` must come from this library and not have been freed.
void mlyap_string_free(char *s);

// Spectral radius of the row-major `n × n` matrix `data`.
//
// # Safety
// `data` must point to `n*n` doubles and `out` to one writable double.
enum MlyapStatus mlyap_spectral_radius(const double *data, size_t n, double *out);

// Parse a set description (same JSON as the command line).
//
// # Safety
// `json` must be a nul-terminated string and `out` a writable pointer slot.
enum MlyapStatus mlyap_set_from_json(const char *json, struct MlyapSet **out);

// # Safety
// `set` must come from [`mlyap_set_from_json`] and not have been freed.
void mlyap_set_free(struct MlyapSet *set);

// Ambient dimension, or 0 for a null handle.
//
// # Safety
// `set` must be null or a live handle.
size_t mlyap_set_dim(const struct MlyapSet *set);

// Gauge of `set` at the `n`-vector `x`.
//
// # Safety
// `set` must be a live handle, `x` must point to `n` doubles, `out` to one.
enum MlyapStatus mlyap_set_gauge(const struct MlyapSet *set,
                                 const double *x,
                                 size_t n,
                                 double *out);

// Support function of `set` in the direction `y`.
//
// # Safety
// As for [`mlyap_set_gauge`].
enum MlyapStatus mlyap_set_support(const struct MlyapSet *set,
                                   const double *y,
                                   size_t n,
                                   double *out);

// Construct a certificate for the row-major `n × n` matrix `a` over `q`.
// A NaN `gamma` selects the default `(ρ(A)+1)/2`.
//
// # Safety
// `a` must point to `n*n` doubles, `q` must be a live handle and `out` a
// writable pointer slot.
enum MlyapStatus mlyap_certificate_construct(const double *a,
                                             size_t n,
                                             const struct MlyapSet *q,
                                             enum MlyapForm form,
                                             double gamma,
                                             size_t cap,
                                             struct MlyapCertificate **out);

// Parse a certificate from its JSON form.
//
// # Safety
// `json` must be nul-terminated and `out` a writable pointer slot.
enum MlyapStatus mlyap_certificate_from_json(const char *json, struct MlyapCertificate **out);

// Serialize a certificate; release the string with [`mlyap_string_free`].
//
// # Safety
// `cert` must be a live handle and `out` a writable pointer slot.
enum MlyapStatus mlyap_certificate_to_json(const struct MlyapCertificate *cert, char **out);

// # Safety
// `cert` must be null or a live handle.
void mlyap_certificate_free(struct MlyapCertificate *cert);

// Certified power `k`, or 0 for a null handle.
//
// # Safety
// `cert` must be null or a live handle.
size_t mlyap_certificate_k(const struct MlyapCertificate *cert);

// Contraction factor, or NaN for a null handle.
//
// # Safety
// `cert` must be null or a live handle.
double mlyap_certificate_gamma(const struct MlyapCertificate *cert);

// Value of the Lyapunov function at `x`.
//
// # Safety
// `cert` must be a live handle, `x` must point to `n` doubles, `out` to one.
enum MlyapStatus mlyap_certificate_eval(const struct MlyapCertificate *cert,
                                        const double *x,
                                        size_t n,
                                        double *out);

// Largest sampled violation of the decrease inequality.
//
// # Safety
// `cert` must be a live handle and `max_violation` one writable double.
enum MlyapStatus mlyap_certificate_verify(const struct MlyapCertificate *cert,
                                          size_t samples,
                                          uint64_t seed,
                                          double *max_violation);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MLYAP_H */
