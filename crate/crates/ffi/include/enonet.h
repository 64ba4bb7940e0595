#ifndef ENONET_H
#define ENONET_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum EnonetStatus {
  ENONET_STATUS_OK = 0,
  ENONET_STATUS_NULL_POINTER = 1,
  ENONET_STATUS_INVALID_ARGUMENT = 2,
  ENONET_STATUS_UNSUPPORTED = 3,
  ENONET_STATUS_PARSE = 4,
  ENONET_STATUS_STATE_INVALID = 5,
  ENONET_STATUS_IO = 6,
  ENONET_STATUS_BUFFER_TOO_SMALL = 7,
  ENONET_STATUS_PANIC = 8,
} EnonetStatus;

typedef enum EnonetGhost {
  ENONET_GHOST_CONSTANT_EXTRAPOLATE = 0,
  ENONET_GHOST_REFLECT = 1,
  ENONET_GHOST_PERIODIC = 2,
} EnonetGhost;

typedef enum EnonetProblem {
  ENONET_PROBLEM_SOD = 0,
  ENONET_PROBLEM_SHOCK_ENTROPY = 1,
} EnonetProblem;

/**
 * A one-dimensional multiresolution representation.
 */
typedef struct EnonetMultiRes EnonetMultiRes;

/**
 * A ReLU network.
 */
typedef struct EnonetNetwork EnonetNetwork;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the message of the last failed call on this thread into `buf`
 * (NUL-terminated, truncated to `len`). Returns the full length including
 * the terminator; `buf` may be null to query it.
 */
size_t enonet_last_error(char *buf, size_t len);

/**
 * Builds a named network: `interp3`, `interp4`, `interpN` (order `p`),
 * `rec2`, `rec3`, `sr-class`, `sr-reg`, `trained3` or `trained4`.
 * `guard` and `eps` are used by the ENO-SR networks only.
 */
enum EnonetStatus enonet_network_build(const char *name,
                                       size_t p,
                                       double guard,
                                       double eps,
                                       struct EnonetNetwork **out);

/**
 * Parses a network from its JSON description.
 */
enum EnonetStatus enonet_network_from_json(const char *json, struct EnonetNetwork **out);

/**
 * Writes the JSON description of `net` into `buf` (NUL-terminated).
 * `needed` receives the required size including the terminator.
 */
enum EnonetStatus enonet_network_to_json(const struct EnonetNetwork *net,
                                         char *buf,
                                         size_t len,
                                         size_t *needed);

/**
 * Input width, or 0 for a null handle.
 */
size_t enonet_network_input_width(const struct EnonetNetwork *net);

/**
 * Output width, or 0 for a null handle.
 */
size_t enonet_network_output_width(const struct EnonetNetwork *net);

/**
 * Raw network outputs for one input vector.
 */
enum EnonetStatus enonet_network_forward(const struct EnonetNetwork *net,
                                         const double *input,
                                         size_t input_len,
                                         double *out,
                                         size_t out_len);

/**
 * Class chosen by the network's output rule.
 */
enum EnonetStatus enonet_network_classify(const struct EnonetNetwork *net,
                                          const double *input,
                                          size_t input_len,
                                          size_t *class_out);

void enonet_network_free(struct EnonetNetwork *net);

/**
 * Refines `n` node values to `2n - 1` with ENO of order `p`.
 */
enum EnonetStatus enonet_eno_predict(const double *coarse,
                                     size_t n,
                                     size_t p,
                                     enum EnonetGhost ghost,
                                     double *out,
                                     size_t out_len);

/**
 * Refines `n` node values to `2n - 1` with second-order ENO-SR.
 */
enum EnonetStatus enonet_enosr_predict(const double *coarse,
                                       size_t n,
                                       enum EnonetGhost ghost,
                                       double guard,
                                       double *out,
                                       size_t out_len);

/**
 * Encodes `n` node values over `k` levels with thresholds `eps * t^(K-k)`.
 */
enum EnonetStatus enonet_multires_encode(const double *fine,
                                         size_t n,
                                         size_t p,
                                         double eps,
                                         double t,
                                         size_t k,
                                         enum EnonetGhost ghost,
                                         struct EnonetMultiRes **out);

/**
 * Number of values produced by [`enonet_multires_decode`].
 */
size_t enonet_multires_len(const struct EnonetMultiRes *rep);

/**
 * Fraction of detail coefficients that are zero; NaN for a null handle.
 */
double enonet_multires_compression_rate(const struct EnonetMultiRes *rep);

enum EnonetStatus enonet_multires_decode(const struct EnonetMultiRes *rep,
                                         double *out,
                                         size_t out_len);

/**
 * Serializes to the `ENOMR1` container format. `needed` receives the byte
 * count.
 */
enum EnonetStatus enonet_multires_to_bytes(const struct EnonetMultiRes *rep,
                                           uint8_t *buf,
                                           size_t len,
                                           size_t *needed);

/**
 * Parses a one-dimensional `ENOMR1` container.
 */
enum EnonetStatus enonet_multires_from_bytes(const uint8_t *buf,
                                             size_t len,
                                             struct EnonetMultiRes **out);

void enonet_multires_free(struct EnonetMultiRes *rep);

/**
 * Solves a shock-tube problem on `n` cells with ENO of order `p` and writes
 * density, velocity and pressure at the cell centers. Each output buffer
 * needs `n` elements.
 */
enum EnonetStatus enonet_euler_solve(enum EnonetProblem problem,
                                     size_t n,
                                     size_t p,
                                     double cfl,
                                     double t_final,
                                     double *rho,
                                     double *velocity,
                                     double *pressure,
                                     size_t len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ENONET_H */
