#ifndef ENTANGLE_H
#define ENTANGLE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Largest party count accepted by the GHZ and W constructors.
#define ENT_MAX_QUBITS 12

typedef enum EntStatus {
  ENT_STATUS_OK = 0,
  ENT_STATUS_NULL_POINTER = 1,
  ENT_STATUS_INVALID_ARGUMENT = 2,
  ENT_STATUS_INVALID_STATE = 3,
  ENT_STATUS_UNSUPPORTED_DIMS = 4,
  ENT_STATUS_PARSE = 5,
  ENT_STATUS_NUMERICAL = 6,
  // The caller's buffer is too short; the required length was written.
  ENT_STATUS_BUFFER_TOO_SMALL = 7,
  ENT_STATUS_PANIC = 8,
} EntStatus;

typedef enum EntSloccClass {
  ENT_SLOCC_CLASS_PRODUCT = 0,
  ENT_SLOCC_CLASS_BISEPARABLE1_23 = 1,
  ENT_SLOCC_CLASS_BISEPARABLE2_13 = 2,
  ENT_SLOCC_CLASS_BISEPARABLE3_12 = 3,
  ENT_SLOCC_CLASS_W = 4,
  ENT_SLOCC_CLASS_GHZ = 5,
} EntSloccClass;

// Opaque pure-state handle. Release with [`ent_state_free`].
typedef struct EntState EntState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Library version as a static NUL-terminated string.
const char *ent_version(void);

// Message for the most recent failure on this thread, or NULL.
//
// The pointer stays valid until the next failing call on the same thread.
const char *ent_last_error(void);

// Build a state from local dimensions and amplitudes.
//
// `im` may be NULL for real amplitudes. The state must already be normalized.
//
// # Safety
// `dims` must point to `n_parties` values; `re` (and `im` if non-NULL) to `len`.
enum EntStatus ent_state_new(const size_t *dims,
                             size_t n_parties,
                             const double *re,
                             const double *im,
                             size_t len,
                             struct EntState **out);

// Parse a pure state from the JSON state-file format.
//
// # Safety
// `json` must be a NUL-terminated string.
enum EntStatus ent_state_from_json(const char *json, struct EntState **out);

// # Safety
// `out` must be writable.
enum EntStatus ent_state_ghz(size_t n_qubits, struct EntState **out);

// # Safety
// `out` must be writable.
enum EntStatus ent_state_w(size_t n_qubits, struct EntState **out);

// Release a state. NULL is ignored.
//
// # Safety
// `state` must come from this library and not be freed twice.
void ent_state_free(struct EntState *state);

// # Safety
// `state` must be a live handle; `out` writable.
enum EntStatus ent_state_dim(const struct EntState *state, size_t *out);

// # Safety
// `state` must be a live handle; `out` writable.
enum EntStatus ent_state_n_parties(const struct EntState *state, size_t *out);

// Copy amplitudes into `re`/`im`, each of capacity `cap`.
//
// # Safety
// `re` and `im` must hold `cap` doubles; `out_len` writable.
enum EntStatus ent_state_amplitudes(const struct EntState *state,
                                    double *re,
                                    double *im,
                                    size_t cap,
                                    size_t *out_len);

// Serialize a state to JSON. Free the result with [`ent_string_free`].
//
// # Safety
// `state` must be a live handle; `out` writable.
enum EntStatus ent_state_to_json(const struct EntState *state, char **out);

// # Safety
// `s` must come from this library and not be freed twice.
void ent_string_free(char *s);

// Entanglement entropy in bits across the cut `cut | complement`.
//
// # Safety
// `cut` must point to `n_cut` labels; `out` writable.
enum EntStatus ent_entanglement_entropy(const struct EntState *state,
                                        const size_t *cut,
                                        size_t n_cut,
                                        double *out);

// Squared Schmidt coefficients in descending order.
//
// # Safety
// `buf` must hold `cap` doubles; `cut` must point to `n_cut` labels.
enum EntStatus ent_schmidt_coefficients(const struct EntState *state,
                                        const size_t *cut,
                                        size_t n_cut,
                                        double *buf,
                                        size_t cap,
                                        size_t *out_len);

// # Safety
// `state` must be a live two-qubit handle; `out` writable.
enum EntStatus ent_concurrence(const struct EntState *state, double *out);

// # Safety
// `state` must be a live three-qubit handle; `out` writable.
enum EntStatus ent_three_tangle(const struct EntState *state, double *out);

// # Safety
// `state` must be a live three-qubit handle; `out` writable.
enum EntStatus ent_slocc_classify(const struct EntState *state, enum EntSloccClass *out);

// Geometric measure with the given restart count and seed.
//
// # Safety
// `state` must be a live handle; `out` writable.
enum EntStatus ent_geometric_measure(const struct EntState *state,
                                     size_t restarts,
                                     uint64_t seed,
                                     double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ENTANGLE_H */
