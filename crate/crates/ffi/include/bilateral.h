#ifndef BILATERAL_H
#define BILATERAL_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum BilateralMode {
  BILATERAL_MODE_ASYMMETRIC = 0,
  BILATERAL_MODE_UNIFIED = 1,
  BILATERAL_MODE_INDEPENDENT = 2,
} BilateralMode;

typedef enum BilateralReading {
  BILATERAL_READING_ABSENCE = 0,
  BILATERAL_READING_UNIFIED = 1,
} BilateralReading;

typedef enum BilateralRegime {
  BILATERAL_REGIME_EMPTY = 0,
  BILATERAL_REGIME_DISJOINT = 1,
  BILATERAL_REGIME_ARBITRARY = 2,
} BilateralRegime;

typedef enum BilateralStatus {
  BILATERAL_STATUS_OK = 0,
  BILATERAL_STATUS_NULL_POINTER = 1,
  BILATERAL_STATUS_INVALID_UTF8 = 2,
  BILATERAL_STATUS_PARSE_ERROR = 3,
  // No derivation or countermodel within the bound.
  BILATERAL_STATUS_NOT_FOUND = 4,
  // A proof script was checked and rejected.
  BILATERAL_STATUS_REJECTED = 5,
  BILATERAL_STATUS_INVALID_ARGUMENT = 6,
  BILATERAL_STATUS_PANIC = 7,
} BilateralStatus;

// A derivation produced by `bilateral_prove`.
typedef struct BilateralDerivation BilateralDerivation;

// A parsed sequent.
typedef struct BilateralSequent BilateralSequent;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message describing the last failure on this thread, or NULL. The pointer
// stays valid until the next failing call on the same thread.
const char *bilateral_last_error(void);

// Library version as a static string.
const char *bilateral_version(void);

// # Safety
// `s` must be NULL or a string returned by this library, not yet freed.
void bilateral_string_free(char *s);

// Parses `text` (for example `"p; q |-+ p & q"`) into a new handle.
//
// # Safety
// `text` must be a NUL-terminated string and `out` a valid pointer.
enum BilateralStatus bilateral_sequent_parse(const char *text, struct BilateralSequent **out);

// Canonical text of a sequent.
//
// # Safety
// `s` must be NULL or a live handle.
char *bilateral_sequent_to_string(const struct BilateralSequent *s);

// # Safety
// `s` must be NULL or a handle from `bilateral_sequent_parse`, not yet freed.
void bilateral_sequent_free(struct BilateralSequent *s);

// Searches for a derivation with at most `budget` rule applications per
// branch. Returns `NotFound` (and sets `*out` to NULL) if there is none.
//
// # Safety
// `s` must be a live handle and `out` a valid pointer.
enum BilateralStatus bilateral_prove(const struct BilateralSequent *s,
                                     uint32_t budget,
                                     struct BilateralDerivation **out);

// Number of rule applications on the longest branch.
//
// # Safety
// `d` must be NULL or a live handle.
size_t bilateral_derivation_height(const struct BilateralDerivation *d);

// The derivation as a proof script, accepted by `bilateral_check_script`.
//
// # Safety
// `d` must be NULL or a live handle.
char *bilateral_derivation_script(const struct BilateralDerivation *d);

// # Safety
// `d` must be NULL or a handle from `bilateral_prove`, not yet freed.
void bilateral_derivation_free(struct BilateralDerivation *d);

// Checks a base or meta proof script. Returns `Ok` if accepted and
// `Rejected` otherwise; the reason is in `bilateral_last_error`.
//
// # Safety
// `script` must be a NUL-terminated string.
enum BilateralStatus bilateral_check_script(const char *script,
                                            enum BilateralMode mode,
                                            bool include_zeta);

// Looks for a countermodel with at most `max_worlds` worlds (1 to 4). On
// success `*model_json` receives the model in the JSON model-file format.
//
// # Safety
// `s` must be a live handle and `model_json` a valid pointer.
enum BilateralStatus bilateral_countermodel(const struct BilateralSequent *s,
                                            uint32_t max_worlds,
                                            bool exclusive,
                                            char **model_json);

// Audits every rule over atoms {p, q} with the given bounds and writes the
// JSON report to `*report_json`.
//
// # Safety
// `report_json` must be a valid pointer.
enum BilateralStatus bilateral_audit_json(enum BilateralReading reading,
                                          enum BilateralRegime regime,
                                          enum BilateralMode mode,
                                          uint32_t max_worlds,
                                          uint32_t max_depth,
                                          char **report_json);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BILATERAL_H */
