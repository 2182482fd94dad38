#ifndef POCHETTE_H
#define POCHETTE_H

#include <stdbool.h>
#include <stdint.h>

/**
 * Result codes. `Ok` is zero; every other value is a failure.
 */
typedef enum PchStatus {
  PCH_STATUS_OK = 0,
  PCH_STATUS_NULL_POINTER = 1,
  PCH_STATUS_INVALID_UTF8 = 2,
  PCH_STATUS_PARSE = 3,
  PCH_STATUS_INVALID_SLOPE = 4,
  PCH_STATUS_INVALID_DIAGRAM = 5,
  PCH_STATUS_HYPOTHESES_NOT_MET = 6,
  PCH_STATUS_INTERNAL = 7,
} PchStatus;

/**
 * Surgery mode selector for [`pch_surgery_certificate`].
 */
typedef enum PchMode {
  PCH_MODE_ALGEBRAIC = 0,
  PCH_MODE_DIAGRAM = 1,
} PchMode;

/**
 * A validated handle diagram.
 */
typedef struct PchDiagram PchDiagram;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failure on this thread, or null after a success.
 * The pointer stays valid until the next call into this library on the same thread.
 */
const char *pch_last_error_message(void);

/**
 * Library version as a static nul-terminated string.
 */
const char *pch_version(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string returned by this library and not yet freed.
 */
void pch_string_free(char *s);

/**
 * Parses and validates a diagram from JSON.
 *
 * # Safety
 * `json` must be a nul-terminated string; `out` must be valid for a write.
 */
enum PchStatus pch_diagram_from_json(const char *json, struct PchDiagram **out);

/**
 * Releases a diagram. Null is ignored.
 *
 * # Safety
 * `d` must be null or a handle from [`pch_diagram_from_json`] not yet freed.
 */
void pch_diagram_free(struct PchDiagram *d);

/**
 * Homology of the closed manifold as JSON: `profile`, `profile_text`,
 * `euler_characteristic`, `homology_sphere`.
 *
 * # Safety
 * `d` must be a live diagram handle; `out` must be valid for a write.
 */
enum PchStatus pch_diagram_homology_json(const struct PchDiagram *d, char **out);

/**
 * Whether the diagram presents a homology 4-sphere.
 *
 * # Safety
 * `d` must be a live diagram handle; `out` must be valid for a write.
 */
enum PchStatus pch_diagram_is_homology_sphere(const struct PchDiagram *d, bool *out);

/**
 * Move word realising slope `p/q` with mod-2 framing `eps`, e.g. `E2.E1^2`.
 *
 * # Safety
 * `out` must be valid for a write.
 */
enum PchStatus pch_word(int64_t p, int64_t q, int32_t eps, char **out);

/**
 * Whether the synthesized word for `p/q` composes to the expected action.
 *
 * # Safety
 * `out` must be valid for a write.
 */
enum PchStatus pch_word_verify(int64_t p, int64_t q, int32_t eps, bool *out);

/**
 * The natural lift of `p/q` to a word in `m`, `l`.
 *
 * # Safety
 * `out` must be valid for a write.
 */
enum PchStatus pch_natural_lift(int64_t p, int64_t q, char **out);

/**
 * Surgery certificate as JSON for the pochette `"c,u"` in `d`.
 *
 * `hypotheses_json` may be null for the defaults; otherwise it is an object
 * with `t2_zero`, `l_nullhomologous`, `h2_image_constrained`,
 * `simply_connected_result`. Unmet homological hypotheses still yield a
 * certificate, classified as such.
 *
 * # Safety
 * `d` must be a live diagram handle; `pochette` a nul-terminated string;
 * `hypotheses_json` null or nul-terminated; `out` valid for a write.
 */
enum PchStatus pch_surgery_certificate(const struct PchDiagram *d,
                                       const char *pochette,
                                       int64_t p,
                                       int64_t q,
                                       int32_t eps,
                                       const char *hypotheses_json,
                                       enum PchMode mode,
                                       char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* POCHETTE_H */
