#ifndef MODSYS_H
#define MODSYS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Result of every fallible call.
 */
typedef enum ModsysStatus {
  MODSYS_STATUS_OK = 0,
  /*
   A required pointer argument was null.
   */
  MODSYS_STATUS_NULL_ARG = 1,
  /*
   A string argument was not valid UTF-8.
   */
  MODSYS_STATUS_INVALID_UTF8 = 2,
  /*
   The document text has a syntax error or an undefined or duplicate name.
   */
  MODSYS_STATUS_PARSE = 3,
  /*
   The document or the requested system is ill-formed.
   */
  MODSYS_STATUS_VALIDATION = 4,
  /*
   Evaluation failed, for example because an enumeration exceeds the ceiling.
   */
  MODSYS_STATUS_SEMANTIC = 5,
  /*
   No system, module or instance has the requested name.
   */
  MODSYS_STATUS_NOT_FOUND = 6,
  /*
   The library panicked; the handle passed in must not be used again.
   */
  MODSYS_STATUS_PANIC = 7,
} ModsysStatus;

/*
 A parsed document.
 */
typedef struct ModsysDocument ModsysDocument;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Parses a document. On success `*out` receives a new handle.

 # Safety
 `text` is a NUL-terminated string; `out` is writable.
 */
enum ModsysStatus modsys_document_parse(const char *text, struct ModsysDocument **out);

/*
 Releases a document. Null is ignored.

 # Safety
 `doc` is null or a handle from [`modsys_document_parse`] not yet freed.
 */
void modsys_document_free(struct ModsysDocument *doc);

/*
 The models of a system or module, one canonical structure per line.

 # Safety
 `doc` is a live handle, `name` a NUL-terminated string, `out` writable.
 */
enum ModsysStatus modsys_models(const struct ModsysDocument *doc, const char *name, char **out);

/*
 The operational models over the system's own symbols, one per line.

 # Safety
 As [`modsys_models`].
 */
enum ModsysStatus modsys_op_models(const struct ModsysDocument *doc, const char *name, char **out);

/*
 Checks well-formedness: `*well_formed` receives 1 or 0. When `report` is
 not null it receives the signature, followed by one line per violation.

 # Safety
 `doc` is a live handle, `name` a NUL-terminated string, `well_formed`
 writable, `report` null or writable.
 */
enum ModsysStatus modsys_check(const struct ModsysDocument *doc,
                               const char *name,
                               int32_t *well_formed,
                               char **report);

/*
 The models of a system expanding one of the document's instances, one
 per line; empty when none exists.

 # Safety
 `doc` is a live handle, `name` and `instance` NUL-terminated strings,
 `out` writable.
 */
enum ModsysStatus modsys_expand(const struct ModsysDocument *doc,
                                const char *name,
                                const char *instance,
                                char **out);

/*
 Compares the model-theoretic and operational semantics: `*equal`
 receives 1 when they agree and 0 otherwise.

 # Safety
 `doc` is a live handle, `name` a NUL-terminated string, `equal` writable.
 */
enum ModsysStatus modsys_equiv(const struct ModsysDocument *doc, const char *name, int32_t *equal);

/*
 Releases a string returned by the library. Null is ignored.

 # Safety
 `s` is null or a string from this library not yet freed.
 */
void modsys_string_free(char *s);

/*
 The message of the last failed call on this thread, or null. The pointer
 stays valid until the next call into the library on this thread.
 */
const char *modsys_last_error_message(void);

/*
 The library version as a static string.
 */
const char *modsys_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MODSYS_H */
