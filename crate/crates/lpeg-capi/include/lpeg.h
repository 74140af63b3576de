#ifndef LPEG_H
#define LPEG_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result code of every fallible call.
 */
typedef enum {
  LPEG_OK = 0,
  /**
   * A required pointer argument was null.
   */
  LPEG_ERR_NULL_ARGUMENT = 1,
  /**
   * An input string was not valid UTF-8.
   */
  LPEG_ERR_INVALID_UTF8 = 2,
  /**
   * The grammar (or DFA description) failed to parse.
   */
  LPEG_ERR_SYNTAX = 3,
  /**
   * The grammar parses but is not linear, so it cannot be compiled.
   */
  LPEG_ERR_NOT_LPEG = 4,
  /**
   * Determinization exceeded the caller's state budget.
   */
  LPEG_ERR_STATE_BUDGET = 5,
  LPEG_ERR_OTHER = 6,
} LpegStatus;

/**
 * Whether a grammar must consume the whole input or just some prefix.
 */
typedef enum {
  LPEG_MODE_EXACT = 0,
  LPEG_MODE_PREFIX = 1,
} LpegMode;

/**
 * Opaque deterministic automaton.
 */
typedef struct LpegDfa LpegDfa;

/**
 * Opaque parsed grammar.
 */
typedef struct LpegGrammar LpegGrammar;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the most recent failure on this thread.
 *
 * The pointer stays valid until the next failing call from the same
 * thread; do not free it.
 */
const char *lpeg_last_error(void);

/**
 * Frees a string returned by this library (e.g. `lpeg_dfa_to_json`).
 *
 * # Safety
 * `s` must be null or a pointer previously returned by this library
 * and not yet freed.
 */
void lpeg_string_free(char *s);

/**
 * Parses grammar source text into a new handle.
 *
 * # Safety
 * `text` must be a valid NUL-terminated string; `out` must be a valid
 * pointer. On success `*out` owns the grammar and must be released
 * with `lpeg_grammar_free`.
 */
LpegStatus lpeg_grammar_parse(const char *text, LpegGrammar **out);

/**
 * Releases a grammar handle. Null is a no-op.
 *
 * # Safety
 * `g` must be null or an unreleased pointer from `lpeg_grammar_parse`.
 */
void lpeg_grammar_free(LpegGrammar *g);

/**
 * Sets `*out` to whether the grammar is linear.
 *
 * # Safety
 * `g` and `out` must be valid pointers.
 */
LpegStatus lpeg_grammar_is_lpeg(const LpegGrammar *g, bool *out);

/**
 * Runs the grammar's start expression on `input` and sets `*out` to
 * the number of characters consumed, or -1 on a parse failure.
 *
 * # Safety
 * `g`, `input` and `out` must be valid pointers.
 */
LpegStatus lpeg_grammar_consume(const LpegGrammar *g, const char *input, int64_t *out);

/**
 * Sets `*out` to whether `input` is in the grammar's language under
 * the given mode, using the reference interpreter.
 *
 * # Safety
 * `g`, `input` and `out` must be valid pointers.
 */
LpegStatus lpeg_grammar_matches(const LpegGrammar *g, const char *input, LpegMode mode, bool *out);

/**
 * Compiles a linear grammar to a minimal DFA.
 *
 * `state_budget` bounds the number of states explored during
 * determinization; exceeding it returns `LpegErrStateBudget`.
 *
 * # Safety
 * `g` and `out` must be valid pointers. On success `*out` owns the
 * automaton and must be released with `lpeg_dfa_free`.
 */
LpegStatus lpeg_grammar_compile(const LpegGrammar *g,
                                LpegMode mode,
                                size_t state_budget,
                                LpegDfa **out);

/**
 * Releases a DFA handle. Null is a no-op.
 *
 * # Safety
 * `d` must be null or an unreleased pointer from this library.
 */
void lpeg_dfa_free(LpegDfa *d);

/**
 * Number of states in the automaton, or 0 for a null handle.
 *
 * # Safety
 * `d` must be null or a valid handle.
 */
size_t lpeg_dfa_state_count(const LpegDfa *d);

/**
 * Sets `*out` to whether the automaton accepts `input`.
 *
 * Characters outside the automaton's alphabet simply fail to match;
 * they are not an error.
 *
 * # Safety
 * `d`, `input` and `out` must be valid pointers.
 */
LpegStatus lpeg_dfa_matches(const LpegDfa *d, const char *input, bool *out);

/**
 * Serializes the automaton to JSON. The caller frees the result with
 * `lpeg_string_free`.
 *
 * # Safety
 * `d` and `out` must be valid pointers.
 */
LpegStatus lpeg_dfa_to_json(const LpegDfa *d, char **out);

/**
 * Deserializes an automaton from the JSON produced by
 * `lpeg_dfa_to_json`.
 *
 * # Safety
 * `text` and `out` must be valid pointers. On success `*out` must be
 * released with `lpeg_dfa_free`.
 */
LpegStatus lpeg_dfa_from_json(const char *text, LpegDfa **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LPEG_H */
