//! C ABI for the `lpeg` crate.
//!
//! All functions follow the same protocol: results come back through
//! out-pointers, the return value is an [`LpegStatus`], and a non-OK
//! status leaves a human-readable message retrievable with
//! [`lpeg_last_error`]. Handles are opaque; every `*_new`/`*_parse`
//! constructor is paired with a `*_free`, and freeing a null pointer is
//! a no-op. Strings cross the boundary as NUL-terminated UTF-8.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};

use lpeg::{
    consume, is_lpeg, lang_member, lpeg_to_dfa, parse_grammar, Dfa, Error, Grammar, MatchMode,
    MatchResult,
};

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpegStatus {
    LpegOk = 0,
    /// A required pointer argument was null.
    LpegErrNullArgument = 1,
    /// An input string was not valid UTF-8.
    LpegErrInvalidUtf8 = 2,
    /// The grammar (or DFA description) failed to parse.
    LpegErrSyntax = 3,
    /// The grammar parses but is not linear, so it cannot be compiled.
    LpegErrNotLpeg = 4,
    /// Determinization exceeded the caller's state budget.
    LpegErrStateBudget = 5,
    LpegErrOther = 6,
}

/// Whether a grammar must consume the whole input or just some prefix.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpegMode {
    LpegModeExact = 0,
    LpegModePrefix = 1,
}

impl From<LpegMode> for MatchMode {
    fn from(mode: LpegMode) -> MatchMode {
        match mode {
            LpegMode::LpegModeExact => MatchMode::Exact,
            LpegMode::LpegModePrefix => MatchMode::Prefix,
        }
    }
}

/// Opaque parsed grammar.
pub struct LpegGrammar(Grammar);

/// Opaque deterministic automaton.
pub struct LpegDfa(Dfa);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn fail(status: LpegStatus, msg: &str) -> LpegStatus {
    let msg = CString::new(msg.replace('\0', "?")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
    status
}

fn fail_with(err: Error) -> LpegStatus {
    let status = match err {
        Error::Syntax { .. } | Error::InvalidDfa(_) | Error::Json(_) => LpegStatus::LpegErrSyntax,
        Error::NotLpeg(_) | Error::NotWellFormed(_) | Error::RecursionGuard(_) => {
            LpegStatus::LpegErrNotLpeg
        }
        Error::StateBudgetExceeded(_) => LpegStatus::LpegErrStateBudget,
        _ => LpegStatus::LpegErrOther,
    };
    fail(status, &err.to_string())
}

/// # Safety
/// `s` must be a valid NUL-terminated string (or null, which fails).
unsafe fn utf8_arg<'a>(s: *const c_char) -> Result<&'a str, LpegStatus> {
    if s.is_null() {
        return Err(fail(LpegStatus::LpegErrNullArgument, "null string argument"));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(LpegStatus::LpegErrInvalidUtf8, "string is not valid UTF-8"))
}

fn out_arg<'a, T>(p: *mut T) -> Result<&'a mut T, LpegStatus> {
    if p.is_null() {
        Err(fail(LpegStatus::LpegErrNullArgument, "null out-pointer"))
    } else {
        Ok(unsafe { &mut *p })
    }
}

fn handle_arg<'a, T>(p: *const T) -> Result<&'a T, LpegStatus> {
    if p.is_null() {
        Err(fail(LpegStatus::LpegErrNullArgument, "null handle"))
    } else {
        Ok(unsafe { &*p })
    }
}

/// Message describing the most recent failure on this thread.
///
/// The pointer stays valid until the next failing call from the same
/// thread; do not free it.
#[no_mangle]
pub extern "C" fn lpeg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Frees a string returned by this library (e.g. `lpeg_dfa_to_json`).
///
/// # Safety
/// `s` must be null or a pointer previously returned by this library
/// and not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lpeg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses grammar source text into a new handle.
///
/// # Safety
/// `text` must be a valid NUL-terminated string; `out` must be a valid
/// pointer. On success `*out` owns the grammar and must be released
/// with `lpeg_grammar_free`.
#[no_mangle]
pub unsafe extern "C" fn lpeg_grammar_parse(
    text: *const c_char,
    out: *mut *mut LpegGrammar,
) -> LpegStatus {
    let (text, out) = match (utf8_arg(text), out_arg(out)) {
        (Ok(t), Ok(o)) => (t, o),
        (Err(s), _) | (_, Err(s)) => return s,
    };
    match parse_grammar(text) {
        Ok(g) => {
            *out = Box::into_raw(Box::new(LpegGrammar(g)));
            LpegStatus::LpegOk
        }
        Err(e) => fail_with(e),
    }
}

/// Releases a grammar handle. Null is a no-op.
///
/// # Safety
/// `g` must be null or an unreleased pointer from `lpeg_grammar_parse`.
#[no_mangle]
pub unsafe extern "C" fn lpeg_grammar_free(g: *mut LpegGrammar) {
    if !g.is_null() {
        drop(Box::from_raw(g));
    }
}

/// Sets `*out` to whether the grammar is linear.
///
/// # Safety
/// `g` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn lpeg_grammar_is_lpeg(g: *const LpegGrammar, out: *mut bool) -> LpegStatus {
    let (g, out) = match (handle_arg(g), out_arg(out)) {
        (Ok(g), Ok(o)) => (g, o),
        (Err(s), _) | (_, Err(s)) => return s,
    };
    *out = is_lpeg(&lpeg::desugar::desugar_keep_stars(&g.0)).is_lpeg;
    LpegStatus::LpegOk
}

/// Runs the grammar's start expression on `input` and sets `*out` to
/// the number of characters consumed, or -1 on a parse failure.
///
/// # Safety
/// `g`, `input` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn lpeg_grammar_consume(
    g: *const LpegGrammar,
    input: *const c_char,
    out: *mut i64,
) -> LpegStatus {
    let (g, input, out) = match (handle_arg(g), utf8_arg(input), out_arg(out)) {
        (Ok(g), Ok(i), Ok(o)) => (g, i, o),
        (Err(s), _, _) | (_, Err(s), _) | (_, _, Err(s)) => return s,
    };
    match consume(&g.0, &g.0.start.clone(), input) {
        Ok(MatchResult::Consumed(n)) => {
            *out = n as i64;
            LpegStatus::LpegOk
        }
        Ok(MatchResult::Fail) => {
            *out = -1;
            LpegStatus::LpegOk
        }
        Err(e) => fail_with(e),
    }
}

/// Sets `*out` to whether `input` is in the grammar's language under
/// the given mode, using the reference interpreter.
///
/// # Safety
/// `g`, `input` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn lpeg_grammar_matches(
    g: *const LpegGrammar,
    input: *const c_char,
    mode: LpegMode,
    out: *mut bool,
) -> LpegStatus {
    let (g, input, out) = match (handle_arg(g), utf8_arg(input), out_arg(out)) {
        (Ok(g), Ok(i), Ok(o)) => (g, i, o),
        (Err(s), _, _) | (_, Err(s), _) | (_, _, Err(s)) => return s,
    };
    match lang_member(&g.0, input, mode.into()) {
        Ok(b) => {
            *out = b;
            LpegStatus::LpegOk
        }
        Err(e) => fail_with(e),
    }
}

/// Compiles a linear grammar to a minimal DFA.
///
/// `state_budget` bounds the number of states explored during
/// determinization; exceeding it returns `LpegErrStateBudget`.
///
/// # Safety
/// `g` and `out` must be valid pointers. On success `*out` owns the
/// automaton and must be released with `lpeg_dfa_free`.
#[no_mangle]
pub unsafe extern "C" fn lpeg_grammar_compile(
    g: *const LpegGrammar,
    mode: LpegMode,
    state_budget: usize,
    out: *mut *mut LpegDfa,
) -> LpegStatus {
    let (g, out) = match (handle_arg(g), out_arg(out)) {
        (Ok(g), Ok(o)) => (g, o),
        (Err(s), _) | (_, Err(s)) => return s,
    };
    match lpeg_to_dfa(&g.0, mode.into(), state_budget) {
        Ok(dfa) => {
            *out = Box::into_raw(Box::new(LpegDfa(dfa)));
            LpegStatus::LpegOk
        }
        Err(e) => fail_with(e),
    }
}

/// Releases a DFA handle. Null is a no-op.
///
/// # Safety
/// `d` must be null or an unreleased pointer from this library.
#[no_mangle]
pub unsafe extern "C" fn lpeg_dfa_free(d: *mut LpegDfa) {
    if !d.is_null() {
        drop(Box::from_raw(d));
    }
}

/// Number of states in the automaton, or 0 for a null handle.
///
/// # Safety
/// `d` must be null or a valid handle.
#[no_mangle]
pub unsafe extern "C" fn lpeg_dfa_state_count(d: *const LpegDfa) -> usize {
    if d.is_null() {
        0
    } else {
        (*d).0.state_count()
    }
}

/// Sets `*out` to whether the automaton accepts `input`.
///
/// Characters outside the automaton's alphabet simply fail to match;
/// they are not an error.
///
/// # Safety
/// `d`, `input` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn lpeg_dfa_matches(
    d: *const LpegDfa,
    input: *const c_char,
    out: *mut bool,
) -> LpegStatus {
    let (d, input, out) = match (handle_arg(d), utf8_arg(input), out_arg(out)) {
        (Ok(d), Ok(i), Ok(o)) => (d, i, o),
        (Err(s), _, _) | (_, Err(s), _) | (_, _, Err(s)) => return s,
    };
    *out = d.0.matches(input);
    LpegStatus::LpegOk
}

/// Serializes the automaton to JSON. The caller frees the result with
/// `lpeg_string_free`.
///
/// # Safety
/// `d` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn lpeg_dfa_to_json(
    d: *const LpegDfa,
    out: *mut *mut c_char,
) -> LpegStatus {
    let (d, out) = match (handle_arg(d), out_arg(out)) {
        (Ok(d), Ok(o)) => (d, o),
        (Err(s), _) | (_, Err(s)) => return s,
    };
    match CString::new(d.0.to_json()) {
        Ok(s) => {
            *out = s.into_raw();
            LpegStatus::LpegOk
        }
        Err(_) => fail(LpegStatus::LpegErrOther, "serialized DFA contains NUL"),
    }
}

/// Deserializes an automaton from the JSON produced by
/// `lpeg_dfa_to_json`.
///
/// # Safety
/// `text` and `out` must be valid pointers. On success `*out` must be
/// released with `lpeg_dfa_free`.
#[no_mangle]
pub unsafe extern "C" fn lpeg_dfa_from_json(
    text: *const c_char,
    out: *mut *mut LpegDfa,
) -> LpegStatus {
    let (text, out) = match (utf8_arg(text), out_arg(out)) {
        (Ok(t), Ok(o)) => (t, o),
        (Err(s), _) | (_, Err(s)) => return s,
    };
    match Dfa::from_json(text) {
        Ok(dfa) => {
            *out = Box::into_raw(Box::new(LpegDfa(dfa)));
            LpegStatus::LpegOk
        }
        Err(e) => fail_with(e),
    }
}
