//! Exercises the C ABI end to end, from Rust, through the exported
//! functions only — the same sequence a C caller would use.

use std::ffi::{CStr, CString};
use std::ptr;

use lpeg_capi::*;

fn grammar(text: &str) -> *mut LpegGrammar {
    let text = CString::new(text).unwrap();
    let mut g = ptr::null_mut();
    let status = unsafe { lpeg_grammar_parse(text.as_ptr(), &mut g) };
    assert_eq!(status, LpegStatus::LpegOk);
    g
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(lpeg_last_error()) }
        .to_str()
        .unwrap()
        .to_owned()
}

#[test]
fn parse_check_compile_match_round_trip() {
    let g = grammar("A <- 'a' A / 'b'");
    unsafe {
        let mut linear = false;
        assert_eq!(lpeg_grammar_is_lpeg(g, &mut linear), LpegStatus::LpegOk);
        assert!(linear);

        let input = CString::new("aab").unwrap();
        let mut consumed = 0i64;
        assert_eq!(
            lpeg_grammar_consume(g, input.as_ptr(), &mut consumed),
            LpegStatus::LpegOk
        );
        assert_eq!(consumed, 3);

        let mut dfa = ptr::null_mut();
        assert_eq!(
            lpeg_grammar_compile(g, LpegMode::LpegModeExact, 1 << 16, &mut dfa),
            LpegStatus::LpegOk
        );
        assert_eq!(lpeg_dfa_state_count(dfa), 3); // a*b: loop, accept, dead

        for (word, expected) in [("aab", true), ("aba", false), ("", false)] {
            let word_c = CString::new(word).unwrap();
            let mut hit = false;
            assert_eq!(
                lpeg_dfa_matches(dfa, word_c.as_ptr(), &mut hit),
                LpegStatus::LpegOk
            );
            assert_eq!(hit, expected, "{word:?}");

            let mut via_interp = false;
            assert_eq!(
                lpeg_grammar_matches(g, word_c.as_ptr(), LpegMode::LpegModeExact, &mut via_interp),
                LpegStatus::LpegOk
            );
            assert_eq!(via_interp, expected, "{word:?}");
        }

        lpeg_dfa_free(dfa);
        lpeg_grammar_free(g);
    }
}

#[test]
fn prefix_mode_differs_from_exact() {
    let g = grammar("%alphabet ab\nA <- 'a' A / 'b'");
    unsafe {
        let input = CString::new("ba").unwrap();
        for (mode, expected) in [
            (LpegMode::LpegModeExact, false),
            (LpegMode::LpegModePrefix, true),
        ] {
            let mut dfa = ptr::null_mut();
            assert_eq!(
                lpeg_grammar_compile(g, mode, 1 << 16, &mut dfa),
                LpegStatus::LpegOk
            );
            let mut hit = false;
            assert_eq!(
                lpeg_dfa_matches(dfa, input.as_ptr(), &mut hit),
                LpegStatus::LpegOk
            );
            assert_eq!(hit, expected);
            lpeg_dfa_free(dfa);
        }
        lpeg_grammar_free(g);
    }
}

#[test]
fn dfa_survives_a_json_round_trip() {
    let g = grammar("A <- 'a' 'b' / 'c'");
    unsafe {
        let mut dfa = ptr::null_mut();
        assert_eq!(
            lpeg_grammar_compile(g, LpegMode::LpegModeExact, 1 << 16, &mut dfa),
            LpegStatus::LpegOk
        );

        let mut json = ptr::null_mut();
        assert_eq!(lpeg_dfa_to_json(dfa, &mut json), LpegStatus::LpegOk);
        let mut back = ptr::null_mut();
        assert_eq!(lpeg_dfa_from_json(json, &mut back), LpegStatus::LpegOk);
        assert_eq!(lpeg_dfa_state_count(back), lpeg_dfa_state_count(dfa));

        let ab = CString::new("ab").unwrap();
        let mut hit = false;
        assert_eq!(lpeg_dfa_matches(back, ab.as_ptr(), &mut hit), LpegStatus::LpegOk);
        assert!(hit);

        lpeg_string_free(json);
        lpeg_dfa_free(back);
        lpeg_dfa_free(dfa);
        lpeg_grammar_free(g);
    }
}

#[test]
fn failures_carry_status_and_message() {
    // syntax error
    let text = CString::new("A <- 'a").unwrap();
    let mut g = ptr::null_mut();
    assert_eq!(
        unsafe { lpeg_grammar_parse(text.as_ptr(), &mut g) },
        LpegStatus::LpegErrSyntax
    );
    assert!(last_error().contains("syntax error"), "{}", last_error());

    // not linear: a nonterminal is followed by a terminal
    let g = grammar("A <- 'a' A 'a' / 'b'");
    unsafe {
        let mut linear = true;
        assert_eq!(lpeg_grammar_is_lpeg(g, &mut linear), LpegStatus::LpegOk);
        assert!(!linear);

        let mut dfa = ptr::null_mut();
        assert_eq!(
            lpeg_grammar_compile(g, LpegMode::LpegModeExact, 1 << 16, &mut dfa),
            LpegStatus::LpegErrNotLpeg
        );
        lpeg_grammar_free(g);
    }

    // budget of one state is never enough
    let g = grammar("A <- 'a' A / 'b'");
    unsafe {
        let mut dfa = ptr::null_mut();
        assert_eq!(
            lpeg_grammar_compile(g, LpegMode::LpegModeExact, 1, &mut dfa),
            LpegStatus::LpegErrStateBudget
        );
        assert!(last_error().contains("budget"), "{}", last_error());
        lpeg_grammar_free(g);
    }
}

#[test]
fn generated_header_declares_the_surface() {
    let header = include_str!(concat!(env!("CARGO_MANIFEST_DIR"), "/include/lpeg.h"));
    for needle in [
        "typedef struct LpegGrammar LpegGrammar;",
        "typedef struct LpegDfa LpegDfa;",
        "LPEG_ERR_STATE_BUDGET",
        "lpeg_grammar_parse",
        "lpeg_grammar_compile",
        "lpeg_dfa_matches",
        "lpeg_last_error",
        "lpeg_string_free",
    ] {
        assert!(header.contains(needle), "missing {needle:?}");
    }
}
