//! Reference implementation of the consume semantics.
//!
//! This is the ground truth the automaton pipeline is tested against, so
//! it is kept as plain recursive descent: sequence backtracks the start
//! position on failure, choice is prioritized, repetition is greedy and
//! never fails, predicates consume nothing. A recursion-depth guard
//! turns non-termination (a well-formedness escape) into an error
//! instead of a hang.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::grammar::Grammar;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatchResult {
    /// Success, consuming this many terminals.
    Consumed(usize),
    Fail,
}

impl MatchResult {
    pub fn is_success(self) -> bool {
        matches!(self, MatchResult::Consumed(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatchMode {
    /// The start expression succeeds on the input, consuming any amount.
    Prefix,
    /// The start expression consumes the whole input.
    Exact,
}

pub fn consume(g: &Grammar, e: &Expr, input: &str) -> Result<MatchResult> {
    let chars: Vec<char> = input.chars().collect();
    let guard = 10 * chars.len() + 100;
    consume_with_guard(g, e, &chars, guard)
}

pub fn consume_with_guard(
    g: &Grammar,
    e: &Expr,
    input: &[char],
    guard: usize,
) -> Result<MatchResult> {
    let mut interp = Interp {
        g,
        input,
        guard,
        depth: 0,
    };
    Ok(match interp.eval(e, 0)? {
        Some(n) => MatchResult::Consumed(n),
        None => MatchResult::Fail,
    })
}

pub fn lang_member(g: &Grammar, input: &str, mode: MatchMode) -> Result<bool> {
    let r = consume(g, &g.start.clone(), input)?;
    Ok(match mode {
        MatchMode::Prefix => r.is_success(),
        MatchMode::Exact => r == MatchResult::Consumed(input.chars().count()),
    })
}

/// Exhaustively compares the start expressions of two grammars on all
/// strings over the (shared) alphabet up to `max_len`, returning the
/// first input where the full consume results differ.
pub fn expr_equiv_bounded(g1: &Grammar, g2: &Grammar, max_len: usize) -> Result<Option<String>> {
    if g1.alphabet != g2.alphabet {
        return Err(Error::AlphabetMismatch);
    }
    for w in strings_over(&g1.alphabet, max_len) {
        let r1 = consume(g1, &g1.start.clone(), &w)?;
        let r2 = consume(g2, &g2.start.clone(), &w)?;
        if r1 != r2 {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// All strings over `alphabet` of length `0..=max_len`, shortest first,
/// lexicographic within a length.
pub fn strings_over(alphabet: &BTreeSet<char>, max_len: usize) -> Vec<String> {
    let symbols: Vec<char> = alphabet.iter().copied().collect();
    let mut out = vec![String::new()];
    let mut frontier = vec![String::new()];
    for _ in 0..max_len {
        let mut next = Vec::with_capacity(frontier.len() * symbols.len());
        for w in &frontier {
            for &c in &symbols {
                let mut s = w.clone();
                s.push(c);
                next.push(s);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

struct Interp<'a> {
    g: &'a Grammar,
    input: &'a [char],
    guard: usize,
    depth: usize,
}

impl Interp<'_> {
    /// Returns the number of terminals consumed from `pos`, or None on
    /// failure.
    fn eval(&mut self, e: &Expr, pos: usize) -> Result<Option<usize>> {
        self.depth += 1;
        if self.depth > self.guard {
            return Err(Error::RecursionGuard(e.to_string()));
        }
        let result = match e {
            Expr::Empty => Some(0),
            Expr::Char(c) => {
                if self.input.get(pos) == Some(c) {
                    Some(1)
                } else {
                    None
                }
            }
            Expr::Any => match self.input.get(pos) {
                Some(c) if self.g.alphabet.contains(c) => Some(1),
                _ => None,
            },
            Expr::Class(set) => match self.input.get(pos) {
                Some(c) if set.contains(c) => Some(1),
                _ => None,
            },
            Expr::Seq(a, b) => match self.eval(a, pos)? {
                Some(n) => self.eval(b, pos + n)?.map(|m| n + m),
                None => None,
            },
            Expr::Choice(a, b) => match self.eval(a, pos)? {
                Some(n) => Some(n),
                None => self.eval(b, pos)?,
            },
            Expr::Star(b) => {
                let mut total = 0;
                while let Some(n) = self.eval(b, pos + total)? {
                    if n == 0 {
                        // nullable body: the greedy fixpoint is reached
                        break;
                    }
                    total += n;
                }
                Some(total)
            }
            Expr::Plus(b) => match self.eval(b, pos)? {
                None => None,
                Some(first) => {
                    let mut total = first;
                    if first > 0 {
                        while let Some(n) = self.eval(b, pos + total)? {
                            if n == 0 {
                                break;
                            }
                            total += n;
                        }
                    }
                    Some(total)
                }
            },
            Expr::Opt(b) => Some(self.eval(b, pos)?.unwrap_or(0)),
            Expr::Not(b) => match self.eval(b, pos)? {
                Some(_) => None,
                None => Some(0),
            },
            Expr::And(b) => self.eval(b, pos)?.map(|_| 0),
            Expr::Nonterminal(name) => {
                let body = self
                    .g
                    .rule(name)
                    .ok_or_else(|| Error::UndefinedNonterminal(name.clone()))?;
                self.eval(body, pos)?
            }
            Expr::Alt(..) => {
                return Err(Error::PipelineDefect(
                    "unordered alternation reached the interpreter".to_string(),
                ))
            }
        };
        self.depth -= 1;
        Ok(result)
    }
}
