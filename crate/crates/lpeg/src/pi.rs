//! Regex to LPEG by continuation grammars.
//!
//! `pi(r, G)` prepends the regex `r` to the continuation grammar `G`:
//! the start expression of the result matches `r` followed by whatever
//! `G`'s start matched. Starting from the trivial grammar with start
//! `''` this yields an LPEG for the regex language — priority never
//! disagrees with unordered alternation here because every branch ends
//! in the same continuation.

use std::collections::BTreeSet;

use indexmap::IndexMap;

use crate::expr::Expr;
use crate::grammar::Grammar;
use crate::regex::Regex;

pub fn pi(r: &Regex, g: Grammar) -> Grammar {
    match r {
        Regex::Empty => g,
        // the empty set: a guard that always fails in front of the
        // continuation
        Regex::EmptySet => Grammar::new(
            g.alphabet,
            g.rules,
            Expr::seq(Expr::not(Expr::Empty), g.start),
        ),
        Regex::Char(a) => Grammar::new(g.alphabet, g.rules, Expr::seq(Expr::Char(*a), g.start)),
        Regex::Concat(r1, r2) => {
            let g2 = pi(r2, g);
            pi(r1, g2)
        }
        Regex::Alt(r1, r2) => {
            let continuation = g.start.clone();
            let g1 = pi(r1, g);
            let start1 = g1.start.clone();
            let g2 = pi(r2, Grammar::new(g1.alphabet, g1.rules, continuation));
            let start2 = g2.start.clone();
            Grammar::new(g2.alphabet, g2.rules, Expr::choice(start1, start2))
        }
        Regex::Star(r1) => {
            let name = g.fresh_name("A");
            let continuation = g.start.clone();
            let mut inner = g;
            inner.start = Expr::nt(name.clone());
            // reserve the name so nested stars pick fresh ones
            inner.rules.insert(name.clone(), Expr::Empty);
            let g1 = pi(r1, inner);
            let mut rules = g1.rules;
            rules.insert(name.clone(), Expr::choice(g1.start, continuation));
            Grammar::new(g1.alphabet, rules, Expr::nt(name))
        }
    }
}

/// An LPEG over `alphabet` recognizing exactly the regex language
/// (exact-match mode). The initial continuation is an end-of-input
/// check `!.` — with a bare `''` continuation a prioritized branch
/// could succeed early on a partial match and shadow a longer one.
pub fn regex_to_lpeg(r: &Regex, alphabet: &BTreeSet<char>) -> Grammar {
    let g0 = Grammar::new(
        alphabet.clone(),
        IndexMap::new(),
        Expr::not(Expr::Any),
    );
    pi(r, g0)
}
