//! DFA to regex by state elimination, and onward to an LPEG.

use std::collections::HashMap;

use crate::dfa::Dfa;
use crate::grammar::Grammar;
use crate::pi::regex_to_lpeg;
use crate::regex::Regex;

/// Converts a DFA to an equivalent regular expression. The automaton is
/// minimized first so the result does not depend on redundant states;
/// an empty language comes out as the empty set.
pub fn dfa_to_regex(d: &Dfa) -> Regex {
    let d = d.minimize();
    let n = d.state_count();
    // generalized automaton over states 0..n plus initial `n` and
    // final `n + 1`; absent edges are the empty set
    let mut edges: HashMap<(usize, usize), Regex> = HashMap::new();
    let add = |edges: &mut HashMap<(usize, usize), Regex>, i: usize, j: usize, r: Regex| {
        let e = edges.remove(&(i, j)).unwrap_or(Regex::EmptySet);
        let combined = Regex::alt(e, r);
        if combined != Regex::EmptySet {
            edges.insert((i, j), combined);
        }
    };
    add(&mut edges, n, d.start, Regex::Empty);
    for &q in &d.accepting {
        add(&mut edges, q, n + 1, Regex::Empty);
    }
    for (q, row) in d.transitions.iter().enumerate() {
        for (&c, &t) in row {
            add(&mut edges, q, t, Regex::Char(c));
        }
    }

    for k in 0..n {
        let self_loop = edges.remove(&(k, k)).unwrap_or(Regex::EmptySet);
        let loop_star = Regex::star(self_loop);
        let into_k: Vec<(usize, Regex)> = (0..n + 2)
            .filter(|&i| i != k)
            .filter_map(|i| edges.remove(&(i, k)).map(|r| (i, r)))
            .collect();
        let out_of_k: Vec<(usize, Regex)> = (0..n + 2)
            .filter(|&j| j != k)
            .filter_map(|j| edges.remove(&(k, j)).map(|r| (j, r)))
            .collect();
        for (i, rin) in &into_k {
            for (j, rout) in &out_of_k {
                let through = Regex::concat(
                    rin.clone(),
                    Regex::concat(loop_star.clone(), rout.clone()),
                );
                add(&mut edges, *i, *j, through);
            }
        }
    }
    edges.remove(&(n, n + 1)).unwrap_or(Regex::EmptySet)
}

/// DFA in, language-equivalent LPEG (exact-match mode) out.
pub fn dfa_to_lpeg(d: &Dfa) -> Grammar {
    regex_to_lpeg(&dfa_to_regex(d), &d.alphabet)
}
