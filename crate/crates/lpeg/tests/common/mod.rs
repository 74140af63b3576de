//! Shared test oracles and random generators.
//!
//! The oracles are deliberately independent of the code under test: the
//! regex matcher works by Brzozowski derivatives and never touches the
//! grammar or automaton machinery.

use std::collections::{BTreeMap, BTreeSet};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use lpeg::dfa::Dfa;
use lpeg::expr::Expr;
use lpeg::grammar::Grammar;
use lpeg::judge::is_lpeg;
use lpeg::regex::Regex;
use lpeg::wellformed::check_wellformed;
use lpeg::desugar::desugar_keep_stars;

use indexmap::IndexMap;

// --- derivative-based regex oracle ---------------------------------

pub fn regex_nullable(r: &Regex) -> bool {
    match r {
        Regex::Empty | Regex::Star(_) => true,
        Regex::EmptySet | Regex::Char(_) => false,
        Regex::Concat(a, b) => regex_nullable(a) && regex_nullable(b),
        Regex::Alt(a, b) => regex_nullable(a) || regex_nullable(b),
    }
}

pub fn regex_derivative(r: &Regex, c: char) -> Regex {
    match r {
        Regex::EmptySet | Regex::Empty => Regex::EmptySet,
        Regex::Char(a) => {
            if *a == c {
                Regex::Empty
            } else {
                Regex::EmptySet
            }
        }
        Regex::Concat(a, b) => {
            let da_b = Regex::concat(regex_derivative(a, c), (**b).clone());
            if regex_nullable(a) {
                Regex::alt(da_b, regex_derivative(b, c))
            } else {
                da_b
            }
        }
        Regex::Alt(a, b) => Regex::alt(regex_derivative(a, c), regex_derivative(b, c)),
        Regex::Star(a) => Regex::concat(regex_derivative(a, c), Regex::star((**a).clone())),
    }
}

/// Exact regex membership, independent of everything under test.
pub fn regex_match(r: &Regex, w: &str) -> bool {
    let mut cur = r.clone();
    for c in w.chars() {
        cur = regex_derivative(&cur, c);
        if cur == Regex::EmptySet {
            return false;
        }
    }
    regex_nullable(&cur)
}

// --- seeded random generators ---------------------------------------

pub struct Gen {
    rng: StdRng,
}

impl Gen {
    pub fn new(seed: u64) -> Gen {
        Gen {
            rng: StdRng::seed_from_u64(seed),
        }
    }

    fn terminal(&mut self) -> char {
        if self.rng.gen_bool(0.5) {
            'a'
        } else {
            'b'
        }
    }

    fn expr_nullable(e: &Expr) -> bool {
        match e {
            Expr::Empty | Expr::Star(_) | Expr::Opt(_) | Expr::Not(_) | Expr::And(_) => true,
            Expr::Char(_) | Expr::Any | Expr::Class(_) => false,
            Expr::Seq(a, b) => Self::expr_nullable(a) && Self::expr_nullable(b),
            Expr::Choice(a, b) | Expr::Alt(a, b) => {
                Self::expr_nullable(a) || Self::expr_nullable(b)
            }
            Expr::Plus(b) => Self::expr_nullable(b),
            Expr::Nonterminal(_) => true, // conservative
        }
    }

    /// A nonterminal-free expression of bounded depth whose stars have
    /// non-nullable bodies.
    pub fn nfree(&mut self, depth: usize) -> Expr {
        if depth == 0 {
            return match self.rng.gen_range(0..4) {
                0 => Expr::Empty,
                1 => Expr::Any,
                _ => Expr::Char(self.terminal()),
            };
        }
        match self.rng.gen_range(0..10) {
            0 => Expr::Empty,
            1 => Expr::Any,
            2 | 3 => Expr::Char(self.terminal()),
            4 | 5 => Expr::seq(self.nfree(depth - 1), self.nfree(depth - 1)),
            6 | 7 => Expr::choice(self.nfree(depth - 1), self.nfree(depth - 1)),
            8 => {
                for _ in 0..8 {
                    let body = self.nfree(depth - 1);
                    if !Self::expr_nullable(&body) {
                        return Expr::star(body);
                    }
                }
                Expr::star(Expr::Char(self.terminal()))
            }
            _ => Expr::not(self.nfree(depth - 1)),
        }
    }

    /// A linear parsing expression of bounded depth over the given
    /// nonterminal names.
    pub fn linear(&mut self, depth: usize, nts: &[&str]) -> Expr {
        let tail = |g: &mut Gen| {
            let name = nts[g.rng.gen_range(0..nts.len())];
            Expr::nt(name)
        };
        if depth == 0 {
            return if self.rng.gen_bool(0.5) {
                self.nfree(1)
            } else {
                Expr::seq(self.nfree(1), tail(self))
            };
        }
        match self.rng.gen_range(0..10) {
            0..=2 => self.nfree(depth),
            3 | 4 => Expr::seq(self.nfree(depth - 1), tail(self)),
            5 | 6 => Expr::seq(self.nfree(depth - 1), self.linear(depth - 1, nts)),
            7 | 8 => Expr::choice(self.linear(depth - 1, nts), self.linear(depth - 1, nts)),
            _ => Expr::seq(
                Expr::not(self.linear(depth - 1, nts)),
                self.linear(depth - 1, nts),
            ),
        }
    }

    /// A random well-formed LPEG over {a, b}: up to 3 rules, bodies of
    /// depth <= 4. Candidates failing validation, well-formedness or the
    /// linearity judgement are re-drawn.
    pub fn grammar(&mut self) -> Grammar {
        loop {
            let rule_count = self.rng.gen_range(1..=3);
            let names: Vec<&str> = ["A", "B", "C"][..rule_count].to_vec();
            let mut rules = IndexMap::new();
            for name in &names {
                rules.insert(name.to_string(), self.linear(4, &names));
            }
            let g = Grammar::new(
                ['a', 'b'].into_iter().collect(),
                rules,
                Expr::nt("A"),
            );
            if g.validate().is_ok()
                && check_wellformed(&g).is_empty()
                && is_lpeg(&desugar_keep_stars(&g)).is_lpeg
            {
                return g;
            }
        }
    }

    /// A regular expression of bounded depth; star bodies are kept
    /// non-nullable so the continuation-grammar conversion stays
    /// well-formed.
    pub fn regex(&mut self, depth: usize) -> Regex {
        if depth == 0 {
            return match self.rng.gen_range(0..4) {
                0 => Regex::Empty,
                _ => Regex::Char(self.terminal()),
            };
        }
        match self.rng.gen_range(0..20) {
            0 | 1 => Regex::Empty,
            2 => Regex::EmptySet,
            3..=7 => Regex::Char(self.terminal()),
            8..=12 => Regex::concat(self.regex(depth - 1), self.regex(depth - 1)),
            13..=16 => Regex::alt(self.regex(depth - 1), self.regex(depth - 1)),
            _ => {
                for _ in 0..8 {
                    let body = self.regex(depth - 1);
                    if !regex_nullable(&body) && body != Regex::EmptySet {
                        return Regex::star(body);
                    }
                }
                Regex::star(Regex::Char(self.terminal()))
            }
        }
    }

    /// A random total DFA over {a, b} with up to `max_states` states.
    pub fn dfa(&mut self, max_states: usize) -> Dfa {
        let n = self.rng.gen_range(1..=max_states);
        let mut accepting = BTreeSet::new();
        let mut transitions = Vec::with_capacity(n);
        for q in 0..n {
            if self.rng.gen_bool(0.4) {
                accepting.insert(q);
            }
            let mut row = BTreeMap::new();
            for c in ['a', 'b'] {
                row.insert(c, self.rng.gen_range(0..n));
            }
            transitions.push(row);
        }
        Dfa {
            alphabet: ['a', 'b'].into_iter().collect(),
            states: (0..n).map(|i| format!("s{i}")).collect(),
            start: 0,
            accepting,
            transitions,
        }
    }
}

/// All strings over {a, b} up to the given length.
pub fn ab_strings(max_len: usize) -> Vec<String> {
    lpeg::interp::strings_over(&['a', 'b'].into_iter().collect(), max_len)
}
