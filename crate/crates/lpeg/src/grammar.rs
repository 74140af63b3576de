//! The grammar 4-tuple: nonterminals, alphabet, rules and start expression.

use std::collections::BTreeSet;
use std::fmt;

use indexmap::IndexMap;

use crate::error::{Error, Result};
use crate::expr::Expr;

/// A parsing expression grammar `(N, Sigma, P, e_s)`.
///
/// Rules keep their definition order so that fresh-name generation and
/// printed output are deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Grammar {
    pub alphabet: BTreeSet<char>,
    pub rules: IndexMap<String, Expr>,
    pub start: Expr,
}

impl Grammar {
    pub fn new(alphabet: BTreeSet<char>, rules: IndexMap<String, Expr>, start: Expr) -> Grammar {
        Grammar {
            alphabet,
            rules,
            start,
        }
    }

    pub fn nonterminals(&self) -> BTreeSet<String> {
        self.rules.keys().cloned().collect()
    }

    pub fn rule(&self, name: &str) -> Option<&Expr> {
        self.rules.get(name)
    }

    /// Checks referential integrity: every referenced nonterminal has a
    /// rule, and `.` only appears with a non-empty alphabet.
    pub fn validate(&self) -> Result<()> {
        let mut referenced = BTreeSet::new();
        self.start.referenced_nonterminals(&mut referenced);
        for body in self.rules.values() {
            body.referenced_nonterminals(&mut referenced);
        }
        for name in referenced {
            if !self.rules.contains_key(&name) {
                return Err(Error::UndefinedNonterminal(name));
            }
        }
        let uses_any =
            self.start.contains_any() || self.rules.values().any(|b| b.contains_any());
        if uses_any && self.alphabet.is_empty() {
            return Err(Error::EmptyAlphabetWithAny);
        }
        Ok(())
    }

    /// A rule name not yet taken, formed as `base` plus the smallest free
    /// numeric suffix.
    pub fn fresh_name(&self, base: &str) -> String {
        fresh_name(base, |n| self.rules.contains_key(n))
    }
}

/// Smallest `base{n}` for which `taken` is false.
pub fn fresh_name(base: &str, taken: impl Fn(&str) -> bool) -> String {
    for n in 0usize.. {
        let candidate = format!("{base}{n}");
        if !taken(&candidate) {
            return candidate;
        }
    }
    unreachable!()
}

impl fmt::Display for Grammar {
    /// Renders in the grammar file format. A start expression that is not
    /// a bare nonterminal is given a synthetic rule.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.alphabet.is_empty() {
            write!(f, "%alphabet ")?;
            for c in &self.alphabet {
                match c {
                    '\n' => write!(f, "\\n")?,
                    '\t' => write!(f, "\\t")?,
                    '\\' => write!(f, "\\\\")?,
                    _ => write!(f, "{c}")?,
                }
            }
            writeln!(f)?;
        }
        let (start_name, synthetic) = match &self.start {
            Expr::Nonterminal(name) => (name.clone(), None),
            other => {
                let name = self.fresh_name("Start");
                (name, Some(other.clone()))
            }
        };
        writeln!(f, "%start {start_name}")?;
        if let Some(body) = synthetic {
            writeln!(f, "{start_name} <- {body}")?;
        }
        for (name, body) in &self.rules {
            writeln!(f, "{name} <- {body}")?;
        }
        Ok(())
    }
}
