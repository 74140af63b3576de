//! Parsing-expression AST.
//!
//! The core node set mirrors the usual PEG operators (empty, terminal,
//! any, sequence, prioritized choice, greedy repetition, not-predicate,
//! nonterminal application). Character classes, option, one-or-more and
//! the and-predicate are sugar and disappear after desugaring.
//!
//! `Alt` is unordered alternation. It never appears in a user-facing
//! grammar; it is produced by the choice rewriting step of the automaton
//! pipeline and consumed by the BFA construction.

use std::collections::BTreeSet;
use std::fmt;

/// A path from an expression root to a subexpression, as child indices.
pub type Path = Vec<usize>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    /// The empty expression, always succeeds consuming nothing.
    Empty,
    /// A single terminal.
    Char(char),
    /// Any single terminal of the alphabet.
    Any,
    /// `e1 e2`, backtracking the start position if either part fails.
    Seq(Box<Expr>, Box<Expr>),
    /// Prioritized choice `e1 / e2`.
    Choice(Box<Expr>, Box<Expr>),
    /// Greedy repetition `e*`.
    Star(Box<Expr>),
    /// Not-predicate `!e`: succeeds consuming nothing iff `e` fails.
    Not(Box<Expr>),
    /// Nonterminal application.
    Nonterminal(String),
    /// Sugar: character class `[abc]`.
    Class(BTreeSet<char>),
    /// Sugar: option `e?`.
    Opt(Box<Expr>),
    /// Sugar: one-or-more `e+`.
    Plus(Box<Expr>),
    /// Sugar: and-predicate `&e`.
    And(Box<Expr>),
    /// Unordered alternation `e1 | e2`, pipeline-internal only.
    Alt(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn seq(a: Expr, b: Expr) -> Expr {
        Expr::Seq(Box::new(a), Box::new(b))
    }

    pub fn choice(a: Expr, b: Expr) -> Expr {
        Expr::Choice(Box::new(a), Box::new(b))
    }

    pub fn star(e: Expr) -> Expr {
        Expr::Star(Box::new(e))
    }

    pub fn not(e: Expr) -> Expr {
        Expr::Not(Box::new(e))
    }

    pub fn alt(a: Expr, b: Expr) -> Expr {
        Expr::Alt(Box::new(a), Box::new(b))
    }

    pub fn nt(name: impl Into<String>) -> Expr {
        Expr::Nonterminal(name.into())
    }

    /// Child subexpressions in index order.
    pub fn children(&self) -> Vec<&Expr> {
        match self {
            Expr::Seq(a, b) | Expr::Choice(a, b) | Expr::Alt(a, b) => vec![a, b],
            Expr::Star(e) | Expr::Not(e) | Expr::Opt(e) | Expr::Plus(e) | Expr::And(e) => {
                vec![e]
            }
            _ => vec![],
        }
    }

    /// True iff the expression contains no nonterminal application.
    pub fn is_nfree(&self) -> bool {
        match self {
            Expr::Nonterminal(_) => false,
            other => other.children().iter().all(|c| c.is_nfree()),
        }
    }

    pub fn contains_nonterminal(&self) -> bool {
        !self.is_nfree()
    }

    /// All nonterminal names referenced anywhere in the expression.
    pub fn referenced_nonterminals(&self, out: &mut BTreeSet<String>) {
        if let Expr::Nonterminal(name) = self {
            out.insert(name.clone());
        }
        for c in self.children() {
            c.referenced_nonterminals(out);
        }
    }

    /// All terminals occurring literally (in `Char` or `Class` nodes).
    pub fn literal_terminals(&self, out: &mut BTreeSet<char>) {
        match self {
            Expr::Char(c) => {
                out.insert(*c);
            }
            Expr::Class(set) => out.extend(set.iter().copied()),
            _ => {}
        }
        for c in self.children() {
            c.literal_terminals(out);
        }
    }

    pub fn contains_any(&self) -> bool {
        matches!(self, Expr::Any) || self.children().iter().any(|c| c.contains_any())
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Choice(..) | Expr::Alt(..) => 1,
            Expr::Seq(..) => 2,
            Expr::Not(_) | Expr::And(_) => 3,
            Expr::Star(_) | Expr::Opt(_) | Expr::Plus(_) => 4,
            _ => 5,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let prec = self.precedence();
        if prec < min {
            write!(f, "(")?;
        }
        match self {
            Expr::Empty => write!(f, "''")?,
            Expr::Char(c) => write!(f, "'{}'", escape_char(*c, '\''))?,
            Expr::Any => write!(f, ".")?,
            Expr::Seq(a, b) => {
                a.fmt_prec(f, 2)?;
                write!(f, " ")?;
                b.fmt_prec(f, 3)?;
            }
            Expr::Choice(a, b) => {
                a.fmt_prec(f, 2)?;
                write!(f, " / ")?;
                b.fmt_prec(f, 1)?;
            }
            Expr::Alt(a, b) => {
                a.fmt_prec(f, 2)?;
                write!(f, " | ")?;
                b.fmt_prec(f, 1)?;
            }
            Expr::Star(e) => {
                e.fmt_prec(f, 5)?;
                write!(f, "*")?;
            }
            Expr::Opt(e) => {
                e.fmt_prec(f, 5)?;
                write!(f, "?")?;
            }
            Expr::Plus(e) => {
                e.fmt_prec(f, 5)?;
                write!(f, "+")?;
            }
            Expr::Not(e) => {
                write!(f, "!")?;
                e.fmt_prec(f, 4)?;
            }
            Expr::And(e) => {
                write!(f, "&")?;
                e.fmt_prec(f, 4)?;
            }
            Expr::Nonterminal(name) => write!(f, "{name}")?,
            Expr::Class(set) => {
                write!(f, "[")?;
                for c in set {
                    write!(f, "{}", escape_char(*c, ']'))?;
                }
                write!(f, "]")?;
            }
        }
        if prec < min {
            write!(f, ")")?;
        }
        Ok(())
    }
}

fn escape_char(c: char, ctx: char) -> String {
    match c {
        '\n' => "\\n".to_string(),
        '\t' => "\\t".to_string(),
        '\\' => "\\\\".to_string(),
        '[' | ']' if ctx == ']' => format!("\\{c}"),
        _ if c == ctx => format!("\\{c}"),
        _ => c.to_string(),
    }
}

impl fmt::Display for Expr {
    /// Renders in the grammar file syntax (re-parseable except for `Alt`).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}
