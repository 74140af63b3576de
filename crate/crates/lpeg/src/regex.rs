//! Regular expressions: the AST shared by the regex-to-LPEG direction
//! and the DFA-to-regex state elimination, plus a small concrete syntax.
//!
//! Syntax: alternation `|` (lowest), juxtaposition, postfix `*`, groups
//! `()`. An empty group is the empty string; `[]` is the empty set (it
//! arises from DFAs with an empty language). Metacharacters are escaped
//! with a backslash.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Regex {
    /// Matches nothing at all.
    EmptySet,
    /// The empty string.
    Empty,
    Char(char),
    Concat(Box<Regex>, Box<Regex>),
    Alt(Box<Regex>, Box<Regex>),
    Star(Box<Regex>),
}

impl Regex {
    /// Simplifying constructor: the empty set annihilates, the empty
    /// string is a unit.
    pub fn concat(a: Regex, b: Regex) -> Regex {
        match (a, b) {
            (Regex::EmptySet, _) | (_, Regex::EmptySet) => Regex::EmptySet,
            (Regex::Empty, x) | (x, Regex::Empty) => x,
            (a, b) => Regex::Concat(Box::new(a), Box::new(b)),
        }
    }

    /// Simplifying constructor: the empty set is a unit, identical
    /// branches collapse.
    pub fn alt(a: Regex, b: Regex) -> Regex {
        match (a, b) {
            (Regex::EmptySet, x) | (x, Regex::EmptySet) => x,
            (a, b) if a == b => a,
            (a, b) => Regex::Alt(Box::new(a), Box::new(b)),
        }
    }

    /// Simplifying constructor: starring nothing-or-empty is empty, and
    /// a star is idempotent.
    pub fn star(a: Regex) -> Regex {
        match a {
            Regex::EmptySet | Regex::Empty => Regex::Empty,
            s @ Regex::Star(_) => s,
            a => Regex::Star(Box::new(a)),
        }
    }

    pub fn literal_terminals(&self, out: &mut std::collections::BTreeSet<char>) {
        match self {
            Regex::Char(c) => {
                out.insert(*c);
            }
            Regex::Concat(a, b) | Regex::Alt(a, b) => {
                a.literal_terminals(out);
                b.literal_terminals(out);
            }
            Regex::Star(a) => a.literal_terminals(out),
            Regex::EmptySet | Regex::Empty => {}
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Regex::Alt(..) => 1,
            Regex::Concat(..) => 2,
            _ => 3,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let prec = self.precedence();
        if prec < min {
            write!(f, "(")?;
        }
        match self {
            Regex::EmptySet => write!(f, "[]")?,
            Regex::Empty => write!(f, "()")?,
            Regex::Char(c) => match c {
                '(' | ')' | '|' | '*' | '\\' | '[' | ']' => write!(f, "\\{c}")?,
                _ => write!(f, "{c}")?,
            },
            Regex::Concat(a, b) => {
                a.fmt_prec(f, 2)?;
                b.fmt_prec(f, 2)?;
            }
            Regex::Alt(a, b) => {
                a.fmt_prec(f, 2)?;
                write!(f, "|")?;
                b.fmt_prec(f, 1)?;
            }
            Regex::Star(a) => {
                a.fmt_prec(f, 3)?;
                write!(f, "*")?;
            }
        }
        if prec < min {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Regex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

pub fn parse_regex(text: &str) -> Result<Regex> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
    };
    let r = p.alternation()?;
    match p.peek() {
        None => Ok(r),
        Some(c) => Err(p.error(format!("unexpected `{c}`"))),
    }
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn error(&self, msg: String) -> Error {
        Error::Syntax {
            line: 1,
            col: self.pos + 1,
            msg,
        }
    }

    fn alternation(&mut self) -> Result<Regex> {
        let mut r = self.concatenation()?;
        while self.peek() == Some('|') {
            self.pos += 1;
            r = Regex::alt(r, self.concatenation()?);
        }
        Ok(r)
    }

    fn concatenation(&mut self) -> Result<Regex> {
        let mut r = Regex::Empty;
        while let Some(c) = self.peek() {
            if c == '|' || c == ')' {
                break;
            }
            r = Regex::concat(r, self.postfix()?);
        }
        Ok(r)
    }

    fn postfix(&mut self) -> Result<Regex> {
        let mut r = self.atom()?;
        while self.peek() == Some('*') {
            self.pos += 1;
            r = Regex::star(r);
        }
        Ok(r)
    }

    fn atom(&mut self) -> Result<Regex> {
        match self.peek() {
            None => Err(self.error("unexpected end of pattern".to_string())),
            Some('(') => {
                self.pos += 1;
                let r = self.alternation()?;
                if self.peek() != Some(')') {
                    return Err(self.error("unclosed group".to_string()));
                }
                self.pos += 1;
                Ok(r)
            }
            Some('[') => {
                self.pos += 1;
                if self.peek() != Some(']') {
                    return Err(self.error("expected `]` (only `[]` is supported)".to_string()));
                }
                self.pos += 1;
                Ok(Regex::EmptySet)
            }
            Some('\\') => {
                self.pos += 1;
                match self.peek() {
                    None => Err(self.error("dangling escape".to_string())),
                    Some(c) => {
                        self.pos += 1;
                        Ok(Regex::Char(match c {
                            'n' => '\n',
                            't' => '\t',
                            other => other,
                        }))
                    }
                }
            }
            Some(c @ (')' | '*' | ']')) => Err(self.error(format!("unexpected `{c}`"))),
            Some(c) => {
                self.pos += 1;
                Ok(Regex::Char(c))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(ch: char) -> Regex {
        Regex::Char(ch)
    }

    #[test]
    fn parses_precedence() {
        let r = parse_regex("ab|c*").unwrap();
        assert_eq!(
            r,
            Regex::alt(Regex::concat(c('a'), c('b')), Regex::star(c('c')))
        );
        assert_eq!(parse_regex("(a|b)*abb").unwrap().to_string(), "(a|b)*abb");
    }

    #[test]
    fn empty_forms() {
        assert_eq!(parse_regex("").unwrap(), Regex::Empty);
        assert_eq!(parse_regex("()").unwrap(), Regex::Empty);
        assert_eq!(parse_regex("[]").unwrap(), Regex::EmptySet);
        assert_eq!(parse_regex("a|").unwrap(), Regex::alt(c('a'), Regex::Empty));
    }

    #[test]
    fn escapes_round_trip() {
        let r = parse_regex("\\*\\(\\\\").unwrap();
        assert_eq!(
            r,
            Regex::concat(Regex::concat(c('*'), c('(')), c('\\'))
        );
        assert_eq!(parse_regex(&r.to_string()).unwrap(), r);
    }

    #[test]
    fn rejects_malformed_patterns() {
        for bad in ["(a", "a)", "*a", "\\", "[a]"] {
            assert!(matches!(parse_regex(bad), Err(Error::Syntax { .. })), "{bad}");
        }
    }

    #[test]
    fn constructors_simplify() {
        assert_eq!(Regex::concat(Regex::EmptySet, c('a')), Regex::EmptySet);
        assert_eq!(Regex::concat(Regex::Empty, c('a')), c('a'));
        assert_eq!(Regex::alt(Regex::EmptySet, c('a')), c('a'));
        assert_eq!(Regex::alt(c('a'), c('a')), c('a'));
        assert_eq!(Regex::star(Regex::EmptySet), Regex::Empty);
        assert_eq!(Regex::star(Regex::star(c('a'))), Regex::star(c('a')));
    }
}
