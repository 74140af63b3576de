//! Parser for the grammar file format.
//!
//! One rule per line: `Name <- expression`. `#` starts a comment,
//! `%alphabet abc` pins the terminal set, `%start Name` overrides the
//! default start (the first rule). Literals use `'x'` or `"xyz"`,
//! classes `[abc]`, `.` matches any terminal, and the operators are
//! `? * + ! & /` with `( )` for grouping.

use std::collections::BTreeSet;

use indexmap::IndexMap;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::grammar::Grammar;

pub fn parse_grammar(text: &str) -> Result<Grammar> {
    let mut rules: IndexMap<String, Expr> = IndexMap::new();
    let mut alphabet: Option<BTreeSet<char>> = None;
    let mut start_name: Option<String> = None;

    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let mut p = LineParser::new(raw_line, line_no);
        p.skip_ws();
        if p.at_end() {
            continue;
        }
        if p.peek() == Some('%') {
            p.bump();
            let word = p.ident()?;
            match word.as_str() {
                "alphabet" => {
                    let mut set = BTreeSet::new();
                    p.skip_spaces_only();
                    while let Some(c) = p.peek() {
                        if c == '#' {
                            break;
                        }
                        p.bump();
                        if c == '\\' {
                            set.insert(p.unescape()?);
                        } else if !c.is_whitespace() {
                            set.insert(c);
                        }
                    }
                    alphabet = Some(set);
                }
                "start" => {
                    p.skip_ws();
                    start_name = Some(p.ident()?);
                    p.expect_line_end()?;
                }
                other => {
                    return Err(p.err(format!("unknown directive %{other}")));
                }
            }
            continue;
        }
        let name = p.ident()?;
        p.skip_ws();
        if !p.eat_str("<-") {
            return Err(p.err("expected `<-` after rule name".to_string()));
        }
        let body = p.expr()?;
        p.expect_line_end()?;
        if rules.contains_key(&name) {
            return Err(Error::DuplicateRule(name));
        }
        rules.insert(name, body);
    }

    if rules.is_empty() {
        return Err(Error::Syntax {
            line: 1,
            col: 1,
            msg: "grammar contains no rules".to_string(),
        });
    }

    let start = match start_name {
        Some(name) => Expr::Nonterminal(name),
        None => Expr::Nonterminal(rules.keys().next().unwrap().clone()),
    };
    let alphabet = alphabet.unwrap_or_else(|| {
        let mut set = BTreeSet::new();
        for body in rules.values() {
            body.literal_terminals(&mut set);
        }
        set
    });

    let g = Grammar::new(alphabet, rules, start);
    g.validate()?;
    Ok(g)
}

struct LineParser {
    chars: Vec<char>,
    pos: usize,
    line: usize,
}

impl LineParser {
    fn new(line: &str, line_no: usize) -> LineParser {
        LineParser {
            chars: line.chars().collect(),
            pos: 0,
            line: line_no,
        }
    }

    fn err(&self, msg: String) -> Error {
        Error::Syntax {
            line: self.line,
            col: self.pos + 1,
            msg,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn at_end(&self) -> bool {
        self.pos >= self.chars.len()
    }

    fn skip_spaces_only(&mut self) {
        while matches!(self.peek(), Some(c) if c == ' ' || c == '\t') {
            self.pos += 1;
        }
    }

    /// Skips whitespace and a trailing `#` comment.
    fn skip_ws(&mut self) {
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => self.pos += 1,
                Some('#') => self.pos = self.chars.len(),
                _ => break,
            }
        }
    }

    fn expect_line_end(&mut self) -> Result<()> {
        self.skip_ws();
        if self.at_end() {
            Ok(())
        } else {
            Err(self.err(format!("unexpected `{}`", self.peek().unwrap())))
        }
    }

    fn eat_str(&mut self, s: &str) -> bool {
        let mut end = self.pos;
        for c in s.chars() {
            if self.chars.get(end) != Some(&c) {
                return false;
            }
            end += 1;
        }
        self.pos = end;
        true
    }

    fn ident(&mut self) -> Result<String> {
        let mut name = String::new();
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                name.push(c);
                self.pos += 1;
            }
            _ => return Err(self.err("expected identifier".to_string())),
        }
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '_' {
                name.push(c);
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok(name)
    }

    fn unescape(&mut self) -> Result<char> {
        match self.bump() {
            Some('n') => Ok('\n'),
            Some('t') => Ok('\t'),
            Some(c @ ('\\' | '\'' | '"' | '[' | ']')) => Ok(c),
            Some(c) => Err(self.err(format!("unknown escape `\\{c}`"))),
            None => Err(self.err("dangling `\\` at end of line".to_string())),
        }
    }

    /// choice level: `seq (/ seq)*`, right associated.
    fn expr(&mut self) -> Result<Expr> {
        let first = self.seq()?;
        self.skip_ws();
        if self.peek() == Some('/') {
            self.bump();
            self.skip_ws();
            let rest = self.expr()?;
            Ok(Expr::choice(first, rest))
        } else {
            Ok(first)
        }
    }

    /// sequence level: juxtaposition, left associated.
    fn seq(&mut self) -> Result<Expr> {
        let mut acc = self.prefix()?;
        loop {
            self.skip_ws();
            match self.peek() {
                None | Some('/') | Some(')') => break,
                _ => {
                    let next = self.prefix()?;
                    acc = Expr::seq(acc, next);
                }
            }
        }
        Ok(acc)
    }

    fn prefix(&mut self) -> Result<Expr> {
        self.skip_ws();
        match self.peek() {
            Some('!') => {
                self.bump();
                Ok(Expr::not(self.prefix()?))
            }
            Some('&') => {
                self.bump();
                Ok(Expr::And(Box::new(self.prefix()?)))
            }
            _ => self.suffix(),
        }
    }

    fn suffix(&mut self) -> Result<Expr> {
        let mut e = self.primary()?;
        while let Some(c) = self.peek() {
            match c {
                '*' => e = Expr::star(e),
                '?' => e = Expr::Opt(Box::new(e)),
                '+' => e = Expr::Plus(Box::new(e)),
                _ => break,
            }
            self.bump();
        }
        Ok(e)
    }

    fn primary(&mut self) -> Result<Expr> {
        self.skip_ws();
        match self.peek() {
            Some('\'') | Some('"') => self.literal(),
            Some('[') => self.class(),
            Some('.') => {
                self.bump();
                Ok(Expr::Any)
            }
            Some('(') => {
                self.bump();
                let e = self.expr()?;
                self.skip_ws();
                if self.bump() != Some(')') {
                    return Err(self.err("expected `)`".to_string()));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                Ok(Expr::Nonterminal(self.ident()?))
            }
            Some(c) => Err(self.err(format!("unexpected `{c}`"))),
            None => Err(self.err("unexpected end of line".to_string())),
        }
    }

    fn literal(&mut self) -> Result<Expr> {
        let quote = self.bump().unwrap();
        let mut chars = Vec::new();
        loop {
            match self.bump() {
                Some(c) if c == quote => break,
                Some('\\') => chars.push(self.unescape()?),
                Some(c) => chars.push(c),
                None => return Err(self.err("unterminated literal".to_string())),
            }
        }
        let mut iter = chars.into_iter();
        match iter.next() {
            None => Ok(Expr::Empty),
            Some(first) => {
                let mut e = Expr::Char(first);
                for c in iter {
                    e = Expr::seq(e, Expr::Char(c));
                }
                Ok(e)
            }
        }
    }

    fn class(&mut self) -> Result<Expr> {
        self.bump();
        let mut set = BTreeSet::new();
        loop {
            match self.bump() {
                Some(']') => break,
                Some('\\') => {
                    set.insert(self.unescape()?);
                }
                Some(c) => {
                    set.insert(c);
                }
                None => return Err(self.err("unterminated character class".to_string())),
            }
        }
        Ok(Expr::Class(set))
    }
}
