//! Elimination of the sugar operators.
//!
//! `[abc]` becomes `a/b/c`, `e?` becomes `e/''`, `e+` becomes `e e*` and
//! `&e` becomes `!!e`. Repetition is eliminated into a fresh rule
//! `A <- e A / ''`; how aggressively depends on [`StarMode`]:
//! the LPEG judgement wants stars kept, the interpreter only needs
//! recursive stars gone, and the automaton pipeline has no repetition
//! case at all.

use std::collections::BTreeSet;

use indexmap::IndexMap;

use crate::expr::Expr;
use crate::grammar::{fresh_name, Grammar};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StarMode {
    /// Keep every `e*` node.
    Keep,
    /// Eliminate only stars whose body contains a nonterminal.
    Recursive,
    /// Eliminate every star.
    All,
}

/// Default desugaring: sugar nodes expanded, stars with nonterminal
/// bodies eliminated.
pub fn desugar(g: &Grammar) -> Grammar {
    desugar_with(g, StarMode::Recursive)
}

/// Sugar nodes expanded, all stars kept. This is the form the LPEG
/// judgement expects.
pub fn desugar_keep_stars(g: &Grammar) -> Grammar {
    desugar_with(g, StarMode::Keep)
}

/// Sugar nodes expanded and every star eliminated, as required by the
/// BFA construction.
pub fn desugar_full(g: &Grammar) -> Grammar {
    desugar_with(g, StarMode::All)
}

pub fn desugar_with(g: &Grammar, mode: StarMode) -> Grammar {
    let mut d = Desugarer {
        mode,
        taken: g.rules.keys().cloned().collect(),
        new_rules: Vec::new(),
    };
    let mut rules: IndexMap<String, Expr> = IndexMap::new();
    for (name, body) in &g.rules {
        let body = d.expr(body);
        rules.insert(name.clone(), body);
    }
    let start = d.expr(&g.start);
    // Fresh rules may themselves contain stars over nonterminal-free
    // bodies only, so one pass suffices.
    for (name, body) in d.new_rules {
        rules.insert(name, body);
    }
    Grammar::new(g.alphabet.clone(), rules, start)
}

struct Desugarer {
    mode: StarMode,
    taken: BTreeSet<String>,
    new_rules: Vec<(String, Expr)>,
}

impl Desugarer {
    fn expr(&mut self, e: &Expr) -> Expr {
        match e {
            Expr::Empty | Expr::Char(_) | Expr::Any | Expr::Nonterminal(_) => e.clone(),
            Expr::Seq(a, b) => Expr::seq(self.expr(a), self.expr(b)),
            Expr::Choice(a, b) => Expr::choice(self.expr(a), self.expr(b)),
            Expr::Alt(a, b) => Expr::alt(self.expr(a), self.expr(b)),
            Expr::Not(b) => Expr::not(self.expr(b)),
            Expr::And(b) => Expr::not(Expr::not(self.expr(b))),
            Expr::Opt(b) => Expr::choice(self.expr(b), Expr::Empty),
            Expr::Plus(b) => {
                let body = self.expr(b);
                let star = self.star(body.clone());
                Expr::seq(body, star)
            }
            Expr::Class(set) => class_to_choice(set),
            Expr::Star(b) => {
                let body = self.expr(b);
                self.star(body)
            }
        }
    }

    fn star(&mut self, body: Expr) -> Expr {
        let eliminate = match self.mode {
            StarMode::Keep => false,
            StarMode::Recursive => body.contains_nonterminal(),
            StarMode::All => true,
        };
        if !eliminate {
            return Expr::star(body);
        }
        let name = fresh_name("S", |n| self.taken.contains(n));
        self.taken.insert(name.clone());
        let rule = Expr::choice(Expr::seq(body, Expr::nt(name.clone())), Expr::Empty);
        self.new_rules.push((name.clone(), rule));
        Expr::nt(name)
    }
}

/// Star elimination with continuation folding. The result has no sugar,
/// no repetition, and every nonterminal application in tail position.
/// That last invariant is what the automaton construction relies on:
/// each rule is expanded once and shared between its applications, so
/// all applications must agree on what follows them, which holds
/// exactly when nothing ever does. Whatever trails an eliminated star
/// is folded into the fresh rule instead of being sequenced after it:
///
/// ```text
/// p* k       =>  S           with  S <- p S / !p k
/// (a / b) k  =>  a K / !a (b K)    with  K <- k
/// A k        =>  A0          with  A0 <- body of A, K in its tails
/// ```
///
/// The `!p` and `!a` guards keep repetition and choice committed: once
/// an iteration or the first alternative has succeeded, a later failure
/// of `k` must fail the whole expression, not backtrack.
pub fn desugar_linear(g: &Grammar) -> Grammar {
    let g = desugar_keep_stars(g);
    let mut f = Folder {
        g: &g,
        taken: g.rules.keys().cloned().collect(),
        out: IndexMap::new(),
        memo: IndexMap::new(),
    };
    for name in g.rules.keys() {
        f.fold_rule(name, None);
    }
    let start = f.fold(&g.start.clone(), Expr::Empty);
    Grammar::new(g.alphabet.clone(), f.out, start)
}

struct Folder<'a> {
    g: &'a Grammar,
    taken: BTreeSet<String>,
    out: IndexMap<String, Expr>,
    /// (rule, follow-up rule) pairs already instantiated.
    memo: IndexMap<(String, Option<String>), String>,
}

impl Folder<'_> {
    fn fresh(&mut self, prefix: &str) -> String {
        let name = fresh_name(prefix, |n| self.taken.contains(n));
        self.taken.insert(name.clone());
        name
    }

    /// An expression equivalent to `e k`, with `k` already folded.
    fn fold(&mut self, e: &Expr, k: Expr) -> Expr {
        match e {
            Expr::Empty => k,
            Expr::Char(_) | Expr::Any => seq_unless_empty(e.clone(), k),
            Expr::Seq(a, b) => {
                let kb = self.fold(b, k);
                self.fold(a, kb)
            }
            Expr::Not(b) => {
                let guard = Expr::not(self.fold(b, Expr::Empty));
                seq_unless_empty(guard, k)
            }
            Expr::Choice(a, b) => {
                if matches!(k, Expr::Empty) {
                    return Expr::choice(self.fold(a, Expr::Empty), self.fold(b, Expr::Empty));
                }
                let kn = self.name_continuation(k);
                let guard = Expr::not(self.fold(a, Expr::Empty));
                Expr::choice(
                    self.fold(a, Expr::nt(kn.clone())),
                    Expr::seq(guard, self.fold(b, Expr::nt(kn))),
                )
            }
            Expr::Star(p) => {
                let name = self.fresh("S");
                self.out.insert(name.clone(), Expr::Empty); // reserve the slot
                let again = self.fold(p, Expr::nt(name.clone()));
                let stop = if matches!(k, Expr::Empty) {
                    Expr::Empty
                } else {
                    Expr::seq(Expr::not(self.fold(p, Expr::Empty)), k)
                };
                self.out.insert(name.clone(), Expr::choice(again, stop));
                Expr::nt(name)
            }
            Expr::Nonterminal(name) => {
                if self.g.rule(name).is_none() {
                    // invalid grammar; leave the application untouched
                    return seq_unless_empty(e.clone(), k);
                }
                let cont = match k {
                    Expr::Empty => None,
                    k => Some(self.name_continuation(k)),
                };
                Expr::nt(self.fold_rule(name, cont))
            }
            // Alt and the sugar nodes cannot occur after desugaring
            other => seq_unless_empty(other.clone(), k),
        }
    }

    /// A rule name for the folded continuation, reusing a bare
    /// application as-is.
    fn name_continuation(&mut self, k: Expr) -> String {
        if let Expr::Nonterminal(name) = k {
            return name;
        }
        let name = self.fresh("K");
        self.out.insert(name.clone(), k);
        name
    }

    /// The instance of `name` whose tails continue into `cont`.
    fn fold_rule(&mut self, name: &str, cont: Option<String>) -> String {
        let key = (name.to_string(), cont.clone());
        if let Some(done) = self.memo.get(&key) {
            return done.clone();
        }
        let instance = match cont {
            None => name.to_string(),
            Some(_) => self.fresh(name),
        };
        self.memo.insert(key, instance.clone());
        let body = self.g.rule(name).cloned().unwrap_or(Expr::Empty);
        let k = cont.map(Expr::nt).unwrap_or(Expr::Empty);
        self.out.insert(instance.clone(), Expr::Empty); // reserve the slot
        let folded = self.fold(&body, k);
        self.out.insert(instance.clone(), folded);
        instance
    }
}

fn seq_unless_empty(e: Expr, k: Expr) -> Expr {
    match k {
        Expr::Empty => e,
        k => Expr::seq(e, k),
    }
}

fn class_to_choice(set: &BTreeSet<char>) -> Expr {
    // An empty class matches nothing.
    let mut iter = set.iter().rev();
    match iter.next() {
        None => Expr::not(Expr::Empty),
        Some(last) => {
            let mut e = Expr::Char(*last);
            for c in iter {
                e = Expr::choice(Expr::Char(*c), e);
            }
            e
        }
    }
}
