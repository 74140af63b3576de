//! LPEG to automaton conversion.
//!
//! Four steps. `rewrite_choices` turns every prioritized choice
//! `e1 / e2` into the unordered `e1 | !e1 e2`, making priority explicit.
//! `cg` redirects every nonterminal inside a not-predicate to a primed
//! copy of its rule, so lookahead runs never share states with
//! consuming runs. `construct_bfa` is the structural construction: each
//! syntactic node contributes a component (fresh states, local
//! transitions, an initial function, accepting set F and lookahead set
//! P), with sequencing done by the substitution `phi`. Recursive rule
//! applications leave a temporary variable behind; `substitute_temps`
//! resolves them against the recorded initial functions.

use std::collections::{BTreeMap, BTreeSet};

use indexmap::IndexMap;

use crate::bfa::Bfa;
use crate::boolfn::{BoolExpr, Var};
use crate::desugar::desugar_linear;
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::grammar::Grammar;
use crate::interp::MatchMode;
use crate::judge::is_lpeg;
use crate::wellformed::check_wellformed;

/// `e1 / e2` becomes `e1 | !e1 e2`, bottom-up everywhere (including
/// inside predicates). Expects a desugared grammar.
pub fn rewrite_choices(g: &Grammar) -> Grammar {
    let rules = g
        .rules
        .iter()
        .map(|(name, body)| (name.clone(), rewrite_expr(body)))
        .collect();
    Grammar::new(g.alphabet.clone(), rules, rewrite_expr(&g.start))
}

fn rewrite_expr(e: &Expr) -> Expr {
    match e {
        Expr::Choice(a, b) => {
            let a = rewrite_expr(a);
            let b = rewrite_expr(b);
            Expr::alt(a.clone(), Expr::seq(Expr::not(a), b))
        }
        Expr::Seq(a, b) => Expr::seq(rewrite_expr(a), rewrite_expr(b)),
        Expr::Alt(a, b) => Expr::alt(rewrite_expr(a), rewrite_expr(b)),
        Expr::Star(b) => Expr::star(rewrite_expr(b)),
        Expr::Not(b) => Expr::not(rewrite_expr(b)),
        other => other.clone(),
    }
}

/// Primes every nonterminal application: `A` becomes `A'`. Idempotent.
pub fn copy_expr(e: &Expr) -> Expr {
    match e {
        Expr::Nonterminal(name) if !name.ends_with('\'') => Expr::nt(format!("{name}'")),
        Expr::Seq(a, b) => Expr::seq(copy_expr(a), copy_expr(b)),
        Expr::Alt(a, b) => Expr::alt(copy_expr(a), copy_expr(b)),
        Expr::Choice(a, b) => Expr::choice(copy_expr(a), copy_expr(b)),
        Expr::Star(b) => Expr::star(copy_expr(b)),
        Expr::Not(b) => Expr::not(copy_expr(b)),
        other => other.clone(),
    }
}

/// Redirects nonterminals under not-predicates to their primed copies.
pub fn cn(e: &Expr) -> Expr {
    match e {
        Expr::Alt(a, b) => Expr::alt(cn(a), cn(b)),
        Expr::Seq(a, b) => Expr::seq(cn_prefix(a), cn(b)),
        Expr::Not(b) => Expr::not(copy_expr(b)),
        other => other.clone(),
    }
}

fn cn_prefix(e: &Expr) -> Expr {
    match e {
        Expr::Seq(a, b) => Expr::seq(cn_prefix(a), cn_prefix(b)),
        Expr::Alt(a, b) => Expr::alt(cn_prefix(a), cn_prefix(b)),
        Expr::Not(b) => Expr::not(copy_expr(b)),
        other => other.clone(),
    }
}

/// The whole-grammar copy step: every rule gets a `cn`-rewritten body
/// plus a primed duplicate for lookahead use.
pub fn cg(g: &Grammar) -> Grammar {
    let mut rules: IndexMap<String, Expr> = IndexMap::new();
    for (name, body) in &g.rules {
        rules.insert(name.clone(), cn(body));
    }
    for (name, body) in &g.rules {
        rules.insert(format!("{name}'"), copy_expr(body));
    }
    Grammar::new(g.alphabet.clone(), rules, cn(&g.start))
}

/// `phi(f1, f2, F)`: every accepting variable `s` of `f1` becomes
/// `s | f2`, chaining a follow-up component onto the accepting states
/// of the one before it.
pub fn phi(f1: &BoolExpr, f2: &BoolExpr, accepting: &BTreeSet<usize>) -> BoolExpr {
    f1.subst(&|v| match v {
        Var::State(q) if accepting.contains(q) => {
            Some(BoolExpr::or(BoolExpr::state(*q), f2.clone()))
        }
        _ => None,
    })
}

/// A structurally constructed BFA whose recursive rule applications are
/// still temporary variables, together with the recorded initial
/// function of every expanded rule.
#[derive(Debug, Clone)]
pub struct RawBfa {
    pub bfa: Bfa,
    pub bindings: BTreeMap<String, BoolExpr>,
}

/// The structural construction. Expects a tail-folded, choice-rewritten,
/// copy-applied grammar: only empty, terminal, any, sequence, unordered
/// alternation, not-predicate and nonterminal nodes may remain, and
/// every nonterminal application must be in tail position — rule
/// expansions are shared between applications, which is only sound when
/// nothing ever follows one.
pub fn construct_bfa(g: &Grammar) -> Result<RawBfa> {
    let mut b = Builder {
        g,
        next_state: 0,
        expanded: BTreeSet::new(),
        bindings: BTreeMap::new(),
    };
    let c = b.build(&g.start)?;
    Ok(RawBfa {
        bfa: Bfa {
            state_count: b.next_state,
            alphabet: g.alphabet.clone(),
            delta: c.delta,
            initial: c.initial,
            accepting: c.accepting,
            lookahead: c.lookahead,
        },
        bindings: b.bindings,
    })
}

/// Replaces every temporary variable by the initial function recorded
/// for its rule, iterating because bindings may refer to each other.
/// Failure to reach a fixpoint means a cyclic binding chain, which
/// well-formedness rules out.
pub fn substitute_temps(raw: RawBfa) -> Result<Bfa> {
    let RawBfa { mut bfa, bindings } = raw;
    let map = |v: &Var| match v {
        Var::Temp(name) => bindings.get(name).cloned(),
        Var::State(_) => None,
    };
    for _ in 0..=bindings.len() + 1 {
        if bfa.pending_temp().is_none() {
            return Ok(bfa);
        }
        bfa.initial = bfa.initial.subst(&map);
        for f in bfa.delta.values_mut() {
            *f = f.subst(&map);
        }
    }
    Err(Error::UnresolvedTemp(
        bfa.pending_temp().unwrap_or("?").to_string(),
    ))
}

struct Component {
    delta: BTreeMap<(usize, char), BoolExpr>,
    initial: BoolExpr,
    accepting: BTreeSet<usize>,
    lookahead: BTreeSet<usize>,
}

struct Builder<'a> {
    g: &'a Grammar,
    next_state: usize,
    /// Rules whose expansion has begun; later applications become temps.
    expanded: BTreeSet<String>,
    bindings: BTreeMap<String, BoolExpr>,
}

impl Builder<'_> {
    fn fresh(&mut self) -> usize {
        let q = self.next_state;
        self.next_state += 1;
        q
    }

    fn build(&mut self, e: &Expr) -> Result<Component> {
        match e {
            Expr::Empty => {
                let s = self.fresh();
                Ok(Component {
                    delta: BTreeMap::new(),
                    initial: BoolExpr::state(s),
                    accepting: [s].into_iter().collect(),
                    lookahead: BTreeSet::new(),
                })
            }
            Expr::Char(a) => {
                let s = self.fresh();
                let t = self.fresh();
                Ok(Component {
                    delta: [((s, *a), BoolExpr::state(t))].into_iter().collect(),
                    initial: BoolExpr::state(s),
                    accepting: [t].into_iter().collect(),
                    lookahead: BTreeSet::new(),
                })
            }
            Expr::Any => {
                let s = self.fresh();
                let t = self.fresh();
                Ok(Component {
                    delta: self
                        .g
                        .alphabet
                        .iter()
                        .map(|&a| ((s, a), BoolExpr::state(t)))
                        .collect(),
                    initial: BoolExpr::state(s),
                    accepting: [t].into_iter().collect(),
                    lookahead: BTreeSet::new(),
                })
            }
            Expr::Seq(e1, e2) => {
                let c1 = self.build(e1)?;
                let c2 = self.build(e2)?;
                // chain c2 onto c1's accepting states, in the initial
                // function and in every c1 transition
                let initial = phi(&c1.initial, &c2.initial, &c1.accepting);
                let mut delta: BTreeMap<(usize, char), BoolExpr> = c1
                    .delta
                    .into_iter()
                    .map(|(k, f)| (k, phi(&f, &c2.initial, &c1.accepting)))
                    .collect();
                delta.extend(c2.delta);
                Ok(Component {
                    delta,
                    initial,
                    accepting: c2.accepting,
                    lookahead: c1.lookahead.union(&c2.lookahead).copied().collect(),
                })
            }
            Expr::Alt(e1, e2) => {
                let c1 = self.build(e1)?;
                let c2 = self.build(e2)?;
                let mut delta = c1.delta;
                delta.extend(c2.delta);
                Ok(Component {
                    delta,
                    initial: BoolExpr::or(c1.initial, c2.initial),
                    accepting: c1.accepting.union(&c2.accepting).copied().collect(),
                    lookahead: c1.lookahead.union(&c2.lookahead).copied().collect(),
                })
            }
            Expr::Not(e1) => {
                let c1 = self.build(e1)?;
                let s = self.fresh();
                // once a lookahead run accepts, it must keep accepting:
                // pin F and P states of the body with self-loops
                let mut delta = c1.delta;
                for &t in c1.accepting.union(&c1.lookahead) {
                    for &a in &self.g.alphabet {
                        let entry = delta.entry((t, a)).or_insert(crate::boolfn::FALSE);
                        *entry = BoolExpr::or(entry.clone(), BoolExpr::state(t));
                    }
                }
                Ok(Component {
                    delta,
                    initial: BoolExpr::and(
                        BoolExpr::state(s),
                        BoolExpr::negate(c1.initial),
                    ),
                    accepting: [s].into_iter().collect(),
                    lookahead: c1.accepting.union(&c1.lookahead).copied().collect(),
                })
            }
            Expr::Nonterminal(name) => {
                if self.expanded.contains(name) {
                    // second application of the rule: a placeholder that
                    // substitute_temps ties back to the recorded f0
                    return Ok(Component {
                        delta: BTreeMap::new(),
                        initial: BoolExpr::temp(name.clone()),
                        accepting: BTreeSet::new(),
                        lookahead: BTreeSet::new(),
                    });
                }
                self.expanded.insert(name.clone());
                let body = self
                    .g
                    .rule(name)
                    .ok_or_else(|| Error::UndefinedNonterminal(name.clone()))?
                    .clone();
                let c = self.build(&body)?;
                self.bindings.insert(name.clone(), c.initial.clone());
                Ok(c)
            }
            other => Err(Error::PipelineDefect(format!(
                "`{other}` reached the automaton construction"
            ))),
        }
    }
}

/// Full pipeline from a validated grammar to a BFA: desugar, rewrite
/// choices, copy predicate rules, construct, resolve temporaries. In
/// prefix mode the accepting states get self-loops afterwards: matching
/// a prefix and ignoring the rest is exactly `e .*`, and trailing `.*`
/// amounts to staying accepting once accepting.
pub fn lpeg_to_bfa(g: &Grammar, mode: MatchMode) -> Result<Bfa> {
    g.validate()?;
    if let Some(name) = g.rules.keys().find(|n| n.contains('\'')) {
        return Err(Error::ReservedPrimedName(name.clone()));
    }
    let wf = check_wellformed(g);
    if !wf.is_empty() {
        return Err(Error::NotWellFormed(wf));
    }
    let judgement = is_lpeg(&crate::desugar::desugar_keep_stars(g));
    if !judgement.is_lpeg {
        return Err(Error::NotLpeg(
            judgement.violations.iter().map(|v| v.to_string()).collect(),
        ));
    }
    let g = desugar_linear(g);
    let g = rewrite_choices(&g);
    let g = cg(&g);
    let mut bfa = substitute_temps(construct_bfa(&g)?)?;
    if mode == MatchMode::Prefix {
        for &f in &bfa.accepting {
            for &a in &bfa.alphabet {
                let entry = bfa
                    .delta
                    .entry((f, a))
                    .or_insert(crate::boolfn::FALSE);
                *entry = BoolExpr::or(entry.clone(), BoolExpr::state(f));
            }
        }
    }
    Ok(bfa)
}

/// End to end: LPEG in, minimal DFA out. The two languages agree on
/// every string over the alphabet (whole-input match in exact mode,
/// any-prefix match in prefix mode).
pub fn lpeg_to_dfa(g: &Grammar, mode: MatchMode, state_budget: usize) -> Result<Dfa> {
    Ok(lpeg_to_bfa(g, mode)?.to_dfa(state_budget)?.minimize())
}

use crate::dfa::Dfa;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interp::{lang_member, strings_over};
    use crate::parse::parse_grammar;

    #[test]
    fn choice_rewrite_makes_priority_explicit() {
        let g = parse_grammar("A <- 'a' / 'b'").unwrap();
        let r = rewrite_choices(&g);
        assert_eq!(r.rules["A"].to_string(), "'a' | !'a' 'b'");
    }

    #[test]
    fn copy_primes_and_is_idempotent() {
        let e = Expr::seq(Expr::Char('a'), Expr::nt("A"));
        let c = copy_expr(&e);
        assert_eq!(c.to_string(), "'a' A'");
        assert_eq!(copy_expr(&c), c);
    }

    #[test]
    fn cg_redirects_predicates_to_copies() {
        // A <- a A | !(a A) b after choice rewriting
        let body = Expr::alt(
            Expr::seq(Expr::Char('a'), Expr::nt("A")),
            Expr::seq(
                Expr::not(Expr::seq(Expr::Char('a'), Expr::nt("A"))),
                Expr::Char('b'),
            ),
        );
        let mut rules = IndexMap::new();
        rules.insert("A".to_string(), body);
        let g = Grammar::new(['a', 'b'].into_iter().collect(), rules, Expr::nt("A"));
        let out = cg(&g);
        assert_eq!(out.rules["A"].to_string(), "'a' A | !('a' A') 'b'");
        assert_eq!(out.rules["A'"].to_string(), "'a' A' | !('a' A') 'b'");
    }

    #[test]
    fn phi_disjoins_onto_accepting_variables() {
        let f1 = BoolExpr::and(BoolExpr::state(0), BoolExpr::or(BoolExpr::state(1), BoolExpr::state(2)));
        let f2 = BoolExpr::state(5);
        let out = phi(&f1, &f2, &[1].into_iter().collect());
        assert_eq!(out.to_string(), "q0 & (q1 | q5 | q2)");
    }

    /// The worked construction for A <- 'a' A / 'b': 14 states,
    /// f0 = q0 | (q11 | q12) & !q2, F = {q13}, P = {q10}.
    #[test]
    fn construction_matches_the_worked_example() {
        let g = parse_grammar("A <- 'a' A / 'b'").unwrap();
        let g = rewrite_choices(&g);
        let g = cg(&g);
        let raw = construct_bfa(&g).unwrap();
        assert_eq!(raw.bfa.state_count, 14);
        assert_eq!(raw.bfa.initial.to_string(), "q0 | (q11 | q12) & !q2");
        assert_eq!(raw.bfa.accepting, [13].into_iter().collect());
        assert_eq!(raw.bfa.lookahead, [10].into_iter().collect());
        // recursion leaves a placeholder on the edge into the recursive call
        assert_eq!(
            raw.bfa.delta[&(0, 'a')].to_string(),
            "q1 | f_tmp_A"
        );
        // the lookahead copy recurses through the primed rule
        assert_eq!(raw.bindings["A'"].to_string(), "q4 | (q8 | q9) & !q6");

        let bfa = substitute_temps(raw).unwrap();
        assert!(bfa.pending_temp().is_none());
        assert_eq!(
            bfa.delta[&(0, 'a')].to_string(),
            "q1 | q0 | (q11 | q12) & !q2"
        );
    }

    #[test]
    fn pipeline_agrees_with_the_interpreter() {
        for src in [
            "A <- 'a' A / 'b'",
            "%alphabet ab\nA <- !('a' 'a') 'a' / 'b'",
            "%alphabet ab\nA <- 'a'* 'b'",
            "%alphabet ab\nA <- ('a' / 'b') ('a' / 'b')",
        ] {
            let g = parse_grammar(src).unwrap();
            for mode in [MatchMode::Exact, MatchMode::Prefix] {
                let bfa = lpeg_to_bfa(&g, mode).unwrap();
                let dfa = lpeg_to_dfa(&g, mode, 10_000).unwrap();
                for w in strings_over(&g.alphabet, 5) {
                    let expected = lang_member(&g, &w, mode).unwrap();
                    assert_eq!(bfa.accepts(&w).unwrap(), expected, "{src:?} {mode:?} {w:?} (bfa)");
                    assert_eq!(dfa.matches(&w), expected, "{src:?} {mode:?} {w:?} (dfa)");
                }
            }
        }
    }

    #[test]
    fn non_lpeg_input_is_rejected() {
        let g = parse_grammar("A <- 'a' A 'a' / 'b'").unwrap();
        assert!(matches!(
            lpeg_to_dfa(&g, MatchMode::Exact, 1000),
            Err(Error::NotLpeg(_))
        ));
        let g = parse_grammar("A <- '' A").unwrap();
        assert!(matches!(
            lpeg_to_dfa(&g, MatchMode::Exact, 1000),
            Err(Error::NotWellFormed(_))
        ));
    }
}
