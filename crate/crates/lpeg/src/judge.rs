//! The syntactic LPEG judgement.
//!
//! A grammar is linear when the start expression and every rule body are
//! derivable from
//!
//! ```text
//! e ::= p | p A | p e | e/e | !e e
//! ```
//!
//! where `p` ranges over nonterminal-free expressions. Equivalently:
//! nonterminals may only appear in tail position of a sequence or inside
//! a not-predicate. A bare nonterminal `A` is read as `'' A`, so it is
//! linear on its own.

use crate::expr::{Expr, Path};
use crate::grammar::Grammar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// Rule name, or `"start"` for the start expression.
    pub rule: String,
    /// Child-index path from the rule body to the offending node.
    pub path: Path,
    /// Rendering of the offending subexpression.
    pub expr: String,
    pub reason: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: `{}`: {}", self.rule, self.expr, self.reason)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpegJudgement {
    pub is_lpeg: bool,
    pub violations: Vec<Violation>,
}

/// Decides the LPEG judgement. Expects `Class`/`Opt`/`Plus`/`And` sugar
/// to be gone (see [`crate::desugar::desugar_keep_stars`]); stars may
/// remain and are judged by the n-freeness of their body. The judgement
/// is total: sugar nodes that do slip through are treated like their
/// expansions.
pub fn is_lpeg(g: &Grammar) -> LpegJudgement {
    let mut violations = Vec::new();
    for (name, body) in &g.rules {
        collect(name, body, &mut Vec::new(), &mut violations);
    }
    collect("start", &g.start, &mut Vec::new(), &mut violations);
    LpegJudgement {
        is_lpeg: violations.is_empty(),
        violations,
    }
}

/// True iff `e` is a linear parsing expression.
pub fn is_linear_expr(e: &Expr) -> bool {
    linear_ok(e)
}

fn linear_ok(e: &Expr) -> bool {
    if e.is_nfree() {
        return true;
    }
    match e {
        Expr::Nonterminal(_) => true,
        Expr::Choice(a, b) | Expr::Alt(a, b) => linear_ok(a) && linear_ok(b),
        // A trailing predicate is read as `!e ''`.
        Expr::Not(b) | Expr::And(b) => linear_ok(b),
        Expr::Opt(b) => linear_ok(b),
        Expr::Seq(l, r) => prefix_ok(l) && linear_ok(r),
        // reached only when the body contains a nonterminal
        Expr::Star(_) | Expr::Plus(_) => false,
        _ => unreachable!("n-free cases handled above"),
    }
}

/// May `e` appear before the tail of a sequence? Only n-free expressions
/// and not-predicates (over linear bodies) consume-and-continue.
fn prefix_ok(e: &Expr) -> bool {
    if e.is_nfree() {
        return true;
    }
    match e {
        Expr::Not(b) | Expr::And(b) => linear_ok(b),
        Expr::Seq(l, r) => prefix_ok(l) && prefix_ok(r),
        _ => false,
    }
}

/// Reports the minimal offending subexpressions: nodes that are not
/// linear although every proper subexpression is.
fn collect(rule: &str, e: &Expr, path: &mut Path, out: &mut Vec<Violation>) {
    let before = out.len();
    for (i, child) in e.children().into_iter().enumerate() {
        path.push(i);
        collect(rule, child, path, out);
        path.pop();
    }
    if out.len() == before && !linear_ok(e) {
        out.push(Violation {
            rule: rule.to_string(),
            path: path.clone(),
            expr: e.to_string(),
            reason: reason_for(e),
        });
    }
}

fn reason_for(e: &Expr) -> String {
    match e {
        Expr::Star(_) | Expr::Plus(_) => {
            "repetition over an expression containing a nonterminal".to_string()
        }
        Expr::Seq(..) => "nonterminal in non-tail position of a sequence".to_string(),
        _ => "not derivable from the linear-expression syntax".to_string(),
    }
}
