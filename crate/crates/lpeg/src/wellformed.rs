//! Well-formedness: guarantees the interpreter terminates.
//!
//! Two failure shapes are rejected: a rule that can reinvoke itself
//! before consuming any terminal (`A <- '' A`), and a repetition whose
//! body can succeed consuming nothing (`(!'a')*`). Both would loop
//! forever under the consume semantics.

use std::collections::{BTreeMap, BTreeSet};

use crate::expr::Expr;
use crate::grammar::Grammar;

/// Empty when the grammar is well-formed.
pub fn check_wellformed(g: &Grammar) -> Vec<String> {
    let nullable = nullable_rules(g);
    let mut diagnostics = Vec::new();

    for (name, body) in &g.rules {
        find_nullable_stars(body, &nullable, &mut |e| {
            diagnostics.push(format!(
                "rule {name}: repetition body of `{e}` can succeed without consuming input"
            ));
        });
    }
    find_nullable_stars(&g.start, &nullable, &mut |e| {
        diagnostics.push(format!(
            "start: repetition body of `{e}` can succeed without consuming input"
        ));
    });

    // A -> B edges where B is reachable at the same input position.
    let mut edges: BTreeMap<&str, BTreeSet<String>> = BTreeMap::new();
    for (name, body) in &g.rules {
        let mut targets = BTreeSet::new();
        nullable_start_refs(body, &nullable, &mut targets);
        edges.insert(name, targets);
    }
    for name in g.rules.keys() {
        if reaches(name, name, &edges) {
            diagnostics.push(format!(
                "rule {name} can reinvoke itself without consuming input"
            ));
        }
    }
    diagnostics
}

fn reaches(from: &str, goal: &str, edges: &BTreeMap<&str, BTreeSet<String>>) -> bool {
    let mut seen = BTreeSet::new();
    let mut stack: Vec<&str> = edges.get(from).into_iter().flatten().map(|s| s.as_str()).collect();
    while let Some(n) = stack.pop() {
        if n == goal {
            return true;
        }
        if seen.insert(n) {
            stack.extend(edges.get(n).into_iter().flatten().map(|s| s.as_str()));
        }
    }
    false
}

/// Least fixpoint of "this rule can succeed consuming nothing".
fn nullable_rules(g: &Grammar) -> BTreeMap<String, bool> {
    let mut map: BTreeMap<String, bool> = g.rules.keys().map(|k| (k.clone(), false)).collect();
    loop {
        let mut changed = false;
        for (name, body) in &g.rules {
            if !map[name] && nullable(body, &map) {
                map.insert(name.clone(), true);
                changed = true;
            }
        }
        if !changed {
            return map;
        }
    }
}

fn nullable(e: &Expr, rules: &BTreeMap<String, bool>) -> bool {
    match e {
        Expr::Empty | Expr::Star(_) | Expr::Opt(_) | Expr::Not(_) | Expr::And(_) => true,
        Expr::Char(_) | Expr::Any | Expr::Class(_) => false,
        Expr::Seq(a, b) => nullable(a, rules) && nullable(b, rules),
        Expr::Choice(a, b) | Expr::Alt(a, b) => nullable(a, rules) || nullable(b, rules),
        Expr::Plus(b) => nullable(b, rules),
        Expr::Nonterminal(name) => rules.get(name).copied().unwrap_or(false),
    }
}

fn find_nullable_stars(
    e: &Expr,
    rules: &BTreeMap<String, bool>,
    report: &mut impl FnMut(&Expr),
) {
    if let Expr::Star(b) | Expr::Plus(b) = e {
        if nullable(b, rules) {
            report(e);
        }
    }
    for c in e.children() {
        find_nullable_stars(c, rules, report);
    }
}

/// Nonterminals reachable at offset zero of `e`.
fn nullable_start_refs(e: &Expr, rules: &BTreeMap<String, bool>, out: &mut BTreeSet<String>) {
    match e {
        Expr::Nonterminal(name) => {
            out.insert(name.clone());
        }
        Expr::Seq(a, b) => {
            nullable_start_refs(a, rules, out);
            if nullable(a, rules) {
                nullable_start_refs(b, rules, out);
            }
        }
        Expr::Choice(a, b) | Expr::Alt(a, b) => {
            nullable_start_refs(a, rules, out);
            nullable_start_refs(b, rules, out);
        }
        Expr::Star(b) | Expr::Opt(b) | Expr::Plus(b) | Expr::Not(b) | Expr::And(b) => {
            nullable_start_refs(b, rules, out);
        }
        _ => {}
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_grammar;

    fn diagnose(src: &str) -> Vec<String> {
        check_wellformed(&parse_grammar(src).unwrap())
    }

    #[test]
    fn epsilon_prefixed_self_recursion_is_rejected() {
        let d = diagnose("A <- '' A");
        assert_eq!(d.len(), 1);
        assert!(d[0].contains("reinvoke"));
    }

    #[test]
    fn paper_pipeline_grammar_is_accepted() {
        assert!(diagnose("A <- 'a' A / 'b'").is_empty());
    }

    #[test]
    fn nullable_star_body_is_rejected() {
        let d = diagnose("A <- (!'a')*");
        assert_eq!(d.len(), 1);
        assert!(d[0].contains("repetition"));
    }

    #[test]
    fn mutual_epsilon_cycle_is_rejected() {
        let d = diagnose("A <- B / 'a'\nB <- A / 'b'");
        assert_eq!(d.len(), 2);
    }

    #[test]
    fn predicate_prefix_cycle_is_rejected() {
        assert!(!diagnose("A <- &'a' A / 'b'").is_empty());
    }

    #[test]
    fn consuming_recursion_is_fine() {
        assert!(diagnose("A <- 'a' A 'a' / B*\nB <- 'a' B / 'b'").is_empty());
        assert!(diagnose("A <- !('a' A) 'a' A / 'b'").is_empty());
    }
}
