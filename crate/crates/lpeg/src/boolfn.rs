//! Boolean functions over automaton state variables.
//!
//! Functions are plain expression trees; semantic equality and
//! determinization go through the reduced ordered decision diagrams in
//! [`crate::bdd`]. The smart constructors fold constants, which is all
//! the structural simplification the worked-example values need.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};

/// A boolean variable: either an automaton state or the temporary
/// placeholder for a nonterminal's initial function.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    State(usize),
    Temp(String),
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::State(i) => write!(f, "q{i}"),
            Var::Temp(name) => write!(f, "f_tmp_{name}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BoolExpr {
    Const(bool),
    Var(Var),
    Not(Box<BoolExpr>),
    And(Box<BoolExpr>, Box<BoolExpr>),
    Or(Box<BoolExpr>, Box<BoolExpr>),
}

pub const TRUE: BoolExpr = BoolExpr::Const(true);
pub const FALSE: BoolExpr = BoolExpr::Const(false);

impl BoolExpr {
    pub fn state(i: usize) -> BoolExpr {
        BoolExpr::Var(Var::State(i))
    }

    pub fn temp(name: impl Into<String>) -> BoolExpr {
        BoolExpr::Var(Var::Temp(name.into()))
    }

    pub fn and(a: BoolExpr, b: BoolExpr) -> BoolExpr {
        match (a, b) {
            (BoolExpr::Const(false), _) | (_, BoolExpr::Const(false)) => FALSE,
            (BoolExpr::Const(true), x) | (x, BoolExpr::Const(true)) => x,
            (a, b) => BoolExpr::And(Box::new(a), Box::new(b)),
        }
    }

    pub fn or(a: BoolExpr, b: BoolExpr) -> BoolExpr {
        match (a, b) {
            (BoolExpr::Const(true), _) | (_, BoolExpr::Const(true)) => TRUE,
            (BoolExpr::Const(false), x) | (x, BoolExpr::Const(false)) => x,
            (a, b) => BoolExpr::Or(Box::new(a), Box::new(b)),
        }
    }

    pub fn negate(a: BoolExpr) -> BoolExpr {
        match a {
            BoolExpr::Const(b) => BoolExpr::Const(!b),
            a => BoolExpr::Not(Box::new(a)),
        }
    }

    pub fn variables(&self, out: &mut BTreeSet<Var>) {
        match self {
            BoolExpr::Const(_) => {}
            BoolExpr::Var(v) => {
                out.insert(v.clone());
            }
            BoolExpr::Not(a) => a.variables(out),
            BoolExpr::And(a, b) | BoolExpr::Or(a, b) => {
                a.variables(out);
                b.variables(out);
            }
        }
    }

    pub fn contains_temp(&self) -> Option<&str> {
        match self {
            BoolExpr::Var(Var::Temp(name)) => Some(name),
            BoolExpr::Var(_) | BoolExpr::Const(_) => None,
            BoolExpr::Not(a) => a.contains_temp(),
            BoolExpr::And(a, b) | BoolExpr::Or(a, b) => {
                a.contains_temp().or_else(|| b.contains_temp())
            }
        }
    }

    /// Evaluation under a total assignment.
    pub fn eval(&self, assignment: &dyn Fn(&Var) -> Option<bool>) -> Result<bool> {
        Ok(match self {
            BoolExpr::Const(b) => *b,
            BoolExpr::Var(v) => {
                assignment(v).ok_or_else(|| Error::UnknownVariable(v.to_string()))?
            }
            BoolExpr::Not(a) => !a.eval(assignment)?,
            BoolExpr::And(a, b) => a.eval(assignment)? && b.eval(assignment)?,
            BoolExpr::Or(a, b) => a.eval(assignment)? || b.eval(assignment)?,
        })
    }

    pub fn eval_map(&self, assignment: &BTreeMap<Var, bool>) -> Result<bool> {
        self.eval(&|v| assignment.get(v).copied())
    }

    /// Simultaneous substitution of variables by functions. Variables not
    /// in the map are kept.
    pub fn subst(&self, map: &dyn Fn(&Var) -> Option<BoolExpr>) -> BoolExpr {
        match self {
            BoolExpr::Const(_) => self.clone(),
            BoolExpr::Var(v) => map(v).unwrap_or_else(|| self.clone()),
            BoolExpr::Not(a) => BoolExpr::negate(a.subst(map)),
            BoolExpr::And(a, b) => BoolExpr::and(a.subst(map), b.subst(map)),
            BoolExpr::Or(a, b) => BoolExpr::or(a.subst(map), b.subst(map)),
        }
    }

    pub fn subst_map(&self, map: &BTreeMap<Var, BoolExpr>) -> BoolExpr {
        self.subst(&|v| map.get(v).cloned())
    }
}

/// `eval_F`: variables in `F` replaced by true, the rest kept.
pub fn eval_f(f: &BoolExpr, accepting: &BTreeSet<usize>) -> BoolExpr {
    f.subst(&|v| match v {
        Var::State(i) if accepting.contains(i) => Some(TRUE),
        _ => None,
    })
}

/// `eval_P`: variables in `P` replaced by true, all others by false.
pub fn eval_p(f: &BoolExpr, lookahead: &BTreeSet<usize>) -> bool {
    f.eval(&|v| match v {
        Var::State(i) => Some(lookahead.contains(i)),
        Var::Temp(_) => Some(false),
    })
    .expect("assignment is total")
}

impl fmt::Display for BoolExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn go(e: &BoolExpr, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
            let prec = match e {
                BoolExpr::Or(..) => 1,
                BoolExpr::And(..) => 2,
                _ => 3,
            };
            if prec < min {
                write!(f, "(")?;
            }
            match e {
                BoolExpr::Const(true) => write!(f, "true")?,
                BoolExpr::Const(false) => write!(f, "false")?,
                BoolExpr::Var(v) => write!(f, "{v}")?,
                BoolExpr::Not(a) => {
                    write!(f, "!")?;
                    go(a, f, 3)?;
                }
                BoolExpr::And(a, b) => {
                    go(a, f, 2)?;
                    write!(f, " & ")?;
                    go(b, f, 2)?;
                }
                BoolExpr::Or(a, b) => {
                    go(a, f, 1)?;
                    write!(f, " | ")?;
                    go(b, f, 1)?;
                }
            }
            if prec < min {
                write!(f, ")")?;
            }
            Ok(())
        }
        go(self, f, 0)
    }
}
