//! Boolean finite automata.
//!
//! States carry boolean structure: the current configuration is a
//! boolean function over state variables, a symbol step substitutes
//! every state variable by its transition function simultaneously, and
//! acceptance evaluates the configuration under the accepting and
//! lookahead sets. Determinization enumerates the reachable
//! configurations as canonical decision-diagram roots.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use crate::bdd::{Bdd, NodeRef, BDD_FALSE};
use crate::boolfn::{BoolExpr, Var, FALSE};
use crate::dfa::Dfa;
use crate::error::{Error, Result};

/// A boolean finite automaton `(Q, Sigma, delta, f0, F, P)`. States are
/// `0..state_count`; missing `delta` entries mean the constant false.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bfa {
    pub state_count: usize,
    pub alphabet: BTreeSet<char>,
    pub delta: BTreeMap<(usize, char), BoolExpr>,
    pub initial: BoolExpr,
    /// F: states accepting at the end of the consumed prefix.
    pub accepting: BTreeSet<usize>,
    /// P: states accepting lookahead-only continuations.
    pub lookahead: BTreeSet<usize>,
}

impl Bfa {
    /// The first temporary variable still present anywhere, if any. A
    /// BFA straight out of the structural construction has temporaries;
    /// they must be substituted away before the automaton can run.
    pub fn pending_temp(&self) -> Option<&str> {
        self.initial
            .contains_temp()
            .or_else(|| self.delta.values().find_map(|f| f.contains_temp()))
    }

    fn require_finalized(&self) -> Result<()> {
        match self.pending_temp() {
            Some(name) => Err(Error::TempVariablePresent(name.to_string())),
            None => Ok(()),
        }
    }

    /// Extended transition on one symbol: simultaneous substitution of
    /// every state variable by its transition function.
    pub fn step(&self, f: &BoolExpr, symbol: char) -> Result<BoolExpr> {
        self.require_finalized()?;
        Ok(f.subst(&|v| match v {
            Var::State(q) => Some(
                self.delta
                    .get(&(*q, symbol))
                    .cloned()
                    .unwrap_or(FALSE),
            ),
            Var::Temp(_) => None,
        }))
    }

    pub fn step_string(&self, f: &BoolExpr, input: &str) -> Result<BoolExpr> {
        let mut cur = f.clone();
        for c in input.chars() {
            cur = self.step(&cur, c)?;
        }
        Ok(cur)
    }

    /// Per-symbol variable images for decision-diagram runs: level `q`
    /// maps to the diagram of `delta(q, a)`.
    fn images(&self, bdd: &mut Bdd) -> Result<BTreeMap<char, HashMap<u32, NodeRef>>> {
        let mut images = BTreeMap::new();
        for &c in &self.alphabet {
            let mut image = HashMap::new();
            for q in 0..self.state_count {
                let root = match self.delta.get(&(q, c)) {
                    Some(f) => bdd.from_expr(f)?,
                    None => BDD_FALSE,
                };
                image.insert(q as u32, root);
            }
            images.insert(c, image);
        }
        Ok(images)
    }

    fn fresh_bdd(&self) -> Bdd {
        Bdd::new((0..self.state_count).map(Var::State).collect())
    }

    /// One step of the backward assignment: the truth of `q` before a
    /// symbol is the truth of `delta(q, c)` after it.
    fn pull_back(
        &self,
        bdd: &Bdd,
        image: &HashMap<u32, NodeRef>,
        beta: &[bool],
        c: char,
    ) -> Vec<bool> {
        debug_assert!(self.alphabet.contains(&c));
        (0..self.state_count)
            .map(|q| {
                bdd.eval(image[&(q as u32)], &|v| {
                    matches!(v, Var::State(s) if beta[*s])
                })
            })
            .collect()
    }

    /// Whole-word acceptance: run from `f0`, then evaluate under the
    /// assignment that makes exactly `F u P` true. A symbol outside the
    /// alphabet rejects. Forward symbolic stepping grows exponentially
    /// in the input length, so the final assignment is pulled backward
    /// through the word instead and `f0` evaluated once at the end.
    pub fn accepts(&self, input: &str) -> Result<bool> {
        self.require_finalized()?;
        if input.chars().any(|c| !self.alphabet.contains(&c)) {
            return Ok(false);
        }
        let mut bdd = self.fresh_bdd();
        let images = self.images(&mut bdd)?;
        let mut beta: Vec<bool> = (0..self.state_count)
            .map(|q| self.accepting.contains(&q) || self.lookahead.contains(&q))
            .collect();
        for c in input.chars().rev() {
            beta = self.pull_back(&bdd, &images[&c], &beta, c);
        }
        self.initial
            .eval(&|v| Some(matches!(v, Var::State(q) if beta[*q])))
    }

    /// The consume relation: all prefix lengths `|x|` such that the
    /// automaton consumes `x` and the whole remainder passes as
    /// lookahead — predicate failure is only decided once the rest of
    /// the input has been read, success is kept sticky by the self-loops
    /// on F and P. Matches the two-phase evaluation: `eval_F` closes the
    /// consumed part, `eval_P` closes the lookahead part. Computed
    /// backward like [`Bfa::accepts`], with the `eval_F` override
    /// applied at the split boundary.
    pub fn consume(&self, input: &str) -> Result<BTreeSet<usize>> {
        self.require_finalized()?;
        let chars: Vec<char> = input.chars().collect();
        if chars.iter().any(|c| !self.alphabet.contains(c)) {
            return Ok(BTreeSet::new());
        }
        let mut bdd = self.fresh_bdd();
        let images = self.images(&mut bdd)?;
        let mut lengths = BTreeSet::new();
        for split in 0..=chars.len() {
            // lookahead phase over the remainder, seeded with P
            let mut beta: Vec<bool> = (0..self.state_count)
                .map(|q| self.lookahead.contains(&q))
                .collect();
            for &c in chars[split..].iter().rev() {
                beta = self.pull_back(&bdd, &images[&c], &beta, c);
            }
            // eval_F: accepting variables are true at the boundary
            for &q in &self.accepting {
                beta[q] = true;
            }
            // consuming phase over the prefix
            for &c in chars[..split].iter().rev() {
                beta = self.pull_back(&bdd, &images[&c], &beta, c);
            }
            if self
                .initial
                .eval(&|v| Some(matches!(v, Var::State(q) if beta[*q])))?
            {
                lengths.insert(split);
            }
        }
        Ok(lengths)
    }

    /// Determinization by the dual construction. Iterated symbolic
    /// substitution of the configuration function blows up, so the
    /// configuration after reading `w` is instead identified by its
    /// values on the backward assignments
    ///
    ///   beta_v(q) = "a run sitting in q accepts the future word v",
    ///
    /// because acceptance of `w v` is exactly the configuration of `w`
    /// evaluated at `beta_v`. The set of such assignments starts at the
    /// `F u P` indicator (v empty) and is closed under pre-composition
    /// with one transition step, so a breadth-first closure enumerates
    /// it; a DFA state is then the bitvector of configuration values
    /// over the closure, its successor a mere index shuffle. Errors out
    /// when either the closure or the DFA outgrows `state_budget`.
    pub fn to_dfa(&self, state_budget: usize) -> Result<Dfa> {
        self.require_finalized()?;
        let mut bdd = self.fresh_bdd();
        let images = self.images(&mut bdd)?;
        let n = self.state_count;

        // backward closure: beta' (q) = beta(delta(q, c))
        let beta0: Vec<bool> = (0..n)
            .map(|q| self.accepting.contains(&q) || self.lookahead.contains(&q))
            .collect();
        let mut betas: Vec<Vec<bool>> = vec![beta0.clone()];
        let mut beta_index: HashMap<Vec<bool>, usize> = HashMap::from([(beta0, 0)]);
        let mut shuffle: BTreeMap<char, Vec<usize>> =
            self.alphabet.iter().map(|&c| (c, Vec::new())).collect();
        let mut i = 0;
        while i < betas.len() {
            let beta = betas[i].clone();
            for (&c, image) in &images {
                let next: Vec<bool> = (0..n)
                    .map(|q| {
                        bdd.eval(image[&(q as u32)], &|v| {
                            matches!(v, Var::State(s) if beta[*s])
                        })
                    })
                    .collect();
                let j = match beta_index.get(&next) {
                    Some(&j) => j,
                    None => {
                        let j = betas.len();
                        if j >= state_budget {
                            return Err(Error::StateBudgetExceeded(state_budget));
                        }
                        beta_index.insert(next.clone(), j);
                        betas.push(next);
                        j
                    }
                };
                shuffle.get_mut(&c).expect("alphabet symbol").push(j);
            }
            i += 1;
        }

        // forward walk over value vectors; index 0 is beta over the
        // empty future, so bit 0 is acceptance
        let f0 = bdd.from_expr(&self.initial)?;
        let start: Vec<bool> = betas
            .iter()
            .map(|beta| bdd.eval(f0, &|v| matches!(v, Var::State(s) if beta[*s])))
            .collect();
        let mut index: HashMap<Vec<bool>, usize> = HashMap::from([(start.clone(), 0)]);
        let mut queue = VecDeque::from([start]);
        let mut transitions: Vec<BTreeMap<char, usize>> = Vec::new();
        let mut accepting = BTreeSet::new();

        while let Some(vals) = queue.pop_front() {
            let id = transitions.len();
            if vals[0] {
                accepting.insert(id);
            }
            let mut row = BTreeMap::new();
            for (&c, map) in &shuffle {
                let next: Vec<bool> = map.iter().map(|&j| vals[j]).collect();
                let next_id = match index.get(&next) {
                    Some(&i) => i,
                    None => {
                        let i = index.len();
                        if i >= state_budget {
                            return Err(Error::StateBudgetExceeded(state_budget));
                        }
                        index.insert(next.clone(), i);
                        queue.push_back(next);
                        i
                    }
                };
                row.insert(c, next_id);
            }
            transitions.push(row);
        }

        Ok(Dfa {
            alphabet: self.alphabet.clone(),
            states: (0..transitions.len()).map(|i| format!("s{i}")).collect(),
            start: 0,
            accepting,
            transitions,
        })
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph bfa {\n  rankdir=LR;\n");
        let _ = writeln!(out, "  label=\"f0 = {}\";\n  labelloc=top;", self.initial);
        for q in 0..self.state_count {
            let shape = if self.accepting.contains(&q) {
                "doublecircle"
            } else if self.lookahead.contains(&q) {
                "diamond"
            } else {
                "circle"
            };
            let _ = writeln!(out, "  q{q} [shape={shape}];");
        }
        for ((q, c), f) in &self.delta {
            let _ = writeln!(out, "  q{q} -> f{q}_{} [style=invis];", *c as u32);
            let _ = writeln!(
                out,
                "  f{q}_{} [shape=plaintext, label=\"{c}: {f}\"];",
                *c as u32
            );
        }
        out.push_str("}\n");
        out
    }
}
