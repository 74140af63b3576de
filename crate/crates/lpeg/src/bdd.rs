//! Reduced ordered binary decision diagrams.
//!
//! Canonical form for [`BoolExpr`] with a fixed per-manager variable
//! order: two functions are semantically equal iff they reduce to the
//! same node. Determinization walks functions as BDD roots so that
//! repeated transition substitution never rebuilds expression trees.

use std::collections::{BTreeSet, HashMap};

use crate::boolfn::{BoolExpr, Var};
use crate::error::{Error, Result};

pub type NodeRef = u32;

pub const BDD_FALSE: NodeRef = 0;
pub const BDD_TRUE: NodeRef = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct Node {
    level: u32,
    lo: NodeRef,
    hi: NodeRef,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Op {
    And,
    Or,
}

pub struct Bdd {
    order: Vec<Var>,
    level_of: HashMap<Var, u32>,
    nodes: Vec<Node>,
    dedup: HashMap<Node, NodeRef>,
    apply_memo: HashMap<(Op, NodeRef, NodeRef), NodeRef>,
    not_memo: HashMap<NodeRef, NodeRef>,
}

impl Bdd {
    /// A manager over the given variable order (level 0 is tested first).
    pub fn new(order: Vec<Var>) -> Bdd {
        let level_of = order
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i as u32))
            .collect();
        Bdd {
            order,
            level_of,
            // index 0 and 1 are the terminals; level u32::MAX marks them
            nodes: vec![
                Node {
                    level: u32::MAX,
                    lo: 0,
                    hi: 0,
                },
                Node {
                    level: u32::MAX,
                    lo: 1,
                    hi: 1,
                },
            ],
            dedup: HashMap::new(),
            apply_memo: HashMap::new(),
            not_memo: HashMap::new(),
        }
    }

    /// Convenience: a manager ordered by the variables of the given
    /// functions.
    pub fn for_exprs(exprs: &[&BoolExpr]) -> Bdd {
        let mut vars = BTreeSet::new();
        for e in exprs {
            e.variables(&mut vars);
        }
        Bdd::new(vars.into_iter().collect())
    }

    pub fn var_count(&self) -> usize {
        self.order.len()
    }

    /// Total nodes allocated by this manager (they are never freed).
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Nodes reachable from the given root.
    pub fn reachable(&self, root: NodeRef) -> usize {
        let mut seen = BTreeSet::new();
        let mut stack = vec![root];
        while let Some(r) = stack.pop() {
            if r <= BDD_TRUE || !seen.insert(r) {
                continue;
            }
            let n = self.nodes[r as usize];
            stack.push(n.lo);
            stack.push(n.hi);
        }
        seen.len()
    }

    fn mk(&mut self, level: u32, lo: NodeRef, hi: NodeRef) -> NodeRef {
        if lo == hi {
            return lo;
        }
        let node = Node { level, lo, hi };
        if let Some(&r) = self.dedup.get(&node) {
            return r;
        }
        let r = self.nodes.len() as NodeRef;
        self.nodes.push(node);
        self.dedup.insert(node, r);
        r
    }

    pub fn var(&mut self, v: &Var) -> Result<NodeRef> {
        let level = *self
            .level_of
            .get(v)
            .ok_or_else(|| Error::UnknownVariable(v.to_string()))?;
        Ok(self.mk(level, BDD_FALSE, BDD_TRUE))
    }

    pub fn not(&mut self, a: NodeRef) -> NodeRef {
        match a {
            BDD_FALSE => return BDD_TRUE,
            BDD_TRUE => return BDD_FALSE,
            _ => {}
        }
        if let Some(&r) = self.not_memo.get(&a) {
            return r;
        }
        let n = self.nodes[a as usize];
        let lo = self.not(n.lo);
        let hi = self.not(n.hi);
        let r = self.mk(n.level, lo, hi);
        self.not_memo.insert(a, r);
        r
    }

    fn apply(&mut self, op: Op, a: NodeRef, b: NodeRef) -> NodeRef {
        match (op, a, b) {
            (Op::And, BDD_FALSE, _) | (Op::And, _, BDD_FALSE) => return BDD_FALSE,
            (Op::And, BDD_TRUE, x) | (Op::And, x, BDD_TRUE) => return x,
            (Op::Or, BDD_TRUE, _) | (Op::Or, _, BDD_TRUE) => return BDD_TRUE,
            (Op::Or, BDD_FALSE, x) | (Op::Or, x, BDD_FALSE) => return x,
            _ => {}
        }
        if a == b {
            return a;
        }
        let key = (op, a.min(b), a.max(b));
        if let Some(&r) = self.apply_memo.get(&key) {
            return r;
        }
        let na = self.nodes[a as usize];
        let nb = self.nodes[b as usize];
        let level = na.level.min(nb.level);
        let (alo, ahi) = if na.level == level { (na.lo, na.hi) } else { (a, a) };
        let (blo, bhi) = if nb.level == level { (nb.lo, nb.hi) } else { (b, b) };
        let lo = self.apply(op, alo, blo);
        let hi = self.apply(op, ahi, bhi);
        let r = self.mk(level, lo, hi);
        self.apply_memo.insert(key, r);
        r
    }

    pub fn and(&mut self, a: NodeRef, b: NodeRef) -> NodeRef {
        self.apply(Op::And, a, b)
    }

    pub fn or(&mut self, a: NodeRef, b: NodeRef) -> NodeRef {
        self.apply(Op::Or, a, b)
    }

    pub fn ite(&mut self, f: NodeRef, g: NodeRef, h: NodeRef) -> NodeRef {
        let fg = self.and(f, g);
        let nf = self.not(f);
        let nfh = self.and(nf, h);
        self.or(fg, nfh)
    }

    pub fn from_expr(&mut self, e: &BoolExpr) -> Result<NodeRef> {
        Ok(match e {
            BoolExpr::Const(true) => BDD_TRUE,
            BoolExpr::Const(false) => BDD_FALSE,
            BoolExpr::Var(v) => self.var(v)?,
            BoolExpr::Not(a) => {
                let a = self.from_expr(a)?;
                self.not(a)
            }
            BoolExpr::And(a, b) => {
                let a = self.from_expr(a)?;
                let b = self.from_expr(b)?;
                self.and(a, b)
            }
            BoolExpr::Or(a, b) => {
                let a = self.from_expr(a)?;
                let b = self.from_expr(b)?;
                self.or(a, b)
            }
        })
    }

    /// Simultaneous composition: every variable is replaced by the root
    /// `image` yields for it (identity when `image` returns None).
    pub fn compose(&mut self, root: NodeRef, image: &HashMap<u32, NodeRef>) -> NodeRef {
        let mut memo = HashMap::new();
        self.compose_rec(root, image, &mut memo)
    }

    fn compose_rec(
        &mut self,
        root: NodeRef,
        image: &HashMap<u32, NodeRef>,
        memo: &mut HashMap<NodeRef, NodeRef>,
    ) -> NodeRef {
        if root <= BDD_TRUE {
            return root;
        }
        if let Some(&r) = memo.get(&root) {
            return r;
        }
        let n = self.nodes[root as usize];
        let lo = self.compose_rec(n.lo, image, memo);
        let hi = self.compose_rec(n.hi, image, memo);
        let guard = match image.get(&n.level) {
            Some(&g) => g,
            None => self.mk(n.level, BDD_FALSE, BDD_TRUE),
        };
        let r = self.ite(guard, hi, lo);
        memo.insert(root, r);
        r
    }

    /// Evaluates the function under a membership assignment.
    pub fn eval(&self, root: NodeRef, truthy: &dyn Fn(&Var) -> bool) -> bool {
        let mut cur = root;
        while cur > BDD_TRUE {
            let n = self.nodes[cur as usize];
            let v = &self.order[n.level as usize];
            cur = if truthy(v) { n.hi } else { n.lo };
        }
        cur == BDD_TRUE
    }
}

/// Semantic equality of two boolean functions.
pub fn semantically_equal(f: &BoolExpr, g: &BoolExpr) -> bool {
    let mut bdd = Bdd::for_exprs(&[f, g]);
    let rf = bdd.from_expr(f).expect("order covers f");
    let rg = bdd.from_expr(g).expect("order covers g");
    rf == rg
}
