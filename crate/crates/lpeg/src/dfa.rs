//! Deterministic finite automata: matching, Hopcroft minimization,
//! product-construction equivalence, JSON and DOT export.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A total DFA. Every state has a transition for every symbol of the
/// alphabet; completion uses an explicit sink state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dfa {
    pub alphabet: BTreeSet<char>,
    pub states: Vec<String>,
    pub start: usize,
    pub accepting: BTreeSet<usize>,
    /// `transitions[state][symbol]`, total.
    pub transitions: Vec<BTreeMap<char, usize>>,
}

impl Dfa {
    /// Single-pass run; a symbol outside the alphabet rejects.
    pub fn matches(&self, input: &str) -> bool {
        let mut state = self.start;
        for c in input.chars() {
            match self.transitions[state].get(&c) {
                Some(&next) => state = next,
                None => return false,
            }
        }
        self.accepting.contains(&state)
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    /// Language-preserving minimization (reachable trim + Hopcroft
    /// partition refinement), with states renamed `s0, s1, ...` in
    /// breadth-first order for deterministic output.
    pub fn minimize(&self) -> Dfa {
        let trimmed = self.trim_reachable();
        let n = trimmed.states.len();
        let symbols: Vec<char> = trimmed.alphabet.iter().copied().collect();

        // reverse edges per symbol
        let mut rev: HashMap<(usize, char), Vec<usize>> = HashMap::new();
        for (q, row) in trimmed.transitions.iter().enumerate() {
            for (&c, &t) in row {
                rev.entry((t, c)).or_default().push(q);
            }
        }

        // block id per state; blocks as sets
        let mut block_of: Vec<usize> = (0..n)
            .map(|q| usize::from(trimmed.accepting.contains(&q)))
            .collect();
        let mut blocks: Vec<BTreeSet<usize>> = vec![
            (0..n).filter(|q| !trimmed.accepting.contains(q)).collect(),
            (0..n).filter(|q| trimmed.accepting.contains(q)).collect(),
        ];
        blocks.retain(|b| !b.is_empty());
        for (i, b) in blocks.iter().enumerate() {
            for &q in b {
                block_of[q] = i;
            }
        }

        let mut worklist: VecDeque<(usize, char)> = VecDeque::new();
        for i in 0..blocks.len() {
            for &c in &symbols {
                worklist.push_back((i, c));
            }
        }

        while let Some((a, c)) = worklist.pop_front() {
            // states leading into block a on c
            let mut incoming: BTreeSet<usize> = BTreeSet::new();
            for &t in &blocks[a] {
                if let Some(preds) = rev.get(&(t, c)) {
                    incoming.extend(preds.iter().copied());
                }
            }
            if incoming.is_empty() {
                continue;
            }
            let touched: BTreeSet<usize> = incoming.iter().map(|&q| block_of[q]).collect();
            for y in touched {
                let inside: BTreeSet<usize> =
                    blocks[y].intersection(&incoming).copied().collect();
                if inside.is_empty() || inside.len() == blocks[y].len() {
                    continue;
                }
                let outside: BTreeSet<usize> =
                    blocks[y].difference(&incoming).copied().collect();
                let new_id = blocks.len();
                let (keep, split) = if inside.len() <= outside.len() {
                    (outside, inside)
                } else {
                    (inside, outside)
                };
                blocks[y] = keep;
                for &q in &split {
                    block_of[q] = new_id;
                }
                blocks.push(split);
                for &sym in &symbols {
                    worklist.push_back((new_id, sym));
                }
            }
        }

        // quotient automaton
        let start_block = block_of[trimmed.start];
        let quotient_trans: Vec<BTreeMap<char, usize>> = blocks
            .iter()
            .map(|b| {
                let repr = *b.iter().next().unwrap();
                trimmed.transitions[repr]
                    .iter()
                    .map(|(&c, &t)| (c, block_of[t]))
                    .collect()
            })
            .collect();
        let quotient_accepting: BTreeSet<usize> = trimmed
            .accepting
            .iter()
            .map(|&q| block_of[q])
            .collect();

        rename_bfs(
            &trimmed.alphabet,
            blocks.len(),
            start_block,
            &quotient_accepting,
            &quotient_trans,
        )
    }

    fn trim_reachable(&self) -> Dfa {
        let mut order = Vec::new();
        let mut seen = vec![false; self.states.len()];
        let mut queue = VecDeque::from([self.start]);
        seen[self.start] = true;
        while let Some(q) = queue.pop_front() {
            order.push(q);
            for (_, &t) in &self.transitions[q] {
                if !seen[t] {
                    seen[t] = true;
                    queue.push_back(t);
                }
            }
        }
        let remap: HashMap<usize, usize> =
            order.iter().enumerate().map(|(i, &q)| (q, i)).collect();
        Dfa {
            alphabet: self.alphabet.clone(),
            states: order.iter().map(|&q| self.states[q].clone()).collect(),
            start: remap[&self.start],
            accepting: self
                .accepting
                .iter()
                .filter_map(|q| remap.get(q).copied())
                .collect(),
            transitions: order
                .iter()
                .map(|&q| {
                    self.transitions[q]
                        .iter()
                        .map(|(&c, &t)| (c, remap[&t]))
                        .collect()
                })
                .collect(),
        }
    }

    /// Exact language equivalence by breadth-first product construction;
    /// returns a shortest distinguishing string when the languages
    /// differ.
    pub fn equivalent(&self, other: &Dfa) -> Result<Option<String>> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch);
        }
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::from([(self.start, other.start, String::new())]);
        seen.insert((self.start, other.start));
        while let Some((a, b, word)) = queue.pop_front() {
            if self.accepting.contains(&a) != other.accepting.contains(&b) {
                return Ok(Some(word));
            }
            for &c in &self.alphabet {
                let na = self.transitions[a][&c];
                let nb = other.transitions[b][&c];
                if seen.insert((na, nb)) {
                    let mut w = word.clone();
                    w.push(c);
                    queue.push_back((na, nb, w));
                }
            }
        }
        Ok(None)
    }

    pub fn to_json(&self) -> String {
        let doc = DfaJson {
            accepting: self
                .accepting
                .iter()
                .map(|&q| self.states[q].clone())
                .collect(),
            alphabet: self.alphabet.iter().map(|c| c.to_string()).collect(),
            start: self.states[self.start].clone(),
            states: self.states.clone(),
            transitions: self
                .states
                .iter()
                .enumerate()
                .map(|(q, name)| {
                    (
                        name.clone(),
                        self.transitions[q]
                            .iter()
                            .map(|(&c, &t)| (c.to_string(), self.states[t].clone()))
                            .collect(),
                    )
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("DFA serializes")
    }

    pub fn from_json(text: &str) -> Result<Dfa> {
        let doc: DfaJson = serde_json::from_str(text)?;
        let mut alphabet = BTreeSet::new();
        for s in &doc.alphabet {
            let mut chars = s.chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) => {
                    alphabet.insert(c);
                }
                _ => {
                    return Err(Error::InvalidDfa(format!(
                        "alphabet entry `{s}` is not a single terminal"
                    )))
                }
            }
        }
        let index: HashMap<&str, usize> = doc
            .states
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_str(), i))
            .collect();
        if index.len() != doc.states.len() {
            return Err(Error::InvalidDfa("duplicate state names".to_string()));
        }
        let lookup = |name: &str| -> Result<usize> {
            index
                .get(name)
                .copied()
                .ok_or_else(|| Error::InvalidDfa(format!("unknown state `{name}`")))
        };
        let start = lookup(&doc.start)?;
        let mut accepting = BTreeSet::new();
        for name in &doc.accepting {
            accepting.insert(lookup(name)?);
        }
        let mut transitions = vec![BTreeMap::new(); doc.states.len()];
        for (from, row) in &doc.transitions {
            let from_idx = lookup(from)?;
            for (sym, to) in row {
                let mut chars = sym.chars();
                let c = match (chars.next(), chars.next()) {
                    (Some(c), None) => c,
                    _ => {
                        return Err(Error::InvalidDfa(format!(
                            "transition symbol `{sym}` is not a single terminal"
                        )))
                    }
                };
                if !alphabet.contains(&c) {
                    return Err(Error::InvalidDfa(format!(
                        "transition symbol `{c}` not in alphabet"
                    )));
                }
                transitions[from_idx].insert(c, lookup(to)?);
            }
        }
        for (q, row) in transitions.iter().enumerate() {
            if row.len() != alphabet.len() {
                return Err(Error::InvalidDfa(format!(
                    "transitions of state `{}` are not total",
                    doc.states[q]
                )));
            }
        }
        Ok(Dfa {
            alphabet,
            states: doc.states,
            start,
            accepting,
            transitions,
        })
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph dfa {\n  rankdir=LR;\n  __start [shape=point];\n");
        for (q, name) in self.states.iter().enumerate() {
            let shape = if self.accepting.contains(&q) {
                "doublecircle"
            } else {
                "circle"
            };
            let _ = writeln!(out, "  n{q} [label=\"{name}\", shape={shape}];");
        }
        let _ = writeln!(out, "  __start -> n{};", self.start);
        for (q, row) in self.transitions.iter().enumerate() {
            // group parallel edges by target
            let mut by_target: BTreeMap<usize, Vec<char>> = BTreeMap::new();
            for (&c, &t) in row {
                by_target.entry(t).or_default().push(c);
            }
            for (t, symbols) in by_target {
                let label: String = symbols
                    .iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>()
                    .join(",");
                let _ = writeln!(out, "  n{q} -> n{t} [label=\"{label}\"];");
            }
        }
        out.push_str("}\n");
        out
    }
}

/// Rebuilds an automaton with states named `s0, s1, ...` in BFS order
/// from the start (symbols visited in sorted order). Unreachable states
/// are dropped.
pub fn rename_bfs(
    alphabet: &BTreeSet<char>,
    state_count: usize,
    start: usize,
    accepting: &BTreeSet<usize>,
    transitions: &[BTreeMap<char, usize>],
) -> Dfa {
    let mut order = Vec::new();
    let mut seen = vec![false; state_count];
    let mut queue = VecDeque::from([start]);
    seen[start] = true;
    while let Some(q) = queue.pop_front() {
        order.push(q);
        for (_, &t) in &transitions[q] {
            if !seen[t] {
                seen[t] = true;
                queue.push_back(t);
            }
        }
    }
    let remap: HashMap<usize, usize> = order.iter().enumerate().map(|(i, &q)| (q, i)).collect();
    Dfa {
        alphabet: alphabet.clone(),
        states: (0..order.len()).map(|i| format!("s{i}")).collect(),
        start: 0,
        accepting: accepting
            .iter()
            .filter_map(|q| remap.get(q).copied())
            .collect(),
        transitions: order
            .iter()
            .map(|&q| transitions[q].iter().map(|(&c, &t)| (c, remap[&t])).collect())
            .collect(),
    }
}

// Field order is the sorted key order required of the JSON output.
#[derive(Serialize, Deserialize)]
struct DfaJson {
    accepting: Vec<String>,
    alphabet: Vec<String>,
    start: String,
    states: Vec<String>,
    transitions: BTreeMap<String, BTreeMap<String, String>>,
}

#[cfg(test)]
mod tests {
    use super::*;

    /// a*b over {a,b}: s0 -a-> s0, s0 -b-> s1 (accept), s1 -> sink
    fn astarb() -> Dfa {
        Dfa {
            alphabet: ['a', 'b'].into_iter().collect(),
            states: vec!["s0".into(), "s1".into(), "sink".into()],
            start: 0,
            accepting: [1].into_iter().collect(),
            transitions: vec![
                [('a', 0), ('b', 1)].into_iter().collect(),
                [('a', 2), ('b', 2)].into_iter().collect(),
                [('a', 2), ('b', 2)].into_iter().collect(),
            ],
        }
    }

    /// exactly "ab"
    fn ab() -> Dfa {
        Dfa {
            alphabet: ['a', 'b'].into_iter().collect(),
            states: (0..4).map(|i| format!("s{i}")).collect(),
            start: 0,
            accepting: [2].into_iter().collect(),
            transitions: vec![
                [('a', 1), ('b', 3)].into_iter().collect(),
                [('a', 3), ('b', 2)].into_iter().collect(),
                [('a', 3), ('b', 3)].into_iter().collect(),
                [('a', 3), ('b', 3)].into_iter().collect(),
            ],
        }
    }

    #[test]
    fn matching() {
        let d = astarb();
        assert!(d.matches("aab"));
        assert!(d.matches("b"));
        assert!(!d.matches(""));
        assert!(!d.matches("aaba"));
        assert!(!d.matches("xyz"));
    }

    #[test]
    fn minimize_is_a_fixpoint_on_minimal_input() {
        let d = astarb();
        let m = d.minimize();
        assert_eq!(m.state_count(), 3);
        assert_eq!(m.minimize().state_count(), 3);
        assert_eq!(d.equivalent(&m).unwrap(), None);
    }

    #[test]
    fn minimize_merges_redundant_states() {
        // two interchangeable accepting states
        let d = Dfa {
            alphabet: ['a'].into_iter().collect(),
            states: (0..3).map(|i| format!("s{i}")).collect(),
            start: 0,
            accepting: [1, 2].into_iter().collect(),
            transitions: vec![
                [('a', 1)].into_iter().collect(),
                [('a', 2)].into_iter().collect(),
                [('a', 1)].into_iter().collect(),
            ],
        };
        let m = d.minimize();
        assert_eq!(m.state_count(), 2);
        assert_eq!(d.equivalent(&m).unwrap(), None);
    }

    #[test]
    fn equivalence_counterexample_is_shortest() {
        assert_eq!(astarb().equivalent(&ab()).unwrap(), Some("b".to_string()));
    }

    #[test]
    fn alphabet_mismatch_is_an_error() {
        let mut other = astarb();
        other.alphabet.insert('c');
        assert!(matches!(
            astarb().equivalent(&other),
            Err(Error::AlphabetMismatch)
        ));
    }

    #[test]
    fn json_round_trip_and_key_order() {
        let d = astarb();
        let json = d.to_json();
        let first = json.find("\"accepting\"").unwrap();
        assert!(first < json.find("\"alphabet\"").unwrap());
        assert!(json.find("\"start\"").unwrap() < json.find("\"states\"").unwrap());
        let d2 = Dfa::from_json(&json).unwrap();
        assert_eq!(d, d2);
    }

    #[test]
    fn json_rejects_partial_transitions() {
        let bad = r#"{
            "accepting": [],
            "alphabet": ["a", "b"],
            "start": "s0",
            "states": ["s0"],
            "transitions": {"s0": {"a": "s0"}}
        }"#;
        assert!(matches!(Dfa::from_json(bad), Err(Error::InvalidDfa(_))));
    }
}
