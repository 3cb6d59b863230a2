//! All-pairs CFL-reachability.
//!
//! Semi-naive worklist over facts `(A, i, j)`: a fact is joined against the
//! facts already known on its left and right when it leaves the worklist.
//! Cubic in the number of nodes.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::cnf::{CnfGrammar, CnfRule};
use crate::error::{Error, Result};
use crate::graph::LabeledGraph;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Origin {
    Edge { terminal: usize },
    Split { mid: u32 },
    Empty,
}

type Fact = (u32, u32, u32);

/// Facts `(A, i, j)`: some path from `i` to `j` is labelled by a word that
/// `A` derives. Each fact remembers the first derivation that produced it.
#[derive(Clone, Debug)]
pub struct ReachabilityRelation {
    grammar: CnfGrammar,
    nodes: Vec<String>,
    facts: HashMap<Fact, (Origin, Option<u32>)>,
}

/// A path given as node indices together with its label word (terminal
/// indices of the grammar).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessPath {
    pub nodes: Vec<usize>,
    pub word: Vec<usize>,
}

impl ReachabilityRelation {
    pub fn grammar(&self) -> &CnfGrammar {
        &self.grammar
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.facts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facts.is_empty()
    }

    pub fn contains(&self, nonterminal: usize, from: usize, to: usize) -> bool {
        self.facts.contains_key(&(nonterminal as u32, from as u32, to as u32))
    }

    /// All facts as `(nonterminal, from, to)`, sorted.
    pub fn facts(&self) -> BTreeSet<(usize, usize, usize)> {
        self.facts
            .keys()
            .map(|&(a, i, j)| (a as usize, i as usize, j as usize))
            .collect()
    }

    pub fn pairs_of(&self, nonterminal: usize) -> BTreeSet<(usize, usize)> {
        self.facts
            .keys()
            .filter(|&&(a, _, _)| a as usize == nonterminal)
            .map(|&(_, i, j)| (i as usize, j as usize))
            .collect()
    }

    /// The query view: pairs related by the start symbol.
    pub fn start_pairs(&self) -> BTreeSet<(usize, usize)> {
        self.pairs_of(self.grammar.start())
    }

    /// A path from `source` to `target` whose label is in the language.
    pub fn witness_path(&self, source: usize, target: usize) -> Result<WitnessPath> {
        let root = (self.grammar.start() as u32, source as u32, target as u32);
        if !self.facts.contains_key(&root) {
            let name = |q: usize| self.nodes.get(q).cloned().unwrap_or_else(|| q.to_string());
            return Err(Error::NotReachable { from: name(source), to: name(target) });
        }
        let mut nodes = vec![source];
        let mut word = Vec::new();
        let mut stack = vec![root];
        while let Some(fact @ (_, _, j)) = stack.pop() {
            match self.facts[&fact] {
                (Origin::Empty, _) => {}
                (Origin::Edge { terminal }, _) => {
                    word.push(terminal);
                    nodes.push(j as usize);
                }
                (Origin::Split { mid }, Some(rule)) => {
                    let CnfRule::Binary { left, right, .. } = self.grammar.rules()[rule as usize] else {
                        unreachable!()
                    };
                    stack.push((right as u32, mid, j));
                    stack.push((left as u32, fact.1, mid));
                }
                (Origin::Split { .. }, None) => unreachable!(),
            }
        }
        Ok(WitnessPath { nodes, word })
    }
}

#[derive(Default)]
struct FactStore {
    facts: HashMap<Fact, (Origin, Option<u32>)>,
    /// `(A, i) -> [j]`
    out_index: HashMap<(u32, u32), Vec<u32>>,
    /// `(A, j) -> [i]`
    in_index: HashMap<(u32, u32), Vec<u32>>,
    worklist: VecDeque<Fact>,
}

impl FactStore {
    fn add(&mut self, fact: Fact, origin: Origin, rule: Option<u32>) {
        if self.facts.contains_key(&fact) {
            return;
        }
        self.facts.insert(fact, (origin, rule));
        self.out_index.entry((fact.0, fact.1)).or_default().push(fact.2);
        self.in_index.entry((fact.0, fact.2)).or_default().push(fact.1);
        self.worklist.push_back(fact);
    }
}

/// Solves all-pairs CFL-reachability of `g` over `d`. Edge labels that are
/// not terminals of `g` never match. With `S -> ε`, every `(S, i, i)` holds.
pub fn all_pairs_reach(g: &CnfGrammar, d: &LabeledGraph) -> ReachabilityRelation {
    let nts = g.nonterminals().len();
    let n = d.nodes().len();
    let mut by_left: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); nts];
    let mut by_right: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); nts];
    let mut by_terminal: HashMap<usize, Vec<(usize, usize)>> = HashMap::new();
    for (r, rule) in g.rules().iter().enumerate() {
        match *rule {
            CnfRule::Binary { lhs, left, right } => {
                by_left[left].push((r, lhs, right));
                by_right[right].push((r, lhs, left));
            }
            CnfRule::Terminal { lhs, terminal } => by_terminal.entry(terminal).or_default().push((r, lhs)),
        }
    }

    let mut store = FactStore::default();
    for (i, label, j) in d.edges() {
        let Some(terminal) = g.terminal_index(&d.alphabet()[label]) else { continue };
        for &(r, lhs) in by_terminal.get(&terminal).map_or(&[][..], Vec::as_slice) {
            store.add((lhs as u32, i as u32, j as u32), Origin::Edge { terminal }, Some(r as u32));
        }
    }
    if g.epsilon_at_start() {
        for i in 0..n as u32 {
            store.add((g.start() as u32, i, i), Origin::Empty, None);
        }
    }

    let mut derived: Vec<(Fact, u32, u32)> = Vec::new();
    while let Some((b, i, k)) = store.worklist.pop_front() {
        for &(r, lhs, right) in &by_left[b as usize] {
            if let Some(targets) = store.out_index.get(&(right as u32, k)) {
                derived.extend(targets.iter().map(|&j| ((lhs as u32, i, j), k, r as u32)));
            }
        }
        for &(r, lhs, left) in &by_right[b as usize] {
            if let Some(sources) = store.in_index.get(&(left as u32, i)) {
                derived.extend(sources.iter().map(|&h| ((lhs as u32, h, k), i, r as u32)));
            }
        }
        for (fact, mid, rule) in derived.drain(..) {
            store.add(fact, Origin::Split { mid }, Some(rule));
        }
    }
    let facts = store.facts;
    log::debug!("reachability: {} facts over {} nodes", facts.len(), n);
    ReachabilityRelation { grammar: g.clone(), nodes: d.nodes().to_vec(), facts }
}
