//! Edge-labelled graphs and nondeterministic automata.
//!
//! Graph files hold one edge per line, `source label target`, separated by tabs
//! (or by blanks when the line has no tab). Two optional directives,
//! `alphabet: l1 l2 ...` and `nodes: n1 n2 ...`, declare labels
//! and nodes that carry no edge. NFA files use the same edge lines plus
//! `initial: ...` and `accepting: ...` headers (and optionally `states:`).
//! `#` starts a comment line.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct Names {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl Names {
    fn intern(&mut self, name: &str) -> usize {
        if let Some(&i) = self.index.get(name) {
            return i;
        }
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), self.names.len() - 1);
        self.names.len() - 1
    }

    fn get(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }
}

/// A directed graph `(Q, Σ, δ)` with labelled edges.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LabeledGraph {
    nodes: Names,
    alphabet: Names,
    edges: BTreeSet<(usize, usize, usize)>,
}

impl LabeledGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node(&mut self, name: &str) -> usize {
        self.nodes.intern(name)
    }

    pub fn add_label(&mut self, label: &str) -> usize {
        self.alphabet.intern(label)
    }

    pub fn add_edge(&mut self, source: &str, label: &str, target: &str) {
        let s = self.add_node(source);
        let l = self.add_label(label);
        let t = self.add_node(target);
        self.edges.insert((s, l, t));
    }

    pub fn nodes(&self) -> &[String] {
        &self.nodes.names
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet.names
    }

    pub fn node_index(&self, name: &str) -> Option<usize> {
        self.nodes.get(name)
    }

    pub fn label_index(&self, name: &str) -> Option<usize> {
        self.alphabet.get(name)
    }

    /// Edges as `(source, label, target)` indices, in sorted order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// The graph language: every node is initial and accepting.
    pub fn to_nfa(&self) -> Nfa {
        let all: Vec<usize> = (0..self.nodes.names.len()).collect();
        Nfa {
            states: self.nodes.clone(),
            alphabet: self.alphabet.clone(),
            transitions: self.edges.clone(),
            initial: all.iter().copied().collect(),
            accepting: all.into_iter().collect(),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut g = LabeledGraph::new();
        for (line_no, line) in content_lines(text) {
            if let Some(rest) = directive(line, "alphabet") {
                rest.split_whitespace().for_each(|l| {
                    g.add_label(l);
                });
            } else if let Some(rest) = directive(line, "nodes") {
                rest.split_whitespace().for_each(|n| {
                    g.add_node(n);
                });
            } else {
                let (s, l, t) = edge_line(line_no, line)?;
                g.add_edge(s, l, t);
            }
        }
        Ok(g)
    }
}

impl fmt::Display for LabeledGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "nodes: {}", self.nodes.names.join(" "))?;
        writeln!(f, "alphabet: {}", self.alphabet.names.join(" "))?;
        for &(s, l, t) in &self.edges {
            writeln!(f, "{}\t{}\t{}", self.nodes.names[s], self.alphabet.names[l], self.nodes.names[t])?;
        }
        Ok(())
    }
}

/// A nondeterministic automaton `(Q, Σ, δ, Q₀, F)` without ε-moves.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Nfa {
    states: Names,
    alphabet: Names,
    transitions: BTreeSet<(usize, usize, usize)>,
    initial: BTreeSet<usize>,
    accepting: BTreeSet<usize>,
}

impl Nfa {
    /// An automaton with states named `0..n`.
    pub fn with_states(n: usize, alphabet: &[&str]) -> Self {
        let mut nfa = Nfa::default();
        for q in 0..n {
            nfa.add_state(&q.to_string());
        }
        for a in alphabet {
            nfa.alphabet.intern(a);
        }
        nfa
    }

    pub fn add_state(&mut self, name: &str) -> usize {
        self.states.intern(name)
    }

    pub fn add_transition(&mut self, from: &str, label: &str, to: &str) {
        let f = self.add_state(from);
        let l = self.alphabet.intern(label);
        let t = self.add_state(to);
        self.transitions.insert((f, l, t));
    }

    pub fn add_transition_idx(&mut self, from: usize, label: usize, to: usize) {
        assert!(from < self.states.names.len() && to < self.states.names.len());
        assert!(label < self.alphabet.names.len());
        self.transitions.insert((from, label, to));
    }

    pub fn set_initial(&mut self, state: usize) {
        self.initial.insert(state);
    }

    pub fn set_accepting(&mut self, state: usize) {
        self.accepting.insert(state);
    }

    pub fn states(&self) -> &[String] {
        &self.states.names
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet.names
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.get(name)
    }

    pub fn transitions(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.transitions.iter().copied()
    }

    pub fn initial(&self) -> &BTreeSet<usize> {
        &self.initial
    }

    pub fn accepting(&self) -> &BTreeSet<usize> {
        &self.accepting
    }

    pub fn state_count(&self) -> usize {
        self.states.names.len()
    }

    /// Runs the automaton on a word given by label names.
    pub fn accepts<S: AsRef<str>>(&self, word: &[S]) -> bool {
        let mut current: BTreeSet<usize> = self.initial.clone();
        for sym in word {
            let Some(l) = self.alphabet.get(sym.as_ref()) else {
                return false;
            };
            current = self
                .transitions
                .iter()
                .filter(|&&(f, lab, _)| lab == l && current.contains(&f))
                .map(|&(_, _, t)| t)
                .collect();
            if current.is_empty() {
                return false;
            }
        }
        current.iter().any(|q| self.accepting.contains(q))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut nfa = Nfa::default();
        let mut initial = Vec::new();
        let mut accepting = Vec::new();
        for (line_no, line) in content_lines(text) {
            if let Some(rest) = directive(line, "initial") {
                initial.extend(rest.split_whitespace().map(|s| nfa.add_state(s)));
            } else if let Some(rest) = directive(line, "accepting") {
                accepting.extend(rest.split_whitespace().map(|s| nfa.add_state(s)));
            } else if let Some(rest) = directive(line, "states") {
                rest.split_whitespace().for_each(|s| {
                    nfa.add_state(s);
                });
            } else if let Some(rest) = directive(line, "alphabet") {
                rest.split_whitespace().for_each(|s| {
                    nfa.alphabet.intern(s);
                });
            } else {
                let (s, l, t) = edge_line(line_no, line)?;
                nfa.add_transition(s, l, t);
            }
        }
        nfa.initial.extend(initial);
        nfa.accepting.extend(accepting);
        Ok(nfa)
    }
}

impl fmt::Display for Nfa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = |set: &BTreeSet<usize>| {
            set.iter().map(|&q| self.states.names[q].as_str()).collect::<Vec<_>>().join(" ")
        };
        writeln!(f, "states: {}", self.states.names.join(" "))?;
        writeln!(f, "alphabet: {}", self.alphabet.names.join(" "))?;
        writeln!(f, "initial: {}", names(&self.initial))?;
        writeln!(f, "accepting: {}", names(&self.accepting))?;
        for &(s, l, t) in &self.transitions {
            writeln!(f, "{}\t{}\t{}", self.states.names[s], self.alphabet.names[l], self.states.names[t])?;
        }
        Ok(())
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r')))
        .filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        })
}

fn directive<'a>(line: &'a str, key: &str) -> Option<&'a str> {
    let rest = line.trim_start().strip_prefix(key)?;
    rest.trim_start().strip_prefix(':')
}

fn edge_line(line_no: usize, line: &str) -> Result<(&str, &str, &str)> {
    let fields: Vec<&str> = if line.contains('\t') {
        line.split('\t').map(str::trim).collect()
    } else {
        line.split_whitespace().collect()
    };
    match fields.as_slice() {
        [s, l, t] if !s.is_empty() && !l.is_empty() && !t.is_empty() => Ok((s, l, t)),
        _ => Err(Error::Syntax {
            line: line_no,
            column: 1,
            message: "expected `source label target`".into(),
        }),
    }
}
