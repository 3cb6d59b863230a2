//! The Bar-Hillel product of a CNF grammar with an automaton.
//!
//! Product nonterminals are triples `(A, i, j)`: `A` derives the label of some
//! run from state `i` to state `j`. Only realizable triples are materialized.
//! The product is built bottom-up: a triple enters when one of its productions
//! has all children present, so every stored production only mentions
//! realizable triples.

use std::cmp::{Ordering, Reverse};
use std::collections::{BinaryHeap, HashMap, VecDeque};
use std::fmt;
use std::rc::Rc;

use crate::cnf::{CnfGrammar, CnfRule};
use crate::error::{Error, Result};
use crate::graph::{LabeledGraph, Nfa};
use crate::tree::ParseTree;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    pub nonterminal: usize,
    pub from: usize,
    pub to: usize,
}

impl Triple {
    pub fn new(nonterminal: usize, from: usize, to: usize) -> Self {
        Triple { nonterminal, from, to }
    }
}

pub type TripleId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TripleProduction {
    /// `(A,i,j) -> (B,i,k) (C,k,j)` from base rule `A -> B C`.
    Binary { rule: usize, lhs: TripleId, left: TripleId, right: TripleId },
    /// `(A,i,j) -> a` from base rule `A -> a` and a transition `i -a-> j`.
    Terminal { rule: usize, lhs: TripleId, terminal: usize },
}

impl TripleProduction {
    pub fn lhs(&self) -> TripleId {
        match *self {
            TripleProduction::Binary { lhs, .. } | TripleProduction::Terminal { lhs, .. } => lhs,
        }
    }
}

#[derive(Clone, Debug)]
pub struct TripleGrammar {
    grammar: CnfGrammar,
    automaton: Nfa,
    triples: Vec<Triple>,
    index: HashMap<Triple, TripleId>,
    productions: Vec<TripleProduction>,
    starts: Vec<TripleId>,
    epsilon_state: Option<usize>,
}

impl TripleGrammar {
    pub fn grammar(&self) -> &CnfGrammar {
        &self.grammar
    }

    pub fn automaton(&self) -> &Nfa {
        &self.automaton
    }

    pub fn triples(&self) -> &[Triple] {
        &self.triples
    }

    pub fn triple_id(&self, t: &Triple) -> Option<TripleId> {
        self.index.get(t).copied()
    }

    pub fn is_realizable(&self, t: &Triple) -> bool {
        self.index.contains_key(t)
    }

    pub fn productions(&self) -> &[TripleProduction] {
        &self.productions
    }

    /// Realizable `(S, q₀, f)` with `q₀` initial and `f` accepting, sorted.
    pub fn starts(&self) -> &[TripleId] {
        &self.starts
    }

    /// The smallest initial-and-accepting state when ε is in the intersection.
    pub fn epsilon_state(&self) -> Option<usize> {
        self.epsilon_state
    }

    pub fn is_empty_intersection(&self) -> bool {
        self.starts.is_empty() && self.epsilon_state.is_none()
    }

    pub fn format_triple(&self, t: &Triple) -> String {
        let states = self.automaton.states();
        format!(
            "({},{},{})",
            self.grammar.nonterminals()[t.nonterminal],
            states[t.from],
            states[t.to]
        )
    }
}

impl fmt::Display for TripleGrammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.starts {
            writeln!(f, "# start {}", self.format_triple(&self.triples[s]))?;
        }
        if let Some(q) = self.epsilon_state {
            writeln!(f, "# epsilon at {}", self.automaton.states()[q])?;
        }
        for p in &self.productions {
            match *p {
                TripleProduction::Binary { lhs, left, right, .. } => writeln!(
                    f,
                    "{} -> {} {}",
                    self.format_triple(&self.triples[lhs]),
                    self.format_triple(&self.triples[left]),
                    self.format_triple(&self.triples[right])
                )?,
                TripleProduction::Terminal { lhs, terminal, .. } => writeln!(
                    f,
                    "{} -> {}",
                    self.format_triple(&self.triples[lhs]),
                    self.grammar.terminals()[terminal]
                )?,
            }
        }
        Ok(())
    }
}

struct ProductBuilder {
    triples: Vec<Triple>,
    index: HashMap<Triple, TripleId>,
    queue: VecDeque<TripleId>,
}

impl ProductBuilder {
    fn realize(&mut self, t: Triple) -> TripleId {
        if let Some(&id) = self.index.get(&t) {
            return id;
        }
        let id = self.triples.len();
        self.triples.push(t);
        self.index.insert(t, id);
        self.queue.push_back(id);
        id
    }
}

/// Builds the trimmed product of `g` with the automaton `k`.
///
/// Transitions whose label is not a terminal of `g` are ignored. The empty
/// word is in the intersection iff `g` accepts ε and some state is both
/// initial and accepting.
pub fn bar_hillel(g: &CnfGrammar, k: &Nfa) -> TripleGrammar {
    let nts = g.nonterminals().len();
    let states = k.state_count();
    let label_to_terminal: Vec<Option<usize>> =
        k.alphabet().iter().map(|l| g.terminal_index(l)).collect();

    let mut as_left: Vec<Vec<usize>> = vec![Vec::new(); nts];
    let mut as_right: Vec<Vec<usize>> = vec![Vec::new(); nts];
    let mut by_terminal: Vec<Vec<usize>> = vec![Vec::new(); g.terminals().len()];
    for (r, rule) in g.rules().iter().enumerate() {
        match *rule {
            CnfRule::Binary { left, right, .. } => {
                as_left[left].push(r);
                as_right[right].push(r);
            }
            CnfRule::Terminal { terminal, .. } => by_terminal[terminal].push(r),
        }
    }

    let mut b = ProductBuilder { triples: Vec::new(), index: HashMap::new(), queue: VecDeque::new() };
    let mut productions = Vec::new();
    for (from, label, to) in k.transitions() {
        let Some(terminal) = label_to_terminal[label] else { continue };
        for &r in &by_terminal[terminal] {
            let lhs = b.realize(Triple::new(g.rules()[r].lhs(), from, to));
            productions.push(TripleProduction::Terminal { rule: r, lhs, terminal });
        }
    }

    // Processed triples indexed by (nonterminal, from) and (nonterminal, to).
    let slot = |nt: usize, q: usize| nt * states + q;
    let mut outgoing: Vec<Vec<TripleId>> = vec![Vec::new(); nts * states];
    let mut incoming: Vec<Vec<TripleId>> = vec![Vec::new(); nts * states];
    // A production is emitted when the later of its two children is
    // processed; the earlier one is already in the indexes by then.
    while let Some(id) = b.queue.pop_front() {
        let t = b.triples[id];
        outgoing[slot(t.nonterminal, t.from)].push(id);
        incoming[slot(t.nonterminal, t.to)].push(id);
        for &r in &as_left[t.nonterminal] {
            let CnfRule::Binary { lhs, right, .. } = g.rules()[r] else { unreachable!() };
            let partners = outgoing[slot(right, t.to)].clone();
            for other in partners {
                let to = b.triples[other].to;
                let head = b.realize(Triple::new(lhs, t.from, to));
                productions.push(TripleProduction::Binary { rule: r, lhs: head, left: id, right: other });
            }
        }
        for &r in &as_right[t.nonterminal] {
            let CnfRule::Binary { lhs, left, .. } = g.rules()[r] else { unreachable!() };
            let partners = incoming[slot(left, t.from)].clone();
            for other in partners {
                if other == id {
                    continue;
                }
                let from = b.triples[other].from;
                let head = b.realize(Triple::new(lhs, from, t.to));
                productions.push(TripleProduction::Binary { rule: r, lhs: head, left: other, right: id });
            }
        }
    }

    let mut starts: Vec<TripleId> = Vec::new();
    for &q0 in k.initial() {
        for &f in k.accepting() {
            if let Some(&id) = b.index.get(&Triple::new(g.start(), q0, f)) {
                starts.push(id);
            }
        }
    }
    let epsilon_state = if g.epsilon_at_start() {
        k.initial().iter().copied().find(|q| k.accepting().contains(q))
    } else {
        None
    };
    log::debug!(
        "product: {} triples, {} productions, {} start triples",
        b.triples.len(),
        productions.len(),
        starts.len()
    );
    TripleGrammar {
        grammar: g.clone(),
        automaton: k.clone(),
        triples: b.triples,
        index: b.index,
        productions,
        starts,
        epsilon_state,
    }
}

/// Product with the graph language of `d` (every node initial and accepting).
pub fn bar_hillel_graph(g: &CnfGrammar, d: &LabeledGraph) -> TripleGrammar {
    bar_hillel(g, &d.to_nfa())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TableEntry {
    pub length: u64,
    pub best_production: usize,
}

/// Minimum yield length per realizable triple, with the production used by
/// the canonical witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShortestTable {
    entries: Vec<Option<TableEntry>>,
}

impl ShortestTable {
    pub fn get(&self, id: TripleId) -> Option<TableEntry> {
        self.entries.get(id).copied().flatten()
    }

    pub fn length_of(&self, tg: &TripleGrammar, t: &Triple) -> Option<u64> {
        tg.triple_id(t).and_then(|id| self.get(id)).map(|e| e.length)
    }

    pub fn len(&self) -> usize {
        self.entries.iter().filter(|e| e.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Words longer than this are not materialized for tie-breaking; ties among
/// such triples fall back to the smallest production id.
const TIE_BREAK_WORD_CAP: u64 = 1 << 20;

/// Terminal ranks by name, so that lexicographic order follows the names
/// rather than declaration order.
fn terminal_ranks(terminals: &[String]) -> Vec<u32> {
    let mut order: Vec<usize> = (0..terminals.len()).collect();
    order.sort_by(|&a, &b| terminals[a].cmp(&terminals[b]));
    let mut rank = vec![0u32; terminals.len()];
    for (r, &t) in order.iter().enumerate() {
        rank[t] = r as u32;
    }
    rank
}

/// Exact minimum yield length of every realizable triple.
///
/// Lengths come from a Knuth-style generalization of Dijkstra's algorithm
/// over the product hypergraph. Among the productions reaching the minimum,
/// the one giving the lexicographically smallest word wins, then the
/// smallest production id.
pub fn shortest_words(tg: &TripleGrammar) -> ShortestTable {
    let n = tg.triples.len();
    let mut uses: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut pending: Vec<u8> = vec![0; tg.productions.len()];
    let mut by_lhs: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut tentative = vec![u64::MAX; n];
    let mut heap = BinaryHeap::new();
    for (p, prod) in tg.productions.iter().enumerate() {
        by_lhs[prod.lhs()].push(p);
        match *prod {
            TripleProduction::Binary { left, right, .. } => {
                uses[left].push(p);
                uses[right].push(p);
                pending[p] = 2;
            }
            TripleProduction::Terminal { lhs, .. } => {
                if tentative[lhs] > 1 {
                    tentative[lhs] = 1;
                    heap.push(Reverse((1u64, lhs)));
                }
            }
        }
    }
    let mut dist: Vec<Option<u64>> = vec![None; n];
    while let Some(Reverse((len, t))) = heap.pop() {
        if dist[t].is_some() {
            continue;
        }
        dist[t] = Some(len);
        for &p in &uses[t] {
            pending[p] -= 1;
            if pending[p] > 0 {
                continue;
            }
            let TripleProduction::Binary { lhs, left, right, .. } = tg.productions[p] else {
                unreachable!()
            };
            let cand = dist[left].unwrap().saturating_add(dist[right].unwrap());
            if dist[lhs].is_none() && cand < tentative[lhs] {
                tentative[lhs] = cand;
                heap.push(Reverse((cand, lhs)));
            }
        }
    }

    let ranks = terminal_ranks(tg.grammar.terminals());
    let mut order: Vec<TripleId> = (0..n).filter(|&t| dist[t].is_some()).collect();
    order.sort_by_key(|&t| (dist[t], t));
    let mut words: Vec<Option<Rc<[u32]>>> = vec![None; n];
    let mut entries: Vec<Option<TableEntry>> = vec![None; n];
    let empty: &[u32] = &[];
    for t in order {
        let length = dist[t].unwrap();
        let mut best: Option<(usize, (&[u32], &[u32]))> = None;
        for &p in &by_lhs[t] {
            let parts: Option<(&[u32], &[u32])> = match tg.productions[p] {
                TripleProduction::Terminal { terminal, .. } if length == 1 => {
                    Some((&ranks[terminal..terminal + 1], empty))
                }
                TripleProduction::Terminal { .. } => continue,
                TripleProduction::Binary { left, right, .. } => {
                    if dist[left].unwrap().saturating_add(dist[right].unwrap()) != length {
                        continue;
                    }
                    match (&words[left], &words[right]) {
                        (Some(l), Some(r)) => Some((&l[..], &r[..])),
                        _ => None,
                    }
                }
            };
            let better = match (&best, parts) {
                (None, _) => true,
                (Some((_, (bl, br))), Some((l, r))) if length <= TIE_BREAK_WORD_CAP => {
                    l.iter().chain(r).cmp(bl.iter().chain(br.iter())) == Ordering::Less
                }
                _ => false,
            };
            if better {
                best = Some((p, parts.unwrap_or((empty, empty))));
            }
        }
        let (p, (l, r)) = best.expect("finalized triple has a minimal production");
        entries[t] = Some(TableEntry { length, best_production: p });
        if length <= TIE_BREAK_WORD_CAP && l.len() + r.len() == length as usize {
            let mut w = Vec::with_capacity(length as usize);
            w.extend_from_slice(l);
            w.extend_from_slice(r);
            words[t] = Some(w.into());
        }
    }
    ShortestTable { entries }
}

/// A word together with its parse tree in the base grammar and the
/// automaton run (as a state sequence) that spells it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub word: Vec<usize>,
    pub tree: ParseTree,
    pub path: Vec<usize>,
}

impl Witness {
    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }
}

/// Rebuilds the canonical shortest word of `triple`, its parse tree with the
/// triple labels projected to base nonterminals, and its run.
pub fn extract_witness(tg: &TripleGrammar, table: &ShortestTable, triple: &Triple) -> Result<Witness> {
    let id = tg
        .triple_id(triple)
        .filter(|&id| table.get(id).is_some())
        .ok_or_else(|| Error::Unrealizable(format_raw_triple(tg, triple)))?;
    let mut word = Vec::new();
    let mut path = vec![triple.from];
    let tree = build_witness(tg, table, id, &mut word, &mut path);
    Ok(Witness { word, tree, path })
}

fn format_raw_triple(tg: &TripleGrammar, t: &Triple) -> String {
    let nt = tg.grammar.nonterminals().get(t.nonterminal).map_or("?", String::as_str);
    let state = |q: usize| tg.automaton.states().get(q).map_or("?", String::as_str);
    format!("({},{},{})", nt, state(t.from), state(t.to))
}

fn build_witness(
    tg: &TripleGrammar,
    table: &ShortestTable,
    id: TripleId,
    word: &mut Vec<usize>,
    path: &mut Vec<usize>,
) -> ParseTree {
    let t = tg.triples[id];
    let name = &tg.grammar.nonterminals()[t.nonterminal];
    let entry = table.get(id).expect("realizable");
    match tg.productions[entry.best_production] {
        TripleProduction::Terminal { terminal, .. } => {
            word.push(terminal);
            path.push(t.to);
            ParseTree::node(name, vec![ParseTree::leaf(&tg.grammar.terminals()[terminal])])
        }
        TripleProduction::Binary { left, right, .. } => {
            let l = build_witness(tg, table, left, word, path);
            let r = build_witness(tg, table, right, word, path);
            ParseTree::node(name, vec![l, r])
        }
    }
}

/// The overall shortest word of the intersection: ε when present, otherwise
/// the best start triple by (length, word, start order). `None` when the
/// intersection is empty.
pub fn shortest_witness(tg: &TripleGrammar, table: &ShortestTable) -> Option<Witness> {
    if let Some(q) = tg.epsilon_state {
        let start = &tg.grammar.nonterminals()[tg.grammar.start()];
        return Some(Witness {
            word: Vec::new(),
            tree: ParseTree::node(start, vec![ParseTree::epsilon()]),
            path: vec![q],
        });
    }
    let ranks = terminal_ranks(tg.grammar.terminals());
    let min_len = tg.starts.iter().filter_map(|&s| table.get(s)).map(|e| e.length).min()?;
    tg.starts
        .iter()
        .filter(|&&s| table.get(s).is_some_and(|e| e.length == min_len))
        .map(|&s| extract_witness(tg, table, &tg.triples[s]).expect("realizable start"))
        .min_by(|a, b| {
            let ra = a.word.iter().map(|&t| ranks[t]);
            let rb = b.word.iter().map(|&t| ranks[t]);
            ra.cmp(rb)
        })
}

/// Builds the product, the table and the overall witness in one go.
pub fn shortest_in_intersection(g: &CnfGrammar, k: &Nfa) -> Option<Witness> {
    let tg = bar_hillel(g, k);
    let table = shortest_words(&tg);
    shortest_witness(&tg, &table)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HeightReport {
    pub height: usize,
    pub bound: u64,
    pub violated: bool,
}

/// Compares the height of a witness tree with `|N|·n²`, where `n` is the
/// number of automaton states. A violation means the witness was not
/// shortest.
pub fn height_bound_check(g: &CnfGrammar, states: usize, tree: &ParseTree) -> HeightReport {
    let height = tree.height();
    let bound = g.nonterminals().len() as u64 * (states as u64).pow(2);
    HeightReport { height, bound, violated: height as u64 > bound }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::to_cnf;
    use crate::grammar::parse_grammar;

    fn cnf(text: &str) -> CnfGrammar {
        to_cnf(&parse_grammar(text).unwrap()).unwrap()
    }

    fn graph(text: &str) -> LabeledGraph {
        LabeledGraph::parse(text).unwrap()
    }

    #[test]
    fn single_edge() {
        let g = cnf("S -> a");
        let d = graph("1\ta\t2\n");
        let tg = bar_hillel_graph(&g, &d);
        assert_eq!(tg.triples(), &[Triple::new(0, 0, 1)]);
        assert_eq!(tg.productions().len(), 1);
        assert!(matches!(tg.productions()[0], TripleProduction::Terminal { terminal: 0, .. }));
        let table = shortest_words(&tg);
        assert_eq!(table.length_of(&tg, &Triple::new(0, 0, 1)), Some(1));
        let w = extract_witness(&tg, &table, &Triple::new(0, 0, 1)).unwrap();
        assert_eq!(w.word, vec![0]);
        assert_eq!(w.path, vec![0, 1]);
        assert_eq!(w.tree, ParseTree::node("S", vec![ParseTree::leaf("a")]));
        let report = height_bound_check(&g, d.nodes().len(), &w.tree);
        assert_eq!(report, HeightReport { height: 1, bound: 4, violated: false });
    }

    #[test]
    fn two_step_product() {
        let g = cnf("S -> A B\nA -> a\nB -> b");
        let d = graph("1\ta\t2\n2\tb\t3\n");
        let tg = bar_hillel_graph(&g, &d);
        let s = Triple::new(g.start(), 0, 2);
        assert!(tg.is_realizable(&s));
        let sid = tg.triple_id(&s).unwrap();
        let a = tg.triple_id(&Triple::new(1, 0, 1)).unwrap();
        let b = tg.triple_id(&Triple::new(2, 1, 2)).unwrap();
        assert!(tg.productions().iter().any(|p| matches!(*p,
            TripleProduction::Binary { lhs, left, right, .. } if lhs == sid && left == a && right == b)));
        assert_eq!(tg.starts(), &[sid]);
    }

    #[test]
    fn no_matching_edges() {
        let g = cnf("S -> a S | a");
        let tg = bar_hillel_graph(&g, &graph("1\tb\t2\n"));
        assert!(tg.triples().is_empty());
        assert!(tg.is_empty_intersection());
        let table = shortest_words(&tg);
        assert!(table.is_empty());
        assert!(shortest_witness(&tg, &table).is_none());
        assert!(matches!(
            extract_witness(&tg, &table, &Triple::new(0, 0, 1)),
            Err(Error::Unrealizable(_))
        ));
    }

    #[test]
    fn lexicographic_tie_break() {
        // Both "ab" and "ba" label length-two paths; "ab" must win.
        let g = cnf("S -> b a | a b");
        let d = graph("1\tb\t2\n2\ta\t3\n3\tb\t4\n");
        let tg = bar_hillel_graph(&g, &d);
        let table = shortest_words(&tg);
        let w = shortest_witness(&tg, &table).unwrap();
        assert_eq!(g.format_word(&w.word), "ab");
        assert_eq!(w.path, vec![1, 2, 3]);
    }

    #[test]
    fn epsilon_needs_initial_accepting_state() {
        let g = cnf("S -> a S | ε");
        let mut k = Nfa::with_states(2, &["a"]);
        k.add_transition_idx(0, 0, 1);
        k.set_initial(0);
        k.set_accepting(1);
        let tg = bar_hillel(&g, &k);
        assert_eq!(tg.epsilon_state(), None);
        let w = shortest_witness(&tg, &shortest_words(&tg)).unwrap();
        assert_eq!(w.word, vec![0]);
        k.set_accepting(0);
        let tg = bar_hillel(&g, &k);
        assert_eq!(tg.epsilon_state(), Some(0));
        let w = shortest_witness(&tg, &shortest_words(&tg)).unwrap();
        assert!(w.is_empty());
        assert_eq!(w.path, vec![0]);
    }
}
