//! Random instance generators and brute-force oracles shared by the
//! integration suites. The oracles work from the definitions and share no
//! code with the algorithms they check.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};

use rand::Rng;
use ratindex::cnf::CnfGrammar;
use ratindex::cyk::cyk_membership;
use ratindex::datalog::ChainProgram;
use ratindex::grammar::{Grammar, Production, Symbol};
use ratindex::graph::{LabeledGraph, Nfa};
use ratindex::nested::Move;
use ratindex::to_cnf;

pub const NT_NAMES: [&str; 8] = ["S", "A", "B", "C", "D", "E", "F", "G"];

/// A grammar with `nts` nonterminals over `terminals`, bodies of length up to
/// `max_body`, mixing terminals and nonterminals, with occasional ε.
pub fn random_grammar<R: Rng>(rng: &mut R, nts: usize, terminals: &[&str], max_body: usize) -> Grammar {
    let mut productions = Vec::new();
    for lhs in 0..nts {
        let count = rng.gen_range(1..=3);
        for _ in 0..count {
            let len = if rng.gen_bool(0.1) { 0 } else { rng.gen_range(1..=max_body) };
            let rhs = (0..len)
                .map(|_| {
                    if rng.gen_bool(0.45) {
                        Symbol::Nonterminal(rng.gen_range(0..nts))
                    } else {
                        Symbol::Terminal(rng.gen_range(0..terminals.len()))
                    }
                })
                .collect();
            productions.push(Production::new(lhs, rhs));
        }
    }
    build(terminals, nts, productions)
}

/// A grammar whose productions are all `A -> B C` or `A -> a`.
pub fn random_cnf_shaped<R: Rng>(rng: &mut R, nts: usize, terminals: &[&str]) -> Grammar {
    let mut productions = Vec::new();
    for lhs in 0..nts {
        productions.push(Production::new(lhs, vec![Symbol::Terminal(rng.gen_range(0..terminals.len()))]));
        for _ in 0..rng.gen_range(0..=3) {
            if rng.gen_bool(0.7) {
                let (b, c) = (rng.gen_range(0..nts), rng.gen_range(0..nts));
                productions.push(Production::new(lhs, vec![Symbol::Nonterminal(b), Symbol::Nonterminal(c)]));
            } else {
                productions.push(Production::new(lhs, vec![Symbol::Terminal(rng.gen_range(0..terminals.len()))]));
            }
        }
    }
    build(terminals, nts, productions)
}

/// Random CNF grammar with a nonempty language and at most `max_nts`
/// nonterminals after normalization.
pub fn random_cnf<R: Rng>(rng: &mut R, max_nts: usize, terminals: &[&str]) -> CnfGrammar {
    loop {
        let nts = rng.gen_range(1..=max_nts);
        let g = random_cnf_shaped(rng, nts, terminals);
        if let Ok(c) = to_cnf(&g) {
            if c.nonterminals().len() <= max_nts {
                return c;
            }
        }
    }
}

fn build(terminals: &[&str], nts: usize, productions: Vec<Production>) -> Grammar {
    Grammar::new(
        terminals.iter().map(|s| s.to_string()).collect(),
        NT_NAMES[..nts].iter().map(|s| s.to_string()).collect(),
        productions,
        0,
    )
    .expect("well-formed random grammar")
}

pub fn random_nfa<R: Rng>(rng: &mut R, n: usize, alphabet: &[&str], density: f64) -> Nfa {
    let mut nfa = Nfa::with_states(n, alphabet);
    for q in 0..n {
        for a in 0..alphabet.len() {
            for r in 0..n {
                if rng.gen_bool(density) {
                    nfa.add_transition_idx(q, a, r);
                }
            }
        }
    }
    nfa.set_initial(rng.gen_range(0..n));
    nfa.set_accepting(rng.gen_range(0..n));
    for q in 0..n {
        if rng.gen_bool(0.2) {
            nfa.set_initial(q);
        }
        if rng.gen_bool(0.2) {
            nfa.set_accepting(q);
        }
    }
    nfa
}

pub fn random_graph<R: Rng>(rng: &mut R, nodes: usize, alphabet: &[&str], density: f64) -> LabeledGraph {
    let mut d = LabeledGraph::new();
    for q in 0..nodes {
        d.add_node(&q.to_string());
    }
    for l in alphabet {
        d.add_label(l);
    }
    for q in 0..nodes {
        for l in alphabet {
            for r in 0..nodes {
                if rng.gen_bool(density) {
                    d.add_edge(&q.to_string(), l, &r.to_string());
                }
            }
        }
    }
    d
}

/// A random DAG over `child` edges: edges only go from lower to higher node.
pub fn random_dag<R: Rng>(rng: &mut R, nodes: usize, density: f64) -> LabeledGraph {
    let mut d = LabeledGraph::new();
    d.add_label("child");
    for q in 0..nodes {
        d.add_node(&q.to_string());
    }
    for q in 0..nodes {
        for r in q + 1..nodes {
            if rng.gen_bool(density) {
                d.add_edge(&q.to_string(), "child", &r.to_string());
            }
        }
    }
    d
}

/// All terminal words of length at most `max_len` derivable from each
/// nonterminal, by fixpoint iteration over the original productions.
pub fn derivable_words(g: &Grammar, max_len: usize) -> Vec<BTreeSet<Vec<usize>>> {
    let mut sets: Vec<BTreeSet<Vec<usize>>> = vec![BTreeSet::new(); g.nonterminals().len()];
    loop {
        let mut changed = false;
        for p in g.productions() {
            let mut partial: BTreeSet<Vec<usize>> = [Vec::new()].into_iter().collect();
            for s in &p.rhs {
                let mut next = BTreeSet::new();
                for prefix in &partial {
                    match *s {
                        Symbol::Terminal(t) => {
                            if prefix.len() < max_len {
                                let mut w = prefix.clone();
                                w.push(t);
                                next.insert(w);
                            }
                        }
                        Symbol::Nonterminal(n) => {
                            for suffix in &sets[n] {
                                if prefix.len() + suffix.len() <= max_len {
                                    let mut w = prefix.clone();
                                    w.extend(suffix);
                                    next.insert(w);
                                }
                            }
                        }
                    }
                }
                partial = next;
            }
            for w in partial {
                changed |= sets[p.lhs].insert(w);
            }
        }
        if !changed {
            return sets;
        }
    }
}

/// Every word over `k` letters of length `len`, in lexicographic order.
pub fn words_of_length(k: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..k).map(move |a| {
                    let mut v = w.clone();
                    v.push(a);
                    v
                })
            })
            .collect();
    }
    out
}

/// Shortest word (up to `max_len`) in `L(g) ∩ L(k)` by enumerating words in
/// length order, tested with NFA simulation and CYK.
pub fn bfs_shortest(g: &CnfGrammar, k: &Nfa, max_len: usize) -> Option<Vec<usize>> {
    let names: Vec<&str> = g.terminals().iter().map(String::as_str).collect();
    for len in 0..=max_len {
        for w in words_of_length(names.len(), len) {
            let labels: Vec<&str> = w.iter().map(|&t| names[t]).collect();
            if k.accepts(&labels) && cyk_membership(g, &w) {
                return Some(w);
            }
        }
    }
    None
}

/// Labels of all paths `i -> j` with at most `max_len` edges, as words over
/// the grammar's terminals; edges with foreign labels are skipped.
pub fn path_words(g: &CnfGrammar, d: &LabeledGraph, max_len: usize) -> BTreeMap<(usize, usize), BTreeSet<Vec<usize>>> {
    let edges: Vec<(usize, usize, usize)> = d
        .edges()
        .filter_map(|(s, l, t)| g.terminal_index(&d.alphabet()[l]).map(|a| (s, a, t)))
        .collect();
    let mut out: BTreeMap<(usize, usize), BTreeSet<Vec<usize>>> = BTreeMap::new();
    let mut frontier: Vec<(usize, usize, Vec<usize>)> = (0..d.nodes().len()).map(|q| (q, q, Vec::new())).collect();
    for _ in 0..=max_len {
        let mut next = Vec::new();
        for (i, j, w) in frontier {
            out.entry((i, j)).or_default().insert(w.clone());
            if w.len() < max_len {
                for &(s, a, t) in &edges {
                    if s == j {
                        let mut v = w.clone();
                        v.push(a);
                        next.push((i, t, v));
                    }
                }
            }
        }
        frontier = next;
    }
    out
}

/// Naive bottom-up evaluation of `(A, i, j)` facts: every round joins all
/// known facts with every rule until nothing changes.
pub fn naive_reach(g: &CnfGrammar, d: &LabeledGraph) -> BTreeSet<(usize, usize, usize)> {
    use ratindex::cnf::CnfRule;
    let n = d.nodes().len();
    let mut facts: BTreeSet<(usize, usize, usize)> = BTreeSet::new();
    for (s, l, t) in d.edges() {
        for rule in g.rules() {
            if let CnfRule::Terminal { lhs, terminal } = *rule {
                if g.terminals()[terminal] == d.alphabet()[l] {
                    facts.insert((lhs, s, t));
                }
            }
        }
    }
    if g.epsilon_at_start() {
        for i in 0..n {
            facts.insert((g.start(), i, i));
        }
    }
    loop {
        let mut added = Vec::new();
        for rule in g.rules() {
            if let CnfRule::Binary { lhs, left, right } = *rule {
                for &(b, i, k) in &facts {
                    if b != left {
                        continue;
                    }
                    for j in 0..n {
                        if facts.contains(&(right, k, j)) && !facts.contains(&(lhs, i, j)) {
                            added.push((lhs, i, j));
                        }
                    }
                }
            }
        }
        if added.is_empty() {
            return facts;
        }
        facts.extend(added);
    }
}

/// The superlinear conditions, transcribed directly: every production of
/// a core member has the form `aB`, `Ba` (B in the core) or `a`; every other
/// production has the form `BC` (B in the core), `αB` / `Bα` (B in the core,
/// α a terminal string) or is a terminal string.
pub fn superlinear_by_subsets(g: &Grammar) -> bool {
    let n = g.nonterminals().len();
    assert!(n <= 10);
    (0u32..1 << n).any(|mask| {
        let core = |x: usize| mask >> x & 1 == 1;
        g.productions().iter().all(|p| {
            let nts: Vec<usize> = p.rhs.iter().filter_map(|s| match s {
                Symbol::Nonterminal(x) => Some(*x),
                _ => None,
            }).collect();
            let terms = p.rhs.len() - nts.len();
            if core(p.lhs) {
                (p.rhs.len() == 1 && terms == 1)
                    || (p.rhs.len() == 2 && nts.len() == 1 && core(nts[0]))
            } else if nts.is_empty() {
                true
            } else if nts.len() == 1 {
                let at_edge = matches!(p.rhs.first(), Some(Symbol::Nonterminal(_)))
                    || matches!(p.rhs.last(), Some(Symbol::Nonterminal(_)));
                core(nts[0]) && at_edge
            } else {
                p.rhs.len() == 2 && nts.len() == 2 && core(nts[0])
            }
        })
    })
}

/// Nonterminals `A` with `A =>* uAvAw`, by exhaustive search over the
/// multisets of nonterminals reachable from `A`, counts capped at 2. Only
/// productions whose symbols all generate terminal words are used.
pub fn expansive_by_search(g: &Grammar) -> BTreeSet<usize> {
    let n = g.nonterminals().len();
    let gen = g.generating();
    let prods: Vec<&Production> = g
        .productions()
        .iter()
        .filter(|p| gen[p.lhs] && p.rhs.iter().all(|s| !matches!(s, Symbol::Nonterminal(x) if !gen[*x])))
        .collect();
    let mut out = BTreeSet::new();
    for a in 0..n {
        if !gen[a] {
            continue;
        }
        let mut start = vec![0u8; n];
        start[a] = 1;
        let mut seen: HashSet<Vec<u8>> = HashSet::new();
        let mut queue = VecDeque::from([start.clone()]);
        seen.insert(start);
        'search: while let Some(form) = queue.pop_front() {
            for p in &prods {
                if form[p.lhs] == 0 {
                    continue;
                }
                let mut next = form.clone();
                next[p.lhs] -= 1;
                for s in &p.rhs {
                    if let Symbol::Nonterminal(x) = s {
                        next[*x] = (next[*x] + 1).min(2);
                    }
                }
                if next[a] >= 2 {
                    out.insert(a);
                    break 'search;
                }
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
    }
    out
}

/// Naive bottom-up evaluation of a chain program: relations are sets of node
/// pairs, recomputed from all rules until stable.
pub fn naive_datalog(p: &ChainProgram, d: &LabeledGraph) -> BTreeSet<(usize, usize)> {
    let idb = p.idb_predicates();
    let mut rel: BTreeMap<String, BTreeSet<(usize, usize)>> = BTreeMap::new();
    for pred in p.edb_predicates() {
        let label = pred.to_lowercase();
        let pairs = d.edges().filter(|&(_, l, _)| d.alphabet()[l] == label).map(|(s, _, t)| (s, t)).collect();
        rel.insert(pred, pairs);
    }
    for h in &idb {
        rel.insert(h.clone(), BTreeSet::new());
    }
    loop {
        let mut changed = false;
        for r in p.rules() {
            let mut acc: BTreeSet<(usize, usize)> = rel[&r.body[0]].clone();
            for b in &r.body[1..] {
                let next = &rel[b];
                acc = acc
                    .iter()
                    .flat_map(|&(x, z)| next.iter().filter(move |&&(z2, _)| z2 == z).map(move |&(_, y)| (x, y)))
                    .collect();
            }
            let target = rel.get_mut(&r.head).unwrap();
            for f in acc {
                changed |= target.insert(f);
            }
        }
        if !changed {
            return rel[p.query()].clone();
        }
    }
}

/// Transitive closure of the edge relation.
pub fn transitive_closure(d: &LabeledGraph) -> BTreeSet<(usize, usize)> {
    let n = d.nodes().len();
    let mut reach = vec![vec![false; n]; n];
    for (s, _, t) in d.edges() {
        reach[s][t] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if reach[i][k] {
                for j in 0..n {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    let mut out = BTreeSet::new();
    for (i, row) in reach.iter().enumerate() {
        for (j, &r) in row.iter().enumerate() {
            if r {
                out.insert((i, j));
            }
        }
    }
    out
}

/// All balanced push/pop words with exactly `len` moves.
pub fn well_nested_words(len: usize) -> Vec<Vec<Move>> {
    fn go(len: usize, open: usize, cur: &mut Vec<Move>, out: &mut Vec<Vec<Move>>) {
        let remaining = len - cur.len();
        if remaining == 0 {
            if open == 0 {
                out.push(cur.clone());
            }
            return;
        }
        if open < remaining {
            cur.push(Move::Push);
            go(len, open + 1, cur, out);
            cur.pop();
        }
        if open > 0 {
            cur.push(Move::Pop);
            go(len, open - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(len, 0, &mut Vec::new(), &mut out);
    out
}

/// Grammars built from the superlinear shapes: core members use `aB`, `Ba`
/// or `a`; the others use `BC`, `αB`, `Bα` or terminal strings.
pub fn random_superlinear<R: Rng>(rng: &mut R) -> Grammar {
    let nts = rng.gen_range(2..=5);
    let core_size = rng.gen_range(1..nts);
    let core: Vec<usize> = (nts - core_size..nts).collect();
    let pick_core = |rng: &mut R| core[rng.gen_range(0..core.len())];
    let mut productions = Vec::new();
    for lhs in 0..nts {
        let t = |rng: &mut R| Symbol::Terminal(rng.gen_range(0..2));
        if core.contains(&lhs) {
            productions.push(Production::new(lhs, vec![t(rng)]));
            for _ in 0..rng.gen_range(1..=2) {
                let b = Symbol::Nonterminal(pick_core(rng));
                let rhs = if rng.gen_bool(0.5) { vec![t(rng), b] } else { vec![b, t(rng)] };
                productions.push(Production::new(lhs, rhs));
            }
        } else {
            for _ in 0..rng.gen_range(1..=3) {
                let b = Symbol::Nonterminal(pick_core(rng));
                let rhs = match rng.gen_range(0..4) {
                    0 => vec![b, Symbol::Nonterminal(rng.gen_range(0..nts))],
                    1 => vec![t(rng), t(rng), b],
                    2 => vec![b, t(rng)],
                    _ => vec![t(rng), t(rng)],
                };
                productions.push(Production::new(lhs, rhs));
            }
        }
    }
    Grammar::new(
        vec!["a".into(), "b".into()],
        NT_NAMES[..nts].iter().map(|s| s.to_string()).collect(),
        productions,
        0,
    )
    .unwrap()
}

/// A reduced-form grammar with levels `0..=k`; `S` is alone on level `k`.
pub fn random_reduced<R: Rng>(rng: &mut R, k: usize) -> (Grammar, Vec<Vec<String>>) {
    let mut levels: Vec<Vec<usize>> = Vec::new();
    let mut next = 1;
    for _ in 0..k {
        let size = rng.gen_range(1..=2);
        levels.push((next..next + size).collect());
        next += size;
    }
    levels.push(vec![0]);
    let nts = next;
    let mut productions = Vec::new();
    for (i, level) in levels.iter().enumerate() {
        let lower: Vec<usize> = levels[..i].iter().flatten().copied().collect();
        for &lhs in level {
            let t = |rng: &mut R| Symbol::Terminal(rng.gen_range(0..2));
            if i == 0 {
                productions.push(Production::new(lhs, vec![t(rng)]));
            } else {
                let mut pair = || Symbol::Nonterminal(lower[rng.gen_range(0..lower.len())]);
                productions.push(Production::new(lhs, vec![pair(), pair()]));
            }
            if lhs != 0 {
                for _ in 0..rng.gen_range(0..=2) {
                    let b = Symbol::Nonterminal(level[rng.gen_range(0..level.len())]);
                    let rhs = if rng.gen_bool(0.5) { vec![t(rng), b] } else { vec![b, t(rng)] };
                    productions.push(Production::new(lhs, rhs));
                }
            }
        }
    }
    let names: Vec<String> = (0..nts).map(|i| if i == 0 { "S".into() } else { format!("N{i}") }).collect();
    let partition = levels.iter().map(|l| l.iter().map(|&i| names[i].clone()).collect()).collect();
    (Grammar::new(vec!["a".into(), "b".into()], names, productions, 0).unwrap(), partition)
}
