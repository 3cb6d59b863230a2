mod common;

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ratindex::cnf::CnfGrammar;
use ratindex::cyk::cyk_membership;
use ratindex::intersection::{
    bar_hillel, bar_hillel_graph, extract_witness, height_bound_check, shortest_in_intersection, shortest_witness,
    shortest_words, Triple, TripleGrammar, TripleProduction,
};
use ratindex::lab::two_cycle_family;
use ratindex::reach::all_pairs_reach;
use ratindex::{parse_grammar, to_cnf, LabeledGraph};

use common::*;

/// Triple ids deriving `w`, by CYK over the product productions.
fn triples_deriving(tg: &TripleGrammar, w: &[usize]) -> BTreeSet<usize> {
    let n = w.len();
    if n == 0 {
        return BTreeSet::new();
    }
    let mut chart = vec![vec![BTreeSet::new(); n + 1]; n];
    for (i, &a) in w.iter().enumerate() {
        for p in tg.productions() {
            if let TripleProduction::Terminal { lhs, terminal, .. } = *p {
                if terminal == a {
                    chart[i][i + 1].insert(lhs);
                }
            }
        }
    }
    for span in 2..=n {
        for i in 0..=n - span {
            let j = i + span;
            for k in i + 1..j {
                for p in tg.productions() {
                    if let TripleProduction::Binary { lhs, left, right, .. } = *p {
                        if chart[i][k].contains(&left) && chart[k][j].contains(&right) {
                            chart[i][j].insert(lhs);
                        }
                    }
                }
            }
        }
    }
    chart[0][n].clone()
}

fn anbn() -> CnfGrammar {
    to_cnf(&parse_grammar("S -> a S b | a b").unwrap()).unwrap()
}

#[test]
fn product_is_sound_and_complete() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..60 {
        let g = random_cnf(&mut rng, 3, &["a", "b"]);
        let nodes = rng.gen_range(1..=3);
        let d = random_graph(&mut rng, nodes, &["a", "b"], 0.3);
        let tg = bar_hillel_graph(&g, &d);
        let paths = path_words(&g, &d, 5);
        for len in 1..=5 {
            for w in words_of_length(g.terminals().len(), len) {
                let derived = triples_deriving(&tg, &w);
                for i in 0..nodes {
                    for j in 0..nodes {
                        let on_path = paths.get(&(i, j)).is_some_and(|s| s.contains(&w));
                        let expected = on_path && cyk_membership(&g, &w);
                        let got = tg
                            .triple_id(&Triple::new(g.start(), i, j))
                            .is_some_and(|id| derived.contains(&id));
                        assert_eq!(got, expected, "{g}\n{d}\nword {w:?} {i}->{j}");
                    }
                }
            }
        }
        for p in tg.productions() {
            let t = tg.triples()[p.lhs()];
            if let TripleProduction::Binary { left, right, .. } = *p {
                let (l, r) = (tg.triples()[left], tg.triples()[right]);
                assert_eq!((l.from, l.to, r.to), (t.from, r.from, t.to));
            }
        }
        assert!(tg.triples().len() <= g.nonterminals().len() * nodes * nodes);
    }
}

#[test]
fn shortest_words_match_bfs() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let mut exact = 0;
    while exact < 120 {
        let g = random_cnf(&mut rng, 4, &["a", "b"]);
        let n = rng.gen_range(1..=4);
        let k = random_nfa(&mut rng, n, &["a", "b"], 0.3);
        let got = shortest_in_intersection(&g, &k).map(|w| w.word);
        match bfs_shortest(&g, &k, 10) {
            Some(w) => {
                exact += 1;
                assert_eq!(got, Some(w), "{g}\n{k}");
            }
            None => assert!(got.is_none_or(|w| w.len() > 10)),
        }
    }
}

#[test]
fn adding_edges_never_lengthens() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..50 {
        let g = random_cnf(&mut rng, 3, &["a", "b"]);
        let d = random_graph(&mut rng, 3, &["a", "b"], 0.25);
        let mut bigger = d.clone();
        bigger.add_edge(&rng.gen_range(0..3).to_string(), ["a", "b"][rng.gen_range(0..2)], &rng.gen_range(0..3).to_string());
        let (small_tg, big_tg) = (bar_hillel_graph(&g, &d), bar_hillel_graph(&g, &bigger));
        let (small, big) = (shortest_words(&small_tg), shortest_words(&big_tg));
        for t in small_tg.triples() {
            let before = small.length_of(&small_tg, t).unwrap();
            let after = big.length_of(&big_tg, t).expect("still realizable");
            assert!(after <= before);
        }
    }
}

#[test]
fn witnesses_are_consistent_and_within_height_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for _ in 0..100 {
        let g = random_cnf(&mut rng, 4, &["a", "b"]);
        let n = rng.gen_range(1..=4);
        let k = random_nfa(&mut rng, n, &["a", "b"], 0.35);
        let tg = bar_hillel(&g, &k);
        let table = shortest_words(&tg);
        for t in tg.triples() {
            let w = extract_witness(&tg, &table, t).unwrap();
            assert_eq!(w.word.len() as u64, table.length_of(&tg, t).unwrap());
            let names: Vec<&str> = w.word.iter().map(|&a| g.terminals()[a].as_str()).collect();
            assert_eq!(w.tree.yield_word(), names);
            assert!(w.tree.conforms_to(&g.to_grammar().unwrap()));
            assert_eq!(w.path.len(), w.word.len() + 1);
            assert_eq!((w.path[0], *w.path.last().unwrap()), (t.from, t.to));
            for (step, &a) in w.word.iter().enumerate() {
                let label = k.alphabet().iter().position(|l| *l == g.terminals()[a]).unwrap();
                assert!(k.transitions().any(|e| e == (w.path[step], label, w.path[step + 1])));
            }
            assert!(!height_bound_check(&g, n, &w.tree).violated);
        }
    }
}

#[test]
fn two_cycle_witness() {
    let g = anbn();
    let k = two_cycle_family(2, 3);
    let tg = bar_hillel(&g, &k);
    let table = shortest_words(&tg);
    let w = shortest_witness(&tg, &table).unwrap();
    assert_eq!(g.format_word(&w.word), "aaaaaabbbbbb");
    let names: Vec<&str> = w.word.iter().map(|&a| g.terminals()[a].as_str()).collect();
    assert!(k.accepts(&names) && cyk_membership(&g, &w.word));
    let states: Vec<&str> = w.path.iter().map(|&q| k.states()[q].as_str()).collect();
    assert_eq!(states.iter().filter(|s| **s == "a0").count(), 4);
    assert_eq!(states.iter().filter(|s| **s == "b0").count(), 2);
    let report = height_bound_check(&g, k.state_count(), &w.tree);
    assert!(!report.violated);
    assert_eq!(report.bound, g.nonterminals().len() as u64 * 25);
    assert_eq!(shortest_in_intersection(&g, &two_cycle_family(3, 5)).unwrap().word.len(), 30);
}

#[test]
fn realizable_triples_match_reachability() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    for _ in 0..30 {
        let g = anbn();
        let nodes = rng.gen_range(1..=5);
        let mut d = LabeledGraph::new();
        for q in 0..nodes {
            d.add_edge(&q.to_string(), ["a", "b"][rng.gen_range(0..2)], &((q + 1) % nodes).to_string());
        }
        let tg = bar_hillel_graph(&g, &d);
        let rel = all_pairs_reach(&g, &d);
        let from_product: BTreeSet<(usize, usize, usize)> =
            tg.triples().iter().map(|t| (t.nonterminal, t.from, t.to)).collect();
        assert_eq!(rel.facts(), from_product);
    }
}
