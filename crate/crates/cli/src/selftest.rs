//! Small end-to-end checks with known answers.

use std::collections::BTreeSet;
use std::io::Write;

use anyhow::Result;
use ratindex::datalog::{evaluate, parse_chain_program};
use ratindex::intersection::shortest_in_intersection;
use ratindex::lab::{expansive_nonterminals, is_superlinear, two_cycle_family};
use ratindex::nested::{oscillation_bruteforce, DEFAULT_BRUTE_FORCE_CAP};
use ratindex::{parse_grammar, to_cnf, LabeledGraph, ParseTree, WellNestedWord};

fn check(out: &mut dyn Write, name: &str, ok: bool) -> Result<bool> {
    writeln!(out, "{} {name}", if ok { "ok  " } else { "FAIL" })?;
    Ok(ok)
}

pub fn run(out: &mut dyn Write) -> Result<bool> {
    let mut ok = true;

    let w: WellNestedWord = "āāāaaāaa".parse()?;
    let pairs = w.matching_pairs().pairs;
    ok &= check(out, "matching pairs of āāāaaāaa", pairs == [(1, 8), (2, 5), (3, 4), (6, 7)])?;
    let brute = oscillation_bruteforce(w.moves(), DEFAULT_BRUTE_FORCE_CAP)?;
    ok &= check(out, "oscillation of āāāaaāaa", w.oscillation() == 1 && brute == 1)?;

    let leaf = || ParseTree::leaf("a");
    let n = |kids| ParseTree::node("X", kids);
    let t = n(vec![n(vec![n(vec![leaf(), leaf()]), n(vec![leaf()])]), n(vec![leaf(), leaf()])]);
    ok &= check(out, "dimension of a complete binary tree with pruned leaf", t.dimension() == 2)?;

    let anbn = to_cnf(&parse_grammar("S -> a S b | a b")?)?;
    let lengths: Vec<usize> = [(2, 3), (3, 5)]
        .iter()
        .map(|&(p, q)| shortest_in_intersection(&anbn, &two_cycle_family(p, q)).map_or(0, |w| w.len()))
        .collect();
    ok &= check(out, "two-cycle shortest words", lengths == [12, 30])?;

    let doubling = parse_grammar("S -> S S | a")?;
    ok &= check(
        out,
        "S -> S S | a is expansive and not superlinear",
        expansive_nonterminals(&doubling).contains(&0) && !is_superlinear(&doubling),
    )?;

    let p = parse_chain_program("Desc(x, y) :- Child(x, y).\nDesc(x, y) :- Child(x, z), Desc(z, y).\n")?;
    let d = LabeledGraph::parse("0 child 1\n1 child 2\n3 child 2\n")?;
    let expected: BTreeSet<(usize, usize)> = [(0, 1), (0, 2), (1, 2), (3, 2)].into_iter().collect();
    ok &= check(out, "descendants on a small forest", evaluate(&p, &d)? == expected)?;

    Ok(ok)
}
