//! CYK recognition over a CNF grammar.

use crate::cnf::{CnfGrammar, CnfRule};
use crate::error::Result;
use crate::tree::ParseTree;

#[derive(Clone, Copy)]
enum Back {
    Leaf(usize),
    Split { rule: usize, left_len: usize },
}

struct Chart {
    n: usize,
    nts: usize,
    cells: Vec<Option<Back>>,
}

impl Chart {
    fn idx(&self, start: usize, len: usize, nt: usize) -> usize {
        ((len - 1) * self.n + start) * self.nts + nt
    }

    fn get(&self, start: usize, len: usize, nt: usize) -> Option<Back> {
        self.cells[self.idx(start, len, nt)]
    }
}

fn fill(g: &CnfGrammar, word: &[usize]) -> Chart {
    let n = word.len();
    let nts = g.nonterminals().len();
    let mut chart = Chart { n, nts, cells: vec![None; n * n * nts] };
    for (i, &t) in word.iter().enumerate() {
        for (r, rule) in g.rules().iter().enumerate() {
            if let CnfRule::Terminal { lhs, terminal } = *rule {
                let k = chart.idx(i, 1, lhs);
                if terminal == t && chart.cells[k].is_none() {
                    chart.cells[k] = Some(Back::Leaf(r));
                }
            }
        }
    }
    for len in 2..=n {
        for start in 0..=n - len {
            for left_len in 1..len {
                for (r, rule) in g.rules().iter().enumerate() {
                    if let CnfRule::Binary { lhs, left, right } = *rule {
                        let k = chart.idx(start, len, lhs);
                        if chart.cells[k].is_some() {
                            continue;
                        }
                        if chart.get(start, left_len, left).is_some()
                            && chart.get(start + left_len, len - left_len, right).is_some()
                        {
                            chart.cells[k] = Some(Back::Split { rule: r, left_len });
                        }
                    }
                }
            }
        }
    }
    chart
}

/// `true` iff the start symbol derives `word` (terminal indices).
pub fn cyk_membership(g: &CnfGrammar, word: &[usize]) -> bool {
    if word.is_empty() {
        return g.epsilon_at_start();
    }
    fill(g, word).get(0, word.len(), g.start()).is_some()
}

/// Like [`cyk_membership`] but returns one parse tree of the word.
pub fn cyk_parse(g: &CnfGrammar, word: &[usize]) -> Option<ParseTree> {
    if word.is_empty() {
        let name = &g.nonterminals()[g.start()];
        return g
            .epsilon_at_start()
            .then(|| ParseTree::node(name, vec![ParseTree::epsilon()]));
    }
    let chart = fill(g, word);
    chart.get(0, word.len(), g.start())?;
    Some(build(g, &chart, 0, word.len(), g.start()))
}

fn build(g: &CnfGrammar, chart: &Chart, start: usize, len: usize, nt: usize) -> ParseTree {
    let name = &g.nonterminals()[nt];
    match chart.get(start, len, nt).expect("chart entry present") {
        Back::Leaf(r) => match g.rules()[r] {
            CnfRule::Terminal { terminal, .. } => {
                ParseTree::node(name, vec![ParseTree::leaf(&g.terminals()[terminal])])
            }
            CnfRule::Binary { .. } => unreachable!(),
        },
        Back::Split { rule, left_len } => match g.rules()[rule] {
            CnfRule::Binary { left, right, .. } => ParseTree::node(
                name,
                vec![
                    build(g, chart, start, left_len, left),
                    build(g, chart, start + left_len, len - left_len, right),
                ],
            ),
            CnfRule::Terminal { .. } => unreachable!(),
        },
    }
}

/// Tokenizes `word` and runs [`cyk_parse`]; fails on symbols outside Σ.
pub fn parse_word(g: &CnfGrammar, word: &str) -> Result<Option<ParseTree>> {
    let tokens = g.tokenize(word)?;
    Ok(cyk_parse(g, &tokens))
}
