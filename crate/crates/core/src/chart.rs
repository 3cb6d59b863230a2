//! Parsing with the grammar as written, without normalizing it first.
//!
//! Spans are filled in order of length. Within one span the productions are
//! retried until nothing changes, which covers unit and nullable chains. A
//! cell keeps the first derivation found, so every back pointer refers to a
//! cell filled earlier and tree extraction terminates.

use std::collections::HashMap;

use crate::error::Result;
use crate::grammar::{Grammar, Symbol};
use crate::tree::ParseTree;

/// Production index and the span boundaries of its body symbols.
type Back = (usize, Vec<usize>);

struct Chart<'a> {
    g: &'a Grammar,
    word: &'a [usize],
    cells: HashMap<(usize, usize, usize), Back>,
}

impl Chart<'_> {
    /// Boundaries `i = p0 <= p1 <= ... <= pk = j` splitting `[i, j)` among
    /// the body symbols, using only filled cells.
    fn split(&self, body: &[Symbol], i: usize, j: usize) -> Option<Vec<usize>> {
        // layers[m] maps a position reached after m symbols to its predecessor.
        let mut layers: Vec<HashMap<usize, usize>> = vec![HashMap::from([(i, i)])];
        for sym in body {
            let mut next = HashMap::new();
            for &p in layers.last().unwrap().keys() {
                match *sym {
                    Symbol::Terminal(t) => {
                        if p < j && self.word[p] == t {
                            next.entry(p + 1).or_insert(p);
                        }
                    }
                    Symbol::Nonterminal(b) => {
                        for q in p..=j {
                            if self.cells.contains_key(&(b, p, q)) {
                                next.entry(q).or_insert(p);
                            }
                        }
                    }
                }
            }
            if next.is_empty() {
                return None;
            }
            layers.push(next);
        }
        let mut bounds = vec![j];
        let mut pos = j;
        for layer in layers.iter().skip(1).rev() {
            pos = *layer.get(&pos)?;
            bounds.push(pos);
        }
        bounds.reverse();
        (bounds[0] == i).then_some(bounds)
    }

    fn fill(&mut self) {
        let n = self.word.len();
        for len in 0..=n {
            for i in 0..=n - len {
                let j = i + len;
                let mut changed = true;
                while changed {
                    changed = false;
                    for (pi, p) in self.g.productions().iter().enumerate() {
                        if self.cells.contains_key(&(p.lhs, i, j)) {
                            continue;
                        }
                        if let Some(bounds) = self.split(&p.rhs, i, j) {
                            self.cells.insert((p.lhs, i, j), (pi, bounds));
                            changed = true;
                        }
                    }
                }
            }
        }
    }

    fn tree(&self, a: usize, i: usize, j: usize) -> ParseTree {
        let (pi, bounds) = &self.cells[&(a, i, j)];
        let p = &self.g.productions()[*pi];
        let name = &self.g.nonterminals()[a];
        if p.rhs.is_empty() {
            return ParseTree::node(name, vec![ParseTree::epsilon()]);
        }
        let children = p
            .rhs
            .iter()
            .enumerate()
            .map(|(m, sym)| match *sym {
                Symbol::Terminal(t) => ParseTree::leaf(&self.g.terminals()[t]),
                Symbol::Nonterminal(b) => self.tree(b, bounds[m], bounds[m + 1]),
            })
            .collect();
        ParseTree::node(name, children)
    }
}

/// A parse tree of `word` (terminal indices) in `g` itself, or `None` when
/// `g` does not derive it.
pub fn parse_tree(g: &Grammar, word: &[usize]) -> Option<ParseTree> {
    let mut chart = Chart { g, word, cells: HashMap::new() };
    chart.fill();
    chart.cells.contains_key(&(g.start(), 0, word.len())).then(|| chart.tree(g.start(), 0, word.len()))
}

/// Tokenizes `word` and runs [`parse_tree`].
pub fn parse_word_tree(g: &Grammar, word: &str) -> Result<Option<ParseTree>> {
    let tokens = g.tokenize(word)?;
    Ok(parse_tree(g, &tokens))
}
