//! Random derivations.
//!
//! Trees are drawn top-down with a height cap. At each node the sampler
//! either stops early (with probability `stop_probability` it takes a
//! production of minimal height) or picks uniformly among the productions
//! that still fit under the cap.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::grammar::{Grammar, Production, Symbol};
use crate::tree::ParseTree;

pub const DEFAULT_MAX_HEIGHT: usize = 12;
pub const DEFAULT_STOP_PROBABILITY: f64 = 0.3;

pub struct TreeSampler<'g> {
    grammar: &'g Grammar,
    max_height: usize,
    stop_probability: f64,
    /// Height of the shallowest derivation tree per nonterminal.
    min_height: Vec<Option<usize>>,
}

impl<'g> TreeSampler<'g> {
    pub fn new(grammar: &'g Grammar) -> Self {
        Self::with_params(grammar, DEFAULT_MAX_HEIGHT, DEFAULT_STOP_PROBABILITY)
    }

    pub fn with_params(grammar: &'g Grammar, max_height: usize, stop_probability: f64) -> Self {
        let mut min_height: Vec<Option<usize>> = vec![None; grammar.nonterminals().len()];
        let mut changed = true;
        while changed {
            changed = false;
            for p in grammar.productions() {
                if let Some(h) = production_height(p, &min_height) {
                    if min_height[p.lhs].is_none_or(|old| h < old) {
                        min_height[p.lhs] = Some(h);
                        changed = true;
                    }
                }
            }
        }
        TreeSampler { grammar, max_height, stop_probability, min_height }
    }

    /// `None` when the start symbol has no derivation within the height cap.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<ParseTree> {
        self.sample_from(self.grammar.start(), rng)
    }

    pub fn sample_from<R: Rng + ?Sized>(&self, nt: usize, rng: &mut R) -> Option<ParseTree> {
        if self.min_height[nt]? > self.max_height {
            return None;
        }
        Some(self.expand(nt, self.max_height, rng))
    }

    fn expand<R: Rng + ?Sized>(&self, nt: usize, budget: usize, rng: &mut R) -> ParseTree {
        let feasible: Vec<(&Production, usize)> = self
            .grammar
            .productions_of(nt)
            .filter_map(|p| production_height(p, &self.min_height).map(|h| (p, h)))
            .filter(|&(_, h)| h <= budget)
            .collect();
        let chosen = if rng.gen_bool(self.stop_probability) {
            let lowest = feasible.iter().map(|&(_, h)| h).min().expect("feasible production");
            let shallow: Vec<_> = feasible.iter().filter(|&&(_, h)| h == lowest).collect();
            shallow.choose(rng).expect("non-empty").0
        } else {
            feasible.choose(rng).expect("feasible production").0
        };
        let name = &self.grammar.nonterminals()[nt];
        if chosen.rhs.is_empty() {
            return ParseTree::node(name, vec![ParseTree::epsilon()]);
        }
        let children = chosen
            .rhs
            .iter()
            .map(|&s| match s {
                Symbol::Terminal(t) => ParseTree::leaf(&self.grammar.terminals()[t]),
                Symbol::Nonterminal(n) => self.expand(n, budget - 1, rng),
            })
            .collect();
        ParseTree::node(name, children)
    }
}

fn production_height(p: &Production, min_height: &[Option<usize>]) -> Option<usize> {
    let mut h = 1;
    for n in p.nonterminals() {
        h = h.max(min_height[n]? + 1);
    }
    Some(h)
}
