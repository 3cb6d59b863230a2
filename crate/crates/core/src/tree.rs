//! Parse trees and their dimension.

use std::fmt;

use crate::grammar::{Grammar, Symbol};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Label {
    Nonterminal(String),
    Terminal(String),
    /// The single child of a node expanded by an empty body.
    Epsilon,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParseTree {
    pub label: Label,
    pub children: Vec<ParseTree>,
}

impl ParseTree {
    pub fn leaf(terminal: &str) -> Self {
        ParseTree { label: Label::Terminal(terminal.to_string()), children: Vec::new() }
    }

    pub fn epsilon() -> Self {
        ParseTree { label: Label::Epsilon, children: Vec::new() }
    }

    pub fn node(nonterminal: &str, children: Vec<ParseTree>) -> Self {
        ParseTree { label: Label::Nonterminal(nonterminal.to_string()), children }
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(ParseTree::node_count).sum::<usize>()
    }

    pub fn leaf_count(&self) -> usize {
        if self.is_leaf() {
            1
        } else {
            self.children.iter().map(ParseTree::leaf_count).sum()
        }
    }

    /// Number of edges on the longest root-to-leaf path.
    pub fn height(&self) -> usize {
        self.children.iter().map(|c| c.height() + 1).max().unwrap_or(0)
    }

    /// Terminal leaves from left to right.
    pub fn yield_word(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_yield(&mut out);
        out
    }

    fn collect_yield<'a>(&'a self, out: &mut Vec<&'a str>) {
        match &self.label {
            Label::Terminal(t) => out.push(t),
            _ => self.children.iter().for_each(|c| c.collect_yield(out)),
        }
    }

    /// Dimension: leaves are 0; an internal node takes the maximum over its
    /// children, plus one unless that maximum is attained by a single child.
    pub fn dimension(&self) -> usize {
        if self.is_leaf() {
            return 0;
        }
        let mut best = 0;
        let mut ties = 0;
        for c in &self.children {
            let d = c.dimension();
            if ties == 0 || d > best {
                best = d;
                ties = 1;
            } else if d == best {
                ties += 1;
            }
        }
        if ties == 1 {
            best
        } else {
            best + 1
        }
    }

    /// Checks that every internal node matches a production of `g` and that
    /// the root is labelled by some nonterminal of `g`.
    pub fn conforms_to(&self, g: &Grammar) -> bool {
        let Label::Nonterminal(name) = &self.label else {
            return false;
        };
        let Some(lhs) = g.nonterminal_index(name) else {
            return false;
        };
        let matches_body = |rhs: &[Symbol]| {
            if rhs.is_empty() {
                return self.children.len() == 1 && self.children[0].label == Label::Epsilon;
            }
            rhs.len() == self.children.len()
                && rhs.iter().zip(&self.children).all(|(s, c)| match (*s, &c.label) {
                    (Symbol::Terminal(t), Label::Terminal(name)) => &g.terminals()[t] == name,
                    (Symbol::Nonterminal(n), Label::Nonterminal(name)) => {
                        &g.nonterminals()[n] == name
                    }
                    _ => false,
                })
        };
        g.productions_of(lhs).any(|p| matches_body(&p.rhs))
            && self
                .children
                .iter()
                .all(|c| matches!(c.label, Label::Terminal(_) | Label::Epsilon) || c.conforms_to(g))
    }
}

impl fmt::Display for ParseTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match &self.label {
            Label::Nonterminal(n) | Label::Terminal(n) => n.as_str(),
            Label::Epsilon => "ε",
        };
        if self.is_leaf() {
            return write!(f, "{name}");
        }
        write!(f, "({name}")?;
        for c in &self.children {
            write!(f, " {c}")?;
        }
        write!(f, ")")
    }
}
