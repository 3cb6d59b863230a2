//! Grammar analysis toolkit for context-free path problems.
//!
//! The crate covers four connected pieces:
//!
//! * grammars, Chomsky normal form, CYK and direct chart parsing
//!   ([`grammar`], [`cnf`], [`cyk`], [`chart`]),
//!   parse trees with their dimension ([`tree`]) and the push/pop encoding
//!   of trees with matching pairs, harmonics and oscillation ([`nested`]);
//! * the Bar-Hillel product of a CNF grammar with an automaton, shortest
//!   words and witnesses ([`intersection`]) and all-pairs CFL-reachability
//!   ([`reach`]);
//! * grammar classifiers, rational-index bound formulas and empirical
//!   rational-index measurement ([`lab`]);
//! * chain Datalog programs evaluated through reachability ([`datalog`]).

pub mod chart;
pub mod cnf;
pub mod cyk;
pub mod datalog;
pub mod error;
pub mod grammar;
pub mod graph;
pub mod intersection;
pub mod lab;
pub mod nested;
pub mod reach;
pub mod sample;
pub mod tree;

pub use cnf::{to_cnf, CnfGrammar, CnfRule};
pub use error::{Error, Result};
pub use grammar::{parse_grammar, Grammar, Production, Symbol};
pub use graph::{LabeledGraph, Nfa};
pub use nested::{Move, WellNestedWord};
pub use tree::{Label, ParseTree};
