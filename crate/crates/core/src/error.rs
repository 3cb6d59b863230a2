use thiserror::Error;

use crate::lab::RhoEstimate;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{line}:{column}: syntax error: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("undeclared symbol `{0}`")]
    UndeclaredSymbol(String),
    #[error("symbol `{0}` is declared more than once")]
    DuplicateSymbol(String),
    #[error("invalid grammar: {0}")]
    InvalidGrammar(String),
    #[error("the grammar generates the empty language")]
    EmptyLanguage,
    #[error("symbol `{0}` is not in the alphabet")]
    NotInAlphabet(String),
    #[error("unbalanced well-nested word (first violation at move {position})")]
    Unbalanced { position: usize },
    #[error("{what} exceeds the configured cap of {cap}")]
    CapExceeded { what: String, cap: usize },
    #[error("triple {0} is not realizable")]
    Unrealizable(String),
    #[error("node `{to}` is not reachable from `{from}`")]
    NotReachable { from: String, to: String },
    #[error("malformed partition: {0}")]
    MalformedPartition(String),
    #[error("budget exceeded after testing {} automata", partial.tested_count)]
    BudgetExceeded { partial: Box<RhoEstimate> },
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("strategy not permitted: {0}")]
    StrategyNotPermitted(String),
    #[error("rule {rule} is not a chain rule: {reason}")]
    NonChainRule { rule: String, reason: String },
    #[error("predicate `{0}` is not binary")]
    NonBinaryPredicate(String),
    #[error("edb label `{0}` does not occur in the graph alphabet")]
    UnknownEdbLabel(String),
    #[error("name collision: {0}")]
    NameCollision(String),
    #[error("unknown node `{0}`")]
    UnknownNode(String),
    #[error("csv output failed: {0}")]
    Csv(String),
}
