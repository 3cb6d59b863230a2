//! Context-free grammars and their text format.
//!
//! The format is line oriented:
//!
//! ```text
//! # comment
//! S -> a S b | a b
//! A -> 'x' A | ε
//! ```
//!
//! Nonterminals are identifiers starting with an uppercase letter, terminals
//! are lowercase identifiers or quoted strings. An empty alternative (or `ε`)
//! is the empty body. The first left-hand side is the start symbol.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Terminal(usize),
    Nonterminal(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Production {
    pub lhs: usize,
    pub rhs: Vec<Symbol>,
}

impl Production {
    pub fn new(lhs: usize, rhs: Vec<Symbol>) -> Self {
        Production { lhs, rhs }
    }

    pub fn nonterminals(&self) -> impl Iterator<Item = usize> + '_ {
        self.rhs.iter().filter_map(|s| match *s {
            Symbol::Nonterminal(n) => Some(n),
            Symbol::Terminal(_) => None,
        })
    }
}

/// A context-free grammar `(Σ, N, P, S)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grammar {
    terminals: Vec<String>,
    nonterminals: Vec<String>,
    productions: Vec<Production>,
    start: usize,
}

impl Grammar {
    /// Builds a grammar, checking that every index is in range and that the
    /// two alphabets are disjoint.
    pub fn new(
        terminals: Vec<String>,
        nonterminals: Vec<String>,
        productions: Vec<Production>,
        start: usize,
    ) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for name in terminals.iter().chain(nonterminals.iter()) {
            if !seen.insert(name.as_str()) {
                return Err(Error::DuplicateSymbol(name.clone()));
            }
        }
        if start >= nonterminals.len() {
            return Err(Error::InvalidGrammar("start symbol out of range".into()));
        }
        for p in &productions {
            if p.lhs >= nonterminals.len() {
                return Err(Error::InvalidGrammar("production lhs out of range".into()));
            }
            for s in &p.rhs {
                let ok = match *s {
                    Symbol::Terminal(t) => t < terminals.len(),
                    Symbol::Nonterminal(n) => n < nonterminals.len(),
                };
                if !ok {
                    return Err(Error::InvalidGrammar("production symbol out of range".into()));
                }
            }
        }
        Ok(Grammar {
            terminals,
            nonterminals,
            productions,
            start,
        })
    }

    pub fn terminals(&self) -> &[String] {
        &self.terminals
    }

    pub fn nonterminals(&self) -> &[String] {
        &self.nonterminals
    }

    pub fn productions(&self) -> &[Production] {
        &self.productions
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn terminal_index(&self, name: &str) -> Option<usize> {
        self.terminals.iter().position(|t| t == name)
    }

    pub fn nonterminal_index(&self, name: &str) -> Option<usize> {
        self.nonterminals.iter().position(|t| t == name)
    }

    pub fn symbol_name(&self, s: Symbol) -> &str {
        match s {
            Symbol::Terminal(t) => &self.terminals[t],
            Symbol::Nonterminal(n) => &self.nonterminals[n],
        }
    }

    pub fn productions_of(&self, lhs: usize) -> impl Iterator<Item = &Production> + '_ {
        self.productions.iter().filter(move |p| p.lhs == lhs)
    }

    /// Nonterminals that derive at least one terminal string.
    pub fn generating(&self) -> Vec<bool> {
        let mut gen = vec![false; self.nonterminals.len()];
        let mut changed = true;
        while changed {
            changed = false;
            for p in &self.productions {
                if !gen[p.lhs] && p.nonterminals().all(|n| gen[n]) {
                    gen[p.lhs] = true;
                    changed = true;
                }
            }
        }
        gen
    }

    /// Nonterminals that derive the empty string.
    pub fn nullable(&self) -> Vec<bool> {
        let mut nullable = vec![false; self.nonterminals.len()];
        let mut changed = true;
        while changed {
            changed = false;
            for p in &self.productions {
                if !nullable[p.lhs]
                    && p.rhs.iter().all(|s| matches!(*s, Symbol::Nonterminal(n) if nullable[n]))
                {
                    nullable[p.lhs] = true;
                    changed = true;
                }
            }
        }
        nullable
    }

    /// Splits a word into terminal indices.
    ///
    /// Whitespace separates tokens. A single token that is not itself a
    /// terminal is split into characters when every terminal is one
    /// character long, so `aabb` and `a a b b` mean the same thing.
    pub fn tokenize(&self, word: &str) -> Result<Vec<usize>> {
        let tokens: Vec<&str> = word.split_whitespace().collect();
        let single_chars = self.terminals.iter().all(|t| t.chars().count() == 1);
        let lookup = |tok: &str| {
            self.terminal_index(tok)
                .ok_or_else(|| Error::NotInAlphabet(tok.to_string()))
        };
        if tokens.len() == 1 && self.terminal_index(tokens[0]).is_none() && single_chars {
            return tokens[0]
                .chars()
                .map(|c| lookup(c.encode_utf8(&mut [0u8; 4])))
                .collect();
        }
        tokens.into_iter().map(lookup).collect()
    }

    /// Renders terminal indices as a word; the inverse of [`Grammar::tokenize`].
    pub fn format_word(&self, word: &[usize]) -> String {
        format_word(&self.terminals, word)
    }
}

/// Joins terminals without separators when all of them are single
/// characters, and with single spaces otherwise.
pub fn format_word(terminals: &[String], word: &[usize]) -> String {
    let single = word.iter().all(|&t| terminals[t].chars().count() == 1);
    let sep = if single { "" } else { " " };
    word.iter()
        .map(|&t| terminals[t].as_str())
        .collect::<Vec<_>>()
        .join(sep)
}

pub(crate) fn is_nonterminal_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_uppercase())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn is_bare_terminal(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn quote_terminal(name: &str) -> String {
    if is_bare_terminal(name) {
        name.to_string()
    } else if name.contains('\'') {
        format!("\"{name}\"")
    } else {
        format!("'{name}'")
    }
}

impl fmt::Display for Grammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut order = vec![self.start];
        for p in &self.productions {
            if !order.contains(&p.lhs) {
                order.push(p.lhs);
            }
        }
        for lhs in order {
            let bodies: Vec<String> = self
                .productions_of(lhs)
                .map(|p| {
                    if p.rhs.is_empty() {
                        "ε".to_string()
                    } else {
                        p.rhs
                            .iter()
                            .map(|&s| match s {
                                Symbol::Terminal(t) => quote_terminal(&self.terminals[t]),
                                Symbol::Nonterminal(n) => self.nonterminals[n].clone(),
                            })
                            .collect::<Vec<_>>()
                            .join(" ")
                    }
                })
                .collect();
            if bodies.is_empty() {
                continue;
            }
            writeln!(f, "{} -> {}", self.nonterminals[lhs], bodies.join(" | "))?;
        }
        Ok(())
    }
}

impl FromStr for Grammar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_grammar(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Ident(String),
    Quoted(String),
    Arrow,
    Bar,
    Epsilon,
}

struct Spanned {
    token: Token,
    column: usize,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn tokenize_line(line_no: usize, line: &str) -> Result<Vec<Spanned>> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let column = i + 1;
        match c {
            '#' => break,
            c if c.is_whitespace() => i += 1,
            '|' => {
                out.push(Spanned { token: Token::Bar, column });
                i += 1;
            }
            'ε' => {
                out.push(Spanned { token: Token::Epsilon, column });
                i += 1;
            }
            '-' if chars.get(i + 1) == Some(&'>') => {
                out.push(Spanned { token: Token::Arrow, column });
                i += 2;
            }
            '→' => {
                out.push(Spanned { token: Token::Arrow, column });
                i += 1;
            }
            '\'' | '"' => {
                let close = chars[i + 1..]
                    .iter()
                    .position(|&d| d == c)
                    .ok_or_else(|| syntax(line_no, column, "unterminated quoted terminal"))?;
                let text: String = chars[i + 1..i + 1 + close].iter().collect();
                if text.is_empty() {
                    return Err(syntax(line_no, column, "empty quoted terminal"));
                }
                out.push(Spanned { token: Token::Quoted(text), column });
                i += close + 2;
            }
            c if c.is_ascii_alphanumeric() || c == '_' => {
                let len = chars[i..]
                    .iter()
                    .take_while(|d| d.is_ascii_alphanumeric() || **d == '_')
                    .count();
                let text: String = chars[i..i + len].iter().collect();
                out.push(Spanned { token: Token::Ident(text), column });
                i += len;
            }
            other => return Err(syntax(line_no, column, format!("unexpected character `{other}`"))),
        }
    }
    Ok(out)
}

enum RawSymbol {
    Nonterminal(String),
    Terminal(String, bool),
}

/// Parses the grammar text format described in the module docs.
pub fn parse_grammar(text: &str) -> Result<Grammar> {
    let mut raw: Vec<(String, Vec<RawSymbol>)> = Vec::new();
    let mut nonterminals: Vec<String> = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let tokens = tokenize_line(line_no, line)?;
        if tokens.is_empty() {
            continue;
        }
        let lhs = match &tokens[0].token {
            Token::Ident(name) if is_nonterminal_name(name) => name.clone(),
            _ => {
                return Err(syntax(
                    line_no,
                    tokens[0].column,
                    "expected a nonterminal on the left-hand side",
                ))
            }
        };
        match tokens.get(1) {
            Some(Spanned { token: Token::Arrow, .. }) => {}
            Some(t) => return Err(syntax(line_no, t.column, "expected `->`")),
            None => return Err(syntax(line_no, line.chars().count() + 1, "expected `->`")),
        }
        if !nonterminals.contains(&lhs) {
            nonterminals.push(lhs.clone());
        }
        let mut body = Vec::new();
        let mut saw_epsilon = false;
        let mut flush = |body: &mut Vec<RawSymbol>, saw_epsilon: &mut bool, column: usize| {
            if *saw_epsilon && !body.is_empty() {
                return Err(syntax(line_no, column, "`ε` must stand alone in an alternative"));
            }
            raw.push((lhs.clone(), std::mem::take(body)));
            *saw_epsilon = false;
            Ok(())
        };
        for t in &tokens[2..] {
            match &t.token {
                Token::Bar => flush(&mut body, &mut saw_epsilon, t.column)?,
                Token::Epsilon => saw_epsilon = true,
                Token::Arrow => return Err(syntax(line_no, t.column, "unexpected `->`")),
                Token::Quoted(s) => body.push(RawSymbol::Terminal(s.clone(), true)),
                Token::Ident(s) if is_nonterminal_name(s) => {
                    body.push(RawSymbol::Nonterminal(s.clone()))
                }
                Token::Ident(s) => body.push(RawSymbol::Terminal(s.clone(), false)),
            }
        }
        flush(&mut body, &mut saw_epsilon, line.chars().count() + 1)?;
    }
    if raw.is_empty() {
        return Err(syntax(1, 1, "no productions"));
    }

    let nt_index: HashMap<&str, usize> = nonterminals
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_str(), i))
        .collect();
    let mut terminals: Vec<String> = Vec::new();
    let mut productions = Vec::with_capacity(raw.len());
    for (lhs, body) in &raw {
        let mut rhs = Vec::with_capacity(body.len());
        for s in body {
            match s {
                RawSymbol::Nonterminal(name) => match nt_index.get(name.as_str()) {
                    Some(&n) => rhs.push(Symbol::Nonterminal(n)),
                    None => return Err(Error::UndeclaredSymbol(name.clone())),
                },
                RawSymbol::Terminal(name, quoted) => {
                    if *quoted && nt_index.contains_key(name.as_str()) {
                        return Err(Error::DuplicateSymbol(name.clone()));
                    }
                    let t = match terminals.iter().position(|t| t == name) {
                        Some(t) => t,
                        None => {
                            terminals.push(name.clone());
                            terminals.len() - 1
                        }
                    };
                    rhs.push(Symbol::Terminal(t));
                }
            }
        }
        productions.push(Production::new(nt_index[lhs.as_str()], rhs));
    }
    Grammar::new(terminals, nonterminals, productions, 0)
}
