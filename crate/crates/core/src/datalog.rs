//! Chain Datalog programs over graph databases.
//!
//! Syntax, one rule per line:
//!
//! ```text
//! Desc(x, y) :- Child(x, y).
//! Desc(x, y) :- Child(x, z), Desc(z, y).
//! ?- Desc
//! ```
//!
//! Predicates that never occur in a head are extensional. Each one becomes
//! a terminal, its name lowercased, and reads the edges with that label, so
//! `Child` above reads edges labelled `child`. Head predicates become
//! nonterminals with the first letter capitalized. `%` and `#` start
//! comments.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::cnf::to_cnf;
use crate::error::{Error, Result};
use crate::grammar::{Grammar, Production, Symbol};
use crate::graph::LabeledGraph;
use crate::reach::all_pairs_reach;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainRule {
    pub head: String,
    pub body: Vec<String>,
    /// Source line, for messages.
    pub line: usize,
}

impl fmt::Display for ChainRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.body.len();
        let var = |i: usize| match i {
            0 => "x".to_string(),
            i if i == m => "y".to_string(),
            i => format!("z{i}"),
        };
        write!(f, "{}(x, y) :- ", self.head)?;
        for (i, p) in self.body.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}({}, {})", p, var(i), var(i + 1))?;
        }
        write!(f, ".")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainProgram {
    rules: Vec<ChainRule>,
    query: String,
}

impl ChainProgram {
    pub fn rules(&self) -> &[ChainRule] {
        &self.rules
    }

    pub fn query(&self) -> &str {
        &self.query
    }

    /// Predicates defined by some rule.
    pub fn idb_predicates(&self) -> BTreeSet<String> {
        self.rules.iter().map(|r| r.head.clone()).collect()
    }

    /// Predicates that only occur in bodies.
    pub fn edb_predicates(&self) -> BTreeSet<String> {
        let idb = self.idb_predicates();
        self.rules
            .iter()
            .flat_map(|r| r.body.iter())
            .filter(|p| !idb.contains(*p))
            .cloned()
            .collect()
    }

    /// Edge labels read by the program.
    pub fn edb_labels(&self) -> BTreeSet<String> {
        self.edb_predicates().iter().map(|p| p.to_lowercase()).collect()
    }
}

impl fmt::Display for ChainProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.rules {
            writeln!(f, "{r}")?;
        }
        writeln!(f, "?- {}", self.query)
    }
}

struct Cursor<'a> {
    line: usize,
    text: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn error(&self, message: impl Into<String>) -> Error {
        let column = self.text[..self.pos].chars().count() + 1;
        Error::Syntax { line: self.line, column, message: message.into() }
    }

    fn skip_ws(&mut self) {
        let rest = &self.text[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.text[self.pos..].starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{token}`")))
        }
    }

    fn ident(&mut self) -> Result<&'a str> {
        self.skip_ws();
        let rest = &self.text[self.pos..];
        let len = rest
            .char_indices()
            .find(|&(_, c)| !(c.is_alphanumeric() || c == '_'))
            .map_or(rest.len(), |(i, _)| i);
        if len == 0 || !rest.starts_with(|c: char| c.is_alphabetic() || c == '_') {
            return Err(self.error("expected an identifier"));
        }
        self.pos += len;
        Ok(&rest[..len])
    }

    fn at_end(&mut self) -> bool {
        self.skip_ws();
        self.pos == self.text.len()
    }
}

struct Atom<'a> {
    predicate: &'a str,
    args: Vec<&'a str>,
}

fn atom<'a>(c: &mut Cursor<'a>) -> Result<Atom<'a>> {
    let predicate = c.ident()?;
    c.expect("(")?;
    let mut args = vec![c.ident()?];
    while c.eat(",") {
        args.push(c.ident()?);
    }
    c.expect(")")?;
    if args.len() != 2 {
        return Err(Error::NonBinaryPredicate(format!("{predicate}/{}", args.len())));
    }
    Ok(Atom { predicate, args })
}

fn strip_comment(line: &str) -> &str {
    let cut = line.find(['%', '#']).unwrap_or(line.len());
    &line[..cut]
}

/// Checks `head(x, y) :- p1(x, z1), ..., pm(z_{m-1}, y)` with all variables
/// distinct.
fn check_chain(head: &Atom, body: &[Atom]) -> std::result::Result<(), String> {
    let mut vars = vec![head.args[0]];
    for (i, a) in body.iter().enumerate() {
        if a.args[0] != vars[i] {
            return Err(format!("argument 1 of `{}` must be `{}`", a.predicate, vars[i]));
        }
        vars.push(a.args[1]);
    }
    if vars.last() != Some(&head.args[1]) {
        return Err(format!("the last body atom must end in `{}`", head.args[1]));
    }
    let distinct: BTreeSet<&str> = vars.iter().copied().collect();
    if distinct.len() != vars.len() {
        return Err("variables along the chain must be distinct".into());
    }
    Ok(())
}

pub fn parse_chain_program(text: &str) -> Result<ChainProgram> {
    let mut rules = Vec::new();
    let mut query: Option<String> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = strip_comment(raw);
        if line.trim().is_empty() {
            continue;
        }
        let mut c = Cursor { line: idx + 1, text: line, pos: 0 };
        if c.eat("?-") {
            let q = c.ident()?;
            c.eat(".");
            if !c.at_end() {
                return Err(c.error("unexpected text after the query"));
            }
            query = Some(q.to_string());
            continue;
        }
        let head = atom(&mut c)?;
        c.expect(":-")?;
        let mut body = vec![atom(&mut c)?];
        while c.eat(",") {
            body.push(atom(&mut c)?);
        }
        c.eat(".");
        if !c.at_end() {
            return Err(c.error("unexpected text after the rule"));
        }
        if let Err(reason) = check_chain(&head, &body) {
            return Err(Error::NonChainRule { rule: line.trim().to_string(), reason });
        }
        rules.push(ChainRule {
            head: head.predicate.to_string(),
            body: body.iter().map(|a| a.predicate.to_string()).collect(),
            line: idx + 1,
        });
    }
    let Some(first) = rules.first() else {
        return Err(Error::Syntax { line: 1, column: 1, message: "no rules".into() });
    };
    let query = query.unwrap_or_else(|| first.head.clone());
    if !rules.iter().any(|r| r.head == query) {
        return Err(Error::UndeclaredSymbol(query));
    }
    Ok(ChainProgram { rules, query })
}

fn capitalize(name: &str) -> String {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

/// One nonterminal per head predicate, one terminal per edge label, one
/// production per rule; the query predicate is the start symbol.
pub fn chain_to_cfg(p: &ChainProgram) -> Result<Grammar> {
    let idb = p.idb_predicates();
    let mut nonterminals: Vec<String> = Vec::new();
    let mut terminals: Vec<String> = Vec::new();
    let mut symbol_of: BTreeMap<&str, Symbol> = BTreeMap::new();
    let mut owner: BTreeMap<String, &str> = BTreeMap::new();
    // Start symbol first, then by first occurrence.
    let order = std::iter::once(p.query.as_str())
        .chain(p.rules.iter().flat_map(|r| std::iter::once(r.head.as_str()).chain(r.body.iter().map(String::as_str))));
    for pred in order {
        if symbol_of.contains_key(pred) {
            continue;
        }
        let (name, symbol) = if idb.contains(pred) {
            nonterminals.push(capitalize(pred));
            (capitalize(pred), Symbol::Nonterminal(nonterminals.len() - 1))
        } else {
            terminals.push(pred.to_lowercase());
            (pred.to_lowercase(), Symbol::Terminal(terminals.len() - 1))
        };
        if let Some(prev) = owner.insert(name.clone(), pred) {
            return Err(Error::NameCollision(format!("`{prev}` and `{pred}` both map to `{name}`")));
        }
        symbol_of.insert(pred, symbol);
    }
    let nt = |pred: &str| match symbol_of[pred] {
        Symbol::Nonterminal(n) => n,
        Symbol::Terminal(_) => unreachable!("heads are nonterminals"),
    };
    let productions = p
        .rules
        .iter()
        .map(|r| Production::new(nt(&r.head), r.body.iter().map(|b| symbol_of[b.as_str()]).collect()))
        .collect();
    Grammar::new(terminals, nonterminals, productions, nt(&p.query))
}

/// Facts of the query predicate on `d`, as pairs of node indices.
pub fn evaluate(p: &ChainProgram, d: &LabeledGraph) -> Result<BTreeSet<(usize, usize)>> {
    if let Some(missing) = p.edb_labels().into_iter().find(|l| d.label_index(l).is_none()) {
        return Err(Error::UnknownEdbLabel(missing));
    }
    let g = chain_to_cfg(p)?;
    let cnf = match to_cnf(&g) {
        Ok(c) => c,
        Err(Error::EmptyLanguage) => return Ok(BTreeSet::new()),
        Err(e) => return Err(e),
    };
    Ok(all_pairs_reach(&cnf, d).start_pairs())
}
