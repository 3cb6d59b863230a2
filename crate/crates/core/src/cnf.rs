//! Chomsky normal form.
//!
//! Conversion runs in the classical order: ε-productions, unit productions,
//! terminals inside long bodies, binarization, then removal of useless
//! nonterminals. If the empty word is in the language the start symbol gets
//! an ε flag; a fresh start is introduced when the old one occurs on a
//! right-hand side.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::grammar::{Grammar, Production, Symbol};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CnfRule {
    /// `lhs -> left right`
    Binary { lhs: usize, left: usize, right: usize },
    /// `lhs -> terminal`
    Terminal { lhs: usize, terminal: usize },
}

impl CnfRule {
    pub fn lhs(&self) -> usize {
        match *self {
            CnfRule::Binary { lhs, .. } | CnfRule::Terminal { lhs, .. } => lhs,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CnfGrammar {
    terminals: Vec<String>,
    nonterminals: Vec<String>,
    rules: Vec<CnfRule>,
    start: usize,
    epsilon_at_start: bool,
}

impl CnfGrammar {
    /// Checks the normal-form invariants: indices in range, the start symbol
    /// never on a right-hand side when it is nullable, every nonterminal
    /// useful.
    pub fn new(
        terminals: Vec<String>,
        nonterminals: Vec<String>,
        rules: Vec<CnfRule>,
        start: usize,
        epsilon_at_start: bool,
    ) -> Result<Self> {
        let g = CnfGrammar {
            terminals,
            nonterminals,
            rules,
            start,
            epsilon_at_start,
        };
        // Reuses the general grammar checks for ranges and disjointness.
        let plain = g.to_grammar()?;
        if epsilon_at_start
            && g.rules.iter().any(|r| {
                matches!(*r, CnfRule::Binary { left, right, .. } if left == start || right == start)
            })
        {
            return Err(Error::InvalidGrammar(
                "nullable start symbol occurs on a right-hand side".into(),
            ));
        }
        let generating = plain.generating();
        let reachable = reachable_from_start(&plain);
        for (n, name) in g.nonterminals.iter().enumerate() {
            let gen = generating[n] || (n == start && epsilon_at_start);
            if !gen || !reachable[n] {
                return Err(Error::InvalidGrammar(format!("nonterminal `{name}` is useless")));
            }
        }
        Ok(g)
    }

    pub fn terminals(&self) -> &[String] {
        &self.terminals
    }

    pub fn nonterminals(&self) -> &[String] {
        &self.nonterminals
    }

    pub fn rules(&self) -> &[CnfRule] {
        &self.rules
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn epsilon_at_start(&self) -> bool {
        self.epsilon_at_start
    }

    pub fn terminal_index(&self, name: &str) -> Option<usize> {
        self.terminals.iter().position(|t| t == name)
    }

    pub fn nonterminal_index(&self, name: &str) -> Option<usize> {
        self.nonterminals.iter().position(|t| t == name)
    }

    /// The same grammar as a general [`Grammar`]; `S -> ε` is emitted last.
    pub fn to_grammar(&self) -> Result<Grammar> {
        let mut productions: Vec<Production> = self
            .rules
            .iter()
            .map(|r| match *r {
                CnfRule::Binary { lhs, left, right } => Production::new(
                    lhs,
                    vec![Symbol::Nonterminal(left), Symbol::Nonterminal(right)],
                ),
                CnfRule::Terminal { lhs, terminal } => {
                    Production::new(lhs, vec![Symbol::Terminal(terminal)])
                }
            })
            .collect();
        if self.epsilon_at_start {
            productions.push(Production::new(self.start, vec![]));
        }
        Grammar::new(
            self.terminals.clone(),
            self.nonterminals.clone(),
            productions,
            self.start,
        )
    }

    pub fn tokenize(&self, word: &str) -> Result<Vec<usize>> {
        self.to_grammar()?.tokenize(word)
    }

    pub fn format_word(&self, word: &[usize]) -> String {
        crate::grammar::format_word(&self.terminals, word)
    }
}

impl fmt::Display for CnfGrammar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_grammar() {
            Ok(g) if self.rules.is_empty() => writeln!(f, "{} -> ε", g.nonterminals()[g.start()]),
            Ok(g) => write!(f, "{g}"),
            Err(_) => Err(fmt::Error),
        }
    }
}

fn reachable_from_start(g: &Grammar) -> Vec<bool> {
    let mut seen = vec![false; g.nonterminals().len()];
    let mut stack = vec![g.start()];
    seen[g.start()] = true;
    while let Some(a) = stack.pop() {
        for p in g.productions_of(a) {
            for n in p.nonterminals() {
                if !seen[n] {
                    seen[n] = true;
                    stack.push(n);
                }
            }
        }
    }
    seen
}

struct Builder {
    names: Vec<String>,
    taken: HashSet<String>,
}

impl Builder {
    fn fresh(&mut self, base: &str) -> usize {
        let mut candidate = base.to_string();
        let mut k = 1;
        while self.taken.contains(&candidate) {
            candidate = format!("{base}_{k}");
            k += 1;
        }
        self.taken.insert(candidate.clone());
        self.names.push(candidate);
        self.names.len() - 1
    }
}

type Body = Vec<Symbol>;

/// Converts a grammar to Chomsky normal form with the same language.
pub fn to_cnf(g: &Grammar) -> Result<CnfGrammar> {
    let generating = g.generating();
    if !generating[g.start()] {
        return Err(Error::EmptyLanguage);
    }
    let nullable = g.nullable();
    let with_epsilon = nullable[g.start()];
    let mut builder = Builder {
        names: g.nonterminals().to_vec(),
        taken: g
            .nonterminals()
            .iter()
            .chain(g.terminals().iter())
            .cloned()
            .collect(),
    };

    // ε-productions: every combination of dropped nullable occurrences.
    let mut prods: BTreeSet<(usize, Body)> = BTreeSet::new();
    for p in g.productions() {
        let mut variants: Vec<Body> = vec![Vec::new()];
        for &s in &p.rhs {
            let droppable = matches!(s, Symbol::Nonterminal(n) if nullable[n]);
            let mut next = Vec::with_capacity(variants.len() * 2);
            for v in variants {
                if droppable {
                    next.push(v.clone());
                }
                let mut kept = v;
                kept.push(s);
                next.push(kept);
            }
            variants = next;
        }
        for v in variants {
            if !v.is_empty() {
                prods.insert((p.lhs, v));
            }
        }
    }

    // Unit productions: A -> B with A =>* B collapses onto B's other bodies.
    let n = builder.names.len();
    let mut unit = vec![vec![false; n]; n];
    for (a, row) in unit.iter_mut().enumerate() {
        row[a] = true;
    }
    let mut changed = true;
    while changed {
        changed = false;
        for (a, body) in &prods {
            if let [Symbol::Nonterminal(b)] = body.as_slice() {
                for c in 0..n {
                    if unit[*b][c] && !unit[*a][c] {
                        unit[*a][c] = true;
                        changed = true;
                    }
                }
            }
        }
    }
    let mut no_units: BTreeSet<(usize, Body)> = BTreeSet::new();
    for (b, body) in &prods {
        if matches!(body.as_slice(), [Symbol::Nonterminal(_)]) {
            continue;
        }
        for (a, row) in unit.iter().enumerate() {
            if row[*b] {
                no_units.insert((a, body.clone()));
            }
        }
    }

    // Terminals in bodies of length two or more get their own nonterminal.
    let mut term_nt: Vec<Option<usize>> = vec![None; g.terminals().len()];
    let mut lifted: Vec<(usize, Body)> = Vec::new();
    for (a, body) in no_units {
        if body.len() == 1 {
            lifted.push((a, body));
            continue;
        }
        let body = body
            .into_iter()
            .map(|s| match s {
                Symbol::Terminal(t) => {
                    let nt = *term_nt[t].get_or_insert_with(|| {
                        let name = &g.terminals()[t];
                        let base = if name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                            format!("T_{name}")
                        } else {
                            format!("T{t}")
                        };
                        builder.fresh(&base)
                    });
                    Symbol::Nonterminal(nt)
                }
                s => s,
            })
            .collect();
        lifted.push((a, body));
    }
    for (t, nt) in term_nt.iter().enumerate() {
        if let Some(nt) = nt {
            lifted.push((*nt, vec![Symbol::Terminal(t)]));
        }
    }

    // Binarize the remaining long bodies.
    let mut rules: Vec<CnfRule> = Vec::new();
    for (a, body) in lifted {
        let nts: Vec<usize> = body
            .iter()
            .map(|s| match *s {
                Symbol::Nonterminal(n) => n,
                Symbol::Terminal(_) => usize::MAX,
            })
            .collect();
        match body.as_slice() {
            [Symbol::Terminal(t)] => rules.push(CnfRule::Terminal { lhs: a, terminal: *t }),
            _ => {
                let base = builder.names[a].clone();
                let mut lhs = a;
                for i in 0..nts.len() - 2 {
                    let next = builder.fresh(&base);
                    rules.push(CnfRule::Binary { lhs, left: nts[i], right: next });
                    lhs = next;
                }
                let k = nts.len();
                rules.push(CnfRule::Binary { lhs, left: nts[k - 2], right: nts[k - 1] });
            }
        }
    }

    let mut names = builder.names;
    let mut start = g.start();
    if with_epsilon
        && rules
            .iter()
            .any(|r| matches!(*r, CnfRule::Binary { left, right, .. } if left == start || right == start))
    {
        let fresh = {
            let mut b = Builder { names, taken: builder.taken };
            let idx = b.fresh(&format!("{}_start", g.nonterminals()[start]));
            names = b.names;
            idx
        };
        let copies: Vec<CnfRule> = rules
            .iter()
            .filter(|r| r.lhs() == start)
            .map(|r| match *r {
                CnfRule::Binary { left, right, .. } => CnfRule::Binary { lhs: fresh, left, right },
                CnfRule::Terminal { terminal, .. } => CnfRule::Terminal { lhs: fresh, terminal },
            })
            .collect();
        rules.extend(copies);
        start = fresh;
    }

    trim(g.terminals().to_vec(), names, rules, start, with_epsilon)
}

/// Drops non-generating and unreachable nonterminals and renumbers the rest.
fn trim(
    terminals: Vec<String>,
    names: Vec<String>,
    rules: Vec<CnfRule>,
    start: usize,
    epsilon_at_start: bool,
) -> Result<CnfGrammar> {
    let n = names.len();
    let mut gen = vec![false; n];
    let mut changed = true;
    while changed {
        changed = false;
        for r in &rules {
            let ok = match *r {
                CnfRule::Terminal { .. } => true,
                CnfRule::Binary { left, right, .. } => gen[left] && gen[right],
            };
            if ok && !gen[r.lhs()] {
                gen[r.lhs()] = true;
                changed = true;
            }
        }
    }
    let rules: Vec<CnfRule> = rules
        .into_iter()
        .filter(|r| match *r {
            CnfRule::Terminal { lhs, .. } => gen[lhs],
            CnfRule::Binary { lhs, left, right } => gen[lhs] && gen[left] && gen[right],
        })
        .collect();
    let mut reach = vec![false; n];
    reach[start] = true;
    let mut stack = vec![start];
    while let Some(a) = stack.pop() {
        for r in rules.iter().filter(|r| r.lhs() == a) {
            if let CnfRule::Binary { left, right, .. } = *r {
                for c in [left, right] {
                    if !reach[c] {
                        reach[c] = true;
                        stack.push(c);
                    }
                }
            }
        }
    }
    let mut remap = vec![usize::MAX; n];
    let mut kept = Vec::new();
    for i in 0..n {
        if reach[i] && (gen[i] || i == start) {
            remap[i] = kept.len();
            kept.push(names[i].clone());
        }
    }
    let mut rules: Vec<CnfRule> = rules
        .into_iter()
        .filter(|r| reach[r.lhs()])
        .map(|r| match r {
            CnfRule::Binary { lhs, left, right } => CnfRule::Binary {
                lhs: remap[lhs],
                left: remap[left],
                right: remap[right],
            },
            CnfRule::Terminal { lhs, terminal } => CnfRule::Terminal { lhs: remap[lhs], terminal },
        })
        .collect();
    let mut seen = HashSet::new();
    rules.retain(|r| seen.insert(*r));
    CnfGrammar::new(terminals, kept, rules, remap[start], epsilon_at_start)
}
