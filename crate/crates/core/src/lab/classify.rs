//! Structural grammar classes: linear, superlinear, ultralinear (with a
//! supplied decomposition) and expansive nonterminals.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::grammar::{Grammar, Production, Symbol};

/// Every body has at most one nonterminal.
pub fn is_linear(g: &Grammar) -> bool {
    g.productions().iter().all(|p| p.nonterminals().count() <= 1)
}

/// Condition on a member `A` of the linear core: bodies are `aB`, `Ba` with
/// `B` in the core, or a single terminal.
fn core_rule_ok(p: &Production, core: &[bool]) -> bool {
    match p.rhs.as_slice() {
        [Symbol::Terminal(_)] => true,
        [Symbol::Terminal(_), Symbol::Nonterminal(b)] | [Symbol::Nonterminal(b), Symbol::Terminal(_)] => {
            core[*b]
        }
        _ => false,
    }
}

/// Condition on a nonterminal outside the core: `BC` with `B` in the core,
/// `αB` or `Bα` with `B` in the core and `α` terminal, or a terminal string.
fn outer_rule_ok(p: &Production, core: &[bool]) -> bool {
    let nts: Vec<(usize, usize)> = p
        .rhs
        .iter()
        .enumerate()
        .filter_map(|(pos, s)| match *s {
            Symbol::Nonterminal(n) => Some((pos, n)),
            Symbol::Terminal(_) => None,
        })
        .collect();
    match nts.as_slice() {
        [] => true,
        [(pos, b)] => core[*b] && (*pos == 0 || *pos == p.rhs.len() - 1),
        [(0, b), (1, _)] => p.rhs.len() == 2 && core[*b],
        _ => false,
    }
}

/// Whether `core` (indexed by nonterminal) witnesses superlinearity.
pub fn satisfies_superlinear(g: &Grammar, core: &[bool]) -> bool {
    g.productions().iter().all(|p| {
        if core[p.lhs] {
            core_rule_ok(p, core)
        } else {
            outer_rule_ok(p, core)
        }
    })
}

/// The largest valid linear core, if any.
///
/// Both conditions only grow more permissive as the core grows, so valid
/// cores are closed under union. Starting from all nonterminals and removing
/// members whose own productions break the core condition gives the largest
/// set closed under that condition; it is valid iff any core is.
pub fn linear_core(g: &Grammar) -> Option<Vec<bool>> {
    let mut core = vec![true; g.nonterminals().len()];
    let mut changed = true;
    while changed {
        changed = false;
        for p in g.productions() {
            if core[p.lhs] && !core_rule_ok(p, &core) {
                core[p.lhs] = false;
                changed = true;
            }
        }
    }
    satisfies_superlinear(g, &core).then_some(core)
}

pub fn is_superlinear(g: &Grammar) -> bool {
    linear_core(g).is_some()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UltralinearVerdict {
    pub ultralinear: bool,
    pub reduced: bool,
    /// Index of the top level; the decomposition has `k + 1` levels.
    pub k: usize,
}

impl UltralinearVerdict {
    pub fn levels(&self) -> usize {
        self.k + 1
    }
}

/// Checks a user-supplied decomposition `N_0, ..., N_k` (given by names)
/// against the ultralinear and reduced-form definitions.
pub fn verify_ultralinear(g: &Grammar, partition: &[Vec<String>]) -> Result<UltralinearVerdict> {
    if partition.is_empty() {
        return Err(Error::MalformedPartition("no levels".into()));
    }
    let mut level: HashMap<usize, usize> = HashMap::new();
    for (i, block) in partition.iter().enumerate() {
        for name in block {
            let n = g
                .nonterminal_index(name)
                .ok_or_else(|| Error::MalformedPartition(format!("unknown nonterminal `{name}`")))?;
            if level.insert(n, i).is_some() {
                return Err(Error::MalformedPartition(format!("`{name}` appears twice")));
            }
        }
    }
    if let Some(missing) = (0..g.nonterminals().len()).find(|n| !level.contains_key(n)) {
        return Err(Error::MalformedPartition(format!(
            "`{}` is not covered",
            g.nonterminals()[missing]
        )));
    }
    let k = partition.len() - 1;
    let start = g.start();

    let ultralinear = level[&start] == k
        && g.productions().iter().all(|p| {
            let i = level[&p.lhs];
            let nts: Vec<usize> = p.nonterminals().collect();
            let same_level_single = nts.len() == 1 && level[&nts[0]] == i;
            let all_lower = nts.iter().all(|n| level[n] < i);
            same_level_single || all_lower
        });

    let start_alone = partition[k].len() == 1 && level[&start] == k;
    let start_not_used = g.productions().iter().all(|p| p.nonterminals().all(|n| n != start));
    let shapes_ok = g.productions().iter().all(|p| {
        if p.lhs == start && p.rhs.is_empty() {
            return true;
        }
        let i = level[&p.lhs];
        match p.rhs.as_slice() {
            [Symbol::Terminal(_)] => true,
            [Symbol::Nonterminal(b), Symbol::Terminal(_)] | [Symbol::Terminal(_), Symbol::Nonterminal(b)] => {
                level[b] == i
            }
            [Symbol::Nonterminal(b), Symbol::Nonterminal(c)] => level[b] < i && level[c] < i,
            _ => false,
        }
    });
    let reduced = ultralinear && start_alone && start_not_used && shapes_ok;
    Ok(UltralinearVerdict { ultralinear, reduced, k })
}

/// Nonterminals `A` with a derivation `A =>* uAvAw` over terminal words.
///
/// Only generating symbols take part. `A` qualifies iff some production
/// `B -> β` with `A =>* ..B..` has two distinct positions whose symbols each
/// derive a form containing `A`.
pub fn expansive_nonterminals(g: &Grammar) -> BTreeSet<usize> {
    let n = g.nonterminals().len();
    let generating = g.generating();
    let productions: Vec<&Production> = g
        .productions()
        .iter()
        .filter(|p| generating[p.lhs] && p.nonterminals().all(|m| generating[m]))
        .collect();
    // derives[x][y]: x =>* a form containing y (reflexive).
    let mut derives = vec![vec![false; n]; n];
    for (x, row) in derives.iter_mut().enumerate() {
        row[x] = true;
    }
    for p in &productions {
        for y in p.nonterminals() {
            derives[p.lhs][y] = true;
        }
    }
    for m in 0..n {
        for x in 0..n {
            if derives[x][m] {
                for y in 0..n {
                    if derives[m][y] {
                        derives[x][y] = true;
                    }
                }
            }
        }
    }
    let mut out = BTreeSet::new();
    for a in 0..n {
        if !generating[a] {
            continue;
        }
        let found = productions.iter().any(|p| {
            derives[a][p.lhs]
                && p.nonterminals().filter(|&x| derives[x][a]).nth(1).is_some()
        });
        if found {
            out.insert(a);
        }
    }
    out
}
