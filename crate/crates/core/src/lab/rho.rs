//! Empirical rational index: the largest shortest-word length of `L ∩ K`
//! over a tested family of automata `K` with `n` states.

use std::cmp::Reverse;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cnf::CnfGrammar;
use crate::error::{Error, Result};
use crate::graph::Nfa;
use crate::intersection::shortest_in_intersection;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    /// One two-cycle automaton with cycle lengths `p` and `q`.
    TwoCycle { p: usize, q: usize },
    /// Every two-cycle automaton with `p + q = n`.
    TwoCycleSplits,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// All automata with exactly `n` states up to renaming of states.
    Exhaustive,
    Random { count: usize, seed: u64 },
    Family(Family),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasureConfig {
    /// Worker threads; `None` uses the global pool.
    pub workers: Option<usize>,
    pub cap_exhaustive_n: usize,
    /// Maximum number of automata to test.
    pub budget: Option<usize>,
}

impl Default for MeasureConfig {
    fn default() -> Self {
        MeasureConfig { workers: None, cap_exhaustive_n: 3, budget: None }
    }
}

/// One measured point. `value` is `None` when every tested automaton had
/// an empty intersection with the language.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RhoEstimate {
    pub n: usize,
    pub value: Option<u64>,
    pub witness_automaton: Option<Nfa>,
    /// Terminal indices of the grammar.
    pub witness_word: Option<Vec<usize>>,
    pub automaton_id: Option<String>,
    pub tested_count: usize,
    /// Exact value of the index when set; a lower bound otherwise.
    pub exhaustive: bool,
}

/// States `a0..a{p-1}` form an `a`-cycle entered at the initial state `a0`;
/// `a0 -b-> b{1 mod q}` bridges into a `b`-cycle `b0..b{q-1}` whose entry
/// `b0` is accepting.
pub fn two_cycle_family(p: usize, q: usize) -> Nfa {
    assert!(p >= 1 && q >= 1, "cycle lengths must be positive");
    let mut nfa = Nfa::default();
    let a: Vec<usize> = (0..p).map(|i| nfa.add_state(&format!("a{i}"))).collect();
    let b: Vec<usize> = (0..q).map(|j| nfa.add_state(&format!("b{j}"))).collect();
    for i in 0..p {
        nfa.add_transition(&format!("a{i}"), "a", &format!("a{}", (i + 1) % p));
    }
    nfa.add_transition("a0", "b", &format!("b{}", 1 % q));
    for j in 0..q {
        nfa.add_transition(&format!("b{j}"), "b", &format!("b{}", (j + 1) % q));
    }
    nfa.set_initial(a[0]);
    nfa.set_accepting(b[0]);
    nfa
}

/// Automaton `index` of the random stream `seed`: each transition is present
/// with probability `density`, and initial and accepting sets are nonempty.
pub fn random_nfa(n: usize, alphabet: &[&str], seed: u64, index: u64, density: f64) -> Nfa {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let mut nfa = Nfa::with_states(n, alphabet);
    for q in 0..n {
        for a in 0..alphabet.len() {
            for r in 0..n {
                if rng.gen_bool(density) {
                    nfa.add_transition_idx(q, a, r);
                }
            }
        }
    }
    let mask = |rng: &mut ChaCha8Rng| loop {
        let m: u32 = rng.gen_range(0..1u32 << n);
        if m != 0 {
            break m;
        }
    };
    let (init, acc) = (mask(&mut rng), mask(&mut rng));
    for q in 0..n {
        if init >> q & 1 == 1 {
            nfa.set_initial(q);
        }
        if acc >> q & 1 == 1 {
            nfa.set_accepting(q);
        }
    }
    nfa
}

const RANDOM_DENSITY: f64 = 0.35;

/// Bit layout of an automaton with `n` states over `s` letters: transition
/// `(q, a, r)` at bit `(q·s + a)·n + r`, then `n` initial bits, then `n`
/// accepting bits.
#[derive(Clone, Copy)]
struct Layout {
    n: usize,
    s: usize,
}

impl Layout {
    fn transition_bits(self) -> usize {
        self.n * self.n * self.s
    }

    fn total_bits(self) -> usize {
        self.transition_bits() + 2 * self.n
    }

    fn permute(self, code: u64, perm: &[usize]) -> u64 {
        let (n, s) = (self.n, self.s);
        let tb = self.transition_bits();
        let mut out = 0u64;
        let mut bits = code;
        while bits != 0 {
            let bit = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let mapped = if bit < tb {
                let (q, rest) = (bit / (s * n), bit % (s * n));
                let (a, r) = (rest / n, rest % n);
                (perm[q] * s + a) * n + perm[r]
            } else if bit < tb + n {
                tb + perm[bit - tb]
            } else {
                tb + n + perm[bit - tb - n]
            };
            out |= 1 << mapped;
        }
        out
    }

    fn well_formed(self, code: u64) -> bool {
        let tb = self.transition_bits();
        let mask = (1u64 << self.n) - 1;
        code >> tb & mask != 0 && code >> (tb + self.n) & mask != 0
    }

    fn to_nfa(self, code: u64, alphabet: &[&str]) -> Nfa {
        let (n, s) = (self.n, self.s);
        let tb = self.transition_bits();
        let mut nfa = Nfa::with_states(n, alphabet);
        for bit in 0..self.total_bits() {
            if code >> bit & 1 == 0 {
                continue;
            }
            if bit < tb {
                let (q, rest) = (bit / (s * n), bit % (s * n));
                nfa.add_transition_idx(q, rest / n, rest % n);
            } else if bit < tb + n {
                nfa.set_initial(bit - tb);
            } else {
                nfa.set_accepting(bit - tb - n);
            }
        }
        nfa
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Codes of all well-formed automata that are the smallest in their
/// orbit under state permutations, ascending.
fn canonical_codes(layout: Layout) -> Vec<u64> {
    let perms: Vec<Vec<usize>> = permutations(layout.n)
        .into_iter()
        .filter(|p| p.iter().enumerate().any(|(i, &x)| i != x))
        .collect();
    (0..1u64 << layout.total_bits())
        .into_par_iter()
        .filter(|&code| layout.well_formed(code) && perms.iter().all(|p| layout.permute(code, p) >= code))
        .collect()
}

enum Candidates {
    Codes(Layout, Vec<u64>),
    Random { n: usize, count: usize, seed: u64 },
    TwoCycles(Vec<(usize, usize)>),
}

impl Candidates {
    fn len(&self) -> usize {
        match self {
            Candidates::Codes(_, codes) => codes.len(),
            Candidates::Random { count, .. } => *count,
            Candidates::TwoCycles(pairs) => pairs.len(),
        }
    }

    fn build(&self, i: usize, alphabet: &[&str]) -> (Nfa, String) {
        match self {
            Candidates::Codes(layout, codes) => (layout.to_nfa(codes[i], alphabet), format!("x{}", codes[i])),
            Candidates::Random { n, seed, .. } => {
                (random_nfa(*n, alphabet, *seed, i as u64, RANDOM_DENSITY), format!("r{seed}:{i}"))
            }
            Candidates::TwoCycles(pairs) => {
                let (p, q) = pairs[i];
                (two_cycle_family(p, q), format!("two_cycle({p},{q})"))
            }
        }
    }
}

/// Measures `max { min |w| : w ∈ L(g) ∩ L(K) }` over the automata `K` chosen
/// by `strategy`, skipping automata with an empty intersection.
///
/// The result does not depend on the number of workers: ties on the value
/// go to the earliest automaton in the strategy's order.
pub fn measure_rho(g: &CnfGrammar, n: usize, strategy: &Strategy, config: &MeasureConfig) -> Result<RhoEstimate> {
    if n == 0 {
        return Err(Error::StrategyNotPermitted("n must be at least 1".into()));
    }
    let alphabet: Vec<&str> = g.terminals().iter().map(String::as_str).collect();
    let (candidates, complete) = match strategy {
        Strategy::Exhaustive => {
            if n > config.cap_exhaustive_n || alphabet.len() > 2 {
                return Err(Error::StrategyNotPermitted(format!(
                    "exhaustive enumeration needs n <= {} and at most 2 terminals (n = {n}, {} terminals)",
                    config.cap_exhaustive_n,
                    alphabet.len()
                )));
            }
            let layout = Layout { n, s: alphabet.len() };
            if layout.total_bits() > 40 {
                return Err(Error::StrategyNotPermitted(format!("{} code bits", layout.total_bits())));
            }
            (Candidates::Codes(layout, run_in_pool(config, || canonical_codes(layout))?), true)
        }
        Strategy::Random { count, seed } => (Candidates::Random { n, count: *count, seed: *seed }, false),
        Strategy::Family(Family::TwoCycle { p, q }) => (Candidates::TwoCycles(vec![(*p, *q)]), false),
        Strategy::Family(Family::TwoCycleSplits) => {
            (Candidates::TwoCycles((1..n).map(|p| (p, n - p)).collect()), false)
        }
    };
    let total = candidates.len();
    let tested = config.budget.map_or(total, |b| b.min(total));
    log::info!("measure_rho: n = {n}, testing {tested} of {total} automata");

    let best = run_in_pool(config, || {
        (0..tested)
            .into_par_iter()
            .filter_map(|i| {
                let (nfa, _) = candidates.build(i, &alphabet);
                shortest_in_intersection(g, &nfa).map(|w| (w.word.len() as u64, Reverse(i), w.word))
            })
            .max_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)))
    })?;

    let mut estimate = RhoEstimate {
        n,
        value: None,
        witness_automaton: None,
        witness_word: None,
        automaton_id: None,
        tested_count: tested,
        exhaustive: complete && tested == total,
    };
    if let Some((value, Reverse(i), word)) = best {
        let (nfa, id) = candidates.build(i, &alphabet);
        estimate.value = Some(value);
        estimate.witness_automaton = Some(nfa);
        estimate.witness_word = Some(word);
        estimate.automaton_id = Some(id);
    }
    if tested < total {
        return Err(Error::BudgetExceeded { partial: Box::new(estimate) });
    }
    Ok(estimate)
}

fn run_in_pool<T: Send>(config: &MeasureConfig, job: impl FnOnce() -> T + Send) -> Result<T> {
    match config.workers {
        None => Ok(job()),
        Some(k) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(k.max(1))
                .build()
                .map_err(|e| Error::StrategyNotPermitted(format!("thread pool: {e}")))?;
            Ok(pool.install(job))
        }
    }
}

/// CSV with header `n,value,exhaustive,witness_word,automaton_id`. Missing
/// values are empty fields; the empty word prints as `ε`.
pub fn rho_csv(g: &CnfGrammar, estimates: &[RhoEstimate]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["n", "value", "exhaustive", "witness_word", "automaton_id"])
        .expect("in-memory write");
    for e in estimates {
        let word = match &e.witness_word {
            Some(word) if word.is_empty() => "ε".to_string(),
            Some(word) => g.format_word(word),
            None => String::new(),
        };
        w.write_record([
            e.n.to_string(),
            e.value.map_or(String::new(), |v| v.to_string()),
            e.exhaustive.to_string(),
            word,
            e.automaton_id.clone().unwrap_or_default(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}
