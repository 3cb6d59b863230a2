//! Grammar classification, rational-index bounds and measurement.

mod bounds;
mod classify;
mod fit;
mod rho;

use std::collections::BTreeSet;
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use bounds::{bound_value, BoundFormula};
pub use classify::{
    expansive_nonterminals, is_linear, is_superlinear, linear_core, satisfies_superlinear, verify_ultralinear,
    UltralinearVerdict,
};
pub use fit::fit_growth;
pub use rho::{measure_rho, random_nfa, rho_csv, two_cycle_family, Family, MeasureConfig, RhoEstimate, Strategy};

use crate::error::Result;
use crate::grammar::Grammar;
use crate::nested::alpha_of_tree;
use crate::sample::TreeSampler;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassificationReport {
    pub is_linear: bool,
    pub is_superlinear: bool,
    /// Names of the largest linear core, when superlinear.
    pub linear_core: Option<Vec<String>>,
    pub ultralinear: Option<UltralinearVerdict>,
    pub expansive: BTreeSet<String>,
    pub samples: usize,
    pub max_observed_dimension: usize,
    pub max_observed_oscillation: usize,
}

/// Classifies `g`, checking `partition` when given and sampling `samples`
/// parse trees with the given seed for observed dimension and oscillation.
pub fn classify(g: &Grammar, partition: Option<&[Vec<String>]>, samples: usize, seed: u64) -> Result<ClassificationReport> {
    let core = linear_core(g);
    let ultralinear = partition.map(|p| verify_ultralinear(g, p)).transpose()?;
    let sampler = TreeSampler::new(g);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut max_dim, mut max_osc, mut drawn) = (0, 0, 0);
    for _ in 0..samples {
        let Some(t) = sampler.sample(&mut rng) else { break };
        drawn += 1;
        max_dim = max_dim.max(t.dimension());
        max_osc = max_osc.max(alpha_of_tree(&t).oscillation());
    }
    Ok(ClassificationReport {
        is_linear: is_linear(g),
        is_superlinear: core.is_some(),
        linear_core: core.map(|c| {
            c.iter().enumerate().filter(|(_, &m)| m).map(|(i, _)| g.nonterminals()[i].clone()).collect()
        }),
        ultralinear,
        expansive: expansive_nonterminals(g).into_iter().map(|i| g.nonterminals()[i].clone()).collect(),
        samples: drawn,
        max_observed_dimension: max_dim,
        max_observed_oscillation: max_osc,
    })
}

impl fmt::Display for ClassificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |items: &mut dyn Iterator<Item = &String>| items.cloned().collect::<Vec<_>>().join(" ");
        writeln!(f, "linear: {}", self.is_linear)?;
        writeln!(f, "superlinear: {}", self.is_superlinear)?;
        if let Some(core) = &self.linear_core {
            writeln!(f, "linear_core: {}", list(&mut core.iter()))?;
        }
        if let Some(v) = &self.ultralinear {
            writeln!(f, "ultralinear: {}", v.ultralinear)?;
            writeln!(f, "reduced_form: {}", v.reduced)?;
            writeln!(f, "k: {}", v.k)?;
        }
        writeln!(f, "expansive: {}", list(&mut self.expansive.iter()))?;
        writeln!(f, "samples: {}", self.samples)?;
        writeln!(f, "max_observed_dimension: {}", self.max_observed_dimension)?;
        writeln!(f, "max_observed_oscillation: {}", self.max_observed_oscillation)
    }
}
