//! Rational-index upper-bound formulas, evaluated exactly.
//!
//! The bounds are asymptotic, so each formula carries a multiplicative
//! constant `c` (1 unless calibrated).

use std::fmt;

use num_bigint::BigUint;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoundFormula {
    /// `c·n²`
    Linear { c: u64 },
    /// `c·(|N|·n²)^d` for grammars whose parse trees have dimension ≤ d.
    Dimension { nonterminals: u64, d: u32, c: u64 },
    /// `c·|N|^{2k}·n^{4k}` for k-bounded oscillation.
    Oscillation { nonterminals: u64, k: u32, c: u64 },
    /// `c·n⁴`
    Superlinear { c: u64 },
    /// `c·n^{2k}` for an ultralinear decomposition with top level k.
    Ultralinear { k: u32, c: u64 },
}

impl BoundFormula {
    pub fn constant(&self) -> u64 {
        match *self {
            BoundFormula::Linear { c }
            | BoundFormula::Dimension { c, .. }
            | BoundFormula::Oscillation { c, .. }
            | BoundFormula::Superlinear { c }
            | BoundFormula::Ultralinear { c, .. } => c,
        }
    }

    pub fn with_constant(&self, new_c: u64) -> Self {
        let mut f = self.clone();
        match &mut f {
            BoundFormula::Linear { c }
            | BoundFormula::Dimension { c, .. }
            | BoundFormula::Oscillation { c, .. }
            | BoundFormula::Superlinear { c }
            | BoundFormula::Ultralinear { c, .. } => *c = new_c,
        }
        f
    }

    /// Smallest constant (at least the current one) for which the bound
    /// covers `value` at `n`.
    pub fn calibrated(&self, n: u64, value: u64) -> Self {
        let base = bound_value(&self.with_constant(1), n);
        if base == BigUint::ZERO {
            return self.clone();
        }
        let value = BigUint::from(value);
        let need = (&value + &base - 1u32) / &base;
        let need = u64::try_from(need).unwrap_or(u64::MAX);
        self.with_constant(need.max(self.constant()))
    }
}

impl fmt::Display for BoundFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            BoundFormula::Linear { c } => write!(f, "{c}*n^2"),
            BoundFormula::Dimension { nonterminals, d, c } => write!(f, "{c}*({nonterminals}*n^2)^{d}"),
            BoundFormula::Oscillation { nonterminals, k, c } => {
                write!(f, "{c}*{nonterminals}^{}*n^{}", 2 * k, 4 * k)
            }
            BoundFormula::Superlinear { c } => write!(f, "{c}*n^4"),
            BoundFormula::Ultralinear { k, c } => write!(f, "{c}*n^{}", 2 * k),
        }
    }
}

pub fn bound_value(f: &BoundFormula, n: u64) -> BigUint {
    let n = BigUint::from(n);
    let n2 = n.pow(2);
    match *f {
        BoundFormula::Linear { c } => c * n2,
        BoundFormula::Dimension { nonterminals, d, c } => c * (nonterminals * n2).pow(d),
        BoundFormula::Oscillation { nonterminals, k, c } => {
            c * BigUint::from(nonterminals).pow(2 * k) * n.pow(4 * k)
        }
        BoundFormula::Superlinear { c } => c * n2.pow(2),
        BoundFormula::Ultralinear { k, c } => c * n.pow(2 * k),
    }
}
