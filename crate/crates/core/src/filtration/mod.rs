//! Graded weight data of a filtration, and monomial valuations and ideals.

mod ideal;

pub use ideal::{
    gauss_extension_eval, in_integral_closure, rees_of_deformation, rees_valuations,
    DeformationComponent, IntegralClosure, MonomialIdeal, MonomialValuation,
};

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::Rat;
use crate::measures::PPMeasure;

/// Weight multiset of the degree-`m` piece of a filtered graded algebra.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedWeights {
    level: u64,
    /// `(λ, multiplicity)`, increasing in `λ`.
    entries: Vec<(i64, u64)>,
}

impl GradedWeights {
    pub fn new(level: u64, entries: Vec<(i64, u64)>) -> Result<Self> {
        if level == 0 {
            return Err(Error::InvalidInput("level must be at least 1".into()));
        }
        let mut merged: BTreeMap<i64, u64> = BTreeMap::new();
        for (lambda, mult) in entries {
            if mult == 0 {
                return Err(Error::InvalidInput(format!("zero multiplicity at weight {lambda}")));
            }
            if merged.insert(lambda, mult).is_some() {
                return Err(Error::InvalidInput(format!("weight {lambda} listed twice")));
            }
        }
        Ok(GradedWeights {
            level,
            entries: merged.into_iter().collect(),
        })
    }

    /// Histogram of a list of weights.
    pub fn from_weights(level: u64, weights: impl IntoIterator<Item = i64>) -> Result<Self> {
        let mut hist: BTreeMap<i64, u64> = BTreeMap::new();
        for w in weights {
            *hist.entry(w).or_default() += 1;
        }
        Self::new(level, hist.into_iter().collect())
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn entries(&self) -> &[(i64, u64)] {
        &self.entries
    }

    /// `N_m`.
    pub fn dimension(&self) -> u64 {
        self.entries.iter().map(|(_, k)| k).sum()
    }

    /// `w_m = Σ λ·mult`.
    pub fn total_weight(&self) -> BigInt {
        self.entries
            .iter()
            .map(|(l, k)| BigInt::from(*l) * BigInt::from(*k))
            .sum()
    }
}

/// Successive minima `λ_1 ≥ λ_2 ≥ …` in run-length form.
pub fn successive_minima(gw: &GradedWeights) -> Result<Vec<(i64, u64)>> {
    if gw.entries.is_empty() {
        return Err(Error::InvalidInput("no weights".into()));
    }
    Ok(gw.entries.iter().rev().copied().collect())
}

/// `(1/N_m) Σ mult · δ_{λ/m}`.
pub fn scaled_weight_measure(gw: &GradedWeights) -> Result<PPMeasure> {
    let n = gw.dimension();
    if n == 0 {
        return Err(Error::InvalidInput("no weights".into()));
    }
    let m = Rat::from_integer(gw.level.into());
    let n = Rat::from_integer(n.into());
    let atoms = gw
        .entries
        .iter()
        .map(|(l, k)| {
            (
                Rat::from_integer((*l).into()) / &m,
                Rat::from_integer((*k).into()) / &n,
            )
        })
        .collect();
    PPMeasure::new(atoms, Vec::new())
}

/// `λ_max^{(m)} / m`.
pub fn scaled_lambda_max(gw: &GradedWeights) -> Result<Rat> {
    let (top, _) = *gw
        .entries
        .last()
        .ok_or_else(|| Error::InvalidInput("no weights".into()))?;
    Ok(Rat::from_integer(top.into()) / Rat::from_integer(gw.level.into()))
}
