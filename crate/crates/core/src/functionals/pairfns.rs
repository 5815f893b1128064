use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::energy::{df_weight_fit, energy};
use super::intersection::intersection_with_divisor;
use crate::convex::{AffinePiece, LatticePolytope, PLFunction};
use crate::error::{Error, Result};
use crate::exactnum::{serde_rat, Rat};
use crate::testconfig::{ComponentData, PairClass, ToricMetric, ToricPair};

/// `A_{(X,B)}` of the toric valuation with weight `w`.
pub fn toric_log_discrepancy(pair: &ToricPair, w: &[Rat]) -> Result<Rat> {
    pair.log_discrepancy(w)
}

pub fn classify_pair(pair: &ToricPair) -> PairClass {
    pair.classify()
}

/// Components of the dominating model: the linearity cells plus the strict
/// transform `E₀` of `X × {0}` (trivial valuation, `A = 0`, value `λ_max`),
/// which carries mass only when it is itself a cell.
pub fn dominating_components(phi: &ToricMetric, pair: &ToricPair) -> Result<Vec<ComponentData>> {
    let mut comps = phi.components(pair)?;
    if !comps.iter().any(|c| c.trivial) {
        let n = phi.dim();
        comps.push(ComponentData {
            piece: AffinePiece::new(vec![Rat::zero(); n], phi.lambda_max()),
            joint_normal: {
                let mut v = vec![0; n];
                v.push(1);
                v
            },
            b: 1,
            valuation_weight: vec![Rat::zero(); n],
            mass: Rat::zero(),
            log_discrepancy: Rat::zero(),
            phi_value: phi.lambda_max(),
            trivial: true,
        });
    }
    Ok(comps)
}

/// `H_B(φ) = Σ_E A(v_E)·mass_E`.
pub fn entropy(phi: &ToricMetric, pair: &ToricPair) -> Result<Rat> {
    Ok(phi
        .components(pair)?
        .iter()
        .map(|c| &c.log_discrepancy * &c.mass)
        .sum())
}

/// `S̄_B = n V^{-1} (−K_{(X,B)} · L^{n−1})`, from facet lattice volumes and
/// cross-checked against the intersection engine.
pub fn s_bar(phi: &ToricMetric, pair: &ToricPair) -> Result<Rat> {
    let p = phi.polytope();
    pair.check_matches(p)?;
    let anti = pair.anticanonical_coeffs();
    let mut total = Rat::zero();
    for (f, a) in p.facets().iter().zip(&anti) {
        total += a * p.facet_lattice_volume(f)?;
    }
    let by_facets = total / p.volume();
    // Each unit shift of a slot contributes one copy of (K · L^{n-1}), so
    // S̄ = −R(φ_triv + 1).
    let shifted = ToricMetric::trivial(p.clone(), Rat::one())?;
    let by_intersection = -ricci_energy(&shifted, pair)?;
    if by_facets != by_intersection {
        return Err(Error::violation(
            "S_bar facet route = intersection route",
            format!("{by_facets} vs {by_intersection}"),
        ));
    }
    Ok(by_facets)
}

/// `R_B(φ) = V^{-1} (ψ_triv · φ^n)`, `ψ_triv` the trivial metric on `K_{(X,B)}`.
pub fn ricci_energy(phi: &ToricMetric, pair: &ToricPair) -> Result<Rat> {
    let n = phi.dim();
    let k = pair.canonical_coeffs();
    let slots: Vec<&ToricMetric> = vec![phi; n];
    Ok(intersection_with_divisor(pair, &k, &slots)? / phi.volume_v())
}

/// Chen–Tian assembly `M = H + R + S̄·E`.
pub fn mabuchi(phi: &ToricMetric, pair: &ToricPair) -> Result<Rat> {
    Ok(entropy(phi, pair)? + ricci_energy(phi, pair)? + s_bar(phi, pair)? * energy(phi)?)
}

/// Boundary part of the log Donaldson–Futaki invariant:
/// `DF_B − DF = V^{-1}(B̄ · L̄^n) + (S̄_B − S̄)·E`, where `B̄` is the closure of
/// `B × C^*`. Torically `(B̄ · L̄^n) = n! Σ_ρ b_ρ ∫_{F_ρ} f dσ`.
pub fn boundary_df_term(phi: &ToricMetric, pair: &ToricPair) -> Result<Rat> {
    let p = phi.polytope();
    pair.check_matches(p)?;
    let f = phi.function();
    let mut face_integrals = Rat::zero();
    let mut face_volumes = Rat::zero();
    for (idx, (facet, b)) in p.facets().iter().zip(pair.coeffs()).enumerate() {
        if b.is_zero() {
            continue;
        }
        face_integrals += b * f.integrate_over_facet(p, idx)?;
        face_volumes += b * p.facet_lattice_volume(facet)?;
    }
    Ok((face_integrals - face_volumes * energy(phi)?) / p.volume())
}

/// `DF_B`: the weight-fit `DF` of `(X, L)` plus [`boundary_df_term`].
pub fn log_donaldson_futaki(phi: &ToricMetric, pair: &ToricPair) -> Result<Rat> {
    Ok(df_weight_fit(phi)?.df + boundary_df_term(phi, pair)?)
}

/// `DF_B − M_B`, which must be nonnegative.
pub fn error_term(phi: &ToricMetric, pair: &ToricPair) -> Result<Rat> {
    let err = log_donaldson_futaki(phi, pair)? - mabuchi(phi, pair)?;
    if err < Rat::zero() {
        return Err(Error::violation("M <= DF", format!("DF - M = {err}")));
    }
    Ok(err)
}

/// Ding functionals `(L, D)`, defined when `L = −K_{(X,B)}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ding {
    #[serde(with = "serde_rat")]
    pub l: Rat,
    #[serde(with = "serde_rat")]
    pub d: Rat,
}

pub fn ding(phi: &ToricMetric, pair: &ToricPair) -> Result<Ding> {
    pair.anticanonical_translation(phi.polytope())?;
    let l = dominating_components(phi, pair)?
        .iter()
        .map(|c| &c.log_discrepancy + &c.phi_value)
        .min()
        .expect("at least one component");
    let d = &l - energy(phi)?;
    Ok(Ding { l, d })
}

/// A metric witnessing the failure of klt-ness, with its entropy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Destabilizer {
    pub metric: ToricMetric,
    /// Index of the ray the metric degenerates toward.
    pub ray: usize,
    pub entropy: Rat,
}

/// For a pair that is not klt, the metric `min(0, ℓ_ρ − ε)` toward a ray
/// with `1 − b_ρ < 0` (not lc) or `= 0` (lc, not klt); `None` for klt pairs.
pub fn find_destabilizer(pair: &ToricPair, p: &LatticePolytope) -> Result<Option<Destabilizer>> {
    pair.check_matches(p)?;
    let anti = pair.anticanonical_coeffs();
    let ray = match pair.classify() {
        PairClass::Klt => return Ok(None),
        PairClass::NotLc => anti.iter().position(|a| *a < Rat::zero()),
        PairClass::LcNotKlt => anti.iter().position(|a| a.is_zero()),
    }
    .expect("classification found an offending ray");
    let facet = &p.facets()[ray];
    let ell = AffinePiece::new(facet.normal_rat(), -facet.offset.clone());
    let reach = p
        .vertices()
        .iter()
        .map(|v| ell.eval(v))
        .filter(|x| !x.is_zero())
        .min()
        .expect("polytope is full-dimensional");
    let eps = reach / Rat::from_integer(2.into());
    let n = p.dim();
    let f = PLFunction::new(vec![
        AffinePiece::new(vec![Rat::zero(); n], Rat::zero()),
        AffinePiece::new(ell.a.clone(), &ell.c - &eps),
    ])?;
    let metric = ToricMetric::new(p.clone(), f)?;
    let h = entropy(&metric, pair)?;
    Ok(Some(Destabilizer {
        metric,
        ray,
        entropy: h,
    }))
}
