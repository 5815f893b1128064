use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::intersection::intersection_number;
use crate::error::{Error, Result};
use crate::exactnum::{expand_at_infinity, fit_eventual_polynomial, serde_rat, Rat, UniPoly};
use crate::measures::LpExponent;
use crate::testconfig::ToricMetric;

fn trivial_on(phi: &ToricMetric) -> ToricMetric {
    ToricMetric::trivial(phi.polytope().clone(), Rat::zero()).expect("trivial metric is valid")
}

/// `(φ^{j+1} · φ_triv^{n−j})` for `j = 0..=n`.
fn mixed_powers(phi: &ToricMetric) -> Result<Vec<Rat>> {
    let n = phi.dim();
    let triv = trivial_on(phi);
    (0..=n)
        .map(|j| {
            let mut slots: Vec<&ToricMetric> = vec![phi; j + 1];
            slots.extend(std::iter::repeat_n(&triv, n - j));
            intersection_number(&slots)
        })
        .collect()
}

/// `((φ − φ_triv) · φ^j · φ_triv^{n−j})` for `j = 0..=n`; non-increasing in
/// `j` for positive metrics.
pub fn energy_chain(phi: &ToricMetric) -> Result<Vec<Rat>> {
    let n = phi.dim();
    let triv = trivial_on(phi);
    let mut with_triv: Vec<Rat> = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let mut slots: Vec<&ToricMetric> = vec![phi; j];
        slots.extend(std::iter::repeat_n(&triv, n + 1 - j));
        with_triv.push(intersection_number(&slots)?);
    }
    let powers = mixed_powers(phi)?;
    Ok(powers.iter().zip(&with_triv).map(|(a, b)| a - b).collect())
}

/// The three evaluations of the Monge–Ampère energy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnergyRoutes {
    pub barycenter: Rat,
    pub integral: Rat,
    pub intersection: Rat,
}

pub fn energy_routes(phi: &ToricMetric) -> Result<EnergyRoutes> {
    let p = phi.polytope();
    let n = phi.dim();
    let barycenter = phi.dh_exact()?.barycenter();
    let integral = phi.function().integrate(p)? / p.volume();
    let top = intersection_number(&vec![phi; n + 1])?;
    let intersection = top / (Rat::from_integer((n as i64 + 1).into()) * phi.volume_v());
    Ok(EnergyRoutes {
        barycenter,
        integral,
        intersection,
    })
}

/// `E(φ)`; the three routes must agree exactly.
pub fn energy(phi: &ToricMetric) -> Result<Rat> {
    let r = energy_routes(phi)?;
    if r.barycenter != r.integral || r.integral != r.intersection {
        return Err(Error::violation(
            "three-route energy",
            format!(
                "barycenter {} / integral {} / intersection {}",
                r.barycenter, r.integral, r.intersection
            ),
        ));
    }
    Ok(r.barycenter)
}

/// `I`, `J` and the central norms of the DH measure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Norms {
    #[serde(with = "serde_rat")]
    pub i: Rat,
    #[serde(with = "serde_rat")]
    pub j: Rat,
    #[serde(with = "serde_rat")]
    pub l1: Rat,
    #[serde(with = "serde_rat")]
    pub l2_squared: Rat,
    #[serde(with = "serde_rat")]
    pub linf: Rat,
}

pub fn i_j_norms(phi: &ToricMetric) -> Result<Norms> {
    let n = phi.dim();
    let v = phi.volume_v();
    let e = energy(phi)?;
    let lmax = phi.lambda_max();
    let powers = mixed_powers(phi)?;
    // (φ · φ_triv^n) = V·λ_max
    if powers[0] != &v * &lmax {
        return Err(Error::violation(
            "(phi . phi_triv^n) = V lambda_max",
            format!("{} vs {}", powers[0], &v * &lmax),
        ));
    }
    let triv = trivial_on(phi);
    let mut slots: Vec<&ToricMetric> = vec![&triv];
    slots.extend(std::iter::repeat_n(phi, n));
    let triv_phi_n = intersection_number(&slots)?;
    let i = &lmax - (&powers[n] - triv_phi_n) / &v;
    let dh = phi.dh_exact()?;
    let l1 = dh.central_lp_norm(LpExponent::Finite(1))?.pth_power.unwrap();
    let l2_squared = dh.central_lp_norm(LpExponent::Finite(2))?.pth_power.unwrap();
    let linf = dh.central_lp_norm(LpExponent::Infinity)?.norm.unwrap();
    Ok(Norms {
        i,
        j: lmax - e,
        l1,
        l2_squared,
        linf,
    })
}

/// Expansion `w_m/(m N_m) = F₀ + F₁/m + …` and `DF = −2F₁`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DfFit {
    pub weight_poly: UniPoly,
    pub dimension_poly: UniPoly,
    pub f0: Rat,
    pub f1: Rat,
    pub df: Rat,
}

/// Number of sampled levels beyond the minimum a fit of degree `d` needs.
const EXTRA_SAMPLES: usize = 3;

/// Fits `w_m` and `N_m` along `m ∈ N₀·Z` and expands their ratio.
pub fn df_fit_raw(phi: &ToricMetric) -> Result<DfFit> {
    let n = phi.dim();
    let step = phi.n0();
    let count = n + 3 + EXTRA_SAMPLES;
    let mut w: BTreeMap<u64, Rat> = BTreeMap::new();
    let mut nm: BTreeMap<u64, Rat> = BTreeMap::new();
    let levels: Vec<u64> = (1..=count as u64).map(|k| k * step).collect();
    let data: Vec<(u64, Rat, Rat)> = {
        use rayon::prelude::*;
        levels
            .par_iter()
            .map(|&m| {
                let gw = phi.filtration_of(m)?;
                Ok((
                    m,
                    Rat::from_integer(gw.total_weight()),
                    Rat::from_integer(gw.dimension().into()),
                ))
            })
            .collect::<Result<_>>()?
    };
    for (m, a, b) in data {
        w.insert(m, a);
        nm.insert(m, b);
    }
    let wfit = fit_eventual_polynomial(&w, n + 1, step)?;
    let nfit = fit_eventual_polynomial(&nm, n, step)?;
    let m_times_n = &UniPoly::monomial(Rat::from_integer(1.into()), 1) * &nfit.poly;
    let (e, s) = expand_at_infinity(&wfit.poly, &m_times_n, 4)?;
    if e > 0 {
        return Err(Error::violation(
            "w_m/(m N_m) bounded",
            format!("ratio grows like m^{e}"),
        ));
    }
    let coeff = |j: i64| -> Rat {
        let k = j + e;
        if k >= 0 && (k as usize) < s.len() {
            s[k as usize].clone()
        } else {
            Rat::zero()
        }
    };
    let f0 = coeff(0);
    let f1 = coeff(1);
    let df = Rat::from_integer((-2).into()) * &f1;
    Ok(DfFit {
        weight_poly: wfit.poly,
        dimension_poly: nfit.poly,
        f0,
        f1,
        df,
    })
}

/// `(F₀, F₁, DF)`, with the check `F₀ = E`.
pub fn df_weight_fit(phi: &ToricMetric) -> Result<DfFit> {
    let fit = df_fit_raw(phi)?;
    let e = energy(phi)?;
    if fit.f0 != e {
        return Err(Error::violation("F0 = E", format!("F0 {} vs E {}", fit.f0, e)));
    }
    Ok(fit)
}

