//! Intersection numbers and the non-Archimedean functionals of toric metrics.

mod energy;
mod intersection;
mod pairfns;
mod scan;

pub use energy::{
    df_fit_raw, df_weight_fit, energy, energy_chain, energy_routes, i_j_norms, DfFit,
    EnergyRoutes, Norms,
};
pub use intersection::{intersection_number, intersection_with_divisor};
pub use pairfns::{
    boundary_df_term, classify_pair, ding, dominating_components, entropy, error_term,
    find_destabilizer, log_donaldson_futaki, mabuchi, ricci_energy, s_bar, toric_log_discrepancy, Destabilizer, Ding,
};
pub use scan::{
    check_inequalities, coercivity_scan, default_epsilon_grid, epsilon_family_asymptotics, l1_lower_constant, FamilyFit,
    FamilyReport, LeadingTerm, MabuchiLeading, ScanReport, ScanRow,
};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{serde_rat, serde_rat_vec, Rat};
use crate::testconfig::{ToricMetric, ToricPair};

/// All scalar invariants of one metric on one pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionalReport {
    pub metric: ToricMetric,
    #[serde(with = "serde_rat_vec")]
    pub boundary: Vec<Rat>,
    #[serde(with = "serde_rat")]
    pub volume: Rat,
    #[serde(with = "serde_rat")]
    pub s_bar: Rat,
    #[serde(with = "serde_rat")]
    pub lambda_max: Rat,
    #[serde(with = "serde_rat")]
    pub lambda_min: Rat,
    #[serde(with = "serde_rat")]
    pub energy: Rat,
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
    #[serde(with = "serde_rat")]
    pub f0: Rat,
    #[serde(with = "serde_rat")]
    pub f1: Rat,
    /// Log Donaldson–Futaki invariant `DF_B`; `−2F₁` when `B = 0`.
    #[serde(with = "serde_rat")]
    pub df: Rat,
    #[serde(with = "serde_rat")]
    pub entropy: Rat,
    #[serde(with = "serde_rat")]
    pub ricci: Rat,
    #[serde(with = "serde_rat")]
    pub mabuchi: Rat,
    #[serde(with = "serde_rat")]
    pub error_term: Rat,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ding: Option<Ding>,
}

impl FunctionalReport {
    /// Computes every invariant and checks the internal identities: the
    /// three energy routes, `F₀ = E`, `J ≥ 0`, `DF − M ≥ 0` with equality
    /// for reduced central fibers, and `M = H + R + S̄·E`.
    pub fn compute(phi: &ToricMetric, pair: &ToricPair) -> Result<Self> {
        pair.check_matches(phi.polytope())?;
        let e = energy(phi)?;
        let norms = i_j_norms(phi)?;
        if norms.j < Rat::zero() {
            return Err(Error::violation("J >= 0", format!("J = {}", norms.j)));
        }
        let fit = df_weight_fit(phi)?;
        let h = entropy(phi, pair)?;
        let r = ricci_energy(phi, pair)?;
        let sb = s_bar(phi, pair)?;
        let m = &h + &r + &sb * &e;
        let df = &fit.df + boundary_df_term(phi, pair)?;
        let err = &df - &m;
        if err < Rat::zero() {
            return Err(Error::violation("M <= DF", format!("DF {df} < M {m}")));
        }
        let reduced = phi.components(pair)?.iter().all(|c| c.b == 1);
        if reduced && !err.is_zero() {
            return Err(Error::violation(
                "DF = M for reduced central fiber",
                format!("DF {df} vs M {m}"),
            ));
        }
        let ding = match ding(phi, pair) {
            Ok(d) => Some(d),
            Err(Error::NotAnticanonical) => None,
            Err(e) => return Err(e),
        };
        Ok(FunctionalReport {
            metric: phi.clone(),
            boundary: pair.coeffs().to_vec(),
            volume: phi.volume_v(),
            s_bar: sb,
            lambda_max: phi.lambda_max(),
            lambda_min: phi.lambda_min(),
            energy: e,
            i: norms.i,
            j: norms.j,
            l1: norms.l1,
            l2_squared: norms.l2_squared,
            linf: norms.linf,
            f0: fit.f0,
            f1: fit.f1,
            df,
            entropy: h,
            ricci: r,
            mabuchi: m,
            error_term: err,
            ding,
        })
    }

    /// The pair recorded in the report.
    pub fn pair(&self) -> Result<ToricPair> {
        ToricPair::new(self.metric.polytope(), self.boundary.clone())
    }

    /// Plain-text rendering, one `name = value` per line.
    pub fn to_text(&self) -> String {
        let mut rows: Vec<(&str, &Rat)> = vec![
            ("V", &self.volume),
            ("S_bar", &self.s_bar),
            ("lambda_max", &self.lambda_max),
            ("lambda_min", &self.lambda_min),
            ("E", &self.energy),
            ("I", &self.i),
            ("J", &self.j),
            ("L1", &self.l1),
            ("L2^2", &self.l2_squared),
            ("Linf", &self.linf),
            ("F0", &self.f0),
            ("F1", &self.f1),
            ("DF", &self.df),
            ("H", &self.entropy),
            ("R", &self.ricci),
            ("M", &self.mabuchi),
            ("DF-M", &self.error_term),
        ];
        if let Some(d) = &self.ding {
            rows.push(("Ding L", &d.l));
            rows.push(("Ding D", &d.d));
        }
        let mut out = format!("metric = {}\n", self.metric.function());
        for (name, v) in rows {
            out.push_str(&format!("{name} = {v}\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};
    use crate::testconfig::{anticanonical_polytope, catalog_metric, PairClass};

    fn report(name: &str) -> FunctionalReport {
        let phi = catalog_metric(name, None).unwrap();
        let pair = ToricPair::trivial(phi.polytope());
        FunctionalReport::compute(&phi, &pair).unwrap()
    }

    #[test]
    fn flagship() {
        let r = report("pn-blowup:1,1/2");
        assert_eq!(r.df, rat(1, 4));
        assert_eq!(r.mabuchi, rat(1, 4));
        assert_eq!(r.entropy, rat(1, 2));
        assert_eq!(r.ricci, int(0));
        assert_eq!(r.s_bar, int(2));
        assert_eq!(r.energy, rat(-1, 8));
        assert_eq!(r.lambda_max, int(0));
        assert_eq!(r.j, rat(1, 8));
        assert_eq!(r.i, rat(1, 4));
        assert_eq!(r.l1, rat(9, 64));
        assert_eq!(r.linf, rat(3, 8));
        assert_eq!(r.f0, rat(-1, 8));
        assert_eq!(r.f1, rat(-1, 8));
        assert!(r.ding.is_none());
        assert!(check_inequalities(&r, PairClass::Klt).is_empty());
    }

    #[test]
    fn one_parameter_subgroup() {
        for d in 1..4 {
            let r = report(&format!("p1-onePS:{d}"));
            assert_eq!(r.ricci, int(-2 * d));
            assert_eq!(r.entropy, int(d));
            assert_eq!(r.mabuchi, int(0));
            assert_eq!(r.df, int(0));
            assert_eq!(r.j, rat(d, 2));
            assert_eq!(r.i, int(d));
            assert_eq!(r.l1, rat(d, 4));
            assert_eq!(r.l1, l1_lower_constant(1) * &r.j);
        }
    }

    #[test]
    fn trivial_is_zero() {
        let r = report("trivial:3");
        assert_eq!(r.energy, int(3));
        for v in [&r.i, &r.j, &r.l1, &r.df, &r.entropy, &r.mabuchi] {
            assert!(v.is_zero());
        }
    }

    #[test]
    fn ding_on_anticanonical_segment() {
        let p = anticanonical_polytope("p1").unwrap();
        let pair = ToricPair::trivial(&p);
        let f = crate::convex::PLFunction::new(vec![
            crate::convex::AffinePiece::new(vec![int(0)], int(0)),
            crate::convex::AffinePiece::new(vec![int(1)], rat(-1, 2)),
        ])
        .unwrap();
        let phi = ToricMetric::new(p.clone(), f).unwrap();
        let r = FunctionalReport::compute(&phi, &pair).unwrap();
        let d = r.ding.unwrap();
        assert_eq!(d.l, int(0));
        assert_eq!(r.energy, rat(-1, 16));
        assert_eq!(d.d, rat(1, 16));
        assert_eq!(r.j, rat(1, 16));

        let phi = ToricMetric::from_one_ps(p, vec![int(2)], int(0)).unwrap();
        let r = FunctionalReport::compute(&phi, &pair).unwrap();
        let d = r.ding.unwrap();
        assert_eq!(d.l, int(2));
        assert_eq!(d.d, int(0));
        assert_eq!(r.mabuchi, int(0));
    }

    #[test]
    fn boundary_pairs_keep_df_equal_to_m_on_reduced_fibers() {
        let p = crate::testconfig::catalog_polytope("simplex:2").unwrap();
        let phi = ToricMetric::deformation_to_normal_cone(p.clone(), &[int(0), int(0)], &rat(1, 2)).unwrap();
        for b in [int(1), rat(1, 2), rat(3, 2)] {
            let pair = ToricPair::new(&p, vec![b, int(0), int(0)]).unwrap();
            let r = FunctionalReport::compute(&phi, &pair).unwrap();
            assert_eq!(r.df, r.mabuchi);
            assert_eq!(r.df, log_donaldson_futaki(&phi, &pair).unwrap());
            let shifted = FunctionalReport::compute(&phi.translate(&int(2)), &pair).unwrap();
            assert_eq!(shifted.df, r.df);
        }
    }

    #[test]
    fn json_round_trip() {
        let r = report("pn-blowup:1,1/2");
        let back: FunctionalReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(back, r);
        let again = FunctionalReport::compute(&back.metric, &back.pair().unwrap()).unwrap();
        assert_eq!(again, r);
    }
}
