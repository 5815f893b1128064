use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::FunctionalReport;
use crate::convex::LatticePolytope;
use crate::error::{Error, Result};
use crate::exactnum::{fmt_rat, interpolate, pow, serde_rat, serde_rat_opt, Rat};
use crate::testconfig::{random_metric, PairClass, ToricMetric, ToricPair};

/// `c_n = 2nⁿ/(n+1)^{n+1}`.
pub fn l1_lower_constant(n: usize) -> Rat {
    let n32 = n as u32;
    let nr = Rat::from_integer((n as i64).into());
    Rat::from_integer(2.into()) * pow(&nr, n32) / pow(&(nr + Rat::from_integer(1.into())), n32 + 1)
}

/// Violated inequalities among those that hold for every positive metric:
/// `J/n ≤ I − J ≤ nJ`, `c_n J ≤ ‖·‖₁ ≤ 2J`, `M ≤ DF`, `H ≥ 0` for lc
/// pairs, and `D ≤ J`, `D ≤ M` when the Ding functional is defined.
pub fn check_inequalities(r: &FunctionalReport, class: PairClass) -> Vec<String> {
    let n = r.metric.dim();
    let nr = Rat::from_integer((n as i64).into());
    let mut bad = Vec::new();
    let mut check = |ok: bool, what: &str| {
        if !ok {
            bad.push(what.to_string());
        }
    };
    let i_minus_j = &r.i - &r.j;
    check(&r.j / &nr <= i_minus_j, "J/n <= I - J");
    check(i_minus_j <= &nr * &r.j, "I - J <= nJ");
    check(l1_lower_constant(n) * &r.j <= r.l1, "c_n J <= L1");
    check(r.l1 <= Rat::from_integer(2.into()) * &r.j, "L1 <= 2J");
    check(r.mabuchi <= r.df, "M <= DF");
    if class != PairClass::NotLc {
        check(r.entropy >= Rat::zero(), "H >= 0 (lc pair)");
    }
    if let Some(d) = &r.ding {
        check(d.d <= r.j, "D <= J");
        check(d.d <= r.mabuchi, "D <= M");
    }
    bad
}

/// Leading monomial `coefficient·ε^exponent` of a functional along a family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeadingTerm {
    pub exponent: Option<usize>,
    #[serde(with = "serde_rat_opt")]
    pub coefficient: Option<Rat>,
    /// The interpolating polynomial also predicts a held-out grid point.
    pub confirmed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyFit {
    pub name: String,
    pub leading: LeadingTerm,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub dim: usize,
    #[serde(with = "crate::exactnum::serde_rat_vec")]
    pub grid: Vec<Rat>,
    pub reports: Vec<FunctionalReport>,
    pub fits: Vec<FamilyFit>,
}

impl FamilyReport {
    pub fn fit(&self, name: &str) -> Option<&LeadingTerm> {
        self.fits.iter().find(|f| f.name == name).map(|f| &f.leading)
    }

    /// Compares the fitted leading coefficient of `M` against the two
    /// candidates `n/V` and `(n+1)/V`, with the weight-fit `DF` as referee.
    pub fn mabuchi_leading(&self) -> Option<MabuchiLeading> {
        let m = self.fit("M")?;
        let df = self.fit("DF")?;
        let v = self.reports.first()?.volume.clone();
        let n = Rat::from_integer((self.dim as i64).into());
        let coefficient = m.coefficient.clone()?;
        let n_over_v = &n / &v;
        let n_plus_one_over_v = (&n + Rat::from_integer(1.into())) / &v;
        Some(MabuchiLeading {
            exponent: m.exponent?,
            matches_n: coefficient == n_over_v,
            matches_n_plus_one: coefficient == n_plus_one_over_v,
            df_agrees: df.exponent == m.exponent && df.coefficient.as_ref() == Some(&coefficient),
            coefficient,
            n_over_v,
            n_plus_one_over_v,
        })
    }
}

/// Leading coefficient of `M` along the point blow-up family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MabuchiLeading {
    pub exponent: usize,
    #[serde(with = "serde_rat")]
    pub coefficient: Rat,
    #[serde(with = "serde_rat")]
    pub n_over_v: Rat,
    #[serde(with = "serde_rat")]
    pub n_plus_one_over_v: Rat,
    pub matches_n: bool,
    pub matches_n_plus_one: bool,
    pub df_agrees: bool,
}

/// `ε = 1/2, 1/3, …, 1/16`. Enough points to pin the `L¹` and `L²` norms in
/// dimension 2, whose values are polynomials of degree 9 in `ε`.
pub fn default_epsilon_grid() -> Vec<Rat> {
    (2..=16).map(|k| Rat::new(1.into(), k.into())).collect()
}

fn leading_term(points: &[(Rat, Rat)]) -> Result<LeadingTerm> {
    let poly = interpolate(points)?;
    let (held, rest) = points.split_last().expect("nonempty grid");
    let confirmed = interpolate(rest)?.eval(&held.0) == held.1;
    Ok(match poly.lowest_term() {
        Some((k, c)) => LeadingTerm {
            exponent: Some(k),
            coefficient: Some(c),
            confirmed,
        },
        None => LeadingTerm {
            exponent: None,
            coefficient: None,
            confirmed,
        },
    })
}

/// Full reports along `ε ↦ min(0, ℓ_{v₀} − ε)` and the leading monomial of
/// each functional in `ε`, from exact interpolation over the grid.
pub fn epsilon_family_asymptotics(
    p: &LatticePolytope,
    pair: &ToricPair,
    vertex: &[Rat],
    grid: &[Rat],
) -> Result<FamilyReport> {
    if grid.len() < 4 {
        return Err(Error::InvalidInput("need at least 4 grid values".into()));
    }
    let reports: Vec<FunctionalReport> = grid
        .par_iter()
        .map(|eps| {
            let phi = ToricMetric::deformation_to_normal_cone(p.clone(), vertex, eps)?;
            FunctionalReport::compute(&phi, pair)
        })
        .collect::<Result<_>>()?;
    type Getter = fn(&FunctionalReport) -> Rat;
    let getters: [(&str, Getter); 9] = [
        ("M", |r| r.mabuchi.clone()),
        ("DF", |r| r.df.clone()),
        ("H", |r| r.entropy.clone()),
        ("R", |r| r.ricci.clone()),
        ("E", |r| r.energy.clone()),
        ("I", |r| r.i.clone()),
        ("J", |r| r.j.clone()),
        ("L1", |r| r.l1.clone()),
        ("L2^2", |r| r.l2_squared.clone()),
    ];
    let fits = getters
        .iter()
        .map(|(name, get)| {
            let pts: Vec<(Rat, Rat)> = grid.iter().cloned().zip(reports.iter().map(get)).collect();
            Ok(FamilyFit {
                name: name.to_string(),
                leading: leading_term(&pts)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(FamilyReport {
        dim: p.dim(),
        grid: grid.to_vec(),
        reports,
        fits,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRow {
    pub index: usize,
    pub report: FunctionalReport,
    pub violations: Vec<String>,
    pub delta_violations: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanReport {
    #[serde(with = "serde_rat")]
    pub delta: Rat,
    pub rows: Vec<ScanRow>,
    #[serde(with = "serde_rat_opt")]
    pub min_m_over_j: Option<Rat>,
    #[serde(with = "serde_rat_opt")]
    pub min_h_over_i: Option<Rat>,
    #[serde(with = "serde_rat_opt")]
    pub min_d_over_j: Option<Rat>,
}

impl ScanReport {
    pub fn violation_count(&self) -> usize {
        self.rows.iter().map(|r| r.violations.len()).sum()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,function,E,I,J,L1,H,M,DF,D,violations,delta_violations\n");
        for row in &self.rows {
            let r = &row.report;
            let d = r.ding.as_ref().map(|d| fmt_rat(&d.d)).unwrap_or_default();
            out.push_str(&format!(
                "{},\"{}\",{},{},{},{},{},{},{},{},\"{}\",\"{}\"\n",
                row.index,
                r.metric.function(),
                r.energy,
                r.i,
                r.j,
                r.l1,
                r.entropy,
                r.mabuchi,
                r.df,
                d,
                row.violations.join("; "),
                row.delta_violations.join("; "),
            ));
        }
        out
    }
}

fn min_ratio<'a>(pairs: impl Iterator<Item = (&'a Rat, &'a Rat)>) -> Option<Rat> {
    pairs
        .filter(|(_, den)| !den.is_zero())
        .map(|(num, den)| num / den)
        .min()
}

/// Reports on `samples` random metrics on `p`, with the universal
/// inequalities checked and the user-supplied `δ` tested in `M ≥ δJ` and
/// `H ≥ δI ≥ (δ/n)J`. Deterministic in `seed`.
pub fn coercivity_scan(pair: &ToricPair, p: &LatticePolytope, delta: &Rat, samples: usize, seed: u64) -> Result<ScanReport> {
    pair.check_matches(p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let metrics: Vec<ToricMetric> = (0..samples).map(|_| random_metric(&mut rng, p)).collect();
    let class = pair.classify();
    let n = Rat::from_integer((p.dim() as i64).into());
    let rows: Vec<ScanRow> = metrics
        .par_iter()
        .enumerate()
        .map(|(index, phi)| {
            let report = FunctionalReport::compute(phi, pair)?;
            let violations = check_inequalities(&report, class);
            let mut delta_violations = Vec::new();
            if report.mabuchi < delta * &report.j {
                delta_violations.push("M >= delta J".to_string());
            }
            if report.entropy < delta * &report.i || delta * &report.i < delta * &report.j / &n {
                delta_violations.push("H >= delta I >= (delta/n) J".to_string());
            }
            Ok(ScanRow {
                index,
                report,
                violations,
                delta_violations,
            })
        })
        .collect::<Result<_>>()?;
    Ok(ScanReport {
        min_m_over_j: min_ratio(rows.iter().map(|r| (&r.report.mabuchi, &r.report.j))),
        min_h_over_i: min_ratio(rows.iter().map(|r| (&r.report.entropy, &r.report.i))),
        min_d_over_j: min_ratio(
            rows.iter()
                .filter_map(|r| r.report.ding.as_ref().map(|d| (&d.d, &r.report.j))),
        ),
        rows,
        delta: delta.clone(),
    })
}
