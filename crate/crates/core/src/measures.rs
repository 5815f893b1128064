//! Compactly supported measures on the rational line: finitely many atoms plus
//! a piecewise-polynomial density on half-open intervals `[lo, hi)`.
//!
//! Tails are `μ{x ≥ λ}`, which is the left-continuous convention used by
//! filtrations. All integrals are exact.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{fmt_rat, pow, serde_rat, serde_rat_vec, Rat, UniPoly};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Atom {
    #[serde(with = "serde_rat")]
    pub location: Rat,
    #[serde(with = "serde_rat")]
    pub mass: Rat,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityPiece {
    pub lo: Rat,
    pub hi: Rat,
    pub density: UniPoly,
}

impl DensityPiece {
    pub fn mass(&self) -> Rat {
        self.density.integrate(&self.lo, &self.hi)
    }
}

#[derive(Serialize, Deserialize)]
struct PieceRepr {
    #[serde(with = "serde_rat")]
    lo: Rat,
    #[serde(with = "serde_rat")]
    hi: Rat,
    #[serde(with = "serde_rat_vec")]
    density: Vec<Rat>,
}

impl Serialize for DensityPiece {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PieceRepr {
            lo: self.lo.clone(),
            hi: self.hi.clone(),
            density: self.density.coeffs().to_vec(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DensityPiece {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = PieceRepr::deserialize(d)?;
        Ok(DensityPiece {
            lo: r.lo,
            hi: r.hi,
            density: UniPoly::from_coeffs(r.density),
        })
    }
}

/// Exponent of a central norm: a positive integer or `∞`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpExponent {
    Finite(u32),
    Infinity,
}

/// `pth_power` is `∫|λ-λ̄|^p dμ`; `norm` is the norm itself when it is
/// rational by construction (p = 1 and p = ∞).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpNorm {
    pub pth_power: Option<Rat>,
    pub norm: Option<Rat>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PPMeasure {
    atoms: Vec<Atom>,
    pieces: Vec<DensityPiece>,
}

impl PPMeasure {
    /// Builds a measure, merging coincident atoms, dropping null parts and
    /// fusing adjacent pieces that carry the same density.
    pub fn new(atoms: Vec<(Rat, Rat)>, pieces: Vec<DensityPiece>) -> Result<Self> {
        let mut atoms: Vec<Atom> = atoms
            .into_iter()
            .map(|(location, mass)| Atom { location, mass })
            .collect();
        atoms.sort_by(|a, b| a.location.cmp(&b.location));
        let mut merged: Vec<Atom> = Vec::with_capacity(atoms.len());
        for a in atoms {
            match merged.last_mut() {
                Some(last) if last.location == a.location => last.mass += a.mass,
                _ => merged.push(a),
            }
        }
        merged.retain(|a| !a.mass.is_zero());

        let mut pieces: Vec<DensityPiece> = pieces
            .into_iter()
            .filter(|p| !p.density.is_zero())
            .collect();
        for p in &pieces {
            if p.lo >= p.hi {
                return Err(Error::InvalidInput(format!(
                    "empty density interval [{}, {})",
                    p.lo, p.hi
                )));
            }
        }
        pieces.sort_by(|a, b| a.lo.cmp(&b.lo));
        for w in pieces.windows(2) {
            if w[1].lo < w[0].hi {
                return Err(Error::InvalidInput("overlapping density intervals".into()));
            }
        }
        let mut fused: Vec<DensityPiece> = Vec::with_capacity(pieces.len());
        for p in pieces {
            match fused.last_mut() {
                Some(last) if last.hi == p.lo && last.density == p.density => last.hi = p.hi,
                _ => fused.push(p),
            }
        }
        Ok(PPMeasure {
            atoms: merged,
            pieces: fused,
        })
    }

    pub fn dirac(location: Rat) -> Self {
        PPMeasure {
            atoms: vec![Atom {
                location,
                mass: Rat::one(),
            }],
            pieces: Vec::new(),
        }
    }

    /// Normalized Lebesgue measure on `[lo, hi]`.
    pub fn uniform(lo: Rat, hi: Rat) -> Result<Self> {
        let density = UniPoly::constant(Rat::one() / (&hi - &lo));
        Self::new(Vec::new(), vec![DensityPiece { lo, hi, density }])
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn pieces(&self) -> &[DensityPiece] {
        &self.pieces
    }

    pub fn total_mass(&self) -> Rat {
        self.moment(0)
    }

    /// Exact `∫ λ^k dμ`.
    pub fn moment(&self, k: u32) -> Rat {
        let atoms: Rat = self
            .atoms
            .iter()
            .map(|a| &a.mass * pow(&a.location, k))
            .sum();
        let weight = UniPoly::monomial(Rat::one(), k as usize);
        let dens: Rat = self
            .pieces
            .iter()
            .map(|p| (&weight * &p.density).integrate(&p.lo, &p.hi))
            .sum();
        atoms + dens
    }

    /// `∫ λ dμ / μ(R)`.
    pub fn barycenter(&self) -> Rat {
        self.moment(1) / self.total_mass()
    }

    /// Smallest closed interval containing the support.
    pub fn support(&self) -> Option<(Rat, Rat)> {
        let lows = self
            .atoms
            .iter()
            .map(|a| &a.location)
            .chain(self.pieces.iter().map(|p| &p.lo));
        let highs = self
            .atoms
            .iter()
            .map(|a| &a.location)
            .chain(self.pieces.iter().map(|p| &p.hi));
        Some((lows.min()?.clone(), highs.max()?.clone()))
    }

    pub fn lambda_max(&self) -> Option<Rat> {
        self.support().map(|s| s.1)
    }

    pub fn lambda_min(&self) -> Option<Rat> {
        self.support().map(|s| s.0)
    }

    /// `Some(c)` if the measure is a single atom at `c`.
    pub fn dirac_location(&self) -> Option<Rat> {
        match (self.atoms.as_slice(), self.pieces.is_empty()) {
            ([a], true) => Some(a.location.clone()),
            _ => None,
        }
    }

    pub fn is_probability(&self) -> bool {
        self.total_mass().is_one()
    }

    fn require_probability(&self) -> Result<()> {
        if self.is_probability() {
            Ok(())
        } else {
            Err(Error::NotProbability(fmt_rat(&self.total_mass())))
        }
    }

    /// Central `L^p` norm of `λ - λ̄` for a probability measure.
    pub fn central_lp_norm(&self, p: LpExponent) -> Result<LpNorm> {
        self.require_probability()?;
        let bar = self.barycenter();
        match p {
            LpExponent::Infinity => {
                let (lo, hi) = self.support().expect("probability measure has support");
                let norm = (&hi - &bar).max(&bar - &lo);
                Ok(LpNorm {
                    pth_power: None,
                    norm: Some(norm),
                })
            }
            LpExponent::Finite(0) => Err(Error::InvalidInput("p must be >= 1".into())),
            LpExponent::Finite(p) => {
                let value = self.central_abs_moment(&bar, p);
                let norm = (p == 1).then(|| value.clone());
                Ok(LpNorm {
                    pth_power: Some(value),
                    norm,
                })
            }
        }
    }

    /// `∫ |λ - c|^p dμ`.
    pub fn central_abs_moment(&self, c: &Rat, p: u32) -> Rat {
        let atoms: Rat = self
            .atoms
            .iter()
            .map(|a| &a.mass * pow(&(&a.location - c).abs(), p))
            .sum();
        let above = UniPoly::linear(Rat::one(), -c.clone()).pow(p);
        let below = UniPoly::linear(-Rat::one(), c.clone()).pow(p);
        let mut dens = Rat::zero();
        for piece in &self.pieces {
            if &piece.lo < c {
                let top = (&piece.hi).min(c).clone();
                dens += (&below * &piece.density).integrate(&piece.lo, &top);
            }
            if &piece.hi > c {
                let bottom = (&piece.lo).max(c).clone();
                dens += (&above * &piece.density).integrate(&bottom, &piece.hi);
            }
        }
        atoms + dens
    }

    /// Image measure under `λ ↦ alpha·λ + beta`.
    pub fn pushforward_affine(&self, alpha: &Rat, beta: &Rat) -> Result<Self> {
        if alpha.is_zero() {
            return Err(Error::InvalidInput(
                "pushforward by a constant map; request the Dirac mass explicitly".into(),
            ));
        }
        let map = |x: &Rat| alpha * x + beta;
        let atoms = self
            .atoms
            .iter()
            .map(|a| (map(&a.location), a.mass.clone()))
            .collect();
        let inv_alpha = Rat::one() / alpha;
        let inv_beta = -beta / alpha;
        let jac = inv_alpha.abs();
        let pieces = self
            .pieces
            .iter()
            .map(|p| {
                let (a, b) = (map(&p.lo), map(&p.hi));
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                let density = p.density.compose_affine(&inv_alpha, &inv_beta).scale(&jac);
                DensityPiece { lo, hi, density }
            })
            .collect();
        Self::new(atoms, pieces)
    }

    /// `μ{x ≥ λ}`.
    pub fn cdf_tail(&self, lambda: &Rat) -> Rat {
        let atoms: Rat = self
            .atoms
            .iter()
            .filter(|a| &a.location >= lambda)
            .map(|a| a.mass.clone())
            .sum();
        atoms + self.density_mass_above(lambda)
    }

    /// `μ{x > λ}`.
    pub fn cdf_tail_strict(&self, lambda: &Rat) -> Rat {
        let atoms: Rat = self
            .atoms
            .iter()
            .filter(|a| &a.location > lambda)
            .map(|a| a.mass.clone())
            .sum();
        atoms + self.density_mass_above(lambda)
    }

    fn density_mass_above(&self, lambda: &Rat) -> Rat {
        self.pieces
            .iter()
            .filter(|p| &p.hi > lambda)
            .map(|p| {
                let lo = (&p.lo).max(lambda);
                p.density.integrate(lo, &p.hi)
            })
            .sum()
    }

    /// Atom locations and piece endpoints, sorted and deduplicated.
    pub fn breakpoints(&self) -> Vec<Rat> {
        let mut pts: Vec<Rat> = self
            .atoms
            .iter()
            .map(|a| a.location.clone())
            .chain(self.pieces.iter().flat_map(|p| [p.lo.clone(), p.hi.clone()]))
            .collect();
        pts.sort();
        pts.dedup();
        pts
    }

    /// `sup |μ{x ≥ λ} - ν{x ≥ λ}|` (and the strict-tail analogue) over the
    /// union of both breakpoint sets.
    pub fn tail_sup_distance(&self, other: &PPMeasure) -> Rat {
        let mut pts = self.breakpoints();
        pts.extend(other.breakpoints());
        pts.sort();
        pts.dedup();
        let a = TailEvaluator::new(self);
        let b = TailEvaluator::new(other);
        let mut best = Rat::zero();
        for p in &pts {
            let d1 = (a.tail(p, false) - b.tail(p, false)).abs();
            let d2 = (a.tail(p, true) - b.tail(p, true)).abs();
            best = best.max(d1).max(d2);
        }
        best
    }

    /// Checks concavity of `λ ↦ μ{x ≥ λ}^{1/n}` on `(-∞, λ_max)` at rational
    /// samples: midpoints of every pair of breakpoints and of every half
    /// interval. Each comparison is exact.
    pub fn tail_root_concavity(&self, n: u32) -> ConcavityReport {
        let mut report = ConcavityReport::default();
        let Some((_, top)) = self.support() else {
            return report;
        };
        let mut pts: Vec<Rat> = self.breakpoints().into_iter().filter(|p| p <= &top).collect();
        let halves: Vec<Rat> = pts
            .windows(2)
            .map(|w| (&w[0] + &w[1]) / Rat::from_integer(2.into()))
            .collect();
        pts.extend(halves);
        if let Some(first) = pts.first().cloned() {
            pts.push(first - Rat::one());
        }
        pts.sort();
        pts.dedup();
        // The density has no atoms, so G(λ_max) is also the left limit there.
        let g = |x: &Rat| self.cdf_tail(x);
        let values: Vec<Rat> = pts.iter().map(g).collect();
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                let mid = (&pts[i] + &pts[j]) / Rat::from_integer(2.into());
                let gm = g(&mid);
                report.checked += 1;
                match root_midpoint_concave(&values[i], &gm, &values[j], n) {
                    Some(true) => {}
                    Some(false) => report.violations.push((pts[i].clone(), pts[j].clone())),
                    None => report.undecided += 1,
                }
            }
        }
        report
    }

    /// CSV rows: `density,lo,hi,,c0;c1;…` and `atom,loc,loc,mass,`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("kind,lambda_left,lambda_right,mass,coefficients\n");
        for p in &self.pieces {
            let coeffs: Vec<String> = p.density.coeffs().iter().map(fmt_rat).collect();
            let _ = writeln!(
                out,
                "density,{},{},{},{}",
                fmt_rat(&p.lo),
                fmt_rat(&p.hi),
                fmt_rat(&p.mass()),
                coeffs.join(";")
            );
        }
        for a in &self.atoms {
            let loc = fmt_rat(&a.location);
            let _ = writeln!(out, "atom,{loc},{loc},{},", fmt_rat(&a.mass));
        }
        out
    }
}

/// Outcome of [`PPMeasure::tail_root_concavity`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConcavityReport {
    pub checked: usize,
    pub undecided: usize,
    pub violations: Vec<(Rat, Rat)>,
}

impl ConcavityReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty() && self.undecided == 0
    }
}

/// Tail evaluation with suffix sums over atoms, for measures with many atoms.
struct TailEvaluator<'a> {
    measure: &'a PPMeasure,
    suffix: Vec<Rat>,
}

impl<'a> TailEvaluator<'a> {
    fn new(measure: &'a PPMeasure) -> Self {
        let mut suffix = vec![Rat::zero(); measure.atoms.len() + 1];
        for i in (0..measure.atoms.len()).rev() {
            suffix[i] = &suffix[i + 1] + &measure.atoms[i].mass;
        }
        TailEvaluator { measure, suffix }
    }

    fn tail(&self, lambda: &Rat, strict: bool) -> Rat {
        let idx = self.measure.atoms.partition_point(|a| {
            if strict {
                &a.location <= lambda
            } else {
                &a.location < lambda
            }
        });
        &self.suffix[idx] + self.measure.density_mass_above(lambda)
    }
}

/// Decides `g(m) ≥ (g(l) + g(r)) / 2` for `g = G^{1/n}` given the values
/// `G(l), G(m), G(r) ≥ 0` exactly. `None` only if the two sides agree to
/// more than 1024 bits without being provably equal.
pub fn root_midpoint_concave(gl: &Rat, gm: &Rat, gr: &Rat, n: u32) -> Option<bool> {
    let two = Rat::from_integer(2.into());
    if n == 1 {
        return Some(&two * gm >= gl + gr);
    }
    if gm.is_zero() {
        return Some(gl.is_zero() && gr.is_zero());
    }
    // Compare 2 with x + y, x = (G(l)/G(m))^{1/n}, y = (G(r)/G(m))^{1/n}.
    let xl = gl / gm;
    let yr = gr / gm;
    if let (Some(x), Some(y)) = (rational_root(&xl, n), rational_root(&yr, n)) {
        return Some(x + y <= two);
    }
    let mut bits = 8;
    while bits <= 1024 {
        let (x_lo, x_hi) = root_bracket(&xl, n, bits);
        let (y_lo, y_hi) = root_bracket(&yr, n, bits);
        if &x_hi + &y_hi <= two {
            return Some(true);
        }
        if x_lo + y_lo > two {
            return Some(false);
        }
        bits *= 2;
    }
    None
}

fn rational_root(q: &Rat, n: u32) -> Option<Rat> {
    if q.is_negative() {
        return None;
    }
    let root = |v: &BigInt| {
        let r = v.nth_root(n);
        (num_traits::pow(r.clone(), n as usize) == *v).then_some(r)
    };
    Some(Rat::new(root(q.numer())?, root(q.denom())?))
}

/// Rational interval of width `≤ 2^-bits·max(1,q)` containing `q^{1/n}`.
fn root_bracket(q: &Rat, n: u32, bits: u32) -> (Rat, Rat) {
    let mut lo = Rat::zero();
    let mut hi = q.clone().max(Rat::one());
    let half = Rat::new(1.into(), 2.into());
    for _ in 0..bits {
        let mid = (&lo + &hi) * &half;
        if pow(&mid, n) <= *q {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};

    /// density 1 on [-1/2, 0) plus an atom 1/2 at 0.
    fn flagship() -> PPMeasure {
        PPMeasure::new(
            vec![(int(0), rat(1, 2))],
            vec![DensityPiece {
                lo: rat(-1, 2),
                hi: int(0),
                density: UniPoly::constant(int(1)),
            }],
        )
        .unwrap()
    }

    #[test]
    fn moments() {
        let u = PPMeasure::uniform(int(0), int(2)).unwrap();
        assert_eq!(u.moment(1), int(1));
        assert_eq!(PPMeasure::dirac(rat(3, 2)).moment(3), rat(27, 8));
        assert_eq!(flagship().moment(1), rat(-1, 8));
        assert_eq!(flagship().total_mass(), int(1));
    }

    #[test]
    fn central_norms() {
        let u = PPMeasure::uniform(int(0), int(2)).unwrap();
        let one = u.central_lp_norm(LpExponent::Finite(1)).unwrap();
        assert_eq!(one.norm, Some(rat(1, 2)));
        let f1 = flagship().central_lp_norm(LpExponent::Finite(1)).unwrap();
        assert_eq!(f1.norm, Some(rat(9, 64)));
        let finf = flagship().central_lp_norm(LpExponent::Infinity).unwrap();
        assert_eq!(finf.norm, Some(rat(3, 8)));
        let d = PPMeasure::dirac(int(5));
        for p in [LpExponent::Finite(1), LpExponent::Finite(2), LpExponent::Infinity] {
            let n = d.central_lp_norm(p).unwrap();
            assert!(n.norm.unwrap_or_else(|| n.pth_power.clone().unwrap()).is_zero());
        }
    }

    #[test]
    fn non_probability_norm_is_an_error() {
        let m = PPMeasure::new(vec![(int(0), int(2))], vec![]).unwrap();
        assert!(matches!(
            m.central_lp_norm(LpExponent::Finite(1)),
            Err(Error::NotProbability(_))
        ));
    }

    #[test]
    fn pushforwards() {
        let u = PPMeasure::uniform(int(0), int(3)).unwrap();
        assert_eq!(
            u.pushforward_affine(&int(1), &int(2)).unwrap(),
            PPMeasure::uniform(int(2), int(5)).unwrap()
        );
        let u1 = PPMeasure::uniform(int(0), int(1)).unwrap();
        assert_eq!(
            u1.pushforward_affine(&int(2), &int(0)).unwrap(),
            PPMeasure::uniform(int(0), int(2)).unwrap()
        );
        let shifted = flagship().pushforward_affine(&int(1), &rat(1, 2)).unwrap();
        let expected = PPMeasure::new(
            vec![(rat(1, 2), rat(1, 2))],
            vec![DensityPiece {
                lo: int(0),
                hi: rat(1, 2),
                density: UniPoly::constant(int(1)),
            }],
        )
        .unwrap();
        assert_eq!(shifted, expected);
        assert!(u.pushforward_affine(&int(0), &int(1)).is_err());
    }

    #[test]
    fn tails() {
        let u = PPMeasure::uniform(int(0), int(2)).unwrap();
        assert_eq!(u.cdf_tail(&int(1)), rat(1, 2));
        assert_eq!(flagship().cdf_tail(&int(0)), rat(1, 2));
        assert_eq!(flagship().cdf_tail(&rat(-1, 4)), rat(3, 4));
        assert_eq!(flagship().cdf_tail_strict(&int(0)), int(0));
    }

    #[test]
    fn sup_distance_between_dirac_and_uniform() {
        let u = PPMeasure::uniform(int(0), int(1)).unwrap();
        let d = PPMeasure::dirac(rat(1, 2));
        assert_eq!(u.tail_sup_distance(&d), rat(1, 2));
        assert_eq!(u.tail_sup_distance(&u), int(0));
    }

    #[test]
    fn concavity_of_tail_roots() {
        assert!(flagship().tail_root_concavity(1).holds());
        // 1 - (λ+ε)^2 tail on [-ε, 0] has a concave square root.
        let eps = rat(1, 3);
        let dens = UniPoly::linear(int(2), int(2) * &eps);
        let m = PPMeasure::new(
            vec![(int(0), int(1) - &eps * &eps)],
            vec![DensityPiece {
                lo: -eps.clone(),
                hi: int(0),
                density: dens,
            }],
        )
        .unwrap();
        assert!(m.tail_root_concavity(2).holds());
        // Two separated atoms: the tail drops to 1/2 and stays flat, not concave.
        let bad = PPMeasure::new(vec![(int(0), rat(1, 2)), (int(2), rat(1, 2))], vec![]).unwrap();
        assert!(!bad.tail_root_concavity(1).holds());
    }

    #[test]
    fn exact_midpoint_comparisons() {
        // G = (1-λ)^2 gives a linear root: equality everywhere.
        assert_eq!(
            root_midpoint_concave(&int(1), &rat(1, 4), &int(0), 2),
            Some(true)
        );
        // sqrt(1/2) + sqrt(0) vs 2 sqrt(1/8): equality, irrational ratios
        assert_eq!(
            root_midpoint_concave(&rat(1, 2), &rat(1, 8), &int(0), 2),
            Some(true)
        );
        assert_eq!(
            root_midpoint_concave(&int(1), &rat(1, 5), &int(0), 2),
            Some(false)
        );
    }

    #[test]
    fn csv_rows() {
        let csv = flagship().to_csv();
        assert!(csv.contains("density,-1/2,0,1/2,1"));
        assert!(csv.contains("atom,0,0,1/2,"));
    }
}
