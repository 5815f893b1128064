//! Toric test configurations: a polytope with a concave PL function, the
//! induced filtration, central-fiber components and the exact DH measure.

mod catalog;
mod pair;

pub use catalog::{
    anticanonical_polytope, catalog_metric, catalog_polytope, random_metric, random_polytope,
    RANDOM_N0_CAP, RANDOM_POLYTOPES,
};
pub use pair::{DivisorCoeffs, PairClass, ToricPair};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::convex::linalg::{dot, Point};
use crate::convex::{superlevel_volume, AffinePiece, LatticePolytope, PLFunction};
use crate::error::{Error, Result};
use crate::exactnum::{denominator_lcm, serde_rat, serde_rat_vec, Rat};
use crate::filtration::GradedWeights;
use crate::measures::{DensityPiece, LpExponent, PPMeasure};

/// A positive non-Archimedean metric on a polarized toric variety, presented
/// by a concave PL function on its polytope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToricMetric {
    polytope: LatticePolytope,
    f: PLFunction,
    n0: u64,
}

/// One irreducible component of the central fiber.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentData {
    pub piece: AffinePiece,
    /// Primitive integral vector `(b·a, b)` proportional to `(a, 1)`.
    pub joint_normal: Vec<i64>,
    pub b: u64,
    /// `v_E(χ^u) = ⟨a, u⟩`.
    #[serde(with = "serde_rat_vec")]
    pub valuation_weight: Vec<Rat>,
    #[serde(with = "serde_rat")]
    pub mass: Rat,
    #[serde(with = "serde_rat")]
    pub log_discrepancy: Rat,
    /// `(φ − φ_triv)(v_E) = c + min_P ⟨a, ·⟩`.
    #[serde(with = "serde_rat")]
    pub phi_value: Rat,
    pub trivial: bool,
}

impl ToricMetric {
    pub fn new(polytope: LatticePolytope, f: PLFunction) -> Result<Self> {
        if !polytope.is_full_dimensional() {
            return Err(Error::InvalidInput("metric polytope must be full-dimensional".into()));
        }
        let f = f.canonicalize(&polytope)?;
        let n0 = compute_n0(&polytope, &f)?;
        Ok(ToricMetric { polytope, f, n0 })
    }

    /// Product configuration of the one-parameter subgroup `a`, twisted by `c`.
    pub fn from_one_ps(polytope: LatticePolytope, a: Point, c: Rat) -> Result<Self> {
        if a.len() != polytope.dim() {
            return Err(Error::DimensionMismatch {
                expected: polytope.dim(),
                found: a.len(),
            });
        }
        Self::new(polytope, PLFunction::affine(a, c))
    }

    /// `φ_triv + c`.
    pub fn trivial(polytope: LatticePolytope, c: Rat) -> Result<Self> {
        let n = polytope.dim();
        Self::new(polytope, PLFunction::constant(n, c))
    }

    /// Deformation to the normal cone of the torus-fixed point at vertex
    /// `v0`, with parameter `ε`: `f = min(0, ℓ − ε)`, `ℓ` the sum of the
    /// facet distances at `v0`.
    pub fn deformation_to_normal_cone(polytope: LatticePolytope, v0: &[Rat], eps: &Rat) -> Result<Self> {
        let n = polytope.dim();
        if !polytope.vertices().iter().any(|v| v.as_slice() == v0) {
            return Err(Error::InvalidInput("base point is not a vertex of the polytope".into()));
        }
        let through: Vec<_> = polytope
            .facets()
            .iter()
            .filter(|f| f.slack(v0).is_zero())
            .collect();
        if through.len() != n {
            return Err(Error::InvalidInput("vertex is not simple".into()));
        }
        let mut a = vec![Rat::zero(); n];
        let mut c = Rat::zero();
        for f in &through {
            for (ai, ui) in a.iter_mut().zip(f.normal_rat()) {
                *ai += ui;
            }
            c -= &f.offset;
        }
        let ell = AffinePiece::new(a, c);
        let reach = polytope
            .vertices()
            .iter()
            .filter(|v| v.as_slice() != v0)
            .map(|v| ell.eval(v))
            .min()
            .expect("polytope has a second vertex");
        if *eps <= Rat::zero() || *eps >= reach {
            return Err(Error::NotRelativelyAmple(format!(
                "need 0 < eps < {reach}, got {eps}"
            )));
        }
        let cut = AffinePiece::new(ell.a, ell.c - eps);
        let zero = AffinePiece::new(vec![Rat::zero(); n], Rat::zero());
        Self::new(polytope, PLFunction::new(vec![zero, cut])?)
    }

    pub fn polytope(&self) -> &LatticePolytope {
        &self.polytope
    }

    /// Canonical PL function.
    pub fn function(&self) -> &PLFunction {
        &self.f
    }

    pub fn dim(&self) -> usize {
        self.polytope.dim()
    }

    /// Least positive integer along whose multiples every sequence derived
    /// from the metric is polynomial.
    pub fn n0(&self) -> u64 {
        self.n0
    }

    /// `V = n!·vol(P)`.
    pub fn volume_v(&self) -> Rat {
        crate::exactnum::factorial(self.dim()) * self.polytope.volume()
    }

    /// `φ + c`.
    pub fn translate(&self, c: &Rat) -> Self {
        Self::new(self.polytope.clone(), self.f.add_constant(c)).expect("translation is valid")
    }

    /// Base change of order `d`: pieces `(d·a, d·c)`.
    pub fn scale_base_change(&self, d: u64) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidInput("base change order must be positive".into()));
        }
        Self::new(self.polytope.clone(), self.f.scale(&Rat::from_integer(d.into())))
    }

    pub fn lambda_max(&self) -> Rat {
        self.f.max_on(&self.polytope).expect("canonical metric")
    }

    pub fn lambda_min(&self) -> Rat {
        self.f.min_on(&self.polytope).expect("canonical metric")
    }

    /// Pieces scaled to integers by a common denominator `D`.
    fn integer_pieces(&self) -> (Vec<(Vec<i128>, i128)>, i128) {
        let den = self
            .f
            .pieces()
            .iter()
            .fold(BigInt::one(), |acc, p| {
                acc.lcm(&denominator_lcm(p.a.iter().chain(std::iter::once(&p.c))))
            });
        let dr = Rat::from_integer(den.clone());
        let to_i = |x: &Rat| (x * &dr).to_integer().to_i128().expect("piece data fits in i128");
        let pieces = self
            .f
            .pieces()
            .iter()
            .map(|p| (p.a.iter().map(to_i).collect(), to_i(&p.c)))
            .collect();
        (pieces, den.to_i128().expect("denominator fits in i128"))
    }

    /// `w_m(u) = ⌊min_i(⟨a_i, u⟩ + c_i·m)⌋` for `u ∈ mP ∩ Z^n`, with the points.
    pub fn weights_at(&self, m: u64) -> Vec<(Vec<i64>, i64)> {
        let (pieces, den) = self.integer_pieces();
        let mi = m as i128;
        self.polytope
            .lattice_points(m)
            .into_iter()
            .map(|u| {
                let v = pieces
                    .iter()
                    .map(|(a, c)| a.iter().zip(&u).map(|(x, y)| x * *y as i128).sum::<i128>() + c * mi)
                    .min()
                    .unwrap();
                let w = Integer::div_floor(&v, &den);
                (u, w as i64)
            })
            .collect()
    }

    /// Filtration jumps of `H⁰(X, mL)`.
    pub fn filtration_of(&self, m: u64) -> Result<GradedWeights> {
        if m == 0 {
            return Err(Error::InvalidInput("level must be at least 1".into()));
        }
        GradedWeights::from_weights(m, self.weights_at(m).into_iter().map(|(_, w)| w))
    }

    /// Characters `u ∈ mP` with `w_m(u) ≥ λ`: the monomials of the flag-ideal
    /// piece `𝔞_λ^{(m)}`.
    pub fn flag_ideal_piece(&self, m: u64, lambda: i64) -> Vec<Vec<i64>> {
        self.weights_at(m)
            .into_iter()
            .filter(|(_, w)| *w >= lambda)
            .map(|(u, _)| u)
            .collect()
    }

    /// Central-fiber components, one per linearity cell, sorted by piece.
    pub fn components(&self, pair: &ToricPair) -> Result<Vec<ComponentData>> {
        pair.check_matches(&self.polytope)?;
        let vol = self.polytope.volume();
        let cells = self.f.linearity_domains(&self.polytope)?;
        let mut out = Vec::with_capacity(cells.len());
        for cell in cells {
            let a = &cell.piece.a;
            let b = denominator_lcm(a.iter());
            let br = Rat::from_integer(b.clone());
            let mut joint: Vec<i64> = a
                .iter()
                .map(|x| (x * &br).to_integer().to_i64().expect("slope fits in i64"))
                .collect();
            joint.push(b.to_i64().expect("multiplicity fits in i64"));
            let min_a = self
                .polytope
                .vertices()
                .iter()
                .map(|v| dot(a, v))
                .min()
                .unwrap();
            out.push(ComponentData {
                joint_normal: joint,
                b: b.to_u64().expect("multiplicity fits in u64"),
                valuation_weight: a.clone(),
                mass: cell.polytope.volume() / &vol,
                log_discrepancy: pair.log_discrepancy(a)?,
                phi_value: &cell.piece.c + min_a,
                trivial: a.iter().all(Zero::is_zero),
                piece: cell.piece,
            });
        }
        out.sort_by(|x, y| x.piece.cmp(&y.piece));
        Ok(out)
    }

    /// Pushforward of normalized Lebesgue measure on `P` under `f`.
    pub fn dh_exact(&self) -> Result<PPMeasure> {
        let s = superlevel_volume(&self.polytope, &self.f)?;
        let vol = self.polytope.volume();
        let pieces = s
            .breakpoints
            .windows(2)
            .zip(&s.pieces)
            .map(|(w, p)| DensityPiece {
                lo: w[0].clone(),
                hi: w[1].clone(),
                density: (-&p.derivative()).scale(&(Rat::one() / &vol)),
            })
            .collect();
        let atoms = vec![(s.lambda_max().clone(), &s.top_volume / &vol)];
        PPMeasure::new(atoms, pieces)
    }

    /// `φ = φ_triv + c`, decided three ways that must agree: affine canonical
    /// form with zero slope, Dirac DH measure, vanishing `L¹` norm.
    pub fn is_almost_trivial(&self) -> Result<bool> {
        let by_form = self.f.pieces().len() == 1 && self.f.pieces()[0].a.iter().all(Zero::is_zero);
        let dh = self.dh_exact()?;
        let by_dirac = dh.dirac_location().is_some();
        let l1 = dh
            .central_lp_norm(LpExponent::Finite(1))?
            .norm
            .expect("L1 norm is rational");
        let by_norm = l1.is_zero();
        if by_form == by_dirac && by_dirac == by_norm {
            Ok(by_form)
        } else {
            Err(Error::violation(
                "almost-triviality criteria",
                format!("affine={by_form} dirac={by_dirac} l1-zero={by_norm} for {}", self.f),
            ))
        }
    }
}

/// Lcm of the denominators of the pieces, of the subdivision vertices, of the
/// values of `f` there, and of the polytope vertices.
fn compute_n0(p: &LatticePolytope, f: &PLFunction) -> Result<u64> {
    let mut l = BigInt::one();
    for piece in f.pieces() {
        l = l.lcm(&denominator_lcm(piece.a.iter().chain(std::iter::once(&piece.c))));
    }
    for v in f.subdivision_vertices(p)? {
        l = l.lcm(&denominator_lcm(v.iter()));
        l = l.lcm(f.eval(&v).denom());
    }
    for v in p.vertices() {
        l = l.lcm(&denominator_lcm(v.iter()));
    }
    l.to_u64()
        .ok_or_else(|| Error::InvalidInput("denominators too large".into()))
}

#[derive(Serialize, Deserialize)]
struct MetricRepr {
    polytope: LatticePolytope,
    pieces: Vec<AffinePiece>,
}

impl Serialize for ToricMetric {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MetricRepr {
            polytope: self.polytope.clone(),
            pieces: self.f.pieces().to_vec(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ToricMetric {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = MetricRepr::deserialize(d)?;
        let f = PLFunction::new(r.pieces).map_err(D::Error::custom)?;
        ToricMetric::new(r.polytope, f).map_err(D::Error::custom)
    }
}
