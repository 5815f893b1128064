use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::convex::linalg::{det, dot, rank, solve, to_rat_vec, Point};
use crate::convex::LatticePolytope;
use crate::error::{Error, Result};
use crate::exactnum::{fmt_rat, parse_rat, Rat};

/// Singularity class of a toric pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairClass {
    Klt,
    LcNotKlt,
    NotLc,
}

impl fmt::Display for PairClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PairClass::Klt => "klt",
            PairClass::LcNotKlt => "lc-not-klt",
            PairClass::NotLc => "not-lc",
        })
    }
}

/// Complete toric variety given by the normal fan of a polytope, with a
/// torus-invariant boundary `B = Σ b_ρ D_ρ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToricPair {
    dim: usize,
    /// Primitive ray generators, in the facet order of the polytope.
    rays: Vec<Vec<BigInt>>,
    /// Maximal cones, one per polytope vertex, as ray indices.
    cones: Vec<Vec<usize>>,
    coeffs: Vec<Rat>,
}

/// Torus-invariant Q-divisor `Σ d_ρ D_ρ` on the fan of a pair.
pub type DivisorCoeffs = Vec<Rat>;

impl ToricPair {
    /// Pair on the normal fan of `p` with boundary coefficients in facet order.
    pub fn new(p: &LatticePolytope, coeffs: Vec<Rat>) -> Result<Self> {
        if !p.is_full_dimensional() {
            return Err(Error::InvalidInput("polytope must be full-dimensional".into()));
        }
        if coeffs.len() != p.facets().len() {
            return Err(Error::DimensionMismatch {
                expected: p.facets().len(),
                found: coeffs.len(),
            });
        }
        let rays = p.facets().iter().map(|f| f.normal.clone()).collect();
        let cones = p
            .vertices()
            .iter()
            .map(|v| {
                p.facets()
                    .iter()
                    .enumerate()
                    .filter(|(_, f)| f.slack(v).is_zero())
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();
        Ok(ToricPair {
            dim: p.dim(),
            rays,
            cones,
            coeffs,
        })
    }

    /// `B = 0`.
    pub fn trivial(p: &LatticePolytope) -> Self {
        Self::new(p, vec![Rat::zero(); p.facets().len()]).expect("coefficient count matches")
    }

    /// `"trivial"` or `"boundary:b0,b1,…"` (coefficients in facet order).
    pub fn parse(p: &LatticePolytope, s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "trivial" {
            return Ok(Self::trivial(p));
        }
        let list = s
            .strip_prefix("boundary:")
            .ok_or_else(|| Error::Parse(format!("unknown pair {s:?}")))?;
        let coeffs = list.split(',').map(parse_rat).collect::<Result<Vec<_>>>()?;
        Self::new(p, coeffs)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[Vec<BigInt>] {
        &self.rays
    }

    pub fn cones(&self) -> &[Vec<usize>] {
        &self.cones
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    /// Whether the pair's fan is the normal fan of `p`.
    pub fn matches(&self, p: &LatticePolytope) -> bool {
        p.dim() == self.dim
            && p.facets().len() == self.rays.len()
            && p.facets().iter().zip(&self.rays).all(|(f, r)| &f.normal == r)
    }

    pub fn check_matches(&self, p: &LatticePolytope) -> Result<()> {
        if self.matches(p) {
            Ok(())
        } else {
            Err(Error::InvalidInput("pair fan is not the normal fan of the polytope".into()))
        }
    }

    fn ray(&self, i: usize) -> Point {
        to_rat_vec(&self.rays[i])
    }

    pub fn is_simplicial(&self) -> bool {
        self.cones.iter().all(|c| c.len() == self.dim)
    }

    /// Every maximal cone is generated by a lattice basis.
    pub fn is_smooth(&self) -> bool {
        self.is_simplicial()
            && self.cones.iter().all(|c| {
                let m: Vec<Point> = c.iter().map(|&i| self.ray(i)).collect();
                det(&m).abs().is_one()
            })
    }

    /// `1 − b_ρ`, the coefficient of `D_ρ` in `−K_{(X,B)}`.
    pub fn anticanonical_coeffs(&self) -> DivisorCoeffs {
        self.coeffs.iter().map(|b| Rat::one() - b).collect()
    }

    /// Coefficients of `K_{(X,B)} = −Σ (1 − b_ρ) D_ρ`.
    pub fn canonical_coeffs(&self) -> DivisorCoeffs {
        self.coeffs.iter().map(|b| b - Rat::one()).collect()
    }

    /// Log discrepancy of the toric valuation with weight `w`: the function
    /// linear on each cone with value `1 − b_ρ` on the ray generators.
    pub fn log_discrepancy(&self, w: &[Rat]) -> Result<Rat> {
        if w.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: w.len(),
            });
        }
        if w.iter().all(Zero::is_zero) {
            return Ok(Rat::zero());
        }
        for (idx, cone) in self.cones.iter().enumerate() {
            if cone.len() != self.dim {
                return Err(Error::NonSimplicial(idx));
            }
            // Solve w = Σ t_ρ u_ρ: columns are rays.
            let a: Vec<Point> = (0..self.dim)
                .map(|row| cone.iter().map(|&r| Rat::from_integer(self.rays[r][row].clone())).collect())
                .collect();
            let Some(t) = solve(&a, w) else { continue };
            if t.iter().all(|x| *x >= Rat::zero()) {
                return Ok(cone
                    .iter()
                    .zip(&t)
                    .map(|(&r, tr)| tr * (Rat::one() - &self.coeffs[r]))
                    .sum());
            }
        }
        Err(Error::InvalidInput("weight vector outside the fan support".into()))
    }

    pub fn classify(&self) -> PairClass {
        let a = self.anticanonical_coeffs();
        if a.iter().all(|x| *x > Rat::zero()) {
            PairClass::Klt
        } else if a.iter().all(|x| *x >= Rat::zero()) {
            PairClass::LcNotKlt
        } else {
            PairClass::NotLc
        }
    }

    /// Local characters `m_σ` with `⟨m_σ, u_ρ⟩ = −d_ρ` on each maximal cone,
    /// or `None` if the divisor is not Cartier on some cone.
    fn cartier_data(&self, d: &[Rat]) -> Option<Vec<Point>> {
        self.cones
            .iter()
            .map(|cone| {
                let rows: Vec<Point> = cone.iter().map(|&r| self.ray(r)).collect();
                let mut basis: Vec<usize> = Vec::new();
                for (k, row) in rows.iter().enumerate() {
                    let mut trial: Vec<Point> = basis.iter().map(|&j| rows[j].clone()).collect();
                    trial.push(row.clone());
                    if rank(&trial) == trial.len() {
                        basis.push(k);
                    }
                }
                let a: Vec<Point> = basis.iter().map(|&k| rows[k].clone()).collect();
                let b: Vec<Rat> = basis.iter().map(|&k| -d[cone[k]].clone()).collect();
                let m = solve(&a, &b)?;
                cone.iter()
                    .all(|&r| dot(&self.ray(r), &m) == -d[r].clone())
                    .then_some(m)
            })
            .collect()
    }

    /// Polytope `P_D = {x : ⟨u_ρ, x⟩ ≥ −d_ρ}` of a nef divisor, or `None` when
    /// `D` is not nef (or not Q-Cartier on the fan).
    pub fn nef_polytope(&self, d: &[Rat]) -> Option<LatticePolytope> {
        let ms = self.cartier_data(d)?;
        let nef = ms.iter().all(|m| {
            (0..self.rays.len()).all(|r| dot(&self.ray(r), m) >= -d[r].clone())
        });
        if !nef {
            return None;
        }
        LatticePolytope::from_vertices(self.dim, ms).ok()
    }

    /// Divisor coefficients `d_ρ = −offset_ρ` of the polarization given by `p`.
    pub fn polarization_coeffs(p: &LatticePolytope) -> DivisorCoeffs {
        p.facets().iter().map(|f| -f.offset.clone()).collect()
    }

    /// Translation `t` with `P − t` equal to the polytope of `−K_{(X,B)}`, if
    /// the polarization of `p` is anticanonical.
    pub fn anticanonical_translation(&self, p: &LatticePolytope) -> Result<Point> {
        self.check_matches(p)?;
        // offset_ρ − ⟨u_ρ, t⟩ = −(1 − b_ρ)
        let rows: Vec<Point> = (0..self.rays.len()).map(|r| self.ray(r)).collect();
        let rhs: Vec<Rat> = p
            .facets()
            .iter()
            .zip(self.anticanonical_coeffs())
            .map(|(f, a)| &f.offset + a)
            .collect();
        let mut basis: Vec<usize> = Vec::new();
        for k in 0..rows.len() {
            let mut trial: Vec<Point> = basis.iter().map(|&j| rows[j].clone()).collect();
            trial.push(rows[k].clone());
            if rank(&trial) == trial.len() {
                basis.push(k);
            }
        }
        let a: Vec<Point> = basis.iter().map(|&k| rows[k].clone()).collect();
        let b: Vec<Rat> = basis.iter().map(|&k| rhs[k].clone()).collect();
        let t = solve(&a, &b).ok_or(Error::NotAnticanonical)?;
        if rows.iter().zip(&rhs).all(|(u, r)| dot(u, &t) == *r) {
            Ok(t)
        } else {
            Err(Error::NotAnticanonical)
        }
    }

    /// `λ` with `K_{(X,B)} ≡ λ·L` numerically, if it exists.
    pub fn canonical_proportionality(&self, p: &LatticePolytope) -> Option<Rat> {
        if !self.matches(p) {
            return None;
        }
        // −(1−b_ρ) − λ d_ρ = ⟨m, u_ρ⟩ for all ρ, unknowns (λ, m).
        let d = Self::polarization_coeffs(p);
        let k = self.canonical_coeffs();
        let rows: Vec<Point> = (0..self.rays.len())
            .map(|r| {
                let mut row = vec![d[r].clone()];
                row.extend(self.ray(r));
                row
            })
            .collect();
        let mut basis: Vec<usize> = Vec::new();
        for r in 0..rows.len() {
            let mut trial: Vec<Point> = basis.iter().map(|&j| rows[j].clone()).collect();
            trial.push(rows[r].clone());
            if rank(&trial) == trial.len() {
                basis.push(r);
            }
        }
        if basis.len() != self.dim + 1 {
            return None;
        }
        let a: Vec<Point> = basis.iter().map(|&r| rows[r].clone()).collect();
        let b: Vec<Rat> = basis.iter().map(|&r| k[r].clone()).collect();
        let x = solve(&a, &b)?;
        rows.iter()
            .zip(&k)
            .all(|(row, kr)| dot(row, &x) == *kr)
            .then(|| x[0].clone())
    }
}

impl fmt::Display for ToricPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(fmt_rat).collect();
        write!(f, "boundary:{}", parts.join(","))
    }
}
