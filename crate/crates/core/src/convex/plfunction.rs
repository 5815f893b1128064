use std::fmt;

use itertools::Itertools;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::linalg::{dot, sub, Point};
use super::polytope::{face_measure, LatticePolytope};
use crate::error::{Error, Result};
use crate::exactnum::{serde_rat, serde_rat_vec, Rat};

/// `x ↦ ⟨a, x⟩ + c`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AffinePiece {
    #[serde(with = "serde_rat_vec")]
    pub a: Point,
    #[serde(with = "serde_rat")]
    pub c: Rat,
}

impl AffinePiece {
    pub fn new(a: Point, c: Rat) -> Self {
        AffinePiece { a, c }
    }

    pub fn eval(&self, x: &[Rat]) -> Rat {
        dot(&self.a, x) + &self.c
    }
}

impl fmt::Display for AffinePiece {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(a=[{}], c={})", self.a.iter().join(","), self.c)
    }
}

/// A maximal region of linearity of a PL function, with its active piece.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    pub polytope: LatticePolytope,
    pub piece: AffinePiece,
}

/// Concave piecewise-linear function `min_i (⟨a_i, x⟩ + c_i)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PLFunction {
    pieces: Vec<AffinePiece>,
}

impl PLFunction {
    pub fn new(pieces: Vec<AffinePiece>) -> Result<Self> {
        let Some(first) = pieces.first() else {
            return Err(Error::InvalidInput("a PL function needs at least one piece".into()));
        };
        let n = first.a.len();
        if let Some(p) = pieces.iter().find(|p| p.a.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: p.a.len(),
            });
        }
        Ok(PLFunction { pieces })
    }

    pub fn affine(a: Point, c: Rat) -> Self {
        PLFunction {
            pieces: vec![AffinePiece::new(a, c)],
        }
    }

    pub fn constant(dim: usize, c: Rat) -> Self {
        Self::affine(vec![Rat::zero(); dim], c)
    }

    pub fn pieces(&self) -> &[AffinePiece] {
        &self.pieces
    }

    pub fn dim(&self) -> usize {
        self.pieces[0].a.len()
    }

    pub fn eval(&self, x: &[Rat]) -> Rat {
        self.pieces.iter().map(|p| p.eval(x)).min().unwrap()
    }

    /// `f + c`.
    pub fn add_constant(&self, c: &Rat) -> Self {
        PLFunction {
            pieces: self
                .pieces
                .iter()
                .map(|p| AffinePiece::new(p.a.clone(), &p.c + c))
                .collect(),
        }
    }

    /// `s·f` for `s > 0`.
    pub fn scale(&self, s: &Rat) -> Self {
        assert!(*s > Rat::zero(), "PL functions scale by positive factors only");
        PLFunction {
            pieces: self
                .pieces
                .iter()
                .map(|p| AffinePiece::new(p.a.iter().map(|x| x * s).collect(), &p.c * s))
                .collect(),
        }
    }

    /// `x ↦ f(x + t)`, i.e. the function on `P − t` matching `f` on `P`.
    pub fn precompose_translation(&self, t: &[Rat]) -> Self {
        PLFunction {
            pieces: self
                .pieces
                .iter()
                .map(|p| AffinePiece::new(p.a.clone(), &p.c + dot(&p.a, t)))
                .collect(),
        }
    }

    fn check_domain(&self, p: &LatticePolytope) -> Result<()> {
        if p.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: p.dim(),
                found: self.dim(),
            });
        }
        if !p.is_full_dimensional() {
            return Err(Error::InvalidInput("domain polytope must be full-dimensional".into()));
        }
        Ok(())
    }

    /// Region of `p` where piece `i` attains the minimum.
    fn active_region(&self, p: &LatticePolytope, i: usize) -> Option<LatticePolytope> {
        let pi = &self.pieces[i];
        let mut hs = p.halfspaces();
        for (j, pj) in self.pieces.iter().enumerate() {
            if j == i {
                continue;
            }
            let n = sub(&pj.a, &pi.a);
            let b = &pi.c - &pj.c;
            if n.iter().all(Zero::is_zero) {
                if b > Rat::zero() {
                    return None;
                }
                continue;
            }
            hs.push((n, b));
        }
        LatticePolytope::from_halfspaces(p.dim(), &hs)
    }

    /// Irredundant form on `p`: duplicate pieces and pieces active only on
    /// lower-dimensional sets are removed; pieces are sorted.
    pub fn canonicalize(&self, p: &LatticePolytope) -> Result<Self> {
        self.check_domain(p)?;
        let mut uniq = self.pieces.clone();
        uniq.sort();
        uniq.dedup();
        let base = PLFunction { pieces: uniq };
        let kept: Vec<AffinePiece> = (0..base.pieces.len())
            .filter(|&i| {
                base.active_region(p, i)
                    .is_some_and(|r| r.is_full_dimensional())
            })
            .map(|i| base.pieces[i].clone())
            .collect();
        Ok(PLFunction { pieces: kept })
    }

    /// Maximal linearity cells of `f` on `p`, one per canonical piece.
    pub fn linearity_domains(&self, p: &LatticePolytope) -> Result<Vec<Cell>> {
        let canon = self.canonicalize(p)?;
        Ok((0..canon.pieces.len())
            .filter_map(|i| {
                canon.active_region(p, i).map(|polytope| Cell {
                    polytope,
                    piece: canon.pieces[i].clone(),
                })
            })
            .collect())
    }

    /// Vertices of all linearity cells, sorted and deduplicated.
    pub fn subdivision_vertices(&self, p: &LatticePolytope) -> Result<Vec<Point>> {
        let mut pts: Vec<Point> = self
            .linearity_domains(p)?
            .into_iter()
            .flat_map(|c| c.polytope.vertices().to_vec())
            .collect();
        pts.sort();
        pts.dedup();
        Ok(pts)
    }

    pub fn max_on(&self, p: &LatticePolytope) -> Result<Rat> {
        Ok(self
            .subdivision_vertices(p)?
            .iter()
            .map(|v| self.eval(v))
            .max()
            .unwrap())
    }

    pub fn min_on(&self, p: &LatticePolytope) -> Result<Rat> {
        // A concave function attains its minimum at a vertex of the domain.
        Ok(p.vertices().iter().map(|v| self.eval(v)).min().unwrap())
    }

    /// Vertices of the common refinement of the subdivisions of `self` and `other`.
    fn common_vertices(&self, other: &Self, p: &LatticePolytope) -> Result<Vec<Point>> {
        let a = self.linearity_domains(p)?;
        let b = other.linearity_domains(p)?;
        let mut pts = Vec::new();
        for (ca, cb) in a.iter().cartesian_product(&b) {
            let mut hs = ca.polytope.halfspaces();
            hs.extend(cb.polytope.halfspaces());
            if let Some(q) = LatticePolytope::from_halfspaces(p.dim(), &hs) {
                pts.extend(q.vertices().iter().cloned());
            }
        }
        pts.sort();
        pts.dedup();
        Ok(pts)
    }

    /// `self ≤ other` everywhere on `p`.
    pub fn dominated_by(&self, other: &Self, p: &LatticePolytope) -> Result<bool> {
        Ok(self
            .common_vertices(other, p)?
            .iter()
            .all(|v| self.eval(v) <= other.eval(v)))
    }

    /// Equality as functions on `p` (mutual domination).
    pub fn equal_on(&self, other: &Self, p: &LatticePolytope) -> Result<bool> {
        Ok(self.dominated_by(other, p)? && other.dominated_by(self, p)?)
    }

    /// `∫_p f dx`.
    pub fn integrate(&self, p: &LatticePolytope) -> Result<Rat> {
        Ok(self
            .linearity_domains(p)?
            .iter()
            .map(|c| c.polytope.integrate_affine(&c.piece.a, &c.piece.c))
            .sum())
    }

    /// `∫_F f dσ` over facet `idx` of `p`, for the lattice-normalized
    /// measure on the facet.
    pub fn integrate_over_facet(&self, p: &LatticePolytope, idx: usize) -> Result<Rat> {
        let facet = p.facets().get(idx).ok_or(Error::NotAFacet)?;
        if p.dim() == 1 {
            return Ok(self.eval(&p.vertices_on_facet(idx)[0]));
        }
        let mut total = Rat::zero();
        for cell in self.linearity_domains(p)? {
            let on: Vec<Point> = cell
                .polytope
                .vertices()
                .iter()
                .filter(|v| facet.slack(v).is_zero())
                .cloned()
                .collect();
            if let Some((vol, g)) = face_measure(facet, &on) {
                total += vol * cell.piece.eval(&g);
            }
        }
        Ok(total)
    }
}

impl fmt::Display for PLFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "min{{{}}}", self.pieces.iter().join(", "))
    }
}
