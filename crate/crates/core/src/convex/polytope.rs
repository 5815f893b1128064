use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::hull::{simplex_volume, Hull};
use super::linalg::{dot, nullspace, primitive_integer, rref, scale, solve, sub, to_rat_vec, Point};
use crate::error::{Error, Result};
use crate::exactnum::{ceil_int, floor_int, fmt_rat, parse_rat, Rat};

/// A supporting hyperplane `⟨normal, x⟩ ≥ offset` with a primitive integer
/// normal. For equations the inequality is an equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Facet {
    pub normal: Vec<BigInt>,
    pub offset: Rat,
}

impl Facet {
    pub fn normal_rat(&self) -> Point {
        to_rat_vec(&self.normal)
    }

    /// `⟨normal, x⟩ − offset`, nonnegative on the polytope.
    pub fn slack(&self, x: &[Rat]) -> Rat {
        dot(&self.normal_rat(), x) - &self.offset
    }
}

impl fmt::Display for Facet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<({}), x> >= {}", self.normal.iter().join(","), self.offset)
    }
}

/// A nonempty rational polytope in `Q^dim`, kept in both representations.
#[derive(Debug, Clone)]
pub struct LatticePolytope {
    dim: usize,
    vertices: Vec<Point>,
    facets: Vec<Facet>,
    equations: Vec<Facet>,
    affine_dim: usize,
    volume: Rat,
    simplices: Vec<Vec<Point>>,
}

impl PartialEq for LatticePolytope {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.vertices == other.vertices
    }
}

impl Eq for LatticePolytope {}

impl LatticePolytope {
    /// Convex hull of the given points. Redundant points are discarded.
    pub fn from_vertices(dim: usize, points: Vec<Point>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("ambient dimension must be positive".into()));
        }
        if points.is_empty() {
            return Err(Error::InvalidInput("empty vertex list".into()));
        }
        if let Some(p) = points.iter().find(|p| p.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: p.len(),
            });
        }
        let mut pts = points;
        pts.sort();
        pts.dedup();
        let v0 = pts[0].clone();
        let diffs: Vec<Point> = pts[1..].iter().map(|p| sub(p, &v0)).collect();
        let mut reduced = diffs.clone();
        let pivots = rref(&mut reduced);
        let equations: Vec<Facet> = nullspace(&diffs, dim)
            .into_iter()
            .map(|n| {
                let normal = primitive_integer(&n);
                let offset = dot(&to_rat_vec(&normal), &v0);
                Facet { normal, offset }
            })
            .collect();
        let k = pivots.len();
        if k == 0 {
            return Ok(LatticePolytope {
                dim,
                vertices: vec![v0],
                facets: Vec::new(),
                equations,
                affine_dim: 0,
                volume: Rat::zero(),
                simplices: Vec::new(),
            });
        }
        let project = |p: &Point| -> Point { pivots.iter().map(|&c| p[c].clone()).collect() };
        let hull = Hull::new(pts.iter().map(project).collect());
        let mut vertices: Vec<Point> = hull.vertices.iter().map(|&i| pts[i].clone()).collect();
        vertices.sort();
        let mut facets: Vec<Facet> = hull
            .facets
            .iter()
            .map(|(n, _, idx)| {
                let mut lifted = vec![Rat::zero(); dim];
                for (&c, x) in pivots.iter().zip(n) {
                    lifted[c] = x.clone();
                }
                let normal = primitive_integer(&lifted);
                let offset = dot(&to_rat_vec(&normal), &pts[idx[0]]);
                Facet { normal, offset }
            })
            .collect();
        facets.sort();
        let (volume, simplices) = if k == dim {
            let clean = Hull::new(vertices.clone());
            let simplices: Vec<Vec<Point>> = clean
                .cone_simplices()
                .map(|s| s.into_iter().cloned().collect())
                .collect();
            (clean.volume(), simplices)
        } else {
            (Rat::zero(), Vec::new())
        };
        Ok(LatticePolytope {
            dim,
            vertices,
            facets,
            equations,
            affine_dim: k,
            volume,
            simplices,
        })
    }

    /// `{x : ⟨n_i, x⟩ ≥ b_i for all i}`, or `None` when the set has no vertex
    /// (empty, or unbounded without vertices).
    pub fn from_halfspaces(dim: usize, halfspaces: &[(Point, Rat)]) -> Option<Self> {
        let mut candidates: Vec<Point> = Vec::new();
        for subset in (0..halfspaces.len()).combinations(dim) {
            let a: Vec<Point> = subset.iter().map(|&i| halfspaces[i].0.clone()).collect();
            let b: Vec<Rat> = subset.iter().map(|&i| halfspaces[i].1.clone()).collect();
            let Some(x) = solve(&a, &b) else { continue };
            if halfspaces.iter().all(|(n, off)| dot(n, &x) >= *off) {
                candidates.push(x);
            }
        }
        if candidates.is_empty() {
            return None;
        }
        LatticePolytope::from_vertices(dim, candidates).ok()
    }

    /// Axis box `[lo, hi]^dim`.
    pub fn cube(dim: usize, lo: Rat, hi: Rat) -> Result<Self> {
        let pts = (0..dim)
            .map(|_| [lo.clone(), hi.clone()])
            .multi_cartesian_product()
            .collect();
        Self::from_vertices(dim, pts)
    }

    /// `conv(0, k·e_1, …, k·e_dim)`.
    pub fn simplex(dim: usize, k: Rat) -> Result<Self> {
        let mut pts = vec![vec![Rat::zero(); dim]];
        for i in 0..dim {
            let mut e = vec![Rat::zero(); dim];
            e[i] = k.clone();
            pts.push(e);
        }
        Self::from_vertices(dim, pts)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Facets sorted lexicographically by normal. For a lower-dimensional
    /// polytope these are relative facets, valid together with `equations`.
    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn equations(&self) -> &[Facet] {
        &self.equations
    }

    pub fn affine_dim(&self) -> usize {
        self.affine_dim
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.affine_dim == self.dim
    }

    /// Euclidean volume; zero for lower-dimensional polytopes.
    pub fn volume(&self) -> Rat {
        self.volume.clone()
    }

    /// Simplices of a triangulation (full-dimensional polytopes only).
    pub fn simplices(&self) -> &[Vec<Point>] {
        &self.simplices
    }

    /// Halfspace form `(normal, offset)` including both sides of each equation.
    pub fn halfspaces(&self) -> Vec<(Point, Rat)> {
        let mut hs: Vec<(Point, Rat)> = self
            .facets
            .iter()
            .map(|f| (f.normal_rat(), f.offset.clone()))
            .collect();
        for e in &self.equations {
            let n = e.normal_rat();
            hs.push((scale(&n, &Rat::from_integer((-1).into())), -e.offset.clone()));
            hs.push((n, e.offset.clone()));
        }
        hs
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        x.len() == self.dim
            && self.facets.iter().all(|f| f.slack(x) >= Rat::zero())
            && self.equations.iter().all(|e| e.slack(x).is_zero())
    }

    /// Integer points of `m·P`, in lexicographic order.
    pub fn lattice_points(&self, m: u64) -> Vec<Vec<i64>> {
        let mr = Rat::from_integer(m.into());
        let lo: Vec<i64> = (0..self.dim)
            .map(|i| {
                let v = self.vertices.iter().map(|p| &p[i] * &mr).min().unwrap();
                ceil_int(&v).to_i64().expect("coordinate fits in i64")
            })
            .collect();
        let hi: Vec<i64> = (0..self.dim)
            .map(|i| {
                let v = self.vertices.iter().map(|p| &p[i] * &mr).max().unwrap();
                floor_int(&v).to_i64().expect("coordinate fits in i64")
            })
            .collect();
        // ⟨u, x⟩·den ≥ m·num, in machine integers.
        let to_test = |f: &Facet| -> (Vec<i128>, i128, i128) {
            let u = f.normal.iter().map(|x| x.to_i128().unwrap()).collect();
            let num = f.offset.numer().to_i128().unwrap() * m as i128;
            let den = f.offset.denom().to_i128().unwrap();
            (u, num, den)
        };
        let ineq: Vec<_> = self.facets.iter().map(to_test).collect();
        let eqs: Vec<_> = self.equations.iter().map(to_test).collect();
        let eval = |u: &[i128], x: &[i64]| -> i128 { u.iter().zip(x).map(|(a, b)| a * *b as i128).sum() };
        let mut out = Vec::new();
        if lo.iter().zip(&hi).any(|(l, h)| l > h) {
            return out;
        }
        let mut x = lo.clone();
        loop {
            let inside = ineq.iter().all(|(u, num, den)| eval(u, &x) * den >= *num)
                && eqs.iter().all(|(u, num, den)| eval(u, &x) * den == *num);
            if inside {
                out.push(x.clone());
            }
            let mut i = self.dim;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if x[i] < hi[i] {
                    x[i] += 1;
                    x[i + 1..].copy_from_slice(&lo[i + 1..]);
                    break;
                }
            }
        }
    }

    /// Centroid of a full-dimensional polytope.
    pub fn centroid(&self) -> Option<Point> {
        if !self.is_full_dimensional() {
            return None;
        }
        let mut acc = vec![Rat::zero(); self.dim];
        let k = Rat::from_integer((self.dim as i64 + 1).into());
        for s in &self.simplices {
            let refs: Vec<&Point> = s.iter().collect();
            let w = simplex_volume(&refs) / &k;
            for p in s {
                for (a, x) in acc.iter_mut().zip(p) {
                    *a += &w * x;
                }
            }
        }
        Some(acc.into_iter().map(|a| a / &self.volume).collect())
    }

    /// `∫_P (⟨a, x⟩ + c) dx`.
    pub fn integrate_affine(&self, a: &[Rat], c: &Rat) -> Rat {
        match self.centroid() {
            Some(g) => &self.volume * (dot(a, &g) + c),
            None => Rat::zero(),
        }
    }

    pub fn scale(&self, s: &Rat) -> Self {
        let pts = self.vertices.iter().map(|v| scale(v, s)).collect();
        Self::from_vertices(self.dim, pts).expect("scaled polytope is valid")
    }

    pub fn translate(&self, t: &[Rat]) -> Self {
        let pts = self.vertices.iter().map(|v| super::linalg::add(v, t)).collect();
        Self::from_vertices(self.dim, pts).expect("translated polytope is valid")
    }

    pub fn minkowski_sum(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let pts = self
            .vertices
            .iter()
            .cartesian_product(&other.vertices)
            .map(|(a, b)| super::linalg::add(a, b))
            .collect();
        Self::from_vertices(self.dim, pts)
    }

    /// `P × {0} ⊂ Q^{dim+1}`.
    pub fn embed_at_height(&self, h: &Rat) -> Self {
        let pts = self
            .vertices
            .iter()
            .map(|v| {
                let mut w = v.clone();
                w.push(h.clone());
                w
            })
            .collect();
        Self::from_vertices(self.dim + 1, pts).expect("embedded polytope is valid")
    }

    pub fn facet_index(&self, facet: &Facet) -> Result<usize> {
        self.facets.binary_search(facet).map_err(|_| Error::NotAFacet)
    }

    pub fn vertices_on_facet(&self, idx: usize) -> Vec<Point> {
        let f = &self.facets[idx];
        self.vertices
            .iter()
            .filter(|v| f.slack(v).is_zero())
            .cloned()
            .collect()
    }

    /// Lattice-normalized volume of a facet of a full-dimensional polytope.
    pub fn facet_lattice_volume(&self, facet: &Facet) -> Result<Rat> {
        if !self.is_full_dimensional() {
            return Err(Error::NotAFacet);
        }
        let idx = self.facet_index(facet)?;
        let face = self.vertices_on_facet(idx);
        Ok(face_measure(facet, &face).map(|(v, _)| v).unwrap_or_else(Rat::zero))
    }
}

/// Lattice-normalized `(dim−1)`-volume and centroid of `conv(points)`, for
/// points lying on the hyperplane of `facet`. `None` if the hull has lower
/// dimension. In dimension one a point has measure 1.
pub(crate) fn face_measure(facet: &Facet, points: &[Point]) -> Option<(Rat, Point)> {
    let n = facet.normal.len();
    if points.is_empty() {
        return None;
    }
    if n == 1 {
        return Some((Rat::from_integer(1.into()), points[0].clone()));
    }
    let k = facet.normal.iter().position(|x| !x.is_zero())?;
    let uk = Rat::from_integer(facet.normal[k].clone());
    let projected: Vec<Point> = points
        .iter()
        .map(|p| p.iter().enumerate().filter(|(i, _)| *i != k).map(|(_, x)| x.clone()).collect())
        .collect();
    let q = LatticePolytope::from_vertices(n - 1, projected).ok()?;
    let c = q.centroid()?;
    let u = facet.normal_rat();
    let mut lifted: Point = Vec::with_capacity(n);
    let mut rest = c.into_iter();
    for i in 0..n {
        lifted.push(if i == k { Rat::zero() } else { rest.next().unwrap() });
    }
    lifted[k] = (&facet.offset - dot(&u, &lifted)) / &uk;
    Some((q.volume() / uk.abs(), lifted))
}

#[derive(Serialize, Deserialize)]
struct PolytopeRepr {
    dim: usize,
    vertices: Vec<Vec<String>>,
}

impl Serialize for LatticePolytope {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PolytopeRepr {
            dim: self.dim,
            vertices: self
                .vertices
                .iter()
                .map(|v| v.iter().map(fmt_rat).collect())
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LatticePolytope {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = PolytopeRepr::deserialize(d)?;
        let pts = repr
            .vertices
            .iter()
            .map(|v| v.iter().map(|s| parse_rat(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        LatticePolytope::from_vertices(repr.dim, pts).map_err(D::Error::custom)
    }
}
