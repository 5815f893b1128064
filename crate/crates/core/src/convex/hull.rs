//! Exact beneath-beyond convex hull of a full-dimensional point set.
//!
//! The boundary is kept as a list of simplicial facets; coplanar simplices
//! are merged only when the H-representation is extracted.

use std::collections::HashMap;

use num_traits::{Signed, Zero};

use super::linalg::{det, dot, nullspace, rank, sub, Point};
use crate::exactnum::{factorial, Rat};

struct SimplexFacet {
    verts: Vec<usize>,
    normal: Point,
    offset: Rat,
}

/// Hull of points that affinely span their ambient space.
pub(crate) struct Hull {
    pub points: Vec<Point>,
    /// Boundary triangulation, as indices into `points`.
    pub boundary: Vec<Vec<usize>>,
    /// An interior point (barycenter of the seed simplex).
    pub interior: Point,
    /// Merged facets `⟨normal, x⟩ ≥ offset` with the vertex indices on each.
    pub facets: Vec<(Point, Rat, Vec<usize>)>,
    /// Indices of extreme points.
    pub vertices: Vec<usize>,
}

fn oriented_facet(points: &[Point], verts: Vec<usize>, interior: &Point) -> SimplexFacet {
    let d = interior.len();
    let base = &points[verts[0]];
    let rows: Vec<Point> = verts[1..].iter().map(|&i| sub(&points[i], base)).collect();
    let mut normal = nullspace(&rows, d)
        .into_iter()
        .next()
        .expect("facet simplex spans a hyperplane");
    let mut offset = dot(&normal, base);
    if dot(&normal, interior) < offset {
        normal = normal.into_iter().map(|x| -x).collect();
        offset = -offset;
    }
    SimplexFacet {
        verts,
        normal,
        offset,
    }
}

/// Normalizes a hyperplane so that equal hyperplanes compare equal.
fn hyperplane_key(normal: &Point, offset: &Rat) -> (Point, Rat) {
    let pivot = normal
        .iter()
        .find(|x| !x.is_zero())
        .expect("nonzero normal")
        .abs();
    (
        normal.iter().map(|x| x / &pivot).collect(),
        offset / &pivot,
    )
}

impl Hull {
    /// `points` must be distinct and affinely span `R^d`, `d ≥ 1`.
    pub fn new(points: Vec<Point>) -> Hull {
        let d = points[0].len();
        // Seed simplex: grow an affinely independent set greedily.
        let mut seed = vec![0usize];
        let mut dirs: Vec<Point> = Vec::new();
        for i in 1..points.len() {
            if seed.len() == d + 1 {
                break;
            }
            let mut trial = dirs.clone();
            trial.push(sub(&points[i], &points[0]));
            if rank(&trial) == trial.len() {
                dirs = trial;
                seed.push(i);
            }
        }
        assert_eq!(seed.len(), d + 1, "hull input must be full-dimensional");
        let mut interior = vec![Rat::zero(); d];
        for &i in &seed {
            for (c, x) in interior.iter_mut().zip(&points[i]) {
                *c += x;
            }
        }
        let denom = Rat::from_integer((d as i64 + 1).into());
        for c in interior.iter_mut() {
            *c /= &denom;
        }

        let mut facets: Vec<SimplexFacet> = (0..=d)
            .map(|skip| {
                let verts: Vec<usize> = seed
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != skip)
                    .map(|(_, &v)| v)
                    .collect();
                oriented_facet(&points, verts, &interior)
            })
            .collect();

        for p in 0..points.len() {
            if seed.contains(&p) {
                continue;
            }
            let pt = &points[p];
            let visible: Vec<bool> = facets
                .iter()
                .map(|f| dot(&f.normal, pt) < f.offset)
                .collect();
            if !visible.iter().any(|&v| v) {
                continue;
            }
            let mut ridge_count: HashMap<Vec<usize>, usize> = HashMap::new();
            for (f, _) in facets.iter().zip(&visible).filter(|(_, v)| **v) {
                for skip in 0..f.verts.len() {
                    let mut ridge: Vec<usize> = f
                        .verts
                        .iter()
                        .enumerate()
                        .filter(|(j, _)| *j != skip)
                        .map(|(_, &v)| v)
                        .collect();
                    ridge.sort_unstable();
                    *ridge_count.entry(ridge).or_default() += 1;
                }
            }
            let mut kept: Vec<SimplexFacet> = facets
                .into_iter()
                .zip(visible)
                .filter(|(_, v)| !*v)
                .map(|(f, _)| f)
                .collect();
            let mut horizon: Vec<Vec<usize>> = ridge_count
                .into_iter()
                .filter(|(_, c)| *c == 1)
                .map(|(r, _)| r)
                .collect();
            horizon.sort();
            for mut ridge in horizon {
                ridge.push(p);
                kept.push(oriented_facet(&points, ridge, &interior));
            }
            facets = kept;
        }

        let mut merged: Vec<(Point, Rat, Vec<usize>)> = Vec::new();
        let mut index: HashMap<(Point, Rat), usize> = HashMap::new();
        for f in &facets {
            let key = hyperplane_key(&f.normal, &f.offset);
            let slot = *index.entry(key.clone()).or_insert_with(|| {
                merged.push((key.0.clone(), key.1.clone(), Vec::new()));
                merged.len() - 1
            });
            merged[slot].2.extend(f.verts.iter().copied());
        }
        for (_, _, verts) in merged.iter_mut() {
            verts.sort_unstable();
            verts.dedup();
        }
        let mut used: Vec<usize> = facets.iter().flat_map(|f| f.verts.iter().copied()).collect();
        used.sort_unstable();
        used.dedup();
        let vertices = used
            .into_iter()
            .filter(|&v| {
                let normals: Vec<Point> = merged
                    .iter()
                    .filter(|(_, _, vs)| vs.binary_search(&v).is_ok())
                    .map(|(n, _, _)| n.clone())
                    .collect();
                rank(&normals) == d
            })
            .collect();

        Hull {
            boundary: facets.into_iter().map(|f| f.verts).collect(),
            points,
            interior,
            facets: merged,
            vertices,
        }
    }

    /// Simplices `interior ∪ boundary simplex` triangulating the hull.
    pub fn cone_simplices(&self) -> impl Iterator<Item = Vec<&Point>> + '_ {
        self.boundary.iter().map(move |b| {
            let mut s: Vec<&Point> = vec![&self.interior];
            s.extend(b.iter().map(|&i| &self.points[i]));
            s
        })
    }

    pub fn volume(&self) -> Rat {
        self.cone_simplices().map(|s| simplex_volume(&s)).sum()
    }
}

/// Euclidean volume of the simplex with the given `d + 1` vertices in `R^d`.
pub fn simplex_volume(verts: &[&Point]) -> Rat {
    let d = verts.len() - 1;
    let rows: Vec<Point> = verts[1..].iter().map(|v| sub(v, verts[0])).collect();
    det(&rows).abs() / factorial(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};

    fn p(v: &[i64]) -> Point {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn square_with_interior_and_edge_points() {
        let pts = vec![
            p(&[0, 0]),
            p(&[2, 0]),
            p(&[1, 1]),
            p(&[2, 2]),
            p(&[0, 2]),
            p(&[1, 0]),
        ];
        let h = Hull::new(pts);
        assert_eq!(h.volume(), int(4));
        assert_eq!(h.vertices.len(), 4);
        assert_eq!(h.facets.len(), 4);
    }

    #[test]
    fn cube_volume_and_facets() {
        let mut pts = Vec::new();
        for x in 0..2 {
            for y in 0..2 {
                for z in 0..2 {
                    pts.push(p(&[x, y, z]));
                }
            }
        }
        pts.push(vec![rat(1, 2), rat(1, 2), rat(1, 2)]);
        let h = Hull::new(pts);
        assert_eq!(h.volume(), int(1));
        assert_eq!(h.facets.len(), 6);
        assert_eq!(h.vertices.len(), 8);
    }

    #[test]
    fn interval() {
        let h = Hull::new(vec![p(&[3]), p(&[-1]), p(&[0])]);
        assert_eq!(h.volume(), int(4));
        assert_eq!(h.vertices.len(), 2);
    }
}
