use num_traits::{One, Zero};
use rayon::prelude::*;

use super::polytope::LatticePolytope;
use crate::error::{Error, Result};
use crate::exactnum::{binomial, factorial, Rat};

/// Mixed volume `MV(K_1, …, K_N)` of `N` polytopes in `Q^N`, normalized so
/// that `MV(K, …, K) = vol(K)`.
///
/// Inclusion–exclusion over Minkowski sums, with repeated bodies grouped:
/// a subset choosing `k_j` copies of the `j`-th distinct body contributes
/// `vol(Σ k_j K_j)` with multiplicity `Π C(m_j, k_j)`.
pub fn mixed_volume(bodies: &[LatticePolytope]) -> Result<Rat> {
    let n = bodies.len();
    if n == 0 {
        return Err(Error::InvalidInput("mixed volume of no bodies".into()));
    }
    if let Some(b) = bodies.iter().find(|b| b.dim() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: b.dim(),
        });
    }
    let mut groups: Vec<(&LatticePolytope, usize)> = Vec::new();
    for b in bodies {
        match groups.iter_mut().find(|(g, _)| *g == b) {
            Some((_, m)) => *m += 1,
            None => groups.push((b, 1)),
        }
    }
    if groups.len() == 1 {
        return Ok(groups[0].0.volume());
    }
    let mults: Vec<usize> = groups.iter().map(|(_, m)| *m).collect();
    let mut counts: Vec<Vec<usize>> = vec![Vec::new()];
    for &m in &mults {
        counts = counts
            .into_iter()
            .flat_map(|c| {
                (0..=m).map(move |k| {
                    let mut c = c.clone();
                    c.push(k);
                    c
                })
            })
            .collect();
    }
    counts.retain(|c| c.iter().any(|&k| k > 0));
    let terms: Vec<Rat> = counts
        .par_iter()
        .map(|ks| {
            let mut sum: Option<LatticePolytope> = None;
            let mut weight = Rat::one();
            for ((body, m), &k) in groups.iter().zip(ks) {
                weight *= Rat::from_integer(binomial(*m, k));
                if k == 0 {
                    continue;
                }
                let scaled = body.scale(&Rat::from_integer(k.into()));
                sum = Some(match sum {
                    None => scaled,
                    Some(s) => s.minkowski_sum(&scaled).expect("dimensions agree"),
                });
            }
            let total: usize = ks.iter().sum();
            let sign = if (n - total).is_multiple_of(2) { Rat::one() } else { -Rat::one() };
            sign * weight * sum.map(|s| s.volume()).unwrap_or_else(Rat::zero)
        })
        .collect();
    Ok(terms.into_iter().sum::<Rat>() / factorial(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex::linalg::Point;
    use crate::exactnum::{int, rat};

    fn p(v: &[i64]) -> Point {
        v.iter().map(|&x| int(x)).collect()
    }

    fn triangle(d: i64) -> LatticePolytope {
        LatticePolytope::from_vertices(2, vec![p(&[0, 0]), p(&[1, 0]), p(&[1, d])]).unwrap()
    }

    #[test]
    fn diagonal_is_volume() {
        assert_eq!(mixed_volume(&[triangle(3), triangle(3)]).unwrap(), rat(3, 2));
    }

    #[test]
    fn triangle_and_segment() {
        let seg = LatticePolytope::from_vertices(2, vec![p(&[0, 0]), p(&[1, 0])]).unwrap();
        for d in 1..4 {
            assert_eq!(mixed_volume(&[triangle(d), seg.clone()]).unwrap(), rat(d, 2));
        }
    }

    #[test]
    fn degenerate_bodies() {
        let flat = LatticePolytope::cube(1, int(0), int(1)).unwrap().embed_at_height(&int(0));
        assert_eq!(mixed_volume(&[flat.clone(), flat.clone()]).unwrap(), int(0));
        let point = LatticePolytope::from_vertices(2, vec![p(&[1, 1])]).unwrap();
        assert_eq!(mixed_volume(&[point, flat]).unwrap(), int(0));
    }

    #[test]
    fn unit_cube_boxes() {
        // MV of three coordinate segments in R^3 is 1/3!.
        let seg = |i: usize| {
            let mut e = vec![int(0); 3];
            e[i] = int(1);
            LatticePolytope::from_vertices(3, vec![vec![int(0); 3], e]).unwrap()
        };
        assert_eq!(mixed_volume(&[seg(0), seg(1), seg(2)]).unwrap(), rat(1, 6));
    }

    #[test]
    fn dimension_mismatch() {
        let seg = LatticePolytope::cube(1, int(0), int(1)).unwrap();
        assert!(matches!(
            mixed_volume(&[seg.clone(), seg]),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
