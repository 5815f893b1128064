use num_traits::Zero;
use rayon::prelude::*;

use super::plfunction::PLFunction;
use super::polytope::LatticePolytope;
use crate::error::Result;
use crate::exactnum::{interpolate, Rat, UniPoly};

/// `λ ↦ vol{x ∈ P : f(x) ≥ λ}` as a piecewise polynomial.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuperlevelVolume {
    /// `vol(P)`.
    pub total: Rat,
    /// Values of `f` at the subdivision vertices, increasing.
    pub breakpoints: Vec<Rat>,
    /// `pieces[k]` is exact on `[breakpoints[k], breakpoints[k+1]]`, except
    /// at the right end of the last interval.
    pub pieces: Vec<UniPoly>,
    /// `vol{f = max f}`.
    pub top_volume: Rat,
}

impl SuperlevelVolume {
    pub fn lambda_min(&self) -> &Rat {
        &self.breakpoints[0]
    }

    pub fn lambda_max(&self) -> &Rat {
        self.breakpoints.last().unwrap()
    }

    pub fn eval(&self, lambda: &Rat) -> Rat {
        if lambda > self.lambda_max() {
            return Rat::zero();
        }
        if lambda == self.lambda_max() {
            return self.top_volume.clone();
        }
        if lambda <= self.lambda_min() {
            return self.total.clone();
        }
        let k = self.breakpoints.partition_point(|b| b <= lambda) - 1;
        self.pieces[k].eval(lambda)
    }
}

/// Volume of `{x ∈ p : f(x) ≥ λ}`.
pub fn superlevel_volume_at(p: &LatticePolytope, f: &PLFunction, lambda: &Rat) -> Rat {
    let mut hs = p.halfspaces();
    for piece in f.pieces() {
        hs.push((piece.a.clone(), lambda - &piece.c));
    }
    LatticePolytope::from_halfspaces(p.dim(), &hs)
        .map(|q| q.volume())
        .unwrap_or_else(Rat::zero)
}

/// Exact superlevel-volume function, interpolated on each interval between
/// consecutive breakpoints from `n + 1` interior samples.
pub fn superlevel_volume(p: &LatticePolytope, f: &PLFunction) -> Result<SuperlevelVolume> {
    let f = f.canonicalize(p)?;
    let mut breakpoints: Vec<Rat> = f
        .subdivision_vertices(p)?
        .iter()
        .map(|v| f.eval(v))
        .collect();
    breakpoints.sort();
    breakpoints.dedup();
    let n = p.dim();
    let pieces = breakpoints
        .par_windows(2)
        .map(|w| {
            let width = &w[1] - &w[0];
            let samples: Vec<(Rat, Rat)> = (1..=n + 1)
                .map(|j| {
                    let t = Rat::new((j as i64).into(), (n as i64 + 2).into());
                    let lambda = &w[0] + &width * t;
                    let v = superlevel_volume_at(p, &f, &lambda);
                    (lambda, v)
                })
                .collect();
            interpolate(&samples)
        })
        .collect::<Result<Vec<_>>>()?;
    let top = breakpoints.last().unwrap().clone();
    Ok(SuperlevelVolume {
        total: p.volume(),
        top_volume: superlevel_volume_at(p, &f, &top),
        breakpoints,
        pieces,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex::AffinePiece;
    use crate::exactnum::{int, rat};

    #[test]
    fn linear_on_segment() {
        for d in 1..4 {
            let p = LatticePolytope::cube(1, int(0), int(1)).unwrap();
            let f = PLFunction::affine(vec![int(d)], int(0));
            let s = superlevel_volume(&p, &f).unwrap();
            assert_eq!(s.breakpoints, vec![int(0), int(d)]);
            assert_eq!(s.pieces[0], UniPoly::linear(rat(-1, d), int(1)));
            assert_eq!(s.top_volume, int(0));
        }
    }

    #[test]
    fn simplex_corner() {
        let eps = rat(1, 3);
        let p = LatticePolytope::simplex(2, int(1)).unwrap();
        let f = PLFunction::new(vec![
            AffinePiece::new(vec![int(0), int(0)], int(0)),
            AffinePiece::new(vec![int(1), int(1)], -eps.clone()),
        ])
        .unwrap();
        let s = superlevel_volume(&p, &f).unwrap();
        assert_eq!(s.breakpoints, vec![-eps.clone(), int(0)]);
        // 1/2 - (λ+ε)²/2
        let shift = UniPoly::linear(int(1), eps.clone());
        let expected = &UniPoly::constant(rat(1, 2)) - &(&shift * &shift).scale(&rat(1, 2));
        assert_eq!(s.pieces[0], expected);
        assert_eq!(s.top_volume, rat(1, 2) - &eps * &eps / int(2));
        assert_eq!(s.eval(&int(-1)), rat(1, 2));
        assert_eq!(s.eval(&int(1)), int(0));
    }

    #[test]
    fn constant_is_a_step() {
        let p = LatticePolytope::cube(2, int(0), int(1)).unwrap();
        let f = PLFunction::constant(2, int(3));
        let s = superlevel_volume(&p, &f).unwrap();
        assert!(s.pieces.is_empty());
        assert_eq!(s.eval(&int(3)), int(1));
        assert_eq!(s.eval(&int(2)), int(1));
        assert_eq!(s.eval(&rat(7, 2)), int(0));
    }
}
