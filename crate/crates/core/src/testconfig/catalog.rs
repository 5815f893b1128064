//! Named polytopes and metrics, and the seeded random metric generator.

use rand::seq::SliceRandom;
use rand::Rng;

use super::ToricMetric;
use crate::convex::{AffinePiece, LatticePolytope, PLFunction};
use crate::error::{Error, Result};
use crate::exactnum::{int, parse_rat, rat, Rat};

/// Random metrics whose `N₀` exceeds this are redrawn, which keeps the
/// weight fits along `N₀·Z` cheap.
pub const RANDOM_N0_CAP: u64 = 24;

/// Polytopes sampled by the random generator.
pub const RANDOM_POLYTOPES: [&str; 4] = ["segment:1", "segment:2", "simplex:2", "square"];

fn parse_int(s: &str) -> Result<i64> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("expected an integer, got {s:?}")))
}

/// `segment:k` (`[0,k]`), `simplex:n` (standard `n`-simplex), `square`
/// (unit square), `cube:n`, or an anticanonical polytope
/// `anticanonical:p1|p2|p1xp1`.
pub fn catalog_polytope(name: &str) -> Result<LatticePolytope> {
    let (head, arg) = name.split_once(':').unwrap_or((name, ""));
    match head.trim() {
        "segment" => {
            let k = if arg.is_empty() { 1 } else { parse_int(arg)? };
            if k <= 0 {
                return Err(Error::InvalidInput("segment length must be positive".into()));
            }
            LatticePolytope::cube(1, int(0), int(k))
        }
        "simplex" => {
            let n = if arg.is_empty() { 2 } else { parse_int(arg)? };
            if !(1..=4).contains(&n) {
                return Err(Error::InvalidInput("simplex dimension must be in 1..=4".into()));
            }
            LatticePolytope::simplex(n as usize, int(1))
        }
        "square" => LatticePolytope::cube(2, int(0), int(1)),
        "cube" => {
            let n = if arg.is_empty() { 3 } else { parse_int(arg)? };
            if !(1..=4).contains(&n) {
                return Err(Error::InvalidInput("cube dimension must be in 1..=4".into()));
            }
            LatticePolytope::cube(n as usize, int(0), int(1))
        }
        "anticanonical" => anticanonical_polytope(arg),
        _ => Err(Error::Parse(format!("unknown polytope {name:?}"))),
    }
}

/// Polytope of `−K_X` for `p1` (as `[0,2]`), `p2` and `p1xp1`.
pub fn anticanonical_polytope(name: &str) -> Result<LatticePolytope> {
    match name.trim() {
        "p1" => LatticePolytope::cube(1, int(0), int(2)),
        "p2" => LatticePolytope::from_vertices(
            2,
            vec![vec![int(-1), int(-1)], vec![int(2), int(-1)], vec![int(-1), int(2)]],
        ),
        "p1xp1" => LatticePolytope::cube(2, int(-1), int(1)),
        _ => Err(Error::Parse(format!("unknown anticanonical polytope {name:?}"))),
    }
}

/// `p1-onePS:d`, `pn-blowup:n,eps`, or `trivial:c` (on `default_polytope`,
/// or `[0,1]` when none is given).
pub fn catalog_metric(name: &str, default_polytope: Option<&LatticePolytope>) -> Result<ToricMetric> {
    let (head, arg) = name.split_once(':').unwrap_or((name, ""));
    let unit = || LatticePolytope::cube(1, int(0), int(1));
    match head.trim() {
        "p1-onePS" => {
            let d = if arg.is_empty() { int(1) } else { parse_rat(arg)? };
            ToricMetric::from_one_ps(unit()?, vec![d], int(0))
        }
        "pn-blowup" => {
            let (n, eps) = arg
                .split_once(',')
                .ok_or_else(|| Error::Parse("pn-blowup expects n,eps".into()))?;
            let n = parse_int(n)?;
            if !(1..=4).contains(&n) {
                return Err(Error::InvalidInput("pn-blowup dimension must be in 1..=4".into()));
            }
            let p = LatticePolytope::simplex(n as usize, int(1))?;
            let origin = vec![int(0); n as usize];
            ToricMetric::deformation_to_normal_cone(p, &origin, &parse_rat(eps)?)
        }
        "trivial" => {
            let c = if arg.is_empty() { int(0) } else { parse_rat(arg)? };
            let p = match default_polytope {
                Some(p) => p.clone(),
                None => unit()?,
            };
            ToricMetric::trivial(p, c)
        }
        _ => Err(Error::Parse(format!("unknown metric {name:?}"))),
    }
}

pub fn random_polytope<R: Rng>(rng: &mut R) -> LatticePolytope {
    let name = RANDOM_POLYTOPES.choose(rng).expect("nonempty list");
    catalog_polytope(name).expect("catalog polytope")
}

fn half_integer<R: Rng>(rng: &mut R, bound: i64) -> Rat {
    rat(rng.gen_range(-bound..=bound), *[1, 2].choose(rng).unwrap())
}

/// Random metric on `p`: 2 to 4 pieces with slope entries in `{−3..3}/{1,2}`
/// and constants in `{−2..2}/{1,2}`, canonicalized. Draws with
/// `N₀ > RANDOM_N0_CAP` are rejected and redrawn.
pub fn random_metric<R: Rng>(rng: &mut R, p: &LatticePolytope) -> ToricMetric {
    loop {
        let k = rng.gen_range(2..=4);
        let pieces: Vec<AffinePiece> = (0..k)
            .map(|_| {
                let a = (0..p.dim()).map(|_| half_integer(rng, 3)).collect();
                AffinePiece::new(a, half_integer(rng, 2))
            })
            .collect();
        let f = PLFunction::new(pieces).expect("pieces share the dimension");
        if let Ok(phi) = ToricMetric::new(p.clone(), f) {
            if phi.n0() <= RANDOM_N0_CAP {
                return phi;
            }
        }
    }
}
