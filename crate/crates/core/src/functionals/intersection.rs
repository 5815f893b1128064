use num_traits::Zero;

use crate::convex::{mixed_volume, LatticePolytope, PLFunction};
use crate::error::{Error, Result};
use crate::exactnum::{ceil_int, factorial, Rat};
use crate::testconfig::{ToricMetric, ToricPair};

/// Body `{(x, s) : x ∈ P, 0 ≤ s ≤ f(x) + shift}`, for `f + shift ≥ 0`.
fn epigraph_body(p: &LatticePolytope, f: &PLFunction, shift: &Rat) -> Result<LatticePolytope> {
    let mut pts: Vec<Vec<Rat>> = p
        .vertices()
        .iter()
        .map(|v| {
            let mut w = v.clone();
            w.push(Rat::zero());
            w
        })
        .collect();
    for v in slot_vertices(p, f)? {
        let h = f.eval(&v) + shift;
        let mut w = v;
        w.push(h);
        pts.push(w);
    }
    LatticePolytope::from_vertices(p.dim() + 1, pts)
}

/// Break points of `f` on `p`. Lower-dimensional polytopes (nef but not
/// big classes) only carry affine functions.
fn slot_vertices(p: &LatticePolytope, f: &PLFunction) -> Result<Vec<Vec<Rat>>> {
    if p.is_full_dimensional() {
        return f.subdivision_vertices(p);
    }
    if f.pieces().len() != 1 {
        return Err(Error::InvalidInput("non-affine function on a degenerate polytope".into()));
    }
    Ok(p.vertices().to_vec())
}

fn slot_min(p: &LatticePolytope, f: &PLFunction) -> Result<Rat> {
    Ok(slot_vertices(p, f)?.iter().map(|v| f.eval(v)).min().expect("nonempty polytope"))
}

/// Intersection number of `n + 1` metrics, each a concave PL function on the
/// polytope of its (nef) line bundle.
pub(crate) fn intersect_slots(slots: &[(&LatticePolytope, &PLFunction)]) -> Result<Rat> {
    let n = slots[0].0.dim();
    if slots.len() != n + 1 {
        return Err(Error::DimensionMismatch {
            expected: n + 1,
            found: slots.len(),
        });
    }
    let shifts: Vec<Rat> = slots.iter().map(|(p, f)| slot_min(p, f).map(|m| -m)).collect::<Result<_>>()?;
    let bodies: Vec<LatticePolytope> = slots
        .iter()
        .zip(&shifts)
        .map(|((p, f), c)| epigraph_body(p, f, c))
        .collect::<Result<_>>()?;
    let mut total = factorial(n + 1) * mixed_volume(&bodies)?;
    for (i, c) in shifts.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let rest: Vec<LatticePolytope> = slots
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, (p, _))| (*p).clone())
            .collect();
        total -= c * factorial(n) * mixed_volume(&rest)?;
    }
    Ok(total)
}

fn same_polytope(metrics: &[&ToricMetric]) -> Result<()> {
    let p = metrics[0].polytope();
    if metrics.iter().any(|m| m.polytope() != p) {
        return Err(Error::InvalidInput("metrics live on different polytopes".into()));
    }
    Ok(())
}

/// `(φ_0 · … · φ_n)` for metrics on the same polarized toric variety.
pub fn intersection_number(metrics: &[&ToricMetric]) -> Result<Rat> {
    if metrics.is_empty() {
        return Err(Error::InvalidInput("no metrics".into()));
    }
    same_polytope(metrics)?;
    let slots: Vec<(&LatticePolytope, &PLFunction)> =
        metrics.iter().map(|m| (m.polytope(), m.function())).collect();
    intersect_slots(&slots)
}

/// `(D_triv · φ_1 · … · φ_n)` for a torus-invariant Q-divisor `D = Σ d_ρ D_ρ`
/// carrying its trivial metric. `D` is written as `(D + N·L) − N·L` with
/// `D + N·L` nef, for the least integer `N` that works.
pub fn intersection_with_divisor(pair: &ToricPair, d: &[Rat], metrics: &[&ToricMetric]) -> Result<Rat> {
    if metrics.is_empty() {
        return Err(Error::InvalidInput("no metrics".into()));
    }
    same_polytope(metrics)?;
    let p = metrics[0].polytope();
    pair.check_matches(p)?;
    let n = p.dim();
    let dl = ToricPair::polarization_coeffs(p);
    let bound = |v: &[Rat]| v.iter().map(|x| x.clone().max(-x.clone())).max().unwrap_or_else(Rat::zero);
    let cap = ceil_int(&(Rat::from_integer(2.into()) * (bound(d) + bound(&dl) + Rat::from_integer(1.into()))));
    let cap: u64 = cap.try_into().unwrap_or(u64::MAX);
    let zero = PLFunction::constant(n, Rat::zero());
    for big_n in 0..=cap {
        let nr = Rat::from_integer(big_n.into());
        let shifted: Vec<Rat> = d.iter().zip(&dl).map(|(x, l)| x + &nr * l).collect();
        let Some(pd) = pair.nef_polytope(&shifted) else {
            continue;
        };
        let mut slots: Vec<(&LatticePolytope, &PLFunction)> = vec![(&pd, &zero)];
        slots.extend(metrics.iter().map(|m| (m.polytope(), m.function())));
        let mut value = intersect_slots(&slots)?;
        if big_n > 0 {
            slots[0] = (p, &zero);
            value -= nr * intersect_slots(&slots)?;
        }
        return Ok(value);
    }
    Err(Error::NefDecomposition(cap))
}
