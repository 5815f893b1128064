//! Randomized invariants over small exact inputs.

mod common;

use common::*;
use kstab::convex::{mixed_volume, superlevel_volume_at, AffinePiece, LatticePolytope, PLFunction};
use kstab::exactnum::{interpolate, UniPoly};
use kstab::filtration::{scaled_weight_measure, successive_minima};
use kstab::functionals::{check_inequalities, FunctionalReport};
use kstab::measures::{DensityPiece, LpExponent, PPMeasure};
use kstab::testconfig::{catalog_polytope, PairClass, ToricMetric, ToricPair, RANDOM_POLYTOPES};
use kstab::Rat;
use proptest::prelude::*;
use proptest::strategy::ValueTree;
use std::collections::BTreeSet;

fn small_rat() -> impl Strategy<Value = Rat> {
    (-12i64..=12, 1i64..=4).prop_map(|(n, d)| q(n, d))
}

fn half_integer(bound: i64) -> impl Strategy<Value = Rat> {
    (-bound..=bound, 1i64..=2).prop_map(|(n, d)| q(n, d))
}

/// A metric from raw pieces on one of the small catalog polytopes.
fn metric() -> impl Strategy<Value = ToricMetric> {
    (0..RANDOM_POLYTOPES.len())
        .prop_flat_map(|k| {
            let p = catalog_polytope(RANDOM_POLYTOPES[k]).unwrap();
            let n = p.dim();
            let piece = (prop::collection::vec(half_integer(3), n), half_integer(2));
            (Just(p), prop::collection::vec(piece, 1..=4))
        })
        .prop_filter_map("N0 too large", |(p, raw)| {
            let pieces = raw.into_iter().map(|(a, c)| AffinePiece::new(a, c)).collect();
            let phi = ToricMetric::new(p, PLFunction::new(pieces).ok()?).ok()?;
            (phi.n0() <= 12).then_some(phi)
        })
}

/// Atoms plus polynomial pieces on disjoint intervals, normalized to mass 1.
fn measure() -> impl Strategy<Value = PPMeasure> {
    let atoms = prop::collection::vec((small_rat(), 1i64..=5), 0..=3);
    let pieces = prop::collection::vec((1i64..=3, prop::collection::vec(0i64..=3, 1..=3)), 0..=3);
    (atoms, pieces, small_rat())
        .prop_filter("empty", |(a, p, _)| !a.is_empty() || !p.is_empty())
        .prop_map(|(atoms, pieces, start)| {
            let mut lo = start;
            let mut parts = Vec::new();
            for (width, coeffs) in pieces {
                let hi = &lo + z(width);
                // 1 + nonnegative coefficients keeps the density positive on any interval.
                let mut c: Vec<Rat> = coeffs.into_iter().map(z).collect();
                c[0] += z(1);
                let shift = UniPoly::from_coeffs(c).compose_affine(&z(1), &-lo.clone());
                parts.push(DensityPiece { lo: lo.clone(), hi: hi.clone(), density: shift });
                lo = hi;
            }
            let atoms: Vec<(Rat, Rat)> = atoms.into_iter().map(|(x, w)| (x, z(w))).collect();
            let total: Rat = atoms.iter().map(|(_, w)| w.clone()).sum::<Rat>()
                + parts.iter().map(DensityPiece::mass).sum::<Rat>();
            let atoms = atoms.into_iter().map(|(x, w)| (x, w / &total)).collect();
            let parts = parts
                .into_iter()
                .map(|p| DensityPiece { density: p.density.scale(&(z(1) / &total)), ..p })
                .collect();
            PPMeasure::new(atoms, parts).unwrap()
        })
}

fn lattice_polygon() -> impl Strategy<Value = LatticePolytope> {
    prop::collection::vec((-3i64..=3, -3i64..=3), 3..=6).prop_filter_map("degenerate", |pts| {
        let pts = pts.into_iter().map(|(x, y)| vec![z(x), z(y)]).collect();
        let p = LatticePolytope::from_vertices(2, pts).ok()?;
        p.is_full_dimensional().then_some(p)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn interpolation_reproduces_its_points(xs in prop::collection::btree_set(-20i64..=20, 1..=7),
                                           ys in prop::collection::vec(small_rat(), 7)) {
        let pts: Vec<(Rat, Rat)> = xs.iter().zip(&ys).map(|(&x, y)| (z(x), y.clone())).collect();
        let poly = interpolate(&pts).unwrap();
        prop_assert!(poly.degree().is_none_or(|d| d < pts.len()));
        for (x, y) in &pts {
            prop_assert_eq!(&poly.eval(x), y);
        }
        let trim = |mut c: Vec<Rat>| {
            while c.last().is_some_and(|x| *x == z(0)) {
                c.pop();
            }
            c
        };
        prop_assert_eq!(trim(lagrange(&pts)), trim(poly.coeffs().to_vec()));
    }

    #[test]
    fn pushforward_moves_moments_and_norms(mu in measure(), alpha in small_rat(), beta in small_rat()) {
        prop_assume!(alpha != z(0));
        let nu = mu.pushforward_affine(&alpha, &beta).unwrap();
        prop_assert!(nu.is_probability());
        prop_assert_eq!(nu.moment(1), &alpha * mu.moment(1) + &beta);
        let second = |m: &PPMeasure| m.moment(2) - m.moment(1) * m.moment(1);
        prop_assert_eq!(second(&nu), &alpha * &alpha * second(&mu));
        let l1 = |m: &PPMeasure| m.central_lp_norm(LpExponent::Finite(1)).unwrap().norm.unwrap();
        prop_assert_eq!(l1(&nu), abs(&alpha) * l1(&mu));
        let linf = |m: &PPMeasure| m.central_lp_norm(LpExponent::Infinity).unwrap().norm.unwrap();
        prop_assert_eq!(linf(&nu), abs(&alpha) * linf(&mu));
        prop_assert_eq!(mu.tail_sup_distance(&mu), z(0));
    }

    #[test]
    fn tails_are_monotone_and_bounded(mu in measure()) {
        let mut pts: Vec<Rat> = mu.breakpoints();
        let (lo, hi) = mu.support().unwrap();
        pts.push(&lo - z(1));
        pts.push(&hi + z(1));
        pts.sort();
        let mut prev = z(1);
        for x in &pts {
            let t = mu.cdf_tail(x);
            prop_assert!(t <= prev && t >= z(0));
            prop_assert!(mu.cdf_tail_strict(x) <= t);
            prev = t;
        }
        prop_assert_eq!(mu.cdf_tail(&lo), z(1));
        prop_assert_eq!(mu.cdf_tail_strict(&hi), z(0));
    }

    #[test]
    fn mixed_volume_is_symmetric_and_polarizes(p in lattice_polygon(), r in lattice_polygon()) {
        let pr = mixed_volume(&[p.clone(), r.clone()]).unwrap();
        prop_assert_eq!(&pr, &mixed_volume(&[r.clone(), p.clone()]).unwrap());
        prop_assert_eq!(mixed_volume(&[p.clone(), p.clone()]).unwrap(), p.volume());
        let sum = p.minkowski_sum(&r).unwrap();
        prop_assert_eq!(sum.volume(), p.volume() + z(2) * pr + r.volume());
    }

    #[test]
    fn lattice_counts_match_a_box_scan(p in lattice_polygon(), m in 1u64..=3) {
        let mut engine = p.lattice_points(m);
        let mut oracle = lattice_points(&p, m);
        engine.sort();
        oracle.sort();
        prop_assert_eq!(engine, oracle);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn canonical_form_agrees_pointwise(phi in metric()) {
        let p = phi.polytope();
        let canon = phi.function().canonicalize(p).unwrap();
        prop_assert!(canon.equal_on(phi.function(), p).unwrap());
        for x in p.lattice_points(2) {
            let x: Vec<Rat> = x.into_iter().map(|v| q(v, 2)).collect();
            prop_assert_eq!(canon.eval(&x), phi.function().eval(&x));
        }
    }

    #[test]
    fn superlevel_volume_is_monotone(phi in metric()) {
        let p = phi.polytope();
        let (lo, hi) = (phi.lambda_min(), phi.lambda_max());
        prop_assert_eq!(superlevel_volume_at(p, phi.function(), &lo), p.volume());
        prop_assert_eq!(superlevel_volume_at(p, phi.function(), &(&hi + z(1))), z(0));
        let mut prev = p.volume();
        for k in 0..=10 {
            let v = superlevel_volume_at(p, phi.function(), &(&lo + (&hi - &lo) * q(k, 10)));
            prop_assert!(v <= prev);
            prev = v;
        }
    }

    #[test]
    fn weights_match_floors(phi in metric(), m in 1u64..=4) {
        let mut engine = phi.weights_at(m);
        let mut oracle = floor_weights(&phi, m);
        engine.sort();
        oracle.sort();
        prop_assert_eq!(&engine, &oracle);
        let gw = phi.filtration_of(m).unwrap();
        let total: i64 = oracle.iter().map(|(_, w)| *w).sum();
        prop_assert_eq!(gw.total_weight(), total.into());
        prop_assert_eq!(gw.dimension() as usize, oracle.len());
        let minima = successive_minima(&gw).unwrap();
        prop_assert!(minima.windows(2).all(|w| w[0].0 > w[1].0));
        let mu = scaled_weight_measure(&gw).unwrap();
        prop_assert_eq!(mu.moment(1), q(total, (m as i64) * oracle.len() as i64));
    }

    #[test]
    fn reports_satisfy_identities(phi in metric(), c in half_integer(3)) {
        let pair = ToricPair::trivial(phi.polytope());
        let r = FunctionalReport::compute(&phi, &pair).unwrap();
        prop_assert_eq!(&r.mabuchi, &(&r.entropy + &r.ricci + &r.s_bar * &r.energy));
        prop_assert!(r.j >= z(0) && r.error_term >= z(0));
        prop_assert_eq!(&r.j, &(&r.lambda_max - &r.energy));
        prop_assert_eq!(check_inequalities(&r, PairClass::Klt), Vec::<String>::new());
        let dh = phi.dh_exact().unwrap();
        prop_assert_eq!(dh.barycenter(), r.energy.clone());
        prop_assert_eq!(dh.support(), Some((r.lambda_min.clone(), r.lambda_max.clone())));

        let shifted = FunctionalReport::compute(&phi.translate(&c), &pair).unwrap();
        prop_assert_eq!(&shifted.energy, &(&r.energy + &c));
        prop_assert_eq!(&shifted.j, &r.j);
        prop_assert_eq!(&shifted.l1, &r.l1);
        prop_assert_eq!(&shifted.mabuchi, &r.mabuchi);
        prop_assert_eq!(&shifted.df, &r.df);
    }
}

#[test]
fn polygon_strategy_is_not_trivial() {
    // Guard against the filter rejecting everything.
    let mut runner = proptest::test_runner::TestRunner::deterministic();
    let mut seen = BTreeSet::new();
    for _ in 0..20 {
        let p = lattice_polygon().new_tree(&mut runner).unwrap().current();
        seen.insert(p.vertices().len());
    }
    assert!(seen.len() > 1);
}
