use std::collections::BTreeMap;

use num_traits::Zero;

use super::{interpolate, Rat, UniPoly};
use crate::error::{Error, Result};

/// A polynomial that reproduces a sampled sequence from `stable_from` on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventualFit {
    pub poly: UniPoly,
    /// First sampled `m` from which every later sample agrees with `poly`.
    pub stable_from: u64,
}

/// Fits the polynomial of degree `<= degree_bound` that agrees with the tail of
/// `samples` restricted to the progression `m ∈ step·Z`.
///
/// A candidate is built from the last `degree_bound + 1` samples and accepted
/// only if it also reproduces the one before them, so at least
/// `degree_bound + 2` samples always confirm the fit. At least
/// `degree_bound + 3` samples on the progression are required.
pub fn fit_eventual_polynomial(
    samples: &BTreeMap<u64, Rat>,
    degree_bound: usize,
    step: u64,
) -> Result<EventualFit> {
    if step == 0 {
        return Err(Error::InvalidInput("progression step must be positive".into()));
    }
    let on_progression: Vec<(u64, &Rat)> = samples
        .iter()
        .filter(|(m, _)| **m % step == 0 && **m > 0)
        .map(|(m, v)| (*m, v))
        .collect();
    let needed = degree_bound + 3;
    if on_progression.len() < needed {
        return Err(Error::InvalidInput(format!(
            "need at least {needed} samples on the progression, got {}",
            on_progression.len()
        )));
    }
    let tail = &on_progression[on_progression.len() - (degree_bound + 1)..];
    let points: Vec<(Rat, Rat)> = tail
        .iter()
        .map(|(m, v)| (Rat::from_integer((*m).into()), (*v).clone()))
        .collect();
    let poly = interpolate(&points)?;

    let agrees = |(m, v): &(u64, &Rat)| poly.eval(&Rat::from_integer((*m).into())) == **v;
    let check_idx = on_progression.len() - (degree_bound + 2);
    if !agrees(&on_progression[check_idx]) {
        return Err(Error::NotEventuallyPolynomial { degree_bound, step });
    }
    let mut first = check_idx;
    while first > 0 && agrees(&on_progression[first - 1]) {
        first -= 1;
    }
    Ok(EventualFit {
        poly,
        stable_from: on_progression[first].0,
    })
}

/// Expansion of `num(m) / den(m)` at `m = ∞`.
///
/// Returns `(e, s)` with `num/den = m^e · (s[0] + s[1]/m + s[2]/m² + …)`,
/// truncated to `terms` coefficients.
pub fn expand_at_infinity(num: &UniPoly, den: &UniPoly, terms: usize) -> Result<(i64, Vec<Rat>)> {
    let dd = den
        .degree()
        .ok_or_else(|| Error::InvalidInput("division by the zero polynomial".into()))?;
    let Some(dn) = num.degree() else {
        return Ok((0, vec![Rat::zero(); terms]));
    };
    let a = |k: usize| if k <= dn { num.coeff(dn - k) } else { Rat::zero() };
    let b = |k: usize| if k <= dd { den.coeff(dd - k) } else { Rat::zero() };
    let b0 = b(0);
    let mut s: Vec<Rat> = Vec::with_capacity(terms);
    for k in 0..terms {
        let mut acc = a(k);
        for j in 1..=k {
            acc -= b(j) * &s[k - j];
        }
        s.push(acc / &b0);
    }
    Ok((dn as i64 - dd as i64, s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};

    fn sampled(range: impl Iterator<Item = u64>, f: impl Fn(u64) -> Rat) -> BTreeMap<u64, Rat> {
        range.map(|m| (m, f(m))).collect()
    }

    #[test]
    fn segment_lattice_count_stabilizes_immediately() {
        let samples = sampled(1..=8, |m| int(m as i64 + 1));
        let fit = fit_eventual_polynomial(&samples, 1, 1).unwrap();
        assert_eq!(fit.poly, UniPoly::linear(int(1), int(1)));
        assert_eq!(fit.stable_from, 1);
    }

    #[test]
    fn flagship_weight_sum_on_even_progression() {
        // Direct sum of floor(min(0, u - m/2)) over u = 0..=m, for even m.
        let samples = sampled((2..=16).step_by(2), |m| {
            let total: i64 = (0..=m as i64).map(|u| (u - m as i64 / 2).min(0)).sum();
            int(total)
        });
        let fit = fit_eventual_polynomial(&samples, 2, 2).unwrap();
        assert_eq!(
            fit.poly,
            UniPoly::from_coeffs(vec![int(0), rat(-1, 4), rat(-1, 8)])
        );
        assert_eq!(fit.stable_from, 2);
    }

    #[test]
    fn one_parameter_subgroup_weight_sum() {
        for d in 1..=3i64 {
            let samples = sampled(1..=7, |m| int((0..=m as i64).map(|u| d * u).sum()));
            let fit = fit_eventual_polynomial(&samples, 2, 1).unwrap();
            let expected = UniPoly::from_coeffs(vec![int(0), rat(d, 2), rat(d, 2)]);
            assert_eq!(fit.poly, expected);
            assert_eq!(fit.stable_from, 1);
        }
    }

    #[test]
    fn quasi_polynomial_is_rejected() {
        // floor(m/2) is not polynomial along all m.
        let samples = sampled(1..=10, |m| int(m as i64 / 2));
        let err = fit_eventual_polynomial(&samples, 1, 1).unwrap_err();
        assert!(matches!(err, Error::NotEventuallyPolynomial { .. }));
        // ... but it is along even m.
        assert!(fit_eventual_polynomial(&samples, 1, 2).is_ok());
    }

    #[test]
    fn late_stabilization_is_reported() {
        let samples = sampled(1..=10, |m| if m < 4 { int(100) } else { int(3 * m as i64) });
        let fit = fit_eventual_polynomial(&samples, 1, 1).unwrap();
        assert_eq!(fit.stable_from, 4);
    }

    #[test]
    fn too_few_samples() {
        let samples = sampled(1..=3, |m| int(m as i64));
        assert!(fit_eventual_polynomial(&samples, 1, 1).is_err());
    }

    #[test]
    fn expansion_of_flagship_ratio() {
        // w/(mN) with w = -(m^2+2m)/8, N = m+1.
        let w = UniPoly::from_coeffs(vec![int(0), rat(-1, 4), rat(-1, 8)]);
        let mn = UniPoly::from_coeffs(vec![int(0), int(1), int(1)]);
        let (e, s) = expand_at_infinity(&w, &mn, 3).unwrap();
        assert_eq!(e, 0);
        assert_eq!(s[0], rat(-1, 8));
        assert_eq!(s[1], rat(-1, 8));
        assert_eq!(s[2], rat(1, 8));
    }
}
