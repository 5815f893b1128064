use std::fmt;

use itertools::Itertools;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::convex::LatticePolytope;
use crate::error::{Error, Result};
use num_bigint::BigInt;

use crate::exactnum::{denominator_lcm, serde_rat_vec, Rat};

const VARS: [char; 4] = ['x', 'y', 'z', 't'];

/// Monomial valuation `x^u ↦ ⟨w, u⟩` with `w ≥ 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MonomialValuation {
    #[serde(with = "serde_rat_vec")]
    pub w: Vec<Rat>,
}

impl MonomialValuation {
    pub fn new(w: Vec<Rat>) -> Result<Self> {
        if w.iter().any(|x| *x < Rat::zero()) {
            return Err(Error::InvalidInput("monomial valuation weights must be nonnegative".into()));
        }
        Ok(MonomialValuation { w })
    }

    pub fn trivial(n: usize) -> Self {
        MonomialValuation {
            w: vec![Rat::zero(); n],
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.w.iter().all(Zero::is_zero)
    }

    pub fn eval_monomial(&self, u: &[u64]) -> Rat {
        self.w
            .iter()
            .zip(u)
            .map(|(w, &e)| w * Rat::from_integer(e.into()))
            .sum()
    }

    /// `v(𝔞) = min over generators`.
    pub fn eval_ideal(&self, ideal: &MonomialIdeal) -> Rat {
        ideal
            .gens
            .iter()
            .map(|g| self.eval_monomial(g))
            .min()
            .expect("ideal has a generator")
    }
}

/// `ord_x` for coordinate valuations, otherwise `val(p)` scaled: the
/// primitive integral weight `p` followed by `/k` or `*k`.
impl fmt::Display for MonomialValuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "val({})", self.w.iter().join(","));
        }
        let prim = crate::convex::linalg::primitive_integer(&self.w);
        let idx = prim.iter().position(|x| !x.is_zero()).expect("nonzero weight");
        let scale = &self.w[idx] / Rat::from_integer(prim[idx].clone());
        let nonzero = prim.iter().filter(|x| !x.is_zero()).count();
        if scale.is_one() && nonzero == 1 && prim[idx].is_one() && idx < VARS.len() {
            return write!(f, "ord_{}", VARS[idx]);
        }
        write!(f, "val({})", prim.iter().join(","))?;
        if scale.is_one() {
            Ok(())
        } else if scale.numer().is_one() {
            write!(f, "/{}", scale.denom())
        } else {
            write!(f, "*{scale}")
        }
    }
}

/// Gauss extension `G(v)(Σ f_λ t^λ) = min_λ (v(f_λ) + λ)`, each coefficient
/// `f_λ` given by one monomial of its support.
pub fn gauss_extension_eval(v: &MonomialValuation, laurent: &[(Vec<u64>, i64)]) -> Result<Rat> {
    laurent
        .iter()
        .map(|(u, lambda)| v.eval_monomial(u) + Rat::from_integer((*lambda).into()))
        .min()
        .ok_or_else(|| Error::InvalidInput("empty Laurent polynomial".into()))
}

/// Monomial ideal given by a minimal set of exponent vectors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonomialIdeal {
    nvars: usize,
    gens: Vec<Vec<u64>>,
}

fn divides(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

impl MonomialIdeal {
    /// Ideal generated by the given monomials; non-minimal generators are dropped.
    pub fn new(nvars: usize, gens: Vec<Vec<u64>>) -> Result<Self> {
        if nvars == 0 {
            return Err(Error::InvalidInput("need at least one variable".into()));
        }
        if gens.is_empty() {
            return Err(Error::InvalidInput("the zero ideal is not supported".into()));
        }
        if let Some(g) = gens.iter().find(|g| g.len() != nvars) {
            return Err(Error::DimensionMismatch {
                expected: nvars,
                found: g.len(),
            });
        }
        let mut gens = gens;
        gens.sort();
        gens.dedup();
        let minimal: Vec<Vec<u64>> = gens
            .iter()
            .filter(|g| !gens.iter().any(|h| h != *g && divides(h, g)))
            .cloned()
            .collect();
        Ok(MonomialIdeal {
            nvars,
            gens: minimal,
        })
    }

    /// Parses `"x^2,y"`; variables are `x, y, z, t` and `1` is the unit
    /// monomial. The number of variables is `nvars`, or else the index of
    /// the last variable used.
    pub fn parse(s: &str, nvars: Option<usize>) -> Result<Self> {
        let mut gens: Vec<Vec<u64>> = Vec::new();
        for mono in s.split(',') {
            let mut e = vec![0u64; VARS.len()];
            let mono = mono.trim();
            if mono.is_empty() {
                return Err(Error::Parse(format!("empty monomial in {s:?}")));
            }
            if mono != "1" {
                for factor in mono.split('*') {
                    let factor = factor.trim();
                    let (var, exp) = match factor.split_once('^') {
                        Some((v, k)) => (
                            v.trim(),
                            k.trim()
                                .parse::<u64>()
                                .map_err(|_| Error::Parse(format!("bad exponent in {factor:?}")))?,
                        ),
                        None => (factor, 1),
                    };
                    let mut chars = var.chars();
                    let (Some(c), None) = (chars.next(), chars.next()) else {
                        return Err(Error::Parse(format!("bad variable {var:?}")));
                    };
                    let idx = VARS
                        .iter()
                        .position(|&v| v == c)
                        .ok_or_else(|| Error::Parse(format!("unknown variable {c:?}")))?;
                    e[idx] += exp;
                }
            }
            gens.push(e);
        }
        let used = gens
            .iter()
            .filter_map(|g| g.iter().rposition(|&x| x > 0))
            .max()
            .map_or(1, |i| i + 1);
        let n = nvars.unwrap_or(used);
        if n < used {
            return Err(Error::Parse(format!("{s:?} uses more than {n} variables")));
        }
        for g in gens.iter_mut() {
            g.truncate(n);
            g.resize(n, 0);
        }
        Self::new(n, gens)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn gens(&self) -> &[Vec<u64>] {
        &self.gens
    }

    pub fn is_unit(&self) -> bool {
        self.gens.iter().any(|g| g.iter().all(|&e| e == 0))
    }

    /// `𝔞 + (x_{n+1})` in one more variable.
    pub fn add_new_variable(&self) -> Self {
        let mut gens: Vec<Vec<u64>> = self
            .gens
            .iter()
            .map(|g| {
                let mut h = g.clone();
                h.push(0);
                h
            })
            .collect();
        let mut t = vec![0; self.nvars + 1];
        t[self.nvars] = 1;
        gens.push(t);
        Self::new(self.nvars + 1, gens).expect("extended ideal is valid")
    }

    /// Truncation `Newton(𝔞) ∩ [0, R]^n` for `R` beyond every exponent.
    fn truncated_newton_polytope(&self) -> LatticePolytope {
        let r = self.gens.iter().flatten().max().copied().unwrap_or(0) + 1;
        let mut pts: Vec<Vec<Rat>> = Vec::new();
        for g in &self.gens {
            for mask in 0..(1u32 << self.nvars) {
                pts.push(
                    g.iter()
                        .enumerate()
                        .map(|(i, &e)| {
                            let e = if mask & (1 << i) != 0 { r } else { e };
                            Rat::from_integer(e.into())
                        })
                        .collect(),
                );
            }
        }
        LatticePolytope::from_vertices(self.nvars, pts).expect("Newton truncation is valid")
    }
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let monos = self.gens.iter().map(|g| {
            let parts: Vec<String> = g
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| {
                    let v = VARS.get(i).copied().unwrap_or('?');
                    if e == 1 {
                        v.to_string()
                    } else {
                        format!("{v}^{e}")
                    }
                })
                .collect();
            if parts.is_empty() {
                "1".to_string()
            } else {
                parts.join("*")
            }
        });
        write!(f, "({})", monos.format(","))
    }
}

/// Rees valuations of a monomial ideal: one per facet of the Newton
/// polyhedron whose primitive normal is nonnegative and positive on the
/// ideal, scaled so that `v(𝔞) = 1`. Sorted.
pub fn rees_valuations(ideal: &MonomialIdeal) -> Vec<MonomialValuation> {
    if ideal.is_unit() {
        return Vec::new();
    }
    let newton = ideal.truncated_newton_polytope();
    let mut out: Vec<MonomialValuation> = newton
        .facets()
        .iter()
        .filter(|f| f.normal.iter().all(|x| *x >= Zero::zero()))
        .filter_map(|f| {
            let w = f.normal_rat();
            let v = MonomialValuation { w };
            let value = v.eval_ideal(ideal);
            (value > Rat::zero()).then(|| MonomialValuation {
                w: v.w.iter().map(|x| x / &value).collect(),
            })
        })
        .collect();
    out.sort();
    out
}

/// `x^u ∈ closure(𝔞^m)`, tested against every Rees valuation.
pub fn in_integral_closure(u: &[u64], ideal: &MonomialIdeal, m: u64) -> bool {
    IntegralClosure::new(ideal).contains(u, m)
}

/// Membership in the integral closures of all powers of one ideal, with the
/// Rees valuations computed once and cleared of denominators.
#[derive(Debug, Clone)]
pub struct IntegralClosure {
    /// `(W, L)` with `v(u) ≥ m ⇔ ⟨W, u⟩ ≥ m·L`.
    forms: Vec<(Vec<BigInt>, BigInt)>,
}

impl IntegralClosure {
    pub fn new(ideal: &MonomialIdeal) -> Self {
        let forms = rees_valuations(ideal)
            .into_iter()
            .map(|v| {
                let l = denominator_lcm(v.w.iter());
                let lr = Rat::from_integer(l.clone());
                let w = v.w.iter().map(|x| (x * &lr).to_integer()).collect();
                (w, l)
            })
            .collect();
        IntegralClosure { forms }
    }

    /// `x^u ∈ closure(𝔞^m)`.
    pub fn contains(&self, u: &[u64], m: u64) -> bool {
        self.forms.iter().all(|(w, l)| {
            let lhs: BigInt = w.iter().zip(u).map(|(a, x)| a * BigInt::from(*x)).sum();
            lhs >= l * BigInt::from(m)
        })
    }
}

/// One Rees valuation of `𝔞 + (t)`, read back on the original variables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeformationComponent {
    /// Valuation on `n + 1` variables, normalized on `𝔞 + (t)`.
    pub valuation: MonomialValuation,
    /// `ord_E(t)` for the primitive integral normal.
    pub b: u64,
    /// `b^{-1}·r(ord_E)`: restriction to the first `n` variables.
    pub restriction: MonomialValuation,
    /// Whether the restriction is the trivial valuation (the strict transform
    /// of the original central fiber).
    pub trivial: bool,
}

/// Rees valuations of the deformation to the normal cone of `𝔞`, i.e. of
/// `𝔞 + (t)`, together with the `t`-adic component `ord_t`.
pub fn rees_of_deformation(ideal: &MonomialIdeal) -> Result<Vec<DeformationComponent>> {
    let n = ideal.nvars();
    let extended = ideal.add_new_variable();
    let mut out = Vec::new();
    for v in rees_valuations(&extended) {
        let wt = v.w[n].clone();
        if !wt.is_one() {
            return Err(Error::violation(
                "value on t of a Rees valuation of a+(t)",
                format!("{v} takes value {wt} on t"),
            ));
        }
        let prim = crate::convex::linalg::primitive_integer(&v.w);
        let b = prim[n].clone();
        let b_rat = Rat::from_integer(b.clone());
        let restriction = MonomialValuation {
            w: prim[..n].iter().map(|x| Rat::from_integer(x.clone()) / &b_rat).collect(),
        };
        out.push(DeformationComponent {
            trivial: restriction.is_trivial(),
            b: b.try_into().map_err(|_| Error::InvalidInput("multiplicity overflow".into()))?,
            restriction,
            valuation: v,
        });
    }
    let mut t = vec![Rat::zero(); n + 1];
    t[n] = Rat::one();
    out.push(DeformationComponent {
        valuation: MonomialValuation { w: t },
        b: 1,
        restriction: MonomialValuation::trivial(n),
        trivial: true,
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{int, rat};

    fn val(w: &[Rat]) -> MonomialValuation {
        MonomialValuation::new(w.to_vec()).unwrap()
    }

    #[test]
    fn parse_and_display() {
        let a = MonomialIdeal::parse("x^2, y, x^3*y", None).unwrap();
        assert_eq!(a.nvars(), 2);
        assert_eq!(a.gens(), &[vec![0, 1], vec![2, 0]]);
        assert_eq!(a.to_string(), "(y,x^2)");
        assert!(MonomialIdeal::parse("1", Some(2)).unwrap().is_unit());
        assert!(MonomialIdeal::parse("w^2", None).is_err());
        assert!(MonomialIdeal::parse("x^a", None).is_err());
    }

    #[test]
    fn valuation_display() {
        assert_eq!(val(&[rat(1, 2), int(1)]).to_string(), "val(1,2)/2");
        assert_eq!(val(&[int(1), int(0)]).to_string(), "ord_x");
        assert_eq!(val(&[int(0), int(2)]).to_string(), "val(0,1)*2");
        assert_eq!(val(&[int(1), int(1)]).to_string(), "val(1,1)");
        assert_eq!(MonomialValuation::trivial(2).to_string(), "val(0,0)");
    }

    #[test]
    fn gauss_extension() {
        let v = val(&[rat(1, 2), int(1)]);
        assert_eq!(gauss_extension_eval(&v, &[(vec![0, 0], 1)]).unwrap(), int(1));
        assert_eq!(gauss_extension_eval(&v, &[(vec![1, 1], -1)]).unwrap(), rat(1, 2));
        let triv = MonomialValuation::trivial(2);
        let f = [(vec![3, 1], 2), (vec![0, 5], -1)];
        assert_eq!(gauss_extension_eval(&triv, &f).unwrap(), int(-1));
        assert!(gauss_extension_eval(&v, &[]).is_err());
    }

    #[test]
    fn rees_examples() {
        let a = MonomialIdeal::parse("x^2,y", None).unwrap();
        assert_eq!(rees_valuations(&a), vec![val(&[rat(1, 2), int(1)])]);
        for k in 1..5 {
            let p = MonomialIdeal::new(1, vec![vec![k]]).unwrap();
            assert_eq!(rees_valuations(&p), vec![val(&[rat(1, k as i64)])]);
        }
        let p = MonomialIdeal::parse("x^3", Some(2)).unwrap();
        assert_eq!(rees_valuations(&p), vec![val(&[rat(1, 3), int(0)])]);
        let mx = MonomialIdeal::parse("x,y", None).unwrap();
        assert_eq!(rees_valuations(&mx), vec![val(&[int(1), int(1)])]);
        assert!(rees_valuations(&MonomialIdeal::parse("1", Some(2)).unwrap()).is_empty());
    }

    #[test]
    fn membership() {
        let a = MonomialIdeal::parse("x^2,y", None).unwrap();
        assert!(in_integral_closure(&[1, 1], &a, 1));
        assert!(!in_integral_closure(&[1, 0], &a, 1));
        for g in a.gens() {
            assert!(in_integral_closure(g, &a, 1));
        }
    }

    #[test]
    fn deformation_examples() {
        let mx = MonomialIdeal::parse("x,y", None).unwrap();
        let comps = rees_of_deformation(&mx).unwrap();
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0].valuation, val(&[int(1), int(1), int(1)]));
        assert_eq!(comps[0].b, 1);
        assert_eq!(comps[0].restriction, val(&[int(1), int(1)]));
        assert!(comps[1].trivial);

        let a = MonomialIdeal::parse("x^2,y", None).unwrap();
        let comps = rees_of_deformation(&a).unwrap();
        let nontrivial: Vec<_> = comps.iter().filter(|c| !c.trivial).collect();
        assert_eq!(nontrivial.len(), 1);
        assert_eq!(nontrivial[0].b, 2);
        assert_eq!(nontrivial[0].restriction, val(&[rat(1, 2), int(1)]));

        let unit = MonomialIdeal::parse("1", Some(2)).unwrap();
        let comps = rees_of_deformation(&unit).unwrap();
        assert_eq!(comps.len(), 1);
        assert!(comps[0].trivial);
    }
}
