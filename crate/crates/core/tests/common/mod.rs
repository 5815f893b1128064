//! Test-side oracles. Everything here is computed from first principles
//! (lattice point counts, floor weights, Lagrange interpolation) and never
//! calls the engine routine it is used to check.
#![allow(dead_code)]

use kstab::convex::LatticePolytope;
use kstab::testconfig::{random_metric, random_polytope, ToricMetric};
use kstab::Rat;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn q(n: i64, d: i64) -> Rat {
    Rat::new(n.into(), d.into())
}

pub fn z(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `count` metrics from the library generator on its random polytopes.
pub fn random_metrics(seed: u64, count: usize) -> Vec<ToricMetric> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let p = random_polytope(&mut r);
            random_metric(&mut r, &p)
        })
        .collect()
}

/// Coefficients (constant term first) of the Lagrange interpolant.
pub fn lagrange(points: &[(Rat, Rat)]) -> Vec<Rat> {
    let k = points.len();
    let mut out = vec![Rat::zero(); k];
    for (i, (xi, yi)) in points.iter().enumerate() {
        // basis polynomial prod_{j != i} (x - xj)/(xi - xj)
        let mut basis = vec![Rat::one()];
        let mut denom = Rat::one();
        for (j, (xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            let mut next = vec![Rat::zero(); basis.len() + 1];
            for (d, c) in basis.iter().enumerate() {
                next[d + 1] += c;
                next[d] -= c * xj;
            }
            basis = next;
            denom *= xi - xj;
        }
        for (d, c) in basis.iter().enumerate() {
            out[d] += c * yi / &denom;
        }
    }
    while out.len() > 1 && out.last().is_some_and(Zero::is_zero) {
        out.pop();
    }
    out
}

pub fn eval_poly(coeffs: &[Rat], x: &Rat) -> Rat {
    coeffs.iter().rev().fold(Rat::zero(), |acc, c| acc * x + c)
}

pub fn coeff(coeffs: &[Rat], k: usize) -> Rat {
    coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
}

/// Integer points of `mP` by scanning the bounding box against the facet
/// inequalities.
pub fn lattice_points(p: &LatticePolytope, m: u64) -> Vec<Vec<i64>> {
    let n = p.dim();
    let mr = z(m as i64);
    let lo: Vec<i64> = (0..n)
        .map(|i| {
            let v = p.vertices().iter().map(|v| &v[i] * &mr).min().unwrap();
            v.floor().to_integer().to_i64().unwrap()
        })
        .collect();
    let hi: Vec<i64> = (0..n)
        .map(|i| {
            let v = p.vertices().iter().map(|v| &v[i] * &mr).max().unwrap();
            v.ceil().to_integer().to_i64().unwrap()
        })
        .collect();
    let hs: Vec<(Vec<i64>, Rat)> = p
        .halfspaces()
        .into_iter()
        .map(|(a, b)| {
            let l = a.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            let lr = Rat::from_integer(l);
            let ai = a.iter().map(|x| (x * &lr).to_integer().to_i64().unwrap()).collect();
            (ai, b * lr * &mr)
        })
        .collect();
    let mut out = Vec::new();
    let mut u = lo.clone();
    loop {
        if hs
            .iter()
            .all(|(a, b)| z(a.iter().zip(&u).map(|(x, y)| x * y).sum::<i64>()) >= *b)
        {
            out.push(u.clone());
        }
        let Some(i) = (0..n).find(|&i| u[i] < hi[i]) else {
            break;
        };
        u[i] += 1;
        for (x, l) in u[..i].iter_mut().zip(&lo) {
            *x = *l;
        }
    }
    out
}

/// `⌊min_i(⟨a_i, u⟩ + m c_i)⌋` at every point of `mP`.
pub fn floor_weights(phi: &ToricMetric, m: u64) -> Vec<(Vec<i64>, i64)> {
    let mr = z(m as i64);
    lattice_points(phi.polytope(), m)
        .into_iter()
        .map(|u| {
            let ur: Vec<Rat> = u.iter().map(|&x| z(x)).collect();
            let v = phi
                .function()
                .pieces()
                .iter()
                .map(|piece| {
                    piece.a.iter().zip(&ur).map(|(a, x)| a * x).sum::<Rat>() + &piece.c * &mr
                })
                .min()
                .unwrap();
            let w = v.floor().to_integer().to_i64().unwrap();
            (u, w)
        })
        .collect()
}

/// `Σ_u w_m(u)^d` over `mP`.
pub fn power_sum(phi: &ToricMetric, m: u64, d: u32) -> Rat {
    floor_weights(phi, m)
        .iter()
        .map(|(_, w)| Rat::from_integer(BigInt::from(*w).pow(d)))
        .sum()
}

/// Polynomial through `k ↦ value(k·step)` for `k = 1..=deg+1`, checked at two
/// further points; `None` if the check fails.
pub fn fit_along(step: u64, deg: usize, value: impl Fn(u64) -> Rat) -> Option<Vec<Rat>> {
    let pts: Vec<(Rat, Rat)> = (1..=deg as u64 + 1)
        .map(|k| (z((k * step) as i64), value(k * step)))
        .collect();
    let poly = lagrange(&pts);
    for k in deg as u64 + 2..=deg as u64 + 3 {
        let m = k * step;
        if eval_poly(&poly, &z(m as i64)) != value(m) {
            return None;
        }
    }
    Some(poly)
}

/// `(F₀, F₁)` in `w_m/(m N_m) = F₀ + F₁/m + …` from brute-force weight sums.
pub fn futaki_oracle(phi: &ToricMetric) -> (Rat, Rat) {
    let n = phi.dim();
    let step = phi.n0();
    let w = fit_along(step, n + 1, |m| power_sum(phi, m, 1)).expect("w_m polynomial along N0");
    let nm = fit_along(step, n, |m| z(lattice_points(phi.polytope(), m).len() as i64))
        .expect("N_m polynomial along N0");
    let f0 = coeff(&w, n + 1) / coeff(&nm, n);
    let f1 = (coeff(&w, n) - &f0 * coeff(&nm, n - 1)) / coeff(&nm, n);
    (f0, f1)
}

/// `μ{x ≥ λ}` (or `>` when `strict`) for the scaled weight measure at level m.
pub fn empirical_tail(weights: &[(Vec<i64>, i64)], m: u64, lambda: &Rat, strict: bool) -> Rat {
    let mr = z(m as i64);
    let hits = weights
        .iter()
        .filter(|(_, w)| {
            let x = z(*w) / &mr;
            if strict {
                x > *lambda
            } else {
                x >= *lambda
            }
        })
        .count();
    q(hits as i64, weights.len() as i64)
}

pub fn lcm_of_denominators<'a>(values: impl IntoIterator<Item = &'a Rat>) -> u64 {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
        .to_u64()
        .unwrap()
}

/// Slope denominators of the canonical pieces.
pub fn slope_lcm(phi: &ToricMetric) -> u64 {
    lcm_of_denominators(phi.function().pieces().iter().flat_map(|p| p.a.iter()))
}

pub fn abs(x: &Rat) -> Rat {
    if *x < Rat::zero() {
        -x.clone()
    } else {
        x.clone()
    }
}

/// `2nⁿ/(n+1)^{n+1}`.
pub fn c_n(n: usize) -> Rat {
    let n = n as i64;
    z(2 * n.pow(n as u32)) / z((n + 1).pow(n as u32 + 1))
}

/// Rank of a rational matrix by Gaussian elimination.
pub fn rank(rows: &[Vec<Rat>]) -> usize {
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    let ncols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..ncols {
        let Some(pivot) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
            continue;
        };
        m.swap(r, pivot);
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let f = &row[col] / &pivot_row[col];
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
            }
        }
        r += 1;
    }
    r
}

/// `⟨a, x⟩ ≥ b`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Ineq {
    pub a: Vec<Rat>,
    pub b: Rat,
}

fn normalized(mut ineq: Ineq) -> Ineq {
    let scale = ineq
        .a
        .iter()
        .chain(std::iter::once(&ineq.b))
        .map(abs)
        .max()
        .unwrap();
    if !scale.is_zero() {
        for x in &mut ineq.a {
            *x /= &scale;
        }
        ineq.b /= &scale;
    }
    ineq
}

/// Inequalities cutting out `conv(gens) + R₊ⁿ`, obtained by eliminating the
/// convex weights from `x ≥ Σ λ_i g_i, λ ≥ 0, Σ λ_i = 1`.
pub fn newton_inequalities(n: usize, gens: &[Vec<u64>]) -> Vec<Ineq> {
    let k = gens.len();
    let last = &gens[k - 1];
    // variables: λ_0..λ_{k-2}, then x_0..x_{n-1}
    let nv = k - 1 + n;
    let mut sys: Vec<Ineq> = Vec::new();
    for i in 0..k - 1 {
        let mut a = vec![Rat::zero(); nv];
        a[i] = Rat::one();
        sys.push(Ineq { a, b: Rat::zero() });
    }
    let mut a = vec![Rat::zero(); nv];
    for x in a.iter_mut().take(k - 1) {
        *x = -Rat::one();
    }
    sys.push(Ineq { a, b: -Rat::one() });
    for j in 0..n {
        let mut a = vec![Rat::zero(); nv];
        a[k - 1 + j] = Rat::one();
        for i in 0..k - 1 {
            a[i] = z(last[j] as i64 - gens[i][j] as i64);
        }
        sys.push(Ineq { a, b: z(last[j] as i64) });
    }
    for var in 0..k - 1 {
        let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for ineq in sys {
            match ineq.a[var].cmp(&Rat::zero()) {
                std::cmp::Ordering::Greater => pos.push(ineq),
                std::cmp::Ordering::Less => neg.push(ineq),
                std::cmp::Ordering::Equal => rest.push(ineq),
            }
        }
        for p in &pos {
            for q_ in &neg {
                let sp = Rat::one() / &p.a[var];
                let sq = Rat::one() / -q_.a[var].clone();
                let a = p.a.iter().zip(&q_.a).map(|(x, y)| x * &sp + y * &sq).collect();
                rest.push(normalized(Ineq {
                    a,
                    b: &p.b * &sp + &q_.b * &sq,
                }));
            }
        }
        rest.sort();
        rest.dedup();
        sys = rest;
    }
    let mut out: Vec<Ineq> = sys
        .into_iter()
        .map(|i| Ineq {
            a: i.a[k - 1..].to_vec(),
            b: i.b,
        })
        .filter(|i| i.a.iter().any(|x| !x.is_zero()))
        .map(normalized)
        .collect();
    out.sort();
    out.dedup();
    out
}

/// `x^u ∈ closure(𝔞^m)` from the eliminated inequalities.
pub fn newton_member(ineqs: &[Ineq], u: &[u64], m: u64) -> bool {
    let mr = z(m as i64);
    ineqs
        .iter()
        .all(|i| i.a.iter().zip(u).map(|(a, x)| a * z(*x as i64)).sum::<Rat>() >= &i.b * &mr)
}

/// Weight vectors `w` (normalized to `w(𝔞) = 1`) of the facets of the Newton
/// polyhedron not containing the origin direction, sorted.
pub fn rees_oracle(n: usize, gens: &[Vec<u64>]) -> Vec<Vec<Rat>> {
    let mut out: Vec<Vec<Rat>> = Vec::new();
    for ineq in newton_inequalities(n, gens) {
        if ineq.b <= Rat::zero() {
            continue;
        }
        let w: Vec<Rat> = ineq.a.iter().map(|x| x / &ineq.b).collect();
        let val = |g: &Vec<u64>| w.iter().zip(g).map(|(a, x)| a * z(*x as i64)).sum::<Rat>();
        let face: Vec<&Vec<u64>> = gens.iter().filter(|g| val(g) == Rat::one()).collect();
        let Some(g0) = face.first() else { continue };
        let mut rows: Vec<Vec<Rat>> = face
            .iter()
            .map(|g| g.iter().zip(g0.iter()).map(|(x, y)| z(*x as i64 - *y as i64)).collect())
            .collect();
        for j in 0..n {
            if w[j].is_zero() {
                let mut e = vec![Rat::zero(); n];
                e[j] = Rat::one();
                rows.push(e);
            }
        }
        if rank(&rows) == n - 1 {
            out.push(w);
        }
    }
    out.sort();
    out.dedup();
    out
}

/// `x^v ∈ 𝔞^k`: some `k` generators (with repetition) sum to at most `v`.
pub fn in_power(v: &[i64], gens: &[Vec<u64>], k: usize) -> bool {
    fn go(v: &mut [i64], gens: &[Vec<u64>], start: usize, k: usize) -> bool {
        if k == 0 {
            return true;
        }
        for i in start..gens.len() {
            if gens[i].iter().zip(v.iter()).all(|(g, x)| *g as i64 <= *x) {
                for (x, g) in v.iter_mut().zip(&gens[i]) {
                    *x -= *g as i64;
                }
                let ok = go(v, gens, i, k - 1);
                for (x, g) in v.iter_mut().zip(&gens[i]) {
                    *x += *g as i64;
                }
                if ok {
                    return true;
                }
            }
        }
        false
    }
    go(&mut v.to_vec(), gens, 0, k)
}

/// A measure given by atoms and polynomial densities (coefficients in λ,
/// constant first) on intervals.
#[derive(Debug, Clone)]
pub struct Meas {
    pub atoms: Vec<(Rat, Rat)>,
    pub pieces: Vec<(Rat, Rat, Vec<Rat>)>,
}

pub fn poly_mul(p: &[Rat], r: &[Rat]) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); p.len() + r.len() - 1];
    for (i, x) in p.iter().enumerate() {
        for (j, y) in r.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn poly_integral(p: &[Rat], a: &Rat, b: &Rat) -> Rat {
    let prim = |x: &Rat| {
        p.iter()
            .enumerate()
            .map(|(k, c)| c * x.pow(k as i32 + 1) / z(k as i64 + 1))
            .sum::<Rat>()
    };
    prim(b) - prim(a)
}

impl Meas {
    pub fn total(&self) -> Rat {
        self.moment(0)
    }

    pub fn moment(&self, k: u32) -> Rat {
        let mut mono = vec![Rat::zero(); k as usize + 1];
        mono[k as usize] = Rat::one();
        let atoms: Rat = self.atoms.iter().map(|(x, m)| x.pow(k as i32) * m).sum();
        let dens: Rat = self
            .pieces
            .iter()
            .map(|(a, b, p)| poly_integral(&poly_mul(p, &mono), a, b))
            .sum();
        atoms + dens
    }

    /// `∫ |λ − c|^p dμ`.
    pub fn abs_moment(&self, c: &Rat, p: u32) -> Rat {
        let mut shifted = vec![Rat::one()];
        for _ in 0..p {
            shifted = poly_mul(&shifted, &[-c.clone(), Rat::one()]);
        }
        let atoms: Rat = self.atoms.iter().map(|(x, m)| abs(&(x - c)).pow(p as i32) * m).sum();
        let mut dens = Rat::zero();
        for (a, b, dp) in &self.pieces {
            let integrand = poly_mul(&shifted, dp);
            let sign = |lo: &Rat| if p % 2 == 1 && lo < c { -Rat::one() } else { Rat::one() };
            if a < c && c < b {
                dens += sign(a) * poly_integral(&integrand, a, c) + poly_integral(&integrand, c, b);
            } else {
                dens += sign(a) * poly_integral(&integrand, a, b);
            }
        }
        atoms + dens
    }
}

/// `n(λ+ε)^{n−1}` on `[−ε, 0]` plus the atom `1 − εⁿ` at 0: the measure of
/// the point deformation of the unit simplex (`V = 1`).
pub fn simplex_blowup_measure(n: usize, eps: &Rat) -> Meas {
    let mut dens = vec![z(n as i64)];
    for _ in 1..n {
        dens = poly_mul(&dens, &[eps.clone(), Rat::one()]);
    }
    Meas {
        atoms: vec![(Rat::zero(), Rat::one() - eps.pow(n as i32))],
        pieces: vec![(-eps.clone(), Rat::zero(), dens)],
    }
}
