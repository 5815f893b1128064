//! Verification suites behind `kstab verify`.
//!
//! Randomized checks draw one seed per case from a ChaCha8 stream seeded by
//! `--seed`; the per-case seed is logged so a single case can be replayed.

use std::collections::BTreeMap;

use clap::ValueEnum;
use kstab::convex::LatticePolytope;
use kstab::exactnum::{denominator_lcm, fit_eventual_polynomial, int, rat, Rat, UniPoly};
use kstab::filtration::{scaled_weight_measure, successive_minima};
use kstab::functionals::{
    check_inequalities, coercivity_scan, default_epsilon_grid, energy_chain, energy_routes,
    epsilon_family_asymptotics, find_destabilizer, l1_lower_constant, FunctionalReport,
};
use kstab::measures::{DensityPiece, PPMeasure};
use kstab::testconfig::{
    anticanonical_polytope, catalog_metric, catalog_polytope, random_metric, random_polytope, PairClass,
    ToricMetric, ToricPair,
};
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Measures,
    Filtration,
    Testconfig,
    Functionals,
    Inequalities,
    Asymptotics,
    All,
}

struct Case {
    index: usize,
    seed: u64,
    metric: ToricMetric,
}

fn draw_cases(seed: u64, count: usize) -> Vec<Case> {
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    let seeds: Vec<u64> = (0..count).map(|_| master.next_u64()).collect();
    seeds
        .into_par_iter()
        .enumerate()
        .map(|(index, seed)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let p = random_polytope(&mut rng);
            Case {
                index,
                seed,
                metric: random_metric(&mut rng, &p),
            }
        })
        .collect()
}

type Check = Result<(), String>;

fn ensure(cond: bool, detail: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(detail())
    }
}

fn lift<T>(r: kstab::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

struct Row {
    suite: &'static str,
    check: String,
    passed: usize,
    total: usize,
    fixed: bool,
}

#[derive(Default)]
struct Table {
    rows: Vec<Row>,
    counterexamples: Vec<String>,
    notes: Vec<String>,
}

impl Table {
    fn fixed(&mut self, suite: &'static str, check: &str, outcome: Check) {
        let passed = outcome.is_ok() as usize;
        if let Err(detail) = outcome {
            self.counterexamples.push(format!("{suite} / {check}: {detail}"));
        }
        self.rows.push(Row {
            suite,
            check: check.to_string(),
            passed,
            total: 1,
            fixed: true,
        });
    }

    /// Runs `f` on every case in parallel; rows keep the order in which
    /// checks are first named, counterexamples keep case order.
    fn random<F>(&mut self, suite: &'static str, cases: &[Case], f: F)
    where
        F: Fn(&Case) -> Vec<(&'static str, Check)> + Sync,
    {
        let results: Vec<Vec<(&'static str, Check)>> = cases.par_iter().map(&f).collect();
        let mut order: Vec<&'static str> = Vec::new();
        let mut counts: BTreeMap<&'static str, (usize, usize)> = BTreeMap::new();
        for (case, checks) in cases.iter().zip(&results) {
            for (name, outcome) in checks {
                if !order.contains(name) {
                    order.push(name);
                }
                let entry = counts.entry(name).or_default();
                entry.1 += 1;
                match outcome {
                    Ok(()) => entry.0 += 1,
                    Err(detail) => self.counterexamples.push(format!(
                        "{suite} / {name}: case {} seed={:#018x} metric={} : {detail}",
                        case.index,
                        case.seed,
                        serde_json::to_string(&case.metric).expect("serializable"),
                    )),
                }
            }
        }
        for name in order {
            let (passed, total) = counts[name];
            self.rows.push(Row {
                suite,
                check: name.to_string(),
                passed,
                total,
                fixed: false,
            });
        }
        if cases.is_empty() {
            self.notes.push(format!("{suite}: no random cases, randomized checks vacuous"));
        }
    }

    fn failed(&self) -> usize {
        self.rows.iter().filter(|r| r.passed != r.total).count()
    }

    fn print(&self) {
        println!("{:<13} {:<52} {:<6} cases", "suite", "check", "result");
        for r in &self.rows {
            let result = if r.passed == r.total { "pass" } else { "FAIL" };
            let cases = if r.fixed {
                "-".to_string()
            } else {
                format!("{}/{}", r.passed, r.total)
            };
            println!("{:<13} {:<52} {:<6} {}", r.suite, r.check, result, cases);
        }
        for n in &self.notes {
            println!("note: {n}");
        }
        if !self.counterexamples.is_empty() {
            println!("counterexamples:");
            for c in &self.counterexamples {
                println!("  {c}");
            }
        }
    }
}

fn flagship() -> ToricMetric {
    catalog_metric("pn-blowup:1,1/2", None).expect("catalog metric")
}

fn report_on(phi: &ToricMetric, pair: &ToricPair) -> Result<FunctionalReport, String> {
    lift(FunctionalReport::compute(phi, pair))
}

fn measures_suite(t: &mut Table, cases: &[Case]) {
    const S: &str = "measures";
    t.fixed(S, "flagship DH: density 1 on [-1/2,0] + atom 1/2", (|| {
        let expected = lift(PPMeasure::new(
            vec![(int(0), rat(1, 2))],
            vec![DensityPiece {
                lo: rat(-1, 2),
                hi: int(0),
                density: UniPoly::constant(int(1)),
            }],
        ))?;
        let dh = lift(flagship().dh_exact())?;
        ensure(dh == expected, || format!("got {}", dh.to_csv()))?;
        ensure(dh.cdf_tail(&int(0)) == rat(1, 2) && dh.cdf_tail(&rat(-1, 4)) == rat(3, 4), || {
            "tail probabilities".into()
        })
    })());
    t.fixed(S, "1-PS d=3 DH is Unif[0,3]", (|| {
        let dh = lift(lift(catalog_metric("p1-onePS:3", None))?.dh_exact())?;
        ensure(dh == lift(PPMeasure::uniform(int(0), int(3)))?, || dh.to_csv())
    })());
    t.fixed(S, "trivial DH is a Dirac mass", (|| {
        let dh = lift(lift(catalog_metric("trivial:2", None))?.dh_exact())?;
        ensure(dh == PPMeasure::dirac(int(2)), || dh.to_csv())
    })());
    t.random(S, cases, |c| {
        let phi = &c.metric;
        let n = phi.dim();
        let dh = match lift(phi.dh_exact()) {
            Ok(dh) => dh,
            Err(e) => return vec![("DH measure computable", Err(e))],
        };
        vec![
            ("DH is a probability measure", ensure(dh.is_probability(), || dh.to_csv())),
            ("barycenter equals mean of f", (|| {
                let r = lift(energy_routes(phi))?;
                ensure(r.barycenter == r.integral, || format!("{} vs {}", r.barycenter, r.integral))
            })()),
            ("centered bound c_n lmax <= int|l| <= 2 lmax", (|| {
                let e = dh.barycenter();
                let centered = lift(dh.pushforward_affine(&Rat::one(), &-e))?;
                let lmax = centered.lambda_max().expect("nonempty");
                let abs = centered.central_abs_moment(&Rat::zero(), 1);
                ensure(l1_lower_constant(n) * &lmax <= abs && abs <= int(2) * &lmax, || {
                    format!("lmax {lmax}, first absolute moment {abs}")
                })?;
                let conc = centered.tail_root_concavity(n as u32);
                ensure(conc.holds(), || format!("tail root not concave: {conc:?}"))
            })()),
        ]
    });
}

/// `⌊min_E(⟨a_E,u⟩ − m·min_P⟨a_E,·⟩ + m·phi_value_E)⌋` for every `u ∈ mP`,
/// compared with the direct weights.
fn reconstruction_check(phi: &ToricMetric, m: u64) -> Check {
    let pair = ToricPair::trivial(phi.polytope());
    let comps = lift(phi.components(&pair))?;
    let mr = Rat::from_integer(m.into());
    let data: Vec<(Vec<Rat>, Rat)> = comps
        .iter()
        .map(|c| {
            let min_a = phi
                .polytope()
                .vertices()
                .iter()
                .map(|v| c.valuation_weight.iter().zip(v).map(|(a, x)| a * x).sum::<Rat>())
                .min()
                .expect("vertices");
            (c.valuation_weight.clone(), &mr * (&c.phi_value - min_a))
        })
        .collect();
    let den = data
        .iter()
        .fold(num_bigint::BigInt::one(), |acc, (a, k)| {
            num_integer::Integer::lcm(&acc, &denominator_lcm(a.iter().chain(std::iter::once(k))))
        });
    let dr = Rat::from_integer(den.clone());
    let den = den.to_i128().ok_or("denominator overflow")?;
    let to_i = |x: &Rat| (x * &dr).to_integer().to_i128().expect("fits");
    let idata: Vec<(Vec<i128>, i128)> = data.iter().map(|(a, k)| (a.iter().map(to_i).collect(), to_i(k))).collect();
    for (u, w) in phi.weights_at(m) {
        let v = idata
            .iter()
            .map(|(a, k)| a.iter().zip(&u).map(|(x, y)| x * *y as i128).sum::<i128>() + k)
            .min()
            .expect("components");
        let rebuilt = v.div_euclid(den);
        if rebuilt != w as i128 {
            return Err(format!("m={m} u={u:?}: direct {w}, reconstructed {rebuilt}"));
        }
    }
    Ok(())
}

/// `K_m = m·sup|F_m − F|` over `m = N₀,…,12N₀`; bounded when the second
/// half never exceeds twice the first half.
fn dh_convergence_check(phi: &ToricMetric) -> Check {
    let dh = lift(phi.dh_exact())?;
    let n0 = phi.n0();
    let ks: Vec<Rat> = (1..=12u64)
        .map(|k| {
            let m = k * n0;
            let gw = lift(phi.filtration_of(m))?;
            let measure = lift(scaled_weight_measure(&gw))?;
            Ok(Rat::from_integer(m.into()) * measure.tail_sup_distance(&dh))
        })
        .collect::<Result<_, String>>()?;
    let first = ks[..6].iter().max().expect("six levels").clone();
    let second = ks[6..].iter().max().expect("six levels").clone();
    ensure(second <= int(2) * &first, || {
        format!("K_m grows: {}", ks.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(", "))
    })
}

fn filtration_suite(t: &mut Table, cases: &[Case]) {
    const S: &str = "filtration";
    t.fixed(S, "flagship m=2 successive minima {0,0,-1}", (|| {
        let gw = lift(flagship().filtration_of(2))?;
        let minima = lift(successive_minima(&gw))?;
        ensure(minima == vec![(0, 2), (-1, 1)], || format!("{minima:?}"))?;
        let measure = lift(scaled_weight_measure(&gw))?;
        let expected = lift(PPMeasure::new(vec![(int(0), rat(2, 3)), (rat(-1, 2), rat(1, 3))], vec![]))?;
        ensure(measure == expected, || measure.to_csv())
    })());
    t.random(S, cases, |c| {
        let phi = &c.metric;
        let n0 = phi.n0();
        let n = phi.dim();
        vec![
            ("reconstruction from components, m <= 12 N0", (|| {
                for k in 1..=12 {
                    reconstruction_check(phi, k * n0)?;
                }
                Ok(())
            })()),
            ("DH convergence with bounded K", dh_convergence_check(phi)),
            ("lambda_max^(m)/m monotone, exact on N0 Z", (|| {
                let lm = |m: u64| -> Result<Rat, String> {
                    let w = phi.weights_at(m).into_iter().map(|(_, w)| w).max().expect("points");
                    Ok(Rat::new(w.into(), m.into()))
                };
                let mut prev = lm(1)?;
                for j in 1..6 {
                    let cur = lm(1 << j)?;
                    ensure(cur >= prev, || format!("drops at m={}", 1 << j))?;
                    prev = cur;
                }
                ensure(lm(n0)? == phi.lambda_max() && lm(3 * n0)? == phi.lambda_max(), || {
                    "not exact on N0 Z".into()
                })
            })()),
            ("weight power sums eventually polynomial", (|| {
                for d in 0..=2u32 {
                    let samples: BTreeMap<u64, Rat> = (1..=(n as u64 + d as u64 + 4))
                        .map(|k| {
                            let m = k * n0;
                            let s: num_bigint::BigInt =
                                phi.weights_at(m).into_iter().map(|(_, w)| num_bigint::BigInt::from(w).pow(d)).sum();
                            (m, Rat::from_integer(s))
                        })
                        .collect();
                    lift(fit_eventual_polynomial(&samples, n + d as usize, n0))?;
                }
                Ok(())
            })()),
        ]
    });
}

fn testconfig_suite(t: &mut Table, cases: &[Case]) {
    const S: &str = "testconfig";
    t.fixed(S, "deformation of [0,1] at 0, eps=1/2", (|| {
        let p = lift(catalog_polytope("segment:1"))?;
        let phi = lift(ToricMetric::deformation_to_normal_cone(p, &[int(0)], &rat(1, 2)))?;
        ensure(phi == flagship(), || phi.function().to_string())?;
        ensure(phi.flag_ideal_piece(2, 0) == vec![vec![1], vec![2]], || "flag ideal piece".into())
    })());
    t.random(S, cases, |c| {
        let phi = &c.metric;
        let pair = ToricPair::trivial(phi.polytope());
        let dh = match lift(phi.dh_exact()) {
            Ok(dh) => dh,
            Err(e) => return vec![("DH measure computable", Err(e))],
        };
        vec![
            ("support: min over components, max at the trivial valuation", (|| {
                let comps = lift(phi.components(&pair))?;
                let lo = comps.iter().map(|c| c.phi_value.clone()).min().expect("components");
                let hi = comps.iter().map(|c| c.phi_value.clone()).max().expect("components");
                let top = phi.lambda_max();
                ensure(dh.support() == Some((lo.clone(), top.clone())), || format!("[{lo}, {top}]"))?;
                let has_trivial = comps.iter().any(|c| c.trivial);
                ensure(hi <= top && (!has_trivial || hi == top), || format!("max component value {hi}"))
            })()),
            ("base change pushes DH forward", (|| {
                for d in [2u64, 3] {
                    let scaled = lift(lift(phi.scale_base_change(d))?.dh_exact())?;
                    let pushed = lift(dh.pushforward_affine(&Rat::from_integer(d.into()), &Rat::zero()))?;
                    ensure(scaled == pushed, || format!("d={d}"))?;
                }
                Ok(())
            })()),
            ("translation shifts DH", (|| {
                let c = rat(3, 2);
                let moved = lift(phi.translate(&c).dh_exact())?;
                ensure(moved == lift(dh.pushforward_affine(&Rat::one(), &c))?, || "shift by 3/2".into())
            })()),
            ("almost-trivial criteria agree", (|| {
                lift(phi.is_almost_trivial())?;
                let triv = lift(ToricMetric::trivial(phi.polytope().clone(), rat(-1, 2)))?;
                ensure(lift(triv.is_almost_trivial())?, || "trivial metric not detected".into())
            })()),
        ]
    });
}

fn functionals_suite(t: &mut Table, cases: &[Case]) {
    const S: &str = "functionals";
    t.fixed(S, "flagship report", (|| {
        let phi = flagship();
        let r = report_on(&phi, &ToricPair::trivial(phi.polytope()))?;
        let want = [
            (&r.df, rat(1, 4)),
            (&r.mabuchi, rat(1, 4)),
            (&r.entropy, rat(1, 2)),
            (&r.ricci, int(0)),
            (&r.energy, rat(-1, 8)),
            (&r.j, rat(1, 8)),
            (&r.i, rat(1, 4)),
            (&r.l1, rat(9, 64)),
        ];
        ensure(want.iter().all(|(a, b)| *a == b) && &r.s_bar * &r.energy == rat(-1, 4), || r.to_text())
    })());
    t.fixed(S, "1-PS d=2 report", (|| {
        let phi = lift(catalog_metric("p1-onePS:2", None))?;
        let r = report_on(&phi, &ToricPair::trivial(phi.polytope()))?;
        ensure(r.df.is_zero() && r.entropy == int(2) && r.mabuchi.is_zero() && r.ricci == int(-4), || r.to_text())
    })());
    t.fixed(S, "Ding on the anticanonical segment", (|| {
        let p = lift(anticanonical_polytope("p1"))?;
        let phi = lift(ToricMetric::deformation_to_normal_cone(p, &[int(0)], &rat(1, 2)))?;
        let r = report_on(&phi, &ToricPair::trivial(phi.polytope()))?;
        let d = r.ding.clone().ok_or("no Ding functional")?;
        ensure(d.l.is_zero() && r.energy == rat(-1, 16) && d.d == rat(1, 16) && r.j == d.d, || r.to_text())
    })());
    t.fixed(S, "P2 classification and destabilizers", (|| {
        let p = lift(catalog_polytope("simplex:2"))?;
        for (b, class) in [(int(0), PairClass::Klt), (int(1), PairClass::LcNotKlt), (rat(3, 2), PairClass::NotLc)] {
            let pair = lift(ToricPair::new(&p, vec![int(0), int(0), b.clone()]))?;
            ensure(pair.classify() == class, || format!("b={b}: {}", pair.classify()))?;
            let w = lift(find_destabilizer(&pair, &p))?;
            match class {
                PairClass::Klt => ensure(w.is_none(), || "klt pair destabilized".into())?,
                PairClass::LcNotKlt => {
                    let w = w.ok_or("no witness")?;
                    ensure(w.entropy.is_zero() && !lift(w.metric.is_almost_trivial())?, || w.entropy.to_string())?
                }
                PairClass::NotLc => {
                    let w = w.ok_or("no witness")?;
                    ensure(w.entropy.is_negative(), || w.entropy.to_string())?
                }
            }
        }
        Ok(())
    })());
    t.random(S, cases, |c| {
        let phi = &c.metric;
        let pair = ToricPair::trivial(phi.polytope());
        let r = match report_on(phi, &pair) {
            Ok(r) => r,
            Err(e) => return vec![("report identities (E routes, F0 = E, M <= DF)", Err(e))],
        };
        vec![
            ("report identities (E routes, F0 = E, M <= DF)", Ok(())),
            ("translation laws", (|| {
                let c = rat(1, 2);
                let s = report_on(&phi.translate(&c), &pair)?;
                let same = [
                    (&s.j, &r.j),
                    (&s.i, &r.i),
                    (&s.l1, &r.l1),
                    (&s.l2_squared, &r.l2_squared),
                    (&s.linf, &r.linf),
                    (&s.entropy, &r.entropy),
                    (&s.mabuchi, &r.mabuchi),
                    (&s.df, &r.df),
                ];
                ensure(same.iter().all(|(a, b)| a == b), || "invariant functional moved".into())?;
                ensure(s.energy == &r.energy + &c, || "E(phi + c)".into())?;
                ensure(s.ricci == &r.ricci - &r.s_bar * &c, || "R(phi + c)".into())
            })()),
            ("homogeneity under base change", (|| {
                let comps = lift(phi.components(&pair))?;
                let clearing = comps.iter().fold(1u64, |acc, c| num_integer::Integer::lcm(&acc, &c.b));
                for d in [clearing, 2] {
                    let rd = report_on(&lift(phi.scale_base_change(d))?, &pair)?;
                    let dm = Rat::from_integer(d.into()) * &r.mabuchi;
                    ensure(rd.mabuchi == dm, || format!("M(phi_{d}) = {} vs {dm}", rd.mabuchi))?;
                    ensure(&rd.df - &dm == rd.error_term && !rd.error_term.is_negative(), || {
                        format!("DF(phi_{d}) = {}", rd.df)
                    })?;
                    if d == clearing {
                        ensure(rd.df == dm, || format!("DF(phi_{d}) = {} vs {dm}", rd.df))?;
                    }
                }
                Ok(())
            })()),
            ("energy chain non-increasing", (|| {
                let chain = lift(energy_chain(phi))?;
                ensure(chain.windows(2).all(|w| w[0] >= w[1]), || {
                    chain.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
                })
            })()),
            ("M = H + lambda(I - J) when K = lambda L", (|| {
                let name = ["p1", "p2", "p1xp1"][c.index % 3];
                let p = lift(anticanonical_polytope(name))?;
                let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
                let psi = random_metric(&mut rng, &p);
                let pair = ToricPair::trivial(&p);
                let lambda = pair.canonical_proportionality(&p).ok_or("not proportional")?;
                let r = report_on(&psi, &pair)?;
                let rhs = &r.entropy + &lambda * (&r.i - &r.j);
                ensure(r.mabuchi == rhs, || format!("{name}: M = {} vs {rhs}", r.mabuchi))
            })()),
        ]
    });
}

fn inequalities_suite(t: &mut Table, seed: u64, cases: usize) {
    const S: &str = "inequalities";
    let configs: [(&str, &str); 7] = [
        ("segment:1", "trivial"),
        ("segment:2", "trivial"),
        ("simplex:2", "trivial"),
        ("square", "trivial"),
        ("simplex:2", "boundary:1,0,0"),
        ("anticanonical:p1", "trivial"),
        ("anticanonical:p2", "trivial"),
    ];
    for (k, (poly, pair_spec)) in configs.iter().enumerate() {
        let label = format!("{poly} {pair_spec}");
        let outcome = (|| {
            let p = lift(catalog_polytope(poly))?;
            let pair = lift(ToricPair::parse(&p, pair_spec))?;
            let scan = lift(coercivity_scan(&pair, &p, &Rat::zero(), cases, seed.wrapping_add(k as u64)))?;
            let fmt = |x: &Option<Rat>| x.as_ref().map(|v| v.to_string()).unwrap_or_else(|| "-".into());
            t.notes.push(format!(
                "{S}: {label}: min M/J = {}, min H/I = {}, min D/J = {}",
                fmt(&scan.min_m_over_j),
                fmt(&scan.min_h_over_i),
                fmt(&scan.min_d_over_j)
            ));
            let bad: Vec<String> = scan
                .rows
                .iter()
                .filter(|r| !r.violations.is_empty())
                .map(|r| {
                    format!(
                        "sample {} ({}): {}",
                        r.index,
                        serde_json::to_string(&r.report.metric).expect("serializable"),
                        r.violations.join("; ")
                    )
                })
                .collect();
            ensure(bad.is_empty(), || bad.join(" | "))
        })();
        t.fixed(S, &format!("universal inequalities, {label}"), outcome);
    }
    t.fixed(S, "c_n attained by 1-PS on the segment", (|| {
        let phi = lift(catalog_metric("p1-onePS:1", None))?;
        let r = report_on(&phi, &ToricPair::trivial(phi.polytope()))?;
        ensure(r.l1 == l1_lower_constant(1) * &r.j && check_inequalities(&r, PairClass::Klt).is_empty(), || {
            r.to_text()
        })
    })());
}

fn asymptotics_suite(t: &mut Table) {
    const S: &str = "asymptotics";
    for n in 1..=2usize {
        let outcome = (|| {
            let p = lift(LatticePolytope::simplex(n, int(1)))?;
            let pair = ToricPair::trivial(&p);
            let fam = lift(epsilon_family_asymptotics(&p, &pair, &vec![int(0); n], &default_epsilon_grid()))?;
            for (name, exponent) in [("J", n + 1), ("L1", n + 1), ("L2^2", n + 2), ("M", n), ("H", n)] {
                let fit = fam.fit(name).ok_or("missing fit")?;
                ensure(fit.exponent == Some(exponent) && fit.confirmed, || {
                    format!("{name}: exponent {:?}, confirmed {}", fit.exponent, fit.confirmed)
                })?;
            }
            let lead = fam.mabuchi_leading().ok_or("no leading term for M")?;
            t.notes.push(format!(
                "{S}: n={n}: M ~ {} eps^{}; n/V = {}, (n+1)/V = {}; matches {}; weight-fit DF {}",
                lead.coefficient,
                lead.exponent,
                lead.n_over_v,
                lead.n_plus_one_over_v,
                match (lead.matches_n, lead.matches_n_plus_one) {
                    (true, _) => "n/V",
                    (_, true) => "(n+1)/V",
                    _ => "neither",
                },
                if lead.df_agrees { "agrees" } else { "DISAGREES" }
            ));
            ensure(lead.df_agrees, || "DF and M leading terms differ".into())
        })();
        t.fixed(S, &format!("point blow-up family exponents, n={n}"), outcome);
    }
}

pub fn run(suite: Suite, seed: u64, count: usize) -> Result<(), Failure> {
    let cases = draw_cases(seed, count);
    let wants = |s: Suite| suite == s || suite == Suite::All;
    let randomized = [Suite::Measures, Suite::Filtration, Suite::Testconfig, Suite::Functionals]
        .iter()
        .any(|s| wants(*s));
    if randomized {
        for c in &cases {
            println!(
                "case {} seed={:#018x} dim={} f={}",
                c.index,
                c.seed,
                c.metric.dim(),
                c.metric.function()
            );
        }
    }
    let mut t = Table::default();
    if wants(Suite::Measures) {
        measures_suite(&mut t, &cases);
    }
    if wants(Suite::Filtration) {
        filtration_suite(&mut t, &cases);
    }
    if wants(Suite::Testconfig) {
        testconfig_suite(&mut t, &cases);
    }
    if wants(Suite::Functionals) {
        functionals_suite(&mut t, &cases);
    }
    if wants(Suite::Inequalities) {
        inequalities_suite(&mut t, seed, count);
    }
    if wants(Suite::Asymptotics) {
        asymptotics_suite(&mut t);
    }
    t.print();
    match t.failed() {
        0 => Ok(()),
        k => Err(Failure::Verify(format!("{k} check(s) failed"))),
    }
}
