mod source;
mod verify;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use kstab::exactnum::Rat;
use kstab::filtration::{rees_of_deformation, rees_valuations, IntegralClosure, MonomialIdeal};
use kstab::functionals::{coercivity_scan, find_destabilizer, FunctionalReport};
use kstab::testconfig::ToricPair;
use kstab::Error;
use serde_json::json;

use crate::source::{resolve_metric, resolve_polytope};
use crate::verify::Suite;

#[derive(Parser)]
#[command(name = "kstab", version, about = "Exact non-Archimedean functionals of toric test configurations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Every functional of one metric on one pair.
    Report {
        #[command(flatten)]
        metric: MetricArgs,
        /// `trivial` or `boundary:b0,b1,...` in facet order.
        #[arg(long, default_value = "trivial")]
        pair: String,
        #[arg(long)]
        json: bool,
    },
    /// Duistermaat-Heckman measure of one metric.
    Dh {
        #[command(flatten)]
        metric: MetricArgs,
        /// Also write the measure as CSV to this path.
        #[arg(long)]
        plot_csv: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Rees valuations and integral closures of a monomial ideal.
    Rees {
        /// Generators such as `x^2,y` (variables x, y, z, t).
        #[arg(long)]
        ideal: String,
        #[arg(long)]
        nvars: Option<usize>,
        /// Also compute the Rees valuations of the deformation to the normal cone.
        #[arg(long)]
        deform: bool,
        #[arg(long)]
        json: bool,
    },
    /// Run a verification suite and print a pass/fail table.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Number of random metrics per randomized check.
        #[arg(long, default_value_t = 50)]
        cases: usize,
    },
    /// Classify a toric pair and look for a destabilizing metric.
    Classify {
        #[arg(long, default_value = "simplex:2")]
        polytope: String,
        #[arg(long, default_value = "trivial")]
        pair: String,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args)]
struct MetricArgs {
    /// Catalog name (`p1-onePS:d`, `pn-blowup:n,eps`, `trivial:c`) or a JSON file.
    #[arg(long, conflicts_with = "example")]
    metric: Option<String>,
    /// Catalog family `p1-onePS`, `pn-blowup` or `trivial`, parameterized by
    /// --n, --eps and --d.
    #[arg(long)]
    example: Option<String>,
    #[arg(long, default_value_t = 1)]
    n: usize,
    #[arg(long, default_value = "1/2")]
    eps: String,
    #[arg(long, default_value = "1")]
    d: String,
    /// Catalog polytope for `trivial` metrics.
    #[arg(long)]
    polytope: Option<String>,
}

enum Failure {
    Verify(String),
    Input(String),
    Invariant(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvariantViolation { .. } | Error::NefDecomposition(_) | Error::NotEventuallyPolynomial { .. } => {
                Failure::Invariant(e.to_string())
            }
            _ => Failure::Input(e.to_string()),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn print_json(v: &impl serde::Serialize) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn cmd_report(metric: &MetricArgs, pair: &str, as_json: bool) -> CmdResult {
    let phi = resolve_metric(metric)?;
    let pair = ToricPair::parse(phi.polytope(), pair)?;
    let report = FunctionalReport::compute(&phi, &pair)?;
    if as_json {
        print_json(&report);
    } else {
        print!("pair = {pair}\n{}", report.to_text());
    }
    Ok(())
}

fn cmd_dh(metric: &MetricArgs, plot: Option<&PathBuf>, as_json: bool) -> CmdResult {
    let phi = resolve_metric(metric)?;
    let dh = phi.dh_exact()?;
    if let Some(path) = plot {
        fs::write(path, dh.to_csv()).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    }
    if as_json {
        print_json(&dh);
    } else {
        println!("metric = {}", phi.function());
        print!("{}", dh.to_csv());
    }
    Ok(())
}

/// Minimal generators of the integral closure of `a^m`, found in the box
/// bounded by `m` times the largest generator exponents.
fn closure_power(ideal: &MonomialIdeal, m: u64) -> Result<MonomialIdeal, Error> {
    let n = ideal.nvars();
    let bound: Vec<u64> = (0..n)
        .map(|i| m * ideal.gens().iter().map(|g| g[i]).max().unwrap_or(0))
        .collect();
    let closure = IntegralClosure::new(ideal);
    let mut members = Vec::new();
    let mut u = vec![0u64; n];
    loop {
        if closure.contains(&u, m) {
            members.push(u.clone());
        }
        let Some(i) = (0..n).find(|&i| u[i] < bound[i]) else {
            break;
        };
        u[i] += 1;
        for x in &mut u[..i] {
            *x = 0;
        }
    }
    MonomialIdeal::new(n, members)
}

fn cmd_rees(ideal: &str, nvars: Option<usize>, deform: bool, as_json: bool) -> CmdResult {
    let ideal = MonomialIdeal::parse(ideal, nvars)?;
    let rees = rees_valuations(&ideal);
    let closures: Vec<(u64, String)> = if ideal.is_unit() {
        Vec::new()
    } else {
        (1..=2)
            .map(|m| closure_power(&ideal, m).map(|c| (m, c.to_string())))
            .collect::<Result<_, _>>()?
    };
    let deformation = if deform { Some(rees_of_deformation(&ideal)?) } else { None };
    let restriction_ok = deformation.as_ref().map(|comps| {
        let mut restricted: Vec<_> = comps.iter().filter(|c| !c.trivial).map(|c| c.restriction.clone()).collect();
        restricted.sort();
        restricted == rees
    });
    if as_json {
        print_json(&json!({
            "ideal": ideal.to_string(),
            "rees": rees,
            "closures": closures.iter().map(|(m, c)| json!({"m": m, "closure": c})).collect::<Vec<_>>(),
            "deformation": deformation,
            "restriction_check": restriction_ok,
        }));
    } else {
        println!("ideal = {ideal}");
        println!("rees valuations:");
        for v in &rees {
            println!("  {v}");
        }
        for (m, c) in &closures {
            println!("closure of a^{m} = {c}");
        }
        if let Some(comps) = &deformation {
            println!("deformation to the normal cone:");
            for c in comps {
                let kind = if c.trivial { "trivial" } else { "exceptional" };
                println!("  {} b={} restriction={} {kind}", c.valuation, c.b, c.restriction);
            }
            let ok = restriction_ok == Some(true);
            println!("restriction check: {}", if ok { "pass" } else { "FAIL" });
        }
    }
    if restriction_ok == Some(false) {
        return Err(Failure::Invariant(
            "restrictions of the deformation's Rees valuations differ from the ideal's".into(),
        ));
    }
    Ok(())
}

fn cmd_classify(polytope: &str, pair: &str, as_json: bool) -> CmdResult {
    let p = resolve_polytope(polytope)?;
    let pair = ToricPair::parse(&p, pair)?;
    let class = pair.classify();
    let witness = find_destabilizer(&pair, &p)?;
    let lambda = pair.canonical_proportionality(&p);
    // Canonically polarized pairs: sample M >= J/n.
    let canonical_scan = match &lambda {
        Some(l) if *l > Rat::from_integer(0.into()) => {
            let delta = Rat::new(1.into(), (p.dim() as i64).into());
            Some(coercivity_scan(&pair, &p, &delta, 20, 0)?)
        }
        _ => None,
    };
    if as_json {
        print_json(&json!({
            "pair": pair.to_string(),
            "class": class,
            "canonical_ratio": lambda.map(|l| l.to_string()),
            "destabilizer": witness.as_ref().map(|w| json!({
                "metric": w.metric,
                "ray": w.ray,
                "entropy": w.entropy.to_string(),
            })),
            "canonical_scan_min_m_over_j": canonical_scan.as_ref().and_then(|s| s.min_m_over_j.as_ref().map(|x| x.to_string())),
        }));
    } else {
        println!("pair = {pair}");
        println!("class = {class}");
        if let Some(l) = &lambda {
            println!("K = {l} L");
        }
        match &witness {
            Some(w) => {
                println!("destabilizer toward ray {}: {}", w.ray, w.metric.function());
                println!("H = {}", w.entropy);
            }
            None => println!("destabilizer: none"),
        }
        if let Some(scan) = &canonical_scan {
            let min = scan.min_m_over_j.as_ref().map(|x| x.to_string()).unwrap_or_else(|| "-".into());
            println!("min M/J over {} samples = {min}", scan.rows.len());
        }
    }
    Ok(())
}

fn configure_threads() {
    if let Some(n) = std::env::var("KSTAB_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    let outcome = match &cli.command {
        Command::Report { metric, pair, json } => cmd_report(metric, pair, *json),
        Command::Dh { metric, plot_csv, json } => cmd_dh(metric, plot_csv.as_ref(), *json),
        Command::Rees {
            ideal,
            nvars,
            deform,
            json,
        } => cmd_rees(ideal, *nvars, *deform, *json),
        Command::Verify { suite, seed, cases } => verify::run(*suite, *seed, *cases),
        Command::Classify { polytope, pair, json } => cmd_classify(polytope, pair, *json),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verify(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Invariant(msg)) => {
            eprintln!("internal invariant violated: {msg}");
            ExitCode::from(3)
        }
    }
}
