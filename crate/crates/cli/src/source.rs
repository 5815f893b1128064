use std::fs;
use std::path::Path;

use kstab::convex::LatticePolytope;
use kstab::testconfig::{catalog_metric, catalog_polytope, ToricMetric};

use crate::{Failure, MetricArgs};

pub fn resolve_polytope(name: &str) -> Result<LatticePolytope, Failure> {
    if Path::new(name).is_file() {
        let text = fs::read_to_string(name).map_err(|e| Failure::Input(format!("{name}: {e}")))?;
        return serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{name}: {e}")));
    }
    Ok(catalog_polytope(name)?)
}

pub fn resolve_metric(args: &MetricArgs) -> Result<ToricMetric, Failure> {
    let default_polytope = args.polytope.as_deref().map(resolve_polytope).transpose()?;
    let name = match (&args.metric, &args.example) {
        (Some(m), _) => {
            if Path::new(m).is_file() {
                let text = fs::read_to_string(m).map_err(|e| Failure::Input(format!("{m}: {e}")))?;
                return serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{m}: {e}")));
            }
            m.clone()
        }
        (None, Some(family)) => match family.as_str() {
            "p1-onePS" => format!("p1-onePS:{}", args.d),
            "pn-blowup" => format!("pn-blowup:{},{}", args.n, args.eps),
            "trivial" => "trivial".to_string(),
            other => return Err(Failure::Input(format!("unknown example family {other:?}"))),
        },
        (None, None) => return Err(Failure::Input("one of --metric or --example is required".into())),
    };
    Ok(catalog_metric(&name, default_polytope.as_ref())?)
}
