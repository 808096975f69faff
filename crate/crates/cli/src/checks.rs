use std::f64::consts::PI;

use clap::{Args, ValueEnum};
use paircorr::empirical::pair_count_in_region;
use paircorr::oracle::{mc_region_report, RegionSpec};
use paircorr::pointsets::{
    primitive_density, radial_check, wedge_check, Boundary, LatticePointSet, PointKind, WedgeSpec,
};
use paircorr::report::json_with_meta;
use paircorr::theory::{cdf, DistributionSpec, Lambda};
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{exact_budget, name, OutArgs};
use crate::mc::SIGMA_LIMIT;
use crate::output::{emit, provenance};
use crate::Outcome;

const RADIAL_TOLERANCE: f64 = 0.01;
const PRIMITIVE_RADIAL_TOLERANCE: f64 = 0.02;
const WEDGE_TOLERANCE: f64 = 0.02;
const DENSITY_TOLERANCE: f64 = 0.01;
const HEURISTIC_TOLERANCE: f64 = 0.02;
const WEDGE_ANGLES: [(&str, f64); 3] = [("pi/2", PI / 2.0), ("pi/3", PI / 3.0), ("pi/6", PI / 6.0)];

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Equidist,
    Volume,
    All,
}

#[derive(Debug, Args)]
pub struct ChecksArgs {
    #[arg(long, value_enum, default_value_t = Which::All)]
    which: Which,
    #[arg(long, default_value_t = 2)]
    n: u32,
    /// Radius for the equidistribution counts.
    #[arg(long, default_value_t = 100.0)]
    r: f64,
    /// Radius of the lattice set for the volume heuristic.
    #[arg(long = "R", default_value_t = 50.0)]
    radius: f64,
    /// Dilation factor for the radial check (default 2) and distance bound
    /// for the volume checks (default 1).
    #[arg(long)]
    lambda: Option<f64>,
    /// Monte Carlo samples for the region volume.
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Debug, Serialize)]
struct Check {
    check: String,
    params: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    target: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    tolerance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    detail: Option<Value>,
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

impl Check {
    /// `|value - target| ≤ tolerance`, or the error that prevented the measurement.
    fn near(check: &str, params: Value, value: paircorr::Result<f64>, target: f64, tolerance: f64) -> Self {
        match value {
            Ok(v) => Self {
                check: check.into(),
                params,
                value: Some(v),
                target: Some(target),
                tolerance: Some(tolerance),
                detail: None,
                pass: (v - target).abs() <= tolerance,
                error: None,
            },
            Err(e) => Self::failed(check, params, e.to_string()),
        }
    }

    fn failed(check: &str, params: Value, error: String) -> Self {
        Self {
            check: check.into(),
            params,
            value: None,
            target: None,
            tolerance: None,
            detail: None,
            pass: false,
            error: Some(error),
        }
    }
}

#[derive(Serialize)]
struct Summary {
    checks: Vec<Check>,
    passed: usize,
    failed: usize,
    errors: usize,
    pass: bool,
}

fn kind_name(kind: PointKind) -> &'static str {
    match kind {
        PointKind::Integer => "integer",
        PointKind::Primitive => "primitive",
    }
}

fn equidistribution(a: &ChecksArgs, out: &mut Vec<Check>) {
    let lambda = a.lambda.unwrap_or(2.0);
    for (kind, tol) in [(PointKind::Integer, RADIAL_TOLERANCE), (PointKind::Primitive, PRIMITIVE_RADIAL_TOLERANCE)] {
        let params = json!({"kind": kind_name(kind), "n": a.n, "r": a.r, "lambda": lambda});
        out.push(Check::near("radial", params, radial_check(kind, Boundary::Closed, a.n, a.r, lambda), 1.0, tol));
    }
    for kind in [PointKind::Integer, PointKind::Primitive] {
        for (label, angle) in WEDGE_ANGLES {
            let params = json!({"kind": kind_name(kind), "n": a.n, "r": a.r, "half_angle": label});
            let ratio = LatticePointSet::new(a.n, a.r, kind, Boundary::Closed)
                .and_then(|set| wedge_check(&set, &WedgeSpec::along_first_axis(a.n, angle, a.r)?));
            out.push(Check::near("wedge", params, ratio, 1.0, WEDGE_TOLERANCE));
        }
    }
    let params = json!({"n": a.n, "r": a.r});
    let check = match primitive_density(a.n) {
        Ok(density) => {
            let count = |kind| LatticePointSet::new(a.n, a.r, kind, Boundary::Closed)?.count();
            let ratio = count(PointKind::Primitive).and_then(|p| {
                let all = count(PointKind::Integer)?;
                Ok(p as f64 / all as f64)
            });
            Check::near("primitive_fraction", params, ratio, density, DENSITY_TOLERANCE)
        }
        Err(e) => Check::failed("primitive_fraction", params, e.to_string()),
    };
    out.push(check);
}

fn volume(a: &ChecksArgs, out: &mut Vec<Check>) {
    let lambda = a.lambda.unwrap_or(1.0);
    let params = json!({"kind": "integer", "n": a.n, "R": a.radius, "lambda": lambda});
    let heuristic = (|| -> anyhow::Result<(f64, f64)> {
        let lam = Lambda::new(lambda)?;
        let set = LatticePointSet::new(a.n, a.radius, PointKind::Integer, Boundary::Closed)?;
        let points = set.count()? as f64;
        let pairs = pair_count_in_region(&set, lam, &exact_budget()?)? as f64;
        Ok((pairs / (points * points), cdf(&DistributionSpec::new(a.n)?, lam)))
    })();
    out.push(match heuristic {
        Ok((ratio, want)) => Check::near("volume_heuristic", params, Ok(ratio), want, HEURISTIC_TOLERANCE),
        Err(e) => Check::failed("volume_heuristic", params, format!("{e:#}")),
    });

    let params = json!({"n": a.n, "lambda": lambda, "samples": a.samples, "seed": a.seed});
    let report = Lambda::new(lambda)
        .and_then(|lam| RegionSpec::new(a.n, lam))
        .and_then(|region| mc_region_report(&region, a.samples, a.seed));
    out.push(match report {
        Ok(rep) => Check {
            check: "mc_region_volume".into(),
            params,
            value: Some(rep.estimate.value),
            target: Some(rep.analytic_value),
            tolerance: Some(SIGMA_LIMIT * rep.estimate.std_error),
            pass: rep.within_sigma(SIGMA_LIMIT),
            detail: Some(serde_json::to_value(rep).expect("plain numbers")),
            error: None,
        },
        Err(e) => Check::failed("mc_region_volume", params, e.to_string()),
    });
}

pub fn run(a: ChecksArgs) -> anyhow::Result<Outcome> {
    let mut meta = provenance("checks");
    meta.push("which", name(&a.which)).push("n", a.n).push("r", a.r).push("R", a.radius);
    if let Some(l) = a.lambda {
        meta.push("lambda", l);
    }
    meta.push("samples", a.samples).push("seed", a.seed).push("max_points", exact_budget()?.max_points);

    let mut checks = Vec::new();
    if a.which != Which::Volume {
        equidistribution(&a, &mut checks);
    }
    if a.which != Which::Equidist {
        volume(&a, &mut checks);
    }
    for c in &checks {
        let status = match (&c.error, c.pass) {
            (Some(e), _) => format!("error: {e}"),
            (None, true) => "pass".into(),
            (None, false) => "fail".into(),
        };
        eprintln!("{:<20} {}  {}", c.check, c.params, status);
    }
    let errors = checks.iter().filter(|c| c.error.is_some()).count();
    let passed = checks.iter().filter(|c| c.pass).count();
    let summary =
        Summary { failed: checks.len() - passed - errors, passed, errors, pass: passed == checks.len(), checks };
    emit(a.out.out.as_deref(), json_with_meta(&meta, &summary)?.as_bytes())?;
    Ok(Outcome::from_pass(summary.pass))
}
