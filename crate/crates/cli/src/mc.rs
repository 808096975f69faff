use std::f64::consts::FRAC_PI_2;

use clap::{Args, ValueEnum};
use paircorr::oracle::{mc_cap_measure, mc_cap_volume, mc_region_report, McReport, RegionSpec};
use paircorr::report::json_with_meta;
use paircorr::theory::Lambda;
use serde::Serialize;

use crate::args::{name, OutArgs};
use crate::output::{emit, provenance};
use crate::Outcome;

/// An estimate passes when the analytic value lies within this many standard errors.
pub const SIGMA_LIMIT: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Target {
    /// The region {|a| ≤ 1, |b| ≤ 1, |a - b| ≤ λ} in R^2n.
    Region,
    /// The cap {x in the unit ball : x₁ ≥ r/2}.
    Cap,
    /// The fraction of the sphere within a half-angle of the pole.
    CapMeasure,
}

#[derive(Debug, Args)]
pub struct McArgs {
    #[arg(long, value_enum, default_value_t = Target::Region)]
    what: Target,
    #[arg(long, default_value_t = 2)]
    n: u32,
    /// Distance bound for `region`.
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    /// Height parameter for `cap`, in [0, 2].
    #[arg(long, default_value_t = 1.0)]
    r: f64,
    /// Half-angle in radians for `cap-measure`.
    #[arg(long, default_value_t = FRAC_PI_2)]
    half_angle: f64,
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Serialize)]
struct Doc {
    #[serde(flatten)]
    report: McReport,
    pass: bool,
}

pub fn run(a: McArgs) -> anyhow::Result<Outcome> {
    let mut meta = provenance("mc");
    meta.push("what", name(&a.what)).push("n", a.n);
    let report = match a.what {
        Target::Region => {
            meta.push("lambda", a.lambda);
            mc_region_report(&RegionSpec::new(a.n, Lambda::new(a.lambda)?)?, a.samples, a.seed)?
        }
        Target::Cap => {
            meta.push("r", a.r);
            mc_cap_volume(a.n, a.r, a.samples, a.seed)?
        }
        Target::CapMeasure => {
            meta.push("half_angle", a.half_angle);
            mc_cap_measure(a.n, a.half_angle, a.samples, a.seed)?
        }
    };
    meta.push("samples", a.samples).push("seed", a.seed);
    let pass = report.within_sigma(SIGMA_LIMIT);
    emit(a.out.out.as_deref(), json_with_meta(&meta, &Doc { report, pass })?.as_bytes())?;
    Ok(Outcome::from_pass(pass))
}
