use std::fs;
use std::path::PathBuf;

use anyhow::Context;
use clap::{Args, ValueEnum};
use paircorr::empirical::{
    exact_histogram, ks_compare, sampled_histogram, GofReport, HistogramRow, DEFAULT_BINS, DEFAULT_KS_THRESHOLD,
};
use paircorr::pointsets::LatticePointSet;
use paircorr::report::json_with_meta;
use paircorr::theory::DistributionSpec;
use serde::Serialize;

use crate::args::{exact_budget, name, Format, OutArgs, SetArgs};
use crate::output::{emit, provenance};
use crate::Outcome;

/// Below this many pairs the default threshold is informational only.
pub const GATED_PAIRS: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Sampled,
}

#[derive(Debug, Args)]
pub struct PairsArgs {
    #[command(flatten)]
    set: SetArgs,
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    mode: Mode,
    #[arg(long, default_value_t = DEFAULT_BINS, value_parser = parse_bins)]
    bins: usize,
    /// Pairs to draw in sampled mode.
    #[arg(long, default_value_t = 1_000_000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Largest acceptable KS statistic. When given, it is enforced whatever
    /// the sample size; otherwise 0.01 is enforced from 10^6 pairs on.
    #[arg(long)]
    threshold: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Also write the goodness-of-fit report as JSON to this file.
    #[arg(long)]
    report: Option<PathBuf>,
    #[command(flatten)]
    out: OutArgs,
}

fn parse_bins(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("at least one bin is required".into()),
        Ok(b) => Ok(b),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Serialize)]
struct Gof {
    #[serde(flatten)]
    report: GofReport,
    enforced: bool,
}

#[derive(Serialize)]
struct HistogramDoc<'a> {
    n: u32,
    radius: f64,
    mode: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    total_pairs: u64,
    bins: Vec<HistogramRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gof: Option<&'a Gof>,
}

pub fn run(a: PairsArgs) -> anyhow::Result<Outcome> {
    let s = &a.set;
    let set = LatticePointSet::new(s.n, s.radius, s.kind.into(), s.boundary.into())?;
    let mut meta = provenance("pairs");
    meta.push("n", s.n)
        .push("R", s.radius)
        .push("kind", name(&s.kind))
        .push("boundary", name(&s.boundary))
        .push("mode", name(&a.mode))
        .push("bins", a.bins);
    let hist = match a.mode {
        Mode::Exact => {
            let budget = exact_budget()?;
            meta.push("max_points", budget.max_points);
            exact_histogram(&set, a.bins, &budget)?
        }
        Mode::Sampled => {
            meta.push("samples", a.samples).push("seed", a.seed);
            sampled_histogram(&set, a.bins, a.samples, a.seed)?
        }
    };
    let threshold = a.threshold.unwrap_or(DEFAULT_KS_THRESHOLD);
    meta.push("threshold", threshold);

    let spec = DistributionSpec::new(s.n)?;
    let gof = if hist.total_pairs() == 0 {
        eprintln!("no pairs: goodness of fit skipped");
        None
    } else {
        let report = ks_compare(&hist, &spec, threshold)?;
        let enforced = a.threshold.is_some() || hist.total_pairs() >= GATED_PAIRS;
        eprintln!(
            "ks statistic {:.6e} over {} pairs, threshold {threshold} ({}): {}",
            report.statistic,
            report.sample_size,
            if enforced { "enforced" } else { "informational" },
            if report.pass { "pass" } else { "fail" },
        );
        Some(Gof { report, enforced })
    };

    let text = match a.format {
        Format::Csv => {
            let mut buf = Vec::new();
            hist.write_csv(&mut buf, &spec, &meta)?;
            buf
        }
        Format::Json => {
            let doc = HistogramDoc {
                n: hist.n(),
                radius: hist.radius(),
                mode: if hist.seed().is_some() { "sampled" } else { "exact" },
                seed: hist.seed(),
                total_pairs: hist.total_pairs(),
                bins: hist.rows(&spec),
                gof: gof.as_ref(),
            };
            json_with_meta(&meta, &doc)?.into_bytes()
        }
    };
    emit(a.out.out.as_deref(), &text)?;
    if let (Some(path), Some(g)) = (&a.report, &gof) {
        fs::write(path, json_with_meta(&meta, g)?).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(Outcome::from_pass(gof.map_or(true, |g| g.report.pass || !g.enforced)))
}
