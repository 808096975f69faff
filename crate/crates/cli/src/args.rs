use std::path::PathBuf;

use anyhow::Context;
use clap::{Args, ValueEnum};
use paircorr::empirical::ExactBudget;
use paircorr::pointsets::{Boundary, PointKind};

pub const BUDGET_ENV: &str = "PAIRCORR_BUDGET_POINTS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Integer,
    Primitive,
}

impl From<Kind> for PointKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Integer => PointKind::Integer,
            Kind::Primitive => PointKind::Primitive,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BoundaryArg {
    Open,
    Closed,
}

impl From<BoundaryArg> for Boundary {
    fn from(b: BoundaryArg) -> Self {
        match b {
            BoundaryArg::Open => Boundary::Open,
            BoundaryArg::Closed => Boundary::Closed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// The name clap accepts for a value, used in provenance headers.
pub fn name<T: ValueEnum>(v: &T) -> String {
    v.to_possible_value().expect("no skipped variants").get_name().to_owned()
}

/// The lattice point set flags shared by `pairs` and `points`.
#[derive(Debug, Args)]
pub struct SetArgs {
    /// Dimension.
    #[arg(long)]
    pub n: u32,
    /// Ball radius.
    #[arg(long = "R")]
    pub radius: f64,
    #[arg(long, value_enum, default_value_t = Kind::Integer)]
    pub kind: Kind,
    #[arg(long, value_enum, default_value_t = BoundaryArg::Closed)]
    pub boundary: BoundaryArg,
}

#[derive(Debug, Args)]
pub struct OutArgs {
    /// Write the result here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// The all-pairs budget, with the point cap taken from the environment when set.
pub fn exact_budget() -> anyhow::Result<ExactBudget> {
    match std::env::var(BUDGET_ENV) {
        Ok(v) => {
            let cap: usize = v.trim().parse().with_context(|| format!("{BUDGET_ENV}={v:?} is not a point count"))?;
            Ok(ExactBudget::with_max_points(cap))
        }
        Err(std::env::VarError::NotPresent) => Ok(ExactBudget::default()),
        Err(e) => Err(e).context(BUDGET_ENV),
    }
}
