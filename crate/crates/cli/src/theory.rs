use std::fmt::Write as _;

use clap::{Args, ValueEnum};
use paircorr::report::{fmt_f64, json_with_meta};
use paircorr::theory::{cdf, pdf, pdf_polynomial_odd, DistributionSpec, EvalMode, Lambda, MAX_POLYNOMIAL_DIMENSION};
use serde::Serialize;

use crate::args::{name, Format, OutArgs};
use crate::output::{emit, provenance};
use crate::Outcome;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum What {
    Pdf,
    Cdf,
    Both,
}

#[derive(Debug, Args)]
pub struct TheoryArgs {
    /// Dimension.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    n: u32,
    /// Number of equally spaced λ values on [0, 2], ends included.
    #[arg(long, default_value_t = 201, value_parser = clap::value_parser!(u64).range(2..))]
    grid: u64,
    #[arg(long, value_enum, default_value_t = What::Both)]
    what: What,
    /// Evaluate in logarithms even where direct evaluation is safe.
    #[arg(long)]
    log_domain: bool,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(flatten)]
    out: OutArgs,
}

#[derive(Serialize)]
struct Row {
    lambda: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pdf: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cdf: Option<f64>,
}

#[derive(Serialize)]
struct Table {
    n: u32,
    rows: Vec<Row>,
}

pub fn run(a: TheoryArgs) -> anyhow::Result<Outcome> {
    let spec =
        if a.log_domain { DistributionSpec::with_mode(a.n, EvalMode::LogDomain)? } else { DistributionSpec::new(a.n)? };
    // Odd dimensions have polynomial densities; evaluating them exactly gives
    // correctly rounded values.
    let exact = (a.n % 2 == 1 && a.n <= MAX_POLYNOMIAL_DIMENSION && spec.eval_mode() == EvalMode::Direct)
        .then(|| pdf_polynomial_odd(a.n))
        .transpose()?
        .map(|p| {
            let anti = p.antiderivative();
            (p, anti)
        });
    let eval_mode = match (&exact, spec.eval_mode()) {
        (Some(_), _) => "exact_polynomial",
        (None, EvalMode::Direct) => "direct",
        (None, EvalMode::LogDomain) => "log_domain",
    };
    let mut meta = provenance("theory");
    meta.push("n", a.n).push("grid", a.grid).push("what", name(&a.what)).push("eval_mode", eval_mode);

    let last = a.grid - 1;
    let rows: Vec<Row> = (0..a.grid)
        .map(|i| {
            let l = Lambda::new(2.0 * i as f64 / last as f64).expect("grid lies in [0, 2]");
            Row {
                lambda: l.value(),
                pdf: (a.what != What::Cdf).then(|| match &exact {
                    Some((p, _)) => p.eval_rounded(l.value()),
                    None => pdf(&spec, l),
                }),
                cdf: (a.what != What::Pdf).then(|| match &exact {
                    Some((_, anti)) => anti.eval_rounded(l.value()),
                    None => cdf(&spec, l),
                }),
            }
        })
        .collect();

    let text = match a.format {
        Format::Json => json_with_meta(&meta, &Table { n: a.n, rows })?,
        Format::Csv => {
            let mut buf = Vec::new();
            meta.write_comment_header(&mut buf)?;
            let mut text = String::from_utf8(buf)?;
            text.push_str(match a.what {
                What::Pdf => "lambda,pdf\n",
                What::Cdf => "lambda,cdf\n",
                What::Both => "lambda,pdf,cdf\n",
            });
            for r in &rows {
                text.push_str(&fmt_f64(r.lambda));
                for v in [r.pdf, r.cdf].into_iter().flatten() {
                    write!(text, ",{}", fmt_f64(v))?;
                }
                text.push('\n');
            }
            text
        }
    };
    emit(a.out.out.as_deref(), text.as_bytes())?;
    Ok(Outcome::Pass)
}
