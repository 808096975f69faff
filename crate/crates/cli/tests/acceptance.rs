//! End-to-end acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test -p paircorr-cli --test acceptance`.

use std::f64::consts::{LN_2, PI, SQRT_2};
use std::panic::{self, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use paircorr::empirical::{pair_counts_in_region, ExactBudget};
use paircorr::geometry::unit_ball_volume;
use paircorr::oracle::{mc_region_report, RegionSpec};
use paircorr::pointsets::{radial_check, wedge_check, Boundary, LatticePointSet, PointKind, WedgeSpec};
use paircorr::specfun::{log_gamma, reg_inc_beta, BetaParams};
use paircorr::theory::{
    cdf, mode, pdf, pdf_closed_form, pdf_polynomial_odd, region_volume, DistributionSpec, EvalMode, Lambda,
};
use paircorr_testkit::quad;
use paircorr_testkit::sampling::SplitMix64;
use serde_json::Value;

type Outcome = Result<String, String>;

struct Criterion {
    name: &'static str,
    budget: Duration,
    run: fn() -> Outcome,
}

fn lam(v: f64) -> Lambda {
    Lambda::new(v).unwrap()
}

fn spec(n: u32) -> DistributionSpec {
    DistributionSpec::new(n).unwrap()
}

fn bp(a: f64, b: f64) -> BetaParams {
    BetaParams::new(a, b).unwrap()
}

fn require(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn special_functions() -> Outcome {
    let mut rng = SplitMix64::new(0xACCE);
    let mut reflection: f64 = 0.0;
    let mut duplication: f64 = 0.0;
    let half_ln_pi = 0.5 * PI.ln();
    for _ in 0..10_000 {
        let (x, a, b) = (rng.next_f64(), rng.uniform(0.1, 60.0), rng.uniform(0.1, 60.0));
        let s = reg_inc_beta(x, bp(a, b)).unwrap() + reg_inc_beta(1.0 - x, bp(b, a)).unwrap();
        reflection = reflection.max((s - 1.0).abs());
        let z = rng.uniform(0.5, 100.0);
        let rhs = -half_ln_pi + (2.0 * z - 1.0) * LN_2 + log_gamma(z).unwrap() + log_gamma(z + 0.5).unwrap();
        duplication = duplication.max((log_gamma(2.0 * z).unwrap() - rhs).abs());
    }
    let mut grid: f64 = 0.0;
    for i in 0..10 {
        let x = 0.05 + 0.1 * f64::from(i);
        for j in 1..=10 {
            for k in 1..=10 {
                let (a, b) = (0.5 * f64::from(j), 0.5 * f64::from(k));
                let want = quad::regularized_incomplete_beta(x, a, b);
                grid = grid.max((reg_inc_beta(x, bp(a, b)).unwrap() - want).abs());
            }
        }
    }
    require(
        reflection <= 1e-12 && duplication <= 1e-11 && grid <= 1e-9,
        format!("reflection {reflection:.1e}, duplication {duplication:.1e}, quadrature grid {grid:.1e}"),
    )
}

fn closed_forms() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in [2, 3] {
        for i in 0..1000 {
            let l = lam(2.0 * f64::from(i) / 999.0);
            worst = worst.max((pdf(&spec(n), l) - pdf_closed_form(n, l).unwrap()).abs());
        }
    }
    let one = BigRational::from_integer(BigInt::from(1));
    let at_one = pdf_polynomial_odd(3).unwrap().eval_exact(&one);
    let exact = at_one == BigRational::new(BigInt::from(15), BigInt::from(16));
    require(worst <= 1e-12 && exact, format!("max deviation {worst:.1e}, pdf(3, 1) = {at_one}"))
}

fn normalization() -> Outcome {
    let mut integral: f64 = 0.0;
    for n in 1..=20 {
        let s = spec(n);
        let total = quad::tanh_sinh(|x, _, _| pdf(&s, lam(x.clamp(0.0, 2.0))), 0.0, 2.0, 1e-13);
        integral = integral.max((total - 1.0).abs());
    }
    let at_two = (1..=20).map(|n| (cdf(&spec(n), Lambda::MAX) - 1.0).abs()).fold(0.0, f64::max);
    let volume = (1..=10)
        .map(|n| (region_volume(&spec(n), Lambda::MAX) - unit_ball_volume(n).powi(2)).abs())
        .fold(0.0, f64::max);
    require(
        integral <= 1e-9 && at_two <= 1e-12 && volume <= 1e-10,
        format!("|∫P - 1| {integral:.1e}, |cdf(2) - 1| {at_two:.1e}, |m - V²| {volume:.1e}"),
    )
}

fn odd_polynomials() -> Outcome {
    let zero = BigRational::from_integer(BigInt::from(0));
    let two = BigRational::from_integer(BigInt::from(2));
    let one = BigRational::from_integer(BigInt::from(1));
    let mut worst: f64 = 0.0;
    for n in [1, 3, 5, 7, 9] {
        let poly = pdf_polynomial_odd(n).unwrap();
        let total = poly.integrate(&zero, &two);
        if total != one {
            return Err(format!("n = {n}: ∫ = {total}"));
        }
        for i in 0..=400 {
            let l = 2.0 * f64::from(i) / 400.0;
            worst = worst.max((poly.eval_rounded(l) - pdf(&spec(n), lam(l))).abs());
        }
    }
    require(worst <= 1e-10, format!("exact integrals 1, max deviation {worst:.1e}"))
}

fn monte_carlo_volumes() -> Outcome {
    let mut cells = Vec::new();
    for n in [2, 3] {
        for l in [0.5, 1.0, 1.5, 2.0] {
            let r = mc_region_report(&RegionSpec::new(n, lam(l)).unwrap(), 10_000_000, 2024).unwrap();
            cells.push((n, l, r.sigma_distance));
        }
    }
    let misses: Vec<String> =
        cells.iter().filter(|c| c.2 >= 3.0).map(|(n, l, s)| format!("n={n} λ={l}: {s:.2}σ")).collect();
    let worst = cells.iter().map(|c| c.2).fold(0.0, f64::max);
    require(
        misses.len() <= 1,
        format!("{} of {} cells within 3σ, worst {worst:.2}σ {misses:?}", cells.len() - misses.len(), cells.len()),
    )
}

fn volume_heuristic() -> Outcome {
    let mut worst: f64 = 0.0;
    let lams = [lam(0.5), lam(1.0), lam(1.5)];
    for (n, r) in [(2, 50.0), (3, 20.0)] {
        let set = LatticePointSet::new(n, r, PointKind::Integer, Boundary::Closed).unwrap();
        let points = set.count().unwrap() as f64;
        let counts = pair_counts_in_region(&set, &lams, &ExactBudget::with_max_points(40_000)).unwrap();
        for (l, c) in lams.iter().zip(counts) {
            worst = worst.max((c as f64 / (points * points) - cdf(&spec(n), *l)).abs());
        }
    }
    require(worst < 0.02, format!("max |count/N² - cdf| {worst:.4}"))
}

fn scratch(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("paircorr-acceptance-{}-{name}", std::process::id()))
}

fn figures() -> Outcome {
    let mut stats = Vec::new();
    for (n, r, kind) in
        [("2", "300", "integer"), ("2", "300", "primitive"), ("3", "30", "integer"), ("3", "30", "primitive")]
    {
        let report = scratch(&format!("gof-{n}-{kind}.json"));
        let csv = scratch(&format!("hist-{n}-{kind}.csv"));
        let status = Command::new(env!("CARGO_BIN_EXE_paircorr"))
            .args(["pairs", "--n", n, "--R", r, "--kind", kind, "--mode", "sampled", "--samples", "10000000"])
            .args(["--seed", "42", "--report", report.to_str().unwrap(), "--out", csv.to_str().unwrap()])
            .stderr(Stdio::null())
            .status()
            .map_err(|e| e.to_string())?;
        let gof: Value = serde_json::from_str(&std::fs::read_to_string(&report).map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        let _ = std::fs::remove_file(&report);
        let _ = std::fs::remove_file(&csv);
        let ks = gof["statistic"].as_f64().ok_or("missing statistic")?;
        if !status.success() || ks >= 0.01 {
            return Err(format!("n={n} R={r} {kind}: KS {ks:.2e}, exit {status}"));
        }
        stats.push(format!("{n}/{r}/{kind} {ks:.1e}"));
    }
    Ok(format!("KS: {}", stats.join(", ")))
}

fn equidistribution() -> Outcome {
    let radial = radial_check(PointKind::Integer, Boundary::Closed, 2, 100.0, 2.0).unwrap();
    let mut wedge: f64 = 0.0;
    for kind in [PointKind::Integer, PointKind::Primitive] {
        let set = LatticePointSet::new(2, 300.0, kind, Boundary::Closed).unwrap();
        for angle in [PI / 2.0, PI / 3.0, PI / 6.0] {
            let w = WedgeSpec::along_first_axis(2, angle, 300.0).unwrap();
            wedge = wedge.max((wedge_check(&set, &w).unwrap() - 1.0).abs());
        }
    }
    let count = |kind| LatticePointSet::new(2, 200.0, kind, Boundary::Closed).unwrap().count().unwrap() as f64;
    let fraction = count(PointKind::Primitive) / count(PointKind::Integer);
    let zeta = (fraction - 6.0 / PI / PI).abs();
    require(
        (radial - 1.0).abs() < 0.01 && wedge < 0.02 && zeta < 0.01,
        format!("radial {radial:.5}, max wedge deviation {wedge:.4}, primitive fraction {fraction:.5}"),
    )
}

fn asymptotics() -> Outcome {
    let dims = [10, 50, 100, 500, 1000];
    let gaps: Vec<f64> = dims.iter().map(|&n| (mode(&spec(n)).unwrap().value() - SQRT_2).abs()).collect();
    let log_path = spec(1000).eval_mode() == EvalMode::LogDomain;
    let monotone = gaps.windows(2).all(|w| w[1] < w[0]);
    require(
        gaps[2] < 0.05 && gaps[4] < 0.005 && log_path && monotone,
        format!("|λ* - √2| over n = {dims:?}: {:?}", gaps.iter().map(|g| format!("{g:.2e}")).collect::<Vec<_>>()),
    )
}

fn determinism() -> Outcome {
    let runs: [&[&str]; 4] = [
        &["pairs", "--n", "2", "--R", "300", "--mode", "sampled", "--samples", "2000000", "--seed", "7"],
        &["pairs", "--n", "3", "--R", "12", "--kind", "primitive", "--mode", "exact", "--format", "json"],
        &["mc", "--what", "region", "--n", "3", "--lambda", "1.5", "--samples", "2000000", "--seed", "7"],
        &["mc", "--what", "cap-measure", "--n", "4", "--half-angle", "1", "--samples", "1000000", "--seed", "7"],
    ];
    for args in runs {
        let mut outputs = Vec::new();
        for workers in ["1", "4", "4", "1"] {
            let o = Command::new(env!("CARGO_BIN_EXE_paircorr"))
                .args(args)
                .args(["--workers", workers])
                .stderr(Stdio::null())
                .output()
                .map_err(|e| e.to_string())?;
            if o.stdout.is_empty() {
                return Err(format!("{args:?}: no output"));
            }
            outputs.push(o.stdout);
        }
        if outputs.windows(2).any(|w| w[0] != w[1]) {
            return Err(format!("{args:?}: output differs across runs"));
        }
    }
    Ok(format!("{} commands byte-identical over workers 1, 4, 4, 1", runs.len()))
}

fn main() {
    let criteria = [
        Criterion { name: "special-function identities", budget: Duration::from_secs(10), run: special_functions },
        Criterion { name: "closed forms", budget: Duration::from_secs(1), run: closed_forms },
        Criterion { name: "normalization", budget: Duration::from_secs(10), run: normalization },
        Criterion { name: "odd-n polynomials", budget: Duration::from_secs(5), run: odd_polynomials },
        Criterion { name: "monte carlo volume oracle", budget: Duration::from_secs(120), run: monte_carlo_volumes },
        Criterion { name: "volume heuristic", budget: Duration::from_secs(120), run: volume_heuristic },
        Criterion { name: "figure reproduction", budget: Duration::from_secs(600), run: figures },
        Criterion { name: "equidistribution checks", budget: Duration::from_secs(120), run: equidistribution },
        Criterion { name: "asymptotics", budget: Duration::from_secs(60), run: asymptotics },
        Criterion { name: "determinism", budget: Duration::from_secs(120), run: determinism },
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(d) if elapsed > c.budget => Err(format!("{d}; over the {:?} budget", c.budget)),
            other => other,
        };
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("{tag}  {:<28} {:>7.2} s  {detail}", c.name, elapsed.as_secs_f64());
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
