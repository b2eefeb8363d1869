//! `verify`: the verification suites with a combined pass/fail report.

use std::path::PathBuf;

use asymtail::mc::McConfig;
use asymtail::numeric::logspace;
use asymtail::thresholds::{m_star, p_star};
use asymtail::verifier::*;
use asymtail::RngSpec;
use clap::Args;
use rand::Rng;
use serde::Serialize;
use serde_json::{json as jv, Value};

use crate::output::{emit, json, num, CheckOutcome, Format};
use crate::{CliError, Outcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Delta,
    Enumeration,
    Schur,
    Exactness,
    Supermartingale,
    All,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    pub suite: Suite,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub m: Option<f64>,
    /// Number of summands for the enumeration and supermartingale suites.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Monte Carlo paths per supermartingale rule.
    #[arg(long, default_value_t = 200_000)]
    pub samples: usize,
    /// c-grid and u-grid resolution of the delta suite.
    #[arg(long, default_value_t = 200)]
    pub resolution: usize,
    #[arg(long, value_enum, default_value = "json")]
    pub report: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub suite: Suite,
    pub name: String,
    pub pass: bool,
    pub value: f64,
    pub detail: Value,
}

#[derive(Serialize)]
struct VerifyOutput {
    suite: Suite,
    seed: u64,
    checks: Vec<CheckRecord>,
    pass: bool,
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).unwrap_or(Value::Null)
}

fn pm_pairs(a: &VerifyArgs, defaults: Vec<(f64, f64)>) -> Result<Vec<(f64, f64)>, CliError> {
    match (a.p, a.m) {
        (Some(p), Some(m)) => Ok(vec![(p, m)]),
        (Some(p), None) => Ok(vec![(p, m_star(p)?)]),
        (None, Some(_)) => Err(CliError::Usage("--m needs --p".into())),
        (None, None) => Ok(defaults),
    }
}

fn delta_suite(a: &VerifyArgs) -> Result<Vec<CheckRecord>, CliError> {
    let mut out = Vec::new();
    let defaults = vec![(0.5, 1.0), (p_star(2.0)? + 0.01, 2.0), (0.05, 1.0)];
    for (p, m) in pm_pairs(a, defaults)? {
        let r = delta_grid_check(p, m, a.resolution)?;
        out.push(CheckRecord {
            suite: Suite::Delta,
            name: format!("grid p={p} m={m}"),
            pass: r.pass,
            value: r.min_value,
            detail: to_value(&r),
        });
    }
    let mut rng = RngSpec::new(a.seed, 0).rng();
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let c = rng.random_range(0.01..0.99);
        let p = rng.random_range(0.01..0.99);
        let m = rng.random_range(1.0..6.0);
        let u = rng.random_range(-2.5..3.0);
        let (x, y) = delta_piecewise_identity(c, u, p, m)?;
        worst = worst.max((x - y).abs());
    }
    out.push(CheckRecord {
        suite: Suite::Delta,
        name: "piecewise identity, 10000 random points".into(),
        pass: worst <= 1e-12,
        value: worst,
        detail: jv!({ "points": 10_000, "max_residual": worst }),
    });
    Ok(out)
}

fn enumeration_suite(a: &VerifyArgs) -> Result<Vec<CheckRecord>, CliError> {
    let p = a.p.unwrap_or(0.2);
    let ms = m_star(p)?;
    let m = a.m.unwrap_or(ms);
    let n = a.n.unwrap_or(3);
    let expected = m >= ms * (1.0 - 1e-12);
    let mut rng = RngSpec::new(a.seed, 1).rng();
    let mut vectors = vec![vec![1.0; n]];
    for _ in 0..5 {
        vectors.push((0..n).map(|_| rng.random_range(0.1..3.0)).collect());
    }
    let mut out = Vec::new();
    for (i, c) in vectors.into_iter().enumerate() {
        let r = enumeration_theorem_check(p, m, &c, None, None)?;
        out.push(CheckRecord {
            suite: Suite::Enumeration,
            name: format!("vector {i} p={p} m={m} n={n}"),
            pass: !expected || r.pass,
            value: r.max_violation,
            detail: jv!({ "coeffs": c, "expected_pass": expected, "report": to_value(&r) }),
        });
    }
    Ok(out)
}

fn schur_suite(a: &VerifyArgs) -> Result<Vec<CheckRecord>, CliError> {
    let defaults = vec![(0.5, 1.0), (0.2, m_star(0.2)?), (0.1, 1.0)];
    let mut out = Vec::new();
    for (p, m) in pm_pairs(a, defaults)? {
        let r = schur_sweep_grid(p, m, 256)?;
        let expected = p >= p_star(m)?;
        out.push(CheckRecord {
            suite: Suite::Schur,
            name: format!("sweep p={p} m={m}"),
            pass: !expected || r.monotone,
            value: r.min_forward_difference,
            detail: jv!({ "expected_monotone": expected, "report": to_value(&r) }),
        });
    }
    Ok(out)
}

fn exactness_suite(a: &VerifyArgs) -> Result<Vec<CheckRecord>, CliError> {
    let mut defaults = Vec::new();
    for p in logspace(0.005, 0.3, 5) {
        defaults.push((p, (0.9 * m_star(p)?).max(1.0)));
    }
    defaults.push((0.5, 1.0));
    let mut out = Vec::new();
    for (p, m) in pm_pairs(a, defaults)? {
        let o = exactness_witness(p, m)?;
        let value = match &o {
            ExactnessOutcome::Witness(w) | ExactnessOutcome::UnexpectedViolation(w) => w.gap,
            ExactnessOutcome::NoViolation { min_gap }
            | ExactnessOutcome::ScanFailed { min_gap } => *min_gap,
        };
        out.push(CheckRecord {
            suite: Suite::Exactness,
            name: format!("witness p={p} m={m}"),
            pass: o.is_expected(),
            value,
            detail: to_value(&o),
        });
    }
    Ok(out)
}

fn supermartingale_suite(a: &VerifyArgs) -> Result<Vec<CheckRecord>, CliError> {
    let p = a.p.unwrap_or(0.3);
    let n = a.n.unwrap_or(10);
    let mut rng = RngSpec::new(a.seed, 2).rng();
    let caps: Vec<f64> = (0..n).map(|_| rng.random_range(0.5..1.5)).collect();
    let mut out = Vec::new();
    for rule in GeneratorRule::ALL {
        let mut cfg =
            SupermartingaleConfig::new(n, p, caps.clone(), rule, McConfig::new(a.seed, a.samples));
        cfg.m = a.m;
        let r = supermartingale_mc(&cfg)?;
        out.push(CheckRecord {
            suite: Suite::Supermartingale,
            name: format!("{} p={p} n={n}", rule.label()),
            pass: r.pass,
            value: r.max_excess,
            detail: to_value(&r),
        });
    }
    Ok(out)
}

pub fn run(a: &VerifyArgs) -> Result<Outcome, CliError> {
    let suites = match a.suite {
        Suite::All => vec![
            Suite::Delta,
            Suite::Enumeration,
            Suite::Schur,
            Suite::Exactness,
            Suite::Supermartingale,
        ],
        s => vec![s],
    };
    let mut checks = Vec::new();
    for s in suites {
        checks.extend(match s {
            Suite::Delta => delta_suite(a)?,
            Suite::Enumeration => enumeration_suite(a)?,
            Suite::Schur => schur_suite(a)?,
            Suite::Exactness => exactness_suite(a)?,
            Suite::Supermartingale => supermartingale_suite(a)?,
            Suite::All => unreachable!(),
        });
    }
    let pass = checks.iter().all(|c| c.pass);
    let text = match a.report {
        Format::Json => json(&VerifyOutput {
            suite: a.suite,
            seed: a.seed,
            checks: checks.clone(),
            pass,
        })?,
        Format::Csv => {
            let mut s = String::from("suite,name,pass,value\n");
            for c in &checks {
                let suite = serde_json::to_value(c.suite).unwrap_or(Value::Null);
                s += &format!(
                    "{},{},{},{}\n",
                    suite.as_str().unwrap_or(""),
                    c.name,
                    c.pass,
                    num(c.value)
                );
            }
            s
        }
    };
    emit(&text, a.out.as_deref())?;
    Ok(Outcome {
        seed: Some(a.seed),
        checks: checks
            .iter()
            .map(|c| CheckOutcome {
                name: c.name.clone(),
                pass: c.pass,
            })
            .collect(),
    })
}
