//! `selfnorm`: Monte Carlo tails of a self-normalized sum against its bound.

use std::path::PathBuf;

use asymtail::mc::McConfig;
use asymtail::selfnorm::{selfnorm_bound_check, StatKind};
use asymtail::thresholds::m_star;
use clap::Args;

use crate::output::{emit, json, num, CheckOutcome, Format};
use crate::{read_dist, CliError, Outcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Kind {
    V,
    Vw,
    Vym,
    Vsymm,
    Vhatsymm,
}

impl Kind {
    fn matches(&self, k: &StatKind) -> bool {
        matches!(
            (self, k),
            (Kind::V, StatKind::V)
                | (Kind::Vw, StatKind::VW)
                | (Kind::Vym, StatKind::VYm { .. })
                | (Kind::Vsymm, StatKind::VSymm { .. })
                | (Kind::Vhatsymm, StatKind::VHatSymm { .. })
        )
    }
}

#[derive(Debug, Args)]
pub struct SelfNormArgs {
    /// Zero-mean base law as JSON {"atoms":[{"v":..,"p":..}]}.
    #[arg(long)]
    pub dist: PathBuf,
    #[arg(long, value_enum, default_value = "vym")]
    pub kind: Kind,
    #[arg(long, default_value_t = 10)]
    pub n: usize,
    /// Asymmetry parameter: X / |r(X)| on {X > 0} must not exceed q/p.
    #[arg(long)]
    pub p: f64,
    /// Defaults to m_star(p).
    #[arg(long)]
    pub m: Option<f64>,
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "csv")]
    pub report: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(a: &SelfNormArgs) -> Result<Outcome, CliError> {
    let d = read_dist(&a.dist)?;
    let m = match a.m {
        Some(m) => m,
        None => m_star(a.p)?,
    };
    let r = selfnorm_bound_check(&d, a.n, a.p, m, &McConfig::new(a.seed, a.samples))?;
    let check = r
        .checks
        .iter()
        .find(|c| a.kind.matches(&c.kind))
        .ok_or_else(|| {
            CliError::Usage(format!(
                "kind {:?} applies to symmetric base laws only",
                a.kind
            ))
        })?;
    let text = match a.report {
        Format::Json => json(&r)?,
        Format::Csv => {
            let mut s = String::from("x,hits,empirical,ci_low,ci_high,ci_half_width,bound,pass\n");
            for row in &check.rows {
                s += &format!(
                    "{},{},{},{},{},{},{},{}\n",
                    num(row.x),
                    row.hits,
                    num(row.empirical),
                    num(row.ci_low),
                    num(row.ci_high),
                    num(row.ci_half_width),
                    num(row.bound),
                    row.pass
                );
            }
            s
        }
    };
    emit(&text, a.out.as_deref())?;
    let mut checks: Vec<CheckOutcome> = r
        .checks
        .iter()
        .map(|c| CheckOutcome {
            name: c.kind.label().to_string(),
            pass: c.pass,
        })
        .collect();
    if let Some(ok) = r.hat_sup_ok {
        checks.push(CheckOutcome {
            name: "vhatsymm_sup".into(),
            pass: ok,
        });
    }
    Ok(Outcome {
        seed: Some(a.seed),
        checks,
    })
}
