//! `bound` and `majorant`: tail bounds and majorants of the dominating law.

use std::path::PathBuf;

use asymtail::bounds::{
    lc_majorant, lin_lc_majorant, BoundReport, BoundSetup, CombinedBounder, Knot,
};
use asymtail::thresholds::m_star;
use asymtail::{bs_sum, FiniteDist};
use clap::Args;
use serde::Serialize;

use crate::output::{emit, json, num, opt, parse_grid, Format};
use crate::{read_dist, CliError, Outcome};

#[derive(Debug, Args)]
pub struct BoundArgs {
    /// Bernoulli parameter of the comparison law.
    #[arg(long)]
    pub p: f64,
    /// Exponent m (defaults to m_star(p)).
    #[arg(long)]
    pub m: Option<f64>,
    /// Number of summands; must match --coeffs when both are given.
    #[arg(long)]
    pub n: Option<usize>,
    /// Comma-separated coefficients c_i.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub coeffs: Option<Vec<f64>>,
    /// Common scale s^(m), used with --n instead of --coeffs.
    #[arg(long)]
    pub scale: Option<f64>,
    /// Comma-separated evaluation points.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub x: Option<Vec<f64>>,
    /// Evaluation grid a:b:step or log:a:b:count.
    #[arg(long)]
    pub x_grid: Option<String>,
    /// Include the normal-domination term (p = 1/2 only).
    #[arg(long)]
    pub normal: bool,
    #[arg(long, value_enum, default_value = "json")]
    pub report: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct BoundOutput {
    setup: BoundSetup,
    points: Vec<BoundReport>,
}

fn x_values(x: &Option<Vec<f64>>, grid: &Option<String>) -> Result<Vec<f64>, CliError> {
    let mut xs = x.clone().unwrap_or_default();
    if let Some(g) = grid {
        xs.extend(parse_grid(g)?);
    }
    if xs.is_empty() {
        return Err(CliError::Usage("give --x or --x-grid".into()));
    }
    Ok(xs)
}

fn bounder(a: &BoundArgs) -> Result<CombinedBounder, CliError> {
    let m = match a.m {
        Some(m) => m,
        None => m_star(a.p)?,
    };
    let b = match (&a.coeffs, a.n, a.scale) {
        (Some(c), n, None) => {
            if n.is_some_and(|n| n != c.len()) {
                return Err(CliError::Usage(format!(
                    "--n {} does not match {} coefficients",
                    n.unwrap(),
                    c.len()
                )));
            }
            CombinedBounder::from_coeffs(a.p, m, c)?
        }
        (None, Some(n), Some(s)) => CombinedBounder::from_scale(a.p, m, n, s)?,
        _ => return Err(CliError::Usage("give --coeffs, or --n with --scale".into())),
    };
    Ok(b.with_normal(a.normal))
}

pub fn run_bound(a: &BoundArgs) -> Result<Outcome, CliError> {
    let b = bounder(a)?;
    let points: Vec<BoundReport> = x_values(&a.x, &a.x_grid)?
        .into_iter()
        .map(|x| b.report(x))
        .collect();
    let text = match a.report {
        Format::Json => json(&BoundOutput {
            setup: b.setup.clone(),
            points,
        })?,
        Format::Csv => {
            let mut s =
                String::from("x,b_opt,lc_bound,lin_lc_bound,hoeffding,normal_dom,minimum,argmin\n");
            for r in &points {
                s += &format!(
                    "{},{},{},{},{},{},{},{}\n",
                    num(r.x),
                    num(r.b_opt),
                    num(r.lc_bound),
                    num(r.lin_lc_bound),
                    num(r.hoeffding),
                    opt(r.normal_dom),
                    num(r.minimum),
                    r.argmin
                );
            }
            s
        }
    };
    emit(&text, a.out.as_deref())?;
    Ok(Outcome::default())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MajorantChoice {
    Lc,
    LinLc,
}

#[derive(Debug, Args)]
pub struct MajorantArgs {
    /// Law as JSON {"atoms":[{"v":..,"p":..}]}; otherwise s * (BS_1 + ... + BS_n).
    #[arg(long)]
    pub dist: Option<PathBuf>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 1.0)]
    pub scale: f64,
    #[arg(long, value_enum, default_value = "lc")]
    pub kind: MajorantChoice,
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub x: Option<Vec<f64>>,
    #[arg(long)]
    pub x_grid: Option<String>,
    #[arg(long, value_enum, default_value = "json")]
    pub report: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct MajorantPoint {
    x: f64,
    tail: f64,
    majorant: f64,
}

#[derive(Serialize)]
struct MajorantOutput {
    kind: MajorantChoice,
    step: Option<f64>,
    support_end: f64,
    knots: Vec<Knot>,
    points: Vec<MajorantPoint>,
}

pub fn run_majorant(a: &MajorantArgs) -> Result<Outcome, CliError> {
    let d: FiniteDist = match (&a.dist, a.p, a.n) {
        (Some(path), None, None) => read_dist(path)?,
        (None, Some(p), Some(n)) => bs_sum(p, n, a.scale)?,
        _ => return Err(CliError::Usage("give --dist, or --p with --n".into())),
    };
    let maj = match a.kind {
        MajorantChoice::Lc => lc_majorant(&d),
        MajorantChoice::LinLc => lin_lc_majorant(&d)?,
    };
    let xs = if a.x.is_none() && a.x_grid.is_none() {
        d.atoms().iter().map(|at| at.v).collect()
    } else {
        x_values(&a.x, &a.x_grid)?
    };
    let points: Vec<MajorantPoint> = xs
        .iter()
        .map(|&x| MajorantPoint {
            x,
            tail: d.tail(x),
            majorant: maj.eval(x),
        })
        .collect();
    let text = match a.report {
        Format::Json => json(&MajorantOutput {
            kind: a.kind,
            step: maj.step,
            support_end: maj.support_end,
            knots: maj.knots.clone(),
            points,
        })?,
        Format::Csv => {
            let mut s = String::from("x,tail,majorant\n");
            for p in &points {
                s += &format!("{},{},{}\n", num(p.x), num(p.tail), num(p.majorant));
            }
            s
        }
    };
    emit(&text, a.out.as_deref())?;
    Ok(Outcome::default())
}
