//! `thresholds`: threshold values at a point, constants, and curve tables.

use std::path::PathBuf;

use asymtail::thresholds::{
    c_const, k_tilde, m_exp, m_exp_up, m_st_conj, m_st_high, m_st_low, m_star, p_star, p_star_upper,
};
use clap::Args;
use serde::Serialize;

use crate::output::{emit, json, num, parse_grid, Format};
use crate::{CliError, Outcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Curve {
    MStar,
    PStar,
    MExp,
    MExpUp,
    MStLow,
    MStHigh,
    MConj,
    /// p_star(m_star(p)): the round trip, equal to p for p <= 1/2.
    PStarOfMStar,
    /// Every p-indexed curve as columns.
    All,
}

#[derive(Debug, Args)]
pub struct ThresholdArgs {
    /// Report every threshold at this p.
    #[arg(long)]
    pub p: Option<f64>,
    /// Report p_star at this m.
    #[arg(long)]
    pub m: Option<f64>,
    /// Report c_{alpha,beta} (beta defaults to 0).
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// Emit a curve over --grid.
    #[arg(long, value_enum)]
    pub curve: Option<Curve>,
    /// Grid a:b:step or log:a:b:count (p for p-curves, m for p_star).
    #[arg(long)]
    pub grid: Option<String>,
    /// Emit the m_star versus m_exp table at p = 10^-1, ..., 10^-4.
    #[arg(long)]
    pub table: bool,
    #[arg(long, value_enum)]
    pub report: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct PointOutput {
    p: f64,
    m_star: f64,
    p_star_of_m_star: f64,
    m_exp: f64,
    k_tilde: Option<f64>,
    m_exp_up: Option<f64>,
    m_st_low: f64,
    m_st_high: f64,
    m_conj: Option<f64>,
}

#[derive(Serialize)]
struct InverseOutput {
    m: f64,
    p_star: f64,
    p_star_upper: f64,
}

#[derive(Serialize)]
struct ConstantOutput {
    alpha: f64,
    beta: f64,
    c: f64,
}

#[derive(Serialize)]
struct TableRow {
    p: f64,
    m_star: f64,
    m_exp: f64,
    m_exp_up: f64,
}

#[derive(Serialize, Default)]
struct ThresholdOutput {
    #[serde(skip_serializing_if = "Option::is_none")]
    point: Option<PointOutput>,
    #[serde(skip_serializing_if = "Option::is_none")]
    inverse: Option<InverseOutput>,
    #[serde(skip_serializing_if = "Option::is_none")]
    constant: Option<ConstantOutput>,
    #[serde(skip_serializing_if = "Option::is_none")]
    table: Option<Vec<TableRow>>,
}

fn point(p: f64) -> Result<PointOutput, CliError> {
    let ms = m_star(p)?;
    Ok(PointOutput {
        p,
        m_star: ms,
        p_star_of_m_star: p_star(ms)?,
        m_exp: m_exp(p)?,
        k_tilde: (p < 0.5).then(|| k_tilde(p)).transpose()?,
        m_exp_up: (p < 0.5).then(|| m_exp_up(p)).transpose()?,
        m_st_low: m_st_low(p)?,
        m_st_high: m_st_high(p)?,
        m_conj: m_st_conj(p).ok(),
    })
}

fn table() -> Result<Vec<TableRow>, CliError> {
    [1e-1, 1e-2, 1e-3, 1e-4]
        .iter()
        .map(|&p| {
            Ok(TableRow {
                p,
                m_star: m_star(p)?,
                m_exp: m_exp(p)?,
                m_exp_up: m_exp_up(p)?,
            })
        })
        .collect()
}

const ALL_COLUMNS: [Curve; 7] = [
    Curve::MStar,
    Curve::PStarOfMStar,
    Curve::MExp,
    Curve::MExpUp,
    Curve::MStLow,
    Curve::MStHigh,
    Curve::MConj,
];

fn column_name(c: Curve) -> &'static str {
    match c {
        Curve::MStar => "m_star",
        Curve::PStar => "p_star",
        Curve::MExp => "m_exp",
        Curve::MExpUp => "m_exp_up",
        Curve::MStLow => "m_st_low",
        Curve::MStHigh => "m_st_high",
        Curve::MConj => "m_conj",
        Curve::PStarOfMStar => "p_star_of_m_star",
        Curve::All => "all",
    }
}

/// Curve value at a grid point; NaN (an empty CSV cell) outside the curve's domain.
fn curve_value(c: Curve, x: f64) -> f64 {
    let r = match c {
        Curve::MStar => m_star(x),
        Curve::PStar => p_star(x),
        Curve::MExp => m_exp(x),
        Curve::MExpUp => m_exp_up(x),
        Curve::MStLow => m_st_low(x),
        Curve::MStHigh => m_st_high(x),
        Curve::MConj => m_st_conj(x),
        Curve::PStarOfMStar => m_star(x).and_then(p_star),
        Curve::All => unreachable!("expanded into columns"),
    };
    r.unwrap_or(f64::NAN)
}

/// CSV table of a curve over a grid.
pub fn emit_table(curve: Curve, grid: &[f64]) -> String {
    let (head, cols): (&str, Vec<Curve>) = match curve {
        Curve::PStar => ("m", vec![Curve::PStar]),
        Curve::All => ("p", ALL_COLUMNS.to_vec()),
        c => ("p", vec![c]),
    };
    let mut s = String::from(head);
    for c in &cols {
        s += ",";
        s += column_name(*c);
    }
    s.push('\n');
    for &x in grid {
        s += &num(x);
        for c in &cols {
            s += ",";
            s += &num(curve_value(*c, x));
        }
        s.push('\n');
    }
    s
}

pub fn run(a: &ThresholdArgs) -> Result<Outcome, CliError> {
    if let Some(curve) = a.curve {
        let spec = a
            .grid
            .as_deref()
            .ok_or_else(|| CliError::Usage("--curve needs --grid".into()))?;
        if a.report == Some(Format::Json) {
            return Err(CliError::Usage("curve tables are CSV only".into()));
        }
        emit(&emit_table(curve, &parse_grid(spec)?), a.out.as_deref())?;
        return Ok(Outcome::default());
    }
    let mut out = ThresholdOutput::default();
    if let Some(p) = a.p {
        out.point = Some(point(p)?);
    }
    if let Some(m) = a.m {
        out.inverse = Some(InverseOutput {
            m,
            p_star: p_star(m)?,
            p_star_upper: p_star_upper(m)?,
        });
    }
    if let Some(alpha) = a.alpha {
        let beta = a.beta.unwrap_or(0.0);
        out.constant = Some(ConstantOutput {
            alpha,
            beta,
            c: c_const(alpha, beta)?,
        });
    }
    let nothing = out.point.is_none() && out.inverse.is_none() && out.constant.is_none();
    if a.table || nothing {
        out.table = Some(table()?);
    }
    let text = match a.report.unwrap_or(Format::Json) {
        Format::Json => json(&out)?,
        Format::Csv => {
            if !(a.table || nothing) {
                return Err(CliError::Usage(
                    "CSV output is available for --table and --curve".into(),
                ));
            }
            let mut s = String::from("p,m_star,m_exp,m_exp_up\n");
            for r in out.table.as_ref().unwrap() {
                s += &format!(
                    "{},{},{},{}\n",
                    num(r.p),
                    num(r.m_star),
                    num(r.m_exp),
                    num(r.m_exp_up)
                );
            }
            s
        }
    };
    emit(&text, a.out.as_deref())?;
    Ok(Outcome::default())
}
