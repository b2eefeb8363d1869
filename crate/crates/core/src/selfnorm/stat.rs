//! Self-normalized statistics and the resample-until-nonzero companion.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dist::{FiniteDist, RngSpec, Sampler};
use crate::error::{check_domain, Result};

/// Draw of X-hat: X when nonzero, else an independent draw from the law of X given X != 0.
#[derive(Debug, Clone)]
pub struct HatSampler {
    base: Sampler,
    nonzero: Sampler,
}

impl HatSampler {
    pub fn new(d: &FiniteDist) -> Result<Self> {
        Ok(HatSampler {
            base: d.sampler(),
            nonzero: d.nonzero_part()?.sampler(),
        })
    }

    /// Returns (X, X-hat).
    pub fn draw_pair<R: Rng + ?Sized>(&self, rng: &mut R) -> (f64, f64) {
        let x = self.base.draw(rng);
        (x, self.hat_of(x, rng))
    }

    pub fn hat_of<R: Rng + ?Sized>(&self, x: f64, rng: &mut R) -> f64 {
        if x != 0.0 {
            x
        } else {
            self.nonzero.draw(rng)
        }
    }
}

/// k draws of X-hat.
pub fn hat_sample(d: &FiniteDist, rng: RngSpec, k: usize) -> Result<Vec<f64>> {
    let s = HatSampler::new(d)?;
    let mut r = rng.rng();
    Ok((0..k).map(|_| s.draw_pair(&mut r).1).collect())
}

/// Exact law of X-hat.
pub fn hat_dist(d: &FiniteDist) -> Result<FiniteDist> {
    d.nonzero_part()
}

/// (Var g(X-hat) - Var g(X)) - ((1-p)/p)(Var g(X) - (E g(X))^2 / p), with p = P(X != 0).
pub fn var_identity_check<G: Fn(f64) -> f64>(d: &FiniteDist, g: G) -> Result<f64> {
    let hat = hat_dist(d)?;
    let p = 1.0 - d.mass_at(0.0);
    let var = |law: &FiniteDist| {
        let m1 = law.expect_with(&g);
        law.expect_with(|x| g(x) * g(x)) - m1 * m1
    };
    let eg = d.expect_with(&g);
    let lhs = var(&hat) - var(d);
    let rhs = (1.0 - p) / p * (var(d) - eg * eg / p);
    Ok(lhs - rhs)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StatKind {
    V,
    VW,
    VYm { m: f64 },
    VSymm { m: f64, p: f64 },
    VHatSymm { m: f64, p: f64 },
}

impl StatKind {
    pub fn label(&self) -> &'static str {
        match self {
            StatKind::V => "v",
            StatKind::VW => "vw",
            StatKind::VYm { .. } => "vym",
            StatKind::VSymm { .. } => "vsymm",
            StatKind::VHatSymm { .. } => "vhatsymm",
        }
    }

    fn m(&self) -> Option<f64> {
        match *self {
            StatKind::VYm { m } | StatKind::VSymm { m, .. } | StatKind::VHatSymm { m, .. } => {
                Some(m)
            }
            _ => None,
        }
    }
}

/// One coordinate of a sample row: X, a reciprocal r(X, U), an ST draw and X-hat.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coord {
    pub x: f64,
    pub r: f64,
    pub st: f64,
    pub hat: f64,
}

impl Coord {
    pub fn plain(x: f64) -> Self {
        Coord {
            x,
            r: -x,
            st: 0.0,
            hat: x,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelfNormSample {
    pub numerator: f64,
    pub denominator: f64,
    pub value: f64,
    pub kind: StatKind,
}

/// (sum |v|^r)^(1/r), scaled by the largest |v| to avoid overflow.
fn power_norm<I: Iterator<Item = f64> + Clone>(vals: I, r: f64) -> f64 {
    let top = vals.clone().fold(0.0f64, |a, v| a.max(v.abs()));
    if top == 0.0 {
        return 0.0;
    }
    top * vals
        .map(|v| (v.abs() / top).powf(r))
        .sum::<f64>()
        .powf(1.0 / r)
}

/// The statistic of `kind` on one row.
pub fn stat_row(row: &[Coord], kind: StatKind) -> SelfNormSample {
    let sum_x: f64 = row.iter().map(|c| c.x).sum();
    let (numerator, denominator) = match kind {
        StatKind::V => (sum_x, power_norm(row.iter().map(|c| c.x), 2.0)),
        StatKind::VW => (sum_x, 0.5 * power_norm(row.iter().map(|c| c.x - c.r), 2.0)),
        StatKind::VYm { m } => (
            sum_x,
            power_norm(row.iter().map(|c| (c.x * c.r).abs().sqrt()), 2.0 * m),
        ),
        StatKind::VSymm { m, .. } => (
            row.iter().map(|c| c.st * c.x).sum(),
            power_norm(row.iter().map(|c| c.x), 2.0 * m),
        ),
        StatKind::VHatSymm { m, p } => (
            sum_x,
            p.sqrt() * power_norm(row.iter().map(|c| c.hat), 2.0 * m),
        ),
    };
    let value = if denominator > 0.0 {
        numerator / denominator
    } else {
        0.0
    };
    SelfNormSample {
        numerator,
        denominator,
        value,
        kind,
    }
}

/// The statistic of `kind` on every row.
pub fn selfnorm_stat(rows: &[Vec<Coord>], kind: StatKind) -> Result<Vec<SelfNormSample>> {
    if let Some(m) = kind.m() {
        check_domain(m >= 1.0, "m", m, "[1, inf)")?;
    }
    if let StatKind::VSymm { p, .. } | StatKind::VHatSymm { p, .. } = kind {
        check_domain(p > 0.0 && p <= 1.0, "p", p, "(0, 1]")?;
    }
    Ok(rows.iter().map(|r| stat_row(r, kind)).collect())
}
