//! Schur-concavity sweeps of theta -> E f(cos^(1/m) theta BS_1 + sin^(1/m) theta BS_2)
//! and the explicit violation construction below the threshold.

use std::f64::consts::FRAC_PI_4;

use serde::{Deserialize, Serialize};

use crate::error::{check_domain, check_prob_open, Result};
use crate::moment::MomentFunction;
use crate::numeric::linspace;
use crate::thresholds::p_star;

pub const SCHUR_TOL: f64 = 1e-12;
pub const STANDARD_T_POINTS: usize = 201;
pub const WITNESS_POINTS: usize = 10_000;
pub const WITNESS_WINDOW: f64 = 0.2;

/// The two-step Bernoulli pair at (p, m) with exact four-atom evaluation.
#[derive(Debug, Clone, Copy)]
pub struct SchurPair {
    p: f64,
    m: f64,
    hi: f64,
    lo: f64,
}

impl SchurPair {
    pub fn new(p: f64, m: f64) -> Result<Self> {
        check_prob_open(p)?;
        check_domain(m >= 1.0, "m", m, "[1, inf)")?;
        let q = 1.0 - p;
        Ok(SchurPair {
            p,
            m,
            hi: (q / p).sqrt(),
            lo: -(p / q).sqrt(),
        })
    }

    /// (cos^(1/m) theta, sin^(1/m) theta), made exactly equal at pi/4.
    pub fn weights(&self, theta: f64) -> (f64, f64) {
        if theta == FRAC_PI_4 {
            let w = 0.5f64.powf(0.5 / self.m);
            return (w, w);
        }
        let e = 1.0 / self.m;
        (theta.cos().powf(e), theta.sin().max(0.0).powf(e))
    }

    pub fn eval_weights<F: Fn(f64) -> f64>(&self, w1: f64, w2: f64, f: F) -> f64 {
        let (p, q) = (self.p, 1.0 - self.p);
        let (h, l) = (self.hi, self.lo);
        p * p * f(w1 * h + w2 * h)
            + p * q * (f(w1 * h + w2 * l) + f(w1 * l + w2 * h))
            + q * q * f(w1 * l + w2 * l)
    }

    /// g(theta) = E f(cos^(1/m) theta BS_1 + sin^(1/m) theta BS_2).
    pub fn eval<F: Fn(f64) -> f64>(&self, theta: f64, f: F) -> f64 {
        let (w1, w2) = self.weights(theta);
        self.eval_weights(w1, w2, f)
    }

    /// Support hull over all theta in [0, pi/4].
    pub fn support(&self) -> (f64, f64) {
        let top = 2.0 * 0.5f64.powf(0.5 / self.m);
        (top * self.lo, top * self.hi)
    }
}

fn cube_plus(x: f64, t: f64) -> f64 {
    let y = x - t;
    if y > 0.0 {
        y * y * y
    } else {
        0.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchurReport {
    pub p: f64,
    pub m: f64,
    pub t: Option<f64>,
    pub theta_count: usize,
    /// min over j of g(theta_{j+1}) - g(theta_j), scaled by max(1, |g(theta_j)|).
    pub min_forward_difference: f64,
    pub at_theta: f64,
    pub monotone: bool,
}

fn sweep<F: Fn(f64) -> f64>(pair: &SchurPair, theta_count: usize, f: F) -> (f64, f64) {
    let thetas = linspace(0.0, FRAC_PI_4, theta_count);
    let gs: Vec<f64> = thetas.iter().map(|&th| pair.eval(th, &f)).collect();
    let mut best = (f64::INFINITY, 0.0);
    for j in 0..theta_count - 1 {
        let d = (gs[j + 1] - gs[j]) / gs[j].abs().max(1.0);
        if d < best.0 {
            best = (d, thetas[j]);
        }
    }
    best
}

/// Monotonicity of g on [0, pi/4] for f = (x - t)_+^3.
pub fn schur_sweep(p: f64, m: f64, t: f64, theta_count: usize) -> Result<SchurReport> {
    check_domain(
        theta_count >= 16,
        "theta_count",
        theta_count as f64,
        "[16, inf)",
    )?;
    let pair = SchurPair::new(p, m)?;
    let (d, th) = sweep(&pair, theta_count, |x| cube_plus(x, t));
    Ok(SchurReport {
        p,
        m,
        t: Some(t),
        theta_count,
        min_forward_difference: d,
        at_theta: th,
        monotone: d >= -SCHUR_TOL,
    })
}

/// Monotonicity of g on [0, pi/4] for an arbitrary moment function.
pub fn schur_sweep_fn(
    p: f64,
    m: f64,
    f: &MomentFunction,
    theta_count: usize,
) -> Result<SchurReport> {
    check_domain(
        theta_count >= 16,
        "theta_count",
        theta_count as f64,
        "[16, inf)",
    )?;
    let pair = SchurPair::new(p, m)?;
    let (d, th) = sweep(&pair, theta_count, |x| f.eval(x));
    Ok(SchurReport {
        p,
        m,
        t: None,
        theta_count,
        min_forward_difference: d,
        at_theta: th,
        monotone: d >= -SCHUR_TOL,
    })
}

/// The standard t grid: 201 points over the theta-support widened by 1.
pub fn standard_t_grid(p: f64, m: f64) -> Result<Vec<f64>> {
    let (lo, hi) = SchurPair::new(p, m)?.support();
    Ok(linspace(lo - 1.0, hi + 1.0, STANDARD_T_POINTS))
}

/// The worst sweep over the standard t grid.
pub fn schur_sweep_grid(p: f64, m: f64, theta_count: usize) -> Result<SchurReport> {
    let mut worst: Option<SchurReport> = None;
    for t in standard_t_grid(p, m)? {
        let r = schur_sweep(p, m, t, theta_count)?;
        if worst
            .as_ref()
            .is_none_or(|w| r.min_forward_difference < w.min_forward_difference)
        {
            worst = Some(r);
        }
    }
    Ok(worst.expect("nonempty grid"))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ViolationWitness {
    pub theta: f64,
    pub t: f64,
    /// g(pi/4) - g(theta); negative for a genuine violation.
    pub gap: f64,
    pub p: f64,
    pub m: f64,
}

impl ViolationWitness {
    /// Recomputes the gap at the stored (theta, t).
    pub fn reproduce(&self) -> Result<f64> {
        let pair = SchurPair::new(self.p, self.m)?;
        let f = |x| cube_plus(x, self.t);
        Ok(pair.eval(FRAC_PI_4, f) - pair.eval(self.theta, f))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum ExactnessOutcome {
    /// p < p_star(m) and the scan found g(theta) > g(pi/4).
    Witness(ViolationWitness),
    /// p >= p_star(m) and the scan confirmed no violation.
    NoViolation { min_gap: f64 },
    /// p < p_star(m) but the scan found no violation.
    ScanFailed { min_gap: f64 },
    /// p >= p_star(m) yet the scan found a violation.
    UnexpectedViolation(ViolationWitness),
}

impl ExactnessOutcome {
    pub fn witness(&self) -> Option<&ViolationWitness> {
        match self {
            ExactnessOutcome::Witness(w) => Some(w),
            _ => None,
        }
    }

    pub fn is_expected(&self) -> bool {
        matches!(
            self,
            ExactnessOutcome::Witness(_) | ExactnessOutcome::NoViolation { .. }
        )
    }
}

/// u_p = -2^(1-1/(2m)) (m-1) / ((2m-1)(1-p)).
pub fn witness_u(p: f64, m: f64) -> f64 {
    -(2.0f64).powf(1.0 - 0.5 / m) * (m - 1.0) / ((2.0 * m - 1.0) * (1.0 - p))
}

/// t_p = -u_p - 2^(1-1/(2m)) p, on the centered Bernoulli scale.
pub fn witness_t(p: f64, m: f64) -> f64 {
    -witness_u(p, m) - (2.0f64).powf(1.0 - 0.5 / m) * p
}

/// Scans theta in [pi/4 - 0.2, pi/4) for g(theta) > g(pi/4) at t = t_p / sqrt(pq).
pub fn exactness_witness(p: f64, m: f64) -> Result<ExactnessOutcome> {
    let pair = SchurPair::new(p, m)?;
    let t = witness_t(p, m) / (p * (1.0 - p)).sqrt();
    let f = |x| cube_plus(x, t);
    let g0 = pair.eval(FRAC_PI_4, f);
    let mut best = (f64::INFINITY, FRAC_PI_4);
    for j in 0..WITNESS_POINTS {
        let theta = FRAC_PI_4 - WITNESS_WINDOW + WITNESS_WINDOW * j as f64 / WITNESS_POINTS as f64;
        let gap = g0 - pair.eval(theta, f);
        if gap < best.0 {
            best = (gap, theta);
        }
    }
    let below = p < p_star(m)?;
    let violated = best.0 < -SCHUR_TOL;
    let w = ViolationWitness {
        theta: best.1,
        t,
        gap: best.0,
        p,
        m,
    };
    Ok(match (below, violated) {
        (true, true) => ExactnessOutcome::Witness(w),
        (true, false) => ExactnessOutcome::ScanFailed { min_gap: best.0 },
        (false, false) => ExactnessOutcome::NoViolation { min_gap: best.0 },
        (false, true) => ExactnessOutcome::UnexpectedViolation(w),
    })
}
