//! Normal partial moments and the normal-domination bounds.

use serde::{Deserialize, Serialize};

use crate::error::{check_domain, Result};
use crate::numeric::{bisect, golden_min, integrate, logspace, normal_q, phi};
use crate::thresholds::c_const;

/// Switch from the recurrence to the integral form above this t.
const RECURRENCE_MAX_T: f64 = 3.0;

/// E(Z - t)_+^alpha for a standard normal Z and integer alpha in 0..=5.
pub fn normal_partial_moment(alpha: u32, t: f64) -> Result<f64> {
    check_domain(alpha <= 5, "alpha", alpha as f64, "{0, ..., 5}")?;
    if t > RECURRENCE_MAX_T {
        return Ok(partial_moment_integral(alpha, t));
    }
    let m0 = normal_q(t);
    if alpha == 0 {
        return Ok(m0);
    }
    let mut prev = m0;
    let mut cur = phi(t) - t * m0;
    for a in 2..=alpha {
        let next = (a - 1) as f64 * prev - t * cur;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// phi(t) * integral_0^inf s^alpha exp(-t s - s^2/2) ds; stable for large t.
fn partial_moment_integral(alpha: u32, t: f64) -> f64 {
    let upper = (60.0 / t).min(40.0);
    let body = integrate(
        |s| s.powi(alpha as i32) * (-t * s - 0.5 * s * s).exp(),
        0.0,
        upper,
        1e-14,
    );
    phi(t) * body
}

/// Normal-domination terms at one x for scale s and n summands.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalDomination {
    /// x / (s sqrt n).
    pub z: f64,
    /// c_{5,0} P(Z >= z), clamped at 1.
    pub normal_term: f64,
    pub normal_term_raw: f64,
    /// exp(-z^2/2) for z > 0, else 1.
    pub exp_term: f64,
    /// min of the two terms.
    pub minimum: f64,
    /// inf over t < z of E(Z - t)_+^5 / (z - t)^5.
    pub optimized: f64,
    /// z beyond which the normal term is below the exponential term.
    pub crossover: f64,
}

pub fn normal_dom_bound(x: f64, s: f64, n: usize) -> Result<NormalDomination> {
    check_domain(s > 0.0 && s.is_finite(), "s", s, "(0, inf)")?;
    check_domain(n >= 1, "n", n as f64, "[1, inf)")?;
    let z = x / (s * (n as f64).sqrt());
    let c50 = c_const(5.0, 0.0)?;
    let raw = c50 * normal_q(z);
    let normal_term = raw.min(1.0);
    let exp_term = if z > 0.0 { (-0.5 * z * z).exp() } else { 1.0 };
    Ok(NormalDomination {
        z,
        normal_term,
        normal_term_raw: raw,
        exp_term,
        minimum: normal_term.min(exp_term),
        optimized: normal_b_opt(5, z)?,
        crossover: normal_crossover(c50),
    })
}

/// Solves c Q(z) = exp(-z^2/2) for z > 0.
pub fn normal_crossover(c: f64) -> f64 {
    bisect(|z| (c * normal_q(z)).ln() + 0.5 * z * z, 0.0, 40.0, 1e-14).unwrap_or(f64::NAN)
}

/// inf over t < z of E(Z - t)_+^alpha / (z - t)^alpha, clamped at 1.
pub fn normal_b_opt(alpha: u32, z: f64) -> Result<f64> {
    check_domain(
        (1..=5).contains(&alpha),
        "alpha",
        alpha as f64,
        "{1, ..., 5}",
    )?;
    let obj = |d: f64| {
        let m = normal_partial_moment(alpha, z - d).unwrap_or(f64::INFINITY);
        m / d.powi(alpha as i32)
    };
    let grid = logspace(1e-6, 80.0, 400);
    let (mut bi, mut bv) = (0, obj(grid[0]));
    for (i, &d) in grid.iter().enumerate().skip(1) {
        let v = obj(d);
        if v < bv {
            bi = i;
            bv = v;
        }
    }
    let lo = grid[bi.saturating_sub(1)];
    let hi = grid[(bi + 1).min(grid.len() - 1)];
    let (_, v) = golden_min(obj, lo, hi, 1e-12);
    Ok(v.min(bv).min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recurrence_and_integral_agree_near_switch() {
        for alpha in 0..=5 {
            for t in [2.5, 3.0] {
                let rec = normal_partial_moment(alpha, t).unwrap();
                let int = partial_moment_integral(alpha, t);
                assert!((rec / int - 1.0).abs() < 1e-10, "alpha={alpha} t={t}");
            }
        }
    }

    #[test]
    fn alpha_out_of_range() {
        assert!(normal_partial_moment(6, 0.0).is_err());
    }
}
