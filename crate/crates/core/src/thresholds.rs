//! Threshold curves and scalar constants.

use std::f64::consts::{LN_2, SQRT_2};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{check_domain, check_prob_open, Error, Result};
use crate::numeric::{bisect, golden_min, integrate, linspace};

/// sqrt(2) - 1: the symmetric-case threshold above which m_st = 1.
pub const P_SYMM: f64 = SQRT_2 - 1.0;

/// A point (m, p) on the exponential-class curve with its parameter k.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamPoint {
    pub k: f64,
    pub m: f64,
    pub p: f64,
}

/// Bounds on the symmetric-case threshold at one p.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymThresholds {
    pub p: f64,
    pub m_low: f64,
    pub m_high: f64,
    /// Conjectural exact value; absent where the root formula is ambiguous.
    pub m_conj: Option<f64>,
}

/// Least m for which the binomial comparison holds at p.
pub fn m_star(p: f64) -> Result<f64> {
    check_prob_open(p)?;
    if p >= 0.5 {
        return Ok(1.0);
    }
    Ok((1.0 + p + 2.0 * p * p) / (2.0 * ((p - p * p).sqrt() + 2.0 * p * p)))
}

/// Inverse of m_star on (0, 1/2].
pub fn p_star(m: f64) -> Result<f64> {
    check_domain(m >= 1.0 && m.is_finite(), "m", m, "[1, inf)")?;
    let root = (4.0 * (m - 1.0) * (m + 2.0) + 1.0).sqrt();
    // Rationalized form of (2m+1-root)/(4(2m-1)); avoids cancellation for large m.
    Ok(2.0 / ((2.0 * m - 1.0) * (2.0 * m + 1.0 + root)))
}

/// The other root of the quadratic whose smaller root is p_star(m).
pub fn p_star_upper(m: f64) -> Result<f64> {
    check_domain(m >= 1.0 && m.is_finite(), "m", m, "[1, inf)")?;
    let root = (4.0 * (m - 1.0) * (m + 2.0) + 1.0).sqrt();
    Ok((2.0 * m + 1.0 + root) / (4.0 * (2.0 * m - 1.0)))
}

fn ln_c_term(a: f64) -> f64 {
    if a == 0.0 {
        0.0
    } else {
        libm::lgamma(a + 1.0) + a * (1.0 - a.ln())
    }
}

/// c_{alpha,beta} = Gamma(alpha+1)(e/alpha)^alpha / (Gamma(beta+1)(e/beta)^beta).
pub fn c_const(alpha: f64, beta: f64) -> Result<f64> {
    check_domain(alpha > 0.0 && alpha.is_finite(), "alpha", alpha, "(0, inf)")?;
    check_domain((0.0..=alpha).contains(&beta), "beta", beta, "[0, alpha]")?;
    Ok((ln_c_term(alpha) - ln_c_term(beta)).exp())
}

/// Power mean ((1/n) sum c_i^(2m))^(1/(2m)).
pub fn s_m(coeffs: &[f64], m: f64) -> Result<f64> {
    if coeffs.is_empty() {
        return Err(Error::Degenerate("empty coefficient list".into()));
    }
    check_domain(m >= 1.0, "m", m, "[1, inf)")?;
    let cmax = coeffs.iter().fold(0.0f64, |a, &c| a.max(c.abs()));
    if cmax == 0.0 {
        return Ok(0.0);
    }
    let r = 2.0 * m;
    let mean = coeffs.iter().map(|c| (c.abs() / cmax).powf(r)).sum::<f64>() / coeffs.len() as f64;
    Ok(cmax * mean.powf(1.0 / r))
}

/// m~(k) = (e^k+1)k / (2(e^k-1)).
pub fn m_tilde(k: f64) -> f64 {
    if k == 0.0 {
        return 1.0;
    }
    let h = 0.5 * k;
    h / h.tanh()
}

/// p~(k) = (e^k-1-k) / ((e^k-1)(1+k+(k-1)e^k)).
pub fn p_tilde(k: f64) -> f64 {
    if k <= 0.0 {
        return 0.5;
    }
    if k > 30.0 {
        let e = (-k).exp();
        return (1.0 - (1.0 + k) * e) * e / ((1.0 - e) * ((k - 1.0) + (1.0 + k) * e));
    }
    // e^k - 1 - k, by series where the subtraction cancels
    let n = if k < 1e-2 {
        k * k * (0.5 + k * (1.0 / 6.0 + k * (1.0 / 24.0 + k * (1.0 / 120.0 + k / 720.0))))
    } else {
        k.exp_m1() - k
    };
    let em1 = k.exp_m1();
    n / (em1 * (k * k.exp() - n))
}

/// F(k) = e^k - 1 - k + (1 + k - 2e^k + e^{2k}(1-k)) p, whose root in k is k~(p).
pub fn f_newton(k: f64, p: f64) -> f64 {
    let e = k.exp();
    e - 1.0 - k + (1.0 + k - 2.0 * e + e * e * (1.0 - k)) * p
}

/// F(k) e^{-2k} and its derivative; same root as F, no overflow.
fn f_scaled(k: f64, p: f64) -> (f64, f64) {
    let e1 = (-k).exp();
    let e2 = e1 * e1;
    let f = e1 - e2 * (1.0 + k) + p * (e2 * (1.0 + k) - 2.0 * e1 + 1.0 - k);
    let fp_scaled = e1 - e2 + p * (e2 - 2.0 * e1 + 1.0 - 2.0 * k);
    (f, fp_scaled - 2.0 * f)
}

/// Root of p~(k) = p, by Newton on F with a bisection safeguard.
pub fn k_tilde(p: f64) -> Result<f64> {
    check_domain(p > 0.0 && p < 0.5, "p", p, "(0, 1/2)")?;
    let k0 = 3.0 * (1.0 / (2.0 * p).sqrt() - 1.0) + 1.0;
    // F > 0 left of the root and F < 0 right of it.
    let (mut lo, mut hi) = (1e-8, 1e3);
    let mut k = if k0 < hi { k0 } else { 0.5 * (lo + hi) };
    let mut dx_old = hi - lo;
    let mut trace = Vec::with_capacity(100);
    for _ in 0..100 {
        trace.push(k);
        let (f, fp) = f_scaled(k, p);
        if f == 0.0 {
            return Ok(k);
        }
        if f > 0.0 {
            lo = k;
        } else {
            hi = k;
        }
        let newton = k - f / fp;
        // bisect when Newton leaves the bracket or is not halving the step
        let next = if !newton.is_finite()
            || newton <= lo
            || newton >= hi
            || (2.0 * f).abs() > (dx_old * fp).abs()
        {
            0.5 * (lo + hi)
        } else {
            newton
        };
        let step = (next - k).abs();
        dx_old = step;
        k = next;
        if step < 1e-13 || hi - lo < 1e-13 {
            return Ok(k);
        }
    }
    Err(Error::Convergence {
        what: "k_tilde",
        trace,
    })
}

pub fn m_exp_parametric(k: f64) -> Result<ParamPoint> {
    check_domain(k > 0.0 && k.is_finite(), "k", k, "(0, inf)")?;
    Ok(ParamPoint {
        k,
        m: m_tilde(k),
        p: p_tilde(k),
    })
}

/// Exact threshold for the exponential class.
pub fn m_exp(p: f64) -> Result<f64> {
    check_prob_open(p)?;
    if p >= 0.5 {
        return Ok(1.0);
    }
    Ok(m_tilde(k_tilde(p)?))
}

/// Closed-form upper bound on m_exp.
pub fn m_exp_up(p: f64) -> Result<f64> {
    check_domain(p > 0.0 && p < 0.5, "p", p, "(0, 1/2)")?;
    let d = 1.0 - 2.0 * p;
    Ok((d - (2.0 * p).ln()) / (2.0 * d))
}

/// Upper bound for the symmetric case, m_star((1 - sqrt(1-2p))/2).
pub fn m_st_high(p: f64) -> Result<f64> {
    check_prob_open(p)?;
    if p > 0.5 {
        return Ok(1.0);
    }
    let s = (1.0 - 2.0 * p).sqrt();
    let num = 2.0 + 6.0 * p / (1.0 + s) - 2.0 * p;
    let den = 4.0 * ((0.5 * p).sqrt() + 2.0 * p * p / ((1.0 + s) * (1.0 + s)));
    Ok(num / den)
}

/// m_1(p) = sqrt((2-p)/p)/2.
pub fn m_one(p: f64) -> f64 {
    0.5 * ((2.0 - p) / p).sqrt()
}

/// m_low(p) = 3 / (2(1 + log2(1+p))).
pub fn m_low(p: f64) -> f64 {
    1.5 / (1.0 + (1.0 + p).ln() / LN_2)
}

/// Lower bound for the symmetric case.
pub fn m_st_low(p: f64) -> Result<f64> {
    check_prob_open(p)?;
    if p >= P_SYMM {
        return Ok(1.0);
    }
    Ok(1.0f64.max(m_one(p)).max(m_low(p)))
}

/// The degree-6 polynomial in z whose root defines m_0(p).
pub fn sextic(p: f64, z: f64) -> f64 {
    let p2 = p * p;
    let p3 = p2 * p;
    let p4 = p3 * p;
    let c = [
        4.0 * p4 + 40.0 * p3 - 44.0 * p2 + 48.0 * p + 16.0,
        -96.0 * p3 + 144.0 * p2 - 144.0 * p - 96.0,
        72.0 * p3 - 168.0 * p2 + 96.0 * p + 240.0,
        -20.0 * p3 + 60.0 * p2 + 120.0 * p - 320.0,
        36.0 * p2 - 216.0 * p + 240.0,
        -36.0 * p2 + 120.0 * p - 96.0,
        9.0 * p2 - 24.0 * p + 16.0,
    ];
    c.iter().rev().fold(0.0, |acc, &ci| acc * z + ci)
}

/// Root z of the sextic in (0, sqrt 2); errors unless exactly one sign change is seen.
pub fn sextic_root(p: f64) -> Result<f64> {
    check_domain(p > 0.0 && p < P_SYMM, "p", p, "(0, sqrt(2)-1)")?;
    let grid = linspace(0.0, SQRT_2, 10_001);
    let mut brackets = Vec::new();
    for w in grid.windows(2).skip(1) {
        let (a, b) = (sextic(p, w[0]), sextic(p, w[1]));
        if a == 0.0 || a.signum() != b.signum() {
            brackets.push((w[0], w[1]));
        }
    }
    match brackets.as_slice() {
        [(a, b)] => Ok(bisect(|z| sextic(p, z), *a, *b, 1e-15).unwrap_or(*a)),
        [] => Err(Error::Root(format!(
            "no root of the sextic in (0, sqrt 2) at p = {p}"
        ))),
        many => Err(Error::Root(format!(
            "{} sign changes of the sextic in (0, sqrt 2) at p = {p}",
            many.len()
        ))),
    }
}

/// m_0(p) = 1/(2 log2 z); conjectural.
pub fn m_zero(p: f64) -> Result<f64> {
    let z = sextic_root(p)?;
    Ok(0.5 * LN_2 / z.ln())
}

/// Crossing point of m_1 and m_0 (about 0.3878).
pub fn p_zero_one() -> f64 {
    static P01: OnceLock<f64> = OnceLock::new();
    *P01.get_or_init(|| {
        bisect(
            |p| m_one(p) - m_zero(p).unwrap_or(f64::NAN),
            0.37,
            0.40,
            1e-14,
        )
        .expect("m_1 and m_0 cross in (0.37, 0.40)")
    })
}

/// Crossing point of m_1 and m_low (about 0.3889).
pub fn p_low_one() -> f64 {
    bisect(|p| m_one(p) - m_low(p), 0.3, P_SYMM, 1e-15).expect("m_1 and m_low cross")
}

/// Conjectural symmetric threshold: m_1 below p_{0,1}, m_0 up to sqrt(2)-1, 1 above.
pub fn m_st_conj(p: f64) -> Result<f64> {
    check_prob_open(p)?;
    if p >= P_SYMM {
        Ok(1.0)
    } else if p < p_zero_one() {
        Ok(m_one(p))
    } else {
        m_zero(p)
    }
}

pub fn sym_thresholds(p: f64) -> Result<SymThresholds> {
    Ok(SymThresholds {
        p,
        m_low: m_st_low(p)?,
        m_high: m_st_high(p)?,
        m_conj: m_st_conj(p).ok(),
    })
}

/// The symmetric exponential-class threshold is only known to lie in [1, m_exp(r)].
pub fn m_st_exp_interval(p: f64) -> Result<(f64, f64)> {
    check_domain(p > 0.0 && p <= 0.5, "p", p, "(0, 1/2]")?;
    let r = 2.0 * p / (1.0 + (1.0 - 2.0 * p).sqrt()) / 2.0;
    Ok((1.0, m_exp(r)?))
}

/// Maximal-function constants (k1, k) for 0 < beta < alpha.
pub fn k_max_consts(alpha: f64, beta: f64) -> Result<(f64, f64)> {
    check_domain(alpha > 0.0 && alpha.is_finite(), "alpha", alpha, "(0, inf)")?;
    check_domain(beta > 0.0 && beta < alpha, "beta", beta, "(0, alpha)")?;
    let k = (beta * beta.ln() + (alpha - beta) * (alpha - beta).ln() - alpha * alpha.ln()).exp();
    let log_obj = |ls: f64| -beta * (alpha - 1.0) * ls + alpha * maximal_integral(beta, ls).ln();
    let neg = |ls: f64| -log_obj(ls);
    // coarse scan, then golden refinement in the best cell
    let grid = linspace(-12.0, 12.0, 241);
    let (mut best, mut best_v) = (grid[0], neg(grid[0]));
    for &g in &grid[1..] {
        let v = neg(g);
        if v < best_v {
            best = g;
            best_v = v;
        }
    }
    let (lo, hi) = ((best - 0.1).max(-12.0), (best + 0.1).min(12.0));
    let (_, v) = golden_min(neg, lo, hi, 1e-10);
    Ok(((-v.min(best_v)).exp(), k))
}

/// I(sigma) = integral over (0, sigma) of beta s^(beta-1)/(1+s) ds, with sigma = e^ls.
/// Computed in v = ln s, where the integrand is beta e^(beta v)/(1+e^v).
fn maximal_integral(beta: f64, ls: f64) -> f64 {
    let lower = ls.min(0.0) - 40.0 / beta;
    let f = |v: f64| beta * (beta * v).exp() / (1.0 + v.exp());
    // the piece below `lower` is about e^(beta lower), negligible against the total
    integrate(f, lower, ls, 1e-12) + (beta * lower).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn m_star_continuous_at_half() {
        let a = m_star(0.5 - 1e-12).unwrap();
        assert!((a - 1.0).abs() < 1e-5);
    }

    #[test]
    fn p_tilde_branches_agree() {
        for &k in &[0.009, 0.011, 29.9, 30.1] {
            let direct = {
                let e = f64::exp(k);
                (e - 1.0 - k) / ((e - 1.0) * (1.0 + k + (k - 1.0) * e))
            };
            assert!((p_tilde(k) / direct - 1.0).abs() < 1e-9, "k={k}");
        }
    }

    #[test]
    fn k_tilde_small_p_no_overflow() {
        let k = k_tilde(1e-30).unwrap();
        assert!(k.is_finite());
        assert!((p_tilde(k) / 1e-30 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn domain_errors() {
        assert!(m_star(0.0).is_err());
        assert!(p_star(0.5).is_err());
        assert!(c_const(1.0, 2.0).is_err());
        assert!(k_tilde(0.5).is_err());
        assert!(m_exp_up(0.6).is_err());
        assert!(m_zero(0.5).is_err());
        assert!(k_max_consts(3.0, 3.0).is_err());
    }
}
