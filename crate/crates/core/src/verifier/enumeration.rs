//! Exact generalized-moment comparisons of weighted Bernoulli sums against the scaled
//! i.i.d. sum, over generating families of test functions.

use serde::{Deserialize, Serialize};

use crate::dist::{bs_sum, weighted_bs_sum, FiniteDist};
use crate::error::{check_domain, check_prob_open, Error, Result};
use crate::moment::MomentFunction;
use crate::numeric::{linspace, logspace};
use crate::thresholds::s_m;

/// Largest number of summands compared by exact enumeration.
pub const MAX_ENUM_TERMS: usize = 12;
/// Expected-pass threshold for a relative generalized-moment violation.
pub const VIOLATION_TOL: f64 = 1e-10;
pub const DEFAULT_T_POINTS: usize = 401;

/// Which tail class the test family is drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailFamily {
    /// (x - t)_+^3 and e^(lambda x).
    Right,
    /// (t - x)_+^3 and e^(-lambda x).
    Left,
    /// Both tails plus |x - t|^3 and cosh(lambda x).
    TwoSided,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnumerationReport {
    pub p: f64,
    pub m: f64,
    pub s_m: f64,
    pub family: TailFamily,
    pub functions: usize,
    /// max over f of (E f(lhs) - E f(rhs)) / max(1, |E f(rhs)|).
    pub max_violation: f64,
    pub worst: Option<MomentFunction>,
    pub pass: bool,
}

/// Default lambda grid: 20 log-spaced points in [0.1, 5].
pub fn default_lambda_grid() -> Vec<f64> {
    logspace(0.1, 5.0, 20)
}

/// Default t grid: 401 points over [min - 1, max + 1] of both laws.
pub fn default_t_grid(lhs: &FiniteDist, rhs: &FiniteDist) -> Vec<f64> {
    let lo = lhs.min().min(rhs.min()) - 1.0;
    let hi = lhs.max().max(rhs.max()) + 1.0;
    linspace(lo, hi, DEFAULT_T_POINTS)
}

/// The test family for a tail class over the given grids.
pub fn test_family(family: TailFamily, t_grid: &[f64], lambda_grid: &[f64]) -> Vec<MomentFunction> {
    let mut fs = Vec::new();
    let right = matches!(family, TailFamily::Right | TailFamily::TwoSided);
    let left = matches!(family, TailFamily::Left | TailFamily::TwoSided);
    for &t in t_grid {
        if right {
            fs.push(MomentFunction::PowerPlus { alpha: 3.0, t });
        }
        if left {
            fs.push(MomentFunction::PowerMinus { alpha: 3.0, t });
        }
        if family == TailFamily::TwoSided {
            fs.push(MomentFunction::AbsPower { alpha: 3.0, t });
        }
    }
    for &l in lambda_grid {
        if right {
            fs.push(MomentFunction::Exponential { lambda: l });
        }
        if left {
            fs.push(MomentFunction::Exponential { lambda: -l });
        }
        if family == TailFamily::TwoSided {
            fs.push(MomentFunction::Cosh { lambda: l });
        }
    }
    fs
}

/// Largest relative excess of E f(lhs) over E f(rhs) across `family`, with the maximizer.
pub fn compare_generalized_moments(
    lhs: &FiniteDist,
    rhs: &FiniteDist,
    family: &[MomentFunction],
) -> (f64, Option<MomentFunction>) {
    let mut best = (f64::NEG_INFINITY, None);
    for f in family {
        let (l, r) = (lhs.expect(f), rhs.expect(f));
        let v = if l == r {
            0.0
        } else {
            (l - r) / r.abs().max(1.0)
        };
        if v > best.0 || best.1.is_none() {
            best = (v, Some(f.clone()));
        }
    }
    best
}

#[allow(clippy::too_many_arguments)]
fn report(
    p: f64,
    m: f64,
    s: f64,
    family: TailFamily,
    lhs: &FiniteDist,
    rhs: &FiniteDist,
    t_grid: Option<&[f64]>,
    lambda_grid: Option<&[f64]>,
) -> EnumerationReport {
    let ts = t_grid.map_or_else(|| default_t_grid(lhs, rhs), <[f64]>::to_vec);
    let ls = lambda_grid.map_or_else(default_lambda_grid, <[f64]>::to_vec);
    let fs = test_family(family, &ts, &ls);
    let (v, worst) = compare_generalized_moments(lhs, rhs, &fs);
    EnumerationReport {
        p,
        m,
        s_m: s,
        family,
        functions: fs.len(),
        max_violation: v,
        worst,
        pass: v <= VIOLATION_TOL,
    }
}

fn check_size(n: usize) -> Result<()> {
    if n == 0 || n > MAX_ENUM_TERMS {
        return Err(Error::Size {
            size: n,
            limit: MAX_ENUM_TERMS,
        });
    }
    Ok(())
}

/// Compares sum c_i BS_i(p) with s^(m)(BS_1 + ... + BS_n) over the right-tail family.
pub fn enumeration_theorem_check(
    p: f64,
    m: f64,
    coeffs: &[f64],
    t_grid: Option<&[f64]>,
    lambda_grid: Option<&[f64]>,
) -> Result<EnumerationReport> {
    check_size(coeffs.len())?;
    check_domain(m >= 1.0, "m", m, "[1, inf)")?;
    let lhs = weighted_bs_sum(p, coeffs)?;
    let s = s_m(coeffs, m)?;
    let rhs = bs_sum(p, coeffs.len(), s)?;
    Ok(report(
        p,
        m,
        s,
        TailFamily::Right,
        &lhs,
        &rhs,
        t_grid,
        lambda_grid,
    ))
}

/// Zero-mean two-point law on {-a, b}.
pub fn two_point(a: f64, b: f64) -> Result<FiniteDist> {
    check_domain(a > 0.0 && a.is_finite(), "a", a, "(0, inf)")?;
    check_domain(b > 0.0 && b.is_finite(), "b", b, "(0, inf)")?;
    FiniteDist::new(vec![(-a, b / (a + b)), (b, a / (a + b))])
}

/// Sum of independent zero-mean two-point laws on {-a_i, b_i}.
pub fn two_point_sum(pairs: &[(f64, f64)]) -> Result<FiniteDist> {
    let mut acc = FiniteDist::point(0.0);
    for &(a, b) in pairs {
        acc = acc.convolve(&two_point(a, b)?);
    }
    Ok(acc)
}

/// Compares a sum of independent zero-mean two-point laws on {-a_i, b_i} with
/// s^(m)(BS_1 + ... + BS_n), where s^(m) is the power mean of a_i b_i.
///
/// The admissible asymmetry depends on the family: b/a <= q/p for the right tail,
/// a/b <= p/q for the left tail, and both of these with p <= 1/2 for the two-sided
/// family, which pins b/a = q/p. The weaker max(b/a, a/b) <= q/p does not suffice:
/// for n = 1, a = b and p < 1/2, E e^(-lambda X) exceeds its comparison value for
/// large lambda.
pub fn two_point_check(
    p: f64,
    m: f64,
    pairs: &[(f64, f64)],
    family: TailFamily,
    t_grid: Option<&[f64]>,
    lambda_grid: Option<&[f64]>,
) -> Result<EnumerationReport> {
    check_prob_open(p)?;
    check_size(pairs.len())?;
    check_domain(m >= 1.0, "m", m, "[1, inf)")?;
    if family == TailFamily::TwoSided {
        check_domain(p <= 0.5, "p", p, "(0, 1/2]")?;
    }
    let ratio = (1.0 - p) / p * (1.0 + 1e-12);
    for &(a, b) in pairs {
        let ok = match family {
            TailFamily::Right => b / a <= ratio,
            TailFamily::Left => a / b <= p / (1.0 - p) * (1.0 + 1e-12),
            TailFamily::TwoSided => b / a <= ratio && a / b <= p / (1.0 - p) * (1.0 + 1e-12),
        };
        if !ok {
            return Err(Error::Condition(format!(
                "pair (a, b) = ({a}, {b}) violates the asymmetry constraint at p = {p}"
            )));
        }
    }
    let roots: Vec<f64> = pairs.iter().map(|&(a, b)| (a * b).sqrt()).collect();
    let s = s_m(&roots, m)?;
    let lhs = two_point_sum(pairs)?;
    let rhs = bs_sum(p, pairs.len(), s)?;
    Ok(report(p, m, s, family, &lhs, &rhs, t_grid, lambda_grid))
}
