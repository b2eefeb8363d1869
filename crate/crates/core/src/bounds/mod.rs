//! Tail bounds for sums dominated by a binomial or normal law.

mod majorant;
mod normal;

use serde::{Deserialize, Serialize};

pub use crate::moment::MomentFunction;
pub use majorant::{
    detect_lattice, lc_majorant, lin_lc_majorant, lin_lc_majorant_refined, upper_hull, Knot,
    Lattice, MajorantKind, TailMajorant, REFINE,
};
pub use normal::{
    normal_b_opt, normal_crossover, normal_dom_bound, normal_partial_moment, NormalDomination,
};

use crate::dist::{bs, FiniteDist};
use crate::error::{check_domain, check_prob_open, Result};
use crate::moment::pos_pow;
use crate::numeric::golden_min;
use crate::thresholds::{c_const, m_star, s_m};

/// E(D - t)_+^alpha.
pub fn partial_moment(d: &FiniteDist, alpha: f64, t: f64) -> f64 {
    let start = d.atoms().partition_point(|a| a.v <= t);
    d.atoms()[start..]
        .iter()
        .map(|a| a.p * pos_pow(a.v - t, alpha))
        .sum()
}

/// Result of the moment-to-tail optimization.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BOpt {
    /// Bound clamped at 1.
    pub value: f64,
    pub raw: f64,
    /// Minimizing shift t.
    pub t: f64,
}

/// inf over t < x of E(D - t)_+^alpha / (x - t)^alpha.
///
/// The objective is quasi-convex in t (its alpha-th root is a convex function over a
/// linear one), so a scan plus golden refinement finds the infimum; atoms are added
/// as candidates because the objective has kinks there.
pub fn b_opt(d: &FiniteDist, alpha: f64, x: f64) -> BOpt {
    let (lo_atom, hi_atom) = (d.min(), d.max());
    if x > hi_atom {
        return BOpt {
            value: 0.0,
            raw: 0.0,
            t: hi_atom,
        };
    }
    if x <= lo_atom {
        return BOpt {
            value: 1.0,
            raw: 1.0,
            t: f64::NEG_INFINITY,
        };
    }
    let range = hi_atom - lo_atom;
    let obj = |t: f64| partial_moment(d, alpha, t) / pos_pow(x - t, alpha);
    let t_lo = lo_atom - 10.0 * range;
    let t_hi = x - 1e-9 * range;
    let mut best = (t_hi, obj(t_hi));
    let consider = |best: &mut (f64, f64), t: f64, v: f64| {
        if v < best.1 {
            *best = (t, v);
        }
    };
    let n_scan = 64;
    let step = (t_hi - t_lo) / n_scan as f64;
    let mut scan_best = (0usize, f64::INFINITY);
    for i in 0..=n_scan {
        let t = t_lo + step * i as f64;
        let v = obj(t);
        consider(&mut best, t, v);
        if v < scan_best.1 {
            scan_best = (i, v);
        }
    }
    let (mut a, mut b) = (
        t_lo + step * scan_best.0.saturating_sub(1) as f64,
        (t_lo + step * (scan_best.0 + 1) as f64).min(t_hi),
    );
    if scan_best.0 == 0 {
        // for x just above the mean the minimizer sits near -Var/x; walk left
        let (mut near, mut v_near) = (t_lo + step, obj(t_lo + step));
        let (mut far, mut v_far) = (t_lo, scan_best.1);
        while v_far < v_near && x - far < 1e300 {
            near = far;
            v_near = v_far;
            far = x - 2.0 * (x - far);
            v_far = obj(far);
            consider(&mut best, far, v_far);
        }
        a = far;
        b = x - (x - near) / 2.0;
    }
    let (t, v) = golden_min(obj, a, b, 1e-12);
    consider(&mut best, t, v);
    for atom in d.atoms() {
        if atom.v < x {
            consider(&mut best, atom.v, obj(atom.v));
        }
    }
    // refine between the neighbouring atoms of the incumbent
    let atoms = d.atoms();
    let j = atoms.partition_point(|at| at.v <= best.0);
    let left = if j == 0 { t_lo } else { atoms[j - 1].v };
    let right = if j < atoms.len() {
        atoms[j].v.min(t_hi)
    } else {
        t_hi
    };
    if right > left {
        let (t, v) = golden_min(obj, left, right, 1e-12);
        consider(&mut best, t, v);
    }
    BOpt {
        value: best.1.min(1.0),
        raw: best.1,
        t: best.0,
    }
}

/// H(p, y) = (p+y) ln((p+y)/p) + (q-y) ln((q-y)/q), extended by 0 for y < 0,
/// -ln p at y = q and +inf beyond.
pub fn hoeffding_h(p: f64, y: f64) -> f64 {
    let q = 1.0 - p;
    if y < 0.0 {
        return 0.0;
    }
    if (y - q).abs() <= 1e-12 * q {
        return -p.ln();
    }
    if y > q {
        return f64::INFINITY;
    }
    let r = q - y;
    (p + y) * ((p + y) / p).ln() + r * (r / q).ln()
}

/// exp(-n H) with y = (x/n) sqrt(pq) / s_m.
pub fn hoeffding_bound(p: f64, n: usize, s_m: f64, x: f64) -> f64 {
    let y = x / n as f64 * (p * (1.0 - p)).sqrt() / s_m;
    (-(n as f64) * hoeffding_h(p, y)).exp().min(1.0)
}

/// All bounds on P(S_n >= x) at one x.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub x: f64,
    pub b_opt: f64,
    pub lc_bound: f64,
    pub lin_lc_bound: f64,
    pub hoeffding: f64,
    pub normal_dom: Option<f64>,
    pub minimum: f64,
    pub argmin: String,
    pub raw: RawBounds,
}

/// Bounds before clamping at 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RawBounds {
    pub b_opt: f64,
    pub lc_bound: f64,
    pub lin_lc_bound: f64,
    pub normal_dom: Option<f64>,
}

/// Parameters shared by every point of a bound evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundSetup {
    pub p: f64,
    pub m: f64,
    pub n: usize,
    pub s_m: f64,
    /// s^(1), used by the normal term.
    pub s_1: f64,
    /// Lattice step of T_n, s_m / sqrt(pq).
    pub h: f64,
    /// m is below m_star(p): the comparison is not guaranteed.
    pub below_threshold: bool,
}

/// Precomputed dominating law T_n and its majorants, for evaluation at many x.
#[derive(Debug, Clone)]
pub struct CombinedBounder {
    pub setup: BoundSetup,
    pub t_n: FiniteDist,
    lc: TailMajorant,
    lin_lc: TailMajorant,
    c30: f64,
    with_normal: bool,
}

impl CombinedBounder {
    pub fn from_coeffs(p: f64, m: f64, coeffs: &[f64]) -> Result<Self> {
        for &c in coeffs {
            check_domain(c >= 0.0 && c.is_finite(), "coefficient", c, "[0, inf)")?;
        }
        let s = s_m(coeffs, m)?;
        let s1 = s_m(coeffs, 1.0)?;
        Self::build(p, m, coeffs.len(), s, s1)
    }

    pub fn from_scale(p: f64, m: f64, n: usize, s: f64) -> Result<Self> {
        Self::build(p, m, n, s, s)
    }

    fn build(p: f64, m: f64, n: usize, s: f64, s1: f64) -> Result<Self> {
        check_prob_open(p)?;
        check_domain(m >= 1.0, "m", m, "[1, inf)")?;
        check_domain(n >= 1, "n", n as f64, "[1, inf)")?;
        check_domain(s > 0.0 && s.is_finite(), "s", s, "(0, inf)")?;
        let below = m < m_star(p)? * (1.0 - 1e-12);
        let t_n = bs(p)?.iid_sum(n).scale(s);
        let lc = lc_majorant(&t_n);
        let lin_lc = lin_lc_majorant(&t_n)?;
        Ok(CombinedBounder {
            setup: BoundSetup {
                p,
                m,
                n,
                s_m: s,
                s_1: s1,
                h: s / (p * (1.0 - p)).sqrt(),
                below_threshold: below,
            },
            t_n,
            lc,
            lin_lc,
            c30: c_const(3.0, 0.0)?,
            with_normal: false,
        })
    }

    /// Adds the normal-domination term for p = 1/2, where the summands have half-range c_i.
    pub fn with_normal(mut self, on: bool) -> Self {
        self.with_normal = on && self.setup.p == 0.5;
        self
    }

    pub fn lc_majorant(&self) -> &TailMajorant {
        &self.lc
    }

    pub fn lin_lc_majorant(&self) -> &TailMajorant {
        &self.lin_lc
    }

    pub fn report(&self, x: f64) -> BoundReport {
        let st = &self.setup;
        let bo = b_opt(&self.t_n, 3.0, x);
        let lc_raw = self.c30 * self.lc.eval(x);
        let lin_raw = self.c30 * self.lin_lc.eval(x + st.h / 2.0);
        let hoeff = hoeffding_bound(st.p, st.n, st.s_m, x);
        let normal = if self.with_normal {
            normal_dom_bound(x, st.s_1, st.n).ok()
        } else {
            None
        };
        let fields = [
            ("b_opt", bo.value),
            ("lc", lc_raw.min(1.0)),
            ("lin_lc", lin_raw.min(1.0)),
            ("hoeffding", hoeff),
            ("normal", normal.map_or(f64::INFINITY, |nd| nd.minimum)),
        ];
        let (label, minimum) =
            fields.iter().fold(
                ("", f64::INFINITY),
                |acc, &(l, v)| if v < acc.1 { (l, v) } else { acc },
            );
        BoundReport {
            x,
            b_opt: bo.value,
            lc_bound: lc_raw.min(1.0),
            lin_lc_bound: lin_raw.min(1.0),
            hoeffding: hoeff,
            normal_dom: normal.map(|nd| nd.minimum),
            minimum,
            argmin: label.to_string(),
            raw: RawBounds {
                b_opt: bo.raw,
                lc_bound: lc_raw,
                lin_lc_bound: lin_raw,
                normal_dom: normal.map(|nd| nd.normal_term_raw.min(nd.exp_term)),
            },
        }
    }
}

/// Bound report for P(c_1 BS_1 + ... + c_n BS_n >= x).
pub fn combined_bound(p: f64, m: f64, coeffs: &[f64], x: f64) -> Result<BoundReport> {
    Ok(CombinedBounder::from_coeffs(p, m, coeffs)?.report(x))
}

/// Baseline binomial bound c_{2,0} P^{Lin,LC}(T_n >= y + h/2) with h = b + c^2/b.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BaselineBound {
    pub value: f64,
    pub raw: f64,
    pub h: f64,
}

/// Two-point law taking b with probability c^2/(b^2+c^2) and -c^2/b otherwise.
pub fn baseline_law(b: f64, c: f64) -> Result<FiniteDist> {
    check_domain(b > 0.0 && b.is_finite(), "b", b, "(0, inf)")?;
    check_domain(c > 0.0 && c.is_finite(), "c", c, "(0, inf)")?;
    let w = b * b + c * c;
    Ok(FiniteDist::from_unsorted(vec![
        (-c * c / b, b * b / w),
        (b, c * c / w),
    ]))
}

pub fn baseline_binom_bound(b: f64, c: f64, n: usize, y: f64) -> Result<BaselineBound> {
    check_domain(n >= 1, "n", n as f64, "[1, inf)")?;
    let t_n = baseline_law(b, c)?.iid_sum(n);
    let maj = lin_lc_majorant(&t_n)?;
    let h = b + c * c / b;
    let raw = c_const(2.0, 0.0)? * maj.eval(y + h / 2.0);
    Ok(BaselineBound {
        value: raw.min(1.0),
        raw,
        h,
    })
}
