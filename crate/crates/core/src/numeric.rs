//! Small numerical helpers shared by the modules.

use statrs::function::beta::beta_reg;

pub const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

/// Standard normal density.
pub fn phi(t: f64) -> f64 {
    INV_SQRT_2PI * (-0.5 * t * t).exp()
}

/// Standard normal upper tail P(Z >= t).
pub fn normal_q(t: f64) -> f64 {
    0.5 * libm::erfc(t / std::f64::consts::SQRT_2)
}

/// Golden-section minimization of a unimodal function on [a, b].
/// Returns (argmin, min).
pub fn golden_min<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut a, mut b) = (a, b);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..200 {
        if (b - a).abs() <= tol * (1.0 + c.abs()) {
            break;
        }
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Grid scan on [a, b] followed by golden refinement around the best grid cell.
pub fn scan_min<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    points: usize,
    tol: f64,
) -> (f64, f64) {
    let points = points.max(3);
    let step = (b - a) / (points - 1) as f64;
    let mut best = (a, f(a));
    let mut best_i = 0;
    for i in 1..points {
        let x = if i == points - 1 {
            b
        } else {
            a + step * i as f64
        };
        let v = f(x);
        if v < best.1 {
            best = (x, v);
            best_i = i;
        }
    }
    let lo = if best_i == 0 {
        a
    } else {
        a + step * (best_i - 1) as f64
    };
    let hi = if best_i + 1 >= points {
        b
    } else {
        a + step * (best_i + 1) as f64
    };
    let refined = golden_min(&mut f, lo, hi, tol);
    if refined.1 < best.1 {
        refined
    } else {
        best
    }
}

/// Bisection for a sign change of `f` on [a, b]. Requires f(a) and f(b) of opposite sign.
pub fn bisect<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: f64) -> Option<f64> {
    let (mut a, mut b) = (a, b);
    let mut fa = f(a);
    let fb = f(b);
    if fa == 0.0 {
        return Some(a);
    }
    if fb == 0.0 {
        return Some(b);
    }
    if fa.signum() == fb.signum() || fa.is_nan() || fb.is_nan() {
        return None;
    }
    for _ in 0..300 {
        let mid = 0.5 * (a + b);
        if (b - a).abs() <= tol || mid == a || mid == b {
            return Some(mid);
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Some(mid);
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    Some(0.5 * (a + b))
}

/// Adaptive double-exponential quadrature on a finite interval.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    quadrature::integrate(f, a, b, tol).integral
}

/// Two-sided Clopper-Pearson interval for `k` successes out of `n` trials.
pub fn clopper_pearson(k: u64, n: u64, confidence: f64) -> (f64, f64) {
    assert!(n > 0 && k <= n);
    let alpha = 1.0 - confidence;
    let (kf, nf) = (k as f64, n as f64);
    // I_x(a, b) is increasing in x; invert by bisection.
    let inv = |target: f64, a: f64, b: f64| {
        bisect(|x| beta_reg(a, b, x) - target, 0.0, 1.0, 1e-15).unwrap_or(0.0)
    };
    let lo = if k == 0 {
        0.0
    } else {
        inv(alpha / 2.0, kf, nf - kf + 1.0)
    };
    let hi = if k == n {
        1.0
    } else {
        inv(1.0 - alpha / 2.0, kf + 1.0, nf - kf)
    };
    (lo, hi)
}

/// Evenly spaced points a, a+step, ... up to b (inclusive within rounding).
pub fn linspace(a: f64, b: f64, count: usize) -> Vec<f64> {
    match count {
        0 => vec![],
        1 => vec![a],
        _ => (0..count)
            .map(|i| {
                if i == count - 1 {
                    b
                } else {
                    a + (b - a) * i as f64 / (count - 1) as f64
                }
            })
            .collect(),
    }
}

/// Log-spaced points between a > 0 and b > 0.
pub fn logspace(a: f64, b: f64, count: usize) -> Vec<f64> {
    linspace(a.ln(), b.ln(), count)
        .into_iter()
        .map(f64::exp)
        .collect()
}
