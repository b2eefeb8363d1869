//! The delta polynomials and the piecewise identity for Delta_2(1, c, u).

use serde::{Deserialize, Serialize};

use crate::error::{check_domain, check_prob_open, Error, Result};
use crate::numeric::linspace;
use crate::thresholds::p_star;

fn check_args(c: f64, p: f64, m: f64) -> Result<()> {
    check_domain(c > 0.0 && c < 1.0, "c", c, "(0, 1)")?;
    check_prob_open(p)?;
    check_domain(m >= 1.0, "m", m, "[1, inf)")
}

/// delta_i(u, c, p, m) for i in 1..=4.
pub fn delta(i: usize, u: f64, c: f64, p: f64, m: f64) -> Result<f64> {
    check_args(c, p, m)?;
    let pw = Powers::new(c, m);
    match i {
        1..=4 => Ok(pw.delta(i, u, p)),
        _ => Err(Error::Index(i)),
    }
}

/// c^(2m-3), c^(2m-2), c^(2m-1), c^(2m) for one c.
#[derive(Debug, Clone, Copy)]
struct Powers {
    c: f64,
    c3: f64,
    c2: f64,
    c1: f64,
    c0: f64,
}

impl Powers {
    fn new(c: f64, m: f64) -> Self {
        let c3 = c.powf(2.0 * m - 3.0);
        Powers {
            c,
            c3,
            c2: c3 * c,
            c1: c3 * c * c,
            c0: c3 * c * c * c,
        }
    }

    fn delta(&self, i: usize, u: f64, p: f64) -> f64 {
        let Powers { c, c3, c2, c1, c0 } = *self;
        let d1 = 2.0 * c * (1.0 - c2) * u + 2.0 * p * c * (1.0 - c1) + c * c * (1.0 - c3);
        match i {
            1 => d1,
            2 => (1.0 - p) * (1.0 - c1) * u * u + d1,
            3 => {
                -c1 * u * u - 2.0 * (c1 - c * p + c0 * p) * u
                    + ((2.0 * c + c * c - 2.0 * c0 - c0 * c) * p - c1)
            }
            _ => (1.0 - c1) * p * (1.0 + c + u).powi(2),
        }
    }
}

fn sq_plus(x: f64) -> f64 {
    if x > 0.0 {
        x * x
    } else {
        0.0
    }
}

/// Delta_2(c1, c2, u) from its four-term (.)_+^2 definition.
pub fn delta_four_term(c1: f64, c2: f64, u: f64, p: f64, m: f64) -> f64 {
    let q = 1.0 - p;
    let (a, b) = (c1.powf(2.0 * m - 1.0), c2.powf(2.0 * m - 1.0));
    -(a - b) * q * sq_plus(u) - (b * q + a * p) * sq_plus(c1 + u)
        + (a * q + b * p) * sq_plus(c2 + u)
        + (a - b) * p * sq_plus(c1 + c2 + u)
}

/// Delta_2(1, c, u) from the piecewise delta table.
pub fn delta_piecewise(c: f64, u: f64, p: f64, m: f64) -> f64 {
    let pw = Powers::new(c, m);
    if u >= 0.0 {
        pw.delta(1, u, p)
    } else if u >= -c {
        pw.delta(2, u, p)
    } else if u >= -1.0 {
        pw.delta(3, u, p)
    } else if u >= -1.0 - c {
        pw.delta(4, u, p)
    } else {
        0.0
    }
}

/// (four-term value, piecewise value) of Delta_2(1, c, u).
pub fn delta_piecewise_identity(c: f64, u: f64, p: f64, m: f64) -> Result<(f64, f64)> {
    check_args(c, p, m)?;
    Ok((
        delta_four_term(1.0, c, u, p, m),
        delta_piecewise(c, u, p, m),
    ))
}

/// Minimizer in u of delta_2.
pub fn delta2_argmin(c: f64, p: f64, m: f64) -> f64 {
    -c * (1.0 - c.powf(2.0 * m - 2.0)) / ((1.0 - c.powf(2.0 * m - 1.0)) * (1.0 - p))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaArgmin {
    pub index: usize,
    pub u: f64,
    pub c: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeltaGridReport {
    pub p: f64,
    pub m: f64,
    pub resolution: usize,
    pub min_value: f64,
    pub argmin: DeltaArgmin,
    /// p >= p_star(m), where the minimum must be nonnegative.
    pub expected_nonnegative: bool,
    pub pass: bool,
}

pub const GRID_TOL: f64 = -1e-12;

/// Minimum of delta_1 on u in [0,3], delta_2 on [-c,0] and delta_3 on [-1,-c] over a c-grid.
pub fn delta_grid_check(p: f64, m: f64, resolution: usize) -> Result<DeltaGridReport> {
    check_prob_open(p)?;
    check_domain(m >= 1.0, "m", m, "[1, inf)")?;
    check_domain(
        resolution >= 10,
        "resolution",
        resolution as f64,
        "[10, inf)",
    )?;
    let mut best = (
        f64::INFINITY,
        DeltaArgmin {
            index: 0,
            u: 0.0,
            c: 0.0,
        },
    );
    let unit = linspace(0.0, 1.0, resolution);
    for j in 1..=resolution {
        let c = j as f64 / (resolution + 1) as f64;
        let pw = Powers::new(c, m);
        let ranges = [(1, 0.0, 3.0), (2, -c, 0.0), (3, -1.0, -c)];
        for (index, lo, hi) in ranges {
            for &s in &unit {
                let u = lo + (hi - lo) * s;
                let v = pw.delta(index, u, p);
                if v < best.0 {
                    best = (v, DeltaArgmin { index, u, c });
                }
            }
        }
    }
    let expected = p >= p_star(m)?;
    Ok(DeltaGridReport {
        p,
        m,
        resolution,
        min_value: best.0,
        argmin: best.1,
        expected_nonnegative: expected,
        pass: !expected || best.0 >= GRID_TOL,
    })
}
