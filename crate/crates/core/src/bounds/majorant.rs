//! Least log-concave majorants of discrete tail functions.

use serde::{Deserialize, Serialize};

use crate::dist::FiniteDist;
use crate::error::{Error, Result};
use crate::numeric::golden_min;

/// Default number of subpoints per lattice step in the exported knot table.
pub const REFINE: usize = 64;
const LATTICE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MajorantKind {
    /// Majorant of the step tail x -> P(D >= x).
    Lc,
    /// Majorant of the linear interpolation of the tail over the lattice.
    LinLc,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Knot {
    pub x: f64,
    pub logq: f64,
}

/// Piecewise log-linear least log-concave majorant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailMajorant {
    pub kind: MajorantKind,
    pub knots: Vec<Knot>,
    /// Indices into `knots` of the upper concave envelope.
    pub hull: Vec<usize>,
    /// Lattice step h, when the support lies on a lattice.
    pub step: Option<f64>,
    /// Lattice origin (smallest atom), when the support lies on a lattice.
    pub origin: Option<f64>,
    /// The majorant vanishes beyond this point.
    pub support_end: f64,
    /// Tail values q_k at the lattice points origin + k h (LinLc only).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub lattice_tails: Vec<f64>,
}

/// Affine lattice carrying a support: atoms at origin + k step.
#[derive(Debug, Clone, PartialEq)]
pub struct Lattice {
    pub origin: f64,
    pub step: f64,
    /// Lattice index of each atom.
    pub index: Vec<usize>,
}

/// Detects an affine lattice containing the support, within 1e-9.
pub fn detect_lattice(d: &FiniteDist) -> Result<Lattice> {
    let atoms = d.atoms();
    if atoms.len() < 2 {
        return Err(Error::Lattice("a single atom has no lattice step".into()));
    }
    let (v0, vn) = (d.min(), d.max());
    let range = vn - v0;
    let min_gap = atoms
        .windows(2)
        .map(|w| w[1].v - w[0].v)
        .fold(f64::INFINITY, f64::min);
    let k_top = (range / min_gap).round();
    if k_top > 1e7 {
        return Err(Error::Lattice(format!("{k_top} lattice steps")));
    }
    let step = range / k_top;
    let scale = range.max(v0.abs()).max(vn.abs()).max(1.0);
    let mut index = Vec::with_capacity(atoms.len());
    for a in atoms {
        let k = ((a.v - v0) / step).round();
        if (a.v - (v0 + k * step)).abs() > LATTICE_TOL * scale {
            return Err(Error::Lattice(format!(
                "atom {} is off the lattice {v0} + k*{step}",
                a.v
            )));
        }
        index.push(k as usize);
    }
    Ok(Lattice {
        origin: v0,
        step,
        index,
    })
}

/// Indices of the upper concave hull of points sorted by x.
/// A point is dropped only if it lies below the chord by more than a rounding margin.
pub fn upper_hull(pts: &[Knot]) -> Vec<usize> {
    let mut hull: Vec<usize> = Vec::with_capacity(pts.len());
    for i in 0..pts.len() {
        while hull.len() >= 2 {
            let (o, a) = (pts[hull[hull.len() - 2]], pts[hull[hull.len() - 1]]);
            let b = pts[i];
            let chord = o.logq + (b.logq - o.logq) * (a.x - o.x) / (b.x - o.x);
            let margin = 1e-14 * (1.0 + a.logq.abs().max(chord.abs()));
            if a.logq < chord - margin {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(i);
    }
    hull
}

/// Least log-concave majorant of x -> P(D >= x).
pub fn lc_majorant(d: &FiniteDist) -> TailMajorant {
    let tails = d.tails();
    let knots: Vec<Knot> = d
        .atoms()
        .iter()
        .zip(&tails)
        .map(|(a, &q)| Knot {
            x: a.v,
            logq: if q >= 1.0 { 0.0 } else { q.ln() },
        })
        .collect();
    let hull = upper_hull(&knots);
    let lattice = detect_lattice(d).ok();
    TailMajorant {
        kind: MajorantKind::Lc,
        hull,
        step: lattice.as_ref().map(|l| l.step),
        origin: lattice.as_ref().map(|l| l.origin),
        support_end: d.max(),
        knots,
        lattice_tails: Vec::new(),
    }
}

/// Least log-concave majorant of the lattice linear interpolation of the tail.
pub fn lin_lc_majorant(d: &FiniteDist) -> Result<TailMajorant> {
    lin_lc_majorant_refined(d, REFINE)
}

/// As [`lin_lc_majorant`], with `refine` subpoints per step in the knot table.
/// Evaluation does not depend on `refine`.
pub fn lin_lc_majorant_refined(d: &FiniteDist, refine: usize) -> Result<TailMajorant> {
    let lat = detect_lattice(d)?;
    let top = *lat.index.last().unwrap();
    let mut q = vec![0.0; top + 1];
    for (a, &k) in d.atoms().iter().zip(&lat.index) {
        q[k] += a.p;
    }
    for k in (0..top).rev() {
        q[k] += q[k + 1];
    }
    q[0] = 1.0;
    let refine = refine.max(1);
    let h = lat.step;
    let mut knots = Vec::with_capacity((top + 1) * refine);
    for (k, w) in q.windows(2).enumerate() {
        push_segment(&mut knots, lat.origin + k as f64 * h, h, w[0], w[1], refine);
    }
    push_segment(
        &mut knots,
        lat.origin + top as f64 * h,
        h,
        q[top],
        0.0,
        refine,
    );
    let hull = upper_hull(&knots);
    Ok(TailMajorant {
        kind: MajorantKind::LinLc,
        knots,
        hull,
        step: Some(h),
        origin: Some(lat.origin),
        support_end: lat.origin + (top + 1) as f64 * h,
        lattice_tails: q,
    })
}

fn push_segment(out: &mut Vec<Knot>, x0: f64, h: f64, a: f64, b: f64, refine: usize) {
    for j in 0..refine {
        let s = j as f64 / refine as f64;
        let v = a + (b - a) * s;
        out.push(Knot {
            x: x0 + s * h,
            logq: v.ln(),
        });
    }
}

impl TailMajorant {
    /// Value of the majorant at x.
    pub fn eval(&self, x: f64) -> f64 {
        self.log_eval(x).exp()
    }

    /// Logarithm of the majorant at x.
    pub fn log_eval(&self, x: f64) -> f64 {
        match self.kind {
            MajorantKind::Lc => self.log_eval_hull(x),
            MajorantKind::LinLc => self.log_eval_exact(x),
        }
    }

    /// Log-linear interpolation along the stored hull knots.
    pub fn log_eval_hull(&self, x: f64) -> f64 {
        let first = self.knots[self.hull[0]];
        if x <= first.x {
            return 0.0;
        }
        let beyond = match self.kind {
            MajorantKind::Lc => x > self.support_end,
            MajorantKind::LinLc => x >= self.support_end,
        };
        if beyond {
            return f64::NEG_INFINITY;
        }
        let last = self.knots[*self.hull.last().unwrap()];
        if x >= last.x {
            if self.kind == MajorantKind::Lc || self.hull.len() < 2 {
                return last.logq;
            }
            // extend the final hull edge towards the zero at support_end
            let prev = self.knots[self.hull[self.hull.len() - 2]];
            return last.logq + (x - last.x) * (last.logq - prev.logq) / (last.x - prev.x);
        }
        let j = self.hull.partition_point(|&i| self.knots[i].x < x);
        let (a, b) = (self.knots[self.hull[j - 1]], self.knots[self.hull[j]]);
        a.logq + (b.logq - a.logq) * (x - a.x) / (b.x - a.x)
    }

    /// Exact concave envelope of log of the interpolant, as inf over slopes of
    /// lambda x + g*(lambda), where g* is computed in closed form per segment.
    fn log_eval_exact(&self, x: f64) -> f64 {
        let (x0, h) = (self.origin.unwrap(), self.step.unwrap());
        if x <= x0 {
            return 0.0;
        }
        if x >= self.support_end {
            return f64::NEG_INFINITY;
        }
        let q = &self.lattice_tails;
        let conj = |lambda: f64| -> f64 {
            let mut best = f64::NEG_INFINITY;
            for k in 0..q.len() {
                let a = q[k];
                let next = if k + 1 < q.len() { q[k + 1] } else { 0.0 };
                let b = (next - a) / h;
                let xk = x0 + k as f64 * h;
                let s = if b == 0.0 {
                    h
                } else {
                    (1.0 / lambda - a / b).clamp(0.0, h)
                };
                let val = if b == 0.0 {
                    a.ln() - lambda * (xk + h)
                } else {
                    (a + b * s).ln() - lambda * (xk + s)
                };
                best = best.max(val);
            }
            best
        };
        let psi = |u: f64| {
            let lambda = -u.exp() / h;
            lambda * x + conj(lambda)
        };
        let (_, v) = golden_min(psi, -40.0, 40.0, 1e-13);
        v.min(0.0)
    }

    /// Second differences of log q along the hull (slope changes); all should be <= 1e-12.
    pub fn max_second_difference(&self) -> f64 {
        let pts: Vec<Knot> = self.hull.iter().map(|&i| self.knots[i]).collect();
        pts.windows(3)
            .map(|w| {
                let s1 = (w[1].logq - w[0].logq) / (w[1].x - w[0].x);
                let s2 = (w[2].logq - w[1].logq) / (w[2].x - w[1].x);
                (s2 - s1) * (w[2].x - w[0].x) * 0.5
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Linear interpolation of the lattice tail (LinLc only).
    pub fn interpolant(&self, x: f64) -> f64 {
        let (x0, h) = (self.origin.unwrap_or(0.0), self.step.unwrap_or(1.0));
        if x <= x0 {
            return 1.0;
        }
        let t = (x - x0) / h;
        let k = t.floor() as usize;
        if k >= self.lattice_tails.len() {
            return 0.0;
        }
        let a = self.lattice_tails[k];
        let b = self.lattice_tails.get(k + 1).copied().unwrap_or(0.0);
        a + (b - a) * (t - k as f64)
    }
}
