//! The reciprocating function of a zero-mean discrete law and its two-point mixture.

use serde::{Deserialize, Serialize};

use crate::dist::FiniteDist;
use crate::error::{Error, Result};

/// Zero-mean tolerance, relative to max(1, E|X|).
pub const MEAN_TOL: f64 = 1e-12;

/// One signed branch of G: atoms ordered by |v| with inclusive partial sums of |v| P(v).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct Branch {
    values: Vec<f64>,
    cum: Vec<f64>,
}

impl Branch {
    fn new(pairs: impl Iterator<Item = (f64, f64)>) -> Self {
        let mut values = Vec::new();
        let mut cum = Vec::new();
        let mut acc = 0.0;
        for (v, p) in pairs {
            acc += v.abs() * p;
            values.push(v);
            cum.push(acc);
        }
        Branch { values, cum }
    }

    fn total(&self) -> f64 {
        self.cum.last().copied().unwrap_or(0.0)
    }

    /// Sum over atoms with |v| <= r (inclusive) or |v| < r (exclusive).
    fn g(&self, r: f64, inclusive: bool) -> f64 {
        let k = if inclusive {
            self.values.partition_point(|v| v.abs() <= r)
        } else {
            self.values.partition_point(|v| v.abs() < r)
        };
        if k == 0 {
            0.0
        } else {
            self.cum[k - 1]
        }
    }

    /// First atom whose partial sum reaches h, if any.
    fn inverse(&self, h: f64) -> Option<f64> {
        let k = self.cum.partition_point(|&c| c < h);
        self.values.get(k).copied()
    }
}

/// G tables and generalized inverses for a zero-mean discrete law.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReciprocatingMap {
    base: FiniteDist,
    pos: Branch,
    neg: Branch,
}

/// One mixture component: weight and the zero-mean law on {a, b} (a <= 0 <= b).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub weight: f64,
    pub a: f64,
    pub b: f64,
    pub dist: FiniteDist,
}

impl ReciprocatingMap {
    pub fn new(base: FiniteDist) -> Result<Self> {
        let abs_mean = base.expect_with(f64::abs);
        let mean = base.mean();
        if mean.abs() > MEAN_TOL * abs_mean.max(1.0) {
            return Err(Error::InvalidDist(format!("base mean {mean} is not zero")));
        }
        let atoms = base.atoms();
        let pos = Branch::new(atoms.iter().filter(|a| a.v > 0.0).map(|a| (a.v, a.p)));
        let neg = Branch::new(atoms.iter().rev().filter(|a| a.v < 0.0).map(|a| (a.v, a.p)));
        Ok(ReciprocatingMap { base, pos, neg })
    }

    pub fn base(&self) -> &FiniteDist {
        &self.base
    }

    /// E|X| 1{|X| <= |x|, sign X = sign x}.
    pub fn g(&self, x: f64) -> f64 {
        if x > 0.0 {
            self.pos.g(x, true)
        } else if x < 0.0 {
            self.neg.g(-x, true)
        } else {
            0.0
        }
    }

    /// G just inside x (toward zero).
    fn g_inner(&self, x: f64) -> f64 {
        if x > 0.0 {
            self.pos.g(x, false)
        } else if x < 0.0 {
            self.neg.g(-x, false)
        } else {
            0.0
        }
    }

    /// inf{x >= 0 : G(x) >= h}; +inf past the positive branch total.
    pub fn x_plus(&self, h: f64) -> f64 {
        if h <= 0.0 {
            return 0.0;
        }
        self.pos.inverse(h).unwrap_or(f64::INFINITY)
    }

    /// sup{x <= 0 : G(x) >= h}; -inf past the negative branch total.
    pub fn x_minus(&self, h: f64) -> f64 {
        if h <= 0.0 {
            return 0.0;
        }
        self.neg.inverse(h).unwrap_or(f64::NEG_INFINITY)
    }

    /// Randomized reciprocal r(x, u).
    pub fn reciprocate(&self, x: f64, u: f64) -> f64 {
        if x == 0.0 {
            return 0.0;
        }
        let (lo, hi) = (self.g_inner(x), self.g(x));
        let mut h = lo + u * (hi - lo);
        if hi > lo && u > 0.0 && h <= lo {
            h = lo.next_up();
        }
        if x > 0.0 {
            self.x_minus(h.min(self.neg.total()))
        } else {
            self.x_plus(h.min(self.pos.total()))
        }
    }

    /// Finite mixture of two-point zero-mean laws (plus delta_0) equal to the base law.
    pub fn two_point_decomposition(&self) -> Vec<Component> {
        let mut out = Vec::new();
        let zero = self.base.mass_at(0.0);
        if zero > 0.0 {
            out.push(Component {
                weight: zero,
                a: 0.0,
                b: 0.0,
                dist: FiniteDist::point(0.0),
            });
        }
        let (pc, nc) = (&self.pos.cum, &self.neg.cum);
        let top = self.pos.total().min(self.neg.total());
        let (mut i, mut j, mut h0) = (0, 0, 0.0);
        while i < pc.len() && j < nc.len() {
            let h1 = pc[i].min(nc[j]).min(top);
            let dh = h1 - h0;
            if dh > 0.0 {
                let (b, a) = (self.pos.values[i], self.neg.values[j]);
                let (mb, ma) = (dh / b, dh / -a);
                let w = ma + mb;
                let dist = FiniteDist::from_unsorted(vec![(a, ma / w), (b, mb / w)]);
                out.push(Component {
                    weight: w,
                    a,
                    b,
                    dist,
                });
            }
            h0 = h1;
            if pc[i] <= h1 {
                i += 1;
            }
            if nc[j] <= h1 {
                j += 1;
            }
            if h1 >= top {
                break;
            }
        }
        out
    }

    /// Largest b/|a| over the paired atoms.
    pub fn max_asymmetry(&self) -> (f64, Option<(f64, f64)>) {
        self.two_point_decomposition()
            .iter()
            .filter(|c| c.weight > 0.0 && c.b > 0.0)
            .fold((0.0, None), |acc, c| {
                let r = c.b / -c.a;
                if r > acc.0 {
                    (r, Some((c.a, c.b)))
                } else {
                    acc
                }
            })
    }

    /// Checks X / |r(X)| 1{X > 0} <= q/p over every paired slice.
    pub fn check_bounded_asymmetry(&self, p: f64) -> Result<()> {
        let bound = (1.0 - p) / p;
        for c in self.two_point_decomposition() {
            if c.b > 0.0 && c.b / -c.a > bound * (1.0 + 1e-12) {
                return Err(Error::Condition(format!(
                    "atom pair (r(x), x) = ({}, {}) has ratio {} > q/p = {bound}",
                    c.a,
                    c.b,
                    c.b / -c.a
                )));
            }
        }
        Ok(())
    }
}

/// Weighted sum of mixture components.
pub fn recombine(components: &[Component]) -> FiniteDist {
    let pairs = components
        .iter()
        .flat_map(|c| c.dist.atoms().iter().map(move |a| (a.v, c.weight * a.p)))
        .collect();
    FiniteDist::from_unsorted(pairs)
}
