//! Monte Carlo plumbing: blocked sampling with per-block streams, and tail tables.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dist::{FiniteDist, RngSpec};
use crate::numeric::clopper_pearson;

/// Number of draws per independent random stream.
pub const BLOCK: usize = 1 << 15;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    pub seed: u64,
    pub samples: usize,
    pub confidence: f64,
}

impl McConfig {
    pub fn new(seed: u64, samples: usize) -> Self {
        McConfig {
            seed,
            samples,
            confidence: 0.99,
        }
    }
}

/// Runs `draw(rng_spec, count)` over blocks in parallel and concatenates in block order,
/// so the output depends only on the seed.
pub fn run_blocks<T, F>(cfg: &McConfig, draw: F) -> Vec<T>
where
    T: Send,
    F: Fn(RngSpec, usize) -> Vec<T> + Sync,
{
    let blocks = cfg.samples.div_ceil(BLOCK);
    let parts: Vec<Vec<T>> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let count = BLOCK.min(cfg.samples - b * BLOCK);
            draw(RngSpec::new(cfg.seed, b as u64), count)
        })
        .collect();
    parts.into_iter().flatten().collect()
}

/// Atoms of `d`, midpoints between consecutive atoms, and one gap past the top.
pub fn atom_grid(d: &FiniteDist) -> Vec<f64> {
    let atoms = d.atoms();
    let mut xs = Vec::with_capacity(2 * atoms.len() + 1);
    for (i, a) in atoms.iter().enumerate() {
        if i > 0 {
            xs.push(0.5 * (atoms[i - 1].v + a.v));
        }
        xs.push(a.v);
    }
    let gap = if atoms.len() > 1 {
        atoms[atoms.len() - 1].v - atoms[atoms.len() - 2].v
    } else {
        1.0
    };
    xs.push(d.max() + gap);
    xs
}

/// Empirical tail at one x, its confidence interval and the bound it is checked against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailRow {
    pub x: f64,
    pub hits: u64,
    pub empirical: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub ci_half_width: f64,
    pub bound: f64,
    pub pass: bool,
}

/// Compares empirical tails P(V >= x) of `samples` with `bound(x)` on `xs`.
/// A row passes when the empirical tail is at most bound + half-width.
pub fn tail_rows<B: Fn(f64) -> f64>(
    samples: &mut [f64],
    xs: &[f64],
    confidence: f64,
    bound: B,
) -> Vec<TailRow> {
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as u64;
    xs.iter()
        .map(|&x| {
            let hits = (samples.len() - samples.partition_point(|&v| v < x)) as u64;
            let empirical = hits as f64 / n as f64;
            let (lo, hi) = clopper_pearson(hits, n, confidence);
            let hw = 0.5 * (hi - lo);
            let b = bound(x);
            TailRow {
                x,
                hits,
                empirical,
                ci_low: lo,
                ci_high: hi,
                ci_half_width: hw,
                bound: b,
                pass: empirical <= b + hw,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn blocks_are_schedule_independent() {
        let cfg = McConfig::new(9, 3 * BLOCK + 17);
        let draw = |spec: RngSpec, k: usize| {
            let mut r = spec.rng();
            (0..k).map(|_| r.random::<u32>()).collect::<Vec<_>>()
        };
        let a = run_blocks(&cfg, draw);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let b = pool.install(|| run_blocks(&cfg, draw));
        assert_eq!(a.len(), cfg.samples);
        assert_eq!(a, b);
    }

    #[test]
    fn tail_rows_count_weak_inequality() {
        let mut s = vec![0.0, 1.0, 1.0, 2.0];
        let rows = tail_rows(&mut s, &[1.0, 2.5], 0.99, |_| 0.5);
        assert_eq!(rows[0].hits, 3);
        assert_eq!(rows[1].hits, 0);
        assert!(rows[1].pass);
    }
}
