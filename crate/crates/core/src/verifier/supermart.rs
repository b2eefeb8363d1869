//! Monte Carlo check of supermartingale tails against the combined bound.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::CombinedBounder;
use crate::error::{check_domain, check_prob_open, Error, Result};
use crate::mc::{atom_grid, run_blocks, tail_rows, McConfig, TailRow};
use crate::thresholds::m_star;

/// How (A, B) and the up-probability are chosen at each step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorRule {
    /// B/A = q/p and sqrt(AB) = c_i at every step; zero drift.
    Constant,
    /// Constant while S >= 0; below zero the ratio drops to q/(4p), the scale halves and
    /// the up-probability is cut by 20%, giving negative drift.
    HistoryScaled,
    /// Each step is at the boundary with probability 1/2, else ratio and scale are
    /// shrunk by independent uniform factors; zero drift.
    Modulated,
}

impl GeneratorRule {
    pub const ALL: [GeneratorRule; 3] = [
        GeneratorRule::Constant,
        GeneratorRule::HistoryScaled,
        GeneratorRule::Modulated,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            GeneratorRule::Constant => "constant",
            GeneratorRule::HistoryScaled => "history_scaled",
            GeneratorRule::Modulated => "modulated",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupermartingaleConfig {
    pub n: usize,
    pub p: f64,
    /// Defaults to m_star(p).
    pub m: Option<f64>,
    pub caps: Vec<f64>,
    pub rule: GeneratorRule,
    pub mc: McConfig,
    /// Defaults to the atoms of T_n, the midpoints between them and one step past the top.
    pub x_grid: Option<Vec<f64>>,
}

impl SupermartingaleConfig {
    pub fn new(n: usize, p: f64, caps: Vec<f64>, rule: GeneratorRule, mc: McConfig) -> Self {
        SupermartingaleConfig {
            n,
            p,
            m: None,
            caps,
            rule,
            mc,
            x_grid: None,
        }
    }
}

/// One step: increment B with probability `p_up`, else -A.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Step {
    pub a: f64,
    pub b: f64,
    pub p_up: f64,
}

/// Checks sqrt(AB) <= cap, B/A <= ratio and nonpositive conditional mean.
pub fn validate_step(step: Step, cap: f64, ratio: f64) -> Result<()> {
    let Step { a, b, p_up } = step;
    let slack = 1.0 + 1e-12;
    let fail = |what: &str| {
        Err(Error::Condition(format!(
            "step (A, B, p_up) = ({a}, {b}, {p_up}) breaks {what}"
        )))
    };
    if !(a > 0.0 && b > 0.0 && (0.0..=1.0).contains(&p_up)) {
        return fail("positivity");
    }
    if (a * b).sqrt() > cap * slack {
        return fail("sqrt(AB) <= c");
    }
    if b / a > ratio * slack {
        return fail("B/A <= q/p");
    }
    if p_up * b - (1.0 - p_up) * a > 1e-12 * (a + b) {
        return fail("nonpositive drift");
    }
    Ok(())
}

fn boundary(cap: f64, ratio: f64) -> Step {
    let r = ratio.sqrt();
    let (a, b) = (cap / r, cap * r);
    Step {
        a,
        b,
        p_up: a / (a + b),
    }
}

fn next_step<R: Rng + ?Sized>(
    rule: GeneratorRule,
    s: f64,
    cap: f64,
    ratio: f64,
    rng: &mut R,
) -> Step {
    match rule {
        GeneratorRule::Constant => boundary(cap, ratio),
        GeneratorRule::HistoryScaled => {
            if s >= 0.0 {
                boundary(cap, ratio)
            } else {
                let st = boundary(0.5 * cap, 0.25 * ratio);
                Step {
                    p_up: 0.8 * st.p_up,
                    ..st
                }
            }
        }
        GeneratorRule::Modulated => {
            if rng.random::<f64>() < 0.5 {
                boundary(cap, ratio)
            } else {
                let u1 = 1.0 - rng.random::<f64>();
                let u2 = 1.0 - rng.random::<f64>();
                boundary(cap * u2, ratio * u1)
            }
        }
    }
}

fn simulate_path<R: Rng + ?Sized>(
    cfg: &SupermartingaleConfig,
    ratio: f64,
    rng: &mut R,
) -> Result<f64> {
    let mut s = 0.0;
    for &cap in &cfg.caps {
        let st = next_step(cfg.rule, s, cap, ratio, rng);
        validate_step(st, cap, ratio)?;
        s += if rng.random::<f64>() < st.p_up {
            st.b
        } else {
            -st.a
        };
    }
    Ok(s)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupermartingaleReport {
    pub rule: GeneratorRule,
    pub n: usize,
    pub p: f64,
    pub m: f64,
    pub s_m: f64,
    pub paths: usize,
    pub seed: u64,
    pub rows: Vec<TailRow>,
    /// max over x of empirical - bound - half-width.
    pub max_excess: f64,
    pub pass: bool,
}

pub fn supermartingale_mc(cfg: &SupermartingaleConfig) -> Result<SupermartingaleReport> {
    check_prob_open(cfg.p)?;
    check_domain(cfg.n >= 1, "n", cfg.n as f64, "[1, inf)")?;
    if cfg.caps.len() != cfg.n {
        return Err(Error::Size {
            size: cfg.caps.len(),
            limit: cfg.n,
        });
    }
    for &c in &cfg.caps {
        check_domain(c > 0.0 && c.is_finite(), "cap", c, "(0, inf)")?;
    }
    check_domain(
        cfg.mc.samples >= 1,
        "samples",
        cfg.mc.samples as f64,
        "[1, inf)",
    )?;
    let m = match cfg.m {
        Some(m) => m,
        None => m_star(cfg.p)?,
    };
    let bounder = CombinedBounder::from_coeffs(cfg.p, m, &cfg.caps)?;
    let ratio = (1.0 - cfg.p) / cfg.p;
    let results = run_blocks(&cfg.mc, |spec, count| {
        let mut rng = spec.rng();
        (0..count)
            .map(|_| simulate_path(cfg, ratio, &mut rng))
            .collect()
    });
    let mut samples = results.into_iter().collect::<Result<Vec<f64>>>()?;
    let xs = cfg
        .x_grid
        .clone()
        .unwrap_or_else(|| atom_grid(&bounder.t_n));
    let rows = tail_rows(&mut samples, &xs, cfg.mc.confidence, |x| {
        bounder.report(x).minimum
    });
    let max_excess = rows
        .iter()
        .map(|r| r.empirical - r.bound - r.ci_half_width)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(SupermartingaleReport {
        rule: cfg.rule,
        n: cfg.n,
        p: cfg.p,
        m,
        s_m: bounder.setup.s_m,
        paths: cfg.mc.samples,
        seed: cfg.mc.seed,
        pass: rows.iter().all(|r| r.pass),
        rows,
        max_excess,
    })
}
