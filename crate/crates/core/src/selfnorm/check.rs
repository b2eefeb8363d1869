//! Monte Carlo tails of the self-normalized sums against their bounds.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::lc_majorant;
use crate::dist::{bs_sum, st, FiniteDist};
use crate::error::{check_domain, check_prob_open, Error, Result};
use crate::mc::{atom_grid, run_blocks, tail_rows, McConfig, TailRow};
use crate::numeric::{linspace, normal_q};
use crate::thresholds::{c_const, m_star, P_SYMM};

use super::reciprocating::ReciprocatingMap;
use super::stat::{stat_row, Coord, HatSampler, StatKind};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatCheck {
    pub kind: StatKind,
    /// "c30_normal", "c50_normal" or "c30_lc".
    pub bound: String,
    pub max_value: f64,
    pub rows: Vec<TailRow>,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelfNormReport {
    pub n: usize,
    pub p: f64,
    pub m: f64,
    /// ST parameter of the symmetric statistics: max(sqrt 2 - 1, P(X != 0)).
    pub p_symm: f64,
    pub samples: usize,
    pub seed: u64,
    pub max_asymmetry: f64,
    pub checks: Vec<StatCheck>,
    /// max V-hat <= sqrt(n / p_symm); present when the base law is symmetric.
    pub hat_sup_ok: Option<bool>,
    pub pass: bool,
}

fn is_symmetric(d: &FiniteDist) -> bool {
    d.atoms()
        .iter()
        .all(|a| (d.mass_at(-a.v) - a.p).abs() <= 1e-12)
}

/// Simulates V_W, V_Y,m, V_symm and, for symmetric bases, V and V-hat_symm with n
/// i.i.d. copies of `d`. Tails are compared with c_{5,0} Q(x) (V_W), c_{3,0} Q(x) (V),
/// c_{3,0} P^LC(T_n >= x) (V_Y,m) and c_{3,0} P^LC(n^(-1/2)(ST_1 + ... + ST_n) >= x).
pub fn selfnorm_bound_check(
    d: &FiniteDist,
    n: usize,
    p: f64,
    m: f64,
    mc: &McConfig,
) -> Result<SelfNormReport> {
    check_prob_open(p)?;
    check_domain(n >= 1, "n", n as f64, "[1, inf)")?;
    let ms = m_star(p)?;
    if m < ms * (1.0 - 1e-12) {
        return Err(Error::Condition(format!(
            "m = {m} is below m_star(p) = {ms}"
        )));
    }
    let map = ReciprocatingMap::new(d.clone())?;
    map.check_bounded_asymmetry(p)?;
    let hat = HatSampler::new(d)?;
    let p_symm = P_SYMM.max(1.0 - d.mass_at(0.0));
    let st_law = st(p_symm)?;
    let st_draw = st_law.sampler();
    let base = d.sampler();
    let symmetric = is_symmetric(d);
    let kinds = [
        StatKind::V,
        StatKind::VW,
        StatKind::VYm { m },
        StatKind::VSymm { m: 1.0, p: p_symm },
        StatKind::VHatSymm { m: 1.0, p: p_symm },
    ];

    let values: Vec<[f64; 5]> = run_blocks(mc, |spec, count| {
        let mut rng = spec.rng();
        let mut row = vec![Coord::plain(0.0); n];
        (0..count)
            .map(|_| {
                for c in row.iter_mut() {
                    let x = base.draw(&mut rng);
                    let u: f64 = 1.0 - rng.random::<f64>();
                    *c = Coord {
                        x,
                        r: map.reciprocate(x, u),
                        st: st_draw.draw(&mut rng),
                        hat: hat.hat_of(x, &mut rng),
                    };
                }
                kinds.map(|k| stat_row(&row, k).value)
            })
            .collect()
    });

    let c30 = c_const(3.0, 0.0)?;
    let c50 = c_const(5.0, 0.0)?;
    let t_n = bs_sum(p, n, (n as f64).powf(-0.5 / m))?;
    let u_n = st_law.iid_sum(n).scale(1.0 / (n as f64).sqrt());
    let lc_t = lc_majorant(&t_n);
    let lc_u = lc_majorant(&u_n);
    let sup_hat = (n as f64 / p_symm).sqrt();
    let mut u_grid = atom_grid(&u_n);
    u_grid.push(sup_hat * (1.0 + 1e-9));

    let mut checks = Vec::new();
    for (col, kind) in kinds.iter().enumerate() {
        if matches!(kind, StatKind::V | StatKind::VHatSymm { .. }) && !symmetric {
            continue;
        }
        let mut col_vals: Vec<f64> = values.iter().map(|v| v[col]).collect();
        let max_value = col_vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let (label, rows) = match kind {
            StatKind::V => {
                let xs = linspace(0.0, (n as f64).sqrt(), 33);
                let rows = tail_rows(&mut col_vals, &xs, mc.confidence, |x| {
                    (c30 * normal_q(x)).min(1.0)
                });
                ("c30_normal", rows)
            }
            StatKind::VW => {
                let xs = linspace(0.0, 2.0 * (n as f64).sqrt(), 33);
                let rows = tail_rows(&mut col_vals, &xs, mc.confidence, |x| {
                    (c50 * normal_q(x)).min(1.0)
                });
                ("c50_normal", rows)
            }
            StatKind::VYm { .. } => {
                let xs = atom_grid(&t_n);
                (
                    "c30_lc",
                    tail_rows(&mut col_vals, &xs, mc.confidence, |x| {
                        (c30 * lc_t.eval(x)).min(1.0)
                    }),
                )
            }
            _ => (
                "c30_lc",
                tail_rows(&mut col_vals, &u_grid, mc.confidence, |x| {
                    (c30 * lc_u.eval(x)).min(1.0)
                }),
            ),
        };
        checks.push(StatCheck {
            kind: *kind,
            bound: label.to_string(),
            max_value,
            pass: rows.iter().all(|r| r.pass),
            rows,
        });
    }
    let hat_sup_ok = symmetric.then(|| values.iter().all(|v| v[4] <= sup_hat * (1.0 + 1e-12)));
    let pass = checks.iter().all(|c| c.pass) && hat_sup_ok.unwrap_or(true);
    Ok(SelfNormReport {
        n,
        p,
        m,
        p_symm,
        samples: mc.samples,
        seed: mc.seed,
        max_asymmetry: map.max_asymmetry().0,
        checks,
        hat_sup_ok,
        pass,
    })
}
