use serde::{Deserialize, Serialize};

/// A generalized-moment test function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MomentFunction {
    /// (x - t)_+^alpha, with 0^0 taken as 0.
    PowerPlus { alpha: f64, t: f64 },
    /// e^(lambda x).
    Exponential { lambda: f64 },
    /// a + b x + sum of weight * f(x).
    AffineCombo {
        terms: Vec<(f64, MomentFunction)>,
        a: f64,
        b: f64,
    },
    /// |x - t|^alpha.
    AbsPower { alpha: f64, t: f64 },
    /// cosh(lambda x).
    Cosh { lambda: f64 },
    /// (t - x)_+^alpha, the reflection of `PowerPlus`.
    PowerMinus { alpha: f64, t: f64 },
}

impl MomentFunction {
    pub fn power_plus(alpha: f64, t: f64) -> Self {
        MomentFunction::PowerPlus { alpha, t }
    }

    pub fn exponential(lambda: f64) -> Self {
        MomentFunction::Exponential { lambda }
    }

    pub fn eval(&self, x: f64) -> f64 {
        match self {
            MomentFunction::PowerPlus { alpha, t } => pos_pow(x - t, *alpha),
            MomentFunction::PowerMinus { alpha, t } => pos_pow(t - x, *alpha),
            MomentFunction::AbsPower { alpha, t } => (x - t).abs().powf(*alpha),
            MomentFunction::Exponential { lambda } => (lambda * x).exp(),
            MomentFunction::Cosh { lambda } => (lambda * x).cosh(),
            MomentFunction::AffineCombo { terms, a, b } => {
                a + b * x + terms.iter().map(|(w, f)| w * f.eval(x)).sum::<f64>()
            }
        }
    }

    /// Short label used in reports.
    pub fn label(&self) -> String {
        match self {
            MomentFunction::PowerPlus { alpha, t } => format!("(x-{t})_+^{alpha}"),
            MomentFunction::PowerMinus { alpha, t } => format!("({t}-x)_+^{alpha}"),
            MomentFunction::AbsPower { alpha, t } => format!("|x-{t}|^{alpha}"),
            MomentFunction::Exponential { lambda } => format!("exp({lambda}x)"),
            MomentFunction::Cosh { lambda } => format!("cosh({lambda}x)"),
            MomentFunction::AffineCombo { terms, .. } => format!("affine[{}]", terms.len()),
        }
    }
}

/// y_+^alpha with the convention 0^0 = 0.
pub(crate) fn pos_pow(y: f64, alpha: f64) -> f64 {
    if y <= 0.0 {
        0.0
    } else if alpha == 0.0 {
        1.0
    } else if alpha == 3.0 {
        y * y * y
    } else {
        y.powf(alpha)
    }
}
