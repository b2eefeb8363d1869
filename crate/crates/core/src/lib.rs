//! Moment-comparison and tail bounds for sums of bounded asymmetric random variables.
//!
//! Every inequality is checkable on finite discrete laws: [`dist`] carries exact
//! distributions, [`thresholds`] the exponent curves, [`bounds`] the tail bounds,
//! [`verifier`] the enumeration and Monte Carlo checks and [`selfnorm`] the
//! self-normalized sums.

pub mod bounds;
pub mod dist;
pub mod error;
pub mod mc;
pub mod moment;
pub mod numeric;
pub mod selfnorm;
pub mod thresholds;
pub mod verifier;

pub use dist::{bc, bs, bs_sum, st, weighted_bs_sum, Atom, FiniteDist, RngSpec};
pub use error::{Error, Result};
pub use moment::MomentFunction;
