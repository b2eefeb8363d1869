//! Reciprocating functions, two-point mixtures and self-normalized sums.

pub mod check;
pub mod reciprocating;
pub mod stat;

pub use check::{selfnorm_bound_check, SelfNormReport, StatCheck};
pub use reciprocating::{recombine, Component, ReciprocatingMap};
pub use stat::{
    hat_dist, hat_sample, selfnorm_stat, stat_row, var_identity_check, Coord, HatSampler,
    SelfNormSample, StatKind,
};
