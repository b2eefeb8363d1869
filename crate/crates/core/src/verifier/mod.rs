//! Exact and Monte Carlo verification of the comparison inequalities.

pub mod delta;
pub mod enumeration;
pub mod schur;
pub mod supermart;

pub use delta::{
    delta, delta2_argmin, delta_four_term, delta_grid_check, delta_piecewise,
    delta_piecewise_identity, DeltaArgmin, DeltaGridReport,
};
pub use enumeration::{
    compare_generalized_moments, enumeration_theorem_check, test_family, two_point,
    two_point_check, two_point_sum, EnumerationReport, TailFamily,
};
pub use schur::{
    exactness_witness, schur_sweep, schur_sweep_fn, schur_sweep_grid, witness_t, witness_u,
    ExactnessOutcome, SchurPair, SchurReport, ViolationWitness,
};
pub use supermart::{
    supermartingale_mc, validate_step, GeneratorRule, Step, SupermartingaleConfig,
    SupermartingaleReport,
};
