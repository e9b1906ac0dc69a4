//! Doubled (tilde) algebra on a truncated two-mode Fock space.
//!
//! Every mode `A` has a partner `Ã`. Bogoliubov transformations mix `A` with
//! `Ã†`; the θ-vacuum is a condensate of `A–Ã` pairs. Multi-mode quantities are
//! never built as tensor products: modes factorize, so overlaps multiply and
//! numbers and entropies add.

mod operator;
mod thermo;
mod vacuum;

pub use operator::{
    bogoliubov, bogoliubov_transform, commutator, generator_i_g, ladder_ops, BogoliubovOps,
    FockCutoff, LadderOps, TwoModeOperator, DEFAULT_N_MAX, DEFAULT_TAIL_TOLERANCE,
};
pub use thermo::{
    entropy, entropy_closed_form, entropy_operator, entropy_report, free_energy,
    heat_relation_check, linear_ramp, minimize_free_energy, mode_report, stationary_theta,
    weights, EntropyReport, FreeEnergy, HeatReport, HeatSample, Minimum, ModeReport, ThetaVacuum,
    VacuumReport, Weights,
};
pub use vacuum::{
    annihilation_residuals, foliation_overlap, generator_vacuum_vector, mode_overlap,
    number_expectation, number_routes, overlap_with_bare, pair_amplitudes, theta_vacuum_vector,
    FoliationReport, NumberRoutes,
};
