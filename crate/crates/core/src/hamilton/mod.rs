//! Cotangent-lifted actions, moment maps and Poisson brackets.

pub mod moment;
pub mod observable;
pub mod poisson;

pub use moment::{
    check_moment_identities, cotangent_generator, cotangent_generator_coords, cotangent_generator_via_flow, lift_point,
    lifted_differential, moment_component, moment_map, sample_zero_level, zero_level_covector, MomentIdentityReport, MomentValue,
};
pub use observable::{Expr, ObservableFn};
pub use poisson::{
    generator_derivative_residual, hamiltonian_field, invariance_residual, j_gradient_field, poisson_bracket, poly_bracket,
    HamiltonianField,
};
