//! Invariant polynomials: generator lists, averaging over the Weyl group,
//! restriction to sections, surjectivity certificates, extension, and the
//! comparison of brackets and reduced algebras.

pub mod basis;
pub mod certify;
pub mod poisson;
pub mod reduced;
pub mod restrict;
pub mod reynolds;

pub use basis::{ambient_vars, curated_basis, section_vars, InvariantBasis};
pub use certify::{certify_surjectivity, extend_invariant, weyl_invariants, Extension, GradedCertificate};
pub use poisson::{check_poisson_restriction, cotangent_point, default_pairs, section_bracket, PairReport, PoissonRestrictionReport};
pub use reduced::{reduced_algebra_compare, IdealReport, ReducedAlgebraReport, SeparationReport};
pub use restrict::{cotangent_form, restrict_cotangent, restrict_poly, section_cotangent_form, section_cotangent_vars, LinearSection};
pub use reynolds::{is_invariant, reynolds_finite, FiniteLinearGroup};
