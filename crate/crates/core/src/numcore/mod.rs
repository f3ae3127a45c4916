//! Numeric kernels: forward-mode dual numbers, finite-difference oracles,
//! dense linear algebra (floating and exact) and rational multivariate
//! polynomials.

pub mod dense;
pub mod dual;
pub mod exact;
pub mod fd;
pub mod linalg;
pub mod poly;
pub mod rng;

pub use dense::Mat;
pub use dual::{dual_gradient, jacobian, Dual, Real, D1, D2, D3};
pub use fd::{fd_gradient, finite_diff_jacobian, FD_STEP};
pub use linalg::{least_squares, LinSolveReport};
pub use poly::{MultiPoly, Rational};
pub use rng::sample_rng;
