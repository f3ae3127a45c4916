//! Chart-based Riemannian geometry: metrics, Levi-Civita connection,
//! curvature, parametrized submanifolds and geodesics.

pub mod connection;
pub mod geodesic;
pub mod manifold;
pub mod submanifold;

pub use connection::{christoffel, christoffel_at, christoffel_of, riemann, sectional_curvature, Christoffel, CurvatureValue};
pub use geodesic::{geodesic_flow, GeodesicState};
pub use manifold::{ConstantMetric, ManifoldModel, MetricAt, MetricField, RoundSphere};
pub use submanifold::{AffineParam, LatitudeCircle, ParamAt, ParamField, SphereMeridian, Submanifold};
