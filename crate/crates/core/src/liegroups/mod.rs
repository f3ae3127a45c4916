//! Compact matrix groups, isometric actions and the example registry.

pub mod action;
pub mod group;
pub mod registry;

pub use action::{ActAt, Action, ActionField, AxialRotation, MatrixVectorAction, SymmetricConjugation};
pub use group::{AlgebraElement, GroupElement, GroupKind, MatrixGroup};
pub use registry::ExampleId;
