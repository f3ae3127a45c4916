//! Bundle geometry of `TM` and `T*M`: horizontal/vertical splitting, Sasaki
//! metric, almost complex structure, symplectic form and connection.

pub mod bundle;
pub mod connection;
pub mod totally_geodesic;

pub use bundle::{
    apply_j, canonical_form, flat, from_coords, horizontal_lift, sasaki_gram, sasaki_inner, sharp, splitting_frame, symplectic_form,
    symplectic_gram, tm_sasaki_metric, to_coords, BundleKind, BundlePoint, BundleTangent,
};
pub use connection::{
    calibrate_curvature_slots, sasaki_connection, sasaki_connection_fd, CalibrationReport, CurvatureSlots, LiftKind, LiftedField,
    LocalField,
};
pub use totally_geodesic::{tangent_lift_jet, tsigma_sff_norm, tsigma_violation};
