//! Sections, generalized Weyl groups and the structure of `T*M` along `T*Σ`.

pub mod examples;
pub mod orbit;
pub mod projection;
pub mod slice;
pub mod structure;

pub use examples::{latitude_control, offset_line_control, polar_structure};
pub use orbit::{weyl_orbit_intersection, OrbitIntersectionReport, WeylImage};
pub use projection::{
    bundle_distance, cotangent_section_residual, cotangent_section_tangents, locate_covector, project_covector, project_point,
    section_covector, CovectorProjection, PointProjection, ProjectionMethod,
};
pub use slice::{
    check_slice_diagram, principal_splitting, slice_polarity, slice_representation, symplectic_slice, DiagramReport,
    PrincipalSplittingReport, SliceRep, SymplecticSliceReport,
};
pub use structure::{
    check_tsigma_totally_geodesic, compute_weyl_group, verify_section, PolarStructure, SectionReport, TotallyGeodesicReport, WeylGroup,
};
