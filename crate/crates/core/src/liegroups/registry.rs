//! Stable identifiers of the built-in polar actions.

use std::fmt;
use std::str::FromStr;

use super::action::{Action, AxialRotation, MatrixVectorAction, SymmetricConjugation};
use super::group::MatrixGroup;
use crate::error::{Error, Result};
use crate::geometry::ManifoldModel;
use crate::numcore::Mat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExampleId {
    /// Rotations of the plane.
    So2R2,
    /// `SO(3)` on `so(3) ≅ ℝ³`.
    So3Adj,
    /// `SO(3)` conjugating traceless symmetric `3×3` matrices.
    So3Sym0,
    /// `Tⁿ` on `ℂⁿ ≅ ℝ²ⁿ`.
    TorusCn(usize),
    /// Rotation of the round sphere about its polar axis.
    S1S2,
}

impl ExampleId {
    /// The five standard examples (the torus with `n = 2`).
    pub const ALL: [ExampleId; 5] = [ExampleId::So2R2, ExampleId::So3Adj, ExampleId::So3Sym0, ExampleId::TorusCn(2), ExampleId::S1S2];

    pub fn name(&self) -> String {
        match self {
            ExampleId::So2R2 => "so2-r2".into(),
            ExampleId::So3Adj => "so3-adj".into(),
            ExampleId::So3Sym0 => "so3-sym0".into(),
            ExampleId::TorusCn(n) => format!("torus-c{n}"),
            ExampleId::S1S2 => "s1-s2".into(),
        }
    }

    pub fn is_flat(&self) -> bool {
        !matches!(self, ExampleId::S1S2)
    }

    pub fn action(&self) -> Action {
        match *self {
            ExampleId::So2R2 => Action::new(MatrixGroup::special_orthogonal(2), ManifoldModel::euclidean(2), MatrixVectorAction),
            ExampleId::So3Adj => Action::new(MatrixGroup::special_orthogonal(3), ManifoldModel::euclidean(3), MatrixVectorAction),
            ExampleId::So3Sym0 => {
                Action::new(MatrixGroup::special_orthogonal(3), ManifoldModel::constant("sym0(3)", sym0_metric()), SymmetricConjugation)
            }
            ExampleId::TorusCn(n) => Action::new(MatrixGroup::torus(n), ManifoldModel::euclidean(2 * n), MatrixVectorAction),
            ExampleId::S1S2 => Action::new(MatrixGroup::special_orthogonal(2), ManifoldModel::round_sphere(), AxialRotation),
        }
    }
}

/// Trace form `tr(AB)` in the coordinates `(a₁₁, a₂₂, a₁₂, a₁₃, a₂₃)`.
pub fn sym0_metric() -> Mat<f64> {
    let mut g = Mat::zeros(5, 5);
    g[(0, 0)] = 2.0;
    g[(1, 1)] = 2.0;
    g[(0, 1)] = 1.0;
    g[(1, 0)] = 1.0;
    for i in 2..5 {
        g[(i, i)] = 2.0;
    }
    g
}

impl fmt::Display for ExampleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for ExampleId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "so2-r2" => Ok(ExampleId::So2R2),
            "so3-adj" => Ok(ExampleId::So3Adj),
            "so3-sym0" => Ok(ExampleId::So3Sym0),
            "s1-s2" => Ok(ExampleId::S1S2),
            other => {
                let n = other
                    .strip_prefix("torus-c")
                    .and_then(|n| n.parse::<usize>().ok())
                    .filter(|n| (1..=8).contains(n))
                    .ok_or_else(|| Error::Config(format!("unknown example `{other}`")))?;
                Ok(ExampleId::TorusCn(n))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for id in ExampleId::ALL.into_iter().chain([ExampleId::TorusCn(3)]) {
            assert_eq!(id.name().parse::<ExampleId>().unwrap(), id);
        }
        assert!("so4".parse::<ExampleId>().is_err());
        assert!("torus-c0".parse::<ExampleId>().is_err());
    }
}
