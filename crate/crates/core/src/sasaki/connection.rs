//! Levi-Civita connection of the Sasaki metric on `TM` for horizontal and
//! vertical lifts, and the calibration of the curvature argument order.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::bundle::{tm_sasaki_metric, BundleKind, BundlePoint, BundleTangent};
use crate::error::{Error, Result};
use crate::geometry::{christoffel, riemann, Christoffel, CurvatureValue, ManifoldModel};
use crate::numcore::{Mat, FD_STEP};

/// Base vector field known through its value and first derivatives at `x`:
/// `X(y) ≈ value + jacobian · (y − x)`, `jacobian[(a, i)] = ∂_i Xᵃ`.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalField {
    pub value: Vec<f64>,
    pub jacobian: Mat<f64>,
}

impl LocalField {
    pub fn eval(&self, x0: &[f64], y: &[f64]) -> Vec<f64> {
        let d: Vec<f64> = y.iter().zip(x0).map(|(a, b)| a - b).collect();
        let j = self.jacobian.matvec(&d);
        self.value.iter().zip(&j).map(|(a, b)| a + b).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LiftKind {
    Horizontal,
    Vertical,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LiftedField {
    pub kind: LiftKind,
    pub field: LocalField,
}

/// Argument order for the three-slot curvature symbol `R_x(p, q, r)`:
/// `R_x(p, q, r) = R(a₀, a₁) a₂` with `(a₀, a₁, a₂)` the permutation
/// `order` of `(p, q, r)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurvatureSlots {
    pub order: [usize; 3],
}

impl CurvatureSlots {
    pub const IDENTITY: CurvatureSlots = CurvatureSlots { order: [0, 1, 2] };

    pub fn all() -> Vec<CurvatureSlots> {
        [[0, 1, 2], [1, 0, 2], [0, 2, 1], [2, 0, 1], [1, 2, 0], [2, 1, 0]].into_iter().map(|order| CurvatureSlots { order }).collect()
    }

    pub fn apply(&self, r: &CurvatureValue, p: &[f64], q: &[f64], s: &[f64]) -> Vec<f64> {
        let args = [p, q, s];
        r.apply(args[self.order[0]], args[self.order[1]], args[self.order[2]])
    }
}

impl fmt::Display for CurvatureSlots {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = ["p", "q", "r"];
        write!(f, "R_x(p,q,r) = R({},{}){}", n[self.order[0]], n[self.order[1]], n[self.order[2]])
    }
}

fn covariant(gam: &Christoffel<f64>, x: &[f64], y: &LocalField) -> Vec<f64> {
    let d = y.jacobian.matvec(x);
    let c = gam.contract(x, &y.value);
    d.iter().zip(&c).map(|(a, b)| a + b).collect()
}

fn axpy(a: &[f64], k: f64, b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + k * y).collect()
}

/// `∇̃_A B` at `(x, v) ∈ TM` from the lift formulas, with the curvature
/// symbol read through `slots`.
pub fn sasaki_connection(
    m: &ManifoldModel,
    bp: &BundlePoint,
    a: &LiftedField,
    b: &LiftedField,
    slots: CurvatureSlots,
) -> Result<BundleTangent> {
    if bp.kind != BundleKind::Tangent {
        return Err(Error::Precondition("lift formulas are stated on the tangent bundle".into()));
    }
    bp.check(m)?;
    let n = bp.dim();
    let (x, v) = (&bp.base, &bp.fiber);
    let gam = christoffel(m, x)?;
    let r = riemann(m, x)?;
    let (xa, yb) = (&a.field.value, &b.field.value);
    let zero = vec![0.0; n];
    Ok(match (a.kind, b.kind) {
        (LiftKind::Vertical, LiftKind::Vertical) => BundleTangent::zero(n),
        (LiftKind::Horizontal, LiftKind::Vertical) => {
            let h = slots.apply(&r, v, yb, xa).iter().map(|c| 0.5 * c).collect();
            BundleTangent::new(h, covariant(&gam, xa, &b.field))
        }
        (LiftKind::Vertical, LiftKind::Horizontal) => {
            let h = slots.apply(&r, v, xa, yb).iter().map(|c| 0.5 * c).collect();
            BundleTangent::new(h, zero)
        }
        (LiftKind::Horizontal, LiftKind::Horizontal) => {
            let vert = slots.apply(&r, xa, yb, v).iter().map(|c| -0.5 * c).collect();
            BundleTangent::new(covariant(&gam, xa, &b.field), vert)
        }
    })
}

/// Christoffel symbols of a coordinate metric by central differences.
pub fn christoffel_fd(metric: impl Fn(&[f64]) -> Result<Mat<f64>>, p: &[f64], step: f64) -> Result<Christoffel<f64>> {
    let n = p.len();
    let g = metric(p)?;
    let ginv = g.inverse()?;
    let mut dg = Vec::with_capacity(n);
    for l in 0..n {
        let mut plus = p.to_vec();
        let mut minus = p.to_vec();
        plus[l] += step;
        minus[l] -= step;
        dg.push(metric(&plus)?.sub(&metric(&minus)?).scaled(&(0.5 / step)));
    }
    let mut data = Vec::with_capacity(n * n * n);
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0.0;
                for l in 0..n {
                    acc += ginv[(k, l)] * (dg[i][(j, l)] + dg[j][(i, l)] - dg[l][(i, j)]);
                }
                data.push(0.5 * acc);
            }
        }
    }
    Ok(Christoffel { n, data })
}

/// Coordinate vector field on `TM` realizing a lifted field.
fn lifted_coords(m: &ManifoldModel, x0: &[f64], f: &LiftedField, p: &[f64]) -> Result<Vec<f64>> {
    let n = x0.len();
    let (x, v) = p.split_at(n);
    let val = f.field.eval(x0, x);
    Ok(match f.kind {
        LiftKind::Vertical => vec![0.0; n].into_iter().chain(val).collect(),
        LiftKind::Horizontal => {
            let gam = christoffel(m, x)?;
            let corr = gam.contract(&val, v);
            val.iter().copied().chain(corr.into_iter().map(|c| -c)).collect()
        }
    })
}

/// `∇̃_A B` computed directly as the Levi-Civita connection of the explicit
/// coordinate Sasaki metric on `TM`, with every derivative taken by central
/// differences (step `FD_STEP`).
pub fn sasaki_connection_fd(m: &ManifoldModel, bp: &BundlePoint, a: &LiftedField, b: &LiftedField) -> Result<BundleTangent> {
    let n = bp.dim();
    let p = bp.coords();
    let gtilde = christoffel_fd(|q| tm_sasaki_metric::<f64>(m, q), &p, FD_STEP)?;
    let av = lifted_coords(m, &bp.base, a, &p)?;
    let bv = lifted_coords(m, &bp.base, b, &p)?;
    let mut plus = p.clone();
    let mut minus = p.clone();
    for i in 0..2 * n {
        plus[i] += FD_STEP * av[i];
        minus[i] -= FD_STEP * av[i];
    }
    let db = axpy(&lifted_coords(m, &bp.base, b, &plus)?, -1.0, &lifted_coords(m, &bp.base, b, &minus)?);
    let corr = gtilde.contract(&av, &bv);
    let w: Vec<f64> = db.iter().zip(&corr).map(|(d, c)| d / (2.0 * FD_STEP) + c).collect();
    // back to the splitting: H = dx, V = dv + Γ(dx, v)
    let gam = christoffel(m, &bp.base)?;
    let h = w[..n].to_vec();
    let vfix = gam.contract(&h, &bp.fiber);
    Ok(BundleTangent::new(h, axpy(&w[n..], 1.0, &vfix)))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SlotResidual {
    pub slots: CurvatureSlots,
    pub label: String,
    pub max_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CalibrationReport {
    pub samples: usize,
    pub tolerance: f64,
    pub residuals: Vec<SlotResidual>,
    /// The unique passing assignment, if exactly one passes.
    pub choice: Option<CurvatureSlots>,
    pub passing: usize,
}

impl CalibrationReport {
    pub fn choice_label(&self) -> String {
        match self.choice {
            Some(c) => c.to_string(),
            None => format!("undetermined ({} assignments passed)", self.passing),
        }
    }
}

fn random_field<R: Rng + ?Sized>(rng: &mut R, n: usize) -> LocalField {
    let value = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
    let entries: Vec<f64> = (0..n * n).map(|_| rng.random_range(-1.0..1.0)).collect();
    LocalField { value, jacobian: Mat::from_vec(n, n, entries) }
}

/// Largest Euclidean difference between the lift formulas and the
/// finite-difference Sasaki connection over all four lift combinations.
pub fn formula_residual(m: &ManifoldModel, bp: &BundlePoint, x: &LocalField, y: &LocalField, slots: CurvatureSlots) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for ka in [LiftKind::Horizontal, LiftKind::Vertical] {
        for kb in [LiftKind::Horizontal, LiftKind::Vertical] {
            let a = LiftedField { kind: ka, field: x.clone() };
            let b = LiftedField { kind: kb, field: y.clone() };
            let f = sasaki_connection(m, bp, &a, &b, slots)?;
            let o = sasaki_connection_fd(m, bp, &a, &b)?;
            let d = f.stacked().iter().zip(o.stacked()).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);
            worst = worst.max(d);
        }
    }
    Ok(worst)
}

/// Runs every curvature argument order against the finite-difference
/// connection of the explicit Sasaki metric of the unit sphere.
pub fn calibrate_curvature_slots(samples: usize, seed: u64, tolerance: f64) -> Result<CalibrationReport> {
    let m = ManifoldModel::round_sphere();
    let mut inputs = Vec::with_capacity(samples);
    for i in 0..samples {
        let mut rng = crate::numcore::sample_rng(seed, "curvature-calibration", i as u64);
        let x = vec![rng.random_range(0.3..std::f64::consts::PI - 0.3), rng.random_range(-3.0..3.0)];
        let v = vec![rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
        inputs.push((BundlePoint::tangent(x, v), random_field(&mut rng, 2), random_field(&mut rng, 2)));
    }
    let mut residuals = Vec::new();
    for slots in CurvatureSlots::all() {
        let mut worst: f64 = 0.0;
        for (bp, x, y) in &inputs {
            worst = worst.max(formula_residual(&m, bp, x, y, slots)?);
        }
        residuals.push(SlotResidual { slots, label: slots.to_string(), max_residual: worst });
    }
    let passing: Vec<CurvatureSlots> = residuals.iter().filter(|r| r.max_residual < tolerance).map(|r| r.slots).collect();
    let choice = if passing.len() == 1 { Some(passing[0]) } else { None };
    Ok(CalibrationReport { samples, tolerance, residuals, choice, passing: passing.len() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_vertical_pair_vanishes() {
        let m = ManifoldModel::euclidean(2);
        let bp = BundlePoint::tangent(vec![0.1, 0.2], vec![1.0, -1.0]);
        let f = LocalField { value: vec![1.0, 2.0], jacobian: Mat::from_vec(2, 2, vec![0.5, 0.0, 1.0, -1.0]) };
        let a = LiftedField { kind: LiftKind::Vertical, field: f.clone() };
        let z = sasaki_connection(&m, &bp, &a, &a, CurvatureSlots::IDENTITY).unwrap();
        assert_eq!(z, BundleTangent::zero(2));
        let h = LiftedField { kind: LiftKind::Horizontal, field: f.clone() };
        let hh = sasaki_connection(&m, &bp, &h, &h, CurvatureSlots::IDENTITY).unwrap();
        assert_eq!(hh.horizontal, f.jacobian.matvec(&f.value));
        assert!(hh.vertical.iter().all(|c| *c == 0.0));
    }

    #[test]
    fn calibration_singles_out_one_order() {
        let rep = calibrate_curvature_slots(5, 11, 1e-4).unwrap();
        assert_eq!(rep.passing, 1, "{rep:?}");
        assert_eq!(rep.choice, Some(CurvatureSlots::IDENTITY));
    }
}
