//! Fixed-step RK4 integration of the geodesic equation `ẍ = −Γ(ẋ, ẋ)`.

use super::connection::christoffel;
use super::manifold::ManifoldModel;
use crate::error::{Error, Result};

/// Largest step the integrator takes.
pub const MAX_STEP: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq)]
pub struct GeodesicState {
    pub point: Vec<f64>,
    pub velocity: Vec<f64>,
}

fn rhs(m: &ManifoldModel, x: &[f64], v: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    if !m.in_chart(x) {
        return Err(Error::Domain("geodesic left the chart".into()));
    }
    let acc = christoffel(m, x)?.contract(v, v).into_iter().map(|a| -a).collect();
    Ok((v.to_vec(), acc))
}

fn axpy(x: &[f64], k: f64, d: &[f64]) -> Vec<f64> {
    x.iter().zip(d).map(|(a, b)| a + k * b).collect()
}

/// Integrates the geodesic through `(x, v)` for time `t` (which may be negative).
pub fn geodesic_flow(m: &ManifoldModel, x: &[f64], v: &[f64], t: f64) -> Result<GeodesicState> {
    m.check_chart(x)?;
    if v.len() != x.len() {
        return Err(Error::DimensionMismatch { expected: x.len(), got: v.len() });
    }
    let steps = ((t.abs() / MAX_STEP).ceil() as usize).max(1);
    let h = t / steps as f64;
    let (mut x, mut v) = (x.to_vec(), v.to_vec());
    let exit = |k: usize| Error::ChartExit { time: k as f64 * h };
    for k in 0..steps {
        let (k1x, k1v) = rhs(m, &x, &v).map_err(|_| exit(k))?;
        let (k2x, k2v) = rhs(m, &axpy(&x, h / 2.0, &k1x), &axpy(&v, h / 2.0, &k1v)).map_err(|_| exit(k))?;
        let (k3x, k3v) = rhs(m, &axpy(&x, h / 2.0, &k2x), &axpy(&v, h / 2.0, &k2v)).map_err(|_| exit(k))?;
        let (k4x, k4v) = rhs(m, &axpy(&x, h, &k3x), &axpy(&v, h, &k3v)).map_err(|_| exit(k))?;
        for i in 0..x.len() {
            x[i] += h / 6.0 * (k1x[i] + 2.0 * k2x[i] + 2.0 * k3x[i] + k4x[i]);
            v[i] += h / 6.0 * (k1v[i] + 2.0 * k2v[i] + 2.0 * k3v[i] + k4v[i]);
        }
        if !m.in_chart(&x) {
            return Err(exit(k + 1));
        }
    }
    Ok(GeodesicState { point: x, velocity: v })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn flat_geodesics_are_lines() {
        let m = ManifoldModel::euclidean(2);
        let s = geodesic_flow(&m, &[1.0, 2.0], &[0.5, -1.0], 3.0).unwrap();
        assert!((s.point[0] - 2.5).abs() < 1e-12 && (s.point[1] + 1.0).abs() < 1e-12);
    }

    #[test]
    fn great_circle_closes_after_two_pi() {
        let m = ManifoldModel::round_sphere();
        let s = geodesic_flow(&m, &[PI / 2.0, 0.0], &[0.0, 1.0], 2.0 * PI).unwrap();
        assert!(m.coord_dist(&[PI / 2.0, 0.0], &s.point) < 1e-5);
    }

    #[test]
    fn energy_is_conserved() {
        let m = ManifoldModel::round_sphere();
        let x = [1.0, 0.2];
        let v = [0.3, 0.9];
        let e0 = m.inner(&x, &v, &v);
        let s = geodesic_flow(&m, &x, &v, 10.0).unwrap();
        let e1 = m.inner(&s.point, &s.velocity, &s.velocity);
        assert!((e1 - e0).abs() < 1e-5);
    }

    #[test]
    fn chart_exit_reports_time() {
        let m = ManifoldModel::round_sphere();
        // heads straight for the north pole
        match geodesic_flow(&m, &[0.5, 0.0], &[-1.0, 0.0], 1.0) {
            Err(Error::ChartExit { time }) => assert!((time - 0.5).abs() < 2e-3),
            other => panic!("{other:?}"),
        }
    }
}
