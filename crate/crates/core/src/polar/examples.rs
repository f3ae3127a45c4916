//! Sections, Weyl generators and closed-form projections of the built-in actions.

use std::f64::consts::{FRAC_PI_4, PI};
use std::sync::Arc;

use nalgebra::{DMatrix, Matrix3, SymmetricEigen};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::structure::{Canonicalizer, PolarStructure, Sampler, SliceCanonicalizer};
use crate::error::Result;
use crate::geometry::{AffineParam, LatitudeCircle, SphereMeridian, Submanifold};
use crate::liegroups::action::sym0_matrix;
use crate::liegroups::registry::sym0_metric;
use crate::liegroups::{ExampleId, GroupElement, MatrixGroup};
use crate::numcore::poly::int;
use crate::numcore::{Mat, Rational};

/// Random points stay this far from fixed points and strata boundaries.
pub const DEGENERACY_MARGIN: f64 = 1e-3;
const ORIGIN_TOL: f64 = 1e-9;

fn unit_columns(n: usize, idx: &[usize]) -> Vec<Vec<Rational>> {
    idx.iter().map(|&i| (0..n).map(|r| int(i64::from(r == i))).collect()).collect()
}

fn linear_section(name: &str, n: usize, idx: &[usize], metric: Mat<f64>, action: &crate::liegroups::Action) -> Submanifold {
    Submanifold::new(action.manifold.clone(), AffineParam::linear(name, unit_columns(n, idx), metric)).expect("dimensions agree")
}

fn element(m: Mat<f64>) -> GroupElement {
    GroupElement { matrix: m }
}

fn diag(d: &[f64]) -> GroupElement {
    let n = d.len();
    element(Mat::from_fn(n, n, |i, j| if i == j { d[i] } else { 0.0 }))
}

fn sampler(f: impl Fn(&mut ChaCha8Rng) -> Vec<f64> + Send + Sync + 'static) -> Sampler {
    Arc::new(f)
}

/// Uniform in `[-r, r]ⁿ`, rejecting points whose `norm` falls below the margin.
fn box_sampler(n: usize, r: f64, norm: impl Fn(&[f64]) -> f64 + Send + Sync + 'static) -> Sampler {
    sampler(move |rng| loop {
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(-r..r)).collect();
        if norm(&x) > DEGENERACY_MARGIN {
            return x;
        }
    })
}

fn euclid(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Rotation of the plane taking the direction of `v` to the positive first axis.
fn plane_alignment(group: &MatrixGroup, i: usize, j: usize, v: (f64, f64)) -> GroupElement {
    if v.0.hypot(v.1) < ORIGIN_TOL {
        return group.identity();
    }
    group.plane_rotation(i, j, -v.1.atan2(v.0))
}

/// Rotation of `ℝ³` taking the direction of `v` to `+e₃`.
pub fn rotation_to_pole(v: &[f64]) -> GroupElement {
    let r = euclid(v);
    if r < ORIGIN_TOL {
        return diag(&[1.0, 1.0, 1.0]);
    }
    let u = [v[0] / r, v[1] / r, v[2] / r];
    let c = u[2];
    if c < -1.0 + 1e-12 {
        return diag(&[1.0, -1.0, -1.0]);
    }
    // axis u × e₃
    let w = [u[1], -u[0], 0.0];
    let k = Matrix3::new(0.0, -w[2], w[1], w[2], 0.0, -w[0], -w[1], w[0], 0.0);
    let m = Matrix3::identity() + k + k * k / (1.0 + c);
    element(Mat::from_fn(3, 3, |i, j| m[(i, j)]))
}

/// Eigenvectors of a symmetric matrix as columns of a rotation, eigenvalues descending.
fn sorted_eigenbasis(a: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let eig = SymmetricEigen::new(a.clone());
    let mut idx: Vec<usize> = (0..a.nrows()).collect();
    idx.sort_by(|&p, &q| eig.eigenvalues[q].total_cmp(&eig.eigenvalues[p]));
    let vals = idx.iter().map(|&i| eig.eigenvalues[i]).collect();
    let q = DMatrix::from_fn(a.nrows(), a.ncols(), |r, c| eig.eigenvectors[(r, idx[c])]);
    (vals, q)
}

fn with_positive_det(mut q: DMatrix<f64>) -> DMatrix<f64> {
    if q.determinant() < 0.0 {
        let last = q.ncols() - 1;
        q.column_mut(last).neg_mut();
    }
    q
}

fn to_dmatrix(m: &Mat<f64>) -> DMatrix<f64> {
    DMatrix::from_fn(m.rows, m.cols, |i, j| m[(i, j)])
}

/// `h₁ = Qᵀ` diagonalizing `A` with eigenvalues sorted descending.
fn sym0_canonical(x: &[f64]) -> Result<GroupElement> {
    let (_, q) = sorted_eigenbasis(&to_dmatrix(&sym0_matrix(x)));
    let q = with_positive_det(q);
    Ok(element(Mat::from_fn(3, 3, |i, j| q[(j, i)])))
}

/// For diagonal `A` with sorted entries, diagonalizes the blocks of `Ξ`
/// over clusters of equal eigenvalues; the result commutes with `A`.
fn sym0_slice_canonical(x: &[f64], v: &[f64]) -> Result<GroupElement> {
    let a = sym0_matrix(x);
    let xi = to_dmatrix(&sym0_matrix(v));
    let d: Vec<f64> = (0..3).map(|i| a[(i, i)]).collect();
    let scale = 1.0 + d.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut q = DMatrix::<f64>::zeros(3, 3);
    let mut start = 0;
    while start < 3 {
        let mut end = start + 1;
        while end < 3 && (d[end] - d[start]).abs() < 1e-8 * scale {
            end += 1;
        }
        let block = xi.view((start, start), (end - start, end - start)).clone_owned();
        let (_, b) = sorted_eigenbasis(&block);
        q.view_mut((start, start), (end - start, end - start)).copy_from(&b);
        start = end;
    }
    let q = with_positive_det(q);
    Ok(element(Mat::from_fn(3, 3, |i, j| q[(j, i)])))
}

fn torus_alignment(group: &MatrixGroup, x: &[f64], only_at_origin: bool, v: &[f64]) -> GroupElement {
    let mut g = group.identity();
    for f in 0..x.len() / 2 {
        let r = x[2 * f].hypot(x[2 * f + 1]);
        if only_at_origin && r > ORIGIN_TOL {
            continue;
        }
        g = plane_alignment(group, 2 * f, 2 * f + 1, (v[2 * f], v[2 * f + 1])).compose(&g);
    }
    g
}

/// The polar structure of a built-in example.
pub fn polar_structure(id: ExampleId) -> PolarStructure {
    let action = id.action();
    let group = action.group.clone();
    match id {
        ExampleId::So2R2 => {
            let section = linear_section("x-axis", 2, &[0], Mat::identity(2), &action);
            let g1 = group.clone();
            let g2 = group.clone();
            let canon: Canonicalizer = Arc::new(move |x| Ok(plane_alignment(&g1, 0, 1, (x[0], x[1]))));
            let slice: SliceCanonicalizer =
                Arc::new(move |x, v| Ok(if euclid(x) < ORIGIN_TOL { plane_alignment(&g2, 0, 1, (v[0], v[1])) } else { g2.identity() }));
            PolarStructure {
                canonicalize: Some(canon),
                slice_canonicalize: Some(slice),
                isotropy_candidates: Vec::new(),
                ..PolarStructure::custom(&id.name(), action, section, box_sampler(2, 2.0, euclid), box_sampler(1, 2.0, euclid))
            }
            .with_weyl_generators(vec![diag(&[-1.0, -1.0])], Some(2))
            .with_principal_isotropy_dim(0)
        }
        ExampleId::So3Adj => {
            let section = linear_section("z-axis", 3, &[2], Mat::identity(3), &action);
            let canon: Canonicalizer = Arc::new(|x| Ok(rotation_to_pole(x)));
            let slice: SliceCanonicalizer =
                Arc::new(|x, v| Ok(if euclid(x) < ORIGIN_TOL { rotation_to_pole(v) } else { diag(&[1.0, 1.0, 1.0]) }));
            PolarStructure {
                canonicalize: Some(canon),
                slice_canonicalize: Some(slice),
                ..PolarStructure::custom(&id.name(), action, section, box_sampler(3, 2.0, euclid), box_sampler(1, 2.0, euclid))
            }
            .with_weyl_generators(vec![diag(&[1.0, -1.0, -1.0])], Some(2))
            .with_principal_isotropy_dim(1)
        }
        ExampleId::So3Sym0 => {
            let section = linear_section("diagonal", 5, &[0, 1], sym0_metric(), &action);
            // −P has determinant one and conjugates like P
            let swap = |i: usize, j: usize| {
                let mut m = Mat::zeros(3, 3);
                for r in 0..3 {
                    let c = if r == i {
                        j
                    } else if r == j {
                        i
                    } else {
                        r
                    };
                    m[(r, c)] = -1.0;
                }
                element(m)
            };
            let gap = |x: &[f64]| {
                let eig = SymmetricEigen::new(to_dmatrix(&sym0_matrix(x)));
                let mut e: Vec<f64> = eig.eigenvalues.iter().copied().collect();
                e.sort_by(f64::total_cmp);
                (e[1] - e[0]).min(e[2] - e[1])
            };
            let diag_gap = |s: &[f64]| {
                let mut e = [s[0], s[1], -s[0] - s[1]];
                e.sort_by(f64::total_cmp);
                (e[1] - e[0]).min(e[2] - e[1])
            };
            PolarStructure {
                canonicalize: Some(Arc::new(sym0_canonical)),
                slice_canonicalize: Some(Arc::new(sym0_slice_canonical)),
                isotropy_candidates: vec![diag(&[1.0, -1.0, -1.0]), diag(&[-1.0, 1.0, -1.0]), diag(&[-1.0, -1.0, 1.0])],
                ..PolarStructure::custom(&id.name(), action, section, box_sampler(5, 2.0, gap), box_sampler(2, 2.0, diag_gap))
            }
            .with_weyl_generators(vec![swap(0, 1), swap(1, 2)], Some(6))
            .with_principal_isotropy_dim(0)
        }
        ExampleId::TorusCn(n) => {
            let idx: Vec<usize> = (0..n).map(|f| 2 * f).collect();
            let section = linear_section("real-axes", 2 * n, &idx, Mat::identity(2 * n), &action);
            let g1 = group.clone();
            let g2 = group.clone();
            let canon: Canonicalizer = Arc::new(move |x| Ok(torus_alignment(&g1, x, false, x)));
            let slice: SliceCanonicalizer = Arc::new(move |x, v| Ok(torus_alignment(&g2, x, true, v)));
            let min_modulus = |x: &[f64]| x.chunks(2).map(|c| c[0].hypot(c[1])).fold(f64::INFINITY, f64::min);
            let min_abs = |s: &[f64]| s.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
            let gens = (0..n).map(|f| group.plane_rotation(2 * f, 2 * f + 1, PI)).collect();
            PolarStructure {
                canonicalize: Some(canon),
                slice_canonicalize: Some(slice),
                ..PolarStructure::custom(&id.name(), action, section, box_sampler(2 * n, 2.0, min_modulus), box_sampler(n, 2.0, min_abs))
            }
            .with_weyl_generators(gens, Some(1 << n))
            .with_principal_isotropy_dim(0)
        }
        ExampleId::S1S2 => {
            let section = Submanifold::new(action.manifold.clone(), SphereMeridian).expect("dimensions agree");
            let g1 = group.clone();
            let g2 = group.clone();
            let canon: Canonicalizer = Arc::new(move |x| Ok(g1.plane_rotation(0, 1, -x[1])));
            let slice: SliceCanonicalizer = Arc::new(move |_, _| Ok(g2.identity()));
            let base = sampler(|rng| vec![rng.random_range(0.05..PI - 0.05), rng.random_range(-PI..PI)]);
            let param = sampler(|rng| {
                let t = rng.random_range(0.05..PI - 0.05);
                vec![if rng.random_bool(0.5) { t } else { -t }]
            });
            PolarStructure {
                canonicalize: Some(canon),
                slice_canonicalize: Some(slice),
                ..PolarStructure::custom(&id.name(), action, section, base, param)
            }
            .with_weyl_generators(vec![group.plane_rotation(0, 1, PI)], Some(2))
            .with_principal_isotropy_dim(0)
        }
    }
}

/// The circle action on `S²` with the latitude circle at colatitude `π/4` in
/// place of a section. It meets every orbit but is not totally geodesic.
pub fn latitude_control() -> PolarStructure {
    let action = ExampleId::S1S2.action();
    let section = Submanifold::new(action.manifold.clone(), LatitudeCircle { colatitude: FRAC_PI_4 }).expect("dimensions agree");
    let base = sampler(|rng| vec![rng.random_range(0.05..PI - 0.05), rng.random_range(-PI..PI)]);
    let param = sampler(|rng| vec![rng.random_range(-PI..PI)]);
    PolarStructure::custom("s1-s2/latitude", action, section, base, param)
}

/// Plane rotations with the horizontal line `x₂ = 1`, which is not orthogonal to the orbits.
pub fn offset_line_control() -> PolarStructure {
    let action = ExampleId::So2R2.action();
    let param = AffineParam::affine("offset-line", vec![0.0, 1.0], Mat::from_vec(2, 1, vec![1.0, 0.0]), Mat::identity(2));
    let section = Submanifold::new(action.manifold.clone(), param).expect("dimensions agree");
    PolarStructure::custom("so2-r2/offset-line", action, section, box_sampler(2, 2.0, euclid), box_sampler(1, 2.0, |_| 1.0))
}
