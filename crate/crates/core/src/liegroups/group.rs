//! Compact matrix groups `SO(n)` and block tori, with their Lie algebras.

use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::numcore::{Mat, Real};

/// Tolerance for the defining relations of a group element.
pub const RELATION_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupKind {
    /// `SO(n)`.
    SpecialOrthogonal,
    /// Block-diagonal `2×2` rotations.
    Torus,
}

/// Coefficients of a Lie algebra element in the group's basis.
#[derive(Clone, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct AlgebraElement(pub Vec<f64>);

impl AlgebraElement {
    pub fn zero(dim: usize) -> Self {
        AlgebraElement(vec![0.0; dim])
    }

    pub fn basis(dim: usize, a: usize) -> Self {
        let mut c = vec![0.0; dim];
        c[a] = 1.0;
        AlgebraElement(c)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.0
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroupElement {
    pub matrix: Mat<f64>,
}

impl GroupElement {
    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        GroupElement { matrix: self.matrix.matmul(&other.matrix) }
    }

    /// Inverse of an orthogonal matrix.
    pub fn inverse(&self) -> GroupElement {
        GroupElement { matrix: self.matrix.transpose() }
    }

    pub fn dist(&self, other: &GroupElement) -> f64 {
        self.matrix.dist(&other.matrix)
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.matrix.data.chunks(self.matrix.cols).map(<[f64]>::to_vec).collect()
    }
}

impl serde::Serialize for GroupElement {
    fn serialize<Ser: serde::Serializer>(&self, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        self.rows().serialize(s)
    }
}

#[derive(Clone, Debug)]
pub struct MatrixGroup {
    pub name: String,
    pub kind: GroupKind,
    /// Elements are `n × n` matrices.
    pub ambient_dim: usize,
    pub algebra_basis: Vec<Mat<f64>>,
}

fn skew(n: usize, i: usize, j: usize) -> Mat<f64> {
    // rotation taking e_i towards e_j
    let mut m = Mat::zeros(n, n);
    m[(j, i)] = 1.0;
    m[(i, j)] = -1.0;
    m
}

impl MatrixGroup {
    /// `SO(n)`. For `n = 3` the basis is the hat map of `e₁, e₂, e₃`, i.e.
    /// infinitesimal rotations about the coordinate axes.
    pub fn special_orthogonal(n: usize) -> Self {
        let algebra_basis = if n == 3 {
            vec![skew(3, 1, 2), skew(3, 2, 0), skew(3, 0, 1)]
        } else {
            let mut b = Vec::new();
            for i in 0..n {
                for j in (i + 1)..n {
                    b.push(skew(n, i, j));
                }
            }
            b
        };
        MatrixGroup { name: format!("SO({n})"), kind: GroupKind::SpecialOrthogonal, ambient_dim: n, algebra_basis }
    }

    /// The `k`-torus acting on `ℝ²ᵏ` by independent rotations of coordinate planes.
    pub fn torus(k: usize) -> Self {
        let algebra_basis = (0..k).map(|a| skew(2 * k, 2 * a, 2 * a + 1)).collect();
        MatrixGroup { name: format!("T^{k}"), kind: GroupKind::Torus, ambient_dim: 2 * k, algebra_basis }
    }

    pub fn dim(&self) -> usize {
        self.algebra_basis.len()
    }

    pub fn is_abelian(&self) -> bool {
        self.kind == GroupKind::Torus || self.ambient_dim <= 2
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement { matrix: Mat::identity(self.ambient_dim) }
    }

    /// `Σ cₐ Xₐ` over any scalar.
    pub fn algebra_matrix<S: Real>(&self, c: &[S]) -> Mat<S> {
        let n = self.ambient_dim;
        let mut m: Mat<S> = Mat::zeros(n, n);
        for (ca, b) in c.iter().zip(&self.algebra_basis) {
            for (e, bv) in m.data.iter_mut().zip(&b.data) {
                if *bv != 0.0 {
                    *e = e.clone() + ca.scale(*bv);
                }
            }
        }
        m
    }

    /// Coordinates of a matrix in the algebra basis (least squares in the
    /// Frobenius inner product, which is exact for elements of the algebra).
    pub fn algebra_coords(&self, m: &Mat<f64>) -> AlgebraElement {
        let k = self.dim();
        let ip = |a: &Mat<f64>, b: &Mat<f64>| a.data.iter().zip(&b.data).map(|(x, y)| x * y).sum::<f64>();
        let gram = Mat::from_fn(k, k, |a, b| ip(&self.algebra_basis[a], &self.algebra_basis[b]));
        let rhs: Vec<f64> = self.algebra_basis.iter().map(|b| ip(b, m)).collect();
        AlgebraElement(gram.solve_vec(&rhs).expect("algebra basis is independent"))
    }

    pub fn check_algebra(&self, x: &AlgebraElement) -> Result<()> {
        if x.0.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: x.0.len() });
        }
        Ok(())
    }

    /// `exp(tX)`.
    pub fn exp(&self, x: &AlgebraElement, t: f64) -> Result<GroupElement> {
        self.check_algebra(x)?;
        let scaled: Vec<f64> = x.0.iter().map(|c| c * t).collect();
        Ok(GroupElement { matrix: self.algebra_matrix(&scaled).exp() })
    }

    /// `exp(tX)` for a differentiable parameter `t`.
    pub fn exp_at<S: Real>(&self, x: &AlgebraElement, t: &S) -> Mat<S> {
        let c: Vec<S> = x.0.iter().map(|ci| t.scale(*ci)).collect();
        self.algebra_matrix(&c).exp()
    }

    /// Largest violation of the defining relations.
    pub fn relation_residual(&self, g: &GroupElement) -> f64 {
        let m = &g.matrix;
        if m.rows != self.ambient_dim || m.cols != self.ambient_dim {
            return f64::INFINITY;
        }
        let orth = m.transpose().matmul(m).sub(&Mat::identity(self.ambient_dim)).max_abs();
        let det = (m.det() - 1.0).abs();
        let mut r = orth.max(det);
        if self.kind == GroupKind::Torus {
            for i in 0..m.rows {
                for j in 0..m.cols {
                    if i / 2 != j / 2 {
                        r = r.max(m[(i, j)].abs());
                    }
                }
            }
        }
        r
    }

    pub fn check_element(&self, g: &GroupElement) -> Result<()> {
        let r = self.relation_residual(g);
        if r > RELATION_TOL {
            return Err(Error::Violation(format!("{} relations violated by {r:.3e}", self.name)));
        }
        Ok(())
    }

    /// `Ad_g X = g X g⁻¹` in basis coordinates.
    pub fn adjoint(&self, g: &GroupElement, x: &AlgebraElement) -> AlgebraElement {
        let m = g.matrix.matmul(&self.algebra_matrix(&x.0)).matmul(&g.matrix.transpose());
        self.algebra_coords(&m)
    }

    /// Coadjoint action on `𝔤*` in the dual basis: `(Ad*_g μ)(X) = μ(Ad_{g⁻¹} X)`.
    pub fn coadjoint(&self, g: &GroupElement, mu: &[f64]) -> Vec<f64> {
        let ginv = g.inverse();
        (0..self.dim())
            .map(|a| {
                let y = self.adjoint(&ginv, &AlgebraElement::basis(self.dim(), a));
                y.0.iter().zip(mu).map(|(c, m)| c * m).sum()
            })
            .collect()
    }

    /// Product of three exponentials of Gaussian algebra elements (std. dev. π).
    pub fn haar_sample<R: Rng + ?Sized>(&self, rng: &mut R) -> GroupElement {
        let normal = Normal::new(0.0, std::f64::consts::PI).expect("valid deviation");
        let mut g = self.identity();
        for _ in 0..3 {
            let c: Vec<f64> = (0..self.dim()).map(|_| normal.sample(rng)).collect();
            g = g.compose(&GroupElement { matrix: self.algebra_matrix(&c).exp() });
        }
        g
    }

    /// Rotation by `angle` in the coordinate plane `(i, j)`.
    pub fn plane_rotation(&self, i: usize, j: usize, angle: f64) -> GroupElement {
        let mut m = Mat::identity(self.ambient_dim);
        let (s, c) = angle.sin_cos();
        m[(i, i)] = c;
        m[(j, j)] = c;
        m[(j, i)] = s;
        m[(i, j)] = -s;
        GroupElement { matrix: m }
    }
}
