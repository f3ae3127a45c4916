//! Exact restriction of polynomials to linear sections.
//!
//! Two coordinate pictures are used. In the vector picture `𝔭^m` carries `m`
//! copies of the representation space and `Σ^m` the matching copies of the
//! section parameters. In the cotangent picture `T*𝔭 = 𝔭 × 𝔭*` has canonical
//! coordinates `(x, ξ)` and `T*Σ` has canonical coordinates `(s, η)`. With
//! `B` the section basis, `g` the metric and `h = Bᵀ g B`, the two are tied by
//! `ξ = g v` and `η = h a`.

use num::Zero;

use super::basis::section_vars;
use crate::error::{Error, Result};
use crate::numcore::exact::{inverse, snap_rational};
use crate::numcore::poly::var_names;
use crate::numcore::{MultiPoly, Rational};
use crate::polar::PolarStructure;

const MAX_DENOMINATOR: i64 = 64;

/// Exact data of a linear section `Σ = B ℝᵏ ⊂ (ℝⁿ, g)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearSection {
    /// `k` rows of length `n`.
    pub basis: Vec<Vec<Rational>>,
    pub metric: Vec<Vec<Rational>>,
    pub metric_inverse: Vec<Vec<Rational>>,
    /// `h⁻¹` for `h = Bᵀ g B`.
    pub induced_inverse: Vec<Vec<Rational>>,
}

impl LinearSection {
    pub fn of(ps: &PolarStructure) -> Result<Self> {
        let m = ps.section.ambient();
        if !m.is_flat() {
            return Err(Error::Precondition(format!("{} is not flat", m.name())));
        }
        let basis = ps
            .section
            .field()
            .rational_basis()
            .ok_or_else(|| Error::Precondition(format!("section {} is not a rational linear subspace", ps.section.name())))?
            .to_vec();
        let n = m.dim();
        let gf = m.metric(&vec![0.0; n]);
        let mut metric = vec![vec![Rational::zero(); n]; n];
        for (i, row) in metric.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                *e = snap_rational(gf[(i, j)], MAX_DENOMINATOR, 1e-12)
                    .ok_or_else(|| Error::Precondition(format!("metric entry {} is not a small rational", gf[(i, j)])))?;
            }
        }
        let metric_inverse = inverse(&metric).ok_or_else(|| Error::Singular("metric".into()))?;
        let gb: Vec<Vec<Rational>> = basis.iter().map(|b| mat_vec(&metric, b)).collect();
        let h: Vec<Vec<Rational>> = basis.iter().map(|a| gb.iter().map(|gbb| dot(a, gbb)).collect()).collect();
        let induced_inverse = inverse(&h).ok_or_else(|| Error::Singular("induced metric".into()))?;
        Ok(LinearSection { basis, metric, metric_inverse, induced_inverse })
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.metric.len()
    }

    /// `x_i = Σ_a cols[a][i] · var(c·k + a)`: tangent vectors `cols` as `n`
    /// linear forms in the section variables of copy `c`.
    fn embed(&self, vars: &[String], c: usize, cols: &[Vec<Rational>]) -> Vec<MultiPoly> {
        let k = self.dim();
        (0..self.ambient_dim())
            .map(|i| {
                cols.iter().enumerate().fold(MultiPoly::zero(vars), |acc, (a, col)| &acc + &MultiPoly::var(vars, c * k + a).scale(&col[i]))
            })
            .collect()
    }
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn mat_vec(m: &[Vec<Rational>], v: &[Rational]) -> Vec<Rational> {
    m.iter().map(|row| dot(row, v)).collect()
}

/// Linear forms `Σ_j m[i][j] · var(offset + j)`.
fn linear_forms(vars: &[String], m: &[Vec<Rational>], offset: usize) -> Vec<MultiPoly> {
    m.iter()
        .map(|row| row.iter().enumerate().fold(MultiPoly::zero(vars), |acc, (j, c)| &acc + &MultiPoly::var(vars, offset + j).scale(c)))
        .collect()
}

/// Tangent vectors of `B·t` for a `k × k` matrix `t`.
fn twisted_basis(sec: &LinearSection, t: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n = sec.ambient_dim();
    (0..sec.dim()).map(|a| (0..n).map(|i| (0..sec.dim()).map(|b| &sec.basis[b][i] * &t[b][a]).sum()).collect()).collect()
}

/// `p ∘ (B × … × B)`: the restriction of a polynomial on `𝔭^m` to `Σ^m`.
pub fn restrict_poly(p: &MultiPoly, ps: &PolarStructure) -> Result<MultiPoly> {
    let sec = LinearSection::of(ps)?;
    let n = sec.ambient_dim();
    let nv = p.vars().len();
    if nv == 0 || !nv.is_multiple_of(n) {
        return Err(Error::DimensionMismatch { expected: n, got: nv });
    }
    let m = nv / n;
    let svars = section_vars(sec.dim(), m)?;
    let subs: Vec<MultiPoly> = (0..m).flat_map(|c| sec.embed(&svars, c, &sec.basis)).collect();
    p.compose(&subs)
}

/// Canonical coordinates `(s, η)` of `T*Σ`.
pub fn section_cotangent_vars(k: usize) -> Vec<String> {
    if k == 1 {
        vec!["s".into(), "eta".into()]
    } else {
        let mut v = var_names("s", k);
        v.extend(var_names("eta", k));
        v
    }
}

fn require_pair(p: &MultiPoly, n: usize) -> Result<()> {
    if p.vars().len() != 2 * n {
        return Err(Error::DimensionMismatch { expected: 2 * n, got: p.vars().len() });
    }
    Ok(())
}

/// `F(x, g⁻¹ξ)`: a vector-picture polynomial on `𝔭²` read on `T*𝔭`.
pub fn cotangent_form(ps: &PolarStructure, f: &MultiPoly) -> Result<MultiPoly> {
    let sec = LinearSection::of(ps)?;
    let n = sec.ambient_dim();
    require_pair(f, n)?;
    let vars = f.vars();
    let mut subs: Vec<MultiPoly> = (0..n).map(|i| MultiPoly::var(vars, i)).collect();
    subs.extend(linear_forms(vars, &sec.metric_inverse, n));
    f.compose(&subs)
}

/// `f(s, h⁻¹η)`: a vector-picture polynomial on `Σ²` read on `T*Σ`.
pub fn section_cotangent_form(ps: &PolarStructure, f: &MultiPoly) -> Result<MultiPoly> {
    let sec = LinearSection::of(ps)?;
    let k = sec.dim();
    require_pair(f, k)?;
    let vars = section_cotangent_vars(k);
    let mut subs: Vec<MultiPoly> = (0..k).map(|i| MultiPoly::var(&vars, i)).collect();
    subs.extend(linear_forms(&vars, &sec.induced_inverse, k));
    f.compose(&subs)
}

/// `G(Bs, g B h⁻¹ η)`: the restriction of a function on `T*𝔭` to `T*Σ` in
/// canonical coordinates on both sides.
pub fn restrict_cotangent(ps: &PolarStructure, f: &MultiPoly) -> Result<MultiPoly> {
    let sec = LinearSection::of(ps)?;
    let (n, k) = (sec.ambient_dim(), sec.dim());
    require_pair(f, n)?;
    let vars = section_cotangent_vars(k);
    let mut subs = sec.embed(&vars, 0, &sec.basis);
    // ξ = g B h⁻¹ η
    let bt = twisted_basis(&sec, &sec.induced_inverse);
    let gbt: Vec<Vec<Rational>> = bt.iter().map(|col| mat_vec(&sec.metric, col)).collect();
    subs.extend(sec.embed(&vars, 1, &gbt));
    f.compose(&subs)
}
