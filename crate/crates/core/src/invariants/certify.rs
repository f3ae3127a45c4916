//! Degree-bounded surjectivity certificates and exact extension of
//! section invariants.

use std::collections::BTreeMap;

use num::{Signed, Zero};
use serde::Serialize;

use super::basis::{section_vars, InvariantBasis};
use super::restrict::{restrict_poly, LinearSection};
use super::reynolds::{is_invariant, reynolds_finite, FiniteLinearGroup};
use crate::error::{Error, Result};
use crate::numcore::exact::EchelonBasis;
use crate::numcore::poly::{monomials, to_f64};
use crate::numcore::{MultiPoly, Rational};
use crate::polar::{compute_weyl_group, PolarStructure};

/// How many unreachable invariants a failing certificate lists.
const MAX_LISTED: usize = 5;

/// Exact comparison of `ℝ[𝔭^m]^G|_{Σ^m}` with `ℝ[Σ^m]^Π` in degrees `≤ degree`.
#[derive(Clone, Debug, Serialize)]
pub struct GradedCertificate {
    pub example: String,
    pub copies: usize,
    pub degree: u32,
    /// `dim` of the `Π`-invariants of degree `≤ degree`.
    pub target_dim: usize,
    /// `dim` of (span of restricted generator products) ∩ (target).
    pub achieved_dim: usize,
    pub span_dim: usize,
    /// Largest remainder entry of a target basis vector reduced against the span.
    pub max_residual: String,
    pub max_residual_value: f64,
    /// Every restricted generator is exactly `Π`-invariant.
    pub restricted_invariant: bool,
    pub passed: bool,
    pub unreachable: Vec<String>,
}

/// Coefficient vectors over all monomials of degree `≤ d`.
struct CoefficientSpace {
    vars: Vec<String>,
    index: BTreeMap<Vec<u32>, usize>,
    monomials: Vec<Vec<u32>>,
}

impl CoefficientSpace {
    fn new(vars: &[String], d: u32) -> Self {
        let monomials: Vec<Vec<u32>> = (0..=d).flat_map(|j| monomials(vars.len(), j)).collect();
        let index = monomials.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        CoefficientSpace { vars: vars.to_vec(), index, monomials }
    }

    fn dim(&self) -> usize {
        self.monomials.len()
    }

    fn vector(&self, p: &MultiPoly) -> Result<Vec<Rational>> {
        let mut v = vec![Rational::zero(); self.dim()];
        for (e, c) in p.terms() {
            let i = self
                .index
                .get(e)
                .ok_or_else(|| Error::Precondition(format!("term of degree {} exceeds the bound", e.iter().sum::<u32>())))?;
            v[*i] = c.clone();
        }
        Ok(v)
    }

    fn poly(&self, v: &[Rational]) -> MultiPoly {
        v.iter()
            .zip(&self.monomials)
            .filter(|(c, _)| !c.is_zero())
            .fold(MultiPoly::zero(&self.vars), |acc, (c, e)| &acc + &MultiPoly::monomial(&self.vars, e.clone(), c.clone()))
    }
}

/// Products `Π r_i^{e_i}` of restricted generators with degree `≤ d`,
/// echelonized in a [`CoefficientSpace`].
struct ProductSpan {
    exponents: Vec<Vec<u32>>,
    basis: EchelonBasis,
}

impl ProductSpan {
    fn new(space: &CoefficientSpace, restricted: &[MultiPoly], d: u32) -> Result<Self> {
        // zero restrictions only contribute zero products; constants are the empty product
        let active: Vec<(usize, u32)> =
            restricted.iter().enumerate().filter_map(|(i, r)| r.degree().filter(|&dg| dg > 0).map(|dg| (i, dg))).collect();
        let mut exponents = Vec::new();
        let mut cur = vec![0u32; restricted.len()];
        fn rec(active: &[(usize, u32)], pos: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            if pos == active.len() {
                out.push(cur.clone());
                return;
            }
            let (i, dg) = active[pos];
            for e in 0..=left / dg {
                cur[i] = e;
                rec(active, pos + 1, left - e * dg, cur, out);
            }
            cur[i] = 0;
        }
        rec(&active, 0, d, &mut cur, &mut exponents);
        let mut basis = EchelonBasis::new(space.dim());
        let one = MultiPoly::one(&space.vars);
        for e in &exponents {
            let p =
                e.iter().enumerate().filter(|(_, &k)| k > 0).try_fold(one.clone(), |acc, (i, &k)| acc.try_mul(&restricted[i].pow(k)))?;
            basis.push(space.vector(&p)?);
        }
        Ok(ProductSpan { exponents, basis })
    }
}

struct Prepared {
    restricted: Vec<MultiPoly>,
    weyl: FiniteLinearGroup,
    space: CoefficientSpace,
    span: ProductSpan,
}

fn prepare(ps: &PolarStructure, basis: &InvariantBasis, d: u32) -> Result<Prepared> {
    let sec = LinearSection::of(ps)?;
    let expected = sec.ambient_dim() * basis.copies;
    if basis.vars.len() != expected {
        return Err(Error::DimensionMismatch { expected, got: basis.vars.len() });
    }
    let restricted: Vec<MultiPoly> = basis.generators.iter().map(|g| restrict_poly(g, ps)).collect::<Result<_>>()?;
    let weyl = FiniteLinearGroup::from_weyl(&compute_weyl_group(ps)?)?;
    let space = CoefficientSpace::new(&section_vars(sec.dim(), basis.copies)?, d);
    let span = ProductSpan::new(&space, &restricted, d)?;
    Ok(Prepared { restricted, weyl, space, span })
}

/// Compares, in degrees `≤ degree`, the span of products of restricted
/// generators with the `Π`-invariants obtained by symmetrizing monomials.
/// Failures are reported in the certificate rather than returned as errors.
pub fn certify_surjectivity(ps: &PolarStructure, basis: &InvariantBasis, degree: u32) -> Result<GradedCertificate> {
    if degree > basis.degree_bound {
        return Err(Error::Precondition(format!("degree {degree} exceeds the list's bound {}", basis.degree_bound)));
    }
    let pre = prepare(ps, basis, degree)?;
    let mut restricted_invariant = true;
    for r in &pre.restricted {
        restricted_invariant &= is_invariant(r, &pre.weyl)?;
    }
    let mut target = EchelonBasis::new(pre.space.dim());
    let mut target_vectors = Vec::new();
    for e in &pre.space.monomials {
        let m = MultiPoly::monomial(&pre.space.vars, e.clone(), Rational::from_integer(1.into()));
        let v = pre.space.vector(&reynolds_finite(&m, &pre.weyl)?)?;
        if target.push(v.clone()) {
            target_vectors.push(v);
        }
    }
    let mut union = pre.span.basis.clone();
    for v in &target_vectors {
        union.push(v.clone());
    }
    let achieved_dim = pre.span.basis.rank() + target.rank() - union.rank();
    let mut max_residual = Rational::zero();
    let mut unreachable = Vec::new();
    for v in &target_vectors {
        let red = pre.span.basis.reduce(v);
        if !red.in_span() {
            let r = red.residual();
            if r > max_residual {
                max_residual = r;
            }
            if unreachable.len() < MAX_LISTED {
                unreachable.push(pre.space.poly(v).to_string());
            }
        }
    }
    Ok(GradedCertificate {
        example: ps.name.clone(),
        copies: basis.copies,
        degree,
        target_dim: target.rank(),
        achieved_dim,
        span_dim: pre.span.basis.rank(),
        max_residual_value: to_f64(&max_residual),
        max_residual: max_residual.to_string(),
        restricted_invariant,
        passed: achieved_dim == target.rank() && max_residual.is_zero(),
        unreachable,
    })
}

/// A basis of the `Π`-invariants of degree `≤ degree` on `Σ^copies`, from
/// symmetrized monomials.
pub fn weyl_invariants(ps: &PolarStructure, copies: usize, degree: u32) -> Result<Vec<MultiPoly>> {
    let sec = LinearSection::of(ps)?;
    let weyl = FiniteLinearGroup::from_weyl(&compute_weyl_group(ps)?)?;
    let space = CoefficientSpace::new(&section_vars(sec.dim(), copies)?, degree);
    let mut echelon = EchelonBasis::new(space.dim());
    let mut out = Vec::new();
    for e in &space.monomials {
        let r = reynolds_finite(&MultiPoly::monomial(&space.vars, e.clone(), Rational::from_integer(1.into())), &weyl)?;
        if echelon.push(space.vector(&r)?) {
            out.push(r);
        }
    }
    Ok(out)
}

/// An ambient invariant restricting to a given section invariant.
#[derive(Clone, Debug, Serialize)]
pub struct Extension {
    /// `F` as a polynomial in the generators (variables named after them).
    #[serde(serialize_with = "serialize_poly")]
    pub in_generators: MultiPoly,
    /// `F ∘ ρ` on `𝔭^m`.
    #[serde(serialize_with = "serialize_poly")]
    pub ambient: MultiPoly,
}

fn serialize_poly<S: serde::Serializer>(p: &MultiPoly, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string())
}

/// Writes a `Π`-invariant `f` on `Σ^m` as `F ∘ ρ|_{Σ^m}` and returns `F` and
/// `F ∘ ρ`. Fails with the exact residual when `f` is outside the span.
pub fn extend_invariant(ps: &PolarStructure, basis: &InvariantBasis, f: &MultiPoly) -> Result<Extension> {
    let d = f.degree().unwrap_or(0);
    let pre = prepare(ps, basis, d)?;
    if f.vars().len() != pre.space.vars.len() {
        return Err(Error::DimensionMismatch { expected: pre.space.vars.len(), got: f.vars().len() });
    }
    let f = f.with_vars(&pre.space.vars).unwrap_or_else(|_| reorder(f, &pre.space.vars));
    if !is_invariant(&f, &pre.weyl)? {
        return Err(Error::Precondition(format!("{f} is not invariant under the Weyl group")));
    }
    let red = pre.span.basis.reduce(&pre.space.vector(&f)?);
    if !red.in_span() {
        return Err(Error::NotInSpan { residual: red.residual().to_string() });
    }
    let gvars = basis.names.clone();
    let mut in_generators = MultiPoly::zero(&gvars);
    let mut ambient = MultiPoly::zero(&basis.vars);
    for (c, e) in red.coefficients.iter().zip(&pre.span.exponents) {
        if c.is_zero() {
            continue;
        }
        in_generators = &in_generators + &MultiPoly::monomial(&gvars, e.clone(), c.clone());
        let term = e
            .iter()
            .enumerate()
            .filter(|(_, &k)| k > 0)
            .try_fold(MultiPoly::one(&basis.vars), |acc, (i, &k)| acc.try_mul(&basis.generators[i].pow(k)))?;
        ambient = &ambient + &term.scale(c);
    }
    let back = restrict_poly(&ambient, ps)?;
    if back != f {
        let diff = back.try_sub(&f)?;
        let worst = diff.terms().map(|(_, c)| c.abs()).fold(Rational::zero(), |a, b| if b > a { b } else { a });
        return Err(Error::Violation(format!("extension restricts with residual {worst}")));
    }
    Ok(Extension { in_generators, ambient })
}

/// Same polynomial over a renamed variable list of equal length.
fn reorder(f: &MultiPoly, vars: &[String]) -> MultiPoly {
    f.terms().fold(MultiPoly::zero(vars), |acc, (e, c)| &acc + &MultiPoly::monomial(vars, e.clone(), c.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariants::basis::curated_basis;
    use crate::liegroups::ExampleId;
    use crate::polar::polar_structure;

    #[test]
    fn planar_pairs_certified_through_degree_four() {
        let ps = polar_structure(ExampleId::So2R2);
        let b = curated_basis(ExampleId::So2R2, 2).unwrap();
        for d in 0..=4 {
            let c = certify_surjectivity(&ps, &b, d).unwrap();
            assert!(c.passed, "{c:?}");
            assert!(c.restricted_invariant);
        }
        let c0 = certify_surjectivity(&ps, &b, 0).unwrap();
        assert_eq!(c0.target_dim, 1);
        // ±1 on both copies: invariants are spanned by even monomials
        let even = (0..=4u32).filter(|d| d % 2 == 0).map(|d| monomials(2, d).len()).sum::<usize>();
        assert_eq!(certify_surjectivity(&ps, &b, 4).unwrap().target_dim, even);
        assert!(certify_surjectivity(&ps, &b, 5).is_err());
    }

    #[test]
    fn dropping_the_mixed_product_fails_in_degree_two() {
        let ps = polar_structure(ExampleId::So2R2);
        let b = curated_basis(ExampleId::So2R2, 2).unwrap().without("x.p").unwrap();
        assert!(certify_surjectivity(&ps, &b, 1).unwrap().passed);
        let c = certify_surjectivity(&ps, &b, 2).unwrap();
        assert!(!c.passed);
        assert_eq!(c.target_dim - c.achieved_dim, 1);
        assert!(c.max_residual_value > 0.0);
        assert_eq!(c.unreachable, ["a*b"]);
    }

    #[test]
    fn extensions() {
        let ps = polar_structure(ExampleId::So2R2);
        let b = curated_basis(ExampleId::So2R2, 2).unwrap();
        let v = section_vars(1, 2).unwrap();
        let e = extend_invariant(&ps, &b, &MultiPoly::parse_sparse(&v, "1@1,1").unwrap()).unwrap();
        assert_eq!(&e.ambient, b.generator("x.p").unwrap());
        let one = extend_invariant(&ps, &b, &MultiPoly::one(&v)).unwrap();
        assert_eq!(one.ambient, MultiPoly::one(&b.vars));
        // a alone is not Weyl-invariant
        assert!(matches!(extend_invariant(&ps, &b, &MultiPoly::var(&v, 0)), Err(Error::Precondition(_))));
        let short = b.without("x.p").unwrap();
        assert!(matches!(extend_invariant(&ps, &short, &MultiPoly::parse_sparse(&v, "1@1,1").unwrap()), Err(Error::NotInSpan { .. })));

        let ps = polar_structure(ExampleId::So3Sym0);
        let b = curated_basis(ExampleId::So3Sym0, 1).unwrap();
        let v = section_vars(2, 1).unwrap();
        let tr2 = MultiPoly::parse_sparse(&v, "2@2,0 2@1,1 2@0,2").unwrap();
        let e = extend_invariant(&ps, &b, &tr2.pow(2)).unwrap();
        assert_eq!(e.ambient, b.generator("tr(xx)").unwrap().pow(2));
        assert_eq!(e.in_generators.to_string(), "tr(xx)^2");
    }

    #[test]
    fn flat_pairs_extend_through_degree_four() {
        for id in [ExampleId::So3Adj, ExampleId::So3Sym0, ExampleId::TorusCn(2)] {
            let ps = polar_structure(id);
            let b = curated_basis(id, 2).unwrap();
            let c = certify_surjectivity(&ps, &b, 4).unwrap();
            assert!(c.passed, "{id}: {c:?}");
            let targets = weyl_invariants(&ps, 2, 4).unwrap();
            assert_eq!(targets.len(), c.target_dim);
            for f in &targets {
                extend_invariant(&ps, &b, f).unwrap();
            }
        }
    }

    #[test]
    fn traceless_symmetric_certified() {
        let ps = polar_structure(ExampleId::So3Sym0);
        let b = curated_basis(ExampleId::So3Sym0, 1).unwrap();
        let c = certify_surjectivity(&ps, &b, 4).unwrap();
        assert!(c.passed, "{c:?}");
    }
}
