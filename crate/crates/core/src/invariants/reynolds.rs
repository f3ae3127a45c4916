//! Exact averaging over finite linear groups.

use num::Zero;

use crate::error::{Error, Result};
use crate::numcore::exact::snap_rational;
use crate::numcore::poly::to_f64;
use crate::numcore::{MultiPoly, Rational};
use crate::polar::WeylGroup;

/// Largest denominator accepted when reading Weyl maps as rational matrices.
const MAX_DENOMINATOR: i64 = 64;
const SNAP_TOL: f64 = 1e-9;

/// A finite group of rational `d × d` matrices, acting diagonally on any
/// number of copies of `ℚ^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteLinearGroup {
    dim: usize,
    maps: Vec<Vec<Vec<Rational>>>,
}

impl FiniteLinearGroup {
    /// The caller is responsible for the maps forming a group.
    pub fn new(dim: usize, maps: Vec<Vec<Vec<Rational>>>) -> Result<Self> {
        if maps.is_empty() {
            return Err(Error::Empty);
        }
        for m in &maps {
            if m.len() != dim || m.iter().any(|r| r.len() != dim) {
                return Err(Error::DimensionMismatch { expected: dim, got: m.len() });
            }
        }
        Ok(FiniteLinearGroup { dim, maps })
    }

    /// Rational copies of the section maps of `w`.
    pub fn from_weyl(w: &WeylGroup) -> Result<Self> {
        let dim = w.section_maps.first().map_or(0, |m| m.rows);
        let mut maps = Vec::with_capacity(w.order());
        for m in &w.section_maps {
            let mut rows = vec![vec![Rational::zero(); dim]; dim];
            for (i, row) in rows.iter_mut().enumerate() {
                for (j, e) in row.iter_mut().enumerate() {
                    *e = snap_rational(m[(i, j)], MAX_DENOMINATOR, SNAP_TOL)
                        .ok_or_else(|| Error::NonLinearAction(format!("section map entry {} is not a small rational", m[(i, j)])))?;
                }
            }
            maps.push(rows);
        }
        Self::new(dim, maps)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.maps.len()
    }

    pub fn maps(&self) -> &[Vec<Vec<Rational>>] {
        &self.maps
    }

    /// `p ∘ w` for the element with index `i`.
    pub fn compose(&self, p: &MultiPoly, i: usize) -> Result<MultiPoly> {
        let nv = p.vars().len();
        if self.dim == 0 || !nv.is_multiple_of(self.dim) {
            return Err(Error::NonLinearAction(format!("{nv} variables are not copies of a {}-dimensional space", self.dim)));
        }
        let vars = p.vars();
        let m = &self.maps[i];
        let subs: Vec<MultiPoly> = (0..nv)
            .map(|v| {
                let (c, r) = (v / self.dim, v % self.dim);
                (0..self.dim).fold(MultiPoly::zero(vars), |acc, j| &acc + &MultiPoly::var(vars, c * self.dim + j).scale(&m[r][j]))
            })
            .collect();
        p.compose(&subs)
    }

    /// Float evaluation of `w · v` on one copy.
    pub fn apply(&self, i: usize, v: &[f64]) -> Vec<f64> {
        self.maps[i].iter().map(|row| row.iter().zip(v).map(|(a, b)| to_f64(a) * b).sum()).collect()
    }

    /// `w` applied to every copy of a stacked vector.
    pub fn apply_copies(&self, i: usize, v: &[f64]) -> Vec<f64> {
        v.chunks(self.dim).flat_map(|c| self.apply(i, c)).collect()
    }
}

/// `(1/|W|) Σ_w p∘w`, computed exactly.
pub fn reynolds_finite(p: &MultiPoly, group: &FiniteLinearGroup) -> Result<MultiPoly> {
    let mut acc = MultiPoly::zero(p.vars());
    for i in 0..group.order() {
        acc = acc.try_add(&group.compose(p, i)?)?;
    }
    Ok(acc.scale(&Rational::new(1.into(), (group.order() as i64).into())))
}

pub fn is_invariant(p: &MultiPoly, group: &FiniteLinearGroup) -> Result<bool> {
    for i in 0..group.order() {
        if &group.compose(p, i)? != p {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liegroups::ExampleId;
    use crate::numcore::poly::{int, rat};
    use crate::polar::{compute_weyl_group, polar_structure};

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn permutations3() -> FiniteLinearGroup {
        let perms = [[0, 1, 2], [1, 0, 2], [2, 1, 0], [0, 2, 1], [1, 2, 0], [2, 0, 1]];
        let maps = perms.iter().map(|p| (0..3).map(|i| (0..3).map(|j| int(i64::from(p[i] == j))).collect()).collect()).collect();
        FiniteLinearGroup::new(3, maps).unwrap()
    }

    #[test]
    fn negation_parity() {
        let g = FiniteLinearGroup::new(1, vec![vec![vec![int(1)]], vec![vec![int(-1)]]]).unwrap();
        let v = names(&["x"]);
        let x = MultiPoly::var(&v, 0);
        assert!(reynolds_finite(&x, &g).unwrap().is_zero());
        assert_eq!(reynolds_finite(&x.pow(2), &g).unwrap(), x.pow(2));
    }

    #[test]
    fn symmetrization_and_idempotence() {
        let g = permutations3();
        let v = names(&["a", "b", "c"]);
        let r = reynolds_finite(&MultiPoly::var(&v, 0), &g).unwrap();
        let expected = (0..3).fold(MultiPoly::zero(&v), |a, i| &a + &MultiPoly::var(&v, i)).scale(&rat(1, 3));
        assert_eq!(r, expected);
        let q = MultiPoly::parse_sparse(&v, "2@2,1,0 -1@0,0,3 5@1,1,1").unwrap();
        let once = reynolds_finite(&q, &g).unwrap();
        assert_eq!(reynolds_finite(&once, &g).unwrap(), once);
        assert!(is_invariant(&once, &g).unwrap());
    }

    #[test]
    fn weyl_maps_are_rational() {
        let ps = polar_structure(ExampleId::So3Sym0);
        let g = FiniteLinearGroup::from_weyl(&compute_weyl_group(&ps).unwrap()).unwrap();
        assert_eq!(g.order(), 6);
        let v = names(&["a", "b"]);
        // a² + b² + (a+b)² is the restricted trace form
        let tr2 = MultiPoly::parse_sparse(&v, "2@2,0 2@0,2 2@1,1").unwrap();
        assert!(is_invariant(&tr2, &g).unwrap());
        assert!(!is_invariant(&MultiPoly::var(&v, 0).pow(2), &g).unwrap());
        let wrong = names(&["a", "b", "c"]);
        assert!(matches!(g.compose(&MultiPoly::var(&wrong, 0), 0), Err(Error::NonLinearAction(_))));
    }
}
