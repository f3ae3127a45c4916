//! Curated generator lists of invariant polynomials on `𝔭^m`, and their
//! plain-text config format.

use std::fmt::Write as _;
use std::path::Path;

use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::liegroups::ExampleId;
use crate::numcore::poly::var_names;
use crate::numcore::{sample_rng, MultiPoly};
use crate::polar::PolarStructure;
use crate::sampling::SampledMax;

/// Most copies of the representation the naming scheme supports.
pub const MAX_COPIES: usize = 4;
const COPY_PREFIXES: [&str; MAX_COPIES] = ["x", "p", "y", "z"];
const SECTION_LETTERS: [&str; MAX_COPIES] = ["a", "b", "c", "d"];

/// Coordinates of `𝔭^m`: `x1..xn`, then `p1..pn`, `y1..yn`, `z1..zn`.
pub fn ambient_vars(n: usize, m: usize) -> Result<Vec<String>> {
    if m == 0 || m > MAX_COPIES {
        return Err(Error::Precondition(format!("{m} copies (supported: 1..={MAX_COPIES})")));
    }
    Ok(COPY_PREFIXES[..m].iter().flat_map(|p| var_names(p, n)).collect())
}

/// Coordinates of `Σ^m` for a `k`-dimensional section. A line gets one letter
/// per copy (`a, b, …`); a single copy of a plane gets `a, b`; otherwise
/// `a1..ak, b1..bk, …`.
pub fn section_vars(k: usize, m: usize) -> Result<Vec<String>> {
    if m == 0 || m > MAX_COPIES {
        return Err(Error::Precondition(format!("{m} copies (supported: 1..={MAX_COPIES})")));
    }
    Ok(if k == 1 {
        SECTION_LETTERS[..m].iter().map(|s| s.to_string()).collect()
    } else if m == 1 && k <= SECTION_LETTERS.len() {
        SECTION_LETTERS[..k].iter().map(|s| s.to_string()).collect()
    } else {
        SECTION_LETTERS[..m].iter().flat_map(|p| var_names(p, k)).collect()
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InvariantBasis {
    pub group_tag: String,
    pub copies: usize,
    pub vars: Vec<String>,
    pub names: Vec<String>,
    #[serde(serialize_with = "serialize_polys")]
    pub generators: Vec<MultiPoly>,
    /// Degree up to which the list is meant to be complete.
    pub degree_bound: u32,
}

fn serialize_polys<S: serde::Serializer>(ps: &[MultiPoly], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(ps.iter().map(MultiPoly::to_sparse))
}

impl InvariantBasis {
    pub fn new(group_tag: &str, copies: usize, vars: Vec<String>, named: Vec<(String, MultiPoly)>, degree_bound: u32) -> Result<Self> {
        for (name, g) in &named {
            if g.vars() != vars.as_slice() {
                return Err(Error::VariableMismatch { left: vars.clone(), right: g.vars().to_vec() });
            }
            if name.contains(char::is_whitespace) || name.is_empty() {
                return Err(Error::Config(format!("generator name `{name}`")));
            }
        }
        let (names, generators) = named.into_iter().unzip();
        Ok(InvariantBasis { group_tag: group_tag.to_string(), copies, vars, names, generators, degree_bound })
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generator(&self, name: &str) -> Option<&MultiPoly> {
        self.names.iter().position(|n| n == name).map(|i| &self.generators[i])
    }

    /// The same list with one generator removed.
    pub fn without(&self, name: &str) -> Result<Self> {
        let i = self.names.iter().position(|n| n == name).ok_or_else(|| Error::Config(format!("no generator `{name}`")))?;
        let mut b = self.clone();
        b.names.remove(i);
        b.generators.remove(i);
        Ok(b)
    }

    /// Parses the config format:
    ///
    /// ```text
    /// # comment
    /// example = so2-r2
    /// copies = 2
    /// degree_bound = 4
    /// vars = x1 x2 p1 p2
    /// generator x.p = 1@1,0,1,0 1@0,1,0,1
    /// ```
    ///
    /// Generators are sparse `coef@exponents` terms, one polynomial per line.
    pub fn parse(text: &str) -> Result<Self> {
        let mut tag = None;
        let mut copies = None;
        let mut bound = None;
        let mut vars: Option<Vec<String>> = None;
        let mut named = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", ln + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            let bad = |what: &str| Error::Config(format!("line {}: {what}", ln + 1));
            match key {
                "example" => tag = Some(value.to_string()),
                "copies" => copies = Some(value.parse::<usize>().map_err(|_| bad("copies must be an integer"))?),
                "degree_bound" => bound = Some(value.parse::<u32>().map_err(|_| bad("degree_bound must be an integer"))?),
                "vars" => vars = Some(value.split_whitespace().map(str::to_string).collect()),
                _ => {
                    let name = key
                        .strip_prefix("generator")
                        .map(str::trim)
                        .filter(|n| !n.is_empty())
                        .ok_or_else(|| bad(&format!("unknown key `{key}`")))?;
                    let vs = vars.as_ref().ok_or_else(|| bad("`vars` must precede generators"))?;
                    let p = MultiPoly::parse_sparse(vs, value).map_err(|e| bad(&e.to_string()))?;
                    named.push((name.to_string(), p));
                }
            }
        }
        let missing = |k: &str| Error::Config(format!("missing `{k}`"));
        InvariantBasis::new(
            &tag.ok_or_else(|| missing("example"))?,
            copies.ok_or_else(|| missing("copies"))?,
            vars.ok_or_else(|| missing("vars"))?,
            named,
            bound.ok_or_else(|| missing("degree_bound"))?,
        )
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn to_config(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "example = {}", self.group_tag);
        let _ = writeln!(s, "copies = {}", self.copies);
        let _ = writeln!(s, "degree_bound = {}", self.degree_bound);
        let _ = writeln!(s, "vars = {}", self.vars.join(" "));
        for (n, g) in self.names.iter().zip(&self.generators) {
            let _ = writeln!(s, "generator {n} = {}", g.to_sparse());
        }
        s
    }

    /// `max |ρ(g·v) − ρ(v)| / (1 + |ρ(v)|)` over sampled tuples `v ∈ 𝔭^m`
    /// and Haar-random `g`, for every generator.
    pub fn invariance_residual(&self, ps: &PolarStructure, samples: usize, seed: u64) -> Result<SampledMax> {
        if !ps.action.is_linear() {
            return Err(Error::Precondition(format!("{} is not a linear action", ps.name)));
        }
        let n = ps.action.dim();
        if self.vars.len() != n * self.copies {
            return Err(Error::DimensionMismatch { expected: n * self.copies, got: self.vars.len() });
        }
        let mut acc = SampledMax::new();
        for i in 0..samples {
            let mut rng = sample_rng(seed, "generator-invariance", i as u64);
            let v: Vec<f64> = (0..n * self.copies).map(|_| StandardNormal.sample(&mut rng)).collect();
            let g = ps.action.group.haar_sample(&mut rng);
            let moved: Vec<f64> = v.chunks(n).flat_map(|c| ps.action.act(&g, c)).collect();
            let worst = self.generators.iter().fold(0.0f64, |w, p| {
                let a = p.eval_real(&v);
                w.max((p.eval_real(&moved) - a).abs() / (1.0 + a.abs()))
            });
            acc.observe(i, worst, || json!({ "tuple": v, "group_element": g }));
        }
        Ok(acc)
    }
}

fn sum(vars: &[String], terms: impl IntoIterator<Item = MultiPoly>) -> MultiPoly {
    terms.into_iter().fold(MultiPoly::zero(vars), |a, t| &a + &t)
}

fn var(vars: &[String], n: usize, copy: usize, i: usize) -> MultiPoly {
    MultiPoly::var(vars, copy * n + i)
}

/// `Σ_i u_i v_i` over a coordinate range of two copies.
fn dot(vars: &[String], n: usize, c1: usize, c2: usize, range: std::ops::Range<usize>) -> MultiPoly {
    sum(vars, range.map(|i| &var(vars, n, c1, i) * &var(vars, n, c2, i)))
}

/// `u_i v_j − u_j v_i`.
fn cross(vars: &[String], n: usize, c1: usize, c2: usize, i: usize, j: usize) -> MultiPoly {
    &(&var(vars, n, c1, i) * &var(vars, n, c2, j)) - &(&var(vars, n, c1, j) * &var(vars, n, c2, i))
}

/// Traceless symmetric matrix of copy `c` with polynomial entries.
fn sym0_poly(vars: &[String], c: usize) -> Vec<Vec<MultiPoly>> {
    let v = |i| var(vars, 5, c, i);
    let a33 = (&v(0) + &v(1)).neg();
    vec![vec![v(0), v(2), v(3)], vec![v(2), v(1), v(4)], vec![v(3), v(4), a33]]
}

fn matmul(vars: &[String], a: &[Vec<MultiPoly>], b: &[Vec<MultiPoly>]) -> Vec<Vec<MultiPoly>> {
    (0..3).map(|i| (0..3).map(|j| sum(vars, (0..3).map(|k| &a[i][k] * &b[k][j]))).collect()).collect()
}

fn trace(vars: &[String], a: &[Vec<MultiPoly>]) -> MultiPoly {
    sum(vars, (0..3).map(|i| a[i][i].clone()))
}

fn pair_name(c1: usize, c2: usize) -> String {
    format!("{}.{}", COPY_PREFIXES[c1], COPY_PREFIXES[c2])
}

/// The built-in generator list of `example` on `m` copies of its
/// representation. Completeness is only claimed up to `degree_bound`, and
/// only in the sense checked by the surjectivity certificate.
pub fn curated_basis(example: ExampleId, m: usize) -> Result<InvariantBasis> {
    let n = example.action().dim();
    let vars = ambient_vars(n, m)?;
    let v = vars.as_slice();
    let mut named: Vec<(String, MultiPoly)> = Vec::new();
    match example {
        ExampleId::So2R2 | ExampleId::So3Adj => {
            for c1 in 0..m {
                for c2 in c1..m {
                    named.push((pair_name(c1, c2), dot(v, n, c1, c2, 0..n)));
                }
            }
            if example == ExampleId::So2R2 {
                for c1 in 0..m {
                    for c2 in c1 + 1..m {
                        named.push((format!("det({},{})", COPY_PREFIXES[c1], COPY_PREFIXES[c2]), cross(v, n, c1, c2, 0, 1)));
                    }
                }
            } else {
                for c1 in 0..m {
                    for c2 in c1 + 1..m {
                        for c3 in c2 + 1..m {
                            let t = sum(v, (0..3).map(|i| &var(v, n, c1, i) * &cross(v, n, c2, c3, (i + 1) % 3, (i + 2) % 3)));
                            named.push((format!("det({},{},{})", COPY_PREFIXES[c1], COPY_PREFIXES[c2], COPY_PREFIXES[c3]), t));
                        }
                    }
                }
            }
        }
        ExampleId::So3Sym0 => {
            let mats: Vec<_> = (0..m).map(|c| sym0_poly(v, c)).collect();
            for c1 in 0..m {
                for c2 in c1..m {
                    named.push((format!("tr({}{})", COPY_PREFIXES[c1], COPY_PREFIXES[c2]), trace(v, &matmul(v, &mats[c1], &mats[c2]))));
                }
            }
            for c1 in 0..m {
                for c2 in c1..m {
                    let ab = matmul(v, &mats[c1], &mats[c2]);
                    for c3 in c2..m {
                        let name = format!("tr({}{}{})", COPY_PREFIXES[c1], COPY_PREFIXES[c2], COPY_PREFIXES[c3]);
                        named.push((name, trace(v, &matmul(v, &ab, &mats[c3]))));
                    }
                }
            }
        }
        ExampleId::TorusCn(k) => {
            for f in 0..k {
                let r = 2 * f..2 * f + 2;
                for c1 in 0..m {
                    for c2 in c1..m {
                        named.push((format!("{}{}.{}", COPY_PREFIXES[c1], f + 1, COPY_PREFIXES[c2]), dot(v, n, c1, c2, r.clone())));
                        if c1 != c2 {
                            let name = format!("im({}{},{})", COPY_PREFIXES[c1], f + 1, COPY_PREFIXES[c2]);
                            named.push((name, cross(v, n, c1, c2, 2 * f + 1, 2 * f)));
                        }
                    }
                }
            }
        }
        ExampleId::S1S2 => {
            return Err(Error::Precondition("the sphere example has no linear model; use observables instead".into()));
        }
    }
    InvariantBasis::new(&example.name(), m, vars, named, 4)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polar::polar_structure;

    #[test]
    fn naming() {
        assert_eq!(ambient_vars(2, 2).unwrap(), ["x1", "x2", "p1", "p2"]);
        assert_eq!(section_vars(1, 2).unwrap(), ["a", "b"]);
        assert_eq!(section_vars(2, 1).unwrap(), ["a", "b"]);
        assert_eq!(section_vars(2, 2).unwrap(), ["a1", "a2", "b1", "b2"]);
        assert!(ambient_vars(2, 0).is_err());
    }

    #[test]
    fn curated_lists_are_invariant() {
        for id in [ExampleId::So2R2, ExampleId::So3Adj, ExampleId::So3Sym0, ExampleId::TorusCn(2)] {
            for m in 1..=2 {
                let b = curated_basis(id, m).unwrap();
                let r = b.invariance_residual(&polar_structure(id), 30, 5).unwrap();
                assert!(r.max < 1e-10, "{id} m={m}: {}", r.max);
            }
        }
        assert_eq!(curated_basis(ExampleId::So2R2, 2).unwrap().names, ["x.x", "x.p", "p.p", "det(x,p)"]);
        assert_eq!(curated_basis(ExampleId::So3Sym0, 2).unwrap().len(), 7);
    }

    #[test]
    fn config_round_trip() {
        let b = curated_basis(ExampleId::So3Sym0, 1).unwrap();
        let back = InvariantBasis::parse(&b.to_config()).unwrap();
        assert_eq!(back, b);
        assert!(matches!(InvariantBasis::parse("copies = 2\nvars = x\ngenerator q = 1@3"), Err(Error::Config(_))));
        assert!(matches!(InvariantBasis::parse("flavor = 3"), Err(Error::Config(_))));
    }
}
