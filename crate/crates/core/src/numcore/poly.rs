//! Multivariate polynomials with exact rational coefficients.
//!
//! Terms live in a `BTreeMap` keyed by exponent vectors, so iteration order
//! (and therefore serialization) is deterministic. Zero coefficients are
//! never stored.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

use super::dual::Real;
use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    vars: Vec<String>,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl MultiPoly {
    pub fn zero(vars: &[String]) -> Self {
        MultiPoly { vars: vars.to_vec(), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &[String], c: Rational) -> Self {
        let mut p = Self::zero(vars);
        p.insert(vec![0; vars.len()], c);
        p
    }

    pub fn one(vars: &[String]) -> Self {
        Self::constant(vars, Rational::one())
    }

    pub fn var(vars: &[String], i: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        Self::monomial(vars, e, Rational::one())
    }

    /// Variable looked up by name.
    pub fn named(vars: &[String], name: &str) -> Result<Self> {
        let i = vars.iter().position(|v| v == name).ok_or_else(|| Error::Parse(format!("unknown variable {name}")))?;
        Ok(Self::var(vars, i))
    }

    pub fn monomial(vars: &[String], exps: Vec<u32>, c: Rational) -> Self {
        assert_eq!(exps.len(), vars.len(), "exponent length");
        let mut p = Self::zero(vars);
        p.insert(exps, c);
        p
    }

    fn insert(&mut self, e: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exps: &[u32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Maximum total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    pub fn homogeneous_part(&self, d: u32) -> Self {
        let mut p = Self::zero(&self.vars);
        for (e, c) in &self.terms {
            if e.iter().sum::<u32>() == d {
                p.terms.insert(e.clone(), c.clone());
            }
        }
        p
    }

    fn check_vars(&self, o: &Self) -> Result<()> {
        if self.vars != o.vars {
            return Err(Error::VariableMismatch { left: self.vars.clone(), right: o.vars.clone() });
        }
        Ok(())
    }

    pub fn try_add(&self, o: &Self) -> Result<Self> {
        self.check_vars(o)?;
        let mut p = self.clone();
        for (e, c) in &o.terms {
            p.insert(e.clone(), c.clone());
        }
        Ok(p)
    }

    pub fn try_sub(&self, o: &Self) -> Result<Self> {
        self.try_add(&o.neg())
    }

    pub fn try_mul(&self, o: &Self) -> Result<Self> {
        self.check_vars(o)?;
        let mut p = Self::zero(&self.vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                p.insert(e, ca * cb);
            }
        }
        Ok(p)
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, k: &Rational) -> Self {
        let mut p = Self::zero(&self.vars);
        if k.is_zero() {
            return p;
        }
        for (e, c) in &self.terms {
            p.terms.insert(e.clone(), c * k);
        }
        p
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(&self.vars);
        for _ in 0..n {
            acc = acc.try_mul(self).expect("same variables");
        }
        acc
    }

    /// Substitutes `subs[i]` for variable `i`; all substitutes must share one
    /// variable list, which becomes the result's.
    pub fn compose(&self, subs: &[MultiPoly]) -> Result<Self> {
        if subs.len() != self.vars.len() {
            return Err(Error::DimensionMismatch { expected: self.vars.len(), got: subs.len() });
        }
        let target: Vec<String> = match subs.first() {
            Some(s) => s.vars.clone(),
            None => Vec::new(),
        };
        for s in subs {
            if s.vars != target {
                return Err(Error::VariableMismatch { left: target.clone(), right: s.vars.clone() });
            }
        }
        // cache powers per variable
        let max_exp: Vec<u32> = (0..self.vars.len()).map(|i| self.terms.keys().map(|e| e[i]).max().unwrap_or(0)).collect();
        let powers: Vec<Vec<MultiPoly>> = subs
            .iter()
            .zip(&max_exp)
            .map(|(s, &m)| {
                let mut v = vec![MultiPoly::one(&target)];
                for k in 1..=m as usize {
                    let next = v[k - 1].try_mul(s).expect("same variables");
                    v.push(next);
                }
                v
            })
            .collect();
        let mut out = MultiPoly::zero(&target);
        for (e, c) in &self.terms {
            let mut t = MultiPoly::constant(&target, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = t.try_mul(&powers[i][k as usize])?;
                }
            }
            out = out.try_add(&t)?;
        }
        Ok(out)
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, point: &[Rational]) -> Result<Rational> {
        if point.len() != self.vars.len() {
            return Err(Error::DimensionMismatch { expected: self.vars.len(), got: point.len() });
        }
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    t *= x;
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Floating (or dual) evaluation; coefficients are rounded to `f64`.
    pub fn eval_real<S: Real>(&self, point: &[S]) -> S {
        assert_eq!(point.len(), self.vars.len(), "evaluation point length");
        let mut acc = S::zero();
        for (e, c) in &self.terms {
            let mut t = S::cst(to_f64(c));
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t = t * x.powi(k);
                }
            }
            acc = acc + t;
        }
        acc
    }

    pub fn derivative(&self, i: usize) -> Self {
        let mut p = Self::zero(&self.vars);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut f = e.clone();
                f[i] -= 1;
                p.insert(f, c * int(e[i] as i64));
            }
        }
        p
    }

    /// Re-expresses the polynomial over `vars`, which must contain every
    /// variable this polynomial actually uses.
    pub fn with_vars(&self, vars: &[String]) -> Result<Self> {
        let map: Vec<Option<usize>> = self.vars.iter().map(|v| vars.iter().position(|w| w == v)).collect();
        let mut p = Self::zero(vars);
        for (e, c) in &self.terms {
            let mut f = vec![0; vars.len()];
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                match map[i] {
                    Some(j) => f[j] = k,
                    None => return Err(Error::VariableMismatch { left: self.vars.clone(), right: vars.to_vec() }),
                }
            }
            p.insert(f, c.clone());
        }
        Ok(p)
    }

    /// Sparse text form: space-separated `coef@e1,e2,...` terms, `0` for zero.
    pub fn to_sparse(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        self.terms
            .iter()
            .map(|(e, c)| {
                let ex: Vec<String> = e.iter().map(|k| k.to_string()).collect();
                format!("{}@{}", c, ex.join(","))
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn parse_sparse(vars: &[String], text: &str) -> Result<Self> {
        let mut p = Self::zero(vars);
        let text = text.trim();
        if text == "0" || text.is_empty() {
            return Ok(p);
        }
        for tok in text.split_whitespace() {
            let (c, e) = tok.split_once('@').ok_or_else(|| Error::Parse(format!("term `{tok}` lacks `@`")))?;
            let coef: Rational = parse_rational(c)?;
            let exps: Vec<u32> = if vars.is_empty() {
                Vec::new()
            } else {
                e.split(',')
                    .map(|s| s.trim().parse::<u32>().map_err(|err| Error::Parse(format!("exponent `{s}`: {err}"))))
                    .collect::<Result<_>>()?
            };
            if exps.len() != vars.len() {
                return Err(Error::Parse(format!("term `{tok}` has {} exponents, expected {}", exps.len(), vars.len())));
            }
            p.insert(exps, coef);
        }
        Ok(p)
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|e| Error::Parse(format!("numerator `{n}`: {e}")))?;
    let d: BigInt = d.parse().map_err(|e| Error::Parse(format!("denominator `{d}`: {e}")))?;
    if d.is_zero() {
        return Err(Error::Parse("zero denominator".into()));
    }
    Ok(BigRational::new(n, d))
}

/// All exponent vectors in `nvars` variables of total degree exactly `d`,
/// in lexicographically decreasing order.
pub fn monomials(nvars: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(cur.clone());
            return;
        }
        for k in (0..=left).rev() {
            cur[i] = k;
            rec(i + 1, left - k, cur, out);
        }
    }
    if nvars == 0 {
        return if d == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    rec(0, d, &mut vec![0; nvars], &mut out);
    out
}

impl std::ops::Add for &MultiPoly {
    type Output = MultiPoly;
    /// Panics on differing variable lists; use [`MultiPoly::try_add`] otherwise.
    fn add(self, o: &MultiPoly) -> MultiPoly {
        self.try_add(o).expect("polynomial variable lists differ")
    }
}

impl std::ops::Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, o: &MultiPoly) -> MultiPoly {
        self.try_sub(o).expect("polynomial variable lists differ")
    }
}

impl std::ops::Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, o: &MultiPoly) -> MultiPoly {
        self.try_mul(o).expect("polynomial variable lists differ")
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let mono: Vec<String> = e
                .iter()
                .zip(&self.vars)
                .filter(|(k, _)| **k > 0)
                .map(|(k, v)| if *k == 1 { v.clone() } else { format!("{v}^{k}") })
                .collect();
            if mono.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{mag}*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

/// `["x1", "x2", ...]`-style variable names.
pub fn var_names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}
