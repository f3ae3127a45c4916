//! Forward-mode automatic differentiation.
//!
//! [`Dual<T>`] carries a value and one partial derivative per active
//! variable. Because `Dual<T>` is itself [`Real`] whenever `T` is, duals nest:
//! `Dual<Dual<f64>>` yields exact second derivatives, which the curvature and
//! bundle code relies on.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Scalar arithmetic shared by `f64` and every level of [`Dual`].
pub trait Real:
    Clone
    + Debug
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn cst(v: f64) -> Self;
    /// The underlying real value (all derivative parts dropped).
    fn re(&self) -> f64;
    fn scale(&self, k: f64) -> Self;
    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
    fn exp(&self) -> Self;
    fn ln(&self) -> Self;
    fn sqrt(&self) -> Self;
    fn acos(&self) -> Self;
    /// `self.atan2(x)` is the angle of the point `(x, self)`.
    fn atan2(&self, x: &Self) -> Self;
    fn all_finite(&self) -> bool;

    fn zero() -> Self {
        Self::cst(0.0)
    }
    fn one() -> Self {
        Self::cst(1.0)
    }
    fn powi(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc * self.clone();
        }
        acc
    }
    fn sq(&self) -> Self {
        self.clone() * self.clone()
    }
}

impl Real for f64 {
    fn cst(v: f64) -> Self {
        v
    }
    fn re(&self) -> f64 {
        *self
    }
    fn scale(&self, k: f64) -> Self {
        self * k
    }
    fn sin(&self) -> Self {
        f64::sin(*self)
    }
    fn cos(&self) -> Self {
        f64::cos(*self)
    }
    fn exp(&self) -> Self {
        f64::exp(*self)
    }
    fn ln(&self) -> Self {
        f64::ln(*self)
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn acos(&self) -> Self {
        f64::acos(*self)
    }
    fn atan2(&self, x: &Self) -> Self {
        f64::atan2(*self, *x)
    }
    fn all_finite(&self) -> bool {
        self.is_finite()
    }
}

/// A dual number `value + Σ partials[i]·εᵢ`.
///
/// An empty `partials` vector denotes a constant; missing slots read as zero,
/// so constants and seeded variables mix freely.
#[derive(Clone, Debug, PartialEq)]
pub struct Dual<T> {
    pub value: T,
    pub partials: Vec<T>,
}

pub type D1 = Dual<f64>;
pub type D2 = Dual<D1>;
pub type D3 = Dual<D2>;

impl<T: Real> Dual<T> {
    pub fn constant(value: T) -> Self {
        Dual { value, partials: Vec::new() }
    }

    /// Variable number `index` out of `count` active variables.
    pub fn var(value: T, index: usize, count: usize) -> Self {
        let mut partials = vec![T::zero(); count];
        partials[index] = T::one();
        Dual { value, partials }
    }

    pub fn partial(&self, i: usize) -> T {
        self.partials.get(i).cloned().unwrap_or_else(T::zero)
    }

    fn chain(&self, value: T, slope: T) -> Self {
        Dual { value, partials: self.partials.iter().map(|p| p.clone() * slope.clone()).collect() }
    }

    fn zip(a: &[T], b: &[T], f: impl Fn(T, T) -> T) -> Vec<T> {
        let n = a.len().max(b.len());
        (0..n)
            .map(|i| {
                let x = a.get(i).cloned().unwrap_or_else(T::zero);
                let y = b.get(i).cloned().unwrap_or_else(T::zero);
                f(x, y)
            })
            .collect()
    }
}

/// Seeds every coordinate of `x` as an independent variable.
pub fn seed<T: Real>(x: &[T]) -> Vec<Dual<T>> {
    x.iter().enumerate().map(|(i, v)| Dual::var(v.clone(), i, x.len())).collect()
}

/// Seeds `x` twice so that `f(seed2(x)).partial(i).partial(j)` is `∂_i∂_j f`.
pub fn seed2(x: &[f64]) -> Vec<D2> {
    seed(&seed(x))
}

/// Third-order seeding, the analogue of [`seed2`].
pub fn seed3(x: &[f64]) -> Vec<D3> {
    seed(&seed(&seed(x)))
}

/// Embeds values as constants one level up.
pub fn lift<T: Real>(x: &[T]) -> Vec<Dual<T>> {
    x.iter().cloned().map(Dual::constant).collect()
}

/// Values of a slice of duals.
pub fn values<T: Real>(x: &[Dual<T>]) -> Vec<T> {
    x.iter().map(|d| d.value.clone()).collect()
}

impl<T: Real> Add for Dual<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Dual { value: self.value + o.value, partials: Self::zip(&self.partials, &o.partials, |a, b| a + b) }
    }
}

impl<T: Real> Sub for Dual<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Dual { value: self.value - o.value, partials: Self::zip(&self.partials, &o.partials, |a, b| a - b) }
    }
}

impl<T: Real> Mul for Dual<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let (a, b) = (self.value.clone(), o.value.clone());
        let partials = Self::zip(&self.partials, &o.partials, |da, db| da * b.clone() + a.clone() * db);
        Dual { value: self.value * o.value, partials }
    }
}

impl<T: Real> Div for Dual<T> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        let q = self.value.clone() / o.value.clone();
        let b = o.value.clone();
        let partials = Self::zip(&self.partials, &o.partials, |da, db| (da - q.clone() * db) / b.clone());
        Dual { value: q, partials }
    }
}

impl<T: Real> Neg for Dual<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Dual { value: -self.value, partials: self.partials.into_iter().map(|p| -p).collect() }
    }
}

impl<T: Real> Real for Dual<T> {
    fn cst(v: f64) -> Self {
        Dual::constant(T::cst(v))
    }
    fn re(&self) -> f64 {
        self.value.re()
    }
    fn scale(&self, k: f64) -> Self {
        Dual { value: self.value.scale(k), partials: self.partials.iter().map(|p| p.scale(k)).collect() }
    }
    fn sin(&self) -> Self {
        self.chain(self.value.sin(), self.value.cos())
    }
    fn cos(&self) -> Self {
        self.chain(self.value.cos(), -self.value.sin())
    }
    fn exp(&self) -> Self {
        let e = self.value.exp();
        self.chain(e.clone(), e)
    }
    fn ln(&self) -> Self {
        self.chain(self.value.ln(), T::one() / self.value.clone())
    }
    fn sqrt(&self) -> Self {
        let s = self.value.sqrt();
        self.chain(s.clone(), T::cst(0.5) / s)
    }
    fn acos(&self) -> Self {
        let slope = -(T::one() / (T::one() - self.value.sq()).sqrt());
        self.chain(self.value.acos(), slope)
    }
    fn atan2(&self, x: &Self) -> Self {
        let (yv, xv) = (self.value.clone(), x.value.clone());
        let r2 = xv.sq() + yv.sq();
        let partials = Self::zip(&self.partials, &x.partials, |dy, dx| (xv.clone() * dy - yv.clone() * dx) / r2.clone());
        Dual { value: yv.atan2(&xv), partials }
    }
    fn all_finite(&self) -> bool {
        self.value.all_finite() && self.partials.iter().all(|p| p.all_finite())
    }
}

/// Gradient of a scalar function via one forward pass with `x.len()` slots.
pub fn dual_gradient<F>(f: F, x: &[f64]) -> Result<Vec<f64>>
where
    F: Fn(&[D1]) -> D1,
{
    let out = f(&seed(x));
    if !out.all_finite() {
        return Err(Error::Domain(format!("non-finite derivative at {x:?}")));
    }
    Ok((0..x.len()).map(|i| out.partial(i)).collect())
}

/// Values and Jacobian (`rows = outputs`) of a vector function at `x`.
pub fn jacobian<T, F>(f: F, x: &[T]) -> (Vec<T>, Vec<Vec<T>>)
where
    T: Real,
    F: Fn(&[Dual<T>]) -> Vec<Dual<T>>,
{
    let out = f(&seed(x));
    let vals = values(&out);
    let jac = out.iter().map(|o| (0..x.len()).map(|i| o.partial(i)).collect()).collect();
    (vals, jac)
}
