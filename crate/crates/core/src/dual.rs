//! Forward-mode dual numbers.
//!
//! `Dual<T>` carries a value and a vector of partial derivatives. An empty
//! partials vector stands for an all-zero gradient, so constants need no
//! knowledge of the dimension. Nesting (`Dual<Dual<f64>>`) yields exact
//! second derivatives.

use std::ops::{Add, Mul, Neg, Sub};

/// Scalar types an observable can be evaluated over.
pub trait Real:
    Clone
    + std::fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_f64(v: f64) -> Self;
    /// Underlying floating-point value.
    fn value(&self) -> f64;
    fn powi(&self, n: i32) -> Self;
    /// Real power; only meaningful for positive values.
    fn powf(&self, q: f64) -> Self;
}

impl Real for f64 {
    fn from_f64(v: f64) -> Self {
        v
    }
    fn value(&self) -> f64 {
        *self
    }
    fn powi(&self, n: i32) -> Self {
        f64::powi(*self, n)
    }
    fn powf(&self, q: f64) -> Self {
        f64::powf(*self, q)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dual<T> {
    pub value: T,
    pub partials: Vec<T>,
}

/// First-order dual over doubles: value plus the 2N phase-space partials.
pub type DualScalar = Dual<f64>;

impl<T: Real> Dual<T> {
    pub fn constant(value: T) -> Self {
        Dual { value, partials: Vec::new() }
    }

    /// Independent variable `index` out of `dim`.
    pub fn variable(value: T, index: usize, dim: usize) -> Self {
        let mut partials = vec![T::from_f64(0.0); dim];
        partials[index] = T::from_f64(1.0);
        Dual { value, partials }
    }

    /// Partial `index`, zero when not tracked.
    pub fn partial(&self, index: usize) -> T {
        self.partials.get(index).cloned().unwrap_or_else(|| T::from_f64(0.0))
    }

    fn zip_partials(a: Vec<T>, b: Vec<T>, f: impl Fn(T, T) -> T) -> Vec<T> {
        if a.is_empty() {
            return b.into_iter().map(|v| f(T::from_f64(0.0), v)).collect();
        }
        if b.is_empty() {
            return a.into_iter().map(|v| f(v, T::from_f64(0.0))).collect();
        }
        let (mut a, mut b) = (a, b);
        let len = a.len().max(b.len());
        a.resize(len, T::from_f64(0.0));
        b.resize(len, T::from_f64(0.0));
        a.into_iter().zip(b).map(|(x, y)| f(x, y)).collect()
    }

    fn chain(self, value: T, derivative: T) -> Self {
        let partials = self.partials.into_iter().map(|d| derivative.clone() * d).collect();
        Dual { value, partials }
    }
}

impl<T: Real> Add for Dual<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Dual {
            value: self.value + rhs.value,
            partials: Self::zip_partials(self.partials, rhs.partials, |a, b| a + b),
        }
    }
}

impl<T: Real> Sub for Dual<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Dual {
            value: self.value - rhs.value,
            partials: Self::zip_partials(self.partials, rhs.partials, |a, b| a - b),
        }
    }
}

impl<T: Real> Mul for Dual<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let (u, v) = (self.value, rhs.value);
        let (du, dv) = (self.partials, rhs.partials);
        let partials = if du.is_empty() {
            dv.into_iter().map(|d| u.clone() * d).collect()
        } else if dv.is_empty() {
            du.into_iter().map(|d| v.clone() * d).collect()
        } else {
            Self::zip_partials(du, dv, |a, b| v.clone() * a + u.clone() * b)
        };
        Dual { value: u * v, partials }
    }
}

impl<T: Real> Neg for Dual<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Dual { value: -self.value, partials: self.partials.into_iter().map(|d| -d).collect() }
    }
}

impl<T: Real> Real for Dual<T> {
    fn from_f64(v: f64) -> Self {
        Dual::constant(T::from_f64(v))
    }

    fn value(&self) -> f64 {
        self.value.value()
    }

    fn powi(&self, n: i32) -> Self {
        if n == 0 {
            return Dual::from_f64(1.0);
        }
        let value = self.value.powi(n);
        let derivative = T::from_f64(n as f64) * self.value.powi(n - 1);
        self.clone().chain(value, derivative)
    }

    fn powf(&self, q: f64) -> Self {
        let value = self.value.powf(q);
        let derivative = T::from_f64(q) * self.value.powf(q - 1.0);
        self.clone().chain(value, derivative)
    }
}
