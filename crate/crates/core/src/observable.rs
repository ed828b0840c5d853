//! Phase-space observables as small expression trees.
//!
//! An expression is evaluated generically over any [`Real`], so one
//! definition serves plain values, gradients (`Dual<f64>`) and Hessians
//! (`Dual<Dual<f64>>`).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::dual::{Dual, Real};
use crate::error::{Error, Result};
use crate::phase::PhasePoint;

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    /// Coordinate `x_i`, 0-based.
    X(usize),
    /// Momentum `p_i`, 0-based.
    P(usize),
    Sum(Vec<Expr>),
    Product(Vec<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, Exponent),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exponent {
    Int(i32),
    /// `num/den` with `den > 1`; the base must be positive.
    Frac(i32, u32),
}

impl Expr {
    pub fn x(i: usize) -> Expr {
        Expr::X(i)
    }

    pub fn p(i: usize) -> Expr {
        Expr::P(i)
    }

    pub fn c(v: f64) -> Expr {
        Expr::Const(v)
    }

    pub fn powi(self, n: i32) -> Expr {
        Expr::Pow(Box::new(self), Exponent::Int(n))
    }

    pub fn powq(self, num: i32, den: u32) -> Expr {
        let g = gcd(num.unsigned_abs(), den).max(1);
        let (num, den) = (num / g as i32, den / g);
        if den == 1 {
            self.powi(num)
        } else {
            Expr::Pow(Box::new(self), Exponent::Frac(num, den))
        }
    }

    pub fn sqrt(self) -> Expr {
        self.powq(1, 2)
    }

    /// Largest variable index referenced, plus one.
    pub fn min_arity(&self) -> usize {
        match self {
            Expr::Const(_) => 0,
            Expr::X(i) | Expr::P(i) => i + 1,
            Expr::Sum(v) | Expr::Product(v) => v.iter().map(Expr::min_arity).max().unwrap_or(0),
            Expr::Neg(e) | Expr::Pow(e, _) => e.min_arity(),
        }
    }

    pub fn eval<T: Real>(&self, x: &[T], p: &[T]) -> Result<T> {
        match self {
            Expr::Const(v) => Ok(T::from_f64(*v)),
            Expr::X(i) => Ok(x[*i].clone()),
            Expr::P(i) => Ok(p[*i].clone()),
            Expr::Sum(terms) => {
                let mut acc = T::from_f64(0.0);
                for t in terms {
                    acc = acc + t.eval(x, p)?;
                }
                Ok(acc)
            }
            Expr::Product(factors) => {
                let mut acc = T::from_f64(1.0);
                for f in factors {
                    acc = acc * f.eval(x, p)?;
                }
                Ok(acc)
            }
            Expr::Neg(e) => Ok(-e.eval(x, p)?),
            Expr::Pow(base, exp) => {
                let b = base.eval(x, p)?;
                match *exp {
                    Exponent::Int(n) => {
                        if n < 0 && b.value() == 0.0 {
                            return Err(Error::Domain("division by zero".into()));
                        }
                        Ok(b.powi(n))
                    }
                    Exponent::Frac(num, den) => {
                        if !(b.value() > 0.0) {
                            return Err(Error::Domain(format!(
                                "fractional power {num}/{den} of non-positive value {}",
                                b.value()
                            )));
                        }
                        Ok(b.powf(num as f64 / den as f64))
                    }
                }
            }
        }
    }
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(v) => write!(f, "{v}"),
            Expr::X(i) => write!(f, "x{}", i + 1),
            Expr::P(i) => write!(f, "p{}", i + 1),
            Expr::Sum(v) => {
                write!(f, "(")?;
                for (k, t) in v.iter().enumerate() {
                    if k > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{t}")?;
                }
                write!(f, ")")
            }
            Expr::Product(v) => {
                for (k, t) in v.iter().enumerate() {
                    if k > 0 {
                        write!(f, "*")?;
                    }
                    write!(f, "{t}")?;
                }
                Ok(())
            }
            Expr::Neg(e) => write!(f, "-({e})"),
            Expr::Pow(e, Exponent::Int(n)) => write!(f, "({e})^{n}"),
            Expr::Pow(e, Exponent::Frac(a, b)) => write!(f, "({e})^({a}/{b})"),
        }
    }
}

/// A named, evaluable function on the phase space of `arity` degrees of freedom.
#[derive(Debug, Clone)]
pub struct Observable {
    name: String,
    arity: usize,
    expr: Arc<Expr>,
}

impl Observable {
    pub fn new(name: impl Into<String>, arity: usize, expr: Expr) -> Self {
        debug_assert!(expr.min_arity() <= arity);
        Observable { name: name.into(), arity, expr: Arc::new(expr) }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    fn check(&self, pt: &PhasePoint) -> Result<()> {
        if pt.x.len() != self.arity || pt.p.len() != self.arity {
            return Err(Error::DimensionMismatch { expected: self.arity, found: pt.x.len() });
        }
        Ok(())
    }

    pub fn eval(&self, pt: &PhasePoint) -> Result<f64> {
        self.check(pt)?;
        self.expr.eval(&pt.x, &pt.p)
    }

    /// Value and exact gradient `(d/dx_1..d/dx_N, d/dp_1..d/dp_N)`.
    pub fn value_and_grad(&self, pt: &PhasePoint) -> Result<(f64, Vec<f64>)> {
        self.check(pt)?;
        let n = self.arity;
        let dim = 2 * n;
        let x: Vec<Dual<f64>> = (0..n).map(|i| Dual::variable(pt.x[i], i, dim)).collect();
        let p: Vec<Dual<f64>> = (0..n).map(|i| Dual::variable(pt.p[i], n + i, dim)).collect();
        let out = self.expr.eval(&x, &p)?;
        let grad = (0..dim).map(|k| out.partial(k)).collect();
        Ok((out.value, grad))
    }

    pub fn grad(&self, pt: &PhasePoint) -> Result<Vec<f64>> {
        Ok(self.value_and_grad(pt)?.1)
    }

    /// Value, gradient and Hessian (row-major `2N x 2N`) via nested duals.
    pub fn hessian(&self, pt: &PhasePoint) -> Result<(f64, Vec<f64>, Vec<Vec<f64>>)> {
        self.check(pt)?;
        let n = self.arity;
        let dim = 2 * n;
        let seed = |v: f64, k: usize| Dual {
            value: Dual::variable(v, k, dim),
            partials: (0..dim).map(|j| Dual::from_f64(if j == k { 1.0 } else { 0.0 })).collect(),
        };
        let x: Vec<_> = (0..n).map(|i| seed(pt.x[i], i)).collect();
        let p: Vec<_> = (0..n).map(|i| seed(pt.p[i], n + i)).collect();
        let out = self.expr.eval(&x, &p)?;
        let grad = (0..dim).map(|k| out.value.partial(k)).collect();
        let hess = (0..dim).map(|a| (0..dim).map(|b| out.partial(a).partial(b)).collect()).collect();
        Ok((out.value.value, grad, hess))
    }

    pub fn scale(&self, c: f64) -> Observable {
        Observable::new(
            format!("{c}*{}", self.name),
            self.arity,
            Expr::Product(vec![Expr::Const(c), (*self.expr).clone()]),
        )
    }
}

/// Exact gradient of `obs` at `pt`.
pub fn grad(obs: &Observable, pt: &PhasePoint) -> Result<Vec<f64>> {
    obs.grad(pt)
}

fn combine(a: &Observable, b: &Observable, op: &str, expr: Expr) -> Observable {
    assert_eq!(a.arity, b.arity, "observable arity mismatch");
    Observable::new(format!("({}{op}{})", a.name, b.name), a.arity, expr)
}

impl Add for &Observable {
    type Output = Observable;
    fn add(self, rhs: &Observable) -> Observable {
        combine(self, rhs, "+", Expr::Sum(vec![(*self.expr).clone(), (*rhs.expr).clone()]))
    }
}

impl Sub for &Observable {
    type Output = Observable;
    fn sub(self, rhs: &Observable) -> Observable {
        combine(
            self,
            rhs,
            "-",
            Expr::Sum(vec![(*self.expr).clone(), Expr::Neg(Box::new((*rhs.expr).clone()))]),
        )
    }
}

impl Mul for &Observable {
    type Output = Observable;
    fn mul(self, rhs: &Observable) -> Observable {
        combine(self, rhs, "*", Expr::Product(vec![(*self.expr).clone(), (*rhs.expr).clone()]))
    }
}

impl Neg for &Observable {
    type Output = Observable;
    fn neg(self) -> Observable {
        Observable::new(format!("-{}", self.name), self.arity, Expr::Neg(Box::new((*self.expr).clone())))
    }
}
