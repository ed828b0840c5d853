//! Independent oracles shared by the integration suites.
//!
//! Operators are checked by applying them term by term to test functions,
//! never through the normal-ordering product, so agreement means the Leibniz
//! bookkeeping is right.

#![allow(dead_code)]

use std::collections::BTreeMap;

use involution::observable::{Expr, Observable};
use involution::operators::{DiffOp, GaussRat, TermKey};
use involution::params::Parameters;
use involution::phase::PhasePoint;
use involution::sampling::SeededRng;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;

/// Exact sum of monomials; keys are exponents in quarters.
pub type Poly = BTreeMap<Vec<i32>, GaussRat>;

pub fn monomial(exps: &[i32]) -> Poly {
    let mut p = Poly::new();
    p.insert(exps.to_vec(), GaussRat::one());
    p
}

/// `e (e-1) ... (e-d+1)` for `e = quarters/4`.
fn falling(quarters: i32, d: u32) -> BigRational {
    let e = BigRational::new(BigInt::from(quarters), BigInt::from(4));
    let mut acc = BigRational::from_integer(BigInt::from(1));
    for t in 0..d {
        acc *= &e - BigRational::from_integer(BigInt::from(t));
    }
    acc
}

/// Applies `op` to `f` by differentiating each monomial directly.
pub fn apply(op: &DiffOp, f: &Poly) -> Poly {
    let mut out = Poly::new();
    for (key, c) in op.iter() {
        for (exps, fc) in f {
            let mut factor = BigRational::from_integer(BigInt::from(1));
            let mut new_exp = Vec::with_capacity(exps.len());
            for i in 0..exps.len() {
                factor *= falling(exps[i], key.dexp[i]);
                new_exp.push(exps[i] + key.xexp[i] - 4 * key.dexp[i] as i32);
            }
            if factor.is_zero() {
                continue;
            }
            let term = (c * fc).scale(&factor);
            let slot = out.entry(new_exp).or_insert_with(GaussRat::zero);
            *slot += &term;
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

pub fn poly_sub(a: &Poly, b: &Poly) -> Poly {
    let mut out = a.clone();
    for (k, v) in b {
        let slot = out.entry(k.clone()).or_insert_with(GaussRat::zero);
        *slot += &(-v);
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// All exponent vectors with entries `0..` and total degree `<= max_degree`,
/// scaled to quarters.
pub fn integer_monomials(n: usize, max_degree: i32) -> Vec<Vec<i32>> {
    fn rec(n: usize, left: i32, cur: &mut Vec<i32>, out: &mut Vec<Vec<i32>>) {
        if cur.len() == n {
            out.push(cur.iter().map(|e| 4 * e).collect());
            return;
        }
        for e in 0..=left {
            cur.push(e);
            rec(n, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, max_degree, &mut Vec::new(), &mut out);
    out
}

/// Random operator with `terms` terms, derivative orders `<= max_d` per
/// coordinate and Gaussian-integer coefficients. With `fractional`, the
/// coordinate exponents are arbitrary quarters in `[-1, 2]`; otherwise
/// nonnegative integers `<= 2`.
pub fn random_op(rng: &mut SeededRng, n: usize, terms: usize, max_d: u32, fractional: bool) -> DiffOp {
    let mut op = DiffOp::zero(n);
    for _ in 0..terms {
        let dexp: Vec<u32> = (0..n).map(|_| rng.random_range(0..=max_d)).collect();
        let xexp: Vec<i32> = (0..n)
            .map(|_| if fractional { rng.random_range(-4..=8) } else { 4 * rng.random_range(0..=2) })
            .collect();
        let re = BigRational::from_integer(BigInt::from(rng.random_range(-3i64..=3)));
        let im = BigRational::from_integer(BigInt::from(rng.random_range(-1i64..=1)));
        op.add_term(TermKey { dexp, xexp }, GaussRat::new(re, im));
    }
    op
}

/// Floating-point sum of monomials `c x^e` with real exponents; entries are
/// kept unmerged so the magnitude of the individual contributions survives.
#[derive(Debug, Clone)]
pub struct NumPoly {
    pub terms: Vec<((f64, f64), Vec<f64>)>,
}

impl NumPoly {
    pub fn power(beta: &[f64]) -> Self {
        NumPoly { terms: vec![((1.0, 0.0), beta.to_vec())] }
    }

    /// `(value, sum of |term|)` at `x`.
    pub fn eval(&self, x: &[f64]) -> ((f64, f64), f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        let mut mag = 0.0;
        for ((cr, ci), e) in &self.terms {
            let m: f64 = x.iter().zip(e).map(|(v, p)| v.powf(*p)).product();
            re += cr * m;
            im += ci * m;
            mag += (cr.abs() + ci.abs()) * m.abs();
        }
        ((re, im), mag)
    }
}

/// Applies `op` to `f` in floating point.
pub fn apply_numeric(op: &DiffOp, f: &NumPoly) -> NumPoly {
    let mut terms = Vec::new();
    for (key, c) in op.iter() {
        let (cr, ci) = c.to_f64_pair();
        for ((fr, fi), e) in &f.terms {
            let mut factor = 1.0;
            let mut new_exp = Vec::with_capacity(e.len());
            for i in 0..e.len() {
                for t in 0..key.dexp[i] {
                    factor *= e[i] - t as f64;
                }
                new_exp.push(e[i] + key.xexp[i] as f64 / 4.0 - key.dexp[i] as f64);
            }
            if factor == 0.0 {
                continue;
            }
            terms.push((((cr * fr - ci * fi) * factor, (cr * fi + ci * fr) * factor), new_exp));
        }
    }
    NumPoly { terms }
}

/// Relative mismatch `|a - b| / max(1, magnitudes)` at `x`.
pub fn numeric_mismatch(a: &NumPoly, b: &NumPoly, x: &[f64]) -> f64 {
    let ((ar, ai), am) = a.eval(x);
    let ((br, bi), bm) = b.eval(x);
    ((ar - br).abs() + (ai - bi).abs()) / am.max(bm).max(1.0)
}

/// Random exponent vector with entries `num/den` in `(-2, 3)`, `den <= 7`.
pub fn random_beta(rng: &mut SeededRng, n: usize) -> Vec<f64> {
    (0..n)
        .map(|_| {
            let den = rng.random_range(1..=7) as f64;
            let num = rng.random_range(-13..=20) as f64;
            (num / den).clamp(-1.9, 2.9)
        })
        .collect()
}

pub fn random_positive_point(rng: &mut SeededRng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(0.5..2.0)).collect()
}

/// Part of `op`'s symbol of total derivative order `order`, with `d_i -> xi_i`,
/// evaluated at `(x, xi)`; real part only.
pub fn symbol_part(op: &DiffOp, order: u32, x: &[f64], xi: &[f64]) -> f64 {
    op.iter()
        .filter(|(k, _)| k.derivative_order() == order)
        .map(|(k, c)| {
            let xm: f64 = x.iter().zip(&k.xexp).map(|(v, e)| v.powf(*e as f64 / 4.0)).product();
            let dm: f64 = xi.iter().zip(&k.dexp).map(|(v, e)| v.powi(*e as i32)).product();
            c.to_f64_pair().0 * xm * dm
        })
        .sum()
}

/// Classical principal symbol of the naive operator `N_i`:
/// `sum_{j != i} (x_i - x_j)^2 (p_i - p_j)^2 / alpha_ij`.
pub fn naive_symbol(i: usize, params: &Parameters) -> Observable {
    let n = params.n();
    let terms = (0..n)
        .filter(|&j| j != i)
        .map(|j| {
            let dx = Expr::Sum(vec![Expr::x(i), Expr::Neg(Box::new(Expr::x(j)))]);
            let dp = Expr::Sum(vec![Expr::p(i), Expr::Neg(Box::new(Expr::p(j)))]);
            Expr::Product(vec![Expr::c(1.0 / params.diff_f64(i, j)), dx.powi(2), dp.powi(2)])
        })
        .collect();
    Observable::new(format!("K{}", i + 1), n, Expr::Sum(terms))
}

/// Central-difference gradient, step `eps`.
pub fn fd_gradient(obs: &Observable, pt: &PhasePoint, eps: f64) -> Vec<f64> {
    let z = pt.to_vec();
    (0..z.len())
        .map(|a| {
            let mut up = z.clone();
            let mut down = z.clone();
            up[a] += eps;
            down[a] -= eps;
            let fu = obs.eval(&PhasePoint::from_slice(&up)).unwrap();
            let fd = obs.eval(&PhasePoint::from_slice(&down)).unwrap();
            (fu - fd) / (2.0 * eps)
        })
        .collect()
}

/// `(1, 2, 4, ...)` of length `n`.
pub fn power_alphas(n: usize) -> Vec<i64> {
    (0..n).map(|i| 1i64 << i).collect()
}

pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_f64(q: &BigRational) -> f64 {
    q.numer().to_f64().unwrap() / q.denom().to_f64().unwrap()
}
