use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::gauss::GaussRat;

/// Coordinate exponents in quarters: entry `e` stands for `x^(e/4)`.
pub type QuarterExp = Vec<i32>;

/// Key of a normal-ordered term `x^xexp d^dexp`.
///
/// Field order fixes the canonical term order: lexicographic on `(dexp, xexp)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TermKey {
    pub dexp: Vec<u32>,
    pub xexp: QuarterExp,
}

impl TermKey {
    pub fn constant(n: usize) -> Self {
        TermKey { dexp: vec![0; n], xexp: vec![0; n] }
    }

    pub fn derivative_order(&self) -> u32 {
        self.dexp.iter().sum()
    }
}

/// A single normal-ordered term `coeff * prod x_i^(xexp_i/4) * prod d_i^dexp_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpTerm {
    pub coeff: GaussRat,
    pub xexp: QuarterExp,
    pub dexp: Vec<u32>,
}

/// Differential operator in normal form: every coordinate power stands to the
/// left of every derivative. Terms with equal keys are merged and zero
/// coefficients dropped, so structural equality is operator equality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffOp {
    n: usize,
    terms: BTreeMap<TermKey, GaussRat>,
}

impl DiffOp {
    pub fn zero(n: usize) -> Self {
        DiffOp { n, terms: BTreeMap::new() }
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, GaussRat::one())
    }

    pub fn scalar(n: usize, c: GaussRat) -> Self {
        let mut op = Self::zero(n);
        op.add_term(TermKey::constant(n), c);
        op
    }

    /// Multiplication by `x_i^(quarters/4)`.
    pub fn x_pow(n: usize, i: usize, quarters: i32) -> Self {
        let mut key = TermKey::constant(n);
        key.xexp[i] = quarters;
        let mut op = Self::zero(n);
        op.add_term(key, GaussRat::one());
        op
    }

    pub fn x(n: usize, i: usize) -> Self {
        Self::x_pow(n, i, 4)
    }

    /// `d/dx_i`.
    pub fn d(n: usize, i: usize) -> Self {
        let mut key = TermKey::constant(n);
        key.dexp[i] = 1;
        let mut op = Self::zero(n);
        op.add_term(key, GaussRat::one());
        op
    }

    pub fn monomial(n: usize, coeff: GaussRat, xexp: QuarterExp, dexp: Vec<u32>) -> Self {
        assert_eq!(xexp.len(), n);
        assert_eq!(dexp.len(), n);
        let mut op = Self::zero(n);
        op.add_term(TermKey { dexp, xexp }, coeff);
        op
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&TermKey, &GaussRat)> {
        self.terms.iter()
    }

    /// Terms in canonical order.
    pub fn terms(&self) -> Vec<OpTerm> {
        self.terms
            .iter()
            .map(|(k, c)| OpTerm { coeff: c.clone(), xexp: k.xexp.clone(), dexp: k.dexp.clone() })
            .collect()
    }

    /// Adds `coeff * key`, merging with an existing term and dropping zeros.
    pub fn add_term(&mut self, key: TermKey, coeff: GaussRat) {
        debug_assert_eq!(key.xexp.len(), self.n);
        debug_assert_eq!(key.dexp.len(), self.n);
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn coefficient(&self, key: &TermKey) -> Option<&GaussRat> {
        self.terms.get(key)
    }

    pub fn scale(&self, c: &GaussRat) -> DiffOp {
        let mut out = DiffOp::zero(self.n);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v * c);
        }
        out
    }

    pub fn scale_rational(&self, q: &BigRational) -> DiffOp {
        self.scale(&GaussRat::real(q.clone()))
    }

    pub fn max_derivative_order(&self) -> Option<u32> {
        self.terms.keys().map(TermKey::derivative_order).max()
    }

    pub fn min_derivative_order(&self) -> Option<u32> {
        self.terms.keys().map(TermKey::derivative_order).min()
    }

    /// Nonzero and every term carries exactly one derivative.
    pub fn is_purely_first_order(&self) -> bool {
        !self.is_zero() && self.terms.keys().all(|k| k.derivative_order() == 1)
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(GaussRat::is_real)
    }

    /// Real part (coefficientwise).
    pub fn real_part(&self) -> DiffOp {
        let mut out = DiffOp::zero(self.n);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), GaussRat::real(v.re.clone()));
        }
        out
    }

    /// Every x-exponent is a nonnegative integer.
    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|k| k.xexp.iter().all(|&e| e >= 0 && e % 4 == 0))
    }

    /// Normal-ordered product `self * other`.
    ///
    /// Per coordinate, `d^b x^c = sum_k C(b,k) c(c-1)...(c-k+1) x^(c-k) d^(b-k)`
    /// with rational `c`.
    pub fn multiply(&self, other: &DiffOp) -> DiffOp {
        assert_eq!(self.n, other.n, "operator dimension mismatch");
        let n = self.n;
        let mut out = DiffOp::zero(n);
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                let base = ca * cb;
                let expansions: Vec<Vec<(u32, BigRational)>> =
                    (0..n).map(|i| leibniz_expansion(ka.dexp[i], kb.xexp[i])).collect();
                let mut xexp = vec![0i32; n];
                let mut dexp = vec![0u32; n];
                expand_into(&mut out, &expansions, ka, kb, 0, &base, &mut xexp, &mut dexp);
            }
        }
        out
    }

    /// `self * other - other * self`.
    pub fn commutator(&self, other: &DiffOp) -> DiffOp {
        &self.multiply(other) - &other.multiply(self)
    }

    /// Formal transpose: `(c x^a d^b)^T = (-d)^b x^a c`, extended anti-multiplicatively.
    pub fn transpose(&self) -> DiffOp {
        let n = self.n;
        let mut out = DiffOp::zero(n);
        for (k, c) in &self.terms {
            let mut deriv = TermKey::constant(n);
            deriv.dexp = k.dexp.clone();
            let mut coords = TermKey::constant(n);
            coords.xexp = k.xexp.clone();
            let sign = if k.derivative_order() % 2 == 0 { GaussRat::one() } else { GaussRat::int(-1) };
            let d_part = DiffOp::from_key(n, deriv, sign);
            let x_part = DiffOp::from_key(n, coords, c.clone());
            out = &out + &d_part.multiply(&x_part);
        }
        out
    }

    /// Formal adjoint: transpose with conjugated coefficients.
    pub fn adjoint(&self) -> DiffOp {
        let t = self.transpose();
        let mut out = DiffOp::zero(self.n);
        for (k, c) in t.terms {
            out.add_term(k, c.conj());
        }
        out
    }

    fn from_key(n: usize, key: TermKey, coeff: GaussRat) -> DiffOp {
        let mut op = DiffOp::zero(n);
        op.add_term(key, coeff);
        op
    }

    /// `c` such that `self = c * other`, if one exists.
    pub fn ratio_to(&self, other: &DiffOp) -> Option<GaussRat> {
        if self.n != other.n || self.term_count() != other.term_count() {
            return None;
        }
        if self.is_zero() {
            return Some(GaussRat::zero());
        }
        let (k0, c0) = other.terms.iter().next()?;
        let ratio = self.terms.get(k0)?.checked_div(c0)?;
        (other.scale(&ratio) == *self).then_some(ratio)
    }
}

/// `(k, C(b,k) * falling(c/4, k))` for `k = 0..=b`, zeros skipped.
fn leibniz_expansion(b: u32, c_quarters: i32) -> Vec<(u32, BigRational)> {
    let c = BigRational::new(BigInt::from(c_quarters), BigInt::from(4));
    let mut out = Vec::with_capacity(b as usize + 1);
    let mut falling = BigRational::one();
    let mut binom = BigInt::one();
    for k in 0..=b {
        if k > 0 {
            falling *= &c - BigRational::from_integer(BigInt::from(k - 1));
            binom = binom * BigInt::from(b - k + 1) / BigInt::from(k);
        }
        if falling.is_zero() {
            break;
        }
        out.push((k, &falling * BigRational::from_integer(binom.clone())));
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn expand_into(
    out: &mut DiffOp,
    expansions: &[Vec<(u32, BigRational)>],
    ka: &TermKey,
    kb: &TermKey,
    i: usize,
    coeff: &GaussRat,
    xexp: &mut Vec<i32>,
    dexp: &mut Vec<u32>,
) {
    if i == expansions.len() {
        out.add_term(TermKey { dexp: dexp.clone(), xexp: xexp.clone() }, coeff.clone());
        return;
    }
    for (k, factor) in &expansions[i] {
        xexp[i] = ka.xexp[i] + kb.xexp[i] - 4 * (*k as i32);
        dexp[i] = ka.dexp[i] - k + kb.dexp[i];
        let next = if factor.is_one() { coeff.clone() } else { coeff.scale(factor) };
        expand_into(out, expansions, ka, kb, i + 1, &next, xexp, dexp);
    }
}

impl Add for &DiffOp {
    type Output = DiffOp;
    fn add(self, rhs: &DiffOp) -> DiffOp {
        assert_eq!(self.n, rhs.n, "operator dimension mismatch");
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }
}

impl Sub for &DiffOp {
    type Output = DiffOp;
    fn sub(self, rhs: &DiffOp) -> DiffOp {
        assert_eq!(self.n, rhs.n, "operator dimension mismatch");
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(k.clone(), -c);
        }
        out
    }
}

impl Neg for &DiffOp {
    type Output = DiffOp;
    fn neg(self) -> DiffOp {
        self.scale(&GaussRat::int(-1))
    }
}

impl Mul for &DiffOp {
    type Output = DiffOp;
    fn mul(self, rhs: &DiffOp) -> DiffOp {
        self.multiply(rhs)
    }
}

pub fn multiply(a: &DiffOp, b: &DiffOp) -> DiffOp {
    a.multiply(b)
}

pub fn commutator(a: &DiffOp, b: &DiffOp) -> DiffOp {
    a.commutator(b)
}
