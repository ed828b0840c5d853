use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::parse::format_rational;

/// Exact `re + im i` with rational parts.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GaussRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRat { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        GaussRat { re, im: BigRational::zero() }
    }

    pub fn imag(im: BigRational) -> Self {
        GaussRat { re: BigRational::zero(), im }
    }

    pub fn int(v: i64) -> Self {
        Self::real(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Self::real(BigRational::new(n.into(), d.into()))
    }

    pub fn zero() -> Self {
        Self::real(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::real(BigRational::one())
    }

    pub fn i() -> Self {
        Self::imag(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussRat { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        GaussRat { re: &self.re * q, im: &self.im * q }
    }

    /// `self / other`, `None` when `other` is zero.
    pub fn checked_div(&self, other: &GaussRat) -> Option<GaussRat> {
        let norm = &other.re * &other.re + &other.im * &other.im;
        if norm.is_zero() {
            return None;
        }
        let num = self * &other.conj();
        Some(GaussRat { re: num.re / &norm, im: num.im / norm })
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (crate::parse::rational_to_f64(&self.re), crate::parse::rational_to_f64(&self.im))
    }
}

impl Add for &GaussRat {
    type Output = GaussRat;
    fn add(self, rhs: &GaussRat) -> GaussRat {
        GaussRat { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl Sub for &GaussRat {
    type Output = GaussRat;
    fn sub(self, rhs: &GaussRat) -> GaussRat {
        GaussRat { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl Mul for &GaussRat {
    type Output = GaussRat;
    fn mul(self, rhs: &GaussRat) -> GaussRat {
        if self.im.is_zero() && rhs.im.is_zero() {
            return GaussRat::real(&self.re * &rhs.re);
        }
        GaussRat {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for &GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        GaussRat { re: -self.re.clone(), im: -self.im.clone() }
    }
}

impl AddAssign<&GaussRat> for GaussRat {
    fn add_assign(&mut self, rhs: &GaussRat) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

/// `a/b`, `c/d i`, or `a/b + c/d i` (`a/b - c/d i` for negative imaginary part).
impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", format_rational(&self.re)),
            (true, false) => write!(f, "{} i", format_rational(&self.im)),
            (false, false) => {
                let sign = if self.im.is_negative() { '-' } else { '+' };
                write!(f, "{} {sign} {} i", format_rational(&self.re), format_rational(&self.im.abs()))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_arithmetic() {
        let a = GaussRat::new(BigRational::new(1.into(), 2.into()), BigRational::new(3.into(), 4.into()));
        let b = GaussRat::i();
        assert_eq!(&b * &b, GaussRat::int(-1));
        let q = a.checked_div(&a).unwrap();
        assert_eq!(q, GaussRat::one());
        assert!(a.checked_div(&GaussRat::zero()).is_none());
        assert_eq!(&a - &a, GaussRat::zero());
    }

    #[test]
    fn display_forms() {
        assert_eq!(GaussRat::ratio(-3, 6).to_string(), "-1/2");
        assert_eq!(GaussRat::imag(BigRational::new((-1).into(), 2.into())).to_string(), "-1/2 i");
        let z = GaussRat::new(BigRational::new(1.into(), 2.into()), BigRational::new((-3).into(), 4.into()));
        assert_eq!(z.to_string(), "1/2 - 3/4 i");
        assert_eq!(GaussRat::int(2).to_string(), "2");
    }
}
