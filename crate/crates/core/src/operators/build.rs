//! Operator constructors. Indices are 0-based.

use num_rational::BigRational;
use num_traits::Zero;

use super::diffop::DiffOp;
use super::gauss::GaussRat;
use crate::error::{Error, Result};
use crate::params::Parameters;

fn check_pair(i: usize, j: usize, n: usize) -> Result<()> {
    for idx in [i, j] {
        if idx >= n {
            return Err(Error::IndexOutOfRange { index: idx + 1, n });
        }
    }
    if i == j {
        return Err(Error::RepeatedIndex);
    }
    Ok(())
}

/// `rho_ij = (x_i x_j)^(1/4)`.
pub fn rho(i: usize, j: usize, n: usize) -> DiffOp {
    &DiffOp::x_pow(n, i, 1) * &DiffOp::x_pow(n, j, 1)
}

/// `rho_ij^2 = sqrt(x_i x_j)`; `rho_ii^2 = x_i`.
pub fn rho_sq(i: usize, j: usize, n: usize) -> DiffOp {
    &DiffOp::x_pow(n, i, 2) * &DiffOp::x_pow(n, j, 2)
}

/// `d_i - d_j`.
pub fn d_diff(i: usize, j: usize, n: usize) -> DiffOp {
    &DiffOp::d(n, i) - &DiffOp::d(n, j)
}

/// `x_i - x_j` as a multiplication operator.
pub fn x_diff(i: usize, j: usize, n: usize) -> DiffOp {
    &DiffOp::x(n, i) - &DiffOp::x(n, j)
}

/// `L_ij = 2 rho_ij (d_i - d_j) rho_ij`, normal ordered. `L_ii` is zero.
pub fn build_lhat(i: usize, j: usize, n: usize) -> Result<DiffOp> {
    if i == j && i < n {
        return Ok(DiffOp::zero(n));
    }
    check_pair(i, j, n)?;
    let r = rho(i, j, n);
    Ok((&(&r * &d_diff(i, j, n)) * &r).scale(&GaussRat::int(2)))
}

/// `x_k d_k`.
pub fn euler(k: usize, n: usize) -> DiffOp {
    &DiffOp::x(n, k) * &DiffOp::d(n, k)
}

/// `x_k d_k + d_k x_k`.
pub fn symmetric_euler(k: usize, n: usize) -> DiffOp {
    let (x, d) = (DiffOp::x(n, k), DiffOp::d(n, k));
    &(&x * &d) + &(&d * &x)
}

/// `J_ij = x_i d_j - x_j d_i`.
pub fn build_jhat(i: usize, j: usize, n: usize) -> Result<DiffOp> {
    check_pair(i, j, n)?;
    Ok(&(&DiffOp::x(n, i) * &DiffOp::d(n, j)) - &(&DiffOp::x(n, j) * &DiffOp::d(n, i)))
}

fn inverse_diff(params: &Parameters, i: usize, j: usize) -> BigRational {
    params.diff(i, j).recip()
}

/// `H_k = -sum_{l != k} rho_kl (d_k - d_l) (sqrt(x_k x_l)/alpha_kl) (d_k - d_l) rho_kl
///        - (i alpha / 2)(x_k d_k + d_k x_k)`.
pub fn build_hhat(k: usize, params: &Parameters) -> Result<DiffOp> {
    params.check_index(k)?;
    let n = params.n();
    let mut out = DiffOp::zero(n);
    for l in (0..n).filter(|&l| l != k) {
        let r = rho(k, l, n);
        let dd = d_diff(k, l, n);
        let middle = rho_sq(k, l, n).scale_rational(&inverse_diff(params, k, l));
        let term = &(&(&(&r * &dd) * &middle) * &dd) * &r;
        out = &out - &term;
    }
    if !params.alpha().is_zero() {
        let c = GaussRat::imag(-params.alpha() / BigRational::from_integer(2.into()));
        out = &out + &symmetric_euler(k, n).scale(&c);
    }
    Ok(out)
}

/// `sum_{j != i} J_ij^2 / alpha_ij`.
pub fn build_jhat_tail(i: usize, params: &Parameters) -> Result<DiffOp> {
    params.check_index(i)?;
    let n = params.n();
    let mut out = DiffOp::zero(n);
    for j in (0..n).filter(|&j| j != i) {
        let jh = build_jhat(i, j, n)?;
        out = &out + &(&jh * &jh).scale_rational(&inverse_diff(params, i, j));
    }
    Ok(out)
}

/// `alpha x_i d_i + sum_{j != i} J_ij^2 / alpha_ij`.
pub fn build_quantum_jalpha(i: usize, params: &Parameters) -> Result<DiffOp> {
    let tail = build_jhat_tail(i, params)?;
    Ok(&tail + &euler(i, params.n()).scale_rational(params.alpha()))
}

/// `sum_{j != i} x_ij (d_i d_j / alpha_ij) x_ij`.
pub fn build_dilation_tail(i: usize, params: &Parameters) -> Result<DiffOp> {
    params.check_index(i)?;
    let n = params.n();
    let mut out = DiffOp::zero(n);
    for j in (0..n).filter(|&j| j != i) {
        let x = x_diff(i, j, n);
        let dd = &DiffOp::d(n, i) * &DiffOp::d(n, j);
        out = &out + &(&(&x * &dd) * &x).scale_rational(&inverse_diff(params, i, j));
    }
    Ok(out)
}

/// `N_i = sum_{j != i} x_ij ((d_i - d_j)^2 / alpha_ij) x_ij`, the naive ordering.
pub fn build_naive_tail(i: usize, params: &Parameters) -> Result<DiffOp> {
    params.check_index(i)?;
    let n = params.n();
    let mut out = DiffOp::zero(n);
    for j in (0..n).filter(|&j| j != i) {
        let x = x_diff(i, j, n);
        let dd = d_diff(i, j, n);
        let d2 = &dd * &dd;
        out = &out + &(&(&x * &d2) * &x).scale_rational(&inverse_diff(params, i, j));
    }
    Ok(out)
}

/// Symmetrised alternative `sum_{j != i} (x_ij^2 d_ij^2 + d_ij^2 x_ij^2) / (2 alpha_ij)`.
pub fn build_weyl_tail(i: usize, params: &Parameters) -> Result<DiffOp> {
    params.check_index(i)?;
    let n = params.n();
    let mut out = DiffOp::zero(n);
    for j in (0..n).filter(|&j| j != i) {
        let x = x_diff(i, j, n);
        let x2 = &x * &x;
        let dd = d_diff(i, j, n);
        let d2 = &dd * &dd;
        let sym = &(&x2 * &d2) + &(&d2 * &x2);
        let c = inverse_diff(params, i, j) / BigRational::from_integer(2.into());
        out = &out + &sym.scale_rational(&c);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::diffop::TermKey;

    #[test]
    fn lhat_normal_form() {
        let l = build_lhat(0, 1, 2).unwrap();
        let mut expected = DiffOp::zero(2);
        expected.add_term(TermKey { dexp: vec![1, 0], xexp: vec![2, 2] }, GaussRat::int(2));
        expected.add_term(TermKey { dexp: vec![0, 1], xexp: vec![2, 2] }, GaussRat::int(-2));
        expected.add_term(TermKey { dexp: vec![0, 0], xexp: vec![-2, 2] }, GaussRat::ratio(1, 2));
        expected.add_term(TermKey { dexp: vec![0, 0], xexp: vec![2, -2] }, GaussRat::ratio(-1, 2));
        assert_eq!(l, expected);
        assert_eq!(l.term_count(), 4);
    }

    #[test]
    fn lhat_is_antisymmetric_and_local() {
        let (a, b) = (build_lhat(0, 1, 3).unwrap(), build_lhat(1, 0, 3).unwrap());
        assert_eq!(a, -&b);
        assert!(a.commutator(&DiffOp::x(3, 2)).is_zero());
        assert!(build_lhat(1, 1, 3).unwrap().is_zero());
        assert!(build_lhat(0, 3, 3).is_err());
    }

    #[test]
    fn lhat_so3_relation() {
        let l12 = build_lhat(0, 1, 3).unwrap();
        let l23 = build_lhat(1, 2, 3).unwrap();
        let l13 = build_lhat(0, 2, 3).unwrap();
        assert_eq!(l12.commutator(&l23), -&l13);
    }

    #[test]
    fn hhat_without_alpha_is_real() {
        let params = Parameters::from_ints(&[1, 2, 4], 0).unwrap();
        for k in 0..3 {
            assert!(build_hhat(k, &params).unwrap().is_real());
        }
        let with_alpha = Parameters::from_ints(&[1, 2, 4], 1).unwrap();
        assert!(!build_hhat(0, &with_alpha).unwrap().is_real());
    }

    #[test]
    fn hhat_pair_commutes() {
        let params = Parameters::from_ints(&[1, 2, 4], 1).unwrap();
        let h1 = build_hhat(0, &params).unwrap();
        let h2 = build_hhat(1, &params).unwrap();
        assert!(h1.commutator(&h2).is_zero());
    }

    #[test]
    fn hhat_sum_leaves_only_the_dilation_part() {
        let params = Parameters::from_ints(&[1, 2, 4], 3).unwrap();
        let n = params.n();
        let mut sum = DiffOp::zero(n);
        let mut dil = DiffOp::zero(n);
        for k in 0..n {
            sum = &sum + &build_hhat(k, &params).unwrap();
            dil = &dil + &symmetric_euler(k, n);
        }
        assert_eq!(sum, dil.scale(&GaussRat::imag(BigRational::new((-3).into(), 2.into()))));
    }

    #[test]
    fn quantum_jalpha_pair_commutes_for_n2() {
        let params = Parameters::from_ints(&[1, 3], 2).unwrap();
        let a = build_quantum_jalpha(0, &params).unwrap();
        let b = build_quantum_jalpha(1, &params).unwrap();
        assert!(a.commutator(&b).is_zero());
    }
}
