use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::parse::{format_rational, rational_to_f64};

/// System constants: the pairwise distinct `alpha_1..alpha_N` and the scalar `alpha`.
///
/// Values are held exactly; floating-point copies are cached for the numeric paths.
#[derive(Debug, Clone, PartialEq)]
pub struct Parameters {
    alphas: Vec<BigRational>,
    alpha: BigRational,
    alphas_f64: Vec<f64>,
    alpha_f64: f64,
}

/// Validates and builds [`Parameters`].
pub fn make_parameters(alphas: Vec<BigRational>, alpha: BigRational) -> Result<Parameters> {
    if alphas.len() < 2 {
        return Err(Error::TooFewCoordinates { needed: 2, found: alphas.len() });
    }
    for i in 0..alphas.len() {
        for j in i + 1..alphas.len() {
            if alphas[i] == alphas[j] {
                return Err(Error::DuplicateAlpha { i: i + 1, j: j + 1 });
            }
        }
    }
    let alphas_f64: Vec<f64> = alphas.iter().map(rational_to_f64).collect();
    if let Some(i) = alphas_f64.iter().position(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument(format!("alpha_{} is outside the floating-point range", i + 1)));
    }
    // Distinct rationals can still collide after rounding.
    for i in 0..alphas_f64.len() {
        for j in i + 1..alphas_f64.len() {
            if alphas_f64[i] == alphas_f64[j] {
                return Err(Error::DuplicateAlpha { i: i + 1, j: j + 1 });
            }
        }
    }
    let alpha_f64 = rational_to_f64(&alpha);
    if !alpha_f64.is_finite() {
        return Err(Error::InvalidArgument("scalar alpha is outside the floating-point range".into()));
    }
    Ok(Parameters { alphas, alpha, alphas_f64, alpha_f64 })
}

impl Parameters {
    pub fn new(alphas: Vec<BigRational>, alpha: BigRational) -> Result<Self> {
        make_parameters(alphas, alpha)
    }

    /// Builds from floats; each float is converted to its exact binary rational.
    pub fn from_f64(alphas: &[f64], alpha: f64) -> Result<Self> {
        let exact = |v: f64| {
            BigRational::from_float(v)
                .ok_or_else(|| Error::InvalidArgument(format!("non-finite parameter {v}")))
        };
        let alphas = alphas.iter().map(|&v| exact(v)).collect::<Result<Vec<_>>>()?;
        make_parameters(alphas, exact(alpha)?)
    }

    /// Integer alphas and alpha, the common test case.
    pub fn from_ints(alphas: &[i64], alpha: i64) -> Result<Self> {
        make_parameters(
            alphas.iter().map(|&a| BigRational::from_integer(a.into())).collect(),
            BigRational::from_integer(alpha.into()),
        )
    }

    pub fn n(&self) -> usize {
        self.alphas.len()
    }

    pub fn alphas(&self) -> &[BigRational] {
        &self.alphas
    }

    pub fn alpha(&self) -> &BigRational {
        &self.alpha
    }

    pub fn alphas_f64(&self) -> &[f64] {
        &self.alphas_f64
    }

    pub fn alpha_f64(&self) -> f64 {
        self.alpha_f64
    }

    /// `alpha_i - alpha_j` (0-based indices), exact.
    pub fn diff(&self, i: usize, j: usize) -> BigRational {
        &self.alphas[i] - &self.alphas[j]
    }

    pub fn diff_f64(&self, i: usize, j: usize) -> f64 {
        self.alphas_f64[i] - self.alphas_f64[j]
    }

    /// Same alphas with a different scalar alpha.
    pub fn with_alpha(&self, alpha: BigRational) -> Self {
        let alpha_f64 = rational_to_f64(&alpha);
        Parameters { alpha, alpha_f64, ..self.clone() }
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i < self.n() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index: i + 1, n: self.n() })
        }
    }

    pub fn alphas_text(&self) -> Vec<String> {
        self.alphas.iter().map(format_rational).collect()
    }

    pub fn alpha_text(&self) -> String {
        format_rational(&self.alpha)
    }

    pub fn has_zero_alpha(&self) -> bool {
        self.alphas.iter().any(Zero::is_zero)
    }
}

/// `1/(a_ik a_kl) + 1/(a_kl a_li) + 1/(a_li a_ik)` in exact arithmetic.
pub fn cyclic_identity_exact(params: &Parameters, i: usize, k: usize, l: usize) -> Result<BigRational> {
    for idx in [i, k, l] {
        params.check_index(idx)?;
    }
    if i == k || k == l || l == i {
        return Err(Error::RepeatedIndex);
    }
    let (a_ik, a_kl, a_li) = (params.diff(i, k), params.diff(k, l), params.diff(l, i));
    let one = |a: &BigRational, b: &BigRational| (a * b).recip();
    Ok(one(&a_ik, &a_kl) + one(&a_kl, &a_li) + one(&a_li, &a_ik))
}

/// Floating-point evaluation of the cyclic identity.
pub fn cyclic_identity_residual(params: &Parameters, i: usize, k: usize, l: usize) -> Result<f64> {
    for idx in [i, k, l] {
        params.check_index(idx)?;
    }
    if i == k || k == l || l == i {
        return Err(Error::RepeatedIndex);
    }
    let (a_ik, a_kl, a_li) = (params.diff_f64(i, k), params.diff_f64(k, l), params.diff_f64(l, i));
    Ok(1.0 / (a_ik * a_kl) + 1.0 / (a_kl * a_li) + 1.0 / (a_li * a_ik))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    #[test]
    fn rejects_values_beyond_f64() {
        let huge = crate::parse::parse_rational("1e670").unwrap();
        let other = crate::parse::parse_rational("3e670").unwrap();
        let err = Parameters::new(vec![huge.clone(), other], BigRational::zero()).unwrap_err();
        assert!(matches!(err, Error::InvalidArgument(_)), "{err}");
        let small = vec![BigRational::zero(), BigRational::from_integer(1.into())];
        assert!(Parameters::new(small, huge).is_err());
    }

    #[test]
    fn constructs_and_validates() {
        let p = Parameters::from_ints(&[1, 2, 4], 0).unwrap();
        assert_eq!(p.n(), 3);
        let p = Parameters::from_ints(&[1, 2], 3).unwrap();
        assert_eq!((p.n(), p.alpha_f64()), (2, 3.0));
        assert_eq!(
            Parameters::from_ints(&[1, 1, 3], 0),
            Err(Error::DuplicateAlpha { i: 1, j: 2 })
        );
        assert_eq!(
            Parameters::from_ints(&[1], 0),
            Err(Error::TooFewCoordinates { needed: 2, found: 1 })
        );
    }

    #[test]
    fn cyclic_identity_hand_values() {
        let p = Parameters::from_ints(&[1, 2, 4], 0).unwrap();
        assert!(cyclic_identity_exact(&p, 0, 1, 2).unwrap().is_zero());
        assert_eq!(cyclic_identity_residual(&p, 0, 1, 2).unwrap(), 0.5 - 1.0 / 6.0 - 1.0 / 3.0);
        let p = Parameters::from_ints(&[0, 5, 7], 0).unwrap();
        for (i, k, l) in [(0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)] {
            assert!(cyclic_identity_exact(&p, i, k, l).unwrap().is_zero());
        }
        assert_eq!(cyclic_identity_exact(&p, 0, 0, 2), Err(Error::RepeatedIndex));
    }
}
