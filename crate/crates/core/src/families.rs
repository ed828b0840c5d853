//! Constructors for the conserved-quantity families and Hamiltonians.
//!
//! Indices are 0-based here; observable names are 1-based (`F1`, `G2`, ...).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::observable::{Expr, Observable};
use crate::params::Parameters;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum HamiltonianKind {
    /// `|p|^2 / 2`
    EllipsoidGeodesic,
    /// `|p|^2 / 2 + sum alpha_i x_i^2 / 2`
    Neumann,
    /// Two-body quartic reduction, `(P^2 q^2/4 - p^2 q^2) / (2 mu)`.
    QuarticN2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FamilyKind {
    /// `F_i = p_i^2 + sum' J_ij^2 / alpha_ij`
    F,
    /// `G_i = x_i^2 + sum' J_ij^2 / alpha_ij`
    G,
    /// `J_i = alpha x_i p_i + sum' J_ij^2 / alpha_ij`
    Jalpha,
    /// `sum_{l != k} x_k x_l (p_k - p_l)^2 / alpha_kl + alpha x_k p_k`
    Htilde,
    /// `sum_{l != k} p_k (x_k - x_l)^2 p_l / alpha_kl - alpha x_k p_k`
    H,
    /// `J_ij = x_i p_j - x_j p_i`
    AngularJ,
    /// `L_ij = -2 sqrt(x_i x_j) (p_i - p_j)`
    SqrtL,
    /// `sum' L_ij^2 / alpha_ij` with the square-root generators.
    SqrtLTail,
    Hamiltonian(HamiltonianKind),
}

impl FamilyKind {
    pub fn label(&self) -> &'static str {
        match self {
            FamilyKind::F => "F",
            FamilyKind::G => "G",
            FamilyKind::Jalpha => "Jalpha",
            FamilyKind::Htilde => "Htilde",
            FamilyKind::H => "H",
            FamilyKind::AngularJ => "J",
            FamilyKind::SqrtL => "L",
            FamilyKind::SqrtLTail => "sqrtL-tails",
            FamilyKind::Hamiltonian(HamiltonianKind::EllipsoidGeodesic) => "H_geodesic",
            FamilyKind::Hamiltonian(HamiltonianKind::Neumann) => "H_neumann",
            FamilyKind::Hamiltonian(HamiltonianKind::QuarticN2) => "H_quartic",
        }
    }
}

fn angular_expr(i: usize, j: usize) -> Expr {
    Expr::Sum(vec![
        Expr::Product(vec![Expr::x(i), Expr::p(j)]),
        Expr::Neg(Box::new(Expr::Product(vec![Expr::x(j), Expr::p(i)]))),
    ])
}

fn sqrt_l_expr(i: usize, j: usize) -> Expr {
    Expr::Product(vec![
        Expr::c(-2.0),
        Expr::x(i).sqrt(),
        Expr::x(j).sqrt(),
        Expr::Sum(vec![Expr::p(i), Expr::Neg(Box::new(Expr::p(j)))]),
    ])
}

fn diff(a: Expr, b: Expr) -> Expr {
    Expr::Sum(vec![a, Expr::Neg(Box::new(b))])
}

/// `sum_{j != i} gen(i, j)^2 / alpha_ij`
fn tail(i: usize, params: &Parameters, generator: fn(usize, usize) -> Expr) -> Vec<Expr> {
    (0..params.n())
        .filter(|&j| j != i)
        .map(|j| Expr::Product(vec![Expr::c(1.0 / params.diff_f64(i, j)), generator(i, j).powi(2)]))
        .collect()
}

fn xp(i: usize) -> Expr {
    Expr::Product(vec![Expr::x(i), Expr::p(i)])
}

pub fn make_f(i: usize, params: &Parameters) -> Result<Observable> {
    params.check_index(i)?;
    let mut terms = vec![Expr::p(i).powi(2)];
    terms.extend(tail(i, params, angular_expr));
    Ok(Observable::new(format!("F{}", i + 1), params.n(), Expr::Sum(terms)))
}

pub fn make_g(i: usize, params: &Parameters) -> Result<Observable> {
    params.check_index(i)?;
    let mut terms = vec![Expr::x(i).powi(2)];
    terms.extend(tail(i, params, angular_expr));
    Ok(Observable::new(format!("G{}", i + 1), params.n(), Expr::Sum(terms)))
}

pub fn make_jalpha(i: usize, params: &Parameters) -> Result<Observable> {
    params.check_index(i)?;
    let mut terms = vec![Expr::Product(vec![Expr::c(params.alpha_f64()), xp(i)])];
    terms.extend(tail(i, params, angular_expr));
    Ok(Observable::new(format!("Jalpha{}", i + 1), params.n(), Expr::Sum(terms)))
}

pub fn make_htilde(k: usize, params: &Parameters) -> Result<Observable> {
    params.check_index(k)?;
    let mut terms: Vec<Expr> = (0..params.n())
        .filter(|&l| l != k)
        .map(|l| {
            Expr::Product(vec![
                Expr::c(1.0 / params.diff_f64(k, l)),
                Expr::x(k),
                Expr::x(l),
                diff(Expr::p(k), Expr::p(l)).powi(2),
            ])
        })
        .collect();
    terms.push(Expr::Product(vec![Expr::c(params.alpha_f64()), xp(k)]));
    Ok(Observable::new(format!("Htilde{}", k + 1), params.n(), Expr::Sum(terms)))
}

pub fn make_h(k: usize, params: &Parameters) -> Result<Observable> {
    params.check_index(k)?;
    let mut terms: Vec<Expr> = (0..params.n())
        .filter(|&l| l != k)
        .map(|l| {
            Expr::Product(vec![
                Expr::c(1.0 / params.diff_f64(k, l)),
                Expr::p(k),
                diff(Expr::x(k), Expr::x(l)).powi(2),
                Expr::p(l),
            ])
        })
        .collect();
    terms.push(Expr::Product(vec![Expr::c(-params.alpha_f64()), xp(k)]));
    Ok(Observable::new(format!("H{}", k + 1), params.n(), Expr::Sum(terms)))
}

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

pub fn make_angular_j(i: usize, j: usize, n: usize) -> Result<Observable> {
    check_pair(i, j, n)?;
    Ok(Observable::new(format!("J{}{}", i + 1, j + 1), n, angular_expr(i, j)))
}

/// `L_ij = -2 sqrt(x_i x_j)(p_i - p_j)`; defined for `x_i, x_j > 0`.
pub fn make_sqrt_l(i: usize, j: usize, n: usize) -> Result<Observable> {
    check_pair(i, j, n)?;
    Ok(Observable::new(format!("L{}{}", i + 1, j + 1), n, sqrt_l_expr(i, j)))
}

/// `sum_{j != i} L_ij^2 / alpha_ij` with the square-root generators.
pub fn make_sqrt_l_tail(i: usize, params: &Parameters) -> Result<Observable> {
    params.check_index(i)?;
    Ok(Observable::new(format!("Ltail{}", i + 1), params.n(), Expr::Sum(tail(i, params, sqrt_l_expr))))
}

pub fn make_hamiltonian(kind: HamiltonianKind, params: &Parameters) -> Result<Observable> {
    let n = params.n();
    let kinetic = (0..n).map(|i| Expr::Product(vec![Expr::c(0.5), Expr::p(i).powi(2)]));
    match kind {
        HamiltonianKind::EllipsoidGeodesic => {
            Ok(Observable::new("H_geodesic", n, Expr::Sum(kinetic.collect())))
        }
        HamiltonianKind::Neumann => {
            let potential = params
                .alphas_f64()
                .iter()
                .enumerate()
                .map(|(i, &a)| Expr::Product(vec![Expr::c(0.5 * a), Expr::x(i).powi(2)]));
            Ok(Observable::new("H_neumann", n, Expr::Sum(kinetic.chain(potential).collect())))
        }
        HamiltonianKind::QuarticN2 => {
            if n != 2 {
                return Err(Error::InvalidArgument(format!("quartic Hamiltonian needs N = 2, got {n}")));
            }
            let mu = params.alphas_f64()[0] * params.alphas_f64()[1];
            if mu == 0.0 {
                return Err(Error::InvalidArgument("mu = alpha_1 alpha_2 must be nonzero".into()));
            }
            Ok(quartic_observable(mu))
        }
    }
}

/// `(P^2/4 - p^2) q^2 / (2 mu)` with `q = x2 - x1`, `p = (p2 - p1)/2`, `P = p1 + p2`.
pub fn quartic_observable(mu: f64) -> Observable {
    let q = diff(Expr::x(1), Expr::x(0));
    let big_p = Expr::Sum(vec![Expr::p(0), Expr::p(1)]);
    let small_p = Expr::Product(vec![Expr::c(0.5), diff(Expr::p(1), Expr::p(0))]);
    let bracket = diff(Expr::Product(vec![Expr::c(0.25), big_p.powi(2)]), small_p.powi(2));
    Observable::new("H_quartic", 2, Expr::Product(vec![Expr::c(0.5 / mu), bracket, q.powi(2)]))
}

/// `sum_k H_k / alpha_k`; needs every `alpha_k != 0`.
pub fn make_h_over_alpha_sum(params: &Parameters) -> Result<Observable> {
    if params.has_zero_alpha() {
        return Err(Error::InvalidArgument("sum H_k/alpha_k needs nonzero alphas".into()));
    }
    let terms = (0..params.n())
        .map(|k| {
            let hk = make_h(k, params)?;
            Ok(Expr::Product(vec![Expr::c(1.0 / params.alphas_f64()[k]), hk.expr().clone()]))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Observable::new("sum_H_over_alpha", params.n(), Expr::Sum(terms)))
}

/// The whole one-index family of `kind` (N members).
pub fn family(kind: FamilyKind, params: &Parameters) -> Result<Vec<Observable>> {
    let n = params.n();
    let build: fn(usize, &Parameters) -> Result<Observable> = match kind {
        FamilyKind::F => make_f,
        FamilyKind::G => make_g,
        FamilyKind::Jalpha => make_jalpha,
        FamilyKind::Htilde => make_htilde,
        FamilyKind::H => make_h,
        FamilyKind::SqrtLTail => make_sqrt_l_tail,
        FamilyKind::AngularJ | FamilyKind::SqrtL => {
            let pair: fn(usize, usize, usize) -> Result<Observable> =
                if kind == FamilyKind::AngularJ { make_angular_j } else { make_sqrt_l };
            let mut out = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    out.push(pair(i, j, n)?);
                }
            }
            return Ok(out);
        }
        FamilyKind::Hamiltonian(h) => return Ok(vec![make_hamiltonian(h, params)?]),
    };
    (0..n).map(|i| build(i, params)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brackets::poisson;
    use crate::phase::PhasePoint;

    fn pt(x: &[f64], p: &[f64]) -> PhasePoint {
        PhasePoint::new(x.to_vec(), p.to_vec()).unwrap()
    }

    #[test]
    fn f_and_g_hand_values() {
        let params = Parameters::from_ints(&[1, 2], 0).unwrap();
        let q = pt(&[1.0, 0.0], &[0.0, 1.0]);
        assert_eq!(make_f(0, &params).unwrap().eval(&q).unwrap(), -1.0);
        assert_eq!(make_f(1, &params).unwrap().eval(&q).unwrap(), 2.0);
        assert_eq!(make_g(0, &params).unwrap().eval(&q).unwrap(), 0.0);
        assert_eq!(make_g(1, &params).unwrap().eval(&q).unwrap(), 1.0);
    }

    #[test]
    fn jalpha_hand_values() {
        let params = Parameters::from_ints(&[1, 2], 3).unwrap();
        let q = pt(&[1.0, 0.0], &[0.0, 1.0]);
        assert_eq!(make_jalpha(0, &params).unwrap().eval(&q).unwrap(), -1.0);
        assert_eq!(make_jalpha(1, &params).unwrap().eval(&q).unwrap(), 1.0);
    }

    #[test]
    fn htilde_and_h_hand_values() {
        let params = Parameters::from_ints(&[1, 3], 0).unwrap();
        let q = pt(&[1.0, 2.0], &[1.0, 0.0]);
        assert_eq!(make_htilde(0, &params).unwrap().eval(&q).unwrap(), -1.0);
        assert_eq!(make_htilde(1, &params).unwrap().eval(&q).unwrap(), 1.0);
        let q = pt(&[1.0, 2.0], &[1.0, 1.0]);
        assert_eq!(make_h(0, &params).unwrap().eval(&q).unwrap(), -0.5);
        assert_eq!(make_h(1, &params).unwrap().eval(&q).unwrap(), 0.5);
    }

    #[test]
    fn sqrt_l_values_and_antisymmetry() {
        let q = pt(&[1.0, 4.0], &[2.0, 1.0]);
        let l12 = make_sqrt_l(0, 1, 2).unwrap();
        let l21 = make_sqrt_l(1, 0, 2).unwrap();
        assert_eq!(l12.eval(&q).unwrap(), -4.0);
        assert_eq!(l21.eval(&q).unwrap(), 4.0);
        assert_eq!(l12.eval(&pt(&[0.7, 1.3], &[0.4, 0.4])).unwrap(), 0.0);
        assert!(make_sqrt_l(0, 0, 2).is_err());
    }

    #[test]
    fn sqrt_l_bracket_realises_so_n() {
        let q = pt(&[1.0, 1.0, 1.0], &[1.0, 0.0, 0.0]);
        let l12 = make_sqrt_l(0, 1, 3).unwrap();
        let l23 = make_sqrt_l(1, 2, 3).unwrap();
        let l13 = make_sqrt_l(0, 2, 3).unwrap();
        let b = poisson(&l12, &l23, &q).unwrap();
        assert!((b - 2.0).abs() < 1e-14);
        assert!((b + l13.eval(&q).unwrap()).abs() < 1e-14);
    }

    #[test]
    fn hamiltonian_values() {
        let params = Parameters::from_ints(&[1, 2], 0).unwrap();
        let q = pt(&[1.0, 0.0], &[0.0, 1.0]);
        let h = make_hamiltonian(HamiltonianKind::Neumann, &params).unwrap();
        assert_eq!(h.eval(&q).unwrap(), 1.0);
        let g = make_hamiltonian(HamiltonianKind::EllipsoidGeodesic, &params).unwrap();
        assert_eq!(g.eval(&pt(&[0.3, 0.2], &[0.0, 0.0])).unwrap(), 0.0);
        let three = Parameters::from_ints(&[1, 2, 3], 0).unwrap();
        assert!(make_hamiltonian(HamiltonianKind::QuarticN2, &three).is_err());
    }

    #[test]
    fn family_sizes_and_names() {
        let params = Parameters::from_ints(&[1, 2, 4, 8], 0).unwrap();
        assert_eq!(family(FamilyKind::F, &params).unwrap().len(), 4);
        assert_eq!(family(FamilyKind::AngularJ, &params).unwrap().len(), 6);
        let names: Vec<_> = family(FamilyKind::G, &params).unwrap().iter().map(|o| o.name().to_string()).collect();
        assert_eq!(names, ["G1", "G2", "G3", "G4"]);
        assert!(make_f(4, &params).is_err());
    }
}
