//! Canonical Poisson bracket, the constrained (Dirac) bracket, and batch
//! commutativity checks over seeded random points.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::observable::{Expr, Observable};
use crate::params::Parameters;
use crate::phase::PhasePoint;
use crate::sampling;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ConstraintKind {
    /// `|x|^2 = 1`
    Sphere,
    /// `sum x_i^2 / alpha_i = 1`
    Ellipsoid,
}

/// Holonomic constraint `phi = 0` with its hidden partner `Pi = {phi, H}`-type
/// tangency condition, defining a Dirac bracket.
#[derive(Debug, Clone)]
pub struct ConstraintPair {
    pub phi: Observable,
    pub pi: Observable,
    pub kind: ConstraintKind,
    /// Axis weights `c_i`: `phi = (sum x_i^2/c_i - 1)/2`, `Pi = sum x_i p_i / c_i`.
    weights: Vec<f64>,
}

impl ConstraintPair {
    pub fn sphere(n: usize) -> Self {
        Self::with_weights(ConstraintKind::Sphere, vec![1.0; n])
    }

    /// Requires every `alpha_i > 0`.
    pub fn ellipsoid(params: &Parameters) -> Result<Self> {
        for (index, &value) in params.alphas_f64().iter().enumerate() {
            if !(value > 0.0) {
                return Err(Error::NonPositiveAxis { index: index + 1, value });
            }
        }
        Ok(Self::with_weights(ConstraintKind::Ellipsoid, params.alphas_f64().to_vec()))
    }

    pub fn new(kind: ConstraintKind, params: &Parameters) -> Result<Self> {
        match kind {
            ConstraintKind::Sphere => Ok(Self::sphere(params.n())),
            ConstraintKind::Ellipsoid => Self::ellipsoid(params),
        }
    }

    fn with_weights(kind: ConstraintKind, weights: Vec<f64>) -> Self {
        let n = weights.len();
        let phi = Expr::Sum(
            (0..n)
                .map(|i| Expr::Product(vec![Expr::c(0.5 / weights[i]), Expr::x(i).powi(2)]))
                .chain(std::iter::once(Expr::c(-0.5)))
                .collect(),
        );
        let pi = Expr::Sum(
            (0..n)
                .map(|i| Expr::Product(vec![Expr::c(1.0 / weights[i]), Expr::x(i), Expr::p(i)]))
                .collect(),
        );
        ConstraintPair {
            phi: Observable::new("phi", n, phi),
            pi: Observable::new("Pi", n, pi),
            kind,
            weights,
        }
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `phi(x)` without building duals.
    pub fn phi_value(&self, x: &[f64]) -> f64 {
        0.5 * (x.iter().zip(&self.weights).map(|(v, c)| v * v / c).sum::<f64>() - 1.0)
    }

    pub fn pi_value(&self, x: &[f64], p: &[f64]) -> f64 {
        x.iter().zip(p).zip(&self.weights).map(|((a, b), c)| a * b / c).sum()
    }

    /// `grad phi = (x_i / c_i)`.
    pub fn phi_gradient(&self, x: &[f64]) -> Vec<f64> {
        x.iter().zip(&self.weights).map(|(v, c)| v / c).collect()
    }

    /// `J = {phi, Pi} = sum x_i^2 / c_i^2`.
    pub fn j_value(&self, x: &[f64]) -> f64 {
        x.iter().zip(&self.weights).map(|(v, c)| v * v / (c * c)).sum()
    }

    /// Rescales `x` along its ray onto `phi = 0` and removes the component
    /// of `p` along `grad phi` so that `Pi = 0`.
    pub fn project(&self, pt: &PhasePoint) -> Result<PhasePoint> {
        if pt.n() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), found: pt.n() });
        }
        let quad: f64 = pt.x.iter().zip(&self.weights).map(|(v, c)| v * v / c).sum();
        if !(quad > 0.0) || !quad.is_finite() {
            return Err(Error::DegeneratePoint);
        }
        let s = quad.sqrt();
        let x: Vec<f64> = pt.x.iter().map(|v| v / s).collect();
        let g = self.phi_gradient(&x);
        let g2: f64 = g.iter().map(|v| v * v).sum();
        let along = pt.p.iter().zip(&g).map(|(a, b)| a * b).sum::<f64>() / g2;
        let p = pt.p.iter().zip(&g).map(|(v, gi)| v - along * gi).collect();
        Ok(PhasePoint { x, p })
    }
}

/// Projects `pt` onto the constraint surface of `kind`.
pub fn project_to_surface(kind: ConstraintKind, params: &Parameters, pt: &PhasePoint) -> Result<PhasePoint> {
    ConstraintPair::new(kind, params)?.project(pt)
}

/// `sum_i df/dx_i dg/dp_i - df/dp_i dg/dx_i` from precomputed gradients.
pub fn poisson_from_grads(gf: &[f64], gg: &[f64]) -> f64 {
    let n = gf.len() / 2;
    (0..n).map(|i| gf[i] * gg[n + i] - gf[n + i] * gg[i]).sum()
}

/// Sum of absolute values of the terms of the bracket; the floating-point
/// cancellation scale.
fn poisson_magnitude(gf: &[f64], gg: &[f64]) -> f64 {
    let n = gf.len() / 2;
    (0..n).map(|i| (gf[i] * gg[n + i]).abs() + (gf[n + i] * gg[i]).abs()).sum()
}

fn check_arity(f: &Observable, g: &Observable) -> Result<()> {
    if f.arity() != g.arity() {
        return Err(Error::DimensionMismatch { expected: f.arity(), found: g.arity() });
    }
    Ok(())
}

pub fn poisson(f: &Observable, g: &Observable, pt: &PhasePoint) -> Result<f64> {
    check_arity(f, g)?;
    Ok(poisson_from_grads(&f.grad(pt)?, &g.grad(pt)?))
}

fn dirac_from_grads(gf: &[f64], gg: &[f64], gphi: &[f64], gpi: &[f64]) -> Result<f64> {
    let j = poisson_from_grads(gphi, gpi);
    if j.abs() < 1e-12 {
        return Err(Error::SingularConstraint(j.abs()));
    }
    let fg = poisson_from_grads(gf, gg);
    let f_phi = poisson_from_grads(gf, gphi);
    let pi_g = poisson_from_grads(gpi, gg);
    let f_pi = poisson_from_grads(gf, gpi);
    let phi_g = poisson_from_grads(gphi, gg);
    Ok(fg + f_phi * pi_g / j - f_pi * phi_g / j)
}

/// `{f,g}_D = {f,g} + {f,phi} {Pi,g} / J - {f,Pi} {phi,g} / J` with `J = {phi, Pi}`.
pub fn dirac(f: &Observable, g: &Observable, c: &ConstraintPair, pt: &PhasePoint) -> Result<f64> {
    check_arity(f, g)?;
    check_arity(f, &c.phi)?;
    dirac_from_grads(&f.grad(pt)?, &g.grad(pt)?, &c.phi.grad(pt)?, &c.pi.grad(pt)?)
}

/// Gradient of `{f, g}` from second derivatives of both operands.
pub fn poisson_gradient(f: &Observable, g: &Observable, pt: &PhasePoint) -> Result<Vec<f64>> {
    check_arity(f, g)?;
    let n = f.arity();
    let (_, gf, hf) = f.hessian(pt)?;
    let (_, gg, hg) = g.hessian(pt)?;
    Ok((0..2 * n)
        .map(|a| {
            (0..n)
                .map(|i| {
                    hf[a][i] * gg[n + i] + gf[i] * hg[a][n + i] - hf[a][n + i] * gg[i] - gf[n + i] * hg[a][i]
                })
                .sum()
        })
        .collect())
}

/// `{{f,g},h} + {{g,h},f} + {{h,f},g}` and the magnitude of its terms.
///
/// Nested brackets use the exact gradient of the inner bracket, assembled from
/// nested-dual Hessians: `d{f,g}/dz = H_f J grad g - H_g J grad f`.
pub fn jacobi_residual(f: &Observable, g: &Observable, h: &Observable, pt: &PhasePoint) -> Result<(f64, f64)> {
    let (gf, gg, gh) = (f.grad(pt)?, g.grad(pt)?, h.grad(pt)?);
    let fg = poisson_gradient(f, g, pt)?;
    let gh_ = poisson_gradient(g, h, pt)?;
    let hf = poisson_gradient(h, f, pt)?;
    let terms = [(fg, gh), (gh_, gf), (hf, gg)];
    let residual = terms.iter().map(|(a, b)| poisson_from_grads(a, b)).sum();
    let scale = terms.iter().map(|(a, b)| poisson_magnitude(a, b)).sum();
    Ok((residual, scale))
}

#[derive(Debug, Clone)]
pub enum BracketMode {
    Poisson,
    Dirac(ConstraintPair),
}

impl BracketMode {
    pub fn label(&self) -> &'static str {
        match self {
            BracketMode::Poisson => "poisson",
            BracketMode::Dirac(c) => match c.kind {
                ConstraintKind::Sphere => "dirac-sphere",
                ConstraintKind::Ellipsoid => "dirac-ellipsoid",
            },
        }
    }
}

/// Outcome of one bracket evaluation. Indices are 0-based; rendering adds one.
#[derive(Debug, Clone, Serialize)]
pub struct BracketReport {
    pub i: usize,
    pub k: usize,
    pub trial: usize,
    pub residual: f64,
    /// `max(1, |f| |g|)` at the point.
    pub scale: f64,
    pub point: PhasePoint,
    pub passed: bool,
    pub tolerance: f64,
    pub error: Option<String>,
}

/// `|residual| <= tol * max(1, |f||g|)`.
pub fn passes(residual: f64, f_value: f64, g_value: f64, tol: f64) -> (bool, f64) {
    let scale = (f_value * g_value).abs().max(1.0);
    (residual.is_finite() && residual.abs() <= tol * scale, scale)
}

struct PointEval {
    values: Vec<f64>,
    grads: Vec<Vec<f64>>,
    constraint: Option<(Vec<f64>, Vec<f64>)>,
}

fn evaluate_point(family: &[Observable], mode: &BracketMode, pt: &PhasePoint) -> Result<PointEval> {
    let mut values = Vec::with_capacity(family.len());
    let mut grads = Vec::with_capacity(family.len());
    for obs in family {
        let (v, g) = obs.value_and_grad(pt)?;
        values.push(v);
        grads.push(g);
    }
    let constraint = match mode {
        BracketMode::Poisson => None,
        BracketMode::Dirac(c) => Some((c.phi.grad(pt)?, c.pi.grad(pt)?)),
    };
    Ok(PointEval { values, grads, constraint })
}

/// Seeded random points for a family check; projected onto the constraint surface
/// in Dirac mode.
pub fn sample_points(n: usize, mode: &BracketMode, trials: usize, seed: u64) -> Result<Vec<PhasePoint>> {
    let mut rng = sampling::rng(seed);
    (0..trials)
        .map(|_| {
            let pt = sampling::sample_point(&mut rng, n);
            match mode {
                BracketMode::Poisson => Ok(pt),
                BracketMode::Dirac(c) => c.project(&pt),
            }
        })
        .collect()
}

/// Evaluates the bracket of every unordered pair of `family` at `trials` seeded
/// points. Evaluation failures are recorded per point and do not abort the batch.
/// Reports are ordered by pair, then by trial.
pub fn verify_commuting_family(
    family: &[Observable],
    mode: &BracketMode,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<Vec<BracketReport>> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let Some(first) = family.first() else {
        return Ok(Vec::new());
    };
    let n = first.arity();
    for obs in family {
        if obs.arity() != n {
            return Err(Error::DimensionMismatch { expected: n, found: obs.arity() });
        }
    }
    if let BracketMode::Dirac(c) = mode {
        if c.n() != n {
            return Err(Error::DimensionMismatch { expected: n, found: c.n() });
        }
    }
    let points = sample_points(n, mode, trials, seed)?;
    let evals: Vec<Result<PointEval>> = points.par_iter().map(|pt| evaluate_point(family, mode, pt)).collect();

    let mut reports = Vec::new();
    for i in 0..family.len() {
        for k in i + 1..family.len() {
            for (trial, (pt, eval)) in points.iter().zip(&evals).enumerate() {
                let outcome = eval.as_ref().map_err(Clone::clone).and_then(|e| {
                    let r = match &e.constraint {
                        None => poisson_from_grads(&e.grads[i], &e.grads[k]),
                        Some((gphi, gpi)) => dirac_from_grads(&e.grads[i], &e.grads[k], gphi, gpi)?,
                    };
                    Ok((r, e.values[i], e.values[k]))
                });
                let report = match outcome {
                    Ok((residual, fv, gv)) => {
                        let (passed, scale) = passes(residual, fv, gv, tol);
                        BracketReport { i, k, trial, residual, scale, point: pt.clone(), passed, tolerance: tol, error: None }
                    }
                    Err(err) => BracketReport {
                        i,
                        k,
                        trial,
                        residual: f64::NAN,
                        scale: f64::NAN,
                        point: pt.clone(),
                        passed: false,
                        tolerance: tol,
                        error: Some(err.to_string()),
                    },
                };
                reports.push(report);
            }
        }
    }
    Ok(reports)
}
