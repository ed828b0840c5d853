use nalgebra::{DMatrix, DVector};

use super::Trajectory;
use crate::error::{Error, Result};
use crate::observable::Observable;
use crate::phase::PhasePoint;

const FIXED_POINT_TOL: f64 = 1e-13;
const MAX_ITERATIONS: usize = 50;

/// `J grad H` with `J = [[0, I], [-I, 0]]`.
fn vector_field(grad: &[f64]) -> Vec<f64> {
    let n = grad.len() / 2;
    let mut out = Vec::with_capacity(2 * n);
    out.extend_from_slice(&grad[n..]);
    out.extend(grad[..n].iter().map(|g| -g));
    out
}

fn sup(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, a| m.max(a.abs()))
}

fn midpoint(z: &[f64], w: &[f64]) -> PhasePoint {
    let m: Vec<f64> = z.iter().zip(w).map(|(a, b)| 0.5 * (a + b)).collect();
    PhasePoint::from_slice(&m)
}

/// `w - z - h J grad H((z + w)/2)`.
fn residual(ham: &Observable, z: &[f64], w: &[f64], h: f64) -> Result<Vec<f64>> {
    let f = vector_field(&ham.grad(&midpoint(z, w))?);
    Ok(w.iter().zip(z).zip(&f).map(|((wi, zi), fi)| wi - zi - h * fi).collect())
}

fn newton(ham: &Observable, z: &[f64], mut w: Vec<f64>, h: f64, step: usize) -> Result<Vec<f64>> {
    let dim = z.len();
    let n = dim / 2;
    let mut res = residual(ham, z, &w, h)?;
    for _ in 0..MAX_ITERATIONS {
        if sup(&res) <= FIXED_POINT_TOL * sup(&w).max(1.0) {
            return Ok(w);
        }
        let (_, _, hess) = ham.hessian(&midpoint(z, &w))?;
        // d residual / dw = I - (h/2) J Hess
        let jac = DMatrix::from_fn(dim, dim, |r, c| {
            let jh = if r < n { hess[n + r][c] } else { -hess[r - n][c] };
            f64::from(u8::from(r == c)) - 0.5 * h * jh
        });
        let delta = jac
            .lu()
            .solve(&DVector::from_column_slice(&res))
            .ok_or(Error::NoConvergence { step, residual: sup(&res) })?;
        for (wi, d) in w.iter_mut().zip(delta.iter()) {
            *wi -= d;
        }
        res = residual(ham, z, &w, h)?;
    }
    if sup(&res) <= FIXED_POINT_TOL * sup(&w).max(1.0) {
        Ok(w)
    } else {
        Err(Error::NoConvergence { step, residual: sup(&res) })
    }
}

fn midpoint_step(ham: &Observable, z: &[f64], h: f64, step: usize) -> Result<Vec<f64>> {
    let explicit = vector_field(&ham.grad(&PhasePoint::from_slice(z))?);
    let mut w: Vec<f64> = z.iter().zip(&explicit).map(|(a, f)| a + h * f).collect();
    for _ in 0..MAX_ITERATIONS {
        let f = vector_field(&ham.grad(&midpoint(z, &w))?);
        let next: Vec<f64> = z.iter().zip(&f).map(|(a, fi)| a + h * fi).collect();
        let change = next.iter().zip(&w).fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()));
        let finite = next.iter().all(|v| v.is_finite());
        w = next;
        if !finite {
            break;
        }
        if change <= FIXED_POINT_TOL * sup(&w).max(1.0) {
            return Ok(w);
        }
    }
    let restart = if w.iter().all(|v| v.is_finite()) { w } else { z.to_vec() };
    newton(ham, z, restart, h, step)
}

/// Implicit-midpoint integration of `x' = dH/dp`, `p' = -dH/dx`.
///
/// The run stops early, with [`Trajectory::truncated`] set, once a coordinate
/// exceeds [`super::ESCAPE_BOUND`].
pub fn integrate_flat(ham: &Observable, start: &PhasePoint, h: f64, steps: usize) -> Result<Trajectory> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::InvalidArgument(format!("step size must be positive, got {h}")));
    }
    if start.n() != ham.arity() {
        return Err(Error::DimensionMismatch { expected: ham.arity(), found: start.n() });
    }
    ham.eval(start)?;
    let mut traj = Trajectory::start(ham.name(), h, Vec::new(), start.clone(), steps);
    let mut z = start.to_vec();
    for step in 1..=steps {
        z = midpoint_step(ham, &z, h, step)?;
        if !traj.push(step, PhasePoint::from_slice(&z)) {
            break;
        }
    }
    Ok(traj)
}
