use serde::Serialize;

use super::Trajectory;
use crate::brackets::{ConstraintKind, ConstraintPair};
use crate::error::{Error, Result};
use crate::params::Parameters;
use crate::phase::PhasePoint;

/// Start points must satisfy the constraints to this accuracy.
const START_TOL: f64 = 1e-12;

/// The two constrained flows: the Neumann oscillator on the sphere and free
/// geodesic motion on the ellipsoid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ConstrainedSystem {
    /// `H = |p|^2/2 + sum alpha_i x_i^2 / 2` on `|x| = 1`.
    Neumann,
    /// `H = |p|^2/2` on `sum x_i^2/alpha_i = 1`.
    Geodesic,
}

impl ConstrainedSystem {
    pub fn from_kind(kind: ConstraintKind) -> Self {
        match kind {
            ConstraintKind::Sphere => ConstrainedSystem::Neumann,
            ConstraintKind::Ellipsoid => ConstrainedSystem::Geodesic,
        }
    }
}

struct Rattle {
    constraint: ConstraintPair,
    /// Potential stiffness per axis; zero for geodesics.
    stiffness: Vec<f64>,
}

impl Rattle {
    fn kick(&self, x: &[f64], p: &mut [f64], half: f64) {
        for ((pi, xi), k) in p.iter_mut().zip(x).zip(&self.stiffness) {
            *pi -= half * k * xi;
        }
    }

    fn step(&self, x: &[f64], p: &[f64], h: f64, step: usize) -> Result<(Vec<f64>, Vec<f64>)> {
        let c = self.constraint.weights();
        let mut pt = p.to_vec();
        self.kick(x, &mut pt, 0.5 * h);
        // x_new = a + lambda b must satisfy phi(x_new) = 0.
        let g = self.constraint.phi_gradient(x);
        let a: Vec<f64> = x.iter().zip(&pt).map(|(xi, pi)| xi + h * pi).collect();
        let b: Vec<f64> = g.iter().map(|gi| -0.5 * h * h * gi).collect();
        let qa: f64 = b.iter().zip(c).map(|(bi, ci)| bi * bi / ci).sum();
        let qb: f64 = 2.0 * a.iter().zip(&b).zip(c).map(|((ai, bi), ci)| ai * bi / ci).sum::<f64>();
        let qc: f64 = a.iter().zip(c).map(|(ai, ci)| ai * ai / ci).sum::<f64>() - 1.0;
        let disc = qb * qb - 4.0 * qa * qc;
        if !(disc >= 0.0) || qb == 0.0 {
            return Err(Error::ProjectionFailure { step });
        }
        // Root of smallest magnitude, in the cancellation-free form.
        let mut lambda = -2.0 * qc / (qb + qb.signum() * disc.sqrt());
        let at = |lambda: f64| -> Vec<f64> { a.iter().zip(&b).map(|(ai, bi)| ai + lambda * bi).collect() };
        let mut x_new = at(lambda);
        for _ in 0..3 {
            let r = self.constraint.phi_value(&x_new);
            let slope: f64 = self.constraint.phi_gradient(&x_new).iter().zip(&b).map(|(gi, bi)| gi * bi).sum();
            if r == 0.0 || slope == 0.0 {
                break;
            }
            lambda -= r / slope;
            x_new = at(lambda);
        }
        if !x_new.iter().all(|v| v.is_finite()) {
            return Err(Error::ProjectionFailure { step });
        }
        let mut p_new: Vec<f64> = pt.iter().zip(&g).map(|(pi, gi)| pi - 0.5 * h * lambda * gi).collect();
        self.kick(&x_new, &mut p_new, 0.5 * h);
        // Second multiplier: remove the normal component so that Pi = 0.
        let gn = self.constraint.phi_gradient(&x_new);
        let gg: f64 = gn.iter().map(|v| v * v).sum();
        if !(gg > 0.0) {
            return Err(Error::ProjectionFailure { step });
        }
        let along = gn.iter().zip(&p_new).map(|(gi, pi)| gi * pi).sum::<f64>() / gg;
        for (pi, gi) in p_new.iter_mut().zip(&gn) {
            *pi -= along * gi;
        }
        Ok((x_new, p_new))
    }
}

/// RATTLE integration on the sphere (Neumann potential) or the ellipsoid
/// (geodesic flow). `start` must already lie on the constraint surface; see
/// [`super::project_to_surface`].
pub fn integrate_constrained(
    kind: ConstraintKind,
    params: &Parameters,
    start: &PhasePoint,
    h: f64,
    steps: usize,
) -> Result<Trajectory> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::InvalidArgument(format!("step size must be positive, got {h}")));
    }
    let constraint = ConstraintPair::new(kind, params)?;
    if start.n() != constraint.n() {
        return Err(Error::DimensionMismatch { expected: constraint.n(), found: start.n() });
    }
    let phi = constraint.phi_value(&start.x).abs();
    let pi = constraint.pi_value(&start.x, &start.p).abs();
    if !(phi <= START_TOL && pi <= START_TOL) {
        return Err(Error::OffSurface { phi, pi });
    }
    let system = ConstrainedSystem::from_kind(kind);
    let stiffness = match system {
        ConstrainedSystem::Neumann => params.alphas_f64().to_vec(),
        ConstrainedSystem::Geodesic => vec![0.0; params.n()],
    };
    let label = match system {
        ConstrainedSystem::Neumann => "neumann",
        ConstrainedSystem::Geodesic => "ellipsoid",
    };
    let rattle = Rattle { constraint, stiffness };
    let mut traj = Trajectory::start(label, h, params.alphas_f64().to_vec(), start.clone(), steps);
    let (mut x, mut p) = (start.x.clone(), start.p.clone());
    for step in 1..=steps {
        (x, p) = rattle.step(&x, &p, h, step)?;
        if !traj.push(step, PhasePoint { x: x.clone(), p: p.clone() }) {
            break;
        }
    }
    Ok(traj)
}

/// Largest `|phi|` or `|Pi|` along `traj`.
pub fn constraint_violation(kind: ConstraintKind, params: &Parameters, traj: &Trajectory) -> Result<f64> {
    let c = ConstraintPair::new(kind, params)?;
    Ok(traj
        .states
        .iter()
        .map(|s| c.phi_value(&s.x).abs().max(c.pi_value(&s.x, &s.p).abs()))
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_stays_on_sphere() {
        let params = Parameters::from_ints(&[1, 2, 3], 0).unwrap();
        let start = PhasePoint::new(vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]).unwrap();
        let traj = integrate_constrained(ConstraintKind::Sphere, &params, &start, 1e-2, 1000).unwrap();
        for s in &traj.states {
            assert!((s.norm_sq_x().sqrt() - 1.0).abs() <= 1e-10);
            assert!(s.dot_xp().abs() <= 1e-10);
        }
        assert!(constraint_violation(ConstraintKind::Sphere, &params, &traj).unwrap() <= 1e-10);
    }

    #[test]
    fn geodesic_keeps_surface_and_speed() {
        let params = Parameters::from_f64(&[1.0, 1.5, 2.0], 0.0).unwrap();
        let start = crate::brackets::project_to_surface(
            ConstraintKind::Ellipsoid,
            &params,
            &PhasePoint::new(vec![0.6, 0.5, 0.7], vec![0.3, -0.4, 0.2]).unwrap(),
        )
        .unwrap();
        let traj = integrate_constrained(ConstraintKind::Ellipsoid, &params, &start, 1e-3, 2000).unwrap();
        assert!(constraint_violation(ConstraintKind::Ellipsoid, &params, &traj).unwrap() <= 1e-10);
        let e0 = start.norm_sq_p();
        for s in &traj.states {
            assert!((s.norm_sq_p() - e0).abs() < 1e-5);
        }
    }

    #[test]
    fn off_surface_start_is_rejected() {
        let params = Parameters::from_ints(&[1, 2, 3], 0).unwrap();
        let start = PhasePoint::new(vec![2.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]).unwrap();
        assert!(matches!(
            integrate_constrained(ConstraintKind::Sphere, &params, &start, 1e-2, 10),
            Err(Error::OffSurface { .. })
        ));
    }
}
