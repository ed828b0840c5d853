//! Closed-form solution of `q'^2 = A q^4 - B q^2` with `A = P^2/(4 mu^2)` and
//! `B = 2E/mu`.
//!
//! With `u = 1/q` the energy relation becomes `u'^2 + B u^2 = A`, hence
//! `u'' = -B u` and `u(t) = u0 C(t) + u0' S(t)` with the trigonometric,
//! hyperbolic or linear pair `C, S` depending on the sign of `B`. The
//! solution escapes where `u` first vanishes.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::phase::PhasePoint;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuarticParams {
    /// Conserved total momentum `p1 + p2`.
    pub big_p: f64,
    /// `alpha_1 alpha_2`.
    pub mu: f64,
    pub energy: f64,
    pub q0: f64,
    pub t0: f64,
    /// Sign of the relative momentum `p = (p2 - p1)/2` at `t0`.
    pub p_sign: f64,
}

/// `q`, `q'` and `q''` at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuarticState {
    pub t: f64,
    pub q: f64,
    pub qdot: f64,
    pub qddot: f64,
}

impl QuarticParams {
    pub fn new(big_p: f64, mu: f64, energy: f64, q0: f64, t0: f64, p_sign: f64) -> Result<Self> {
        if !(mu != 0.0) || !mu.is_finite() {
            return Err(Error::InvalidArgument("mu must be nonzero".into()));
        }
        if !(q0 != 0.0) || !q0.is_finite() {
            return Err(Error::InvalidArgument("q0 must be nonzero".into()));
        }
        let qp = QuarticParams { big_p, mu, energy, q0, t0, p_sign: if p_sign < 0.0 { -1.0 } else { 1.0 } };
        let p2 = qp.relative_momentum_sq();
        if !(p2 >= 0.0) {
            return Err(Error::Domain(format!(
                "no real momentum: P^2/4 - 2 mu E / q0^2 = {p2} < 0"
            )));
        }
        Ok(qp)
    }

    /// Reads `P`, `E`, `q0` and the momentum sign off a phase point with
    /// `q = x2 - x1`, `p = (p2 - p1)/2`.
    pub fn from_state(mu: f64, pt: &PhasePoint, t0: f64) -> Result<Self> {
        if pt.n() != 2 {
            return Err(Error::DimensionMismatch { expected: 2, found: pt.n() });
        }
        let q0 = pt.x[1] - pt.x[0];
        let big_p = pt.p[0] + pt.p[1];
        let p = 0.5 * (pt.p[1] - pt.p[0]);
        let energy = (0.25 * big_p * big_p - p * p) * q0 * q0 / (2.0 * mu);
        Self::new(big_p, mu, energy, q0, t0, p)
    }

    fn relative_momentum_sq(&self) -> f64 {
        0.25 * self.big_p * self.big_p - 2.0 * self.mu * self.energy / (self.q0 * self.q0)
    }

    /// `p = (p2 - p1)/2` at `t0`.
    pub fn relative_momentum(&self) -> f64 {
        self.p_sign * self.relative_momentum_sq().max(0.0).sqrt()
    }

    /// Phase point with `x1 = 0`, `x2 = q0`, `p1 + p2 = P`.
    pub fn initial_state(&self) -> PhasePoint {
        let p = self.relative_momentum();
        PhasePoint { x: vec![0.0, self.q0], p: vec![0.5 * self.big_p - p, 0.5 * self.big_p + p] }
    }

    /// `A = P^2 / (4 mu^2)`.
    pub fn a_coeff(&self) -> f64 {
        self.big_p * self.big_p / (4.0 * self.mu * self.mu)
    }

    /// `B = 2E / mu`.
    pub fn b_coeff(&self) -> f64 {
        2.0 * self.energy / self.mu
    }

    fn u0(&self) -> f64 {
        1.0 / self.q0
    }

    /// `u' = -q'/q^2 = p/mu` at `t0`.
    fn u0_dot(&self) -> f64 {
        self.relative_momentum() / self.mu
    }

    /// `(C, S, C', S')` at elapsed time `tau`.
    fn basis(&self, tau: f64) -> (f64, f64, f64, f64) {
        let b = self.b_coeff();
        if b > 0.0 {
            let w = b.sqrt();
            let (s, c) = (w * tau).sin_cos();
            (c, s / w, -w * s, c)
        } else if b < 0.0 {
            let k = (-b).sqrt();
            let (s, c) = ((k * tau).sinh(), (k * tau).cosh());
            (c, s / k, k * s, c)
        } else {
            (1.0, tau, 0.0, 1.0)
        }
    }

    /// Escape times `(before t0, after t0)`; `None` when `q` stays finite.
    pub fn blowup_times(&self) -> (Option<f64>, Option<f64>) {
        let (u0, v0) = (self.u0(), self.u0_dot());
        let b = self.b_coeff();
        let zeros: Vec<f64> = if b > 0.0 {
            let w = b.sqrt();
            // u = R cos(w tau - phase)
            let phase = (v0 / w).atan2(u0);
            let base = (phase + std::f64::consts::FRAC_PI_2) / w;
            let period = std::f64::consts::PI / w;
            let k = (-base / period).ceil();
            let after = base + k * period;
            let after = if after <= 0.0 { after + period } else { after };
            vec![after - period, after]
        } else if b < 0.0 {
            let k = (-b).sqrt();
            let ratio = -u0 * k / v0;
            if v0 != 0.0 && ratio.abs() < 1.0 {
                vec![ratio.atanh() / k]
            } else {
                Vec::new()
            }
        } else if v0 != 0.0 {
            vec![-u0 / v0]
        } else {
            Vec::new()
        };
        let before = zeros.iter().copied().filter(|&z| z < 0.0).fold(None, |m: Option<f64>, z| Some(m.map_or(z, |v| v.max(z))));
        let after = zeros.iter().copied().filter(|&z| z > 0.0).fold(None, |m: Option<f64>, z| Some(m.map_or(z, |v| v.min(z))));
        (before.map(|z| self.t0 + z), after.map(|z| self.t0 + z))
    }

    /// Closed-form `q`, `q'`, `q''` at `t`.
    pub fn state(&self, t: f64) -> Result<QuarticState> {
        let (before, after) = self.blowup_times();
        if let Some(tb) = after.filter(|&tb| t >= tb) {
            return Err(Error::OutOfDomain { t, blowup: tb });
        }
        if let Some(tb) = before.filter(|&tb| t <= tb) {
            return Err(Error::OutOfDomain { t, blowup: tb });
        }
        let (c, s, dc, ds) = self.basis(t - self.t0);
        let (u0, v0) = (self.u0(), self.u0_dot());
        let u = u0 * c + v0 * s;
        let du = u0 * dc + v0 * ds;
        let ddu = -self.b_coeff() * u;
        Ok(QuarticState {
            t,
            q: 1.0 / u,
            qdot: -du / (u * u),
            qddot: -ddu / (u * u) + 2.0 * du * du / (u * u * u),
        })
    }

    /// Relative residuals of `q'' = q'^2/q + A q^3` and `q'^2 = A q^4 - B q^2`.
    pub fn substitution_residuals(&self, t: f64) -> Result<(f64, f64)> {
        let s = self.state(t)?;
        let (a, b) = (self.a_coeff(), self.b_coeff());
        let (t1, t2) = (s.qdot * s.qdot / s.q, a * s.q.powi(3));
        let eom = (s.qddot - t1 - t2).abs() / [1.0, s.qddot.abs(), t1.abs(), t2.abs()].into_iter().fold(0.0, f64::max);
        let (e1, e2) = (a * s.q.powi(4), b * s.q * s.q);
        let first = (s.qdot * s.qdot - e1 + e2).abs()
            / [1.0, (s.qdot * s.qdot).abs(), e1.abs(), e2.abs()].into_iter().fold(0.0, f64::max);
        Ok((eom, first))
    }
}

/// Closed-form `q(t)`; fails past the escape time.
pub fn quartic_exact(qp: &QuarticParams, t: f64) -> Result<f64> {
    Ok(qp.state(t)?.q)
}
