//! Time integration of the flows: implicit midpoint for flat phase space,
//! RATTLE on the sphere and ellipsoid, and the closed-form quartic solution.

mod constrained;
mod flat;
mod quartic;

use std::io::Write;

use serde::Serialize;

use crate::error::Result;
use crate::observable::Observable;
use crate::phase::PhasePoint;

pub use crate::brackets::project_to_surface;
pub use constrained::{constraint_violation, integrate_constrained, ConstrainedSystem};
pub use flat::integrate_flat;
pub use quartic::{quartic_exact, QuarticParams, QuarticState};

/// Coordinates beyond this magnitude end an integration as a blow-up.
pub const ESCAPE_BOUND: f64 = 1e6;

#[derive(Debug, Clone, Serialize)]
pub struct TrajectoryMeta {
    pub system: String,
    pub h: f64,
    pub params: Vec<f64>,
}

/// Where and why an integration stopped early.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Truncation {
    pub step: usize,
    pub t: f64,
    pub max_abs: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<PhasePoint>,
    pub meta: TrajectoryMeta,
    pub truncated: Option<Truncation>,
}

impl Trajectory {
    fn start(system: impl Into<String>, h: f64, params: Vec<f64>, start: PhasePoint, capacity: usize) -> Self {
        let mut times = Vec::with_capacity(capacity + 1);
        let mut states = Vec::with_capacity(capacity + 1);
        times.push(0.0);
        states.push(start);
        Trajectory { times, states, meta: TrajectoryMeta { system: system.into(), h, params }, truncated: None }
    }

    /// Appends the state of step `step`; returns false when it escaped.
    fn push(&mut self, step: usize, state: PhasePoint) -> bool {
        let max_abs = state.max_abs();
        if !(max_abs <= ESCAPE_BOUND) {
            self.truncated = Some(Truncation { step, t: step as f64 * self.meta.h, max_abs });
            return false;
        }
        self.times.push(step as f64 * self.meta.h);
        self.states.push(state);
        true
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn last(&self) -> &PhasePoint {
        self.states.last().expect("trajectory holds its start")
    }

    /// Writes `t,x1..xN,p1..pN,obs_<name>...` rows with 17 significant digits.
    pub fn write_csv<W: Write>(&self, out: &mut W, observables: &[Observable]) -> Result<()> {
        let n = self.states[0].n();
        let mut header: Vec<String> = vec!["t".into()];
        header.extend((1..=n).map(|i| format!("x{i}")));
        header.extend((1..=n).map(|i| format!("p{i}")));
        header.extend(observables.iter().map(|o| format!("obs_{}", o.name())));
        writeln!(out, "{}", header.join(","))?;
        for (t, s) in self.times.iter().zip(&self.states) {
            let mut row = vec![format!("{t:.16e}")];
            row.extend(s.x.iter().chain(&s.p).map(|v| format!("{v:.16e}")));
            for o in observables {
                row.push(format!("{:.16e}", o.eval(s)?));
            }
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DriftEntry {
    pub name: String,
    pub initial: f64,
    pub max_abs_drift: f64,
    /// `max_abs_drift / max(1, |initial|)`.
    pub relative_drift: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DriftReport {
    pub entries: Vec<DriftEntry>,
    /// Largest `|phi|` and `|Pi|` along a constrained run.
    pub constraint_violation: Option<f64>,
    /// `log2` of the drift ratio between steps `h` and `h/2`, when measured.
    pub order_estimate: Option<f64>,
}

impl DriftReport {
    pub fn max_relative_drift(&self) -> f64 {
        self.entries.iter().map(|e| e.relative_drift).fold(0.0, f64::max)
    }

    pub fn entry(&self, name: &str) -> Option<&DriftEntry> {
        self.entries.iter().find(|e| e.name == name)
    }
}

/// Drift of each observable along `traj`.
pub fn drift_report(traj: &Trajectory, observables: &[Observable]) -> Result<DriftReport> {
    let mut entries = Vec::with_capacity(observables.len());
    for o in observables {
        let initial = o.eval(&traj.states[0])?;
        let mut max_abs_drift: f64 = 0.0;
        for s in &traj.states {
            max_abs_drift = max_abs_drift.max((o.eval(s)? - initial).abs());
        }
        entries.push(DriftEntry {
            name: o.name().to_string(),
            initial,
            max_abs_drift,
            relative_drift: max_abs_drift / initial.abs().max(1.0),
        });
    }
    Ok(DriftReport { entries, constraint_violation: None, order_estimate: None })
}

/// Ratio of the worst relative drift at step `h` to that at `h/2`.
pub fn halving_ratio(coarse: &DriftReport, fine: &DriftReport) -> f64 {
    coarse.max_relative_drift() / fine.max_relative_drift()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::observable::Expr;

    #[test]
    fn csv_layout() {
        let start = PhasePoint::new(vec![1.0, 2.0], vec![0.5, -0.25]).unwrap();
        let mut traj = Trajectory::start("test", 0.5, vec![], start.clone(), 1);
        assert!(traj.push(1, start));
        let obs = Observable::new("x1", 2, Expr::x(0));
        let mut buf = Vec::new();
        traj.write_csv(&mut buf, &[obs]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "t,x1,x2,p1,p2,obs_x1");
        assert_eq!(lines[2], "5.0000000000000000e-1,1.0000000000000000e0,2.0000000000000000e0,5.0000000000000000e-1,-2.5000000000000000e-1,1.0000000000000000e0");
    }

    #[test]
    fn escape_truncates() {
        let start = PhasePoint::new(vec![1.0], vec![0.0]).unwrap();
        let mut traj = Trajectory::start("test", 0.1, vec![], start, 2);
        assert!(!traj.push(1, PhasePoint::new(vec![2e6], vec![0.0]).unwrap()));
        assert_eq!(traj.len(), 1);
        assert_eq!(traj.truncated.as_ref().unwrap().step, 1);
    }

    #[test]
    fn drift_uses_unit_floor() {
        let a = PhasePoint::new(vec![0.5], vec![0.0]).unwrap();
        let b = PhasePoint::new(vec![0.75], vec![0.0]).unwrap();
        let mut traj = Trajectory::start("test", 1.0, vec![], a, 1);
        traj.push(1, b);
        let r = drift_report(&traj, &[Observable::new("x", 1, Expr::x(0))]).unwrap();
        assert_eq!(r.entries[0].max_abs_drift, 0.25);
        assert_eq!(r.entries[0].relative_drift, 0.25);
    }
}
