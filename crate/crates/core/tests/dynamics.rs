mod support;

use involution::brackets::{ConstraintKind, ConstraintPair};
use involution::dynamics::{
    constraint_violation, drift_report, halving_ratio, integrate_constrained, integrate_flat, quartic_exact,
    QuarticParams, Trajectory,
};
use involution::families::{family, make_h_over_alpha_sum, make_hamiltonian, quartic_observable, FamilyKind, HamiltonianKind};
use involution::observable::{Expr, Observable};
use involution::params::Parameters;
use involution::phase::PhasePoint;
use involution::sampling;
use involution::Error;

fn generic_start(kind: ConstraintKind, params: &Parameters, seed: u64) -> PhasePoint {
    let mut rng = sampling::rng(seed);
    let raw = sampling::sample_point(&mut rng, params.n());
    ConstraintPair::new(kind, params).unwrap().project(&raw).unwrap()
}

fn reversed(pt: &PhasePoint) -> PhasePoint {
    PhasePoint { x: pt.x.clone(), p: pt.p.iter().map(|v| -v).collect() }
}

fn distance(a: &PhasePoint, b: &PhasePoint) -> f64 {
    a.to_vec().iter().zip(b.to_vec()).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max)
}

#[test]
fn constrained_flows_are_time_reversible() {
    let params = Parameters::from_ints(&[1, 2, 3], 0).unwrap();
    for kind in [ConstraintKind::Sphere, ConstraintKind::Ellipsoid] {
        let start = generic_start(kind, &params, 5);
        let forward = integrate_constrained(kind, &params, &start, 1e-2, 300).unwrap();
        let back = integrate_constrained(kind, &params, &reversed(forward.last()), 1e-2, 300).unwrap();
        let err = distance(&reversed(back.last()), &start);
        assert!(err <= 1e-10, "{kind:?}: {err:e}");
    }
}

#[test]
fn flat_flow_is_time_reversible() {
    let params = Parameters::from_ints(&[1, 2, 4], 0).unwrap();
    let ham = make_h_over_alpha_sum(&params).unwrap();
    let mut rng = sampling::rng(19);
    let start = sampling::sample_point(&mut rng, 3);
    let forward = integrate_flat(&ham, &start, 1e-3, 500).unwrap();
    let back = integrate_flat(&ham, &reversed(forward.last()), 1e-3, 500).unwrap();
    let err = distance(&reversed(back.last()), &start);
    assert!(err <= 1e-10, "{err:e}");
}

#[test]
fn neumann_potential_relation_is_conserved() {
    // sum alpha_i G_i / 2 - H is constant on the sphere.
    let params = Parameters::from_ints(&[1, 2, 3], 0).unwrap();
    let g = family(FamilyKind::G, &params).unwrap();
    let h = make_hamiltonian(HamiltonianKind::Neumann, &params).unwrap();
    let mut terms: Vec<Expr> = g
        .iter()
        .zip(params.alphas_f64())
        .map(|(gi, a)| Expr::Product(vec![Expr::c(0.5 * a), gi.expr().clone()]))
        .collect();
    terms.push(Expr::Neg(Box::new(h.expr().clone())));
    let combo = Observable::new("combo", 3, Expr::Sum(terms));
    let start = generic_start(ConstraintKind::Sphere, &params, 3);
    let traj = integrate_constrained(ConstraintKind::Sphere, &params, &start, 1e-3, 2000).unwrap();
    let report = drift_report(&traj, &[combo, h]).unwrap();
    let integrator = report.entries[1].relative_drift;
    assert!(report.entries[0].relative_drift <= integrator.max(1e-12) * 10.0, "{report:?}");
}

fn order_ratio(kind: ConstraintKind, monitored: &[Observable], params: &Parameters) -> (Trajectory, f64) {
    let start = generic_start(kind, params, 42);
    let coarse = integrate_constrained(kind, params, &start, 2e-3, 2000).unwrap();
    let fine = integrate_constrained(kind, params, &start, 1e-3, 4000).unwrap();
    let ratio = halving_ratio(&drift_report(&coarse, monitored).unwrap(), &drift_report(&fine, monitored).unwrap());
    (fine, ratio)
}

#[test]
fn constrained_drift_is_second_order() {
    let params = Parameters::from_ints(&[1, 2, 3], 0).unwrap();
    let mut neumann = family(FamilyKind::G, &params).unwrap();
    neumann.push(make_hamiltonian(HamiltonianKind::Neumann, &params).unwrap());
    let mut geodesic = family(FamilyKind::F, &params).unwrap();
    geodesic.push(make_hamiltonian(HamiltonianKind::EllipsoidGeodesic, &params).unwrap());
    for (kind, monitored) in [(ConstraintKind::Sphere, neumann), (ConstraintKind::Ellipsoid, geodesic)] {
        let (fine, ratio) = order_ratio(kind, &monitored, &params);
        assert!((3.0..=5.0).contains(&ratio), "{kind:?}: {ratio}");
        assert!(constraint_violation(kind, &params, &fine).unwrap() <= 1e-10);
    }
}

#[test]
fn hk_flow_conserves_every_member() {
    let params = Parameters::from_ints(&[1, 2, 4], 0).unwrap();
    let ham = make_h_over_alpha_sum(&params).unwrap();
    let members = family(FamilyKind::H, &params).unwrap();
    let mut rng = sampling::rng(19);
    let start = sampling::sample_point(&mut rng, 3);
    let traj = integrate_flat(&ham, &start, 1e-3, 1000).unwrap();
    let report = drift_report(&traj, &members).unwrap();
    for e in &report.entries {
        assert!(e.relative_drift <= 1e-6, "{e:?}");
    }
}

#[test]
fn quartic_numeric_matches_closed_form_on_unit_interval() {
    for (big_p, mu, e, q0, sign) in [(2.0, 1.0, -0.5, 1.0, 1.0), (1.0, 2.0, -0.2, 0.8, 1.0)] {
        let qp = QuarticParams::new(big_p, mu, e, q0, 0.0, sign).unwrap();
        let traj = integrate_flat(&quartic_observable(mu), &qp.initial_state(), 1e-3, 1000).unwrap();
        assert!(traj.truncated.is_none());
        for (t, s) in traj.times.iter().zip(&traj.states) {
            let exact = quartic_exact(&qp, *t).unwrap();
            let q = s.x[1] - s.x[0];
            assert!((q - exact).abs() <= 1e-6 * exact.abs().max(1.0), "t={t} {q} {exact}");
        }
    }
}

#[test]
fn quartic_escape_is_reported() {
    // Zero energy: q = q0 / (1 - q0 t) escapes at t = 2 for q0 = 1/2.
    let qp = QuarticParams::new(2.0, 1.0, 0.0, 0.5, 0.0, -1.0).unwrap();
    let result = integrate_flat(&quartic_observable(1.0), &qp.initial_state(), 1e-3, 3000);
    match result {
        Ok(traj) => assert!(traj.truncated.is_some()),
        Err(err) => assert!(matches!(err, Error::NoConvergence { .. }), "{err}"),
    }
    assert!(matches!(quartic_exact(&qp, 2.5), Err(Error::OutOfDomain { .. })));
}

#[test]
fn off_surface_start_is_rejected() {
    let params = Parameters::from_ints(&[1, 2, 3], 0).unwrap();
    let start = PhasePoint::new(vec![1.0, 1.0, 1.0], vec![0.3, -0.2, 0.5]).unwrap();
    let err = integrate_constrained(ConstraintKind::Ellipsoid, &params, &start, 1e-3, 10).unwrap_err();
    assert!(matches!(err, Error::OffSurface { .. }));
}
