//! Integrator behaviour on the pre-collapse window of the linear-in-x
//! potential. With k2 != 0 the x-force never changes sign, so every
//! trajectory eventually falls into y = 0; from (0, 1, 0.5, 0.5) that
//! happens at t ~ 5.87, so these runs stop at t = 5.

use superint::catalog::build;
use superint::dynamics::{self, drift_sweep, Integrator, Order, PhasePoint, SimConfig};

const K: [f64; 3] = [0.0, 1.0, 0.0];

fn start() -> PhasePoint {
    PhasePoint::new(0.0, 1.0, 0.5, 0.5)
}

fn order(integrator: Integrator, name: &str, hs: &[f64]) -> f64 {
    let base = SimConfig::new(hs[0], 5.0, integrator, K);
    match dynamics::convergence_order(&build("U").unwrap(), start(), &build(name).unwrap(), hs, &base).unwrap() {
        Order::Slope(s) => s,
        Order::Exact => panic!("unexpected exact conservation"),
    }
}

#[test]
fn leapfrog_is_second_order() {
    for name in ["H_U", "K2_3", "K3_4", "K4_6"] {
        let s = order(Integrator::Leapfrog2, name, &[4e-3, 2e-3, 1e-3, 5e-4]);
        assert!((1.9..=2.1).contains(&s), "{name}: {s}");
    }
}

#[test]
fn composition_is_fourth_order_above_roundoff() {
    for name in ["H_U", "K2_3", "K3_4", "K4_6"] {
        let s = order(Integrator::Composed4, name, &[8e-2, 4e-2, 2e-2, 1e-2]);
        assert!((3.8..=4.2).contains(&s), "{name}: {s}");
    }
}

#[test]
fn composition_reaches_roundoff_floor_on_fine_steps() {
    let base = SimConfig::new(1e-3, 5.0, Integrator::Composed4, K);
    let d = drift_sweep(&build("U").unwrap(), start(), &build("H_U").unwrap(), &[4e-3, 2e-3, 1e-3, 5e-4], &base)
        .unwrap();
    assert!(d.iter().all(|&v| v < 1e-11), "{d:?}");
}

#[test]
fn both_schemes_are_time_reversible() {
    let u = build("U").unwrap();
    for integrator in [Integrator::Leapfrog2, Integrator::Composed4] {
        let cfg = SimConfig::new(1e-3, 5.0, integrator, K);
        let fwd = dynamics::integrate(&u, start(), &cfg).unwrap();
        let back = dynamics::integrate(&u, fwd.last().unwrap().reversed(), &cfg).unwrap();
        let end = back.last().unwrap().reversed();
        let s = start();
        for (a, b) in [(end.x, s.x), (end.y, s.y), (end.px, s.px), (end.py, s.py)] {
            assert!((a - b).abs() <= 1e-9, "{integrator}: {a} vs {b}");
        }
    }
}

#[test]
fn drift_report_on_baseline_window() {
    let u = build("U").unwrap();
    let cfg = SimConfig::new(1e-3, 5.0, Integrator::Leapfrog2, K);
    let traj = dynamics::integrate(&u, start(), &cfg).unwrap();
    let inv: Vec<_> = ["H_U", "K2_3", "K3_4", "K4_6"].iter().map(|n| build(n).unwrap()).collect();
    let rep = dynamics::drift_report(&traj, &inv, K).unwrap();
    assert_eq!(rep.samples, 5001);
    // H(start) = 0.25 + x u^-2 = 0.25
    assert!((rep.get("H_U").unwrap().initial - 0.25).abs() < 1e-15);
    for d in &rep.invariants {
        assert!(d.max_drift > 0.0 && d.max_drift < 1e-5, "{}: {}", d.name, d.max_drift);
    }
}
