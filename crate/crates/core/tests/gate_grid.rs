use qdissip::gate::{geometric_phase_pipeline, phase_visibility_pipeline};
use qdissip::*;
use std::f64::consts::PI;

const THETAS: [f64; 4] = [0.3, PI / 3.0, PI / 2.0, 2.0];
const RS: [f64; 3] = [0.2, 0.8, 1.0];
const GAMMA_TAUS: [f64; 3] = [0.0, 0.05, 0.2];
const ETA_TAUS: [f64; 3] = [1.0, PI, 2.0 * PI];

fn grid() -> Vec<Gate> {
    let mut out = Vec::new();
    for &theta in &THETAS {
        for &r in &RS {
            for &gt in &GAMMA_TAUS {
                for &et in &ETA_TAUS {
                    // eta = 1, so tau = eta tau
                    out.push(GateParams::new(1.0, gt / et, theta, r, et).unwrap());
                }
            }
        }
    }
    out
}

#[test]
fn closed_phase_and_visibility_match_pipeline() {
    let mut checked = 0;
    for p in grid() {
        let report = gate_report(&p).unwrap();
        if report.pole_crossing {
            continue;
        }
        let pipe = phase_visibility_pipeline(&p, 4096).unwrap();
        assert!((report.phi - pipe.phase).norm() <= 1e-10, "{p:?}: {} vs {}", report.phi, pipe.phase);
        assert!((report.visibility - pipe.visibility).norm() <= 1e-10, "{p:?}");
        checked += 1;
    }
    assert!(checked >= 100, "only {checked} grid points checked");
}

#[test]
fn closed_geometric_phase_matches_pipeline() {
    let mut checked = 0;
    for p in grid() {
        let report = gate_report(&p).unwrap();
        if report.pole_crossing {
            continue;
        }
        let pipe = geometric_phase_pipeline(&p, 10_000).unwrap();
        assert!((report.gamma - pipe).norm() <= 1e-6, "{p:?}: {} vs {pipe}", report.gamma);
        checked += 1;
    }
    assert!(checked >= 100, "only {checked} grid points checked");
}

#[test]
fn flagged_points_are_the_lossless_equator_poles() {
    let flagged: Vec<Gate> = grid().into_iter().filter(|p| gate_report(p).unwrap().pole_crossing).collect();
    assert!(!flagged.is_empty());
    for p in flagged {
        assert_eq!(p.gamma(), 0.0);
        assert_eq!(p.theta(), PI / 2.0);
        assert!(p.tau() >= PI);
    }
}

#[test]
fn lossless_full_period_solid_angle() {
    for j in 1..=50 {
        let theta = PI / 2.0 * j as f64 / 50.0;
        let o = solid_angle(&GateParams::new(1.0, 0.0, theta, 1.0, 2.0 * PI).unwrap()).unwrap();
        assert!((o - cplx(2.0 * PI * (1.0 - theta.cos()), 0.0)).norm() <= 1e-10, "theta {theta}");
    }
}

#[test]
fn lossless_quantities_are_real() {
    for p in grid().into_iter().filter(|p| p.gamma() == 0.0) {
        let r = gate_report(&p).unwrap();
        if r.pole_crossing {
            continue;
        }
        for z in [r.phi, r.visibility, r.gamma, r.omega] {
            assert!(z.im.abs() <= 1e-10, "{p:?}");
        }
    }
}

#[test]
fn geometric_phase_goes_real_linearly_as_decay_vanishes() {
    let base = GateParams::new(1.0, 0.0, PI / 3.0, 0.8, 2.5).unwrap();
    let hermitian = geometric_phase_closed(&base).unwrap().gamma;
    let gammas = qdissip::gate::log_spaced(1e-5, 1e-3, 7);
    let ims: Vec<f64> =
        gammas.iter().map(|&g| geometric_phase_closed(&base.with_gamma(g).unwrap()).unwrap().gamma.im.abs()).collect();
    let xs: Vec<f64> = gammas.iter().map(|g| g.ln()).collect();
    let ys: Vec<f64> = ims.iter().map(|d| d.ln()).collect();
    let (slope, _) = qdissip::gate::least_squares(&xs, &ys);
    assert!((slope - 1.0).abs() < 0.05, "slope {slope}");
    let near = geometric_phase_closed(&base.with_gamma(1e-7).unwrap()).unwrap().gamma;
    assert!((near.re - hermitian.re).abs() < 1e-9);
}

#[test]
fn mixed_geometric_phase_uses_r_tan_half_omega() {
    // lossless unitary case: pipeline is real and equals the closed form
    for &theta in &[0.4, 1.0, 2.5] {
        let p: Gate = GateParams::new(1.0, 0.0, theta, 0.6, 1.7).unwrap();
        let pipe = geometric_phase_pipeline(&p, 4000).unwrap();
        assert!(pipe.im.abs() < 1e-9);
        let omega = solid_angle(&p).unwrap().re;
        assert!((pipe.re + (0.6 * (omega / 2.0).tan()).atan()).abs() < 1e-8);
    }
}
