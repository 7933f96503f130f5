mod common;

use std::time::Instant;

use common::{fd_jet, power, spec};
use heatsym_core::bvp::{map_solution, normalize_q0};
use heatsym_core::groups::Jet;
use heatsym_core::invariance::equation_residual;
use heatsym_core::similarity::{lift, shoot, SimilarityProfile, SHOOT_K_MAX};
use heatsym_core::symfun::FuncForm;
use heatsym_core::Error;

const SHOOT_TOL: f64 = 1e-6;
const MATCH_TOL: f64 = 1e-3;
const PDE_TOL: f64 = 1e-4;

#[test]
fn shooting_reproduces_the_exact_branch() {
    let start = Instant::now();
    let num = shoot(-1.5, -1.0, 40.0, SHOOT_TOL).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    assert!(elapsed < 10.0, "shooting took {elapsed} s");
    let exact = SimilarityProfile::exact(-1.0).unwrap();
    for i in 0..=200 {
        let w = 10f64.powf(i as f64 / 200.0);
        let (a, b) = (num.eval(w).unwrap(), exact.eval(w).unwrap());
        assert!((a / b - 1.0).abs() <= MATCH_TOL, "omega = {w}: {a} vs {b}");
    }
    let info = num.info.unwrap();
    assert!((info.flux_at_omega0 / -1.0 - 1.0).abs() <= SHOOT_TOL);
    assert!(info.decay_ratio < 1e-3);
}

#[test]
fn shot_profile_is_strictly_decreasing() {
    let num = shoot(-1.5, -1.0, 40.0, SHOOT_TOL).unwrap();
    let t = num.table().unwrap();
    assert!(t.f.windows(2).all(|w| w[1] < w[0]));
    assert!(t.omega.windows(2).all(|w| w[1] > w[0]));
    assert!(t.p.iter().all(|p| *p < 0.0));
}

#[test]
fn profiles_for_different_q0_are_related_by_the_equivalence_map() {
    let q0 = -3.0;
    let original = spec(power(-1.5), FuncForm::Const(q0), 0.0);
    let (normalized, e) = normalize_q0(&original).unwrap();
    assert!(
        (normalized.q.amplitude().unwrap() + 1.0).abs() < 1e-12,
        "{}",
        normalized.q
    );
    let unit = shoot(-1.5, -1.0, 40.0, SHOOT_TOL).unwrap();
    let scaled = shoot(-1.5, q0, 40.0, SHOOT_TOL).unwrap();
    // normalized solution pulled back to the original variables
    let back = map_solution(&e.inverse(), |t, x| lift(&unit, t, x).unwrap());
    for (t, x) in [(1.0, 0.5), (2.0, 0.2), (0.5, 3.0), (4.0, 0.1)] {
        let a = back(t, x);
        let b = lift(&scaled, t, x).unwrap();
        assert!((a / b - 1.0).abs() < 1e-6, "(t, x) = ({t}, {x}): {a} vs {b}");
    }
}

#[test]
fn lifted_profile_matches_exact_solution() {
    let num = shoot(-1.5, -1.0, 40.0, SHOOT_TOL).unwrap();
    let exact = SimilarityProfile::exact(-1.0).unwrap();
    for x in [0.5, 1.0, 3.0] {
        assert_eq!(lift(&num, 1.0, x).unwrap(), num.eval(x).unwrap());
        let a = lift(&num, 5.0, x).unwrap();
        let b = lift(&exact, 5.0, x).unwrap();
        assert!((a / b - 1.0).abs() < 1e-8, "x = {x}");
    }
    assert!(matches!(lift(&num, 1.0, 1e9), Err(Error::Domain(_))));
}

#[test]
fn lifted_profile_solves_the_pde_and_carries_the_flux() {
    let num = shoot(-1.5, -1.0, 40.0, SHOOT_TOL).unwrap();
    let d = power(-1.5);
    let u = |t: f64, x: f64| lift(&num, t, x).unwrap();
    let mut worst = 0.0f64;
    for t in [0.5, 1.0, 2.0] {
        for x in [0.05, 0.3, 1.0, 4.0, 10.0] {
            let (ut, ux, uxx) = fd_jet(u, t, x, 1e-3 * x.min(t));
            let jet = Jet {
                t,
                x,
                u: u(t, x),
                ut,
                ux,
                uxx,
            };
            worst = worst.max(equation_residual(&d, &jet).unwrap());
        }
    }
    assert!(worst <= PDE_TOL, "lifted PDE residual {worst:e}");
    // d(u) u_x -> q0 at the surface
    let (t, x) = (1.0, 2e-3);
    let (_, ux, _) = fd_jet(u, t, x, 1e-5);
    let flux = d.eval(u(t, x)).unwrap() * ux;
    assert!((flux + 1.0).abs() < 1e-2, "surface flux {flux}");
}

#[test]
fn other_fast_diffusion_exponents_converge() {
    for k in [-1.8, -1.6, SHOOT_K_MAX] {
        let p = shoot(k, -1.0, 40.0, SHOOT_TOL).unwrap();
        let t = p.table().unwrap();
        assert!(t.f.windows(2).all(|w| w[1] < w[0]), "k = {k}");
        assert!(p.info.unwrap().decay_ratio < 1e-2, "k = {k}");
    }
}

#[test]
fn unsupported_requests_are_rejected() {
    assert!(matches!(shoot(-1.2, -1.0, 40.0, SHOOT_TOL), Err(Error::Unsupported(_))));
    assert!(matches!(shoot(1.0, -1.0, 40.0, SHOOT_TOL), Err(Error::Unsupported(_))));
    assert!(shoot(-1.5, 1.0, 40.0, SHOOT_TOL).is_err());
    assert!(shoot(-1.5, -1.0, 1e-4, SHOOT_TOL).is_err());
}
