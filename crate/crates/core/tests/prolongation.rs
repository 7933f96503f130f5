mod common;

use common::{fd_jet, full_catalogue, rel_err, FD_STEP};
use heatsym_core::groups::{GroupFamily, Jet, XMap};
use heatsym_core::invariance::DEFAULT_EPS_GRID;

const PROLONG_TOL: f64 = 1e-6;

/// Test surface with its exact jet.
struct Surface {
    name: &'static str,
    u: fn(f64, f64) -> f64,
    jet: fn(f64, f64) -> Jet,
}

fn poly(t: f64, x: f64) -> f64 {
    1.0 + 0.5 * t + 0.3 * x * x + 0.2 * t * x + 0.1 * x * x * x
}

fn poly_jet(t: f64, x: f64) -> Jet {
    Jet {
        t,
        x,
        u: poly(t, x),
        ut: 0.5 + 0.2 * x,
        ux: 0.6 * x + 0.2 * t + 0.3 * x * x,
        uxx: 0.6 + 0.6 * x,
    }
}

fn gauss(t: f64, x: f64) -> f64 {
    1.0 + (-(x - 0.4).powi(2) - 0.3 * (t - 1.0).powi(2)).exp()
}

fn gauss_jet(t: f64, x: f64) -> Jet {
    let g = gauss(t, x) - 1.0;
    let a = -2.0 * (x - 0.4);
    Jet {
        t,
        x,
        u: 1.0 + g,
        ut: -0.6 * (t - 1.0) * g,
        ux: a * g,
        uxx: (a * a - 2.0) * g,
    }
}

fn x_inverse(xm: &XMap, xs: f64) -> f64 {
    match *xm {
        XMap::Affine { a, b } => (xs - b) / a,
        XMap::Mobius { scale, eps } => xs / (scale + eps * xs),
    }
}

fn check(g: &GroupFamily, s: &Surface) -> f64 {
    let mut worst = 0.0f64;
    for eps in DEFAULT_EPS_GRID {
        let (tm, xm, um) = g.maps(eps);
        // the image surface as a function of the starred variables
        let image = |ts: f64, xs: f64| {
            let t = (ts - tm.b) / tm.a;
            let x = x_inverse(&xm, xs);
            um.eval(x, (s.u)(t, x)).unwrap()
        };
        for &(t, x) in &[(0.7, 0.15), (1.0, 0.3), (1.6, 0.45), (2.2, 0.6)] {
            let jet = (s.jet)(t, x);
            let star = g.prolong2(eps, &jet).unwrap();
            assert!(rel_err(image(star.t, star.x), star.u) < 1e-13);
            let (ut, ux, uxx) = fd_jet(image, star.t, star.x, FD_STEP * star.x.abs().max(0.1));
            for (fd, exact) in [(ut, star.ut), (ux, star.ux), (uxx, star.uxx)] {
                let e = rel_err(fd, exact);
                worst = worst.max(e);
                assert!(
                    e <= PROLONG_TOL,
                    "{} on {} at eps = {eps}: fd {fd} vs {exact}",
                    g.name,
                    s.name
                );
            }
        }
    }
    worst
}

#[test]
fn prolong2_matches_finite_difference_jets() {
    let surfaces = [
        Surface {
            name: "polynomial",
            u: poly,
            jet: poly_jet,
        },
        Surface {
            name: "gaussian",
            u: gauss,
            jet: gauss_jet,
        },
    ];
    for g in full_catalogue() {
        for s in &surfaces {
            check(&g, s);
        }
    }
}

#[test]
fn identity_prolongation() {
    let jet = poly_jet(1.1, 0.4);
    for g in full_catalogue() {
        let s = g.prolong2(0.0, &jet).unwrap();
        for (a, b) in [
            (s.t, jet.t),
            (s.x, jet.x),
            (s.u, jet.u),
            (s.ut, jet.ut),
            (s.ux, jet.ux),
            (s.uxx, jet.uxx),
        ] {
            assert!((a - b).abs() <= 1e-15 * b.abs().max(1.0), "{}", g.name);
        }
    }
}

#[test]
fn conformal_pole_is_a_domain_error() {
    let jet = poly_jet(1.0, 2.0);
    assert!(GroupFamily::tc().prolong2(0.5, &jet).is_err());
}
