mod common;

use common::full_catalogue;
use heatsym_core::groups::{GroupFamily, Jet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const LAW_TOL: f64 = 1e-10;
const GEN_TOL: f64 = 1e-6;
const GEN_STEP: f64 = 1e-6;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

fn points(n: usize, seed: u64) -> Vec<(f64, f64, f64)> {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    // x stays below the Mobius poles of the conformal family for |eps| <= 1.4
    (0..n)
        .map(|_| (r.gen_range(0.1..5.0), r.gen_range(0.02..0.5), r.gen_range(0.2..5.0)))
        .collect()
}

#[test]
fn group_law_holds_over_the_catalogue() {
    let grid = [-1.0, -0.5, 0.1, 0.7];
    for g in full_catalogue() {
        for p in points(50, 7) {
            for e1 in grid {
                for e2 in grid {
                    let two = g.apply(e2, g.apply(e1, p).unwrap()).unwrap();
                    let one = g.apply(e1 + e2, p).unwrap();
                    for (a, b) in [(two.0, one.0), (two.1, one.1), (two.2, one.2)] {
                        assert!(
                            close(a, b, LAW_TOL),
                            "{}: {e1} + {e2} at {p:?}: {two:?} vs {one:?}",
                            g.name
                        );
                    }
                }
            }
            let id = g.apply(0.0, p).unwrap();
            assert!(close(id.0, p.0, 1e-15) && close(id.1, p.1, 1e-15) && close(id.2, p.2, 1e-15));
            let back = g.apply(-0.5, g.apply(0.5, p).unwrap()).unwrap();
            assert!(close(back.1, p.1, LAW_TOL) && close(back.2, p.2, LAW_TOL));
        }
    }
}

#[test]
fn generators_match_numerical_derivative() {
    for g in full_catalogue() {
        let v = g.generator();
        for p in points(20, 11) {
            let plus = g.apply(GEN_STEP, p).unwrap();
            let minus = g.apply(-GEN_STEP, p).unwrap();
            let num = [
                (plus.0 - minus.0) / (2.0 * GEN_STEP),
                (plus.1 - minus.1) / (2.0 * GEN_STEP),
                (plus.2 - minus.2) / (2.0 * GEN_STEP),
            ];
            let f = v(p.0, p.1, p.2);
            for (a, b) in num.iter().zip([f.xi0, f.xi1, f.eta]) {
                assert!(close(*a, b, GEN_TOL), "{}: {num:?} vs {f:?}", g.name);
            }
        }
    }
}

#[test]
fn table1_generators() {
    let (t, x, u) = (1.7, 0.3, 2.9);
    let check = |g: GroupFamily, want: (f64, f64, f64)| {
        let f = g.generator()(t, x, u);
        assert_eq!((f.xi0, f.xi1, f.eta), want, "{}", g.name);
        // and numerically from the finite maps
        let plus = g.apply(GEN_STEP, (t, x, u)).unwrap();
        let minus = g.apply(-GEN_STEP, (t, x, u)).unwrap();
        assert!(close((plus.0 - minus.0) / (2.0 * GEN_STEP), want.0, GEN_TOL));
        assert!(close((plus.1 - minus.1) / (2.0 * GEN_STEP), want.1, GEN_TOL));
        assert!(close((plus.2 - minus.2) / (2.0 * GEN_STEP), want.2, GEN_TOL));
    };
    check(GroupFamily::td(), (2.0 * t, x, 0.0));
    for k in [1.0, -0.5, -1.5, -2.0] {
        check(GroupFamily::tk(k), (0.0, k * x, 2.0 * u));
    }
    check(GroupFamily::tc(), (0.0, x * x, -3.0 * x * u));
    check(GroupFamily::tt(), (1.0, 0.0, 0.0));
    check(GroupFamily::tx(), (0.0, 1.0, 0.0));
}

#[test]
fn closed_form_examples() {
    let (t, x, u) = GroupFamily::td().apply(2f64.ln(), (1.0, 1.0, 5.0)).unwrap();
    assert!(close(t, 4.0, 1e-15) && close(x, 2.0, 1e-15) && u == 5.0);
    let e = 1f64.exp();
    let (t, x, u) = GroupFamily::tkp(1.0, 0.0).apply(1.0, (1.0, 1.0, 1.0)).unwrap();
    assert!(close(t, e.powi(3), 1e-15) && close(x, e * e, 1e-15) && close(u, e, 1e-15));
}

#[test]
fn tk_flux_factor() {
    for k in [1.0, -0.5, -2.0] {
        let jet = Jet {
            t: 1.0,
            x: 0.5,
            u: 2.0,
            ut: 0.0,
            ux: 3.0,
            uxx: 0.0,
        };
        let s = GroupFamily::tk(k).prolong2(1.0, &jet).unwrap();
        let factor = s.u.powf(k) * s.ux / (jet.u.powf(k) * jet.ux);
        assert!(close(factor, ((k + 2.0) * 1.0).exp(), 1e-13));
        if k == -2.0 {
            assert!(close(s.u.powf(k) * s.ux, 0.75, 1e-14));
        }
    }
}

#[test]
fn labels_round_trip_through_parsing() {
    for g in full_catalogue() {
        if let Ok(parsed) = g.name.parse::<GroupFamily>() {
            assert_eq!(parsed.name, g.name);
        }
    }
    let g: GroupFamily = "lincomb(0.6,0,0.8)".parse().unwrap();
    assert_eq!(g.name, "TX");
    assert_eq!("Tk(-3/2)".parse::<GroupFamily>().unwrap(), GroupFamily::tk(-1.5));
}
