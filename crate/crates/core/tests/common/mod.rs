#![allow(dead_code)]

use heatsym_core::bvp::BvpSpec;
use heatsym_core::groups::{GroupFamily, GroupKind};
use heatsym_core::symfun::FuncForm;

/// Finite-difference step used by every jet oracle.
pub const FD_STEP: f64 = 1e-3;

/// Central differences with one Richardson step: `(u_t, u_x, u_xx)`.
pub fn fd_jet<F: Fn(f64, f64) -> f64>(u: F, t: f64, x: f64, h: f64) -> (f64, f64, f64) {
    let d1 = |f: &dyn Fn(f64) -> f64, z: f64, h: f64| (f(z + h) - f(z - h)) / (2.0 * h);
    let d2 = |f: &dyn Fn(f64) -> f64, z: f64, h: f64| (f(z + h) - 2.0 * f(z) + f(z - h)) / (h * h);
    let rich = |a: f64, b: f64| (4.0 * b - a) / 3.0;
    let ft = |s: f64| u(s, x);
    let fx = |y: f64| u(t, y);
    (
        rich(d1(&ft, t, h), d1(&ft, t, h / 2.0)),
        rich(d1(&fx, x, h), d1(&fx, x, h / 2.0)),
        rich(d2(&fx, x, h), d2(&fx, x, h / 2.0)),
    )
}

pub fn rel_err(got: f64, want: f64) -> f64 {
    (got - want).abs() / want.abs().max(1.0)
}

pub fn spec(d: FuncForm, q: FuncForm, u_inf: f64) -> BvpSpec {
    BvpSpec::new(d, q, u_inf).unwrap()
}

pub fn power(k: f64) -> FuncForm {
    FuncForm::power(1.0, k)
}

/// Every catalogue group plus the linear combinations, with and without a
/// shifted centre `u_c`.
pub fn full_catalogue() -> Vec<GroupFamily> {
    let mut out = vec![
        GroupFamily::tt(),
        GroupFamily::td(),
        GroupFamily::tx(),
        GroupFamily::te(),
        GroupFamily::tc(),
    ];
    for k in [1.0, -0.5, -4.0 / 3.0, -2.0, -1.5] {
        out.push(GroupFamily::tk(k));
        out.push(GroupFamily::tke(k));
    }
    out.push(GroupFamily::tkp(1.0, 1.0));
    out.push(GroupFamily::tkp(-0.5, -1.0 / 3.0));
    out.push(GroupFamily::tkp(1.0, 0.0));
    out.push(GroupFamily::tke_rate(-1.5, 0.7));
    let lc = |l1, l2, l3, l4, k| GroupFamily::linear_combination(l1, l2, l3, l4, k).unwrap();
    out.push(lc(0.6, 0.0, 0.8, 0.0, 0.0)); // T_X
    out.push(lc(0.6, 0.5, 0.0, 0.0, 0.0)); // T_xt
    out.push(lc(0.3, -0.4, 0.7, 0.5, 1.0)); // T_1
    out.push(lc(0.3, 0.2, 0.5, 1.0, -0.5)); // T_2
    out.push(lc(0.9, 0.4, 0.0, 1.0, -1.5)); // T_3
    out.push(GroupFamily::conformal_combination(0.4, 0.0, 0.3, -0.2).unwrap());
    let shifted = |g: GroupFamily| {
        let kind = match g.kind {
            GroupKind::Flow { l1, l2, l3, l4, k, .. } => GroupKind::Flow {
                l1,
                l2,
                l3,
                l4,
                k,
                u_c: 0.8,
            },
            GroupKind::Conformal { l1, l3, l4, curv, .. } => GroupKind::Conformal {
                l1,
                l3,
                l4,
                curv,
                u_c: 0.8,
            },
            other => other,
        };
        GroupFamily::from_kind(kind)
    };
    out.push(shifted(GroupFamily::tk(-1.5)));
    out.push(shifted(GroupFamily::tc()));
    out
}
