//! One-parameter groups of point transformations `t* = T(t)`, `x* = X(x)`,
//! `u* = U(x, u)`: finite maps, second-order prolongation and generators.
//!
//! Every group of the classification is one of three closed families:
//!
//! * [`GroupKind::Flow`] — the flow of
//!   `(l1 + 2 l3 t) d_t + (l2 + (l3 + k l4) x) d_x + 2 l4 (u - u_c) d_u`,
//!   which covers `T_t, T_x, T_d, T_k, T_kp, T_ke` and the combinations
//!   `T_xt, T_X, T_1, T_2, T_3`;
//! * [`GroupKind::ExpShift`] — `T_e`, admitted by `d = e^u`;
//! * [`GroupKind::Conformal`] — `T_c` and its combinations `T_Z`, admitted
//!   by `d = u^{-4/3}`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::symfun::{parse_real, split_call, ExtendedReal, FuncForm};

/// Second-order jet point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Jet {
    pub t: f64,
    pub x: f64,
    pub u: f64,
    pub ut: f64,
    pub ux: f64,
    pub uxx: f64,
}

/// Generator coefficients `(xi0, xi1, eta)` at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VectorField {
    pub xi0: f64,
    pub xi1: f64,
    pub eta: f64,
}

/// Affine time map `t* = a t + b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TMap {
    pub a: f64,
    pub b: f64,
}

/// Space map of a group element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum XMap {
    /// `x* = a x + b`
    Affine { a: f64, b: f64 },
    /// `x* = scale * x / (1 - eps x)`
    Mobius { scale: f64, eps: f64 },
}

/// `u* = s (1 + kappa x)^n (u - u_c) + u_c + sigma`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UMap {
    pub s: f64,
    pub kappa: f64,
    pub n: f64,
    pub u_c: f64,
    pub sigma: f64,
}

impl XMap {
    fn check(&self, x: f64) -> Result<f64> {
        match *self {
            XMap::Affine { .. } => Ok(1.0),
            XMap::Mobius { eps, .. } => {
                let den = 1.0 - eps * x;
                if den == 0.0 {
                    Err(Error::Domain(format!("x = {x} is the pole of x/(1 - {eps} x)")))
                } else {
                    Ok(den)
                }
            }
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        let den = self.check(x)?;
        Ok(match *self {
            XMap::Affine { a, b } => a * x + b,
            XMap::Mobius { scale, .. } => scale * x / den,
        })
    }

    /// `(X, X', X'')` at `x`.
    pub fn derivs(&self, x: f64) -> Result<(f64, f64, f64)> {
        let den = self.check(x)?;
        Ok(match *self {
            XMap::Affine { a, b } => (a * x + b, a, 0.0),
            XMap::Mobius { scale, eps } => (
                scale * x / den,
                scale / (den * den),
                2.0 * scale * eps / (den * den * den),
            ),
        })
    }

    /// The map as a catalogue form in `x`, for symbolic limits.
    pub fn as_form(&self) -> (f64, FuncForm) {
        match *self {
            XMap::Affine { a, b } => (1.0, FuncForm::affine(a, b)),
            XMap::Mobius { scale, eps } => (scale, FuncForm::Mobius(eps)),
        }
    }

    pub fn limit_at_pos_infinity(&self) -> Result<ExtendedReal> {
        let (scale, form) = self.as_form();
        Ok(form.limit_at_pos_infinity()?.scale(scale))
    }
}

/// Partial derivatives of `U` at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UDerivs {
    pub u: f64,
    pub ux: f64,
    pub uu: f64,
    pub uxx: f64,
    pub uxu: f64,
    pub uuu: f64,
}

impl UMap {
    fn base(&self, x: f64) -> Result<f64> {
        let b = 1.0 + self.kappa * x;
        if b <= 0.0 && self.n.fract() != 0.0 {
            return Err(Error::Domain(format!("1 + {} x <= 0 at x = {x}", self.kappa)));
        }
        Ok(b)
    }

    pub fn eval(&self, x: f64, u: f64) -> Result<f64> {
        let b = self.base(x)?;
        Ok(self.s * b.powf(self.n) * (u - self.u_c) + self.u_c + self.sigma)
    }

    pub fn derivs(&self, x: f64, u: f64) -> Result<UDerivs> {
        let b = self.base(x)?;
        let (s, k, n) = (self.s, self.kappa, self.n);
        let w = u - self.u_c;
        let p = |e: f64| if e == 0.0 { 1.0 } else { b.powf(e) };
        Ok(UDerivs {
            u: s * p(n) * w + self.u_c + self.sigma,
            ux: s * n * k * p(n - 1.0) * w,
            uu: s * p(n),
            uxx: s * n * (n - 1.0) * k * k * p(n - 2.0) * w,
            uxu: s * n * k * p(n - 1.0),
            uuu: 0.0,
        })
    }

    /// Symbolic value of `U(x, u_inf)` as `x -> +inf`.
    pub fn limit_at_pos_infinity(&self, u_inf: f64) -> ExtendedReal {
        let w = u_inf - self.u_c;
        let fixed = self.u_c + self.sigma;
        if w == 0.0 {
            return ExtendedReal::Finite(fixed);
        }
        if self.kappa == 0.0 || self.n == 0.0 {
            return ExtendedReal::Finite(self.s * w + fixed);
        }
        if self.n < 0.0 {
            return ExtendedReal::Finite(fixed);
        }
        // (1 + kappa x)^n with integer n keeps the sign pattern of kappa^n.
        let sign = self.s
            * w
            * if self.kappa < 0.0 && self.n % 2.0 == 1.0 {
                -1.0
            } else {
                1.0
            };
        if sign > 0.0 {
            ExtendedReal::PosInf
        } else {
            ExtendedReal::NegInf
        }
    }
}

/// Closed family of the group.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GroupKind {
    Flow {
        l1: f64,
        l2: f64,
        l3: f64,
        l4: f64,
        k: f64,
        u_c: f64,
    },
    /// `x* = x e^eps`, `u* = u + 2 rate eps`.
    ExpShift { rate: f64 },
    /// Flow of `(l1 + 2 l3 t) d_t + (mu x + curv x^2) d_x + (2 l4 - 3 curv x)(u - u_c) d_u`
    /// with `mu = l3 - 4 l4 / 3`.
    Conformal {
        l1: f64,
        l3: f64,
        l4: f64,
        curv: f64,
        u_c: f64,
    },
}

/// A named one-parameter group.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupFamily {
    pub name: String,
    pub kind: GroupKind,
}

/// `(e^{a eps} - 1) / a`, continuous at `a = 0`.
fn phi(a: f64, eps: f64) -> f64 {
    if a == 0.0 {
        eps
    } else {
        (a * eps).exp_m1() / a
    }
}

const CONFORMAL_POWER: f64 = -4.0 / 3.0;

/// Tolerance used to decide that a generator coefficient vanishes.
const ZERO: f64 = 1e-12;

fn fmt_num(v: f64) -> String {
    // short, round-trippable rendering of catalogue parameters
    let r = (v * 1e9).round() / 1e9;
    let r = if r == 0.0 { 0.0 } else { r };
    for den in [1.0, 2.0, 3.0, 4.0, 6.0] {
        let n = v * den;
        if (n - n.round()).abs() < 1e-9 && den > 1.0 && (v - v.round()).abs() > 1e-9 {
            return format!("{}/{}", n.round(), den);
        }
    }
    format!("{r}")
}

impl GroupFamily {
    fn flow(l1: f64, l2: f64, l3: f64, l4: f64, k: f64) -> Self {
        let kind = GroupKind::Flow {
            l1,
            l2,
            l3,
            l4,
            k,
            u_c: 0.0,
        };
        Self::from_kind(kind)
    }

    pub fn from_kind(kind: GroupKind) -> Self {
        GroupFamily {
            name: label(&kind),
            kind,
        }
    }

    /// `t* = t e^{2 eps}, x* = x e^eps`.
    pub fn td() -> Self {
        Self::flow(0.0, 0.0, 1.0, 0.0, 0.0)
    }

    /// `t* = t + eps`.
    pub fn tt() -> Self {
        Self::flow(1.0, 0.0, 0.0, 0.0, 0.0)
    }

    /// `x* = x + eps`.
    pub fn tx() -> Self {
        Self::flow(0.0, 1.0, 0.0, 0.0, 0.0)
    }

    /// `x* = x e^{k eps}, u* = u e^{2 eps}`.
    pub fn tk(k: f64) -> Self {
        Self::flow(0.0, 0.0, 0.0, 1.0, k)
    }

    /// `t* = t e^{(k+2) eps}, x* = x e^{(k(p+1)+1) eps}, u* = u e^{(2p+1) eps}`.
    pub fn tkp(k: f64, p: f64) -> Self {
        Self::flow(0.0, 0.0, (k + 2.0) / 2.0, (2.0 * p + 1.0) / 2.0, k)
    }

    /// `t* = t + (k+2) eps, x* = x e^{k eps}, u* = u e^{2 eps}`.
    pub fn tke(k: f64) -> Self {
        Self::flow(k + 2.0, 0.0, 0.0, 1.0, k)
    }

    /// `T_ke` matched to a flux `q0 e^{rate t}`: `t* = t + ((k+2)/rate) eps`.
    pub fn tke_rate(k: f64, rate: f64) -> Self {
        let mut g = Self::flow((k + 2.0) / rate, 0.0, 0.0, 1.0, k);
        g.name = format!("Tke({})", fmt_num(k));
        g
    }

    pub fn te() -> Self {
        Self::from_kind(GroupKind::ExpShift { rate: 1.0 })
    }

    /// `x* = x / (1 - eps x), u* = (1 - eps x)^3 u`.
    pub fn tc() -> Self {
        Self::from_kind(GroupKind::Conformal {
            l1: 0.0,
            l3: 0.0,
            l4: 0.0,
            curv: 1.0,
            u_c: 0.0,
        })
    }

    /// Group generated by `(l1 + 2 l3 t) d_t + (l2 + (l3 + k l4) x) d_x + 2 l4 u d_u`.
    ///
    /// `l4 = 0` gives the operator `X` (groups `T_xt`, `T_X`); `l4 = 1`
    /// gives `Y` (groups `T_1`, `T_2`, `T_3`).
    pub fn linear_combination(l1: f64, l2: f64, l3: f64, l4: f64, k: f64) -> Result<Self> {
        if [l1, l2, l3, l4].iter().all(|l| *l == 0.0) {
            return Err(Error::InvalidSpec("all lambda coefficients are zero".into()));
        }
        Ok(Self::flow(l1, l2, l3, l4, if l4 == 0.0 { 0.0 } else { k }))
    }

    /// Group generated by the conformal combination `Z` for `d = u^{-4/3}`.
    pub fn conformal_combination(l1: f64, l2: f64, l3: f64, l4: f64) -> Result<Self> {
        if l2 != 0.0 {
            return Err(Error::Unsupported(
                "conformal combination with l2 != 0 has no closed form here".into(),
            ));
        }
        Ok(Self::from_kind(GroupKind::Conformal {
            l1,
            l3,
            l4,
            curv: 1.0,
            u_c: 0.0,
        }))
    }

    /// Canonical label from the generator pattern (up to rescaling of eps).
    pub fn label(&self) -> String {
        label(&self.kind)
    }

    /// Component maps of the group element with parameter `eps`.
    pub fn maps(&self, eps: f64) -> (TMap, XMap, UMap) {
        let time = |l1: f64, l3: f64| TMap {
            a: (2.0 * l3 * eps).exp(),
            b: l1 * phi(2.0 * l3, eps),
        };
        match self.kind {
            GroupKind::Flow { l1, l2, l3, l4, k, u_c } => {
                let a = l3 + k * l4;
                (
                    time(l1, l3),
                    XMap::Affine {
                        a: (a * eps).exp(),
                        b: l2 * phi(a, eps),
                    },
                    UMap {
                        s: (2.0 * l4 * eps).exp(),
                        kappa: 0.0,
                        n: 0.0,
                        u_c,
                        sigma: 0.0,
                    },
                )
            }
            GroupKind::ExpShift { rate } => (
                TMap { a: 1.0, b: 0.0 },
                XMap::Affine { a: eps.exp(), b: 0.0 },
                UMap {
                    s: 1.0,
                    kappa: 0.0,
                    n: 0.0,
                    u_c: 0.0,
                    sigma: 2.0 * rate * eps,
                },
            ),
            GroupKind::Conformal { l1, l3, l4, curv, u_c } => {
                let mu = l3 + CONFORMAL_POWER * l4;
                let c = curv * phi(mu, eps);
                (
                    time(l1, l3),
                    XMap::Mobius {
                        scale: (mu * eps).exp(),
                        eps: c,
                    },
                    UMap {
                        s: (2.0 * l4 * eps).exp(),
                        kappa: -c,
                        n: 3.0,
                        u_c,
                        sigma: 0.0,
                    },
                )
            }
        }
    }

    /// Transform a point `(t, x, u)`.
    pub fn apply(&self, eps: f64, (t, x, u): (f64, f64, f64)) -> Result<(f64, f64, f64)> {
        let (tm, xm, um) = self.maps(eps);
        Ok((tm.a * t + tm.b, xm.eval(x)?, um.eval(x, u)?))
    }

    /// Second-order prolongation of the group element acting on a jet.
    pub fn prolong2(&self, eps: f64, jet: &Jet) -> Result<Jet> {
        let (tm, xm, um) = self.maps(eps);
        prolong_maps(&tm, &xm, &um, jet)
    }

    /// Infinitesimal generator, from the closed forms.
    pub fn generator(&self) -> impl Fn(f64, f64, f64) -> VectorField + '_ {
        move |t, x, u| match self.kind {
            GroupKind::Flow { l1, l2, l3, l4, k, u_c } => VectorField {
                xi0: l1 + 2.0 * l3 * t,
                xi1: l2 + (l3 + k * l4) * x,
                eta: 2.0 * l4 * (u - u_c),
            },
            GroupKind::ExpShift { rate } => VectorField {
                xi0: 0.0,
                xi1: x,
                eta: 2.0 * rate,
            },
            GroupKind::Conformal { l1, l3, l4, curv, u_c } => VectorField {
                xi0: l1 + 2.0 * l3 * t,
                xi1: (l3 + CONFORMAL_POWER * l4) * x + curv * x * x,
                eta: (2.0 * l4 - 3.0 * curv * x) * (u - u_c),
            },
        }
    }
}

/// Chain-rule prolongation for `t* = T(t)`, `x* = X(x)`, `u* = U(x, u)`.
pub fn prolong_maps(tm: &TMap, xm: &XMap, um: &UMap, jet: &Jet) -> Result<Jet> {
    if tm.a == 0.0 {
        return Err(Error::Singular("T'(t) = 0".into()));
    }
    let (xs, x1, x2) = xm.derivs(jet.x)?;
    if x1 == 0.0 {
        return Err(Error::Singular(format!("X'(x) = 0 at x = {}", jet.x)));
    }
    let d = um.derivs(jet.x, jet.u)?;
    let num_x = d.ux + d.uu * jet.ux;
    let ux = num_x / x1;
    let ut = d.uu * jet.ut / tm.a;
    let second = d.uxx + 2.0 * d.uxu * jet.ux + d.uuu * jet.ux * jet.ux + d.uu * jet.uxx;
    let uxx = (second * x1 - num_x * x2) / (x1 * x1 * x1);
    Ok(Jet {
        t: tm.a * jet.t + tm.b,
        x: xs,
        u: d.u,
        ut,
        ux,
        uxx,
    })
}

fn is_zero(v: f64) -> bool {
    v.abs() <= ZERO
}

fn label(kind: &GroupKind) -> String {
    let suffix = |u_c: f64| {
        if is_zero(u_c) {
            String::new()
        } else {
            format!("[u_c={}]", fmt_num(u_c))
        }
    };
    match *kind {
        GroupKind::Flow { l1, l2, l3, l4, k, u_c } => {
            let (z1, z2, z3, z4) = (is_zero(l1), is_zero(l2), is_zero(l3), is_zero(l4));
            let base = if z4 {
                match (z1, z2, z3) {
                    (_, _, false) if z1 && z2 => "Td".to_string(),
                    (_, _, false) => "TX".to_string(),
                    (false, true, true) => "Tt".to_string(),
                    (true, false, true) => "Tx".to_string(),
                    (false, false, true) => "Txt".to_string(),
                    (true, true, true) => "Id".to_string(),
                }
            } else if z3 {
                match (z1, z2) {
                    (true, true) => format!("Tk({})", fmt_num(k)),
                    (false, true) => format!("Tke({})", fmt_num(k)),
                    _ => "T3".to_string(),
                }
            } else if z1 && z2 {
                let p = ((k + 2.0) * l4 / l3 - 1.0) / 2.0;
                format!("Tkp({},{})", fmt_num(k), fmt_num(p))
            } else if is_zero(l3 + k * l4) {
                "T2".to_string()
            } else {
                "T1".to_string()
            };
            base + &suffix(u_c)
        }
        GroupKind::ExpShift { .. } => "Te".to_string(),
        GroupKind::Conformal { l1, l3, l4, curv, u_c } => {
            let base = if is_zero(l1) && is_zero(l3) && is_zero(l4) && curv == 1.0 {
                "Tc"
            } else {
                "TZ"
            };
            base.to_string() + &suffix(u_c)
        }
    }
}

impl fmt::Display for GroupFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

impl FromStr for GroupFamily {
    type Err = Error;

    /// `Td, Tt, Tx, Tk(k), Tkp(k,p), Tke(k), Te, Tc, lincomb(l1,l2,l3[,l4,k])`,
    /// `lincombz(l1,l2,l3,l4)`.
    fn from_str(text: &str) -> Result<Self> {
        let (name, args) = split_call(text)?;
        let vals = args.iter().map(|a| parse_real(a)).collect::<Result<Vec<_>>>()?;
        let want = |n: &[usize]| {
            if n.contains(&vals.len()) {
                Ok(())
            } else {
                Err(Error::Parse(format!(
                    "group '{name}' takes {n:?} argument(s), got {}",
                    vals.len()
                )))
            }
        };
        match name {
            "Td" => want(&[0]).map(|_| Self::td()),
            "Tt" => want(&[0]).map(|_| Self::tt()),
            "Tx" => want(&[0]).map(|_| Self::tx()),
            "Te" => want(&[0]).map(|_| Self::te()),
            "Tc" => want(&[0]).map(|_| Self::tc()),
            "Tk" => want(&[1]).map(|_| Self::tk(vals[0])),
            "Tkp" => want(&[2]).map(|_| Self::tkp(vals[0], vals[1])),
            "Tke" => want(&[1]).map(|_| Self::tke(vals[0])),
            "lincomb" => {
                want(&[3, 5])?;
                let (l4, k) = if vals.len() == 5 {
                    (vals[3], vals[4])
                } else {
                    (0.0, 0.0)
                };
                Self::linear_combination(vals[0], vals[1], vals[2], l4, k)
            }
            "lincombz" => {
                want(&[4])?;
                Self::conformal_combination(vals[0], vals[1], vals[2], vals[3])
            }
            other => Err(Error::Parse(format!("unknown group '{other}'"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn td_example() {
        let (t, x, u) = GroupFamily::td().apply(2f64.ln(), (1.0, 1.0, 5.0)).unwrap();
        assert_relative_eq!(t, 4.0, max_relative = 1e-15);
        assert_relative_eq!(x, 2.0, max_relative = 1e-15);
        assert_eq!(u, 5.0);
    }

    #[test]
    fn tkp_example() {
        let (t, x, u) = GroupFamily::tkp(1.0, 0.0).apply(1.0, (1.0, 1.0, 1.0)).unwrap();
        let e = std::f64::consts::E;
        assert_relative_eq!(t, e.powi(3), max_relative = 1e-15);
        assert_relative_eq!(x, e.powi(2), max_relative = 1e-15);
        assert_relative_eq!(u, e, max_relative = 1e-15);
    }

    #[test]
    fn tk_flux_factor_at_minus_two() {
        let jet = Jet {
            t: 1.0,
            x: 0.0,
            u: 2.0,
            ut: 0.0,
            ux: 3.0,
            uxx: 0.0,
        };
        let s = GroupFamily::tk(-2.0).prolong2(1.0, &jet).unwrap();
        assert_relative_eq!(s.u.powi(-2) * s.ux, 0.75, max_relative = 1e-14);
    }

    #[test]
    fn tc_fixes_origin() {
        for eps in [-1.0, 0.3, 2.0] {
            assert_eq!(GroupFamily::tc().apply(eps, (1.5, 0.0, 2.5)).unwrap(), (1.5, 0.0, 2.5));
        }
        assert!(matches!(
            GroupFamily::tc().apply(0.5, (1.0, 2.0, 1.0)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn labels() {
        assert_eq!(GroupFamily::tkp(1.0, 0.0).name, "Tkp(1,0)");
        assert_eq!(GroupFamily::tkp(-0.5, -1.0 / 3.0).name, "Tkp(-1/2,-1/3)");
        assert_eq!(GroupFamily::tk(-2.0).name, "Tk(-2)");
        assert_eq!(GroupFamily::tke(-1.5).name, "Tke(-3/2)");
        assert_eq!(
            GroupFamily::linear_combination(1.0, 0.0, 0.0, 0.0, 0.0).unwrap().name,
            "Tt"
        );
        assert_eq!(
            GroupFamily::linear_combination(1.0, 0.0, 2.0, 0.0, 0.0).unwrap().name,
            "TX"
        );
        assert_eq!(
            GroupFamily::linear_combination(1.0, 1.0, 0.0, 0.0, 0.0).unwrap().name,
            "Txt"
        );
        assert_eq!(
            GroupFamily::linear_combination(1.0, 1.0, 2.0, 1.0, 1.0).unwrap().name,
            "T1"
        );
        assert_eq!(
            GroupFamily::linear_combination(1.0, 1.0, 2.0, 1.0, -2.0).unwrap().name,
            "T2"
        );
        assert_eq!(
            GroupFamily::linear_combination(1.0, 1.0, 0.0, 1.0, 1.0).unwrap().name,
            "T3"
        );
        assert!(GroupFamily::linear_combination(0.0, 0.0, 0.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn parse_names() {
        for s in ["Td", "Tt", "Tx", "Te", "Tc", "Tk(-2)", "Tkp(1,0)", "Tke(1)"] {
            assert_eq!(s.parse::<GroupFamily>().unwrap().name, s);
        }
        assert_eq!("lincomb(1,0,0)".parse::<GroupFamily>().unwrap(), GroupFamily::tt());
        assert_eq!(
            "lincomb(0,0,0,1,-2)".parse::<GroupFamily>().unwrap(),
            GroupFamily::tk(-2.0)
        );
        assert_eq!("lincombz(0,0,0,0)".parse::<GroupFamily>().unwrap(), GroupFamily::tc());
        assert!("lincombz(0,1,0,0)".parse::<GroupFamily>().is_err());
        assert!("Tq".parse::<GroupFamily>().is_err());
        assert!("Tk".parse::<GroupFamily>().is_err());
    }

    #[test]
    fn lincomb_x_matches_closed_form() {
        let (l1, l2, l3) = (0.7, 0.4, -0.3);
        let g = GroupFamily::linear_combination(l1, l2, l3, 0.0, 0.0).unwrap();
        let eps = 0.9;
        let (t, x, _) = g.apply(eps, (2.0, 3.0, 1.0)).unwrap();
        let e2 = (2.0 * l3 * eps).exp();
        let e1 = (l3 * eps).exp();
        assert_relative_eq!(t, 2.0 * e2 + l1 / (2.0 * l3) * (e2 - 1.0), max_relative = 1e-14);
        assert_relative_eq!(x, 3.0 * e1 + l2 / l3 * (e1 - 1.0), max_relative = 1e-14);
    }

    #[test]
    fn conformal_combination_matches_closed_form() {
        let (l3, l4) = (0.5, 0.9);
        let mu: f64 = l3 - 4.0 / 3.0 * l4;
        let g = GroupFamily::conformal_combination(0.0, 0.0, l3, l4).unwrap();
        let eps = 0.4;
        let x = 0.8;
        let (_, xs, _) = g.apply(eps, (1.0, x, 1.0)).unwrap();
        let em = (mu * eps).exp();
        let expect = x * mu * em / (x * (1.0 - em) + mu);
        assert_relative_eq!(xs, expect, max_relative = 1e-14);
        let lim = g.maps(eps).1.limit_at_pos_infinity().unwrap();
        assert_relative_eq!(lim.finite().unwrap(), mu * em / (1.0 - em), max_relative = 1e-12);
    }
}
