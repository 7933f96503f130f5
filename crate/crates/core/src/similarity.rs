//! Similarity reduction `u = t^alpha F(omega)`, `omega = x t^-beta` of the
//! power-law problem with constant flux, the reduced ODE
//! `(F^k F')' + beta omega F' - alpha F = 0`, a shooting solver for it and
//! the exact parametric solution for `k = -3/2`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::ode::{Control, Dopri5};
use crate::roots::{bisect_with, expand_log_bracket};

/// Exponent of the exactly solvable case.
pub const EXACT_K: f64 = -1.5;

/// `(alpha, beta) = (1/(k+2), (k+1)/(k+2))`.
pub fn ansatz_exponents(k: f64) -> Result<(f64, f64)> {
    if k == -2.0 || !k.is_finite() {
        return Err(Error::Domain(format!("similarity exponents degenerate at k = {k}")));
    }
    Ok((1.0 / (k + 2.0), (k + 1.0) / (k + 2.0)))
}

/// Residual of the reduced equation with `(F^k F')' = k F^{k-1} F'^2 + F^k F''`.
pub fn reduced_residual(k: f64, omega: f64, f: f64, fw: f64, fww: f64) -> Result<f64> {
    let (alpha, beta) = ansatz_exponents(k)?;
    if f <= 0.0 {
        if f == 0.0 && k > 0.0 {
            return Ok(beta * omega * fw);
        }
        if k.fract() != 0.0 || f == 0.0 {
            return Err(Error::Domain(format!("F = {f} with exponent k = {k}")));
        }
    }
    let fk = f.powf(k);
    Ok(k * fk / f * fw * fw + fk * fww + beta * omega * fw - alpha * f)
}

/// Parametric general solution for `k = -3/2` with constants `C1`, `C2`.
pub fn eval_general_parametric(tau: f64, c1: f64, c2: f64) -> Result<(f64, f64)> {
    if !(tau > 0.0) {
        return Err(Error::Domain(format!("tau = {tau} must be positive")));
    }
    let r = ((tau + 1.0) / tau).sqrt();
    let e = 1.0 + r * (c2 - (tau.sqrt() + (tau + 1.0).sqrt()).ln());
    if e == 0.0 || !e.is_finite() {
        return Err(Error::Domain(format!("E = 0 (pole) at tau = {tau}")));
    }
    let omega = c1.powi(3) / 2.0 / e * r;
    let f = 4.0 * c1.powi(-4) * e * e;
    Ok((omega, f))
}

/// `D(s) = sqrt(1 + s^2) asinh(s) - s`, accurate also for small `s`.
fn d_of_s(s: f64) -> f64 {
    if s < 0.5 {
        // sum_n (-1)^n 4^n (n!)^2 / (2n+1)! * s^(2n+3) / (2n+3)
        let s2 = s * s;
        let mut c = 1.0;
        let mut pow = s * s2;
        let mut sum = 0.0;
        for n in 0..200u32 {
            let term = c * pow / f64::from(2 * n + 3);
            sum += term;
            if term.abs() <= 1e-18 * sum.abs() {
                break;
            }
            let n1 = f64::from(n + 1);
            c *= -4.0 * n1 * n1 / ((2.0 * n1) * (2.0 * n1 + 1.0));
            pow *= s2;
        }
        sum
    } else {
        (1.0 + s * s).sqrt() * s.asinh() - s
    }
}

fn require_physical(q0: f64) -> Result<()> {
    if q0 < 0.0 && q0.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "the physical branch needs q0 < 0, got q0 = {q0}"
        )))
    }
}

/// Exact solution of the reduced problem for `k = -3/2`: `tau -> (omega, F)`.
pub fn eval_parametric(tau: f64, q0: f64) -> Result<(f64, f64)> {
    if !(tau > 0.0) || tau.is_infinite() {
        return Err(Error::Domain(format!("tau = {tau} must be positive and finite")));
    }
    eval_parametric_log(tau.ln(), q0)
}

/// [`eval_parametric`] in `sigma = ln tau`, usable far beyond `tau = f64::MAX`
/// (`omega -> 0` only like `4 / ln(2 sqrt(tau))`).
pub fn eval_parametric_log(sigma: f64, q0: f64) -> Result<(f64, f64)> {
    require_physical(q0)?;
    if !sigma.is_finite() {
        return Err(Error::Domain(format!("ln tau = {sigma} must be finite")));
    }
    // h = D(s) / s and r = sqrt((tau + 1) / tau), s = sqrt(tau)
    let (r, h) = if sigma < SERIES_SIGMA {
        let s = (0.5 * sigma).exp();
        ((1.0 + 1.0 / (s * s)).sqrt(), d_of_s(s) / s)
    } else {
        // asinh(s) = ln(s (1 + r))
        let r = (1.0 + (-sigma).exp()).sqrt();
        (r, r * (0.5 * sigma + r.ln_1p()) - 1.0)
    };
    let omega = -4.0 * r / (q0.powi(3) * h);
    let f = q0.powi(4) * h * h / 4.0;
    Ok((omega, f))
}

/// `(omega, F, F', F'')` on the exact branch at `sigma = ln tau`, with the
/// derivatives in `omega` obtained from closed-form derivatives in `sigma`.
pub fn eval_parametric_derivs(sigma: f64, q0: f64) -> Result<(f64, f64, f64, f64)> {
    let (omega, f) = eval_parametric_log(sigma, q0)?;
    let (cw, cf) = (-4.0 / q0.powi(3), q0.powi(4) / 4.0);
    let h = (f / cf).sqrt();
    let z = (-sigma).exp();
    if !z.is_finite() {
        return Err(Error::Domain(format!("ln tau = {sigma} is too small")));
    }
    let r = (1.0 + z).sqrt();
    let zr = z / (1.0 + z);
    let h1 = (1.0 - h * z) / (2.0 * (1.0 + z));
    let h2 = zr * (1.0 + h - h1 * (1.0 + z)) / (2.0 * (1.0 + z));
    let r1 = -z / (2.0 * r);
    let r2 = -r1 - r1 * r1 / r;
    let num1 = r1 * h - r * h1;
    let w1 = cw * num1 / (h * h);
    let w2 = cw * ((r2 * h - r * h2) * h - 2.0 * h1 * num1) / h.powi(3);
    let f1 = 2.0 * cf * h * h1;
    let f2 = 2.0 * cf * (h1 * h1 + h * h2);
    Ok((omega, f, f1 / w1, (f2 * w1 - f1 * w2) / w1.powi(3)))
}

/// `ln 0.25`: below it `D(s)` is summed as a series.
const SERIES_SIGMA: f64 = -1.386_294_361_119_890_6;

/// Inverse of `tau -> omega`, which is strictly decreasing on the branch:
/// bracketing plus bisection in `ln tau` down to an absolute width `tol`,
/// i.e. `|d tau / tau| <= tol`.
pub fn solve_tau(omega: f64, q0: f64, tol: f64) -> Result<f64> {
    let sigma = solve_log_tau(omega, q0, tol)?;
    let tau = sigma.exp();
    if tau.is_infinite() {
        return Err(Error::Domain(format!(
            "tau = exp({sigma}) overflows; use solve_log_tau"
        )));
    }
    Ok(tau)
}

/// `ln tau` with `omega(tau) = omega`.
pub fn solve_log_tau(omega: f64, q0: f64, tol: f64) -> Result<f64> {
    require_physical(q0)?;
    if !(omega > 0.0) || omega.is_infinite() {
        return Err(Error::Domain(format!("omega = {omega} must be positive")));
    }
    let g = |y: f64| eval_parametric_log(y, q0).map(|(w, _)| (w / omega).ln());
    let (mut lo, mut hi) = (-1.0, 1.0);
    let (mut glo, mut ghi) = (g(lo)?, g(hi)?);
    // omega decreases in sigma: need g(lo) > 0 > g(hi)
    for _ in 0..2000 {
        if glo >= 0.0 && ghi <= 0.0 {
            break;
        }
        let width = hi - lo;
        if glo < 0.0 {
            lo -= width;
            glo = g(lo)?;
        } else {
            hi += width;
            ghi = g(hi)?;
        }
        if lo < -1400.0 || hi > 1e300 {
            break;
        }
    }
    if !(glo >= 0.0 && ghi <= 0.0) {
        return Err(Error::Bracket(format!(
            "omega = {omega}: no sign change on ln tau in [{lo}, {hi}]"
        )));
    }
    bisect_with(g, lo, hi, |a, b| (b - a).abs() <= tol, 4000)
}

/// Tolerance of the inner `tau` solve used by [`eval_solution`].
pub const TAU_TOL: f64 = 1e-12;

/// Exact `u(t, x) = t^2 F(tau(x t))` for `k = -3/2`.
pub fn eval_solution(t: f64, x: f64, q0: f64) -> Result<f64> {
    if !(t > 0.0 && x > 0.0) {
        return Err(Error::Domain(format!("need t > 0 and x > 0, got ({t}, {x})")));
    }
    let sigma = solve_log_tau(x * t, q0, TAU_TOL)?;
    Ok(t * t * eval_parametric_log(sigma, q0)?.1)
}

/// Numeric profile: nodes in increasing `omega` with `P = F^k F'`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfileTable {
    pub omega: Vec<f64>,
    pub f: Vec<f64>,
    pub p: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Representation {
    Table(ProfileTable),
    /// Exact `k = -3/2` branch, evaluated through [`solve_log_tau`].
    Parametric,
}

/// Shooting diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShootInfo {
    pub omega0: f64,
    pub far: f64,
    /// Amplitude of the decaying far-field mode selected by the shooting.
    pub amplitude: f64,
    pub flux_at_omega0: f64,
    pub iterations: usize,
    /// `F(omega_max) / F(omega0)`.
    pub decay_ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityProfile {
    pub k: f64,
    pub q0: f64,
    pub repr: Representation,
    pub info: Option<ShootInfo>,
}

impl SimilarityProfile {
    pub fn exact(q0: f64) -> Result<Self> {
        require_physical(q0)?;
        Ok(Self {
            k: EXACT_K,
            q0,
            repr: Representation::Parametric,
            info: None,
        })
    }

    pub fn omega_range(&self) -> (f64, f64) {
        match &self.repr {
            Representation::Table(t) => (t.omega[0], *t.omega.last().expect("non-empty table")),
            Representation::Parametric => (0.0, f64::INFINITY),
        }
    }

    /// `F(omega)`, by cubic Hermite interpolation in `ln omega` for tables.
    pub fn eval(&self, omega: f64) -> Result<f64> {
        match &self.repr {
            Representation::Parametric => {
                let sigma = solve_log_tau(omega, self.q0, TAU_TOL)?;
                Ok(eval_parametric_log(sigma, self.q0)?.1)
            }
            Representation::Table(t) => {
                let (lo, hi) = self.omega_range();
                if !(omega >= lo && omega <= hi) {
                    return Err(Error::Domain(format!(
                        "omega = {omega} outside the table range [{lo}, {hi}]"
                    )));
                }
                let i = t.omega.partition_point(|w| *w <= omega).clamp(1, t.omega.len() - 1) - 1;
                let (w0, w1) = (t.omega[i], t.omega[i + 1]);
                let (s0, s1) = (w0.ln(), w1.ln());
                let h = s1 - s0;
                let y = (omega.ln() - s0) / h;
                // dF/ds = omega F' = omega F^{-k} P
                let d0 = w0 * t.f[i].powf(-self.k) * t.p[i];
                let d1 = w1 * t.f[i + 1].powf(-self.k) * t.p[i + 1];
                let (y2, y3) = (y * y, y * y * y);
                Ok((2.0 * y3 - 3.0 * y2 + 1.0) * t.f[i]
                    + (y3 - 2.0 * y2 + y) * h * d0
                    + (-2.0 * y3 + 3.0 * y2) * t.f[i + 1]
                    + (y3 - y2) * h * d1)
            }
        }
    }

    pub fn table(&self) -> Option<&ProfileTable> {
        match &self.repr {
            Representation::Table(t) => Some(t),
            Representation::Parametric => None,
        }
    }
}

/// `u(t, x) = t^alpha F(x t^-beta)`.
pub fn lift(profile: &SimilarityProfile, t: f64, x: f64) -> Result<f64> {
    let (alpha, beta) = ansatz_exponents(profile.k)?;
    if !(t > 0.0) {
        return Err(Error::Domain(format!("t = {t} must be positive")));
    }
    let omega = x * t.powf(-beta);
    Ok(t.powf(alpha) * profile.eval(omega)?)
}

/// Knobs of the backward shooting solver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShootConfig {
    /// Inner end where the flux condition `P = q0` is imposed.
    pub omega0: f64,
    /// Far point where the decaying far-field expansion is imposed.
    pub far: f64,
    pub rtol: f64,
    pub atol: f64,
    /// Minimum number of table nodes over `[omega0, far]`.
    pub nodes: usize,
}

impl Default for ShootConfig {
    fn default() -> Self {
        Self {
            omega0: 1e-3,
            far: 1e6,
            rtol: 1e-10,
            atol: 1e-14,
            nodes: 4000,
        }
    }
}

/// Decaying power solution `F = c omega^m` of the reduced equation and the
/// exponent `gamma` of its slowest-decaying perturbation `omega^gamma`.
pub fn far_field(k: f64) -> Result<(f64, f64, f64)> {
    if !(k > -2.0 && k < 0.0) {
        return Err(Error::Unsupported(format!(
            "shooting supports -2 < k < 0 (fast diffusion), got k = {k}"
        )));
    }
    let m = 2.0 / k;
    let c = (-k / (2.0 * (k + 2.0))).powf(1.0 / k);
    let disc = -7.0 * k * k - 12.0 * k + 4.0;
    let gamma = (k + 2.0 - disc.sqrt()) / (-2.0 * k);
    Ok((c, m, gamma))
}

/// Largest exponent for which the shooting family is known to bracket the
/// flux condition; closer to `k = -1` the backward trajectories blow up
/// before reaching `omega0`.
pub const SHOOT_K_MAX: f64 = -1.4;

/// Solve the reduced problem `P(0+) = q0`, `F(+inf) = 0` by shooting.
///
/// The flux condition is imposed at `omega0`. The family of decaying
/// solutions is parametrized by the amplitude `A` of the perturbation
/// `F = c omega^m (1 + A omega^gamma)` at the far point; each shot integrates
/// `(F, P)` backward to `omega0` in `s = ln omega`, and `A` is bisected until
/// `P(omega0) = q0` to relative accuracy `tol`. The returned table covers
/// `[omega0, max(omega_max, far)]`.
pub fn shoot(k: f64, q0: f64, omega_max: f64, tol: f64) -> Result<SimilarityProfile> {
    shoot_with(k, q0, omega_max, tol, &ShootConfig::default())
}

pub fn shoot_with(k: f64, q0: f64, omega_max: f64, tol: f64, cfg: &ShootConfig) -> Result<SimilarityProfile> {
    let (c, m, gamma) = far_field(k)?;
    if k > SHOOT_K_MAX {
        return Err(Error::Unsupported(format!(
            "backward shooting is validated for -2 < k <= {SHOOT_K_MAX}, got k = {k}"
        )));
    }
    if !(q0 < 0.0) {
        return Err(Error::Unsupported(format!(
            "shooting needs an inward flux q0 < 0, got {q0}"
        )));
    }
    if !(omega_max > cfg.omega0) {
        return Err(Error::Domain(format!(
            "omega_max = {omega_max} must exceed omega0 = {}",
            cfg.omega0
        )));
    }
    let (alpha, beta) = ansatz_exponents(k)?;
    let far = cfg.far.max(omega_max);
    let (s0, s1) = (far.ln(), cfg.omega0.ln());
    let solver = Dopri5 {
        rtol: cfg.rtol,
        atol: cfg.atol,
        h_max: (s0 - s1) / cfg.nodes as f64,
        max_steps: 200_000,
    };
    let rhs = |s: f64, y: &[f64; 2]| -> Result<[f64; 2]> {
        let (f, p) = (y[0], y[1]);
        if !(f > 0.0) {
            return Err(Error::Integration {
                at: s.exp(),
                reason: format!("F = {f} left the positive branch"),
            });
        }
        let w = s.exp();
        let fw = f.powf(-k) * p;
        Ok([w * fw, w * (alpha * f - beta * w * fw)])
    };
    let start = |a: f64| {
        let g = a * far.powf(gamma);
        let f = c * far.powf(m) * (1.0 + g);
        let fw = c * far.powf(m - 1.0) * (m + (m + gamma) * g);
        [f, f.powf(k) * fw]
    };

    // ln|P(omega0)| - ln|q0|: decreasing in A; an aborted shot means the
    // trajectory left F > 0 and counts as "too little flux".
    let mut shots = 0usize;
    let mut miss = |a: f64| -> Result<f64> {
        shots += 1;
        match solver.integrate(rhs, s0, start(a), s1, |_, _| Control::Continue) {
            Ok((_, y)) if y[1] < 0.0 && y[0] > 0.0 => Ok((y[1] / q0).ln()),
            Ok(_) | Err(Error::Integration { .. }) => Ok(f64::NEG_INFINITY),
            Err(e) => Err(e),
        }
    };
    let (lo, hi) = expand_log_bracket(&mut miss, 0.5, 2.0, 4.0, 200, (1e-300, 1e300))?;
    let ln_a = bisect_with(
        |y: f64| miss(y.exp()),
        lo.ln(),
        hi.ln(),
        |a, b| (b - a).abs() <= 1e-15 * a.abs().max(1.0),
        200,
    )?;
    let amp = ln_a.exp();

    let mut nodes: Vec<(f64, f64, f64)> = Vec::new();
    let (_, end) = solver.integrate(rhs, s0, start(amp), s1, |s, y| {
        nodes.push((s.exp(), y[0], y[1]));
        Control::Continue
    })?;
    let flux0 = end[1];
    if ((flux0 / q0) - 1.0).abs() > tol {
        return Err(Error::NoConvergence {
            iterations: shots,
            residual: (flux0 / q0 - 1.0).abs(),
        });
    }
    nodes.reverse();
    // exp(ln w) may round off the end points
    nodes[0].0 = cfg.omega0;
    nodes.last_mut().expect("at least two nodes").0 = far;
    let table = ProfileTable {
        omega: nodes.iter().map(|n| n.0).collect(),
        f: nodes.iter().map(|n| n.1).collect(),
        p: nodes.iter().map(|n| n.2).collect(),
    };
    let mut profile = SimilarityProfile {
        k,
        q0,
        repr: Representation::Table(table),
        info: None,
    };
    let decay_ratio = profile.eval(omega_max)? / profile.eval(cfg.omega0)?;
    profile.info = Some(ShootInfo {
        omega0: cfg.omega0,
        far,
        amplitude: amp,
        flux_at_omega0: flux0,
        iterations: shots,
        decay_ratio,
    });
    Ok(profile)
}
