//! BVP specifications `(d, q, u_inf)` and the five-parameter equivalence group
//! `t~ = e1 t + t0, x~ = e2 x, u~ = e3 u + u0`.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::symfun::{FuncForm, RandomSmooth};

/// One problem of the class: `u_t = (d(u) u_x)_x`, `d(u) u_x = q(t)` at
/// `x = 0`, `u = u_inf` at `x = +inf`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BvpSpec {
    pub d: FuncForm,
    pub q: FuncForm,
    pub u_inf: f64,
}

impl BvpSpec {
    pub fn new(d: FuncForm, q: FuncForm, u_inf: f64) -> Result<Self> {
        let spec = BvpSpec { d, q, u_inf };
        spec.validate()?;
        Ok(spec)
    }

    /// Enforce the class constraints on `d` (non-constant, positive form).
    pub fn validate(&self) -> Result<()> {
        let bad = |why: &str| Err(Error::InvalidSpec(format!("d = {}: {why}", self.d)));
        match &self.d {
            FuncForm::Zero | FuncForm::Const(_) => return bad("d(u) must not be constant"),
            FuncForm::Mobius(_) => return bad("not an admissible conductivity"),
            FuncForm::Power { c, a } => {
                if *a == 0.0 {
                    return bad("power exponent k must be nonzero");
                }
                if *c <= 0.0 {
                    return bad("coefficient must be positive");
                }
            }
            FuncForm::Exp { c, lambda } => {
                if *lambda == 0.0 {
                    return bad("exponential rate must be nonzero");
                }
                if *c <= 0.0 {
                    return bad("coefficient must be positive");
                }
            }
            FuncForm::Affine { a, .. } => {
                if *a == 0.0 {
                    return bad("d(u) must not be constant");
                }
            }
            FuncForm::RandomSmooth(r) => {
                if r.amp <= 0.0 {
                    return bad("amplitude must be positive");
                }
            }
        }
        if !self.u_inf.is_finite() {
            return Err(Error::InvalidSpec(format!("u_inf = {} is not finite", self.u_inf)));
        }
        Ok(())
    }

    /// Exponent `k` when `d = c u^k`.
    pub fn power_k(&self) -> Option<f64> {
        self.d.power_exponent()
    }
}

/// `t~ = e1 t + t0`, `x~ = e2 x`, `u~ = e3 u + u0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceTransform {
    pub e1: f64,
    pub e2: f64,
    pub e3: f64,
    pub t0: f64,
    pub u0: f64,
}

impl Default for EquivalenceTransform {
    fn default() -> Self {
        Self::identity()
    }
}

impl EquivalenceTransform {
    pub fn new(e1: f64, e2: f64, e3: f64, t0: f64, u0: f64) -> Result<Self> {
        if !(e2 > 0.0) {
            return Err(Error::InvalidSpec(format!("e2 must be positive, got {e2}")));
        }
        if e1 * e3 == 0.0 || !(e1 * e3).is_finite() || !t0.is_finite() || !u0.is_finite() {
            return Err(Error::InvalidSpec(format!(
                "need finite e1 e3 != 0, got e1 = {e1}, e3 = {e3}"
            )));
        }
        Ok(Self { e1, e2, e3, t0, u0 })
    }

    pub fn identity() -> Self {
        Self {
            e1: 1.0,
            e2: 1.0,
            e3: 1.0,
            t0: 0.0,
            u0: 0.0,
        }
    }

    pub fn time_shift(t0: f64) -> Self {
        Self { t0, ..Self::identity() }
    }

    pub fn scaling(e1: f64, e2: f64, e3: f64) -> Result<Self> {
        Self::new(e1, e2, e3, 0.0, 0.0)
    }

    /// Apply `self` first, then `then`.
    pub fn then(&self, then: &Self) -> Self {
        Self {
            e1: then.e1 * self.e1,
            e2: then.e2 * self.e2,
            e3: then.e3 * self.e3,
            t0: then.e1 * self.t0 + then.t0,
            u0: then.e3 * self.u0 + then.u0,
        }
    }

    pub fn inverse(&self) -> Self {
        Self {
            e1: 1.0 / self.e1,
            e2: 1.0 / self.e2,
            e3: 1.0 / self.e3,
            t0: -self.t0 / self.e1,
            u0: -self.u0 / self.e3,
        }
    }

    /// Image of a point `(t, x, u)`.
    pub fn map_point(&self, (t, x, u): (f64, f64, f64)) -> (f64, f64, f64) {
        (self.e1 * t + self.t0, self.e2 * x, self.e3 * u + self.u0)
    }

    /// Factor multiplying `d`.
    pub fn d_factor(&self) -> f64 {
        self.e2 * self.e2 / self.e1
    }

    /// Factor multiplying the flux amplitude.
    pub fn q_factor(&self) -> f64 {
        self.e2 * self.e3 / self.e1
    }
}

const SHAPE_TOL: f64 = 1e-12;

/// Transform the conductivity: `d~(s) = (e2^2/e1) d((s - u0)/e3)`.
fn transform_d(d: &FuncForm, g: &EquivalenceTransform) -> Result<FuncForm> {
    let f = g.d_factor();
    match d {
        FuncForm::Power { c, a } => {
            if g.u0 != 0.0 {
                return Err(Error::Constraint(format!(
                    "shift u0 = {} takes {d} out of the power-law form",
                    g.u0
                )));
            }
            if g.e3 < 0.0 && a.fract() != 0.0 {
                return Err(Error::Unsupported(format!("e3 < 0 with fractional exponent {a}")));
            }
            let ratio = f / g.e3.powf(*a);
            if (ratio - 1.0).abs() > SHAPE_TOL {
                return Err(Error::Constraint(format!(
                    "power law needs e2^2/e1 = e3^k: e2^2/e1 = {f}, e3^k = {}",
                    g.e3.powf(*a)
                )));
            }
            Ok(FuncForm::power(*c, *a))
        }
        FuncForm::Exp { c, lambda } => Ok(FuncForm::exp(f * c * (-lambda * g.u0 / g.e3).exp(), lambda / g.e3)),
        FuncForm::Affine { a, b } => Ok(FuncForm::affine(f * a / g.e3, f * (b - a * g.u0 / g.e3))),
        FuncForm::RandomSmooth(r) => Ok(FuncForm::RandomSmooth(RandomSmooth::with_affine(
            r.seed,
            r.floor,
            f * r.amp,
            g.e3 * r.scale,
            g.e3 * r.shift + g.u0,
        )?)),
        FuncForm::Zero | FuncForm::Const(_) | FuncForm::Mobius(_) => {
            Err(Error::Unsupported(format!("conductivity {d} is outside the class")))
        }
    }
}

/// Transform the flux: `q~(t) = (e2 e3/e1) q((t - t0)/e1)`.
fn transform_q(q: &FuncForm, g: &EquivalenceTransform) -> Result<FuncForm> {
    let f = g.q_factor();
    match q {
        FuncForm::Zero => Ok(FuncForm::Zero),
        FuncForm::Const(c) => Ok(FuncForm::Const(f * c)),
        FuncForm::Power { c, a } => {
            if g.t0 != 0.0 {
                return Err(Error::Unsupported(format!(
                    "time shift t0 = {} takes {q} out of the power form",
                    g.t0
                )));
            }
            if g.e1 < 0.0 && a.fract() != 0.0 {
                return Err(Error::Unsupported(format!("e1 < 0 with fractional exponent {a}")));
            }
            Ok(FuncForm::power(f * c * g.e1.powf(-a), *a))
        }
        FuncForm::Exp { c, lambda } => Ok(FuncForm::exp(f * c * (-lambda * g.t0 / g.e1).exp(), lambda / g.e1)),
        FuncForm::Affine { a, b } => Ok(FuncForm::affine(f * a / g.e1, f * (b - a * g.t0 / g.e1))),
        FuncForm::RandomSmooth(r) => Ok(FuncForm::RandomSmooth(RandomSmooth::with_affine(
            r.seed,
            r.floor,
            f * r.amp,
            g.e1 * r.scale,
            g.e1 * r.shift + g.t0,
        )?)),
        FuncForm::Mobius(_) => Err(Error::Unsupported(format!(
            "flux {q} is not closed under the equivalence group"
        ))),
    }
}

/// Image of a BVP under an equivalence transformation.
pub fn apply_equivalence(spec: &BvpSpec, g: &EquivalenceTransform) -> Result<BvpSpec> {
    if g.e1 < 0.0 {
        return Err(Error::Constraint(format!(
            "e1 = {} reverses time and makes the conductivity negative",
            g.e1
        )));
    }
    Ok(BvpSpec {
        d: transform_d(&spec.d, g)?,
        q: transform_q(&spec.q, g)?,
        u_inf: g.e3 * spec.u_inf + g.u0,
    })
}

/// Largest |ln e_i| accepted for the optional constraint in [`normalize_q0`].
const MAX_LOG_SCALE: f64 = 20.0;

/// Set the flux amplitude to `+-1` with a sign-preserving transform.
///
/// Works in log space over `(ln e1, ln e2, ln e3)` and returns the
/// minimum-norm solution of the linear constraints, so an already normalized
/// spec yields the identity.
pub fn normalize_q0(spec: &BvpSpec) -> Result<(BvpSpec, EquivalenceTransform)> {
    let (c, p, fixed_time) = match &spec.q {
        FuncForm::Zero => return Ok((spec.clone(), EquivalenceTransform::identity())),
        FuncForm::Const(c) => (*c, 0.0, false),
        FuncForm::Power { c, a } => (*c, *a, false),
        FuncForm::Exp { c, .. } => (*c, 0.0, true),
        FuncForm::RandomSmooth(r) => (r.amp, 0.0, true),
        other => {
            return Err(Error::Unsupported(format!(
                "flux {other} has no amplitude to normalize"
            )))
        }
    };
    if c == 0.0 {
        return Ok((spec.clone(), EquivalenceTransform::identity()));
    }

    // rows over (a, b, g) = (ln e1, ln e2, ln e3)
    let amplitude = ([-(1.0 + p), 1.0, 1.0], -c.abs().ln());
    let mut required: Vec<([f64; 3], f64)> = vec![amplitude];
    let mut optional: Vec<([f64; 3], f64)> = Vec::new();
    match &spec.d {
        FuncForm::Power { a: k, .. } => required.push(([-1.0, 2.0, -k], 0.0)),
        _ => {
            required.push(([0.0, 0.0, 1.0], 0.0));
            optional.push(([-1.0, 2.0, 0.0], 0.0));
        }
    }
    if fixed_time {
        required.push(([1.0, 0.0, 0.0], 0.0));
    }

    let mut all = required.clone();
    all.extend(optional);
    // the optional row is dropped when honouring it would need extreme scales
    let x = solve_min_norm(&all)
        .and_then(|x| {
            if x.iter().all(|v| v.abs() <= MAX_LOG_SCALE) {
                Ok(x)
            } else {
                Err(Error::Constraint("optional constraint too stiff".into()))
            }
        })
        .or_else(|_| solve_min_norm(&required))
        .map_err(|_| {
            Error::Constraint(format!(
                "flux amplitude {c} cannot be normalized: it is invariant under every \
                 equivalence transform that preserves d = {} and the form of q",
                spec.d
            ))
        })?;
    let g = EquivalenceTransform::scaling(x[0].exp(), x[1].exp(), x[2].exp())?;
    let out = apply_equivalence(spec, &g)?;
    Ok((out, g))
}

fn solve_min_norm(rows: &[([f64; 3], f64)]) -> Result<[f64; 3]> {
    let a = DMatrix::from_fn(rows.len(), 3, |i, j| rows[i].0[j]);
    let r = DVector::from_iterator(rows.len(), rows.iter().map(|row| row.1));
    let x = a
        .clone()
        .svd(true, true)
        .solve(&r, 1e-12)
        .map_err(|e| Error::Constraint(e.to_string()))?;
    let resid = (&a * &x - &r).amax();
    if resid > 1e-10 * r.amax().max(1.0) {
        return Err(Error::Constraint(format!(
            "inconsistent constraints (residual {resid:e})"
        )));
    }
    // snap rounding noise so pinned scales come out exactly 1
    let snap = |v: f64| if v.abs() < 1e-14 { 0.0 } else { v };
    Ok([snap(x[0]), snap(x[1]), snap(x[2])])
}

/// Push a surface `u(t, x)` forward: `u~(t~, x~) = e3 u((t~ - t0)/e1, x~/e2) + u0`.
pub fn map_solution<F>(g: &EquivalenceTransform, surface: F) -> impl Fn(f64, f64) -> f64
where
    F: Fn(f64, f64) -> f64,
{
    let g = *g;
    move |t, x| g.e3 * surface((t - g.t0) / g.e1, x / g.e2) + g.u0
}
