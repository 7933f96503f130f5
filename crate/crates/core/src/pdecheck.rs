//! Explicit conservative finite-difference solver for `u_t = (d(u) u_x)_x`
//! on a truncated interval, used to cross-validate invariant solutions.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::similarity::eval_solution;
use crate::symfun::FuncForm;

/// Time-dependent boundary data.
pub enum Boundary<'a> {
    /// `u = g(t)`
    Dirichlet(&'a dyn Fn(f64) -> Result<f64>),
    /// `d(u) u_x = q(t)`, imposed on a half cell.
    Flux(&'a dyn Fn(f64) -> Result<f64>),
}

/// Everything `evolve` needs besides the initial data.
pub struct EvolveSpec<'a> {
    pub d: &'a FuncForm,
    pub x_min: f64,
    pub x_max: f64,
    pub left: Boundary<'a>,
    pub right: Boundary<'a>,
    /// Number of intervals; the grid has `nx + 1` nodes.
    pub nx: usize,
    pub cfl: f64,
}

pub const DEFAULT_CFL: f64 = 0.9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridSolution {
    pub x: Vec<f64>,
    pub times: Vec<f64>,
    pub values: Vec<Vec<f64>>,
    pub dx: f64,
    pub steps: usize,
    pub dt_min: f64,
    pub dt_max: f64,
    /// Discrete mass (half weights at flux ends, none at Dirichlet ends) per output.
    pub mass: Vec<f64>,
    /// Time integral of the boundary fluxes `(left, right)` up to each output.
    pub flux_integral: Vec<(f64, f64)>,
}

impl GridSolution {
    pub fn last(&self) -> &[f64] {
        self.values.last().expect("at least the initial snapshot")
    }
}

/// Evolve from `u(t0, .) = initial` to `t1`, recording `t0`, every output
/// time in `(t0, t1)` and `t1`.
pub fn evolve(
    spec: &EvolveSpec<'_>,
    initial: &dyn Fn(f64) -> Result<f64>,
    t0: f64,
    t1: f64,
    outputs: &[f64],
) -> Result<GridSolution> {
    if !(t1 >= t0 && t0 > 0.0) {
        return Err(Error::InvalidSpec(format!(
            "need t1 >= t0 > 0, got t0 = {t0}, t1 = {t1}"
        )));
    }
    if spec.nx < 2 || !(spec.x_max > spec.x_min) || !(spec.cfl > 0.0 && spec.cfl <= 1.0) {
        return Err(Error::InvalidSpec(format!(
            "bad grid: nx = {}, [{}, {}], cfl = {}",
            spec.nx, spec.x_min, spec.x_max, spec.cfl
        )));
    }
    let n = spec.nx;
    let dx = (spec.x_max - spec.x_min) / n as f64;
    let x: Vec<f64> = (0..=n).map(|i| spec.x_min + i as f64 * dx).collect();
    let mut u = x.iter().map(|&xi| initial(xi)).collect::<Result<Vec<f64>>>()?;
    if let Some(bad) = u.iter().position(|v| !(*v > 0.0 && v.is_finite())) {
        return Err(Error::InvalidSpec(format!(
            "initial data must be positive, u({}) = {}",
            x[bad], u[bad]
        )));
    }

    let weight = |b: &Boundary<'_>| match b {
        Boundary::Dirichlet(_) => 0.0,
        Boundary::Flux(_) => 0.5,
    };
    let (wl, wr) = (weight(&spec.left), weight(&spec.right));
    let mass = |u: &[f64]| {
        let inner: f64 = u[1..n].iter().sum();
        dx * (inner + wl * u[0] + wr * u[n])
    };

    let mut stops: Vec<f64> = outputs.iter().copied().filter(|&t| t > t0 && t < t1).collect();
    stops.push(t1);
    stops.sort_by(f64::total_cmp);
    stops.dedup();

    let mut sol = GridSolution {
        x: x.clone(),
        times: vec![t0],
        values: vec![u.clone()],
        dx,
        steps: 0,
        dt_min: f64::INFINITY,
        dt_max: 0.0,
        mass: vec![mass(&u)],
        flux_integral: vec![(0.0, 0.0)],
    };
    if t1 == t0 {
        return Ok(sol);
    }

    let mut t = t0;
    let mut dif = vec![0.0; n];
    let mut flux = vec![0.0; n];
    let (mut int_l, mut int_r) = (0.0, 0.0);
    let dt_floor = 1e-14 * (t1 - t0);
    let abort = |t: f64, reason: String| Error::Evolution { t, reason };
    let mut stop_idx = 0;

    while stop_idx < stops.len() {
        let target = stops[stop_idx];
        while t < target {
            apply_dirichlet(spec, t, &mut u)?;
            let mut dmax = 0.0f64;
            for i in 0..n {
                let di = spec
                    .d
                    .eval(0.5 * (u[i] + u[i + 1]))
                    .map_err(|e| abort(t, e.to_string()))?;
                dif[i] = di;
                dmax = dmax.max(di);
            }
            let mut dt = spec.cfl * dx * dx / (2.0 * dmax);
            // half cells at flux ends carry half the capacity
            if wl > 0.0 || wr > 0.0 {
                dt *= 0.5;
            }
            let remaining = target - t;
            let last = dt >= remaining;
            if last {
                dt = remaining;
            } else if dt < dt_floor {
                return Err(abort(t, format!("time step underflow (dt = {dt:e})")));
            }
            for i in 0..n {
                flux[i] = dif[i] * (u[i + 1] - u[i]) / dx;
            }
            let (fl, fr) = boundary_fluxes(spec, t, &flux)?;
            for i in 1..n {
                u[i] += dt * (flux[i] - flux[i - 1]) / dx;
            }
            if wl > 0.0 {
                u[0] += dt * (flux[0] - fl) / (wl * dx);
            }
            if wr > 0.0 {
                u[n] += dt * (fr - flux[n - 1]) / (wr * dx);
            }
            int_l += dt * fl;
            int_r += dt * fr;
            t = if last { target } else { t + dt };
            sol.steps += 1;
            sol.dt_min = sol.dt_min.min(dt);
            sol.dt_max = sol.dt_max.max(dt);
            if let Some(i) = u.iter().position(|v| !v.is_finite()) {
                return Err(abort(t, format!("non-finite value at x = {}", x[i])));
            }
            if let Some(i) = u.iter().position(|v| *v <= 0.0) {
                return Err(abort(t, format!("u = {} <= 0 at x = {}", u[i], x[i])));
            }
        }
        apply_dirichlet(spec, t, &mut u)?;
        sol.times.push(t);
        sol.values.push(u.clone());
        sol.mass.push(mass(&u));
        sol.flux_integral.push((int_l, int_r));
        stop_idx += 1;
    }
    Ok(sol)
}

fn apply_dirichlet(spec: &EvolveSpec<'_>, t: f64, u: &mut [f64]) -> Result<()> {
    let n = u.len() - 1;
    if let Boundary::Dirichlet(g) = &spec.left {
        u[0] = g(t)?;
    }
    if let Boundary::Dirichlet(g) = &spec.right {
        u[n] = g(t)?;
    }
    Ok(())
}

/// Fluxes `d u_x` entering the mass balance at each end.
fn boundary_fluxes(spec: &EvolveSpec<'_>, t: f64, flux: &[f64]) -> Result<(f64, f64)> {
    let fl = match &spec.left {
        Boundary::Dirichlet(_) => flux[0],
        Boundary::Flux(q) => q(t)?,
    };
    let fr = match &spec.right {
        Boundary::Dirichlet(_) => flux[flux.len() - 1],
        Boundary::Flux(q) => q(t)?,
    };
    Ok((fl, fr))
}

/// Defaults of the exact-solution validation run.
pub const DEFAULT_DOMAIN: (f64, f64) = (0.2, 40.0);

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub q0: f64,
    pub t0: f64,
    pub t1: f64,
    pub domain: (f64, f64),
    pub nx: usize,
    pub l2_rel: f64,
    pub linf_rel: f64,
    pub tol: f64,
    pub pass: bool,
    pub steps: usize,
}

/// Evolve the exact `k = -3/2` solution from `t0` to `t1` with exact
/// Dirichlet data at both ends of `domain`.
pub fn evolve_exact(q0: f64, t0: f64, t1: f64, domain: (f64, f64), nx: usize) -> Result<GridSolution> {
    let d = FuncForm::power(1.0, -1.5);
    let left = move |t: f64| eval_solution(t, domain.0, q0);
    let right = move |t: f64| eval_solution(t, domain.1, q0);
    let spec = EvolveSpec {
        d: &d,
        x_min: domain.0,
        x_max: domain.1,
        left: Boundary::Dirichlet(&left),
        right: Boundary::Dirichlet(&right),
        nx,
        cfl: DEFAULT_CFL,
    };
    evolve(&spec, &|x| eval_solution(t0, x, q0), t0, t1, &[])
}

/// [`evolve_exact`] compared against the exact solution at `t1`.
pub fn validate_exact(q0: f64, t0: f64, t1: f64, domain: (f64, f64), nx: usize, tol: f64) -> Result<ValidationReport> {
    let sol = evolve_exact(q0, t0, t1, domain, nx)?;
    let (l2_rel, linf_rel) = exact_errors(&sol.x, sol.last(), t1, q0)?;
    Ok(ValidationReport {
        q0,
        t0,
        t1,
        domain,
        nx,
        l2_rel,
        linf_rel,
        tol,
        pass: l2_rel <= tol,
        steps: sol.steps,
    })
}

/// Relative L2 and max-norm errors against the exact solution at `t`.
pub fn exact_errors(x: &[f64], u: &[f64], t: f64, q0: f64) -> Result<(f64, f64)> {
    let (mut num, mut den, mut inf, mut inf_den) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for (&xi, &ui) in x.iter().zip(u) {
        let e = eval_solution(t, xi, q0)?;
        num += (ui - e) * (ui - e);
        den += e * e;
        inf = inf.max((ui - e).abs());
        inf_den = inf_den.max(e.abs());
    }
    Ok(((num / den).sqrt(), inf / inf_den))
}
