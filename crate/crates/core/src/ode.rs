//! Adaptive Dormand–Prince 5(4) integrator for small fixed-size systems.

use crate::error::{Error, Result};

/// Observer verdict after each accepted step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Control {
    Continue,
    Stop,
}

#[derive(Debug, Clone, Copy)]
pub struct Dopri5 {
    pub rtol: f64,
    pub atol: f64,
    /// Largest allowed |step|; `f64::INFINITY` disables the cap.
    pub h_max: f64,
    pub max_steps: usize,
}

impl Default for Dopri5 {
    fn default() -> Self {
        Self {
            rtol: 1e-8,
            atol: 1e-10,
            h_max: f64::INFINITY,
            max_steps: 1_000_000,
        }
    }
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

impl Dopri5 {
    /// Integrate `y' = f(t, y)` from `t0` to `t1` (either direction).
    ///
    /// `observe` sees every accepted step, starting with the initial point,
    /// and may stop the integration early. Returns the last accepted state.
    pub fn integrate<const N: usize, F, O>(
        &self,
        mut f: F,
        t0: f64,
        y0: [f64; N],
        t1: f64,
        mut observe: O,
    ) -> Result<(f64, [f64; N])>
    where
        F: FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
        O: FnMut(f64, &[f64; N]) -> Control,
    {
        let dir = if t1 >= t0 { 1.0 } else { -1.0 };
        let span = (t1 - t0).abs();
        let mut t = t0;
        let mut y = y0;
        if observe(t, &y) == Control::Stop || span == 0.0 {
            return Ok((t, y));
        }
        let mut k1 = f(t, &y)?;
        let mut h = self.initial_step(&y, &k1, span);
        let mut accepted = 0usize;
        for _ in 0..self.max_steps {
            let remaining = (t1 - t) * dir;
            if remaining <= 0.0 {
                return Ok((t, y));
            }
            let last = h >= remaining;
            let step = if last { remaining } else { h };
            let hs = dir * step;

            let mut k = [[0.0; N]; 7];
            k[0] = k1;
            for s in 1..7 {
                let mut ys = y;
                for (i, v) in ys.iter_mut().enumerate() {
                    let mut acc = 0.0;
                    for (j, kj) in k.iter().enumerate().take(s) {
                        acc += A[s][j] * kj[i];
                    }
                    *v += hs * acc;
                }
                match f(t + C[s] * hs, &ys) {
                    Ok(v) => k[s] = v,
                    // a stage left the domain: reject and retry with a smaller step
                    Err(_) if step > 1e-14 * span => {
                        k[s] = [f64::NAN; N];
                        break;
                    }
                    Err(e) => return Err(e),
                }
            }

            let mut y_new = y;
            let mut err = 0.0f64;
            let mut finite = true;
            for i in 0..N {
                let mut acc = 0.0;
                let mut eacc = 0.0;
                for s in 0..7 {
                    acc += B[s] * k[s][i];
                    eacc += E[s] * k[s][i];
                }
                y_new[i] = y[i] + hs * acc;
                let sc = self.atol + self.rtol * y[i].abs().max(y_new[i].abs());
                let r = hs * eacc / sc;
                err += r * r;
                finite &= y_new[i].is_finite() && r.is_finite();
            }
            let err = (err / N as f64).sqrt();

            if finite && err <= 1.0 {
                t = if last { t1 } else { t + hs };
                y = y_new;
                k1 = k[6];
                accepted += 1;
                if observe(t, &y) == Control::Stop {
                    return Ok((t, y));
                }
                let fac = if err == 0.0 {
                    5.0
                } else {
                    (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
                };
                h = (step * fac).min(self.h_max);
            } else {
                let fac = if finite {
                    (0.9 * err.powf(-0.2)).clamp(0.1, 0.9)
                } else {
                    0.25
                };
                h = step * fac;
                if h <= 1e-15 * span.max(t.abs()) {
                    return Err(Error::Integration {
                        at: t,
                        reason: format!("step size underflow after {accepted} steps"),
                    });
                }
            }
        }
        Err(Error::Integration {
            at: t,
            reason: format!("exceeded {} steps", self.max_steps),
        })
    }

    fn initial_step<const N: usize>(&self, y: &[f64; N], f0: &[f64; N], span: f64) -> f64 {
        let mut d0 = 0.0f64;
        let mut d1 = 0.0f64;
        for i in 0..N {
            let sc = self.atol + self.rtol * y[i].abs();
            d0 = d0.max((y[i] / sc).abs());
            d1 = d1.max((f0[i] / sc).abs());
        }
        let h = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
        h.min(span).min(self.h_max).max(1e-12 * span)
    }
}
