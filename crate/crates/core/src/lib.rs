//! Symmetry verification and exact-solution toolkit for the nonlinear heat
//! equation `u_t = (d(u) u_x)_x` on the half-line with a prescribed surface
//! flux `d(u) u_x = q(t)` at `x = 0` and `u = u_inf` at infinity.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bvp;
pub mod error;
pub mod groups;
pub mod invariance;
pub mod ode;
pub mod pdecheck;
pub mod roots;
pub mod similarity;
pub mod symfun;

pub use error::{Error, Result};
