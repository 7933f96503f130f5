//! Closed catalogue of scalar function forms.
//!
//! Every coefficient function of the toolkit (the conductivity `d(u)`, the
//! surface flux `q(t)`, the component maps of point transformations) is one
//! of the forms below. Evaluation is exact up to floating point, derivatives
//! are analytic, and limits at `+inf` are computed symbolically.
//!
//! Text syntax (used by spec files and the CLI):
//!
//! ```text
//! zero | const(c) | power(c,a) | exp(c,l) | affine(a,b) | mobius(e)
//! randsmooth(seed,floor) | randsmooth(seed,floor,amp,scale,shift)
//! ```

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of Gaussian bumps in a [`RandomSmooth`] function.
pub const BUMP_COUNT: usize = 4;
/// Default positive floor of a [`RandomSmooth`] function.
pub const DEFAULT_FLOOR: f64 = 0.5;

/// One Gaussian bump `amplitude * exp(-((s - center) / width)^2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bump {
    pub center: f64,
    pub width: f64,
    pub amplitude: f64,
}

/// Deterministic smooth positive function generated from a seed.
///
/// The base function is `floor + sum of BUMP_COUNT Gaussian bumps`, with
/// centers in `[0.5, 8]`, widths in `[0.3, 2]` and amplitudes in `[0.1, 1]`.
/// The optional affine wrapper `amp * base((s - shift) / scale)` keeps the
/// family closed under the equivalence transformations.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomSmooth {
    pub seed: u64,
    pub floor: f64,
    pub amp: f64,
    pub scale: f64,
    pub shift: f64,
    bumps: [Bump; BUMP_COUNT],
}

impl RandomSmooth {
    pub fn new(seed: u64, floor: f64) -> Result<Self> {
        Self::with_affine(seed, floor, 1.0, 1.0, 0.0)
    }

    pub fn with_affine(seed: u64, floor: f64, amp: f64, scale: f64, shift: f64) -> Result<Self> {
        if !(floor > 0.0 && floor.is_finite()) {
            return Err(Error::InvalidSpec(format!(
                "randsmooth floor must be positive, got {floor}"
            )));
        }
        if amp == 0.0 || scale == 0.0 || !amp.is_finite() || !scale.is_finite() || !shift.is_finite() {
            return Err(Error::InvalidSpec(format!(
                "randsmooth needs finite nonzero amp and scale, got amp={amp}, scale={scale}"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bumps = std::array::from_fn(|_| Bump {
            center: rng.gen_range(0.5..8.0),
            width: rng.gen_range(0.3..2.0),
            amplitude: rng.gen_range(0.1..1.0),
        });
        Ok(Self {
            seed,
            floor,
            amp,
            scale,
            shift,
            bumps,
        })
    }

    pub fn bumps(&self) -> &[Bump; BUMP_COUNT] {
        &self.bumps
    }

    /// True when no affine wrapper is applied.
    pub fn is_plain(&self) -> bool {
        self.amp == 1.0 && self.scale == 1.0 && self.shift == 0.0
    }

    fn eval_derivative(&self, s: f64, order: u32) -> f64 {
        let y = (s - self.shift) / self.scale;
        let mut acc = if order == 0 { self.floor } else { 0.0 };
        for b in &self.bumps {
            let z = (y - b.center) / b.width;
            // d^n/dz^n exp(-z^2) = (-1)^n H_n(z) exp(-z^2), physicists' Hermite.
            let (mut h_prev, mut h) = (0.0, 1.0);
            for n in 0..order {
                let next = 2.0 * z * h - 2.0 * f64::from(n) * h_prev;
                h_prev = h;
                h = next;
            }
            let sign = if order.is_multiple_of(2) { 1.0 } else { -1.0 };
            acc += b.amplitude * sign * h * (-z * z).exp() / b.width.powi(order as i32);
        }
        self.amp * acc / self.scale.powi(order as i32)
    }
}

/// Extended real number returned by symbolic limits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedReal {
    NegInf,
    Finite(f64),
    PosInf,
}

impl ExtendedReal {
    pub fn finite(self) -> Option<f64> {
        match self {
            ExtendedReal::Finite(v) => Some(v),
            _ => None,
        }
    }

    fn signed_inf(sign: f64) -> Self {
        if sign > 0.0 {
            ExtendedReal::PosInf
        } else {
            ExtendedReal::NegInf
        }
    }

    /// Multiply by a finite nonzero constant.
    pub fn scale(self, c: f64) -> Self {
        match self {
            ExtendedReal::Finite(v) => ExtendedReal::Finite(c * v),
            ExtendedReal::PosInf => Self::signed_inf(c),
            ExtendedReal::NegInf => Self::signed_inf(-c),
        }
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::NegInf => write!(f, "-inf"),
            ExtendedReal::PosInf => write!(f, "+inf"),
            ExtendedReal::Finite(v) => write!(f, "{v}"),
        }
    }
}

/// A scalar function from the closed catalogue.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum FuncForm {
    Zero,
    Const(f64),
    /// `c * s^a`
    Power {
        c: f64,
        a: f64,
    },
    /// `c * exp(lambda * s)`
    Exp {
        c: f64,
        lambda: f64,
    },
    /// `a * s + b`
    Affine {
        a: f64,
        b: f64,
    },
    /// `s / (1 - eps * s)`
    Mobius(f64),
    RandomSmooth(RandomSmooth),
}

impl FuncForm {
    pub fn power(c: f64, a: f64) -> Self {
        FuncForm::Power { c, a }
    }

    pub fn exp(c: f64, lambda: f64) -> Self {
        FuncForm::Exp { c, lambda }
    }

    pub fn affine(a: f64, b: f64) -> Self {
        FuncForm::Affine { a, b }
    }

    /// Seeded smooth positive function with the default floor.
    pub fn random_smooth(seed: u64) -> Self {
        FuncForm::RandomSmooth(RandomSmooth::new(seed, DEFAULT_FLOOR).expect("default floor is valid"))
    }

    pub fn eval(&self, s: f64) -> Result<f64> {
        self.eval_derivative(s, 0)
    }

    /// Analytic `order`-th derivative at `s`.
    pub fn eval_derivative(&self, s: f64, order: u32) -> Result<f64> {
        let v = match self {
            FuncForm::Zero => 0.0,
            FuncForm::Const(c) => {
                if order == 0 {
                    *c
                } else {
                    0.0
                }
            }
            FuncForm::Power { c, a } => {
                let is_int = a.fract() == 0.0;
                if s < 0.0 && !is_int {
                    return Err(Error::Domain(format!("power({c},{a}) at negative argument {s}")));
                }
                let mut coef = *c;
                for j in 0..order {
                    coef *= a - f64::from(j);
                }
                if coef == 0.0 {
                    0.0
                } else {
                    let e = a - f64::from(order);
                    if s == 0.0 && e < 0.0 {
                        return Err(Error::Domain(format!("power({c},{a}) pole at 0")));
                    }
                    coef * pow(s, e)
                }
            }
            FuncForm::Exp { c, lambda } => c * lambda.powi(order as i32) * (lambda * s).exp(),
            FuncForm::Affine { a, b } => match order {
                0 => a * s + b,
                1 => *a,
                _ => 0.0,
            },
            FuncForm::Mobius(eps) => {
                let den = 1.0 - eps * s;
                if den == 0.0 {
                    return Err(Error::Domain(format!("mobius({eps}) pole at {s}")));
                }
                if order == 0 {
                    s / den
                } else {
                    // n! eps^(n-1) / (1 - eps s)^(n+1)
                    let fact: f64 = (1..=order).map(f64::from).product();
                    fact * eps.powi(order as i32 - 1) / den.powi(order as i32 + 1)
                }
            }
            FuncForm::RandomSmooth(r) => r.eval_derivative(s, order),
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Domain(format!(
                "{self} (derivative order {order}) is not finite at {s}"
            )))
        }
    }

    pub fn derivative(&self) -> Derivative {
        Derivative::of(self.clone(), 1)
    }

    /// Symbolic limit as `s -> +inf`.
    pub fn limit_at_pos_infinity(&self) -> Result<ExtendedReal> {
        use ExtendedReal::*;
        let lim = |c: f64, rate: f64| {
            if c == 0.0 {
                Finite(0.0)
            } else if rate > 0.0 {
                ExtendedReal::signed_inf(c)
            } else if rate == 0.0 {
                Finite(c)
            } else {
                Finite(0.0)
            }
        };
        Ok(match self {
            FuncForm::Zero => Finite(0.0),
            FuncForm::Const(c) => Finite(*c),
            FuncForm::Power { c, a } => lim(*c, *a),
            FuncForm::Exp { c, lambda } => lim(*c, *lambda),
            FuncForm::Affine { a, b } => {
                if *a == 0.0 {
                    Finite(*b)
                } else {
                    ExtendedReal::signed_inf(*a)
                }
            }
            FuncForm::Mobius(eps) => {
                if *eps == 0.0 {
                    PosInf
                } else {
                    Finite(-1.0 / eps)
                }
            }
            FuncForm::RandomSmooth(_) => {
                return Err(Error::Unsupported(
                    "limit of randsmooth is not available symbolically".into(),
                ))
            }
        })
    }

    /// The exponent when the form is a pure power `c * s^a`.
    pub fn power_exponent(&self) -> Option<f64> {
        match self {
            FuncForm::Power { a, .. } => Some(*a),
            _ => None,
        }
    }

    /// Leading amplitude: `c` for const/power/exp, `amp` for randsmooth.
    pub fn amplitude(&self) -> Option<f64> {
        match self {
            FuncForm::Zero => Some(0.0),
            FuncForm::Const(c) => Some(*c),
            FuncForm::Power { c, .. } | FuncForm::Exp { c, .. } => Some(*c),
            FuncForm::RandomSmooth(r) => Some(r.amp),
            FuncForm::Affine { .. } | FuncForm::Mobius(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, FuncForm::Zero) || matches!(self, FuncForm::Const(c) if *c == 0.0)
    }

    /// Parameter-wise comparison with relative tolerance `rel`.
    pub fn approx_eq(&self, other: &FuncForm, rel: f64) -> bool {
        let close = |a: f64, b: f64| (a - b).abs() <= rel * a.abs().max(b.abs()).max(1e-300);
        match (self, other) {
            (FuncForm::Zero, FuncForm::Zero) => true,
            (FuncForm::Const(a), FuncForm::Const(b)) => close(*a, *b),
            (FuncForm::Power { c: c1, a: a1 }, FuncForm::Power { c: c2, a: a2 }) => close(*c1, *c2) && close(*a1, *a2),
            (FuncForm::Exp { c: c1, lambda: l1 }, FuncForm::Exp { c: c2, lambda: l2 }) => {
                close(*c1, *c2) && close(*l1, *l2)
            }
            (FuncForm::Affine { a: a1, b: b1 }, FuncForm::Affine { a: a2, b: b2 }) => {
                close(*a1, *a2) && (close(*b1, *b2) || (b1 - b2).abs() <= rel)
            }
            (FuncForm::Mobius(e1), FuncForm::Mobius(e2)) => close(*e1, *e2),
            (FuncForm::RandomSmooth(r1), FuncForm::RandomSmooth(r2)) => {
                r1.seed == r2.seed
                    && r1.floor == r2.floor
                    && close(r1.amp, r2.amp)
                    && close(r1.scale, r2.scale)
                    && (close(r1.shift, r2.shift) || (r1.shift - r2.shift).abs() <= rel)
            }
            _ => false,
        }
    }
}

/// `s^e` with cheap paths for the exponents that dominate the PDE runs.
#[inline]
fn pow(s: f64, e: f64) -> f64 {
    if e.fract() == 0.0 && e.abs() < 64.0 {
        s.powi(e as i32)
    } else if (2.0 * e).fract() == 0.0 && e.abs() < 64.0 {
        s.powi((e - 0.5) as i32) * s.sqrt()
    } else {
        s.powf(e)
    }
}

/// Derivative of a catalogue form: closed form when the catalogue has one,
/// otherwise an analytic derivative of the given order of a base form.
#[derive(Debug, Clone, PartialEq)]
pub enum Derivative {
    Closed(FuncForm),
    Analytic { base: FuncForm, order: u32 },
}

impl Derivative {
    fn of(base: FuncForm, order: u32) -> Self {
        if order == 0 {
            return Derivative::Closed(base);
        }
        let closed = match &base {
            FuncForm::Zero | FuncForm::Const(_) => Some(FuncForm::Zero),
            FuncForm::Power { c, a } => {
                let mut coef = *c;
                for j in 0..order {
                    coef *= a - f64::from(j);
                }
                Some(if coef == 0.0 {
                    FuncForm::Zero
                } else {
                    FuncForm::power(coef, a - f64::from(order))
                })
            }
            FuncForm::Exp { c, lambda } => Some(if *lambda == 0.0 {
                FuncForm::Zero
            } else {
                FuncForm::exp(c * lambda.powi(order as i32), *lambda)
            }),
            FuncForm::Affine { a, .. } => Some(if order == 1 {
                FuncForm::Const(*a)
            } else {
                FuncForm::Zero
            }),
            FuncForm::Mobius(_) | FuncForm::RandomSmooth(_) => None,
        };
        match closed {
            Some(f) => Derivative::Closed(f),
            None => Derivative::Analytic { base, order },
        }
    }

    pub fn eval(&self, s: f64) -> Result<f64> {
        match self {
            Derivative::Closed(f) => f.eval(s),
            Derivative::Analytic { base, order } => base.eval_derivative(s, *order),
        }
    }

    pub fn derivative(&self) -> Derivative {
        match self {
            Derivative::Closed(f) => f.derivative(),
            Derivative::Analytic { base, order } => Derivative::of(base.clone(), order + 1),
        }
    }

    pub fn closed(&self) -> Option<&FuncForm> {
        match self {
            Derivative::Closed(f) => Some(f),
            Derivative::Analytic { .. } => None,
        }
    }
}

impl fmt::Display for FuncForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FuncForm::Zero => write!(f, "zero"),
            FuncForm::Const(c) => write!(f, "const({c})"),
            FuncForm::Power { c, a } => write!(f, "power({c},{a})"),
            FuncForm::Exp { c, lambda } => write!(f, "exp({c},{lambda})"),
            FuncForm::Affine { a, b } => write!(f, "affine({a},{b})"),
            FuncForm::Mobius(e) => write!(f, "mobius({e})"),
            FuncForm::RandomSmooth(r) => {
                if r.is_plain() {
                    write!(f, "randsmooth({},{})", r.seed, r.floor)
                } else {
                    write!(
                        f,
                        "randsmooth({},{},{},{},{})",
                        r.seed, r.floor, r.amp, r.scale, r.shift
                    )
                }
            }
        }
    }
}

/// Parse a real literal; `p/q` fractions are accepted for convenience.
pub fn parse_real(s: &str) -> Result<f64> {
    let s = s.trim();
    let bad = || Error::Parse(format!("invalid number '{s}'"));
    match s.split_once('/') {
        Some((num, den)) => {
            let n: f64 = num.trim().parse().map_err(|_| bad())?;
            let d: f64 = den.trim().parse().map_err(|_| bad())?;
            if d == 0.0 {
                return Err(bad());
            }
            Ok(n / d)
        }
        None => s.parse().map_err(|_| bad()),
    }
}

/// Split `name(a,b,...)` into the name and its argument strings.
pub(crate) fn split_call(text: &str) -> Result<(&str, Vec<&str>)> {
    let text = text.trim();
    match text.find('(') {
        None => Ok((text, Vec::new())),
        Some(open) => {
            let inner = text[open + 1..]
                .strip_suffix(')')
                .ok_or_else(|| Error::Parse(format!("missing ')' in '{text}'")))?;
            let args = if inner.trim().is_empty() {
                Vec::new()
            } else {
                inner.split(',').map(str::trim).collect()
            };
            Ok((text[..open].trim(), args))
        }
    }
}

impl FromStr for FuncForm {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let (name, args) = split_call(text)?;
        let arity = |n: usize| {
            if args.len() == n {
                Ok(())
            } else {
                Err(Error::Parse(format!(
                    "'{name}' takes {n} argument(s), got {} in '{text}'",
                    args.len()
                )))
            }
        };
        let num = |i: usize| parse_real(args[i]);
        match name.to_ascii_lowercase().as_str() {
            "zero" => {
                arity(0)?;
                Ok(FuncForm::Zero)
            }
            "const" => {
                arity(1)?;
                Ok(FuncForm::Const(num(0)?))
            }
            "power" => {
                arity(2)?;
                Ok(FuncForm::power(num(0)?, num(1)?))
            }
            "exp" => {
                arity(2)?;
                Ok(FuncForm::exp(num(0)?, num(1)?))
            }
            "affine" => {
                arity(2)?;
                Ok(FuncForm::affine(num(0)?, num(1)?))
            }
            "mobius" => {
                arity(1)?;
                Ok(FuncForm::Mobius(num(0)?))
            }
            "randsmooth" => {
                let seed: u64 = args
                    .first()
                    .ok_or_else(|| Error::Parse(format!("randsmooth needs a seed in '{text}'")))?
                    .parse()
                    .map_err(|_| Error::Parse(format!("invalid seed in '{text}'")))?;
                let r = match args.len() {
                    1 => RandomSmooth::new(seed, DEFAULT_FLOOR)?,
                    2 => RandomSmooth::new(seed, num(1)?)?,
                    5 => RandomSmooth::with_affine(seed, num(1)?, num(2)?, num(3)?, num(4)?)?,
                    n => {
                        return Err(Error::Parse(format!(
                            "randsmooth takes 1, 2 or 5 arguments, got {n} in '{text}'"
                        )))
                    }
                };
                Ok(FuncForm::RandomSmooth(r))
            }
            other => Err(Error::Parse(format!("unknown function form '{other}'"))),
        }
    }
}

impl TryFrom<String> for FuncForm {
    type Error = Error;

    fn try_from(value: String) -> Result<Self> {
        value.parse()
    }
}

impl From<FuncForm> for String {
    fn from(value: FuncForm) -> Self {
        value.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn eval_examples() {
        assert_eq!(FuncForm::power(1.0, -2.0).eval(2.0).unwrap(), 0.25);
        assert_eq!(FuncForm::Const(-1.0).eval(7.0).unwrap(), -1.0);
        assert_eq!(FuncForm::power(1.0, -0.5).eval(4.0).unwrap(), 0.5);
    }

    #[test]
    fn domain_errors_are_explicit() {
        assert!(matches!(FuncForm::power(1.0, -1.5).eval(-1.0), Err(Error::Domain(_))));
        assert!(matches!(FuncForm::power(1.0, -1.0).eval(0.0), Err(Error::Domain(_))));
        assert!(matches!(FuncForm::Mobius(0.5).eval(2.0), Err(Error::Domain(_))));
        // integer exponents are fine for negative arguments
        assert_eq!(FuncForm::power(1.0, -2.0).eval(-2.0).unwrap(), 0.25);
    }

    #[test]
    fn closed_derivatives() {
        let k = -1.5;
        assert_eq!(
            FuncForm::power(1.0, k).derivative(),
            Derivative::Closed(FuncForm::power(k, k - 1.0))
        );
        assert_eq!(FuncForm::Const(3.0).derivative(), Derivative::Closed(FuncForm::Zero));
        assert_eq!(
            FuncForm::exp(-2.0, 1.0).derivative(),
            Derivative::Closed(FuncForm::exp(-2.0, 1.0))
        );
        assert!(FuncForm::random_smooth(1).derivative().closed().is_none());
    }

    #[test]
    fn limits() {
        let e = 0.5_f64.exp();
        assert_eq!(
            FuncForm::affine(e, 0.0).limit_at_pos_infinity().unwrap(),
            ExtendedReal::PosInf
        );
        assert_eq!(
            FuncForm::Mobius(0.5).limit_at_pos_infinity().unwrap(),
            ExtendedReal::Finite(-2.0)
        );
        assert_eq!(
            FuncForm::Const(3.25).limit_at_pos_infinity().unwrap(),
            ExtendedReal::Finite(3.25)
        );
        assert_eq!(
            FuncForm::power(-1.0, 0.5).limit_at_pos_infinity().unwrap(),
            ExtendedReal::NegInf
        );
        assert!(matches!(
            FuncForm::random_smooth(3).limit_at_pos_infinity(),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn random_smooth_is_reproducible_and_bounded_below() {
        let a = FuncForm::random_smooth(42);
        let b = FuncForm::random_smooth(42);
        assert_eq!(a, b);
        for i in 0..2000 {
            let s = -5.0 + 0.01 * f64::from(i);
            let (va, vb) = (a.eval(s).unwrap(), b.eval(s).unwrap());
            assert_eq!(va.to_bits(), vb.to_bits());
            assert!(va >= DEFAULT_FLOOR);
        }
        assert_ne!(FuncForm::random_smooth(42), FuncForm::random_smooth(43));
    }

    #[test]
    fn parse_examples() {
        assert_eq!("power(1,-1.5)".parse::<FuncForm>().unwrap(), FuncForm::power(1.0, -1.5));
        assert_eq!("const(0)".parse::<FuncForm>().unwrap(), FuncForm::Const(0.0));
        assert_eq!("exp(-1,1)".parse::<FuncForm>().unwrap(), FuncForm::exp(-1.0, 1.0));
        assert_eq!(
            "randsmooth(42,0.5)".parse::<FuncForm>().unwrap(),
            FuncForm::random_smooth(42)
        );
        assert_eq!(
            "power(1, -4/3)".parse::<FuncForm>().unwrap(),
            FuncForm::power(1.0, -4.0 / 3.0)
        );
        assert!("power(1)".parse::<FuncForm>().is_err());
        assert!("sin(1)".parse::<FuncForm>().is_err());
        assert!("randsmooth(1,0)".parse::<FuncForm>().is_err());
    }

    fn forms() -> impl Strategy<Value = FuncForm> {
        let r = -50.0f64..50.0;
        prop_oneof![
            Just(FuncForm::Zero),
            r.clone().prop_map(FuncForm::Const),
            (r.clone(), r.clone()).prop_map(|(c, a)| FuncForm::power(c, a)),
            (r.clone(), r.clone()).prop_map(|(c, l)| FuncForm::exp(c, l)),
            (r.clone(), r.clone()).prop_map(|(a, b)| FuncForm::affine(a, b)),
            r.clone().prop_map(FuncForm::Mobius),
            (any::<u64>(), 0.01f64..5.0).prop_map(|(s, f)| FuncForm::RandomSmooth(RandomSmooth::new(s, f).unwrap())),
            (any::<u64>(), 0.01f64..5.0, 0.1f64..3.0, 0.1f64..3.0, r).prop_map(|(s, f, a, sc, sh)| {
                FuncForm::RandomSmooth(RandomSmooth::with_affine(s, f, a, sc, sh).unwrap())
            }),
        ]
    }

    proptest! {
        #[test]
        fn text_round_trip_is_exact(f in forms()) {
            let back: FuncForm = f.to_string().parse().unwrap();
            prop_assert_eq!(back, f);
        }

        #[test]
        fn derivative_matches_central_difference(f in forms(), s in 0.2f64..6.0) {
            if let FuncForm::Mobius(e) = f {
                // stay away from the pole
                prop_assume!((1.0 - e * s).abs() > 0.2);
            }
            if let FuncForm::Exp { lambda, .. } = f {
                prop_assume!(lambda.abs() < 10.0);
            }
            if let FuncForm::Power { a, .. } = f {
                prop_assume!(a.abs() < 10.0);
            }
            let h = 1e-5;
            let fd = (f.eval(s + h).unwrap() - f.eval(s - h).unwrap()) / (2.0 * h);
            let exact = f.derivative().eval(s).unwrap();
            let scale = exact.abs().max(f.eval(s).unwrap().abs()).max(1.0);
            prop_assert!((fd - exact).abs() <= 1e-6 * scale, "fd {} exact {}", fd, exact);
        }

        #[test]
        fn mobius_limit_is_minus_inverse(e in prop_oneof![-100.0f64..-1e-3, 1e-3f64..100.0]) {
            let lim = FuncForm::Mobius(e).limit_at_pos_infinity().unwrap();
            prop_assert_eq!(lim, ExtendedReal::Finite(-1.0 / e));
        }
    }

    #[test]
    fn random_smooth_second_derivative() {
        let f = FuncForm::random_smooth(7);
        let h = 1e-4;
        for s in [0.3, 1.1, 2.5, 4.0, 7.5] {
            let d1 = |x: f64| f.eval_derivative(x, 1).unwrap();
            let fd = (d1(s + h) - d1(s - h)) / (2.0 * h);
            assert_relative_eq!(
                fd,
                f.eval_derivative(s, 2).unwrap(),
                epsilon = 1e-6,
                max_relative = 1e-6
            );
        }
    }
}
