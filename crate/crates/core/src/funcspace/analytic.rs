//! Closed-form test functions with exact derivatives.

use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;

use super::jet::Jet;
use crate::scalar::Real;

/// Closed-form real function of one variable. Parameters are stored as `f64`
/// and converted to the evaluation scalar on use.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Analytic {
    Const { value: f64 },
    /// Ascending coefficients `c0 + c1 x + ...`.
    Poly { coeffs: Vec<f64> },
    /// `amp * sin(freq * x + phase)`.
    Sin { amp: f64, freq: f64, phase: f64 },
    /// `exp(rate * x)`.
    Exp { rate: f64 },
    /// `exp(-((x - center) / width)^2)`.
    Gauss { center: f64, width: f64 },
    /// `height * exp(-1 / (t (1 - t)))` with `t = (x - left) / (right - left)`, zero off `(left, right)`.
    Bump { left: f64, right: f64, height: f64 },
    /// Smooth nonincreasing step: 1 left of `left`, 0 right of `right`, flat at both ends.
    SmoothStep { left: f64, right: f64 },
    /// `atan(exp(-(x - shift)^3))`.
    ArctanExpCubic { shift: f64 },
    Sum { terms: Vec<Analytic> },
    Product { factors: Vec<Analytic> },
    Scale { factor: f64, inner: Box<Analytic> },
    /// `x -> inner(factor * x)`.
    Dilate { factor: f64, inner: Box<Analytic> },
    /// `x -> inner(x - by)`.
    Shift { by: f64, inner: Box<Analytic> },
}

/// Integral of `exp(-1/(t(1-t)))` over `(0, 1)`.
pub fn bump_mass() -> f64 {
    *bump_table().last().unwrap() * 2.0
}

const GL8_NODES: [f64; 4] = [0.1834346424956498, 0.525_532_409_916_329, 0.7966664774136267, 0.9602898564975363];
const GL8_WEIGHTS: [f64; 4] = [0.362_683_783_378_362, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763];
const TABLE_PANELS: usize = 2048;

fn unit_bump(t: f64) -> f64 {
    if t <= 0.0 || t >= 1.0 {
        0.0
    } else {
        (-1.0 / (t * (1.0 - t))).exp()
    }
}

fn gl8(lo: f64, hi: f64) -> f64 {
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let mut acc = 0.0;
    for (&x, &w) in GL8_NODES.iter().zip(&GL8_WEIGHTS) {
        acc += w * (unit_bump(mid - half * x) + unit_bump(mid + half * x));
    }
    acc * half
}

/// Cumulative integral of the unit bump over `[0, i / (2 * TABLE_PANELS)]`, `i = 0..=TABLE_PANELS`.
fn bump_table() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let width = 0.5 / TABLE_PANELS as f64;
        let mut acc = 0.0;
        let mut out = Vec::with_capacity(TABLE_PANELS + 1);
        out.push(0.0);
        for p in 0..TABLE_PANELS {
            acc += gl8(p as f64 * width, (p + 1) as f64 * width);
            out.push(acc);
        }
        out
    })
}

/// `int_0^t exp(-1/(s(1-s))) ds` for `t` in `[0, 1/2]`.
fn bump_cumulative_half(t: f64) -> f64 {
    let table = bump_table();
    let width = 0.5 / TABLE_PANELS as f64;
    let p = ((t / width).floor() as usize).min(TABLE_PANELS - 1);
    table[p] + gl8(p as f64 * width, t)
}

/// The normalized smooth step `phi(t) = 1 - int_0^t bump / int_0^1 bump`.
pub fn smooth_step(t: f64) -> f64 {
    if t <= 0.0 {
        1.0
    } else if t >= 1.0 {
        0.0
    } else if t <= 0.5 {
        1.0 - bump_cumulative_half(t) / bump_mass()
    } else {
        bump_cumulative_half(1.0 - t) / bump_mass()
    }
}

/// Jet of `exp(-1/(t(1-t)))` where `t` is a jet in the evaluation variable.
fn unit_bump_jet<T: Real>(t: &Jet<T>) -> Jet<T> {
    let order = t.order();
    let t0 = t.value();
    if t0 <= T::zero() || t0 >= T::one() {
        return Jet::constant(T::zero(), order);
    }
    let u = t.mul(&t.scale(-T::one()).add_const(T::one()));
    let q = u.recip().scale(-T::one());
    // exp underflows well before the reciprocal powers overflow
    if q.value() < T::lit(-700.0) || !q.derivatives().iter().all(|d| d.is_finite()) {
        return Jet::constant(T::zero(), order);
    }
    q.exp()
}

fn affine<T: Real>(x: T, scale: f64, offset: f64, order: usize) -> Jet<T> {
    Jet::variable(x, order).scale(T::lit(scale)).add_const(T::lit(offset))
}

impl Analytic {
    pub fn constant(value: f64) -> Self {
        Analytic::Const { value }
    }

    pub fn poly(coeffs: &[f64]) -> Self {
        Analytic::Poly { coeffs: coeffs.to_vec() }
    }

    pub fn sin(amp: f64, freq: f64, phase: f64) -> Self {
        Analytic::Sin { amp, freq, phase }
    }

    pub fn bump(left: f64, right: f64, height: f64) -> Self {
        Analytic::Bump { left, right, height }
    }

    pub fn sum(terms: Vec<Analytic>) -> Self {
        Analytic::Sum { terms }
    }

    pub fn product(factors: Vec<Analytic>) -> Self {
        Analytic::Product { factors }
    }

    pub fn scaled(self, factor: f64) -> Self {
        Analytic::Scale { factor, inner: Box::new(self) }
    }

    pub fn dilated(self, factor: f64) -> Self {
        Analytic::Dilate { factor, inner: Box::new(self) }
    }

    pub fn shifted(self, by: f64) -> Self {
        Analytic::Shift { by, inner: Box::new(self) }
    }

    /// Derivatives `0..=order` at `x`.
    pub fn eval_jet<T: Real>(&self, x: T, order: usize) -> Jet<T> {
        match self {
            Analytic::Const { value } => Jet::constant(T::lit(*value), order),
            Analytic::Poly { coeffs } => {
                // Horner on jets keeps every derivative exact up to rounding.
                let var = Jet::variable(x, order);
                let mut acc = Jet::constant(T::zero(), order);
                for &c in coeffs.iter().rev() {
                    acc = acc.mul(&var).add_const(T::lit(c));
                }
                acc
            }
            Analytic::Sin { amp, freq, phase } => {
                let (s, _) = affine(x, *freq, *phase, order).sin_cos();
                s.scale(T::lit(*amp))
            }
            Analytic::Exp { rate } => affine(x, *rate, 0.0, order).exp(),
            Analytic::Gauss { center, width } => {
                let z = affine(x, 1.0 / width, -center / width, order);
                z.mul(&z).scale(-T::one()).exp()
            }
            Analytic::Bump { left, right, height } => {
                let len = right - left;
                let t = affine(x, 1.0 / len, -left / len, order);
                unit_bump_jet(&t).scale(T::lit(*height))
            }
            Analytic::SmoothStep { left, right } => {
                let len = right - left;
                let t = affine(x, 1.0 / len, -left / len, order);
                let value = T::lit(smooth_step(t.value().as_f64()));
                if order == 0 {
                    return Jet::constant(value, 0);
                }
                let t_low = Jet::from_derivatives(t.derivatives()[..order].to_vec());
                let slope = unit_bump_jet(&t_low).scale(-T::lit(1.0 / (bump_mass() * len)));
                let mut d = vec![value];
                d.extend_from_slice(slope.derivatives());
                Jet::from_derivatives(d)
            }
            Analytic::ArctanExpCubic { shift } => {
                let s = affine(x, 1.0, -shift, order);
                let u = s.powi(3).scale(-T::one());
                if u.value() > T::zero() {
                    // atan(e^u) = pi/2 - atan(e^-u) avoids overflow for large u
                    u.scale(-T::one()).exp().atan().scale(-T::one()).add_const(T::FRAC_PI_2())
                } else {
                    u.exp().atan()
                }
            }
            Analytic::Sum { terms } => terms
                .iter()
                .fold(Jet::constant(T::zero(), order), |acc, t| acc.add(&t.eval_jet(x, order))),
            Analytic::Product { factors } => factors
                .iter()
                .fold(Jet::constant(T::one(), order), |acc, f| acc.mul(&f.eval_jet(x, order))),
            Analytic::Scale { factor, inner } => inner.eval_jet(x, order).scale(T::lit(*factor)),
            Analytic::Dilate { factor, inner } => {
                let lam = T::lit(*factor);
                let inner_jet = inner.eval_jet(x * lam, order);
                let mut pow = T::one();
                let d = inner_jet
                    .into_derivatives()
                    .into_iter()
                    .map(|v| {
                        let out = v * pow;
                        pow = pow * lam;
                        out
                    })
                    .collect();
                Jet::from_derivatives(d)
            }
            Analytic::Shift { by, inner } => inner.eval_jet(x - T::lit(*by), order),
        }
    }

    /// The `order`-th derivative at `x`.
    pub fn eval<T: Real>(&self, x: T, order: usize) -> T {
        self.eval_jet(x, order).get(order)
    }

    /// A closed-form bound on `sup |f^(order)|` over the real line, when one is known.
    pub fn derivative_bound(&self, order: usize) -> Option<f64> {
        match self {
            Analytic::Const { value } => Some(if order == 0 { value.abs() } else { 0.0 }),
            Analytic::Poly { coeffs } => {
                let degree = coeffs.iter().rposition(|&c| c != 0.0).unwrap_or(0);
                (order > degree).then_some(0.0)
            }
            Analytic::Sin { amp, freq, .. } => Some(amp.abs() * freq.abs().powi(order as i32)),
            Analytic::Sum { terms } => terms.iter().map(|t| t.derivative_bound(order)).sum(),
            Analytic::Scale { factor, inner } => inner.derivative_bound(order).map(|b| b * factor.abs()),
            Analytic::Dilate { factor, inner } => {
                inner.derivative_bound(order).map(|b| b * factor.abs().powi(order as i32))
            }
            Analytic::Shift { inner, .. } => inner.derivative_bound(order),
            _ => None,
        }
    }
}

impl fmt::Display for Analytic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Analytic::Const { value } => write!(f, "{value}"),
            Analytic::Poly { coeffs } => write!(f, "poly{coeffs:?}"),
            Analytic::Sin { amp, freq, phase } => write!(f, "{amp}*sin({freq}x+{phase})"),
            Analytic::Exp { rate } => write!(f, "exp({rate}x)"),
            Analytic::Gauss { center, width } => write!(f, "gauss({center},{width})"),
            Analytic::Bump { left, right, height } => write!(f, "{height}*bump({left},{right})"),
            Analytic::SmoothStep { left, right } => write!(f, "step({left},{right})"),
            Analytic::ArctanExpCubic { shift } => write!(f, "atan(exp(-(x-{shift})^3))"),
            Analytic::Sum { terms } => {
                let parts: Vec<String> = terms.iter().map(|t| t.to_string()).collect();
                write!(f, "({})", parts.join(" + "))
            }
            Analytic::Product { factors } => {
                let parts: Vec<String> = factors.iter().map(|t| t.to_string()).collect();
                write!(f, "({})", parts.join(" * "))
            }
            Analytic::Scale { factor, inner } => write!(f, "{factor}*{inner}"),
            Analytic::Dilate { factor, inner } => write!(f, "{inner}∘({factor}x)"),
            Analytic::Shift { by, inner } => write!(f, "{inner}∘(x-{by})"),
        }
    }
}
