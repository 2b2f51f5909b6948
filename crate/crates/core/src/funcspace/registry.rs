//! Named test functions with their default sampling intervals.

use std::f64::consts::PI;

use serde::Serialize;

use super::Analytic;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NamedFunction {
    pub name: String,
    pub func: Analytic,
    pub a: f64,
    pub b: f64,
}

impl NamedFunction {
    fn new(name: &str, func: Analytic, a: f64, b: f64) -> Self {
        NamedFunction { name: name.to_string(), func, a, b }
    }

    /// The same function composed with `x -> lambda x`, on the preimage interval.
    pub fn dilated(&self, lambda: f64) -> Self {
        NamedFunction {
            name: format!("{}@{lambda}", self.name),
            func: self.func.clone().dilated(lambda),
            a: self.a / lambda,
            b: self.b / lambda,
        }
    }
}

fn sin_pi(freq: f64) -> Analytic {
    Analytic::sin(1.0, PI * freq, 0.0)
}

fn gauss(center: f64, width: f64) -> Analytic {
    Analytic::Gauss { center, width }
}

fn bump_train(supports: &[(f64, f64, f64)]) -> Analytic {
    Analytic::sum(supports.iter().map(|&(l, r, h)| Analytic::bump(l, r, h)).collect())
}

/// Functions used to exercise the decomposition of the main theorem. Every
/// interval is dyadic and every transversal zero of `g` sits at a dyadic
/// rational, so grids with a power-of-two number of cells sample the zeros
/// exactly.
pub fn decomposition_suite() -> Vec<NamedFunction> {
    vec![
        NamedFunction::new("sinpi", sin_pi(1.0), 0.0, 8.0),
        NamedFunction::new("sinpi-long", sin_pi(1.0), 0.0, 32.0),
        NamedFunction::new("sin2pi-gauss", Analytic::product(vec![sin_pi(2.0), gauss(0.0, 1.5)]), -2.0, 2.0),
        NamedFunction::new("sinpi-exp", Analytic::product(vec![Analytic::Exp { rate: -0.25 }, sin_pi(1.0)]), 0.0, 8.0),
        NamedFunction::new("sinpi-quad", Analytic::product(vec![Analytic::poly(&[1.0, 0.0, 1.0]), sin_pi(1.0)]), -2.0, 2.0),
        NamedFunction::new("sinpi-beat", Analytic::product(vec![sin_pi(1.0), sin_pi(0.25)]), 0.0, 8.0),
        NamedFunction::new("line", Analytic::poly(&[0.0, 1.0]), -1.0, 1.0),
        NamedFunction::new("quad-roots", Analytic::poly(&[-0.125, 0.25, 1.0]), -1.0, 1.0),
        NamedFunction::new("cubic", Analytic::poly(&[0.0, -1.0, 0.0, 1.0]), -2.0, 2.0),
        NamedFunction::new("cubic-shift", Analytic::poly(&[0.5, -1.0, -0.5, 1.0]), -2.0, 2.0),
        NamedFunction::new("square", Analytic::poly(&[0.0, 0.0, 1.0]), -1.0, 1.0),
        NamedFunction::new("quartic", Analytic::poly(&[1.0, 0.0, -2.0, 0.0, 1.0]), -2.0, 2.0),
        NamedFunction::new("quad-gauss", Analytic::product(vec![Analytic::poly(&[-0.25, 0.0, 1.0]), gauss(0.0, 1.0)]), -2.0, 2.0),
        NamedFunction::new(
            "bumps",
            bump_train(&[(0.0, 1.0, 1.0), (2.0, 3.0, 1.0), (4.0, 5.0, 1.0), (6.0, 7.0, 1.0)]),
            0.0,
            8.0,
        ),
        NamedFunction::new(
            "bumps-signed",
            bump_train(&(0..8).map(|i| (i as f64, i as f64 + 1.0, if i % 2 == 0 { 1.0 } else { -1.0 })).collect::<Vec<_>>()),
            0.0,
            8.0,
        ),
        NamedFunction::new(
            "bumps-plateau",
            bump_train(&[(0.0, 1.0, 1.0), (1.0, 2.0, 2.0), (4.0, 5.0, 0.5), (5.0, 6.0, 1.0), (6.0, 7.0, 3.0), (7.0, 8.0, 1.0)]),
            0.0,
            8.0,
        ),
        NamedFunction::new(
            "bumps-dense",
            bump_train(
                &(0..16)
                    .map(|i| (0.5 * i as f64, 0.5 * (i + 1) as f64, if i % 2 == 0 { 1.0 } else { 0.5 }))
                    .collect::<Vec<_>>(),
            ),
            0.0,
            8.0,
        ),
        NamedFunction::new("exp", Analytic::Exp { rate: 1.0 }, 0.0, 2.0),
        NamedFunction::new("sin-offset", Analytic::sum(vec![Analytic::constant(1.0), sin_pi(1.0).scaled(0.5)]), 0.0, 8.0),
        NamedFunction::new("x-bump", Analytic::product(vec![Analytic::poly(&[0.0, 1.0]), Analytic::bump(-1.0, 1.0, 1.0)]), -2.0, 2.0),
    ]
}

/// Nonnegative functions with a derivative of constant sign on their interval.
pub fn glaeser_suite() -> Vec<NamedFunction> {
    vec![
        NamedFunction::new("xsq-half", Analytic::poly(&[0.0, 0.0, 1.0]), 0.0, 10.0),
        NamedFunction::new("exp-decay", Analytic::Exp { rate: -1.0 }, 0.0, 5.0),
        NamedFunction::new("quartic-rise", Analytic::poly(&[0.0, 0.0, 0.0, 0.0, 1.0]), 0.0, 2.0),
        NamedFunction::new("cubic-rise", Analytic::poly(&[0.0, 0.0, 0.0, 1.0]), 0.0, 2.0),
        NamedFunction::new("gauss-tail", gauss(0.0, 1.0), 0.0, 3.0),
        NamedFunction::new("step", Analytic::SmoothStep { left: 0.0, right: 1.0 }, -0.5, 1.5),
        NamedFunction::new("bump-rise", Analytic::bump(0.0, 2.0, 1.0), 0.0, 1.0),
        NamedFunction::new("one-minus-sin", Analytic::sum(vec![Analytic::constant(1.0), sin_pi(0.5).scaled(-1.0)]), 0.0, 1.0),
    ]
}

/// Everything reachable by name from the command line.
pub fn all() -> Vec<NamedFunction> {
    let mut out = vec![
        NamedFunction::new("xsq", Analytic::poly(&[0.0, 0.0, 1.0]), -10.0, 10.0),
        NamedFunction::new("sin", Analytic::sin(1.0, 1.0, 0.0), 0.0, 2.0 * PI),
        NamedFunction::new("sin-train", Analytic::sin(1.0, 1.0, 0.0), 0.0, 20.0 * PI),
        NamedFunction::new(
            "sin2gauss",
            Analytic::sum(vec![Analytic::product(vec![Analytic::sin(1.0, 1.0, 0.0), Analytic::sin(1.0, 1.0, 0.0)]), gauss(0.0, 1.0)]),
            -10.0,
            10.0,
        ),
        NamedFunction::new("const", Analytic::constant(1.0), 0.0, 1.0),
    ];
    out.extend(decomposition_suite());
    out.extend(glaeser_suite());
    out
}

pub fn lookup(name: &str) -> Option<NamedFunction> {
    all().into_iter().find(|f| f.name == name)
}

pub fn names() -> Vec<String> {
    all().into_iter().map(|f| f.name).collect()
}
