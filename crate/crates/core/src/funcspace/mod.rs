//! Uniformly sampled functions of one real variable: sampling, finite
//! differences, total variation, root transform and Hölder constants.

mod analytic;
mod fd;
mod holder;
mod io;
mod jet;
pub mod registry;

pub use analytic::{bump_mass, smooth_step, Analytic};
pub use fd::finite_difference;
pub use holder::{holder_exhaustive, holder_lower_bound, HolderEstimate, DEFAULT_SEED};
pub use jet::Jet;

use serde::Serialize;

use crate::scalar::{check_alpha, check_k, Real};
use crate::{Error, Result};

/// Samples `values[i] = f(a + i h)` with `h = (b - a) / (n - 1)`, plus an
/// optional stack of derivative samples (`derivs[j - 1]` holds order `j`).
///
/// For measures and integrals each sample `i < n - 1` stands for the
/// left-closed cell `[x_i, x_i + h)`; the last sample closes the interval
/// and carries no cell.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GridFunction<T> {
    a: T,
    b: T,
    values: Vec<T>,
    derivs: Vec<Vec<T>>,
}

impl<T: Real> GridFunction<T> {
    pub fn new(a: T, b: T, values: Vec<T>) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && b > a) {
            return Err(Error::Domain(format!("grid interval [{a}, {b}] is empty or not finite")));
        }
        if values.len() < 2 {
            return Err(Error::Size(format!("a grid needs at least 2 samples, got {}", values.len())));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("sample {i} is not finite")));
        }
        Ok(GridFunction { a, b, values, derivs: Vec::new() })
    }

    /// Attaches a derivative stack; `derivs[j - 1]` must hold order `j`.
    pub fn with_derivatives(mut self, derivs: Vec<Vec<T>>) -> Result<Self> {
        for (j, d) in derivs.iter().enumerate() {
            if d.len() != self.values.len() {
                return Err(Error::Size(format!(
                    "derivative of order {} has {} samples, grid has {}",
                    j + 1,
                    d.len(),
                    self.values.len()
                )));
            }
            if let Some(i) = d.iter().position(|v| !v.is_finite()) {
                return Err(Error::Domain(format!("derivative of order {} is not finite at sample {i}", j + 1)));
            }
        }
        self.derivs = derivs;
        Ok(self)
    }

    /// Attaches finite-difference derivatives of orders `1..=max_order`.
    pub fn with_fd_derivatives(self, max_order: usize) -> Result<Self> {
        let derivs = (1..=max_order)
            .map(|j| finite_difference(&self, j).map(|g| g.values))
            .collect::<Result<Vec<_>>>()?;
        self.with_derivatives(derivs)
    }

    pub fn a(&self) -> T {
        self.a
    }

    pub fn b(&self) -> T {
        self.b
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn length(&self) -> T {
        self.b - self.a
    }

    pub fn step(&self) -> T {
        (self.b - self.a) / T::from_usize_lossy(self.values.len() - 1)
    }

    pub fn x(&self, i: usize) -> T {
        if i + 1 == self.values.len() {
            self.b
        } else {
            self.a + self.step() * T::from_usize_lossy(i)
        }
    }

    pub fn xs(&self) -> impl Iterator<Item = T> + '_ {
        (0..self.values.len()).map(move |i| self.x(i))
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Samples that own a measure cell (all but the last).
    pub fn cells(&self) -> &[T] {
        &self.values[..self.values.len() - 1]
    }

    /// Highest derivative order attached.
    pub fn derivative_order(&self) -> usize {
        self.derivs.len()
    }

    /// Samples of the derivative of order `j >= 1`; order 0 returns the values.
    pub fn derivative(&self, j: usize) -> Option<&[T]> {
        match j {
            0 => Some(&self.values),
            _ => self.derivs.get(j - 1).map(Vec::as_slice),
        }
    }

    /// The derivative of order `j` as a standalone grid.
    pub fn derivative_grid(&self, j: usize) -> Option<GridFunction<T>> {
        self.derivative(j).map(|d| GridFunction { a: self.a, b: self.b, values: d.to_vec(), derivs: Vec::new() })
    }

    /// Pointwise map of the values; the derivative stack is dropped.
    pub fn map(&self, f: impl Fn(T) -> T) -> Result<GridFunction<T>> {
        GridFunction::new(self.a, self.b, self.values.iter().map(|&v| f(v)).collect())
    }

    /// Same grid, new values.
    pub fn with_values(&self, values: Vec<T>) -> Result<GridFunction<T>> {
        if values.len() != self.values.len() {
            return Err(Error::Size(format!("expected {} samples, got {}", self.values.len(), values.len())));
        }
        GridFunction::new(self.a, self.b, values)
    }

    pub fn same_grid(&self, other: &GridFunction<T>) -> bool {
        self.values.len() == other.values.len() && self.a == other.a && self.b == other.b
    }

    pub fn max_abs(&self) -> T {
        max_abs(&self.values)
    }
}

pub(crate) fn max_abs<T: Real>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |m, &x| m.max(x.abs()))
}

fn check_sampling<T: Real>(a: T, b: T, n: usize) -> Result<()> {
    if !(b > a) {
        return Err(Error::Domain(format!("need b > a, got [{a}, {b}]")));
    }
    if n < 2 {
        return Err(Error::Size(format!("need at least 2 samples, got {n}")));
    }
    Ok(())
}

fn grid_x<T: Real>(a: T, b: T, n: usize, i: usize) -> T {
    if i + 1 == n {
        b
    } else {
        a + (b - a) * T::from_usize_lossy(i) / T::from_usize_lossy(n - 1)
    }
}

/// Samples `f` at `n` uniform points of `[a, b]`, without a derivative stack.
pub fn sample_analytic<T: Real>(f: &Analytic, a: T, b: T, n: usize) -> Result<GridFunction<T>> {
    check_sampling(a, b, n)?;
    let values = (0..n)
        .map(|i| {
            let x = grid_x(a, b, n, i);
            let v = f.eval(x, 0);
            if v.is_finite() {
                Ok(v)
            } else {
                Err(Error::Domain(format!("{f} is not finite at x = {x}")))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    GridFunction::new(a, b, values)
}

/// Samples `f` together with its exact derivatives of orders `1..=order`.
pub fn sample_analytic_with_derivatives<T: Real>(
    f: &Analytic,
    a: T,
    b: T,
    n: usize,
    order: usize,
) -> Result<GridFunction<T>> {
    check_sampling(a, b, n)?;
    let mut values = Vec::with_capacity(n);
    let mut derivs = vec![Vec::with_capacity(n); order];
    for i in 0..n {
        let x = grid_x(a, b, n, i);
        let jet = f.eval_jet(x, order);
        if let Some(j) = jet.derivatives().iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("derivative {j} of {f} is not finite at x = {x}")));
        }
        values.push(jet.value());
        for (j, d) in derivs.iter_mut().enumerate() {
            d.push(jet.get(j + 1));
        }
    }
    GridFunction::new(a, b, values)?.with_derivatives(derivs)
}

/// Sum of absolute increments between adjacent samples.
pub fn total_variation<T: Real>(f: &GridFunction<T>) -> T {
    f.values.windows(2).map(|w| (w[1] - w[0]).abs()).sum()
}

/// The nonnegative root `|g|^(1/(k+alpha))`.
pub fn root_transform<T: Real>(g: &GridFunction<T>, k: usize, alpha: T) -> Result<GridFunction<T>> {
    check_k(k)?;
    check_alpha(alpha)?;
    let inv = (T::from_usize_lossy(k) + alpha).recip();
    g.map(|v| v.abs().powf(inv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn sampling_examples() {
        let s: GridFunction<f64> = sample_analytic(&Analytic::sin(1.0, 1.0, 0.0), 0.0, PI, 3).unwrap();
        for (got, want) in s.values().iter().zip([0.0, 1.0, 0.0]) {
            assert!((got - want).abs() < 1e-12);
        }
        let c: GridFunction<f64> = sample_analytic(&Analytic::constant(1.0), 0.0, 1.0, 5).unwrap();
        assert!(c.values().iter().all(|&v| v == 1.0));
        assert_eq!(c.derivative_order(), 0);
        let q: GridFunction<f64> = sample_analytic(&Analytic::poly(&[0.0, 0.0, 1.0]), -1.0, 1.0, 5).unwrap();
        assert_eq!(q.values(), &[1.0, 0.25, 0.0, 0.25, 1.0]);
    }

    #[test]
    fn sampling_rejects_non_finite_and_bad_grids() {
        let f = Analytic::Exp { rate: 1000.0 };
        let err = sample_analytic::<f64>(&f, 0.0, 1.0, 11).unwrap_err();
        assert!(matches!(err, Error::Domain(ref m) if m.contains("x = 0.8")), "{err}");
        assert!(sample_analytic(&f, 1.0, 0.0, 11).is_err());
        assert!(matches!(sample_analytic(&f, 0.0, 1.0, 1), Err(Error::Size(_))));
        assert!(GridFunction::new(0.0, 1.0, vec![0.0, f64::NAN]).is_err());
    }

    #[test]
    fn total_variation_examples() {
        let line: GridFunction<f64> = sample_analytic(&Analytic::poly(&[0.0, 1.0]), 0.0f64, 1.0, 17).unwrap();
        assert!((total_variation(&line) - 1.0).abs() < 1e-15);
        let s: GridFunction<f64> = sample_analytic(&Analytic::sin(1.0, 1.0, 0.0), 0.0, 2.0 * PI, 10001).unwrap();
        assert!((total_variation(&s) - 4.0).abs() < 1e-6);
        let c: GridFunction<f64> = sample_analytic(&Analytic::constant(3.0), 0.0, 1.0, 7).unwrap();
        assert_eq!(total_variation(&c), 0.0);
    }

    #[test]
    fn root_transform_examples() {
        let g: GridFunction<f64> = GridFunction::new(0.0, 1.0, vec![-8.0; 4]).unwrap();
        let f = root_transform(&g, 2, 1.0).unwrap();
        assert!(f.values().iter().all(|&v| (v - 2.0).abs() < 1e-14));
        let z: GridFunction<f64> = GridFunction::new(0.0, 1.0, vec![0.0; 4]).unwrap();
        assert!(root_transform(&z, 1, 0.5).unwrap().values().iter().all(|&v| v == 0.0));
        // g = x on (-1, 1): f = |x|^(1/2), f(0.25) = 0.5
        let g: GridFunction<f64> = sample_analytic(&Analytic::poly(&[0.0, 1.0]), -1.0, 1.0, 9).unwrap();
        let f = root_transform(&g, 1, 1.0).unwrap();
        assert!((f.values()[5] - 0.5).abs() < 1e-15);
        assert!(root_transform(&g, 0, 1.0).is_err());
        assert!(root_transform(&g, 1, 0.0).is_err());
    }

    #[test]
    fn generic_over_f32() {
        let g = sample_analytic::<f32>(&Analytic::poly(&[0.0, 0.0, 1.0]), -1.0, 1.0, 5).unwrap();
        assert_eq!(g.values(), &[1.0f32, 0.25, 0.0, 0.25, 1.0]);
        assert_eq!(total_variation(&g), 2.0f32);
    }
}
