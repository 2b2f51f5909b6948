//! Weak-Lp (Marcinkiewicz) quasi-norms of sampled functions.
//!
//! A grid function is read as the step function that equals `values[i]` on
//! the cell `[x_i, x_i + h)`, `i < n - 1`. On that step function the
//! distribution `M -> meas{|psi| > M}` is piecewise constant, so the supremum
//! of `M * meas^(1/p)` is approached at the left of each sample level and the
//! discrete formula below is exact for the step function.

use std::ops::Range;

use serde::Serialize;

use crate::funcspace::GridFunction;
use crate::scalar::{check_alpha, check_k, Real};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeakNormResult<T> {
    pub p: T,
    pub value: T,
    /// Level `M` at which the supremum is approached.
    pub level: T,
    /// `meas{|psi| >= level}`, so that `value = level * measure_at_level^(1/p)`.
    pub measure_at_level: T,
}

/// The exponent `p` with `1/p + 1/(k+alpha) = 1`.
pub fn conjugate_exponent<T: Real>(k: usize, alpha: T) -> Result<T> {
    check_k(k)?;
    check_alpha(alpha)?;
    let m = T::from_usize_lossy(k) + alpha;
    Ok(m / (m - T::one()))
}

/// `h * #{cells with |psi| > M}`.
pub fn distribution_measure<T: Real>(psi: &GridFunction<T>, level: T) -> Result<T> {
    if !(level >= T::zero()) {
        return Err(Error::Domain(format!("level {level} must be nonnegative")));
    }
    let count = psi.cells().iter().filter(|v| v.abs() > level).count();
    Ok(psi.step() * T::from_usize_lossy(count))
}

fn check_p<T: Real>(p: T) -> Result<()> {
    if p > T::one() && p.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("weak-Lp exponent p = {p} must exceed 1")))
    }
}

/// Weak norm of the step function with the given cell values and width.
pub fn weak_lp_cells<T: Real>(cells: &[T], h: T, p: T) -> Result<WeakNormResult<T>> {
    check_p(p)?;
    let mut sorted: Vec<T> = cells.iter().map(|v| v.abs()).collect();
    sorted.sort_unstable_by(|x, y| y.partial_cmp(x).expect("finite samples"));
    let inv_p = p.recip();
    let mut best = WeakNormResult { p, value: T::zero(), level: T::zero(), measure_at_level: T::zero() };
    for (i, &s) in sorted.iter().enumerate() {
        if s <= T::zero() {
            break;
        }
        let measure = h * T::from_usize_lossy(i + 1);
        let value = s * measure.powf(inv_p);
        if value > best.value {
            best = WeakNormResult { p, value, level: s, measure_at_level: measure };
        }
    }
    Ok(best)
}

/// `sup_M M * meas{|psi| > M}^(1/p)` over the cells of the grid.
pub fn weak_lp_norm<T: Real>(psi: &GridFunction<T>, p: T) -> Result<WeakNormResult<T>> {
    weak_lp_cells(psi.cells(), psi.step(), p)
}

/// Weak norm restricted to a range of cell indices.
pub fn weak_lp_norm_on<T: Real>(psi: &GridFunction<T>, cells: Range<usize>, p: T) -> Result<WeakNormResult<T>> {
    let all = psi.cells();
    if cells.end > all.len() || cells.start > cells.end {
        return Err(Error::Size(format!("cell range {cells:?} outside 0..{}", all.len())));
    }
    weak_lp_cells(&all[cells], psi.step(), p)
}

/// `h * sum |psi|^p` over the cells (the p-th power of the strong norm).
pub fn strong_lp_power_sum<T: Real>(psi: &GridFunction<T>, p: T) -> Result<T> {
    if !(p >= T::one()) {
        return Err(Error::Domain(format!("Lp exponent p = {p} must be at least 1")));
    }
    Ok(psi.step() * psi.cells().iter().map(|v| v.abs().powf(p)).sum::<T>())
}

/// `(h * sum |psi|^p)^(1/p)`.
pub fn strong_lp_norm<T: Real>(psi: &GridFunction<T>, p: T) -> Result<T> {
    Ok(strong_lp_power_sum(psi, p)?.powf(p.recip()))
}

/// The constant of `||psi||_q <= C * ||psi||_{p,w} * |Omega|^(1/q - 1/p)` for `q < p`,
/// obtained by integrating the weak bound on the distribution function.
pub fn embedding_constant<T: Real>(p: T, q: T) -> T {
    (p / (p - q)).powf(q.recip())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::{sample_analytic, Analytic};

    fn constant(n: usize) -> GridFunction<f64> {
        GridFunction::new(0.0, 1.0, vec![1.0; n]).unwrap()
    }

    #[test]
    fn conjugate_exponent_examples() {
        assert_eq!(conjugate_exponent(1, 1.0f64).unwrap(), 2.0);
        assert_eq!(conjugate_exponent(2, 1.0).unwrap(), 1.5);
        assert!((conjugate_exponent(1, 0.5f64).unwrap() - 3.0).abs() < 1e-15);
        assert!(conjugate_exponent(0, 0.5).is_err());
        assert!(conjugate_exponent(1, 0.0f64).is_err());
    }

    #[test]
    fn distribution_measure_examples() {
        let one = constant(101);
        assert!((distribution_measure(&one, 0.5).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(distribution_measure(&one, 2.0).unwrap(), 0.0);
        // |x|^(-1/2) away from 0: |x|^(-1/2) > 2 iff |x| < 1/4
        let n = 100_001;
        let h = 2.0 / (n - 1) as f64;
        let vals: Vec<f64> = (0..n)
            .map(|i| {
                let x: f64 = -1.0 + i as f64 * h;
                if x.abs() < 1e-3 { 0.0 } else { x.abs().powf(-0.5) }
            })
            .collect();
        let psi: GridFunction<f64> = GridFunction::new(-1.0, 1.0, vals).unwrap();
        let m = distribution_measure(&psi, 2.0).unwrap();
        assert!((m - (0.5 - 2e-3)).abs() < 3.0 * h, "{m}");
    }

    #[test]
    fn weak_norm_of_constant() {
        let r = weak_lp_norm(&constant(11), 2.0).unwrap();
        assert!((r.value - 1.0).abs() < 1e-15);
        assert!((r.value - r.level * r.measure_at_level.powf(0.5)).abs() < 1e-15);
        assert!(weak_lp_norm(&constant(11), 1.0).is_err());
    }

    #[test]
    fn weak_norm_of_singular_weight() {
        let n = 20_001;
        let h = 1.0 / (n - 1) as f64;
        let vals: Vec<f64> = (0..n)
            .map(|i| {
                let x = i as f64 * h;
                if i == 0 || i == n - 1 { 0.0 } else { (x * (1.0 - x)).powf(-0.5) }
            })
            .collect();
        let psi: GridFunction<f64> = GridFunction::new(0.0, 1.0, vals).unwrap();
        assert!(weak_lp_norm(&psi, 2.0).unwrap().value <= 2.0);
    }

    #[test]
    fn strong_norm_examples() {
        assert!((strong_lp_norm(&constant(17), 3.0).unwrap() - 1.0).abs() < 1e-15);
        let x: GridFunction<f64> = sample_analytic(&Analytic::poly(&[0.0, 1.0]), 0.0f64, 1.0, 1_000_001).unwrap();
        assert!((strong_lp_norm(&x, 1.0).unwrap() - 0.5).abs() < 1e-6);
    }

    #[test]
    fn ties_take_the_full_level_set() {
        let psi: GridFunction<f64> = GridFunction::new(0.0, 4.0, vec![3.0, 3.0, 1.0, 0.0, 9.0]).unwrap();
        // cells 3, 3, 1, 0 with h = 1; the last sample has no cell
        let r = weak_lp_norm(&psi, 2.0).unwrap();
        assert!((r.value - 3.0 * 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(r.measure_at_level, 2.0);
    }

    #[test]
    fn restriction_checks_range() {
        let psi = constant(5);
        assert!(weak_lp_norm_on(&psi, 0..5, 2.0).is_err());
        assert!((weak_lp_norm_on(&psi, 1..3, 2.0).unwrap().value - 0.5f64.sqrt()).abs() < 1e-15);
    }
}
