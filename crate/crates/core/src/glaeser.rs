//! Pointwise Glaeser ratios `|v'|^(k+alpha) / |v|^(k+alpha-1)` and the bounds
//! that control them.

use serde::Serialize;

use crate::funcspace::GridFunction;
use crate::scalar::{check_alpha, check_k, Real};
use crate::{Error, Result};

pub const DEFAULT_REL_EPS: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GlaeserReport<T> {
    pub k: usize,
    pub alpha: T,
    pub ratio_sup: T,
    pub bound_sup: T,
    #[serde(rename = "empirical_C")]
    pub empirical_c: T,
    /// Sign changes of `v`, and of `v'` when `k >= 2`, each given by the last
    /// sample before the crossing whose magnitude exceeds the zero tolerance.
    pub violations: Vec<usize>,
    /// Grid points with `|v| <= tol`, left out of every supremum.
    pub excluded: usize,
}

fn exponent<T: Real>(k: usize, alpha: T) -> Result<T> {
    check_k(k)?;
    check_alpha(alpha)?;
    Ok(T::from_usize_lossy(k) + alpha)
}

fn ratio_unchecked<T: Real>(v: T, dv: T, m: T) -> T {
    let (v, dv) = (v.abs(), dv.abs());
    if v == T::zero() {
        if dv == T::zero() {
            T::zero()
        } else {
            T::infinity()
        }
    } else {
        // the power of the quotient keeps tiny |v| from underflowing
        (dv / v).powf(m - T::one()) * dv
    }
}

/// `|dv|^(k+alpha) / |v|^(k+alpha-1)`; `+inf` when only `v` vanishes, `0` when both do.
pub fn glaeser_ratio<T: Real>(v: T, dv: T, k: usize, alpha: T) -> Result<T> {
    Ok(ratio_unchecked(v, dv, exponent(k, alpha)?))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RatioProfile<T> {
    /// Pointwise ratio, with `0` stored at singular points.
    pub profile: GridFunction<T>,
    /// Indices where `v = 0` and `dv != 0`.
    pub singular: Vec<usize>,
}

impl<T: Real> RatioProfile<T> {
    /// Largest finite ratio.
    pub fn sup(&self) -> T {
        self.profile.max_abs()
    }
}

pub fn ratio_profile<T: Real>(v: &GridFunction<T>, dv: &GridFunction<T>, k: usize, alpha: T) -> Result<RatioProfile<T>> {
    let m = exponent(k, alpha)?;
    if !v.same_grid(dv) {
        return Err(Error::Size("function and derivative are sampled on different grids".into()));
    }
    let mut singular = Vec::new();
    let values = v
        .values()
        .iter()
        .zip(dv.values())
        .enumerate()
        .map(|(i, (&v, &dv))| {
            let r = ratio_unchecked(v, dv, m);
            if r.is_finite() {
                r
            } else {
                singular.push(i);
                T::zero()
            }
        })
        .collect();
    Ok(RatioProfile { profile: v.with_values(values)?, singular })
}

/// `|v0|^(k+alpha-1) * max(H, |dv0| / d^(k+alpha-1))`: the right side of the
/// Glaeser inequality on `(x0 - d, x0 + d)`, without its constant.
pub fn interval_bound_bracket<T: Real>(v0: T, dv0: T, d: T, holder: T, k: usize, alpha: T) -> Result<T> {
    let m = exponent(k, alpha)?;
    if !(d > T::zero()) || !(holder >= T::zero()) {
        return Err(Error::Domain(format!("need d > 0 and H >= 0, got d = {d}, H = {holder}")));
    }
    let e = m - T::one();
    Ok(v0.abs().powf(e) * holder.max(dv0.abs() / d.powf(e)))
}

/// `max(H, g1sup * ((b-a) / ((x-a)(b-x)))^(k+alpha-1))`, the bound on
/// `|f'(x)|^(k+alpha)` for the root of `g` on a component `(a, b)`.
pub fn ab_pointwise_bound<T: Real>(x: T, a: T, b: T, holder: T, g1sup: T, k: usize, alpha: T) -> Result<T> {
    let m = exponent(k, alpha)?;
    if !(a < x && x < b) {
        return Err(Error::Domain(format!("x = {x} is not inside ({a}, {b})")));
    }
    if !(holder >= T::zero() && g1sup >= T::zero()) {
        return Err(Error::Domain("H and sup|g'| must be nonnegative".into()));
    }
    let w = (b - a) / ((x - a) * (b - x));
    Ok(holder.max(g1sup * w.powf(m - T::one())))
}

/// `H * L^(k+alpha-h)`, the bound on `|g^(h)|` over an interval of length `L`
/// on which `g^(h)` vanishes somewhere and `g^(k)` is Hölder with constant `H`.
pub fn derivative_chain_bound<T: Real>(h: usize, holder: T, len: T, k: usize, alpha: T) -> Result<T> {
    let m = exponent(k, alpha)?;
    if h == 0 || h > k {
        return Err(Error::Domain(format!("derivative order {h} outside 1..={k}")));
    }
    if !(len > T::zero()) {
        return Err(Error::Domain(format!("interval length {len} must be positive")));
    }
    Ok(holder * len.powf(m - T::from_usize_lossy(h)))
}

/// Sign changes of `values`, ignoring samples with magnitude at most `tol`:
/// each entry is the index of the last significant sample before a
/// significant sample of the opposite sign, so a crossing through samples
/// that are exactly zero is still reported.
pub(crate) fn sign_changes<T: Real>(values: &[T], tol: T) -> Vec<usize> {
    let mut out = Vec::new();
    let mut last: Option<(usize, bool)> = None;
    for (i, &v) in values.iter().enumerate() {
        if v.abs() <= tol {
            continue;
        }
        let pos = v > T::zero();
        if let Some((j, was)) = last {
            if was != pos {
                out.push(j);
            }
        }
        last = Some((i, pos));
    }
    out
}

pub fn empirical_constant<T: Real>(v: &GridFunction<T>, k: usize, alpha: T, holder: T) -> Result<GlaeserReport<T>> {
    empirical_constant_with(v, k, alpha, holder, T::lit(DEFAULT_REL_EPS))
}

/// Empirical constant of `|v'|^(k+alpha) <= C |v|^(k+alpha-1) H`, i.e. the
/// largest ratio divided by `H`. `v` must carry its first derivative.
pub fn empirical_constant_with<T: Real>(
    v: &GridFunction<T>,
    k: usize,
    alpha: T,
    holder: T,
    rel_eps: T,
) -> Result<GlaeserReport<T>> {
    let m = exponent(k, alpha)?;
    if !(holder >= T::zero()) {
        return Err(Error::Domain(format!("Hölder constant {holder} must be nonnegative")));
    }
    let dv = v
        .derivative(1)
        .ok_or_else(|| Error::Usage("the function carries no first derivative".into()))?;
    let tol = rel_eps * v.max_abs();
    let dtol = rel_eps * crate::funcspace::max_abs(dv);

    let mut ratio_sup = T::zero();
    let mut vmax = T::zero();
    let mut excluded = 0;
    for (&vi, &di) in v.values().iter().zip(dv) {
        if vi.abs() <= tol {
            excluded += 1;
            continue;
        }
        ratio_sup = ratio_sup.max(ratio_unchecked(vi, di, m));
        vmax = vmax.max(vi.abs());
    }

    let mut violations = sign_changes(v.values(), tol);
    if k >= 2 {
        violations.extend(sign_changes(dv, dtol));
        violations.sort_unstable();
        violations.dedup();
    }

    let empirical_c = if ratio_sup == T::zero() {
        T::zero()
    } else if holder == T::zero() {
        return Err(Error::Degenerate(format!(
            "H = 0 while the ratio reaches {ratio_sup}: v^({k}) is constant, so v is not of the required class"
        )));
    } else {
        ratio_sup / holder
    };
    Ok(GlaeserReport {
        k,
        alpha,
        ratio_sup,
        bound_sup: vmax.powf(m - T::one()) * holder,
        empirical_c,
        violations,
        excluded,
    })
}

/// Largest value of `|v'|^(k+alpha) / bracket` over interior grid points, where
/// the bracket uses the widest symmetric window `d = min(x-a, b-x)`. This is
/// the constant of the interval form of the inequality, which stays finite on
/// a compact window even where the whole-line form degenerates.
pub fn interval_constant<T: Real>(v: &GridFunction<T>, k: usize, alpha: T, holder: T) -> Result<T> {
    let m = exponent(k, alpha)?;
    let dv = v
        .derivative(1)
        .ok_or_else(|| Error::Usage("the function carries no first derivative".into()))?;
    let tol = T::lit(DEFAULT_REL_EPS) * v.max_abs();
    let mut best = T::zero();
    for i in 1..v.len() - 1 {
        let (vi, di) = (v.values()[i], dv[i]);
        if vi.abs() <= tol || di == T::zero() {
            continue;
        }
        let x = v.x(i);
        let d = (x - v.a()).min(v.b() - x);
        let e = m - T::one();
        // |v'|^m / (|v|^e max(H, |v'|/d^e)) written through the ratio to avoid overflow
        let lhs = ratio_unchecked(vi, di, m);
        let rhs = holder.max(di.abs() / d.powf(e));
        best = best.max(lhs / rhs);
    }
    Ok(best)
}
