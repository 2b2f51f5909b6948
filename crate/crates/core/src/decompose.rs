//! Decomposition of `{g g' != 0}` into components and the component-wise
//! weak-Lp estimate of the derivative of the root `f = |g|^(1/(k+alpha))`.
//!
//! On the grid, a point is "in" when both `|g|` and `|g'|` exceed `tol_zero`
//! times their maxima. Runs of in-points are components, unless `g` or `g'`
//! changes sign between two adjacent in-points, in which case the crossing
//! (linearly interpolated) splits them. Runs of out-points one or two samples
//! long are isolated zeros; longer runs stand for zero intervals or
//! accumulation points, which the grid cannot tell apart.

use serde::Serialize;

use crate::funcspace::{max_abs, GridFunction};
use crate::glaeser::DEFAULT_REL_EPS;
use crate::scalar::{check_alpha, check_k, Real};
use crate::weaklp::{conjugate_exponent, weak_lp_cells, weak_lp_norm};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Kind {
    /// Not classified yet.
    Open,
    C0,
    C1,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Feature<T> {
    Point { x: T },
    Interval { left: T, right: T },
}

impl<T: Real> Feature<T> {
    fn left(&self) -> T {
        match *self {
            Feature::Point { x } => x,
            Feature::Interval { left, .. } => left,
        }
    }

    fn right(&self) -> T {
        match *self {
            Feature::Point { x } => x,
            Feature::Interval { right, .. } => right,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Component<T> {
    pub a_j: T,
    pub b_j: T,
    pub kind: Kind,
    pub c_j: Option<T>,
    pub d_j: Option<T>,
    /// `x_{J,h}` for `h = 1..=k`, filled in by [`verify_properties`].
    pub rolle_points: Vec<T>,
    /// First and last grid index inside the component.
    pub first: usize,
    pub last: usize,
    /// Index into `features` of the complement feature at `b_j`, if `b_j < b`.
    #[serde(skip)]
    next_feature: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Decomposition<T> {
    #[serde(skip)]
    pub g: GridFunction<T>,
    pub k: usize,
    pub alpha: T,
    pub tol_zero: T,
    pub components: Vec<Component<T>>,
    /// Complement features in increasing order.
    pub features: Vec<Feature<T>>,
    /// Complement runs two or three samples long, whose reading as point or
    /// interval may flip under refinement.
    pub borderline: Vec<(T, T)>,
}

impl<T: Real> Decomposition<T> {
    pub fn complement_points(&self) -> Vec<T> {
        self.features
            .iter()
            .filter_map(|f| match *f {
                Feature::Point { x } => Some(x),
                Feature::Interval { .. } => None,
            })
            .collect()
    }

    pub fn complement_intervals(&self) -> Vec<(T, T)> {
        self.features
            .iter()
            .filter_map(|f| match *f {
                Feature::Interval { left, right } => Some((left, right)),
                Feature::Point { .. } => None,
            })
            .collect()
    }

    pub fn count(&self, kind: Kind) -> usize {
        self.components.iter().filter(|c| c.kind == kind).count()
    }

    /// Membership mask of `{g g' != 0}` on the grid.
    pub fn in_mask(&self) -> Vec<bool> {
        in_mask(&self.g, self.tol_zero).expect("derivative checked at construction")
    }

    /// Grid cells `first..end` owned by a component (each sample owns `[x_i, x_i + h)`).
    pub fn cell_range(&self, c: &Component<T>) -> std::ops::Range<usize> {
        c.first..(c.last + 1).min(self.g.len() - 1)
    }
}

fn in_mask<T: Real>(g: &GridFunction<T>, tol: T) -> Result<Vec<bool>> {
    let dg = g
        .derivative(1)
        .ok_or_else(|| Error::Usage("decomposition needs g with its first derivative".into()))?;
    let gt = tol * g.max_abs();
    let dt = tol * max_abs(dg);
    Ok(g.values().iter().zip(dg).map(|(&v, &d)| v.abs() > gt && d.abs() > dt).collect())
}

fn crossing<T: Real>(x0: T, x1: T, y0: T, y1: T) -> T {
    x0 + (x1 - x0) * y0 / (y0 - y1)
}

/// Components of `{g g' != 0}` with their complement features; see the module docs.
pub fn locate_components<T: Real>(g: &GridFunction<T>, k: usize, alpha: T, tol_zero: T) -> Result<Decomposition<T>> {
    check_k(k)?;
    check_alpha(alpha)?;
    if !(tol_zero >= T::zero() && tol_zero < T::one()) {
        return Err(Error::Domain(format!("tol_zero = {tol_zero} must lie in [0, 1)")));
    }
    let mask = in_mask(g, tol_zero)?;
    let dg = g.derivative(1).expect("checked by in_mask");
    let v = g.values();
    let n = g.len();

    // (feature, grid index where the next component may start)
    let mut features: Vec<Feature<T>> = Vec::new();
    let mut borderline = Vec::new();
    let mut spans: Vec<(usize, usize, Option<usize>, Option<usize>)> = Vec::new(); // first, last, prev feature, next feature
    let mut i = 0;
    let mut open: Option<(usize, Option<usize>)> = None;
    while i < n {
        if mask[i] {
            if open.is_none() {
                open = Some((i, features.len().checked_sub(1)));
            }
            if i + 1 < n && mask[i + 1] {
                let mut cuts = Vec::new();
                if (v[i] > T::zero()) != (v[i + 1] > T::zero()) {
                    cuts.push(crossing(g.x(i), g.x(i + 1), v[i], v[i + 1]));
                }
                if (dg[i] > T::zero()) != (dg[i + 1] > T::zero()) {
                    cuts.push(crossing(g.x(i), g.x(i + 1), dg[i], dg[i + 1]));
                }
                if !cuts.is_empty() {
                    cuts.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
                    cuts.dedup();
                    let (first, prev) = open.take().expect("open component");
                    spans.push((first, i, prev, Some(features.len())));
                    for x in cuts {
                        features.push(Feature::Point { x });
                    }
                    open = Some((i + 1, Some(features.len() - 1)));
                }
            }
            i += 1;
            continue;
        }
        let start = i;
        while i < n && !mask[i] {
            i += 1;
        }
        let len = i - start;
        let touches = start == 0 || i == n;
        if (2..=3).contains(&len) {
            borderline.push((g.x(start), g.x(i - 1)));
        }
        if touches && len <= 2 {
            // zeros at the ends of the interval are not in (a, b)
            if let Some((first, prev)) = open.take() {
                spans.push((first, start - 1, prev, None));
            }
            continue;
        }
        let feature = if len <= 2 {
            let mid = (g.x(start) + g.x(i - 1)) / (T::one() + T::one());
            Feature::Point { x: mid }
        } else {
            Feature::Interval { left: g.x(start), right: g.x(i - 1) }
        };
        if let Some((first, prev)) = open.take() {
            spans.push((first, start - 1, prev, Some(features.len())));
        }
        features.push(feature);
    }
    if let Some((first, prev)) = open.take() {
        spans.push((first, n - 1, prev, None));
    }

    let components = spans
        .into_iter()
        .map(|(first, last, prev, next)| Component {
            a_j: prev.map_or(g.a(), |f| features[f].right()),
            b_j: next.map_or(g.b(), |f| features[f].left()),
            kind: Kind::Open,
            c_j: None,
            d_j: None,
            rolle_points: Vec::new(),
            first,
            last,
            next_feature: next,
        })
        .collect();
    Ok(Decomposition { g: g.clone(), k, alpha, tol_zero, components, features, borderline })
}

/// Number of complement points in `[b_J, b)`, or `None` when that set
/// contains an interval (infinitely many points).
fn points_to_the_right<T: Real>(d: &Decomposition<T>, c: &Component<T>) -> Option<usize> {
    let Some(start) = c.next_feature else { return Some(0) };
    let mut count = 0;
    for f in &d.features[start..] {
        match f {
            Feature::Point { .. } => count += 1,
            Feature::Interval { .. } => return None,
        }
    }
    Some(count)
}

/// C0 when `a_J = a`, or when `[b_J, b)` holds at most `2k` complement points
/// and no complement interval; C1 otherwise.
pub fn classify<T: Real>(mut d: Decomposition<T>) -> Decomposition<T> {
    let a = d.g.a();
    let limit = 2 * d.k;
    let kinds: Vec<Kind> = d
        .components
        .iter()
        .map(|c| {
            let sparse = matches!(points_to_the_right(&d, c), Some(n) if n <= limit);
            if c.a_j == a || sparse {
                Kind::C0
            } else {
                Kind::C1
            }
        })
        .collect();
    for (c, kind) in d.components.iter_mut().zip(kinds) {
        c.kind = kind;
    }
    d
}

/// For C1 components: `c_J = a_J` and `d_J` the `(2k+1)`-th complement point
/// counted from `b_J` itself, or the left end of the first complement
/// interval met before that.
pub fn expand<T: Real>(mut d: Decomposition<T>) -> Decomposition<T> {
    let need = 2 * d.k + 1;
    for idx in 0..d.components.len() {
        let c = &d.components[idx];
        if c.kind != Kind::C1 {
            continue;
        }
        let start = c.next_feature.expect("C1 components end before b");
        let mut count = 0;
        let mut end = None;
        for f in &d.features[start..] {
            match *f {
                Feature::Point { x } => {
                    count += 1;
                    if count == need {
                        end = Some(x);
                        break;
                    }
                }
                Feature::Interval { left, .. } => {
                    end = Some(left);
                    break;
                }
            }
        }
        let a_j = c.a_j;
        let c = &mut d.components[idx];
        c.c_j = Some(a_j);
        c.d_j = end;
    }
    d
}

/// locate, classify and expand in one go.
pub fn decompose<T: Real>(g: &GridFunction<T>, k: usize, alpha: T, tol_zero: T) -> Result<Decomposition<T>> {
    Ok(expand(classify(locate_components(g, k, alpha, tol_zero)?)))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PropertyReport<T> {
    pub c0_count: usize,
    pub c0_bound: usize,
    /// Largest number of open expanded intervals `(c_J, d_J)` covering one point.
    pub max_overlap: usize,
    pub overlap_bound: usize,
    pub expanded_length: T,
    pub expanded_length_bound: T,
    pub inclusion_violations: Vec<usize>,
    /// `(component, h)` pairs with no zero of `g^(h)` found in `[c_J, d_J]`.
    pub rolle_violations: Vec<(usize, usize)>,
}

impl<T: Real> PropertyReport<T> {
    pub fn violations(&self) -> usize {
        usize::from(self.c0_count > self.c0_bound)
            + usize::from(self.max_overlap > self.overlap_bound)
            + usize::from(self.expanded_length > self.expanded_length_bound)
            + self.inclusion_violations.len()
            + self.rolle_violations.len()
    }

    pub fn ok(&self) -> bool {
        self.violations() == 0
    }
}

/// Checks the component bound, inclusion, overlap, Rolle-point and
/// total-length properties, and records the Rolle points in `d`.
pub fn verify_properties<T: Real>(d: &mut Decomposition<T>) -> Result<PropertyReport<T>> {
    let k = d.k;
    let g = &d.g;
    if g.derivative_order() < k {
        return Err(Error::Usage(format!(
            "Rolle checks need derivatives through order {k}, g carries {}",
            g.derivative_order()
        )));
    }
    let (a, b, n, h) = (g.a(), g.b(), g.len(), g.step());
    let two = T::one() + T::one();
    let c1: Vec<usize> = (0..d.components.len()).filter(|&i| d.components[i].kind == Kind::C1).collect();

    let mut inclusion_violations = Vec::new();
    for &i in &c1 {
        let c = &d.components[i];
        let ok = match (c.c_j, c.d_j) {
            (Some(cj), Some(dj)) => a < cj && cj <= c.a_j && c.b_j <= dj && dj < b,
            _ => false,
        };
        if !ok {
            inclusion_violations.push(i);
        }
    }

    // overlap on the half-step lattice a + j h / 2
    let m = 2 * n - 1;
    let mut diff = vec![0i64; m + 1];
    let mut expanded_length = T::zero();
    for &i in &c1 {
        let c = &d.components[i];
        let (Some(cj), Some(dj)) = (c.c_j, c.d_j) else { continue };
        expanded_length = expanded_length + (dj - cj);
        let lo = ((cj - a) * two / h).floor().to_usize().unwrap_or(0) + 1;
        let hi = ((dj - a) * two / h).ceil().to_usize().unwrap_or(0).min(m);
        if lo < hi {
            diff[lo] += 1;
            diff[hi] -= 1;
        }
    }
    let mut max_overlap = 0;
    let mut run = 0i64;
    for step in diff.iter().take(m) {
        run += step;
        max_overlap = max_overlap.max(run as usize);
    }

    let mut rolle_violations = Vec::new();
    for &i in &c1 {
        let (cj, dj) = match (d.components[i].c_j, d.components[i].d_j) {
            (Some(cj), Some(dj)) => (cj, dj),
            _ => continue,
        };
        let lo = ((cj - a) / h).floor().to_usize().unwrap_or(0).saturating_sub(1);
        let hi = (((dj - a) / h).ceil().to_usize().unwrap_or(0) + 1).min(n - 1);
        let mut points = Vec::with_capacity(k);
        for order in 1..=k {
            let dh = g.derivative(order).expect("order checked");
            let tol = T::lit(10.0) * d.tol_zero * max_abs(dh);
            let mut found = None;
            for j in lo..hi {
                if (dh[j] > T::zero()) != (dh[j + 1] > T::zero()) {
                    let x = crossing(g.x(j), g.x(j + 1), dh[j], dh[j + 1]);
                    found = Some(x.max(cj).min(dj));
                    break;
                }
            }
            if found.is_none() {
                let (j, v) = (lo..=hi)
                    .map(|j| (j, dh[j].abs()))
                    .fold((lo, T::infinity()), |acc, (j, v)| if v < acc.1 { (j, v) } else { acc });
                if v <= tol {
                    found = Some(g.x(j));
                }
            }
            match found {
                Some(x) => points.push(x),
                None => {
                    rolle_violations.push((i, order));
                    points.push(T::nan());
                }
            }
        }
        d.components[i].rolle_points = points;
    }

    Ok(PropertyReport {
        c0_count: d.count(Kind::C0),
        c0_bound: 2 * k + 2,
        max_overlap,
        overlap_bound: 2 * k + 1,
        expanded_length,
        expanded_length_bound: T::from_usize_lossy(2 * k + 1) * (b - a),
        inclusion_violations,
        rolle_violations,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AggregateReport<T> {
    pub p: T,
    pub per_component_norms: Vec<T>,
    pub aggregate_p_power: T,
    pub whole_interval_norm: T,
    pub rhs_bracket: T,
    #[serde(rename = "empirical_C_main")]
    pub empirical_c_main: T,
}

impl<T: Real> AggregateReport<T> {
    /// `whole^p <= sum of parts^p`, with relative slack `1e-9`.
    pub fn superadditive(&self) -> bool {
        self.whole_interval_norm.powf(self.p) <= self.aggregate_p_power * T::lit(1.0 + 1e-9)
    }
}

/// Derivative of `f = |g|^(1/m)` from `g` and `g'`: `(1/m) |g|^(1/m - 1) sign(g) g'`
/// on the in-points of the decomposition, zero elsewhere.
pub fn root_derivative<T: Real>(d: &Decomposition<T>) -> Result<GridFunction<T>> {
    let m = T::from_usize_lossy(d.k) + d.alpha;
    let inv = m.recip();
    let dg = d.g.derivative(1).expect("checked at construction");
    let mask = d.in_mask();
    let values = d
        .g
        .values()
        .iter()
        .zip(dg)
        .zip(mask)
        .map(|((&v, &dv), inside)| if inside { inv * v.abs().powf(inv - T::one()) * v.signum() * dv } else { T::zero() })
        .collect();
    d.g.with_values(values)
}

/// Weak norms of `fprime` restricted to each component, their `p`-th power
/// sum and the norm on the whole interval. `rhs_bracket` and the constant are
/// left at zero; [`main_theorem_report`] fills them.
pub fn component_weak_norms<T: Real>(fprime: &GridFunction<T>, d: &Decomposition<T>, p: T) -> Result<AggregateReport<T>> {
    if !fprime.same_grid(&d.g) {
        return Err(Error::Size("f' and g are sampled on different grids".into()));
    }
    let h = fprime.step();
    let mut per = Vec::with_capacity(d.components.len());
    for c in &d.components {
        per.push(weak_lp_cells(&fprime.cells()[d.cell_range(c)], h, p)?.value);
    }
    let aggregate = per.iter().map(|v| v.powf(p)).sum();
    Ok(AggregateReport {
        p,
        per_component_norms: per,
        aggregate_p_power: aggregate,
        whole_interval_norm: weak_lp_norm(fprime, p)?.value,
        rhs_bracket: T::zero(),
        empirical_c_main: T::zero(),
    })
}

/// `max(H^(1/m) (b-a)^(1/p), sup|g'|^(1/m))` with `m = k + alpha`.
pub fn rhs_bracket<T: Real>(g: &GridFunction<T>, k: usize, alpha: T, holder: T) -> Result<T> {
    let p = conjugate_exponent(k, alpha)?;
    let inv = (T::from_usize_lossy(k) + alpha).recip();
    let dg = g
        .derivative(1)
        .ok_or_else(|| Error::Usage("g carries no first derivative".into()))?;
    Ok((holder.powf(inv) * g.length().powf(p.recip())).max(max_abs(dg).powf(inv)))
}

/// Weak norm of the root's derivative against the right-hand side of the
/// main estimate, using the default zero tolerance.
pub fn main_theorem_report<T: Real>(g: &GridFunction<T>, k: usize, alpha: T, holder: T) -> Result<AggregateReport<T>> {
    let d = decompose(g, k, alpha, T::lit(DEFAULT_REL_EPS))?;
    main_theorem_report_for(&d, holder, None)
}

/// As [`main_theorem_report`] on an existing decomposition, optionally with a
/// caller-supplied `f'`.
pub fn main_theorem_report_for<T: Real>(
    d: &Decomposition<T>,
    holder: T,
    fprime: Option<&GridFunction<T>>,
) -> Result<AggregateReport<T>> {
    if !(holder >= T::zero()) {
        return Err(Error::Domain(format!("Hölder constant {holder} must be nonnegative")));
    }
    let p = conjugate_exponent(d.k, d.alpha)?;
    let own;
    let fprime = match fprime {
        Some(f) => f,
        None => {
            own = root_derivative(d)?;
            &own
        }
    };
    let mut report = component_weak_norms(fprime, d, p)?;
    let rhs = rhs_bracket(&d.g, d.k, d.alpha, holder)?;
    report.rhs_bracket = rhs;
    report.empirical_c_main = if report.whole_interval_norm == T::zero() {
        T::zero()
    } else if rhs == T::zero() {
        return Err(Error::Degenerate("the right-hand side vanishes while the weak norm does not".into()));
    } else {
        report.whole_interval_norm / rhs
    };
    Ok(report)
}
