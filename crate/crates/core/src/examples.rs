//! Generators for the four optimality examples: a positive function whose
//! derivative changes sign, a Hölder gap with an unbounded ratio, the
//! critical root `|x|^(1/(k+alpha))`, and a root of unbounded variation.
//!
//! Everything here is `f64`: the thresholds of the Hölder-gap window are tied
//! to the double-precision exponent range.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::io::Write;

use serde::Serialize;

use crate::funcspace::{bump_mass, sample_analytic, smooth_step, total_variation, Analytic, GridFunction};
use crate::glaeser::glaeser_ratio;
use crate::weaklp::{conjugate_exponent, strong_lp_power_sum, weak_lp_norm};
use crate::{Error, Result};

/// Largest `|log|` of a double before `exp` underflows.
pub const LOG_FLOOR: f64 = 700.0;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExampleSeries {
    pub name: String,
    pub k: usize,
    pub alpha: f64,
    pub indices: Vec<i64>,
    pub quantities: BTreeMap<String, Vec<f64>>,
}

impl ExampleSeries {
    fn new(name: &str, k: usize, alpha: f64) -> Self {
        ExampleSeries { name: name.into(), k, alpha, indices: Vec::new(), quantities: BTreeMap::new() }
    }

    fn push(&mut self, index: i64, row: &[(&str, f64)]) {
        self.indices.push(index);
        for &(label, v) in row {
            self.quantities.entry(label.to_string()).or_default().push(v);
        }
    }

    pub fn get(&self, label: &str) -> Option<&[f64]> {
        self.quantities.get(label).map(Vec::as_slice)
    }

    /// Value of `label` at `index`.
    pub fn at(&self, label: &str, index: i64) -> Option<f64> {
        let i = self.indices.iter().position(|&j| j == index)?;
        self.get(label).map(|v| v[i])
    }

    /// One row per index, one column per quantity, columns in name order.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        write!(w, "index")?;
        for label in self.quantities.keys() {
            write!(w, ",{label}")?;
        }
        writeln!(w)?;
        for (i, idx) in self.indices.iter().enumerate() {
            write!(w, "{idx}")?;
            for col in self.quantities.values() {
                write!(w, ",{}", col[i])?;
            }
            writeln!(w)?;
        }
        Ok(())
    }
}

fn check_pair(k: usize, alpha: f64) -> Result<f64> {
    // conjugate_exponent validates both
    conjugate_exponent(k, alpha)?;
    Ok(k as f64 + alpha)
}

/// `v = sin^2 x + exp(-x^2)`.
pub fn sign_changing_function() -> Analytic {
    let s = Analytic::sin(1.0, 1.0, 0.0);
    Analytic::sum(vec![Analytic::product(vec![s.clone(), s]), Analytic::Gauss { center: 0.0, width: 1.0 }])
}

/// `v` at `x_n = 2 pi n + 1/n`: there `v ~ 1/n^2` and `v' ~ 2/n`, so the ratio
/// grows like `n^(k+alpha-2(k+alpha-1))`, i.e. linearly for `k = 2, alpha = 1`.
pub fn ex_sign_changing(n_list: &[usize], k: usize, alpha: f64) -> Result<ExampleSeries> {
    check_pair(k, alpha)?;
    let v = sign_changing_function();
    let mut s = ExampleSeries::new("ex_sign_changing", k, alpha);
    for &n in n_list {
        if n < 2 {
            return Err(Error::Domain(format!("index n = {n} must be at least 2")));
        }
        let nf = n as f64;
        let x = 2.0 * PI * nf + 1.0 / nf;
        let (vx, dv) = (v.eval(x, 0), v.eval(x, 1));
        s.push(
            n as i64,
            &[
                ("x_n", x),
                ("v", vx),
                ("dv", dv),
                ("ratio", glaeser_ratio(vx, dv, k, alpha)?),
                ("v_times_n2", vx * nf * nf),
                ("dv_times_n_over_2", dv * nf / 2.0),
            ],
        );
    }
    Ok(s)
}

/// Parameters of the Hölder-gap construction with logs of the tiny quantities.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GapTerms {
    pub n: usize,
    /// `log gamma_n = -(n+1)^2`.
    pub log_gamma: f64,
    /// `log a_n` with `a_n = gamma_n^(k+alpha) |log gamma_n|`.
    pub log_a: f64,
    /// `alpha_n / a_n`, the tail sum `sum_{i>n} a_i` relative to `a_n`.
    pub tail_over_a: f64,
    /// Bound on the part of the tail that was not summed, relative to `a_n`.
    pub tail_remainder: f64,
}

fn gap_log_a(i: usize, m: f64) -> f64 {
    let s = ((i + 1) as f64).powi(2);
    -m * s + s.ln()
}

pub fn gap_terms(n: usize, m: f64) -> GapTerms {
    let log_a = gap_log_a(n, m);
    let mut tail = 0.0;
    let mut i = n + 1;
    let remainder = loop {
        let term = (gap_log_a(i, m) - log_a).exp();
        let ratio = (gap_log_a(i + 1, m) - gap_log_a(i, m)).exp();
        tail += term;
        // the ratio of consecutive terms decreases, so the rest is below a geometric series
        let rest = term * ratio / (1.0 - ratio);
        if rest < 1e-12 * tail || term == 0.0 {
            break rest;
        }
        i += 1;
    };
    GapTerms { n, log_gamma: -((n + 1) as f64).powi(2), log_a, tail_over_a: tail, tail_remainder: remainder }
}

/// Indices where the asymptotics of the Hölder-gap example can be observed
/// in double precision: `(k+alpha)(n+1)^2 <= 700` keeps `gamma_n^(k+alpha)`
/// representable, and `(n - gamma_0/2)^3 > (k+alpha)(n+1)^2` makes the
/// perturbation `psi(z_n)` negligible against `a_n`.
pub fn holder_gap_window(k: usize, alpha: f64) -> Result<(usize, usize)> {
    let m = check_pair(k, alpha)?;
    let shift = (-1f64).exp() / 2.0;
    let hi = ((LOG_FLOOR / m).sqrt() - 1.0).floor() as usize;
    let lo = (1..=hi).find(|&n| (n as f64 - shift).powi(3) > m * ((n + 1) as f64).powi(2));
    match lo {
        Some(lo) if lo <= hi => Ok((lo, hi)),
        _ => Err(Error::Domain(format!("no representable indices for k = {k}, alpha = {alpha}"))),
    }
}

/// `|phi'(1/2)|^m / phi(1/2)^(m-1)` for the decreasing smooth step, the limit of `ratio_n / |log gamma_n|`.
pub fn holder_gap_constant(k: usize, alpha: f64) -> f64 {
    let m = k as f64 + alpha;
    let dphi = (-4f64).exp() / bump_mass();
    dphi.powf(m) / 0.5f64.powf(m - 1.0)
}

/// Values at `z_n = n + gamma_n/2` of `v = w + psi`, where `w` is built from
/// smooth steps of height `a_n` and width `gamma_n` and
/// `psi = atan exp(-(x - gamma_0/2)^3)`.
pub fn ex_holder_gap(k: usize, alpha: f64, n_list: &[usize]) -> Result<ExampleSeries> {
    let m = check_pair(k, alpha)?;
    if alpha >= 1.0 {
        return Err(Error::Domain("the Hölder gap needs alpha < 1".into()));
    }
    let (_, hi) = holder_gap_window(k, alpha)?;
    let beta = alpha / 2.0;
    let shift = (-1f64).exp() / 2.0;
    let phi_half = 0.5;
    let dphi_half = (-4f64).exp() / bump_mass();
    let mut s = ExampleSeries::new("ex_holder_gap", k, alpha);
    for &n in n_list {
        if n > hi {
            return Err(Error::Domain(format!(
                "n = {n} is past the representable limit n <= {hi} where (k+alpha)(n+1)^2 <= {LOG_FLOOR}"
            )));
        }
        let t = gap_terms(n, m);
        let z = n as f64 + (t.log_gamma).exp() / 2.0;
        let u = z - shift;
        // psi ~ exp(-u^3) and psi' ~ -3u^2 exp(-u^3) once u is large
        let log_psi = (u.powi(3).neg_exp().atan()).ln().max(-u.powi(3));
        let log_dpsi = (3.0 * u * u).ln() - u.powi(3) - (1.0 + (-2.0 * u.powi(3)).exp()).ln();
        let psi_over_a = (log_psi - t.log_a).exp();
        let dpsi_gamma_over_a = (log_dpsi + t.log_gamma - t.log_a).exp();
        // log v and log |v'| relative to a_n and a_n/gamma_n
        let log_v = t.log_a + (phi_half + t.tail_over_a + psi_over_a).ln();
        let log_dv = t.log_a - t.log_gamma + (dphi_half + dpsi_gamma_over_a).ln();
        let log_ratio = m * log_dv - (m - 1.0) * log_v;
        let abs_log_gamma = -t.log_gamma;
        s.push(
            n as i64,
            &[
                ("log_gamma", t.log_gamma),
                ("log_a", t.log_a),
                ("tail_over_a", t.tail_over_a),
                ("tail_remainder_over_a", t.tail_remainder),
                ("log_v", log_v),
                ("log_abs_dv", log_dv),
                ("log_ratio", log_ratio),
                ("ratio_over_log_gamma", (log_ratio - abs_log_gamma.ln()).exp()),
                ("log_psi_over_a", log_psi - t.log_a),
                ("log_dpsi_gamma_over_a", log_dpsi + t.log_gamma - t.log_a),
                // a_n / gamma_n^(k+beta) = gamma_n^(alpha-beta) |log gamma_n|
                ("membership_half_alpha", ((alpha - beta) * t.log_gamma).exp() * abs_log_gamma),
                ("membership_alpha", abs_log_gamma),
            ],
        );
    }
    Ok(s)
}

trait NegExp {
    fn neg_exp(self) -> f64;
}

impl NegExp for f64 {
    fn neg_exp(self) -> f64 {
        (-self).exp()
    }
}

/// Samples of `w` on `[-1, n_max + 1]`: `per_piece` points on every step
/// `[n, n + gamma_n]` and on every flat part, so that each step is resolved
/// however narrow it is. Indices past the representable window are clamped.
pub fn holder_gap_profile(k: usize, alpha: f64, n_max: usize, per_piece: usize) -> Result<Vec<(f64, f64)>> {
    let m = check_pair(k, alpha)?;
    let (_, hi) = holder_gap_window(k, alpha)?;
    let n_max = n_max.min(hi);
    let terms: Vec<GapTerms> = (0..=n_max).map(|n| gap_terms(n, m)).collect();
    let a: Vec<f64> = terms.iter().map(|t| t.log_a.exp()).collect();
    // alpha_n = alpha_{n+1} + a_{n+1}, so adjacent pieces meet exactly
    let mut tail = vec![terms[n_max].tail_over_a * a[n_max]; n_max + 1];
    for n in (0..n_max).rev() {
        tail[n] = tail[n + 1] + a[n + 1];
    }
    let mut out = vec![(-1.0, tail[0] + a[0])];
    for n in 0..=n_max {
        let g = terms[n].log_gamma.exp();
        for i in 0..=per_piece {
            let t = i as f64 / per_piece as f64;
            out.push((n as f64 + g * t, tail[n] + a[n] * smooth_step(t)));
        }
        for i in 1..=per_piece {
            let x = n as f64 + g + (1.0 - g) * i as f64 / per_piece as f64;
            out.push((x, tail[n]));
        }
    }
    Ok(out)
}

/// `f = |x|^(1/(k+alpha))` and its derivative on `n` cells of `(-1, 1)`.
/// For even `n` the grid contains `0`, where `f'` is set to `0`.
pub fn critical_root_grids(k: usize, alpha: f64, n: usize) -> Result<(GridFunction<f64>, GridFunction<f64>)> {
    let m = check_pair(k, alpha)?;
    let inv = 1.0 / m;
    let f = sample_analytic(&Analytic::constant(0.0), -1.0, 1.0, n + 1)?.map(|_| 0.0)?;
    let xs: Vec<f64> = f.xs().collect();
    let f = f.with_values(xs.iter().map(|x| x.abs().powf(inv)).collect())?;
    let fp = f.with_values(
        xs.iter()
            .map(|&x| if x == 0.0 { 0.0 } else { inv * x.abs().powf(inv - 1.0) * x.signum() })
            .collect(),
    )?;
    Ok((f, fp))
}

/// `h * sum |f'(x_i)|^q` over the `n` left-closed cells of `(-1, 1)`, streamed
/// without building the grid, with the sample at `0` counted as `0`.
pub fn critical_root_power_sum(k: usize, alpha: f64, q: f64, n: usize) -> Result<f64> {
    let m = check_pair(k, alpha)?;
    if n < 2 || n % 2 == 1 {
        return Err(Error::Size(format!("cell count {n} must be even and at least 2")));
    }
    let h = 2.0 / n as f64;
    let e = (1.0 / m - 1.0) * q;
    let c = m.powf(-q);
    // cells i < n/2 sit at x = -(n/2 - i) h; cells above sit at j h for j < n/2
    let half = n / 2;
    let mut acc = 0.0;
    for j in 1..=half {
        acc += (j as f64 * h).powf(e);
    }
    for j in 1..half {
        acc += (j as f64 * h).powf(e);
    }
    Ok(h * c * acc)
}

/// Weak and strong norms of `f'` for `f = |x|^(1/(k+alpha))` at `n, 2n, 4n, 8n`
/// cells. The weak norm tends to `2^(1/p) / (k+alpha)`; the strong `p`-th
/// power sum diverges logarithmically; the strong `0.9 p` norm converges.
pub fn ex_critical_root(k: usize, alpha: f64, n: usize) -> Result<ExampleSeries> {
    let p = conjugate_exponent(k, alpha)?;
    if n < 1000 {
        return Err(Error::Size(format!("n = {n} is below the minimum of 1000 cells")));
    }
    let n = n + n % 2;
    let q = 0.9 * p;
    let mut s = ExampleSeries::new("ex_critical_root", k, alpha);
    for level in 0..4 {
        let cells = n << level;
        let (_, fp) = critical_root_grids(k, alpha, cells)?;
        s.push(
            cells as i64,
            &[
                ("weak_norm", weak_lp_norm(&fp, p)?.value),
                ("strong_p_power_sum", strong_lp_power_sum(&fp, p)?),
                ("strong_q_norm", strong_lp_power_sum(&fp, q)?.powf(1.0 / q)),
                ("weak_norm_limit", 2f64.powf(1.0 / p) / (k as f64 + alpha)),
            ],
        );
    }
    Ok(s)
}

/// `gamma_n = 1 / ((n+3) log(n+3) log^2(log(n+3)))`.
pub fn non_bv_gamma(n: usize) -> f64 {
    let x = (n + 3) as f64;
    let l = x.ln();
    1.0 / (x * l * l.ln().powi(2))
}

/// `lambda_n = sum_{i >= n} gamma_i`: explicit terms up to `cutoff`, then
/// `int_cutoff^inf gamma = 1 / log log(cutoff + 3)` plus half the first
/// dropped term. Returns the value and a bound on its error.
pub fn non_bv_lambda(n: usize, cutoff: usize) -> (f64, f64) {
    let cutoff = cutoff.max(n);
    let mut acc = 0.0;
    for i in (n..cutoff).rev() {
        acc += non_bv_gamma(i);
    }
    let g = non_bv_gamma(cutoff);
    // gamma is decreasing: int_M^inf <= sum_{i>=M} <= int_M^inf + gamma_M
    (acc + 1.0 / ((cutoff + 3) as f64).ln().ln() + g / 2.0, g / 2.0)
}

pub const NON_BV_CUTOFF: usize = 1_000_000;
pub const DEFAULT_PER_BUMP: usize = 200;

/// `g = a_n b((x - lambda_{n+1}) / gamma_n)` on `[lambda_{n+1}, lambda_n]` with
/// the bump `b(t) = exp(-1/(t(1-t)))`, sampled with `per_bump` cells per bump
/// (rounded up to even so the bump's peak is a sample).
pub fn non_bv_bump_grid(k: usize, alpha: f64, n: usize, lambda_next: f64, per_bump: usize) -> Result<GridFunction<f64>> {
    let m = check_pair(k, alpha)?;
    let gamma = non_bv_gamma(n);
    let a = gamma.powf(m) * gamma.ln().abs();
    let cells = per_bump + per_bump % 2;
    let bump = Analytic::bump(lambda_next, lambda_next + gamma, a);
    sample_analytic(&bump, lambda_next, lambda_next + gamma, cells + 1)
}

/// Total variation of `f = g^(1/(k+alpha))` over the first `big_n` bumps,
/// bump by bump, against `2 e^(-4/m) sum gamma_n |log gamma_n|^(1/m)`.
pub fn ex_non_bv(k: usize, alpha: f64, big_n: usize, per_bump: usize) -> Result<ExampleSeries> {
    let m = check_pair(k, alpha)?;
    if big_n < 2 {
        return Err(Error::Domain(format!("N = {big_n} must be at least 2")));
    }
    if per_bump < 4 {
        return Err(Error::Size(format!("{per_bump} cells per bump is too coarse")));
    }
    let beta = alpha / 2.0;
    let (lambda_end, lambda_err) = non_bv_lambda(big_n, NON_BV_CUTOFF);
    let peak = (-4.0 / m).exp();
    let mut s = ExampleSeries::new("ex_non_bv", k, alpha);
    // lambda_n = lambda_N + sum_{n <= i < N} gamma_i
    let mut lambdas = vec![lambda_end; big_n + 1];
    for n in (0..big_n).rev() {
        lambdas[n] = lambdas[n + 1] + non_bv_gamma(n);
    }
    let mut tv = 0.0;
    let mut closed = 0.0;
    for n in 0..big_n {
        let gamma = non_bv_gamma(n);
        let g = non_bv_bump_grid(k, alpha, n, lambdas[n + 1], per_bump)?;
        let f = crate::funcspace::root_transform(&g, k, alpha)?;
        let bump_tv = total_variation(&f);
        tv += bump_tv;
        let abs_log = gamma.ln().abs();
        closed += 2.0 * peak * gamma * abs_log.powf(1.0 / m);
        s.push(
            n as i64,
            &[
                ("gamma", gamma),
                ("lambda", lambdas[n]),
                ("lambda_error", lambda_err),
                ("a", gamma.powf(m) * abs_log),
                ("tv_bump", bump_tv),
                ("tv_partial", tv),
                ("closed_form", closed),
                ("membership_half_alpha", gamma.powf(alpha - beta) * abs_log),
                ("membership_alpha", abs_log),
            ],
        );
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::finite_difference;

    #[test]
    fn sign_changing_asymptotics() {
        let s = ex_sign_changing(&[100], 2, 1.0).unwrap();
        assert!((s.at("v_times_n2", 100).unwrap() - 1.0).abs() < 0.02);
        assert!((s.at("dv_times_n_over_2", 100).unwrap() - 1.0).abs() < 0.02);
        let s = ex_sign_changing(&[50, 100, 200, 400], 2, 1.0).unwrap();
        let r = s.get("ratio").unwrap();
        for w in r.windows(2) {
            let q = w[1] / w[0];
            assert!((1.8..=2.2).contains(&q), "{q}");
        }
        assert!(ex_sign_changing(&[1], 2, 1.0).is_err());
    }

    #[test]
    fn sign_changing_v_is_positive() {
        let v = sign_changing_function();
        for n in [2usize, 10, 100] {
            let c = 2.0 * PI * n as f64;
            let g: GridFunction<f64> = sample_analytic(&v, c - 1.0, c + 1.0, 4001).unwrap();
            assert!(g.values().iter().all(|&x| x > 0.0));
        }
    }

    #[test]
    fn holder_gap_window_examples() {
        // (1, 1/2): m (n+1)^2 <= 700 gives n <= 20; the cube condition starts at 4
        assert_eq!(holder_gap_window(1, 0.5).unwrap(), (4, 20));
        let (lo, hi) = holder_gap_window(2, 0.5).unwrap();
        assert!(lo <= hi && hi == 15, "{lo} {hi}");
        let e = ex_holder_gap(1, 0.5, &[21]).unwrap_err();
        assert!(e.to_string().contains("n <= 20"), "{e}");
        assert!(ex_holder_gap(1, 1.0, &[5]).is_err());
    }

    #[test]
    fn holder_gap_ratio_band() {
        for (k, alpha) in [(1, 0.5), (2, 0.5), (1, 0.25)] {
            let (lo, hi) = holder_gap_window(k, alpha).unwrap();
            let ns: Vec<usize> = (lo..=hi).collect();
            let s = ex_holder_gap(k, alpha, &ns).unwrap();
            let c = holder_gap_constant(k, alpha);
            for (&n, &r) in ns.iter().zip(s.get("ratio_over_log_gamma").unwrap()) {
                assert!(r >= 0.9 * c && r <= 1.1 * c, "k={k} alpha={alpha} n={n}: {r} vs {c}");
            }
        }
    }

    #[test]
    fn holder_gap_tail_is_small() {
        let m = 1.5;
        for n in 0..20 {
            let t = gap_terms(n, m);
            assert!(t.tail_remainder <= 1e-12 * t.tail_over_a);
        }
        // the tail is dominated by its first term a_{n+1}/a_n
        let t = gap_terms(3, m);
        let first = (gap_log_a(4, m) - gap_log_a(3, m)).exp();
        assert!((t.tail_over_a / first - 1.0).abs() < 1e-3);
    }

    #[test]
    fn holder_gap_membership_and_limits() {
        let (lo, hi) = holder_gap_window(1, 0.5).unwrap();
        let ns: Vec<usize> = (0..=hi).collect();
        let s = ex_holder_gap(1, 0.5, &ns).unwrap();
        let half = s.get("membership_half_alpha").unwrap();
        let full = s.get("membership_alpha").unwrap();
        assert!(half.iter().cloned().fold(0.0, f64::max) < 2.0);
        assert!(full.windows(2).all(|w| w[1] > w[0]));
        assert!(full[hi] > 400.0);
        let lp = s.get("log_psi_over_a").unwrap();
        let ld = s.get("log_dpsi_gamma_over_a").unwrap();
        for n in lo..hi {
            assert!(lp[n + 1] - lp[n] <= -10f64.ln());
            assert!(ld[n + 1] - ld[n] <= -10f64.ln());
        }
    }

    #[test]
    fn holder_gap_profile_is_nonincreasing() {
        let pts = holder_gap_profile(1, 0.5, 8, 50).unwrap();
        for w in pts.windows(2) {
            assert!(w[1].0 >= w[0].0);
            assert!(w[1].1 - w[0].1 <= 1e-12, "{w:?}");
        }
        assert!(pts.iter().all(|&(_, v)| v > 0.0));
    }

    #[test]
    fn critical_root_weak_norm() {
        let s = ex_critical_root(1, 1.0, 100_000).unwrap();
        let w = s.at("weak_norm", 100_000).unwrap();
        assert!((w - 0.5f64.sqrt()).abs() < 0.02 * 0.5f64.sqrt(), "{w}");
        let s = ex_critical_root(2, 0.5, 10_000).unwrap();
        let lim = 2f64.powf(1.0 / conjugate_exponent(2, 0.5).unwrap()) / 2.5;
        assert!((s.get("weak_norm").unwrap()[0] - lim).abs() < 0.02 * lim);
        assert!(ex_critical_root(1, 1.0, 10).is_err());
    }

    #[test]
    fn critical_root_l2_diverges_logarithmically() {
        // the truncated integral 2 int_h^1 dx / (4x) grows by ln(2)/2 per halving of h
        let s = ex_critical_root(1, 1.0, 100_000).unwrap();
        let sums = s.get("strong_p_power_sum").unwrap();
        for w in sums.windows(2) {
            let inc = w[1] - w[0];
            assert!(inc >= 0.15 && (inc - 0.5 * 2f64.ln()).abs() < 1e-3, "{inc}");
        }
    }

    #[test]
    fn streamed_sum_matches_grid_sum() {
        let (_, fp) = critical_root_grids(1, 1.0, 2000).unwrap();
        let a = strong_lp_power_sum(&fp, 1.8).unwrap();
        let b = critical_root_power_sum(1, 1.0, 1.8, 2000).unwrap();
        assert!((a - b).abs() < 1e-12 * a);
    }

    #[test]
    fn critical_root_round_trip() {
        let (f, _) = critical_root_grids(2, 0.5, 1000).unwrap();
        let g: GridFunction<f64> = sample_analytic(&Analytic::poly(&[0.0, 1.0]), -1.0, 1.0, 1001).unwrap();
        for (fv, gv) in f.values().iter().zip(g.values()) {
            assert!((fv.powf(2.5) - gv.abs()).abs() < 1e-12);
        }
    }

    #[test]
    fn lambda_tail_bound() {
        let (l, err) = non_bv_lambda(0, 100_000);
        let (l2, err2) = non_bv_lambda(0, 1_000_000);
        assert!((l - l2).abs() <= err + err2);
        assert!(err < 1e-3 * l);
    }

    #[test]
    fn non_bv_total_variation() {
        let s = ex_non_bv(1, 0.5, 32, DEFAULT_PER_BUMP).unwrap();
        for n in [8, 16, 32] {
            let tv = s.at("tv_partial", n - 1).unwrap();
            let cf = s.at("closed_form", n - 1).unwrap();
            assert!((tv / cf - 1.0).abs() < 0.01, "N = {n}: {tv} vs {cf}");
        }
        let tv = s.get("tv_partial").unwrap();
        assert!(tv.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn non_bv_bumps_are_flat_at_the_ends() {
        let g = non_bv_bump_grid(1, 0.5, 5, 1.0, 200).unwrap();
        let scale = g.max_abs();
        for order in 1..=3 {
            let d = finite_difference(&g, order).unwrap();
            let ends = [d.values()[0], *d.values().last().unwrap()];
            assert!(ends.iter().all(|v| v.abs() <= 1e-12 * scale / g.step().powi(order as i32)), "order {order}");
        }
        let f = crate::funcspace::root_transform(&g, 1, 0.5).unwrap();
        for (fv, gv) in f.values().iter().zip(g.values()) {
            assert!((fv.powf(1.5) - gv).abs() <= 1e-14 * scale);
        }
    }

    #[test]
    fn csv_has_one_row_per_index() {
        let s = ex_sign_changing(&[2, 3], 2, 1.0).unwrap();
        let mut out = Vec::new();
        s.write_csv(&mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], "index,dv,dv_times_n_over_2,ratio,v,v_times_n2,x_n");
    }
}
