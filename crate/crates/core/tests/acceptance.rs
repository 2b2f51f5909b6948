//! Acceptance criteria. Each criterion runs the library check from
//! `glaeser_core::suite` and an oracle computed here from closed forms or by
//! brute force, and prints one line. Exits non-zero if any criterion fails.

use std::f64::consts::{LN_2, PI};
use std::process::ExitCode;
use std::time::Instant;

use glaeser_core::decompose::{decompose, main_theorem_report_for, Kind};
use glaeser_core::examples::{ex_critical_root, ex_holder_gap, ex_non_bv, ex_sign_changing, holder_gap_window};
use glaeser_core::funcspace::registry::{self, NamedFunction};
use glaeser_core::funcspace::sample_analytic_with_derivatives;
use glaeser_core::magic::{epsilon_from_delta, escape_time, estimate_delta, Polynomial};
use glaeser_core::report::Status;
use glaeser_core::suite::{self, SuiteConfig};
use glaeser_core::weaklp::weak_lp_cells;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Oracle = fn(&SuiteConfig) -> Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn close(a: f64, b: f64, rel: f64) -> bool {
    ((a - b) / b).abs() <= rel
}

/// `P = 1 - x` reaches `-1` at `x = 2` while `P' = -1` never reaches `1`;
/// `epsilon = min(2^-2, 1/(1 * 2))`.
fn oracle_magic_k1(cfg: &SuiteConfig) -> Result<String, String> {
    let p: Polynomial<f64> = Polynomial::normalized(&[]).map_err(|e| e.to_string())?;
    ensure(p.coeffs == vec![1.0, -1.0], || format!("degree-1 family is {:?}", p.coeffs))?;
    let t = escape_time(&p, 1e3, 1e-12).map_err(|e| e.to_string())?;
    ensure((t - 2.0).abs() <= 1e-12, || format!("escape time of 1-x is {t}"))?;
    let eps = 0.25f64.min(1.0 / 2.0);
    ensure(epsilon_from_delta(1, 2.0).unwrap() == eps, || "epsilon formula".into())?;
    let start = Instant::now();
    let est = estimate_delta::<f64>(1, cfg.magic_budget, cfg.magic_horizon, cfg.seed).map_err(|e| e.to_string())?;
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 1.0, || format!("k=1 estimate took {secs:.2}s"))?;
    ensure((est.delta_lower - 2.0).abs() <= 1e-9, || format!("delta {}", est.delta_lower))?;
    Ok(format!("escape(1-x) = {t}, epsilon = {eps}"))
}

/// The witness of each `delta` must not escape on `[0, delta)`, checked on a
/// dense grid without the library's root finder; for `k = 2` the supremum is
/// `8`, approached by `1 - x + c x^2` as `c` decreases to `1/8`.
fn oracle_magic_fuzz(cfg: &SuiteConfig) -> Result<String, String> {
    let mut out = Vec::new();
    let start = Instant::now();
    for k in 1..=3 {
        let est = estimate_delta::<f64>(k, cfg.magic_budget, cfg.magic_horizon, cfg.seed).map_err(|e| e.to_string())?;
        let c = &est.witness.coeffs;
        let n = 200_000;
        for i in 0..n {
            let x = est.delta_lower * (1.0 - 1e-9) * i as f64 / n as f64;
            let v: f64 = c.iter().rev().fold(0.0, |acc, a| acc * x + a);
            let d: f64 = c.iter().enumerate().skip(1).rev().fold(0.0, |acc, (j, a)| acc * x + j as f64 * a);
            ensure(v > -1.0 && d < 1.0, || format!("k={k}: witness escapes at {x}"))?;
        }
        if k == 2 {
            ensure(est.delta_lower <= 8.0 && est.delta_lower > 7.99, || format!("k=2 delta {}", est.delta_lower))?;
        }
        out.push(format!("{:.6}", est.delta_lower));
    }
    let fuzz_secs = start.elapsed().as_secs_f64();
    ensure(fuzz_secs < 30.0, || format!("took {fuzz_secs:.1}s"))?;
    Ok(format!("witness deltas {}", out.join(", ")))
}

/// For `v = x^2`, `|v'|^2 / |v| = 4` at every nonzero point, so `C = 4 / H = 2`.
fn oracle_glaeser(cfg: &SuiteConfig) -> Result<String, String> {
    let n = cfg.glaeser_grid;
    let mut worst: f64 = 0.0;
    for i in 0..n {
        let x = -10.0 + 20.0 * i as f64 / (n - 1) as f64;
        if x != 0.0 {
            worst = worst.max((2.0 * x).powi(2) / (x * x) / 2.0);
        }
    }
    ensure((worst - 2.0).abs() <= 1e-12, || format!("direct ratio {worst}"))?;
    Ok(format!("direct ratio {worst}"))
}

/// Brute force: `sup over levels M` of `M * meas{|psi| > M}^(1/p)`, with `M`
/// approaching each distinct sample value from below.
fn brute_weak(cells: &[f64], h: f64, p: f64) -> f64 {
    let mut best: f64 = 0.0;
    for &level in cells {
        let m = level.abs();
        let count = cells.iter().filter(|v| v.abs() >= m).count();
        best = best.max(m * (count as f64 * h).powf(1.0 / p));
    }
    best
}

fn oracle_weak_lp(cfg: &SuiteConfig) -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5eed);
    let mut worst: f64 = 0.0;
    for _ in 0..cfg.weak_trials {
        let n = rng.gen_range(2..300);
        let h = rng.gen_range(0.001..1.0);
        let cells: Vec<f64> = (0..n).map(|_| if rng.gen_bool(0.2) { 0.0 } else { rng.gen_range(-50.0..50.0) }).collect();
        for p in [1.5, 2.0, 3.0] {
            let lib = weak_lp_cells(&cells, h, p).map_err(|e| e.to_string())?.value;
            let b = brute_weak(&cells, h, p);
            worst = worst.max(((lib - b) / b.max(1e-300)).abs());
        }
    }
    ensure(worst <= 1e-12, || format!("estimator vs brute force {worst:e}"))?;
    // constants: (b - a)^(1/p) exactly
    for p in [1.5, 2.0, 3.0] {
        let v = weak_lp_cells(&[1.0; 1000], 0.003, p).unwrap().value;
        ensure(close(v, 3f64.powf(1.0 / p), 1e-12), || format!("constant at p={p}: {v}"))?;
    }
    Ok(format!("brute-force agreement {worst:.1e}"))
}

/// `|f'| = |x|^(-1/2) / 2`: weak norm `sqrt(2)/2`, and the truncated integral
/// `2 int_h^1 dx/(4x)` grows by `ln(2)/2` per halving of `h`.
fn oracle_critical(cfg: &SuiteConfig) -> Result<String, String> {
    let s = ex_critical_root(1, 1.0, cfg.critical_cells).map_err(|e| e.to_string())?;
    let w = s.get("weak_norm").unwrap()[0];
    ensure(close(w, 0.5f64.sqrt(), 0.02), || format!("weak norm {w}"))?;
    let sums = s.get("strong_p_power_sum").unwrap();
    for pair in sums.windows(2) {
        let inc = pair[1] - pair[0];
        ensure((inc - LN_2 / 2.0).abs() <= 0.01 && inc >= 0.15, || format!("increment {inc}"))?;
    }
    // the L^1.8 sums at two fine resolutions, summed here directly
    let q = 1.8;
    let sum = |n: usize| -> f64 {
        let h = 2.0 / n as f64;
        let half = n / 2;
        let one_side: f64 = (1..=half).map(|j| (0.5 * (j as f64 * h).powf(-0.5)).powf(q)).sum();
        let other: f64 = (1..half).map(|j| (0.5 * (j as f64 * h).powf(-0.5)).powf(q)).sum();
        (h * (one_side + other)).powf(1.0 / q)
    };
    let n = cfg.critical_fine_cells;
    let (a, b) = (sum(n), sum(2 * n));
    ensure(close(b, a, 0.01), || format!("L1.8 change {}", (b - a) / a))?;
    Ok(format!("weak {w:.6}, L1.8 change {:.4}", (b - a) / a))
}

/// Bump `n` of `f` rises from 0 to its peak `(a_n e^-4)^(1/m)` and back, so it
/// contributes twice the peak.
fn oracle_non_bv(cfg: &SuiteConfig) -> Result<String, String> {
    let mut line = String::new();
    for (k, alpha) in [(1usize, 1.0f64), (2, 0.5)] {
        let m = k as f64 + alpha;
        let s = ex_non_bv(k, alpha, 32, cfg.non_bv_per_bump).map_err(|e| e.to_string())?;
        let mut closed = 0.0;
        let mut at = Vec::new();
        for n in 0..32 {
            let x = (n + 3) as f64;
            let gamma = 1.0 / (x * x.ln() * x.ln().ln().powi(2));
            let a = gamma.powf(m) * gamma.ln().abs();
            closed += 2.0 * (a * (-4f64).exp()).powf(1.0 / m);
            if [7, 15, 31].contains(&n) {
                let tv = s.at("tv_partial", n as i64).unwrap();
                ensure(close(tv, closed, 0.01), || format!("k={k}: N={}: {tv} vs {closed}", n + 1))?;
                at.push(tv);
            }
        }
        let (first, second) = (at[1] - at[0], at[2] - at[1]);
        ensure(first > 0.0 && second >= 0.5 * first, || format!("k={k}: partial sums {at:?}"))?;
        line = format!("tv(32) = {:.6}", at[2]);
    }
    Ok(line)
}

/// `v(x_n) ~ 1/n^2`, `v'(x_n) ~ 2/n`, so for `k = 2, alpha = 1` the ratio is `~ 8 n`.
fn oracle_sign_changing(_cfg: &SuiteConfig) -> Result<String, String> {
    let s = ex_sign_changing(&[50, 1000, 10_000], 2, 1.0).map_err(|e| e.to_string())?;
    for n in [1000i64, 10_000] {
        let r = s.at("ratio", n).unwrap();
        ensure(close(r, 8.0 * n as f64, 0.01), || format!("ratio at {n}: {r}"))?;
    }
    // k = 1: ratio tends to (2/n)^2 / n^-2 = 4 = 2 sup|v''| of the periodic part
    let s = ex_sign_changing(&[10_000], 1, 1.0).unwrap();
    let x = 2.0 * PI * 10_000.0 + 1e-4;
    ensure((s.at("x_n", 10_000).unwrap() - x).abs() < 1e-9, || "abscissa".into())?;
    let r = s.at("ratio", 10_000).unwrap();
    ensure((r - 4.0).abs() < 1e-3, || format!("k=1 ratio {r}"))?;
    Ok(format!("ratio/(8n) at 10^4: {:.6}", s.at("ratio", 10_000).unwrap() / 4.0))
}

/// `|phi'(1/2)|^m / phi(1/2)^(m-1)` with `phi(1/2) = 1/2` and
/// `phi'(1/2) = -e^-4 / I`, `I` computed here by Simpson's rule.
fn oracle_holder_gap(_cfg: &SuiteConfig) -> Result<String, String> {
    let n = 20_000;
    let f = |t: f64| if t <= 0.0 || t >= 1.0 { 0.0 } else { (-1.0 / (t * (1.0 - t))).exp() };
    let h = 1.0 / n as f64;
    let mass: f64 = (0..=n)
        .map(|i| {
            let w = if i == 0 || i == n { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
            w * f(i as f64 * h)
        })
        .sum::<f64>()
        * h
        / 3.0;
    let mut out = Vec::new();
    for (k, alpha) in [(1usize, 0.5f64), (2, 0.5)] {
        let m = k as f64 + alpha;
        let c = ((-4f64).exp() / mass).powf(m) / 0.5f64.powf(m - 1.0);
        let (lo, hi) = holder_gap_window(k, alpha).unwrap();
        let s = ex_holder_gap(k, alpha, &(lo..=hi).collect::<Vec<_>>()).unwrap();
        for (&r, n) in s.get("ratio_over_log_gamma").unwrap().iter().zip(lo..) {
            ensure(close(r, c, 0.1), || format!("k={k} n={n}: {r} vs {c}"))?;
        }
        // a_n / gamma_n^(k+beta) = gamma_n^(alpha-beta) (n+1)^2 with log gamma_n = -(n+1)^2
        let at = |n: usize, beta: f64| {
            let s = ((n + 1) as f64).powi(2);
            (-(alpha - beta) * s).exp() * s
        };
        ensure(at(hi, alpha / 2.0) < at(lo, alpha / 2.0), || "beta < alpha not decaying".into())?;
        ensure(at(hi, alpha) > at(lo, alpha), || "beta = alpha not growing".into())?;
        out.push(format!("window {lo}..{hi}"));
    }
    Ok(out.join(", "))
}

fn suite_function(name: &str) -> NamedFunction {
    registry::decomposition_suite().into_iter().find(|f| f.name == name).expect("registered")
}

/// `sin(pi x)` on `[0, 8]` with `k = 1`: `g g'` vanishes at the 15 interior
/// half-integers. The first component is C0; so is every component whose
/// right end leaves at most two of those points to its right, i.e. `b_J` in
/// `{7, 7.5, 8}`. That is 4 = 2k + 2 C0 components and 12 C1.
fn oracle_structure(cfg: &SuiteConfig) -> Result<String, String> {
    let n = registry::decomposition_suite().len();
    ensure(n == 20, || format!("{n} suite functions"))?;
    let f = suite_function("sinpi");
    let g = sample_analytic_with_derivatives(&f.func, f.a, f.b, cfg.decomposition_cells + 1, 1).map_err(|e| e.to_string())?;
    let d = decompose(&g, 1, 1.0, cfg.tol_zero).map_err(|e| e.to_string())?;
    let (c0, c1) = (d.count(Kind::C0), d.count(Kind::C1));
    ensure(d.complement_points().len() == 15, || format!("{} points", d.complement_points().len()))?;
    ensure(c0 == 4 && c1 == 12, || format!("{c0} C0, {c1} C1"))?;
    Ok(format!("{n} functions; sinpi: {c0} C0, {c1} C1"))
}

/// For `g = x` on `(-1, 1)` the root is `|x|^(1/m)`, whose derivative has weak
/// norm `2^(1/p) / m`; the decomposition must reproduce it.
fn oracle_stability(cfg: &SuiteConfig) -> Result<String, String> {
    let f = suite_function("line");
    let mut out = Vec::new();
    for k in 1..=3 {
        let m = k as f64 + 1.0;
        let p = m / (m - 1.0);
        let g = sample_analytic_with_derivatives(&f.func, f.a, f.b, cfg.decomposition_cells + 1, k).map_err(|e| e.to_string())?;
        let d = decompose(&g, k, 1.0, cfg.tol_zero).map_err(|e| e.to_string())?;
        let agg = main_theorem_report_for(&d, 1.0, None).map_err(|e| e.to_string())?;
        let exact = 2f64.powf(1.0 / p) / m;
        ensure(close(agg.whole_interval_norm, exact, 0.02), || format!("k={k}: {} vs {exact}", agg.whole_interval_norm))?;
        out.push(format!("{:.4}/{exact:.4}", agg.whole_interval_norm));
    }
    Ok(format!("line root norms {}", out.join(", ")))
}

fn main() -> ExitCode {
    let cfg = SuiteConfig::default();
    let oracles: [(&str, Oracle); 10] = [
        ("magic constants k=1", oracle_magic_k1),
        ("magic implication fuzz", oracle_magic_fuzz),
        ("classical Glaeser equality", oracle_glaeser),
        ("weak-Lp property suite", oracle_weak_lp),
        ("critical root", oracle_critical),
        ("non-BV root", oracle_non_bv),
        ("sign-changing derivative", oracle_sign_changing),
        ("Hölder gap", oracle_holder_gap),
        ("decomposition structure", oracle_structure),
        ("main constant stability", oracle_stability),
    ];
    let mut failed = 0;
    let total = Instant::now();
    for (i, (label, oracle)) in oracles.iter().enumerate() {
        let id = i + 1;
        let start = Instant::now();
        let check = suite::run_criterion(id, &cfg);
        let oracle = oracle(&cfg);
        let secs = start.elapsed().as_secs_f64();
        let (ok, what) = match (&check, &oracle) {
            (Ok(c), Ok(o)) => {
                let mut parts = vec![c.status.to_string()];
                parts.extend((!c.detail.is_empty()).then(|| c.detail.clone()));
                parts.push(format!("oracle: {o}"));
                (c.status == Status::Pass, parts.join("; "))
            }
            (Err(e), _) => (false, format!("error: {e}")),
            (Ok(c), Err(e)) => (false, format!("{}; oracle failed: {e}", c.status)),
        };
        if !ok {
            failed += 1;
        }
        let verdict = if ok { "PASS" } else { "FAIL" };
        println!("criterion {id:>2} {verdict} {label:<28} ({secs:.2}s) {what}");
    }
    println!("{} of 10 criteria passed in {:.1}s", 10 - failed, total.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
