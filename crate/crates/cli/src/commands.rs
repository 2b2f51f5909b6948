use std::fmt::Write as _;
use std::fs;
use std::io::BufReader;
use std::path::Path;
use std::time::Instant;

use clap::ValueEnum;
use glaeser_core::decompose::{decompose, main_theorem_report_for, root_derivative, verify_properties, Kind};
use glaeser_core::examples::{
    ex_critical_root, ex_holder_gap, ex_non_bv, ex_sign_changing, holder_gap_constant, holder_gap_profile,
    holder_gap_window, ExampleSeries,
};
use glaeser_core::funcspace::registry::{self, NamedFunction};
use glaeser_core::funcspace::{holder_exhaustive, sample_analytic_with_derivatives};
use glaeser_core::glaeser::{empirical_constant_with, ratio_profile};
use glaeser_core::magic::{estimate_delta, fuzz, poly_eval};
use glaeser_core::report::{Check, Status};
use glaeser_core::suite::{self, SuiteConfig};
use glaeser_core::weaklp::{conjugate_exponent, weak_lp_norm};
use glaeser_core::{Error, Grid, Result};
use serde::Serialize;

use crate::output::Outcome;

/// Tolerances and seeds shared by every command, echoed into every report.
#[derive(Clone, Debug, Serialize, clap::Args)]
pub struct Config {
    /// Seed for every random stream.
    #[arg(long, global = true, default_value_t = glaeser_core::magic::DEFAULT_SEED)]
    pub seed: u64,
    /// Relative level below which samples count as zero.
    #[arg(long, global = true, default_value_t = 1e-10)]
    pub tol_zero: f64,
    /// Sample points per polynomial when fuzzing the escape implication.
    #[arg(long, global = true, default_value_t = 400)]
    pub fuzz_points: usize,
    /// Cells per bump in the non-BV example.
    #[arg(long, global = true, default_value_t = glaeser_core::examples::DEFAULT_PER_BUMP)]
    pub per_bump: usize,
}

fn status(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

fn lookup(name: &str) -> Result<NamedFunction> {
    registry::lookup(name)
        .ok_or_else(|| Error::Usage(format!("unknown function `{name}`; known: {}", registry::names().join(", "))))
}

/// `Höld_alpha` of the `k`-th derivative: the sampled sup of the next
/// derivative when `alpha = 1`, otherwise the largest pairwise ratio of the
/// sampled `k`-th derivative. Both are lower estimates of the true constant.
fn estimate_holder(f: &NamedFunction, k: usize, alpha: f64) -> Result<(f64, &'static str)> {
    if alpha == 1.0 {
        let n = 1 << 16;
        let h = (0..=n)
            .map(|i| f.func.eval(f.a + (f.b - f.a) * i as f64 / n as f64, k + 1).abs())
            .fold(0.0, f64::max);
        Ok((h, "sampled sup of the next derivative"))
    } else {
        let g: Grid = sample_analytic_with_derivatives(&f.func, f.a, f.b, 4001, k)?;
        let dk = g.derivative_grid(k).expect("derivative was sampled");
        Ok((holder_exhaustive(&dk, alpha)?, "pairwise Hölder quotient of the sampled derivative"))
    }
}

fn holder_for(f: &NamedFunction, k: usize, alpha: f64, given: Option<f64>, o: &mut Outcome) -> Result<f64> {
    let (h, source) = match given {
        Some(h) => (h, "given"),
        None => estimate_holder(f, k, alpha)?,
    };
    o.report.input("holder", h).input("holder_source", source);
    Ok(h)
}

fn grid_csv(g: &Grid) -> Result<String> {
    let mut out = Vec::new();
    g.write_csv(&mut out)?;
    Ok(String::from_utf8(out).expect("ascii"))
}

pub fn magic(k: usize, budget: usize, horizon: f64, trials: Option<usize>, cfg: &Config) -> Result<Outcome> {
    let mut o = Outcome::new("magic");
    o.report.input("k", k).input("budget", budget).input("horizon", horizon).input("config", cfg);
    let est = estimate_delta::<f64>(k, budget, horizon, cfg.seed)?;
    o.line(format!("{:>3} {:>22} {:>22}  witness", "k", "delta_lower", "epsilon"));
    o.line(format!("{k:>3} {:>22.15} {:>22.15e}  {:?}", est.delta_lower, est.epsilon, est.witness.coeffs));
    if !est.sentinels.is_empty() {
        o.line(format!("{} candidates did not escape before the horizon", est.sentinels.len()));
    }
    o.csv(
        "magic",
        format!(
            "k,delta_lower,epsilon,witness\n{k},{},{},{}\n",
            est.delta_lower,
            est.epsilon,
            est.witness.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
        ),
    );
    let n = 400;
    let xs: Vec<f64> = (0..=n).map(|i| est.delta_lower * i as f64 / n as f64).collect();
    o.plot("witness", xs.iter().map(|&x| (x, poly_eval(&est.witness, x).0)));
    o.plot("witness_slope", xs.iter().map(|&x| (x, poly_eval(&est.witness, x).1)));
    if let Some(trials) = trials {
        o.report.input("fuzz_trials", trials);
        let r = fuzz(k, est.delta_lower, Some(&est.witness), trials, cfg.fuzz_points, cfg.seed)?;
        let st = if !r.hard.is_empty() {
            Status::Fail
        } else if !r.soft.is_empty() {
            Status::SoftFail
        } else if r.hypotheses_met == 0 {
            Status::Vacuous
        } else {
            Status::Pass
        };
        o.check(
            Check::new("implication counterexamples", st, (r.hard.len() + r.soft.len()) as f64, 0.0)
                .with_detail(format!("{} of {} trials met the hypotheses", r.hypotheses_met, r.trials)),
        );
        o.report.result("fuzz", &r);
    }
    o.report.result("estimate", &est);
    Ok(o)
}

pub fn verify(name: &str, k: usize, alpha: f64, grid: usize, holder: Option<f64>, cfg: &Config) -> Result<Outcome> {
    let mut o = Outcome::new("verify");
    let f = lookup(name)?;
    o.report.input("fn", name).input("interval", [f.a, f.b]).input("k", k).input("alpha", alpha).input("grid", grid);
    o.report.input("config", cfg);
    let h = holder_for(&f, k, alpha, holder, &mut o)?;
    let v: Grid = sample_analytic_with_derivatives(&f.func, f.a, f.b, grid, 1)?;
    let r = empirical_constant_with(&v, k, alpha, h, cfg.tol_zero)?;
    o.line(format!("{name} on [{}, {}], k = {k}, alpha = {alpha}, H = {h}", f.a, f.b));
    o.line(format!("ratio_sup   {:.12e}", r.ratio_sup));
    o.line(format!("bound_sup   {:.12e}", r.bound_sup));
    o.line(format!("empirical_C {:.12}", r.empirical_c));
    o.line(format!("excluded    {}", r.excluded));
    let hyp = if r.violations.is_empty() { Status::Pass } else { Status::Vacuous };
    let what = if k == 1 { "v" } else { "v and v'" };
    o.check(
        Check::new("sign hypotheses", hyp, r.violations.len() as f64, 0.0)
            .with_detail(format!("sign changes of {what}")),
    );
    if k == 1 && alpha == 1.0 {
        o.check(Check::at_most("classical constant", r.empirical_c, 2.0 * (1.0 + 1e-6)));
    } else {
        o.check(Check::new("finite constant", status(r.empirical_c.is_finite()), r.empirical_c, f64::INFINITY));
    }
    let dv = v.derivative_grid(1).expect("first derivative was sampled");
    let prof = ratio_profile(&v, &dv, k, alpha)?;
    o.plot("ratio", prof.profile.xs().zip(prof.profile.values().iter().copied()));
    o.csv("ratio", grid_csv(&prof.profile)?);
    o.report.result("glaeser", &r);
    Ok(o)
}

pub fn decomposition(name: &str, k: usize, alpha: f64, grid: usize, holder: Option<f64>, cfg: &Config) -> Result<Outcome> {
    let mut o = Outcome::new("decompose");
    let f = lookup(name)?;
    o.report.input("fn", name).input("interval", [f.a, f.b]).input("k", k).input("alpha", alpha).input("grid", grid);
    o.report.input("config", cfg);
    let h = holder_for(&f, k, alpha, holder, &mut o)?;
    let g: Grid = sample_analytic_with_derivatives(&f.func, f.a, f.b, grid, k)?;
    let mut d = decompose(&g, k, alpha, cfg.tol_zero)?;
    let props = verify_properties(&mut d)?;
    let fprime = root_derivative(&d)?;
    let agg = main_theorem_report_for(&d, h, Some(&fprime))?;

    o.line(format!("{name} on [{}, {}], k = {k}, alpha = {alpha}, H = {h}", f.a, f.b));
    o.line(format!(
        "{} components: {} C0, {} C1; {} complement features",
        d.components.len(),
        d.count(Kind::C0),
        d.count(Kind::C1),
        d.features.len()
    ));
    o.line(format!("{:>4} {:>14} {:>14} {:>5} {:>14} {:>14}", "J", "a_J", "b_J", "kind", "c_J", "d_J"));
    let mut csv = String::from("a_j,b_j,kind,c_j,d_j\n");
    let opt = |x: Option<f64>| x.map(|v| v.to_string()).unwrap_or_default();
    for (j, c) in d.components.iter().enumerate() {
        let kind = format!("{:?}", c.kind);
        o.line(format!("{j:>4} {:>14.6} {:>14.6} {kind:>5} {:>14} {:>14}", c.a_j, c.b_j, opt(c.c_j), opt(c.d_j)));
        let _ = writeln!(csv, "{},{},{kind},{},{}", c.a_j, c.b_j, opt(c.c_j), opt(c.d_j));
    }
    o.line(format!("p = {}, whole {:.6e}, sum of parts^p {:.6e}", agg.p, agg.whole_interval_norm, agg.aggregate_p_power));
    o.line(format!("empirical_C_main {:.6}", agg.empirical_c_main));
    o.csv("components", csv);

    o.check(Check::at_most("C0 count", props.c0_count as f64, props.c0_bound as f64));
    o.check(Check::at_most("overlap", props.max_overlap as f64, props.overlap_bound as f64));
    o.check(Check::at_most("expanded length", props.expanded_length, props.expanded_length_bound));
    o.check(Check::at_most("inclusion violations", props.inclusion_violations.len() as f64, 0.0));
    o.check(Check::at_most("Rolle violations", props.rolle_violations.len() as f64, 0.0));
    o.check(Check::at_most(
        "superadditivity",
        agg.whole_interval_norm.powf(agg.p),
        agg.aggregate_p_power * (1.0 + 1e-9),
    ));
    o.check(Check::new(
        "finite main constant",
        status(agg.empirical_c_main.is_finite()),
        agg.empirical_c_main,
        f64::INFINITY,
    ));
    o.plot("g", g.xs().zip(g.values().iter().copied()));
    o.plot("root_derivative", fprime.xs().zip(fprime.values().iter().copied()));
    o.report.result("decomposition", &d).result("properties", &props).result("aggregate", &agg);
    Ok(o)
}

fn read_grid(path: &Path) -> Result<Grid> {
    let text = fs::read_to_string(path)?;
    let first = text.lines().find(|l| !l.trim().is_empty() && !l.starts_with('#')).unwrap_or("");
    let r = BufReader::new(text.as_bytes());
    if first.contains(',') {
        Grid::read_csv(r)
    } else {
        Grid::read_xy(r)
    }
}

pub fn weaklp(input: &Path, p: f64, cfg: &Config) -> Result<Outcome> {
    let mut o = Outcome::new("weaklp");
    o.report.input("input", input.display().to_string()).input("p", p).input("config", cfg);
    if !(p > 1.0) {
        return Err(Error::Domain(format!("p = {p} must exceed 1")));
    }
    let psi = read_grid(input)?;
    let r = weak_lp_norm(&psi, p)?;
    o.line(format!("{} samples on [{}, {}]", psi.len(), psi.a(), psi.b()));
    o.line(format!("value            {:.12}", r.value));
    o.line(format!("level            {:.12}", r.level));
    o.line(format!("measure_at_level {:.12}", r.measure_at_level));
    let again = r.level * r.measure_at_level.powf(1.0 / p);
    o.check(Check::at_most("level times measure", (again - r.value).abs(), 1e-12 * r.value.max(1.0)));
    // decreasing rearrangement, the curve whose weighted sup is the norm
    let mut s: Vec<f64> = psi.cells().iter().map(|v| v.abs()).collect();
    s.sort_by(|a, b| b.total_cmp(a));
    let h = psi.step();
    o.plot("rearrangement", s.iter().enumerate().map(|(i, v)| ((i + 1) as f64 * h, *v)));
    o.report.result("weak_norm", &r);
    Ok(o)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExampleName {
    #[value(alias = "ex_sign_changing")]
    SignChanging,
    #[value(alias = "ex_holder_gap")]
    HolderGap,
    #[value(alias = "ex_critical_root")]
    CriticalRoot,
    #[value(alias = "ex_non_bv")]
    NonBv,
}

impl ExampleName {
    fn defaults(self) -> (usize, f64, usize) {
        match self {
            ExampleName::SignChanging => (2, 1.0, 1600),
            ExampleName::HolderGap => (1, 0.5, 0),
            ExampleName::CriticalRoot => (1, 1.0, 100_000),
            ExampleName::NonBv => (1, 1.0, 32),
        }
    }
}

fn series_out(o: &mut Outcome, s: &ExampleSeries) -> Result<()> {
    let mut buf = Vec::new();
    s.write_csv(&mut buf)?;
    o.csv(&s.name, String::from_utf8(buf).expect("ascii"));
    for (label, vals) in &s.quantities {
        o.plot(&format!("{}_{label}", s.name), s.indices.iter().zip(vals.iter()));
    }
    let labels: Vec<&String> = s.quantities.keys().collect();
    let mut head = format!("{:>10}", "index");
    for l in &labels {
        let _ = write!(head, " {:>22}", l);
    }
    o.line(head);
    for (i, idx) in s.indices.iter().enumerate() {
        let mut row = format!("{idx:>10}");
        for l in &labels {
            let _ = write!(row, " {:>22.12e}", s.quantities[*l][i]);
        }
        o.line(row);
    }
    o.report.result("series", s);
    Ok(())
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

pub fn example(name: ExampleName, k: Option<usize>, alpha: Option<f64>, big_n: Option<usize>, cfg: &Config) -> Result<Outcome> {
    let mut o = Outcome::new("example");
    let (dk, da, dn) = name.defaults();
    let (k, alpha) = (k.unwrap_or(dk), alpha.unwrap_or(da));
    o.report.input("name", name).input("k", k).input("alpha", alpha).input("config", cfg);
    match name {
        ExampleName::SignChanging => {
            let top = big_n.unwrap_or(dn);
            let ns: Vec<usize> = std::iter::successors(Some(25usize), |n| Some(n * 2)).take_while(|&n| n <= top).collect();
            if ns.is_empty() {
                return Err(Error::Domain(format!("N = {top} leaves no index; use N >= 25")));
            }
            o.report.input("N", top);
            let s = ex_sign_changing(&ns, k, alpha)?;
            let last = *ns.last().expect("nonempty") as i64;
            o.check(Check::at_most("v n^2 - 1", (s.at("v_times_n2", last).expect("v") - 1.0).abs(), 0.02));
            o.check(Check::at_most("v' n/2 - 1", (s.at("dv_times_n_over_2", last).expect("dv") - 1.0).abs(), 0.02));
            let r = s.get("ratio").expect("ratio");
            if r.len() > 1 {
                // ratio ~ 2^m n^(m-2) with m = k + alpha
                let m = k as f64 + alpha;
                let q = r[r.len() - 1] / r[r.len() - 2];
                o.check(Check::at_most("doubling ratio vs 2^(m-2)", rel(q, 2f64.powf(m - 2.0)), 0.1));
            }
            series_out(&mut o, &s)?;
        }
        ExampleName::HolderGap => {
            let (lo, hi) = holder_gap_window(k, alpha)?;
            let top = big_n.unwrap_or(hi);
            o.report.input("N", top).input("window", [lo, hi]);
            let ns: Vec<usize> = (lo.min(top)..=top).collect();
            let s = ex_holder_gap(k, alpha, &ns)?;
            let c = holder_gap_constant(k, alpha);
            let worst = s.get("ratio_over_log_gamma").expect("ratio").iter().map(|&r| rel(r, c)).fold(0.0, f64::max);
            o.check(Check::at_most("ratio / |log gamma| band", worst, 0.1).with_detail(format!("limit {c:.6e}")));
            let full = s.get("membership_alpha").expect("membership");
            o.check(Check::new(
                "unbounded at beta = alpha",
                status(full.windows(2).all(|w| w[1] > w[0])),
                *full.last().expect("nonempty"),
                full[0],
            ));
            let prof = holder_gap_profile(k, alpha, top, 50)?;
            o.plot("holder_gap_w", prof);
            series_out(&mut o, &s)?;
        }
        ExampleName::CriticalRoot => {
            let n = big_n.unwrap_or(dn);
            o.report.input("N", n);
            let s = ex_critical_root(k, alpha, n)?;
            let p = conjugate_exponent(k, alpha)?;
            let m = k as f64 + alpha;
            let weak = s.get("weak_norm").expect("weak")[0];
            let lim = s.get("weak_norm_limit").expect("limit")[0];
            o.check(Check::at_most("weak norm vs 2^(1/p)/m", rel(weak, lim), 0.02));
            // the truncated integral of m^-p |x|^-1 over both sides grows by 2 m^-p ln 2 per halving
            let inc = 2.0 * m.powf(-p) * 2f64.ln();
            let sums = s.get("strong_p_power_sum").expect("sums");
            let worst = sums.windows(2).map(|w| rel(w[1] - w[0], inc)).fold(0.0, f64::max);
            o.check(Check::at_most("strong p-power increments", worst, 0.01).with_detail(format!("expected {inc:.6}")));
            series_out(&mut o, &s)?;
        }
        ExampleName::NonBv => {
            let big_n = big_n.unwrap_or(dn);
            o.report.input("N", big_n);
            let s = ex_non_bv(k, alpha, big_n, cfg.per_bump)?;
            let last = big_n as i64 - 1;
            let tv = s.at("tv_partial", last).expect("tv");
            let cf = s.at("closed_form", last).expect("closed form");
            o.check(Check::at_most("total variation vs closed form", rel(tv, cf), 0.01));
            series_out(&mut o, &s)?;
        }
    }
    Ok(o)
}

pub fn suite(only: &[usize], cfg: &Config) -> Result<Outcome> {
    let mut o = Outcome::new("suite");
    let sc = SuiteConfig { seed: cfg.seed, tol_zero: cfg.tol_zero, fuzz_points: cfg.fuzz_points, non_bv_per_bump: cfg.per_bump, ..SuiteConfig::default() };
    o.report.input("suite", &sc).input("only", only);
    let ids: Vec<usize> = if only.is_empty() { (1..=suite::CRITERIA).collect() } else { only.to_vec() };
    let mut csv = String::from("criterion,name,status,measured,bound\n");
    for id in ids {
        let start = Instant::now();
        let c = suite::run_criterion(id, &sc)?;
        o.line(format!("[{id:>2}] {c}  ({:.2}s)", start.elapsed().as_secs_f64()));
        let _ = writeln!(csv, "{id},{},{},{},{}", c.name, c.status, c.measured, c.bound);
        o.check(c);
    }
    let failed = o.report.checks.iter().filter(|c| c.status == Status::Fail).count();
    let soft = o.report.checks.iter().filter(|c| c.status == Status::SoftFail).count();
    o.line(format!("{} checks: {failed} failed, {soft} soft failures", o.report.checks.len()));
    o.csv("checks", csv);
    Ok(o)
}

pub fn functions() -> Outcome {
    let mut o = Outcome::new("functions");
    for f in registry::all() {
        o.line(format!("{:<16} [{}, {}]", f.name, f.a, f.b));
    }
    o.report.result("functions", registry::names());
    o
}
