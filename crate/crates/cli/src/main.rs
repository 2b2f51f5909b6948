//! `glaeser`: estimates of the polynomial escape constants, Glaeser-type
//! inequalities on sampled functions, the component decomposition behind the
//! weak-Lp estimate of roots, the optimality examples, and the acceptance suite.

mod commands;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{Config, ExampleName};

#[derive(Debug, Parser)]
#[command(name = "glaeser", version, about = "Higher-order Glaeser inequalities and weak-Lp regularity of roots")]
struct Cli {
    /// Write the report as JSON to this file.
    #[arg(long, global = true, value_name = "FILE")]
    json: Option<PathBuf>,
    /// Write CSV tables into this directory.
    #[arg(long, global = true, value_name = "DIR")]
    csv: Option<PathBuf>,
    /// Write `x value` curves into this directory.
    #[arg(long, global = true, value_name = "DIR")]
    plot: Option<PathBuf>,
    #[command(flatten)]
    config: Config,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Lower bound on the escape horizon of normalized polynomials of degree k.
    Magic {
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = glaeser_core::magic::DEFAULT_BUDGET)]
        budget: usize,
        #[arg(long, default_value_t = glaeser_core::magic::DEFAULT_HORIZON)]
        horizon: f64,
        /// Also test the escape implication on this many random polynomials.
        #[arg(long, value_name = "TRIALS")]
        fuzz: Option<usize>,
    },
    /// Empirical constant of |v'|^(k+alpha) <= C |v|^(k+alpha-1) H on a named function.
    Verify {
        #[arg(long = "fn", value_name = "NAME")]
        func: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 10_001)]
        grid: usize,
        /// Hölder constant of the k-th derivative; estimated from samples when absent.
        #[arg(long)]
        holder: Option<f64>,
    },
    /// Component decomposition and the weak-Lp estimate of the root's derivative.
    Decompose {
        #[arg(long = "fn", value_name = "NAME")]
        func: String,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        alpha: f64,
        #[arg(long, default_value_t = 16_385)]
        grid: usize,
        #[arg(long)]
        holder: Option<f64>,
    },
    /// Weak-Lp quasi-norm of a sampled function (CSV with header `x,value`, or `x value` lines).
    Weaklp {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        p: f64,
    },
    /// One of the optimality examples as a table of series.
    Example {
        #[arg(long, value_enum)]
        name: ExampleName,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        alpha: Option<f64>,
        /// Largest index, cell count or bump count, depending on the example.
        #[arg(long = "N", value_name = "N")]
        big_n: Option<usize>,
    },
    /// Runs the acceptance checks and prints one line per criterion.
    Suite {
        /// Run only these criteria (1-based); repeatable.
        #[arg(long, value_name = "ID")]
        only: Vec<usize>,
    },
    /// Lists the named functions.
    Functions,
}

fn run(cli: &Cli) -> glaeser_core::Result<output::Outcome> {
    let cfg = &cli.config;
    match &cli.command {
        Command::Magic { k, budget, horizon, fuzz } => commands::magic(*k, *budget, *horizon, *fuzz, cfg),
        Command::Verify { func, k, alpha, grid, holder } => commands::verify(func, *k, *alpha, *grid, *holder, cfg),
        Command::Decompose { func, k, alpha, grid, holder } => {
            commands::decomposition(func, *k, *alpha, *grid, *holder, cfg)
        }
        Command::Weaklp { input, p } => commands::weaklp(input, *p, cfg),
        Command::Example { name, k, alpha, big_n } => commands::example(*name, *k, *alpha, *big_n, cfg),
        Command::Suite { only } => commands::suite(only, cfg),
        Command::Functions => Ok(commands::functions()),
    }
}

fn write_outputs(cli: &Cli, o: &output::Outcome) -> std::io::Result<()> {
    if let Some(path) = &cli.json {
        output::write_json(path, &o.report)?;
    }
    if let Some(dir) = &cli.csv {
        output::write_files(dir, &o.csv)?;
    }
    if let Some(dir) = &cli.plot {
        output::write_files(dir, &o.plots)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // help and version go to stdout with status 0; real errors carry status 2
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    print!("{}", output::render_table(&outcome));
    let _ = std::io::stdout().flush();
    if let Err(e) = write_outputs(&cli, &outcome) {
        eprintln!("error: writing output: {e}");
        return ExitCode::from(2);
    }
    ExitCode::from(outcome.report.exit_code() as u8)
}
