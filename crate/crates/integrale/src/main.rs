use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand, ValueEnum};
use integrale::decimal::{to_scientific, SIGNIFICANT_DIGITS};
use integrale::driver::{evaluate, load_integrand, load_polytope, RunError, Settings};
use integrale::experiment::{run_suite, write_csv, Suite, SuiteConfig};
use integrale_core::integrate::{Method, Valuation};
use integrale_core::polynomial::LinearFormSum;

/// Exact integrals and volumes of rational polytopes.
#[derive(Parser, Debug)]
#[command(name = "integrale", version, args_conflicts_with_subcommands = true, subcommand_negates_reqs = true)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    #[command(flatten)]
    run: RunArgs,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run an experiment suite and write its records as CSV.
    Experiment(ExperimentArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ValuationArg {
    Integrate,
    Volume,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Triangulate,
    ConeDecompose,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Triangulate => Method::Triangulation,
            MethodArg::ConeDecompose => Method::ConeDecomposition,
        }
    }
}

#[derive(Args, Debug)]
struct Common {
    /// Worker threads for the evaluation phase.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
    threads: u32,
    /// Seed for perturbations and random forms.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Give up after this many seconds. Checked between terms.
    #[arg(long, value_name = "SECS")]
    timeout: Option<f64>,
}

impl Common {
    fn timeout(&self) -> Result<Option<Duration>, RunError> {
        self.timeout
            .map(|s| Duration::try_from_secs_f64(s).map_err(|_| RunError::Usage(format!("invalid timeout {s}"))))
            .transpose()
    }
}

#[derive(Args, Debug)]
struct RunArgs {
    #[arg(long, value_enum, required = true)]
    valuation: Option<ValuationArg>,
    #[arg(long, value_enum, default_value = "triangulate")]
    method: MethodArg,
    /// Integrand file `[[c,[e1,...,en]],...]`.
    #[arg(long, value_name = "FILE", conflicts_with = "linear_forms")]
    monomials: Option<PathBuf>,
    /// Integrand file `[[c,[M,[a1,...,an]]],...]`.
    #[arg(long, value_name = "FILE")]
    linear_forms: Option<PathBuf>,
    /// Print the evaluation time.
    #[arg(long)]
    timing: bool,
    #[command(flatten)]
    common: Common,
    /// Halfspace or vertex file.
    #[arg(required = true)]
    polytope_file: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ExperimentArgs {
    #[arg(value_parser = |s: &str| s.parse::<Suite>())]
    suite: Suite,
    #[arg(long, value_name = "FILE.csv")]
    out: PathBuf,
    #[command(flatten)]
    common: Common,
}

fn run(args: RunArgs) -> Result<(), RunError> {
    let valuation = match args.valuation.expect("required by clap") {
        ValuationArg::Integrate => Valuation::Integral,
        ValuationArg::Volume => Valuation::Volume,
    };
    let problem = load_polytope(&args.polytope_file.expect("required by clap"))?;
    let integrand = match (valuation, &args.monomials, &args.linear_forms) {
        (Valuation::Volume, _, _) => LinearFormSum::new(problem.polytope.dim()),
        (Valuation::Integral, Some(path), _) => load_integrand(path, true, &problem.embedding)?,
        (Valuation::Integral, None, Some(path)) => load_integrand(path, false, &problem.embedding)?,
        (Valuation::Integral, None, None) => {
            return Err(RunError::Usage(
                "--valuation=integrate needs --monomials or --linear-forms".into(),
            ))
        }
    };
    let settings = Settings {
        method: args.method.into(),
        valuation,
        seed: args.common.seed,
        threads: args.common.threads as usize,
        timeout: args.common.timeout()?,
    };

    let start = Instant::now();
    let value = evaluate(&problem, &integrand, &settings)?;
    let elapsed = start.elapsed();

    let mut out = io::stdout().lock();
    let _ = writeln!(out, "{value}");
    let _ = writeln!(out, "approx {}", to_scientific(&value, SIGNIFICANT_DIGITS));
    if args.timing {
        let _ = writeln!(out, "time {:.3} s", elapsed.as_secs_f64());
    }
    Ok(())
}

fn experiment(args: ExperimentArgs) -> Result<(), RunError> {
    let config = SuiteConfig {
        seed: args.common.seed,
        threads: args.common.threads as usize,
        timeout: args.common.timeout()?,
        ..SuiteConfig::default()
    };
    let report = run_suite(args.suite, &config)?;
    let file = File::create(&args.out).map_err(|source| RunError::Io {
        path: args.out.clone(),
        source,
    })?;
    write_csv(&report.records, file).map_err(|e| RunError::Io {
        path: args.out.clone(),
        source: e.into(),
    })?;
    eprintln!("{} records written to {}", report.records.len(), args.out.display());
    for s in &report.skipped {
        eprintln!("timed out: {s}");
    }
    for f in &report.failures {
        eprintln!("mismatch: {f}");
    }
    if report.failures.is_empty() {
        Ok(())
    } else {
        Err(RunError::Mismatch(report.failures.len()))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Some(Command::Experiment(args)) => experiment(args),
        None => run(cli.run),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
