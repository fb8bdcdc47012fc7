//! Batch experiment driver for the dhlab library.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::json;

use dhlab_cli::config::Config;
use dhlab_cli::{experiments, CliError};

#[derive(Parser, Debug)]
#[command(
    name = "dhlab",
    version,
    about = "Run one dhlab experiment and write its report"
)]
struct Cli {
    #[command(subcommand)]
    experiment: Experiment,
    /// Flat `key = value` configuration file.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Directory for report.csv, report.json and timing.json.
    #[arg(long, global = true, value_name = "DIR", default_value = "dhlab-out")]
    out: PathBuf,
    /// Seed for sampled sweeps; overrides `seed` in the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Use brute-force paths where one exists.
    #[arg(long, global = true)]
    oracle: bool,
    /// Worker threads; overrides `threads` in the config.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Experiment {
    /// Exact solution counts at each target mu.
    Count,
    /// Representable union and box-exceptional measure in a window.
    ScanExceptional,
    /// Exact counts against the main term over (N/2, N].
    ScanAsymptotic,
    /// Singular integral at each theta.
    Singular,
    /// Exact mean values of smooth Weyl sums with an exponent fit.
    #[command(name = "meanvalue")]
    MeanValue,
    /// Minor-arc sup profile of |f1 f2|/P^2.
    Arcs,
    /// Kernel sandwich residuals on a jittered grid.
    KernelsSelfcheck,
    /// Primes up to a limit.
    Primes,
}

impl Experiment {
    fn name(self) -> &'static str {
        match self {
            Experiment::Count => "count",
            Experiment::ScanExceptional => "scan-exceptional",
            Experiment::ScanAsymptotic => "scan-asymptotic",
            Experiment::Singular => "singular",
            Experiment::MeanValue => "meanvalue",
            Experiment::Arcs => "arcs",
            Experiment::KernelsSelfcheck => "kernels-selfcheck",
            Experiment::Primes => "primes",
        }
    }
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let start = Instant::now();
    let kind = cli.experiment.name();
    let mut cfg = match &cli.config {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
            Config::parse(&text)?
        }
        None => Config::default(),
    };
    if let Some(s) = cli.seed {
        cfg.set("seed", s);
    }
    if let Some(t) = cli.threads {
        cfg.set("threads", t);
    }
    let seed = cfg.get_or::<u64>("seed", 0)?;
    let threads = cfg.get::<usize>("threads")?;
    let plan = experiments::plan(kind, &cfg, cli.oracle, seed)?;
    if let Some(n) = threads {
        if n == 0 {
            return Err(CliError::Config("threads: must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("threads: {e}")))?;
    }
    std::fs::create_dir_all(&cli.out)
        .map_err(|e| CliError::Io(format!("{}: {e}", cli.out.display())))?;
    let planned = start.elapsed().as_secs_f64();

    let outcome = experiments::execute(kind, &plan)?;
    let ran = start.elapsed().as_secs_f64();

    let mut report = outcome.report;
    report.config = cfg
        .entries()
        .iter()
        .filter(|(k, _)| k.as_str() != "threads")
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect();
    report
        .config
        .push(("oracle".into(), cli.oracle.to_string()));
    report.config.sort();
    write(&cli.out.join("report.csv"), &report.to_csv())?;
    write(&cli.out.join("report.json"), &report.to_json())?;
    let timing = json!({
        "experiment": kind,
        "rows": report.rows.len(),
        "threads": rayon::current_num_threads(),
        "validate_seconds": planned,
        "run_seconds": ran - planned,
        "total_seconds": start.elapsed().as_secs_f64(),
    });
    write(
        &cli.out.join("timing.json"),
        &format!(
            "{}\n",
            serde_json::to_string_pretty(&timing).unwrap_or_default()
        ),
    )?;
    if !outcome.passed {
        return Err(CliError::Check(format!(
            "{kind}: not every row holds; see {}",
            cli.out.join("report.csv").display()
        )));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("dhlab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
