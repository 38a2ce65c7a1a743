use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use batstrip::cli::{cmd_analyze, cmd_bench, cmd_design, ConfigPatch, RunConfig};

/// Coupled-microstrip coupler design driven by a bat-algorithm optimizer.
#[derive(Parser)]
#[command(name = "batstrip", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze one coupled-microstrip geometry and print its derived row
    Analyze {
        /// Strip width
        #[arg(long)]
        w: f64,
        /// Strip spacing
        #[arg(long)]
        s: f64,
        /// Substrate thickness
        #[arg(long)]
        h: f64,
        /// Substrate dielectric constant, in (1, 6)
        #[arg(long = "eps-r", default_value_t = 3.9)]
        eps_r: f64,
    },
    /// Optimize coupler geometries toward a target coupling coefficient
    Design {
        #[command(flatten)]
        opts: RunOpts,
    },
    /// Optimize a standard benchmark function
    Bench {
        /// Function name: sphere, rosenbrock, or rastrigin
        #[arg(long)]
        function: String,
        /// Dimensionality of the benchmark
        #[arg(long, default_value_t = 5)]
        dim: usize,
        #[command(flatten)]
        opts: RunOpts,
    },
}

/// Shared optimization flags; unset flags fall back to the config file and
/// then to the built-in defaults.
#[derive(Args)]
struct RunOpts {
    /// Desired coupling coefficient (design only)
    #[arg(long = "target-coupling")]
    target_coupling: Option<f64>,
    /// Substrate dielectric constant (design only)
    #[arg(long = "eps-r")]
    eps_r: Option<f64>,
    /// Number of bats
    #[arg(long = "pop-size")]
    pop_size: Option<usize>,
    /// Lower frequency limit
    #[arg(long)]
    fmin: Option<f64>,
    /// Upper frequency limit
    #[arg(long)]
    fmax: Option<f64>,
    /// Loudness decay factor, in (0, 1)
    #[arg(long)]
    alpha: Option<f64>,
    /// Pulse-rate growth rate, positive
    #[arg(long)]
    gamma: Option<f64>,
    /// Pulse-rate ceiling, in (0, 1]
    #[arg(long)]
    r0: Option<f64>,
    /// Initial loudness, positive
    #[arg(long)]
    a0: Option<f64>,
    /// Worst bats replaced by fresh random ones each iteration
    #[arg(long = "replace-count")]
    replace_count: Option<usize>,
    /// Iteration budget per run
    #[arg(long = "max-iter")]
    max_iter: Option<usize>,
    /// Stop once the best cost reaches this value
    #[arg(long)]
    tol: Option<f64>,
    /// Search bounds as LO:HI pairs, one per dimension (e.g. 0.5:20,0.5:20,0.5:20)
    #[arg(long)]
    bounds: Option<String>,
    /// Seed of the first run; run i uses seed + i
    #[arg(long)]
    seed: Option<u64>,
    /// Number of runs in the batch
    #[arg(long)]
    runs: Option<usize>,
    /// Output directory for convergence files and aggregate.json
    #[arg(long)]
    out: Option<PathBuf>,
    /// Convergence-file format: csv or json
    #[arg(long)]
    format: Option<String>,
    /// JSON config file whose keys match the long flag names; flags override it
    #[arg(long)]
    config: Option<PathBuf>,
}

impl RunOpts {
    fn as_patch(&self) -> ConfigPatch {
        ConfigPatch {
            target_coupling: self.target_coupling,
            eps_r: self.eps_r,
            pop_size: self.pop_size,
            fmin: self.fmin,
            fmax: self.fmax,
            alpha: self.alpha,
            gamma: self.gamma,
            r0: self.r0,
            a0: self.a0,
            replace_count: self.replace_count,
            max_iter: self.max_iter,
            tol: self.tol,
            bounds: self.bounds.clone(),
            seed: self.seed,
            runs: self.runs,
            out: self.out.clone(),
            format: self.format.clone(),
        }
    }

    fn resolve(&self, bounds_dims: usize) -> Result<RunConfig, batstrip::cli::CliError> {
        let mut config = RunConfig::default();
        if let Some(ref path) = self.config {
            config.apply(&ConfigPatch::from_file(path)?, bounds_dims)?;
        }
        config.apply(&self.as_patch(), bounds_dims)?;
        Ok(config)
    }
}

fn main() -> ExitCode {
    env_logger::init();
    match Cli::parse().command {
        Command::Analyze { w, s, h, eps_r } => match cmd_analyze(w, s, h, eps_r) {
            Ok(table) => {
                println!("{table}");
                ExitCode::SUCCESS
            }
            Err(e) => fail(e),
        },
        Command::Design { opts } => {
            let report = opts.resolve(3).and_then(|config| cmd_design(&config));
            match report {
                Ok(report) => {
                    print!("{}", report.text);
                    if report.budget_exhausted {
                        ExitCode::from(3)
                    } else {
                        ExitCode::SUCCESS
                    }
                }
                Err(e) => fail(e),
            }
        }
        Command::Bench {
            function,
            dim,
            opts,
        } => {
            let report = opts
                .resolve(dim)
                .and_then(|config| cmd_bench(&function, dim, &config));
            match report {
                Ok(report) => {
                    print!("{}", report.text);
                    if report.budget_exhausted {
                        ExitCode::from(3)
                    } else {
                        ExitCode::SUCCESS
                    }
                }
                Err(e) => fail(e),
            }
        }
    }
}

fn fail(e: batstrip::cli::CliError) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(2)
}
