//! decaylab command line: run experiments, sweep config lists, and execute
//! the verification suites.

use clap::{Args, Parser, Subcommand, ValueEnum};
use decaylab::error::Error;
use decaylab::experiment::{run_experiment, sweep, ExperimentConfig};
use decaylab::verify::{report, Suite};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "decaylab",
    about = "Radial damped-wave / degenerate-heat experiments with Kummer-function weights"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write its report files
    Run {
        /// key=value config file; flags override file values
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Run several config files in parallel (one worker per config,
    /// DECAYLAB_THREADS caps the worker count)
    Sweep {
        /// config files, one experiment each
        configs: Vec<PathBuf>,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Execute a verification suite and print one line per check
    Verify { suite: SuiteArg },
}

#[derive(Args)]
struct Overrides {
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    dim: Option<u32>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    r_inner: Option<f64>,
    #[arg(long)]
    t0: Option<f64>,
    #[arg(long)]
    t_final: Option<f64>,
    #[arg(long)]
    dr: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
    /// initial displacement descriptor (bump:..., polytail:..., file:..., zero)
    #[arg(long)]
    ic: Option<String>,
    /// initial velocity descriptor
    #[arg(long)]
    ic_u1: Option<String>,
    /// number of log-spaced sample times
    #[arg(long)]
    samples: Option<usize>,
    /// skip the heat-comparison run (D columns left empty)
    #[arg(long)]
    no_heat: bool,
    /// write per-sample state CSV checkpoints
    #[arg(long)]
    checkpoints: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Overrides {
    fn apply(&self, cfg: &mut ExperimentConfig) {
        if let Some(v) = self.alpha {
            cfg.alpha = v;
        }
        if let Some(v) = self.dim {
            cfg.dim = v;
        }
        if let Some(v) = self.gamma {
            cfg.gamma = v;
        }
        if let Some(v) = self.r_inner {
            cfg.r_inner = v;
        }
        if let Some(v) = self.t0 {
            cfg.t0 = v;
        }
        if let Some(v) = self.t_final {
            cfg.t_final = v;
        }
        if let Some(v) = self.dr {
            cfg.dr = v;
        }
        if let Some(v) = self.dt {
            cfg.dt = v;
        }
        if let Some(v) = &self.ic {
            cfg.ic = v.clone();
        }
        if let Some(v) = &self.ic_u1 {
            cfg.ic_u1 = v.clone();
        }
        if let Some(v) = self.samples {
            cfg.samples = v;
        }
        if self.no_heat {
            cfg.heat_compare = false;
        }
        if self.checkpoints {
            cfg.checkpoints = true;
        }
        if let Some(v) = &self.out {
            cfg.out = v.clone();
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Kummer,
    Weights,
    Hardy,
    Energy,
    Diffusion,
    All,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Suite {
        match s {
            SuiteArg::Kummer => Suite::Kummer,
            SuiteArg::Weights => Suite::Weights,
            SuiteArg::Hardy => Suite::Hardy,
            SuiteArg::Energy => Suite::Energy,
            SuiteArg::Diffusion => Suite::Diffusion,
            SuiteArg::All => Suite::All,
        }
    }
}

fn load_config(path: Option<&PathBuf>, overrides: &Overrides) -> Result<ExperimentConfig, Error> {
    let mut cfg = match path {
        Some(p) => ExperimentConfig::parse_file(p)?,
        None => ExperimentConfig::default(),
    };
    overrides.apply(&mut cfg);
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { config, overrides } => {
            let cfg = match load_config(config.as_ref(), &overrides) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            };
            match run_experiment(&cfg) {
                Ok(out) => {
                    for w in &out.warnings {
                        eprintln!("warning: {w}");
                    }
                    println!(
                        "wrote {} sample rows to {}",
                        out.records.len(),
                        cfg.out.display()
                    );
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::FAILURE
                }
            }
        }
        Command::Sweep { configs, overrides } => {
            if configs.is_empty() {
                eprintln!("error: sweep needs at least one config file");
                return ExitCode::from(2);
            }
            let mut parsed = Vec::new();
            for path in &configs {
                match load_config(Some(path), &overrides) {
                    Ok(c) => parsed.push(c),
                    Err(e) => {
                        eprintln!("error in {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
            }
            let names: Vec<PathBuf> = configs.clone();
            let results = sweep(parsed);
            let mut failed = 0;
            for (path, result) in names.iter().zip(results) {
                match result {
                    Ok(out) => {
                        println!("{}: ok ({} rows)", path.display(), out.records.len())
                    }
                    Err(e) => {
                        eprintln!("{}: error: {e}", path.display());
                        failed += 1;
                    }
                }
            }
            if failed == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
        Command::Verify { suite } => {
            let results = match Suite::from(suite).run() {
                Ok(r) => r,
                Err(e) => {
                    eprintln!("error: verification aborted: {e}");
                    return ExitCode::FAILURE;
                }
            };
            let (text, failures) = report(&results);
            print!("{text}");
            if failures == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
