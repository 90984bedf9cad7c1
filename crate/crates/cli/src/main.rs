use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use stofuzz_cli::commands::{self, InputValue};
use stofuzz_cli::load_config;

/// Stochastic-logic fuzzy controller simulator.
#[derive(Parser)]
#[command(name = "stofuzz", version)]
struct Cli {
    /// Experiment config (JSON).
    #[arg(long, short, env = "STOFUZZ_CONFIG", global = true)]
    config: Option<PathBuf>,
    /// Override the base seed from the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Inputs {
    /// Analog input a in [0, 1], quantized by the A/D model.
    #[arg(long, conflicts_with = "xa_code")]
    xa: Option<f64>,
    /// Analog input b in [0, 1].
    #[arg(long, conflicts_with = "xb_code")]
    xb: Option<f64>,
    /// Raw code for input a, bypassing the quantizer.
    #[arg(long)]
    xa_code: Option<u32>,
    /// Raw code for input b.
    #[arg(long)]
    xb_code: Option<u32>,
}

impl Inputs {
    fn resolve(&self) -> (Option<InputValue>, Option<InputValue>) {
        let pick = |analog: Option<f64>, code: Option<u32>| {
            code.map(InputValue::Code).or(analog.map(InputValue::Analog))
        };
        (pick(self.xa, self.xa_code), pick(self.xb, self.xb_code))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Register period and triangle goodness-of-fit checks.
    GenCheck {
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        /// Write gof_k{1,2,3}.csv for the first trial here.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Run the controller at one input point and compare with the exact engine.
    Simulate {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        cycles: Option<u64>,
        /// Stream every clock to this CSV file.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Allowed error as a fraction of the output span.
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// Stochastic vs exact output over an input grid.
    Surface {
        #[arg(long)]
        step: Option<u32>,
        #[arg(long)]
        cycles: Option<u64>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// Cross-replica standard error against accepted sample count.
    Converge {
        #[command(flatten)]
        inputs: Inputs,
        #[arg(long)]
        replicas: Option<usize>,
        /// Comma-separated cycle counts.
        #[arg(long, value_delimiter = ',')]
        checkpoints: Option<Vec<u64>>,
        #[arg(long)]
        out: PathBuf,
    },
}

fn execute(cli: Cli) -> Result<commands::Report> {
    let path = cli.config.context("no config: pass --config or set STOFUZZ_CONFIG")?;
    let mut cfg = load_config(&path).with_context(|| format!("loading {}", path.display()))?;
    if let Some(seed) = cli.seed {
        cfg.controller = cfg.controller.with_seed(seed).context("--seed")?;
    }
    match cli.command {
        Command::GenCheck { trials, samples, out_dir } => {
            commands::gen_check(&cfg, &commands::GenCheckArgs { trials, samples, out_dir })
        }
        Command::Simulate { inputs, cycles, trace, tolerance } => {
            let (xa, xb) = inputs.resolve();
            commands::simulate(&cfg, &commands::SimulateArgs { xa, xb, cycles, trace, tolerance })
        }
        Command::Surface { step, cycles, out, tolerance } => {
            commands::surface(&cfg, &commands::SurfaceArgs { step, cycles, out, tolerance })
        }
        Command::Converge { inputs, replicas, checkpoints, out } => {
            let (xa, xb) = inputs.resolve();
            commands::converge(&cfg, &commands::ConvergeArgs { xa, xb, replicas, checkpoints, out })
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(report) => {
            report.print();
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            println!("SUMMARY status=error");
            ExitCode::from(2)
        }
    }
}
