use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use levicav::validation::ValidationOptions;
use levicav::Execution;
use levicav_cli::{cmd_cool, cmd_params, cmd_sweep, cmd_validate, parse_config, CliError, Overrides, RunConfig, Status};

/// Optomechanical parameters and cooling limits for levitated dielectric spheres.
#[derive(Parser)]
#[command(name = "levicav", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parameter table for the configured sphere.
    Params(Common),
    /// Radius sweep with optimized occupation per radius.
    Sweep(Common),
    /// Exact and adiabatic occupation across a detuning grid.
    Cool(Common),
    /// Run the built-in consistency checks.
    Validate {
        #[command(flatten)]
        common: Common,
        /// Force the Mie series to this many orders (negative control).
        #[arg(long, value_name = "N")]
        debug_truncation_cap: Option<usize>,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, allow_negative_numbers = true)]
    r_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    r_max: Option<f64>,
    #[arg(long)]
    n_points: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    delta_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    delta_max: Option<f64>,
}

impl Common {
    fn load(&self) -> Result<RunConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => parse_config(&std::fs::read_to_string(path)?)?,
            None => RunConfig::default(),
        };
        cfg.apply(&Overrides {
            r_min: self.r_min,
            r_max: self.r_max,
            n_points: self.n_points,
            delta_min: self.delta_min,
            delta_max: self.delta_max,
        })?;
        if self.out.is_some() {
            cfg.output = self.out.clone();
        }
        Ok(cfg)
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(v) = std::env::var("LEVICAV_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("LEVICAV_THREADS must be a positive integer, got '{v}'"))?;
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())?;
    #[cfg(not(feature = "parallel"))]
    let _ = n;
    Ok(())
}

fn run(cli: Cli) -> Result<Status, CliError> {
    let exec = Execution::Parallel;
    let common = match &cli.command {
        Command::Params(c) | Command::Sweep(c) | Command::Cool(c) => c,
        Command::Validate { common, .. } => common,
    };
    let cfg = common.load()?;
    let mut out: Box<dyn Write> = match &cfg.output {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let mut err = io::stderr();
    let status = match &cli.command {
        Command::Params(_) => cmd_params(&cfg, &mut out)?,
        Command::Sweep(_) => cmd_sweep(&cfg, exec, &mut out, &mut err)?,
        Command::Cool(_) => cmd_cool(&cfg, exec, &mut out, &mut err)?,
        Command::Validate { debug_truncation_cap, .. } => {
            let opts = ValidationOptions { truncation_cap: *debug_truncation_cap, ..Default::default() };
            cmd_validate(&cfg, &opts, exec, &mut out)?
        }
    };
    out.flush()?;
    Ok(status)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { Status::Usage as u8 } else { 0 });
        }
    };
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(Status::Usage as u8);
    }
    match run(cli) {
        Ok(status) => ExitCode::from(status as u8),
        Err(CliError::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.status() as u8)
        }
    }
}
