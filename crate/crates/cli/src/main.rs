//! `gtd-noise`: reference tables, verification suites, dephasing curves, and
//! parameter scans for the narrow-band collapse-noise toolkit.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error.

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use gtd_noise_cli::{
    cmd_dephase, cmd_scan, cmd_spectrum, cmd_tables, cmd_verify, parse_grid, DephaseArgs,
    OutputFormat, RunConfig, SpectrumArgs,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        }
    }
}

#[derive(Debug, Args)]
struct GlobalOpts {
    /// Path to a GtdParams JSON file (flat object; unknown keys rejected).
    #[arg(long, global = true)]
    params_file: Option<std::path::PathBuf>,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: FormatArg,

    /// RNG seed for Monte-Carlo columns and verification draws.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Round emitted numbers to this many significant figures
    /// (default: full double precision).
    #[arg(long, global = true)]
    sig_figs: Option<u8>,

    /// Write output to this file instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<std::path::PathBuf>,
}

#[derive(Debug, Parser)]
#[command(name = "gtd-noise", version, about = "Narrow-band collapse-noise toolkit")]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Emit a reference table (suppression, populated, thresholds).
    Tables {
        /// Which table: suppression | populated | thresholds
        which: String,
    },
    /// Run a verification suite and emit a JSON report.
    Verify {
        /// Which suite: wick | hasvac | bateman | dephasing | cp | all
        suite: String,
    },
    /// Evaluate the dephasing kernel D(T) on a grid of durations.
    Dephase {
        /// Duration grid: comma list `0,0.5,1` or `start:stop:count[:log]`.
        #[arg(long)]
        t_grid: String,
        /// Line width gamma (1/s) (default: from params).
        #[arg(long)]
        gamma: Option<f64>,
        /// Oscillator frequency omega0 (1/s) (default: from params).
        #[arg(long)]
        omega0: Option<f64>,
        /// Equal-time variance A_J (default: computed from params).
        #[arg(long = "aj")]
        a_j: Option<f64>,
        /// Add Monte-Carlo estimate columns with this many realizations.
        #[arg(long)]
        mc_samples: Option<u64>,
    },
    /// Scan an observable over a parameter range.
    Scan {
        /// Scanned parameter name (must match the observable's knob).
        #[arg(long)]
        param: String,
        /// Range: `start:stop:count[:log]` or comma list.
        #[arg(long)]
        range: String,
        /// Observable: suppression | lambda_natural | S0 | threshold_N | t1_exponent
        #[arg(long)]
        observable: String,
    },
    /// Dump a spectrum model as JSON.
    Spectrum {
        /// Model: wightman | symmetrized | populated-fermion | populated-boson
        #[arg(long, default_value = "wightman")]
        model: String,
        /// Fermionic particle-mode occupation (populated-fermion).
        #[arg(long, default_value_t = 0.0)]
        n_b: f64,
        /// Fermionic antiparticle-mode occupation (populated-fermion).
        #[arg(long, default_value_t = 0.0)]
        n_d: f64,
        /// Bosonic occupation (populated-boson).
        #[arg(long, default_value_t = 0.0)]
        n_bose: f64,
    },
}

fn command_echo(cmd: &Command) -> String {
    fn opt<T: std::fmt::Display>(flag: &str, v: &Option<T>) -> String {
        v.as_ref().map_or_else(String::new, |x| format!(" {flag} {x}"))
    }
    match cmd {
        Command::Tables { which } => format!("tables {which}"),
        Command::Verify { suite } => format!("verify {suite}"),
        Command::Dephase { t_grid, gamma, omega0, a_j, mc_samples } => format!(
            "dephase --t-grid {t_grid}{}{}{}{}",
            opt("--gamma", gamma),
            opt("--omega0", omega0),
            opt("--aj", a_j),
            opt("--mc-samples", mc_samples),
        ),
        Command::Scan { param, range, observable } => {
            format!("scan --param {param} --range {range} --observable {observable}")
        }
        Command::Spectrum { model, n_b, n_d, n_bose } => {
            format!("spectrum --model {model} --n-b {n_b} --n-d {n_d} --n-bose {n_bose}")
        }
    }
}

fn run(cli: Cli) -> Result<(String, u8), gtd_noise::Error> {
    let mut cfg = RunConfig::new(
        command_echo(&cli.command),
        cli.global.format.into(),
        cli.global.seed,
        cli.global.sig_figs,
    )?;
    if let Some(path) = &cli.global.params_file {
        let text = std::fs::read_to_string(path)?;
        cfg = cfg.with_params_json(&text)?;
    }

    match &cli.command {
        Command::Tables { which } => Ok((cmd_tables(which, &cfg)?, 0)),
        Command::Verify { suite } => {
            let (out, passed) = cmd_verify(suite, &cfg)?;
            Ok((out, if passed { 0 } else { 1 }))
        }
        Command::Dephase { t_grid, gamma, omega0, a_j, mc_samples } => {
            let args = DephaseArgs {
                t_grid: parse_grid(t_grid)?,
                gamma: *gamma,
                omega0: *omega0,
                a_j: *a_j,
                mc_samples: *mc_samples,
            };
            Ok((cmd_dephase(&args, &cfg)?, 0))
        }
        Command::Scan { param, range, observable } => {
            Ok((cmd_scan(param, &parse_grid(range)?, observable, &cfg)?, 0))
        }
        Command::Spectrum { model, n_b, n_d, n_bose } => {
            let args =
                SpectrumArgs { model: model.clone(), n_b: *n_b, n_d: *n_d, n_bose: *n_bose };
            Ok((cmd_spectrum(&args, &cfg)?, 0))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let output_path = cli.global.output.clone();
    match run(cli) {
        Ok((text, code)) => {
            let wrote = match &output_path {
                Some(path) => std::fs::write(path, &text),
                None => std::io::stdout().write_all(text.as_bytes()),
            };
            if let Err(e) = wrote {
                eprintln!("gtd-noise: write failed: {e}");
                return ExitCode::from(2);
            }
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("gtd-noise: {e}");
            ExitCode::from(2)
        }
    }
}
