//! Command-line front end for `sparsechan`: single evaluations and parameter
//! sweeps written as CSV.
//!
//! Exit codes: 0 on success, 2 on usage or parameter errors, 3 when the
//! operating point is outside the region where the closed forms apply.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

pub mod commands;
pub mod config;
pub mod output;

use config::RunConfig;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Validity(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl From<sparsechan::Error> for CliError {
    fn from(e: sparsechan::Error) -> Self {
        if e.is_validity() {
            CliError::Validity(e.to_string())
        } else {
            CliError::Usage(e.to_string())
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Validity(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "sparsechan",
    version,
    about = "Capacity and error exponents of sparse wideband multipath channels"
)]
pub struct Cli {
    /// JSON run configuration; flags override its values.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Write CSV here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ChannelArgs {
    /// Delay spread T_m, seconds.
    #[arg(long = "tm")]
    pub t_m: Option<f64>,
    /// Doppler spread W_d, Hz.
    #[arg(long = "wd")]
    pub w_d: Option<f64>,
    /// Doppler sparsity exponent.
    #[arg(long = "d1")]
    pub delta1: Option<f64>,
    /// Delay sparsity exponent.
    #[arg(long = "d2")]
    pub delta2: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct DurationArg {
    /// Signaling duration T, seconds.
    #[arg(long = "t")]
    pub t: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct BandPowerArgs {
    /// Bandwidth W, Hz.
    #[arg(long = "w")]
    pub w: Option<f64>,
    /// Transmit power P.
    #[arg(long = "p")]
    pub p: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct McArgs {
    /// Monte Carlo samples.
    #[arg(long)]
    pub samples: Option<u64>,
    /// Random stream seed.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, Default, Args)]
#[group(multiple = false)]
pub struct CapacityMethodArgs {
    /// Closed form via the exponential integral (default).
    #[arg(long)]
    pub exact: bool,
    /// Monte Carlo estimate.
    #[arg(long)]
    pub mc: bool,
    /// Low-SNR lower bound.
    #[arg(long)]
    pub bound: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Diversity, coherence and signal-space dimensions of one operating point.
    Geometry {
        #[command(flatten)]
        channel: ChannelArgs,
        #[command(flatten)]
        duration: DurationArg,
        #[command(flatten)]
        band: BandPowerArgs,
    },
    /// Duration T that realizes N_c = k / SNR^mu.
    Locus {
        #[command(flatten)]
        channel: ChannelArgs,
        #[command(flatten)]
        band: BandPowerArgs,
        #[arg(long)]
        k: Option<f64>,
        #[arg(long)]
        mu: Option<f64>,
    },
    /// Effective scaling exponent of an operating point.
    MuEff {
        #[command(flatten)]
        channel: ChannelArgs,
        #[command(flatten)]
        duration: DurationArg,
        #[command(flatten)]
        band: BandPowerArgs,
        #[arg(long)]
        k: Option<f64>,
    },
    /// Coherent ergodic capacity, bits per dimension.
    Capacity {
        #[arg(long)]
        snr: Option<f64>,
        #[command(flatten)]
        mc: McArgs,
        #[command(flatten)]
        method: CapacityMethodArgs,
    },
    /// Low-SNR capacity coefficients of the training scheme over t_grid.
    CoeffFit {
        #[command(flatten)]
        mc: McArgs,
    },
    /// Random-coding exponent at one rate.
    Exponent {
        /// Coherence dimension (default: k / snr^mu from the config law).
        #[arg(long)]
        nc: Option<f64>,
        #[arg(long)]
        snr: Option<f64>,
        /// Rate, nats per dimension.
        #[arg(long)]
        rate: f64,
        #[arg(long)]
        epsilon: Option<f64>,
        /// Perfect receiver CSI reference instead of training.
        #[arg(long)]
        csi: bool,
    },
    /// Training and perfect-CSI exponents over rate_grid x mu_grid.
    ExponentSweep {
        #[arg(long)]
        epsilon: Option<f64>,
    },
    /// Optimal scaling exponent for each rate in rate_grid.
    MuOpt {
        #[arg(long)]
        epsilon: Option<f64>,
    },
}

fn apply_channel(cfg: &mut RunConfig, a: &ChannelArgs) {
    let ch = &mut cfg.channel;
    if let Some(v) = a.t_m {
        ch.t_m = v;
    }
    if let Some(v) = a.w_d {
        ch.w_d = v;
    }
    if let Some(v) = a.delta1 {
        ch.delta1 = v;
    }
    if let Some(v) = a.delta2 {
        ch.delta2 = v;
    }
}

fn apply_band(cfg: &mut RunConfig, b: &BandPowerArgs) {
    if let Some(v) = b.w {
        cfg.signaling.w = v;
    }
    if let Some(v) = b.p {
        cfg.signaling.p = v;
    }
}

fn apply_mc(cfg: &mut RunConfig, m: &McArgs) {
    if let Some(v) = m.samples {
        cfg.samples = v;
    }
    if let Some(v) = m.seed {
        cfg.seed = v;
    }
}

/// Folds command-line overrides into the configuration.
fn merge(cfg: &mut RunConfig, cmd: &Command) {
    match cmd {
        Command::Geometry {
            channel,
            duration,
            band,
        }
        | Command::MuEff {
            channel,
            duration,
            band,
            ..
        } => {
            apply_channel(cfg, channel);
            if let Some(t) = duration.t {
                cfg.signaling.t = t;
            }
            apply_band(cfg, band);
            if let Command::MuEff { k: Some(k), .. } = cmd {
                cfg.law.k = *k;
            }
        }
        Command::Locus {
            channel,
            band,
            k,
            mu,
        } => {
            apply_channel(cfg, channel);
            apply_band(cfg, band);
            if let Some(k) = k {
                cfg.law.k = *k;
            }
            if let Some(mu) = mu {
                cfg.law.mu = *mu;
            }
        }
        Command::Capacity { mc, .. } | Command::CoeffFit { mc } => apply_mc(cfg, mc),
        Command::Exponent { epsilon, .. }
        | Command::ExponentSweep { epsilon }
        | Command::MuOpt { epsilon } => {
            if let Some(e) = epsilon {
                cfg.epsilon = *e;
            }
        }
    }
}

fn execute(cli: &Cli, stderr: &mut dyn Write) -> Result<String, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    merge(&mut cfg, &cli.command);
    cfg.validate()?;
    if let Some(msg) = cfg.channel.underspread_warning() {
        writeln!(stderr, "warning: {msg}")?;
    }
    let table = match &cli.command {
        Command::Geometry { .. } => commands::geometry(&cfg)?,
        Command::Locus { .. } => commands::locus(&cfg)?,
        Command::MuEff { .. } => commands::mu_eff(&cfg)?,
        Command::Capacity { snr, method, .. } => {
            let which = if method.mc {
                commands::CapacityMethod::MonteCarlo
            } else if method.bound {
                commands::CapacityMethod::LowerBound
            } else {
                commands::CapacityMethod::Exact
            };
            commands::capacity(&cfg, *snr, which, stderr)?
        }
        Command::CoeffFit { .. } => commands::coeff_fit(&cfg)?,
        Command::Exponent { nc, snr, rate, csi, .. } => {
            commands::exponent(&cfg, *nc, *snr, *rate, *csi)?
        }
        Command::ExponentSweep { .. } => commands::exponent_sweep(&cfg)?,
        Command::MuOpt { .. } => commands::mu_opt(&cfg, stderr)?,
    };
    Ok(table.render())
}

fn run_parsed(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    // Diagnostics are buffered so the worker pool never touches the caller's stream.
    let mut diag = Vec::new();
    let result = match cli.threads {
        Some(0) => return Err(CliError::Usage("--threads must be >= 1".into())),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Usage(format!("cannot start thread pool: {e}")))?
            .install(|| execute(cli, &mut diag)),
        None => execute(cli, &mut diag),
    };
    stderr.write_all(&diag)?;
    let csv = result?;
    match &cli.out {
        Some(path) => std::fs::write(path, csv)?,
        None => stdout.write_all(csv.as_bytes())?,
    }
    Ok(())
}

/// Parses `argv` (including the program name), runs the command and returns
/// the process exit code.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            let code = e.exit_code();
            let _ = if code == 0 {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match run_parsed(&cli, stdout, stderr) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
