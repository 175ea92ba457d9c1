//! Command-line front end of the `eqm` binary.
//!
//! Flags may also come from a JSON config file (`--config`); flags given on
//! the command line win. Results go to `--out` or standard output, error
//! messages to standard error, and the process exit code reports the
//! failure class (see [`exit_code`]).

mod commands;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::error::Error;
use crate::extremal::{Inequality, L2Mode};
use crate::factors::Weight;
use crate::sets::{PeriodicSet, SetDescription};

pub const EXIT_OK: i32 = 0;
pub const EXIT_BAD_INPUT: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_RESOURCE: i32 = 4;
pub const EXIT_VIOLATION: i32 = 5;

#[derive(Debug, Parser)]
#[command(
    name = "eqm",
    version,
    about = "Equilibrium measures and sharp polynomial inequality constants"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Equilibrium density samples, gap zeros, mass and Frostman spread.
    Eqdensity,
    /// Every Bernstein/Markov factor that applies to the set.
    Factors,
    /// Numeric extremal values from the semi-infinite LP.
    Extremal,
    /// Randomized check of the polynomial inequalities.
    Verify,
    /// Weighted L² derivative ratios.
    L2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// Set description: a JSON file or inline JSON.
    #[arg(long, global = true)]
    pub set: Option<String>,
    /// Polynomial degree.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Derivative order.
    #[arg(long, global = true)]
    pub k: Option<usize>,
    /// Evaluation point (real point, or angle on circular sets).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub point: Option<f64>,
    /// Half-width of the symmetric periodic set [-β, β].
    #[arg(long, global = true)]
    pub beta: Option<f64>,
    /// Jacobi weight exponent at the left endpoint.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    /// Jacobi weight exponent at the right endpoint.
    #[arg(long = "beta-exp", global = true, allow_hyphen_values = true)]
    pub beta_exp: Option<f64>,
    /// Weight description: a JSON file or inline JSON.
    #[arg(long, global = true)]
    pub weight: Option<String>,
    /// Samples per band (eqdensity) or probes per band (verify).
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Degree sweep `n1:n2[:step]`.
    #[arg(long, global = true)]
    pub sweep: Option<String>,
    /// JSON config file with defaults for any of these flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Random polynomials per inequality.
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    /// Comma-separated inequalities to verify.
    #[arg(long, global = true, value_delimiter = ',')]
    pub inequality: Option<Vec<String>>,
    /// L² mode: markov, gradient-bernstein or omega-bernstein.
    #[arg(long, global = true)]
    pub mode: Option<String>,
    /// Scales the density used by the verifier (negative-control hook).
    #[arg(long = "corrupt-density", global = true, hide = true)]
    pub corrupt_density: Option<f64>,
}

/// The config-file counterpart of [`Flags`]; `set` and `weight` may be
/// inline JSON objects.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
struct ConfigFile {
    set: Option<serde_json::Value>,
    n: Option<usize>,
    k: Option<usize>,
    point: Option<f64>,
    beta: Option<f64>,
    alpha: Option<f64>,
    beta_exp: Option<f64>,
    weight: Option<serde_json::Value>,
    grid: Option<usize>,
    seed: Option<u64>,
    format: Option<Format>,
    out: Option<PathBuf>,
    sweep: Option<String>,
    trials: Option<usize>,
    inequality: Option<Vec<String>>,
    mode: Option<String>,
}

/// Fully resolved and validated run parameters.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub set: Option<SetDescription>,
    /// Degrees to run: the `--sweep` range, or `--n` alone.
    pub degrees: Vec<usize>,
    pub sweep: bool,
    pub k: usize,
    pub point: Option<f64>,
    pub beta: Option<f64>,
    pub weight: Option<Weight>,
    pub grid: Option<usize>,
    pub seed: u64,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub trials: Option<usize>,
    pub inequalities: Vec<Inequality>,
    pub mode: L2Mode,
    pub corrupt_density: Option<f64>,
}

/// What a command produced.
pub(crate) struct Output {
    pub json: serde_json::Value,
    pub csv: String,
    /// Extra files written next to `--out` (suffix, contents).
    pub sidecars: Vec<(String, String)>,
    pub exit: i32,
}

/// Maps a library error to the process exit code.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InvalidArgument(_) | Error::Domain(_) => EXIT_BAD_INPUT,
        Error::NumericFailure(_) => EXIT_NUMERIC,
        Error::ResourceLimit(_) => EXIT_RESOURCE,
    }
}

/// Reads `text` as inline JSON when it looks like an object, otherwise as a
/// path to a JSON file.
fn inline_or_file(text: &str, what: &str) -> Result<String, Error> {
    if text.trim_start().starts_with('{') {
        return Ok(text.to_string());
    }
    fs::read_to_string(text)
        .map_err(|e| Error::InvalidArgument(format!("cannot read {what} file {text}: {e}")))
}

fn parse_sweep(text: &str) -> Result<Vec<usize>, Error> {
    let bad = || Error::InvalidArgument(format!("sweep must look like n1:n2[:step], got {text:?}"));
    let parts: Vec<usize> = text
        .split(':')
        .map(|p| p.trim().parse::<usize>().map_err(|_| bad()))
        .collect::<Result<_, _>>()?;
    let (lo, hi, step) = match parts.as_slice() {
        [lo, hi] => (*lo, *hi, 1),
        [lo, hi, step] => (*lo, *hi, *step),
        _ => return Err(bad()),
    };
    if lo == 0 || step == 0 || hi < lo {
        return Err(bad());
    }
    Ok((lo..=hi).step_by(step).collect())
}

fn parse_kebab<T: serde::de::DeserializeOwned>(text: &str, what: &str) -> Result<T, Error> {
    serde_json::from_value(serde_json::Value::String(text.trim().to_string()))
        .map_err(|_| Error::InvalidArgument(format!("unknown {what} {text:?}")))
}

impl RunConfig {
    /// Merges flags over the optional config file and validates the result.
    pub fn resolve(command: Command, flags: Flags) -> Result<Self, Error> {
        let file = match &flags.config {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| {
                    Error::InvalidArgument(format!(
                        "cannot read config file {}: {e}",
                        path.display()
                    ))
                })?;
                serde_json::from_str::<ConfigFile>(&text).map_err(|e| {
                    Error::InvalidArgument(format!("bad config file {}: {e}", path.display()))
                })?
            }
            None => ConfigFile::default(),
        };

        let set = match (flags.set, file.set) {
            (Some(text), _) => Some(SetDescription::from_json(&inline_or_file(&text, "set")?)?),
            (None, Some(serde_json::Value::String(path))) => {
                Some(SetDescription::from_json(&inline_or_file(&path, "set")?)?)
            }
            (None, Some(value)) => Some(SetDescription::from_value(value)?),
            (None, None) => None,
        };

        let beta = flags.beta.or(file.beta);
        let set = match (set, beta) {
            (None, Some(b)) => Some(SetDescription::Periodic(PeriodicSet::symmetric(b)?)),
            (set, _) => set,
        };

        let alpha = flags.alpha.or(file.alpha);
        let beta_exp = flags.beta_exp.or(file.beta_exp);
        let weight_text = match (flags.weight, file.weight) {
            (Some(text), _) => Some(inline_or_file(&text, "weight")?),
            (None, Some(serde_json::Value::String(path))) => Some(inline_or_file(&path, "weight")?),
            (None, Some(value)) => Some(value.to_string()),
            (None, None) => None,
        };
        let weight = match (weight_text, alpha, beta_exp) {
            (Some(_), Some(_), _) | (Some(_), _, Some(_)) => {
                return Err(Error::InvalidArgument(
                    "give either --weight or --alpha/--beta-exp, not both".into(),
                ))
            }
            (Some(text), None, None) => Some(Weight::from_json(&text)?),
            (None, None, None) => None,
            (None, a, b) => Some(Weight::jacobi(a.unwrap_or(0.0), b.unwrap_or(0.0))?),
        };

        let n = flags.n.or(file.n);
        let sweep_text = flags.sweep.or(file.sweep);
        let (degrees, sweep) = match (&sweep_text, n) {
            (Some(text), _) => (parse_sweep(text)?, true),
            (None, Some(0)) => {
                return Err(Error::InvalidArgument("degree n must be positive".into()))
            }
            (None, Some(n)) => (vec![n], false),
            (None, None) => (Vec::new(), false),
        };

        let k = flags.k.or(file.k).unwrap_or(1);
        if k == 0 {
            return Err(Error::InvalidArgument(
                "derivative order k must be at least 1".into(),
            ));
        }
        let grid = flags.grid.or(file.grid);
        if grid == Some(0) {
            return Err(Error::InvalidArgument("grid must be positive".into()));
        }

        let inequalities = flags
            .inequality
            .or(file.inequality)
            .unwrap_or_default()
            .iter()
            .filter(|s| !s.trim().is_empty())
            .map(|s| parse_kebab::<Inequality>(s, "inequality"))
            .collect::<Result<Vec<_>, _>>()?;
        let mode = match flags.mode.or(file.mode) {
            Some(m) => parse_kebab::<L2Mode>(&m, "L2 mode")?,
            None => L2Mode::Markov,
        };

        Ok(RunConfig {
            command,
            set,
            degrees,
            sweep,
            k,
            point: flags.point.or(file.point),
            beta,
            weight,
            grid,
            seed: flags.seed.or(file.seed).unwrap_or(0),
            format: flags.format.or(file.format).unwrap_or_default(),
            out: flags.out.or(file.out),
            trials: flags.trials.or(file.trials),
            inequalities,
            mode,
            corrupt_density: flags.corrupt_density,
        })
    }

    pub(crate) fn require_set(&self) -> Result<&SetDescription, Error> {
        self.set
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("--set is required for this command".into()))
    }

    pub(crate) fn require_degrees(&self) -> Result<&[usize], Error> {
        if self.degrees.is_empty() {
            return Err(Error::InvalidArgument(
                "--n or --sweep is required for this command".into(),
            ));
        }
        Ok(&self.degrees)
    }
}

fn sidecar_path(out: &Path, suffix: &str) -> PathBuf {
    let mut name = out.as_os_str().to_os_string();
    name.push(suffix);
    PathBuf::from(name)
}

fn emit(config: &RunConfig, output: &Output) -> std::io::Result<()> {
    let body = match config.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&output.json).expect("JSON values serialize");
            s.push('\n');
            s
        }
        Format::Csv => output.csv.clone(),
    };
    match &config.out {
        Some(path) => {
            fs::write(path, body)?;
            if config.format == Format::Csv {
                for (suffix, contents) in &output.sidecars {
                    fs::write(sidecar_path(path, suffix), contents)?;
                }
            }
            Ok(())
        }
        None => std::io::stdout().lock().write_all(body.as_bytes()),
    }
}

/// Caps rayon's pool when `EQM_THREADS` is set.
fn configure_threads() -> Result<(), Error> {
    let Ok(text) = std::env::var("EQM_THREADS") else {
        return Ok(());
    };
    let threads: usize = text.trim().parse().ok().filter(|&t| t > 0).ok_or_else(|| {
        Error::InvalidArgument(format!(
            "EQM_THREADS must be a positive integer, got {text:?}"
        ))
    })?;
    // a pool may already exist when called twice in one process; keep it
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global();
    Ok(())
}

/// Runs one invocation and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                EXIT_BAD_INPUT
            } else {
                EXIT_OK
            };
        }
    };
    let result = configure_threads()
        .and_then(|_| RunConfig::resolve(cli.command, cli.flags))
        .and_then(|config| {
            let output = match config.command {
                Command::Eqdensity => commands::eqdensity(&config),
                Command::Factors => commands::factors(&config),
                Command::Extremal => commands::extremal(&config),
                Command::Verify => commands::verify(&config),
                Command::L2 => commands::l2(&config),
            }?;
            Ok((config, output))
        });
    match result {
        Ok((config, output)) => {
            if let Err(e) = emit(&config, &output) {
                eprintln!("eqm: cannot write output: {e}");
                return EXIT_BAD_INPUT;
            }
            output.exit
        }
        Err(e) => {
            eprintln!("eqm: {e}");
            exit_code(&e)
        }
    }
}
