//! Command-line front end: `sample`, `family`, `verify`, `limits`.
//!
//! Every command builds its output as a string first, so the bytes written
//! depend only on the inputs.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

pub mod family;
pub mod limits;
pub mod sample;
pub mod spec;
pub mod svg;
pub mod verify;

pub use spec::{Config, CurveKind, CurveSpec, FamilySpec};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERIFY: u8 = 1;
pub const EXIT_INVALID: u8 = 2;
pub const EXIT_IO: u8 = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn invalid(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INVALID,
            message: message.into(),
        }
    }
    pub fn io(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_IO,
            message: message.into(),
        }
    }
    pub fn verification(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_VERIFY,
            message: message.into(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        CliError::invalid(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "superconic", version, about = "Explicit Cartesian-oval and superconic sags")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample one curve on a uniform grid over [0, ymax].
    Sample(SampleArgs),
    /// Build the family of curves sharing c0 and m; writes JSON and SVG.
    Family(CurveArgs),
    /// Run oracle suites against an oval.
    Verify(VerifyArgs),
    /// Convergence table towards a conic limit.
    Limits(LimitsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

impl Format {
    fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
            Format::Svg => "svg",
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct CurveArgs {
    #[arg(long)]
    pub m: Option<f64>,
    /// Source parameter; a comma-separated list for `family`.
    #[arg(long = "eta-i", value_delimiter = ',', allow_hyphen_values = true)]
    pub eta_i: Vec<f64>,
    #[arg(long = "eta-o", allow_hyphen_values = true)]
    pub eta_o: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub c0: Option<f64>,
    /// Conic constant.
    #[arg(long = "K", allow_hyphen_values = true)]
    pub k: Option<f64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub ymax: Option<f64>,
    #[arg(long)]
    pub samples: Option<usize>,
    /// Aspheric coefficients f4,f6,...
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub asphere: Vec<f64>,
    /// Flat JSON file with the same fields; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory; stdout when omitted (except `family`).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads for grid evaluation (0: all cores).
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
}

impl CurveArgs {
    fn flags(&self) -> Config {
        Config {
            m: self.m,
            eta_i: (!self.eta_i.is_empty()).then(|| spec::OneOrMany::Many(self.eta_i.clone())),
            eta_o: self.eta_o,
            epsilon: self.epsilon,
            c0: self.c0,
            k: self.k,
            ymax: self.ymax,
            samples: self.samples,
            asphere: (!self.asphere.is_empty()).then(|| self.asphere.clone()),
            sweep: None,
        }
    }

    /// Config file contents with flags laid over them.
    pub fn resolve(&self) -> Result<Config, CliError> {
        let base = match &self.config {
            Some(path) => Config::load(path)?,
            None => Config::default(),
        };
        Ok(base.overlay(self.flags()))
    }
}

#[derive(Debug, Clone, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub curve: CurveArgs,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub curve: CurveArgs,
    /// Suites to run; all when omitted.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub suite: Vec<verify::Suite>,
    /// Values of eta_i for the limits suite.
    #[arg(long, value_delimiter = ',')]
    pub sweep: Vec<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct LimitsArgs {
    #[command(flatten)]
    pub curve: CurveArgs,
    /// Decreasing positive values of the vanishing parameter.
    #[arg(long, value_delimiter = ',')]
    pub sweep: Vec<f64>,
}

fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::invalid(format!("invalid field: threads ({e})")))?;
    Ok(pool.install(f))
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    std::fs::write(&path, contents).map_err(|e| CliError::io(format!("cannot write {}: {e}", path.display())))?;
    Ok(path)
}

fn emit(out: Option<&Path>, name: &str, contents: &str) -> Result<(), CliError> {
    match out {
        Some(dir) => write_file(dir, name, contents).map(|_| ()),
        None => std::io::stdout()
            .write_all(contents.as_bytes())
            .map_err(|e| CliError::io(format!("cannot write stdout: {e}"))),
    }
}

/// Runs one parsed command line; the error carries the exit code.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Sample(args) => {
            let spec = CurveSpec::from_config(&args.curve.resolve()?, 101)?;
            let text = with_threads(args.curve.threads, || sample::cmd_sample(&spec, args.format))??;
            emit(
                args.curve.out.as_deref(),
                &format!("sample.{}", args.format.extension()),
                &text,
            )
        }
        Command::Family(args) => {
            let spec = FamilySpec::from_config(&args.resolve()?)?;
            let output = with_threads(args.threads, || family::cmd_family(&spec))??;
            let dir = args.out.clone().unwrap_or_else(|| PathBuf::from("."));
            family::write_family(&output, &dir)?;
            Ok(())
        }
        Command::Verify(args) => {
            let mut cfg = args.curve.resolve()?;
            if !args.sweep.is_empty() {
                cfg.sweep = Some(args.sweep.clone());
            }
            let reports = with_threads(args.curve.threads, || verify::cmd_verify(&cfg, &args.suite))??;
            let text = verify::render(&reports);
            emit(args.curve.out.as_deref(), "verify.txt", &text)?;
            if let Some(bad) = reports.iter().find(|r| !r.passed) {
                return Err(CliError::verification(format!(
                    "suite {} failed: {} = {:e} > {:e} at y = {}",
                    bad.suite, bad.metric, bad.value, bad.tolerance, bad.worst_y
                )));
            }
            Ok(())
        }
        Command::Limits(args) => {
            let mut cfg = args.curve.resolve()?;
            if !args.sweep.is_empty() {
                cfg.sweep = Some(args.sweep.clone());
            }
            let text = with_threads(args.curve.threads, || limits::cmd_limits(&cfg))??;
            emit(args.curve.out.as_deref(), "limits.csv", &text)
        }
    }
}

/// Shortest decimal that parses back to the same `f64`.
pub fn fmt_f64(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-5..1e16).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fmt_round_trips() {
        for x in [0.0, 0.2, 1.44, -1.7529741607e-11, 1e-300, 123456789.123, 1e20, f64::MIN_POSITIVE] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits(), "{s}");
        }
        assert_eq!(fmt_f64(0.2), "0.2");
        assert_eq!(fmt_f64(1e-7), "1e-7");
    }

    #[test]
    fn parses_negative_lists() {
        let cli = Cli::try_parse_from(["superconic", "family", "--eta-i", "-0.3,0.1", "--K", "-2.25"]).unwrap();
        match cli.command {
            Command::Family(a) => {
                assert_eq!(a.eta_i, vec![-0.3, 0.1]);
                assert_eq!(a.k, Some(-2.25));
            }
            _ => unreachable!(),
        }
    }
}
