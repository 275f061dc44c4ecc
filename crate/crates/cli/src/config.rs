//! Command line and config-file parsing.
//!
//! Config files are plain text, one `key = value` per line. `#` starts a
//! comment; blank lines are ignored; keys may use `-` or `_`. Lists are
//! comma-separated. Flags given on the command line override file values.
//!
//! ```text
//! # sweep the three regimes
//! p_over_m1 = 0.1, 1, 10
//! steps = 2000
//! out = runs/fig1
//! ```

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use nuccr_core::pair::Fault;
use nuccr_core::PhysParams;
use serde::Serialize;

use crate::CliError;

pub const DEFAULT_P_OVER_M1: [f64; 3] = [0.1, 1.0, 10.0];
pub const DEFAULT_STEPS: usize = 4000;
pub const DEFAULT_PRECISION: usize = 12;
pub const DEFAULT_OUT: &str = "out";

#[derive(Debug, Parser)]
#[command(name = "nuccr", version, about = "Complementarity relations for oscillating Dirac neutrinos")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Cmd,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// One electron neutrino: chirality, spin and flavor.
    Single {
        #[arg(value_enum)]
        quantity: SingleQuantity,
        #[command(flatten)]
        opts: Opts,
    },
    /// Lepton/antineutrino pair from a spin-0 decay.
    Pair {
        #[arg(value_enum)]
        quantity: PairQuantity,
        #[command(flatten)]
        opts: Opts,
    },
    /// Run the invariant suite and print a JSON summary.
    Verify {
        #[command(flatten)]
        opts: Opts,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SingleQuantity {
    Purity,
    Ccr,
    Survival,
    Entropy,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairQuantity {
    SpinCcrGlobal,
    SpinCcrParties,
    Purity,
    Amplitude,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Opts {
    /// Momenta in units of m1; comma-separated or repeated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub p_over_m1: Option<Vec<f64>>,
    #[arg(long, allow_hyphen_values = true)]
    pub sin2_theta: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub dm2_over_m1sq: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub ml_over_m1: Option<f64>,
    /// End of the time window in units of 1/m1 [default: 4π/ΔE per momentum].
    #[arg(long, allow_hyphen_values = true)]
    pub t_max: Option<f64>,
    /// Samples per sweep, endpoints included [default: 4000].
    #[arg(long, allow_hyphen_values = true)]
    pub steps: Option<i64>,
    /// Output directory [default: out].
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Significant digits in CSV output [default: 12].
    #[arg(long, allow_hyphen_values = true)]
    pub precision: Option<i64>,
    #[arg(long, hide = true)]
    pub inject_fault: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "model", content = "quantity", rename_all = "kebab-case")]
pub enum Scenario {
    Single(SingleQuantity),
    Pair(PairQuantity),
    Verify,
}

impl Scenario {
    pub fn stem(&self) -> String {
        match self {
            Scenario::Single(q) => format!("single_{}", value_name(*q)),
            Scenario::Pair(q) => format!("pair_{}", value_name(*q)),
            Scenario::Verify => "verify".into(),
        }
    }
}

fn value_name<T: ValueEnum>(v: T) -> String {
    v.to_possible_value().map(|p| p.get_name().replace('-', "_")).unwrap_or_default()
}

/// Fully resolved run configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioConfig {
    pub scenario: Scenario,
    pub p_over_m1: Vec<f64>,
    pub sin2_theta: f64,
    pub dm2_over_m1sq: f64,
    pub ml_over_m1: f64,
    /// `None` means two flavor periods for each momentum.
    pub t_max: Option<f64>,
    pub steps: usize,
    pub out_path: PathBuf,
    pub precision: usize,
    #[serde(skip)]
    pub fault: Fault,
}

impl ScenarioConfig {
    pub fn params(&self, p_over_m1: f64) -> Result<PhysParams, CliError> {
        Ok(PhysParams::from_ratios(p_over_m1, self.sin2_theta, self.dm2_over_m1sq, self.ml_over_m1)?)
    }
}

/// Parses `argv` (program name first) and an optional config file named by `--config`.
pub fn parse_config<I, T>(argv: I) -> Result<ScenarioConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv)?;
    let (scenario, flags) = match cli.command {
        Cmd::Single { quantity, opts } => (Scenario::Single(quantity), opts),
        Cmd::Pair { quantity, opts } => (Scenario::Pair(quantity), opts),
        Cmd::Verify { opts } => (Scenario::Verify, opts),
    };
    let file = match &flags.config {
        Some(path) => read_config_file(path)?,
        None => Opts::default(),
    };
    resolve(scenario, overlay(file, flags))
}

fn overlay(base: Opts, top: Opts) -> Opts {
    Opts {
        p_over_m1: top.p_over_m1.or(base.p_over_m1),
        sin2_theta: top.sin2_theta.or(base.sin2_theta),
        dm2_over_m1sq: top.dm2_over_m1sq.or(base.dm2_over_m1sq),
        ml_over_m1: top.ml_over_m1.or(base.ml_over_m1),
        t_max: top.t_max.or(base.t_max),
        steps: top.steps.or(base.steps),
        out: top.out.or(base.out),
        config: top.config,
        precision: top.precision.or(base.precision),
        inject_fault: top.inject_fault.or(base.inject_fault),
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn resolve(scenario: Scenario, o: Opts) -> Result<ScenarioConfig, CliError> {
    let p_over_m1 = o.p_over_m1.unwrap_or_else(|| DEFAULT_P_OVER_M1.to_vec());
    if p_over_m1.is_empty() {
        return Err(usage("--p-over-m1 needs at least one value"));
    }
    if let Some(bad) = p_over_m1.iter().find(|p| !(p.is_finite() && **p >= 0.0)) {
        return Err(usage(format!("--p-over-m1 values must be finite and >= 0, got {bad}")));
    }
    let sin2_theta = o.sin2_theta.unwrap_or(PhysParams::DEFAULT_SIN2_THETA);
    if !(0.0..1.0).contains(&sin2_theta) {
        return Err(usage(format!("--sin2-theta must lie in [0, 1), got {sin2_theta}")));
    }
    let dm2_over_m1sq = o.dm2_over_m1sq.unwrap_or(PhysParams::DEFAULT_DM2_OVER_M1SQ);
    if !(dm2_over_m1sq.is_finite() && dm2_over_m1sq > -1.0) {
        return Err(usage(format!("--dm2-over-m1sq must be finite and > -1, got {dm2_over_m1sq}")));
    }
    let ml_over_m1 = o.ml_over_m1.unwrap_or(PhysParams::DEFAULT_ML_OVER_M1);
    if !(ml_over_m1.is_finite() && ml_over_m1 > 0.0) {
        return Err(usage(format!("--ml-over-m1 must be finite and > 0, got {ml_over_m1}")));
    }
    if let Some(t) = o.t_max {
        if !(t.is_finite() && t > 0.0) {
            return Err(usage(format!("--t-max must be finite and > 0, got {t}")));
        }
    }
    let steps = o.steps.unwrap_or(DEFAULT_STEPS as i64);
    if steps < 2 {
        return Err(usage(format!("--steps must be at least 2, got {steps}")));
    }
    let precision = o.precision.unwrap_or(DEFAULT_PRECISION as i64);
    if !(1..=17).contains(&precision) {
        return Err(usage(format!("--precision must lie in 1..=17, got {precision}")));
    }
    let fault = match o.inject_fault.as_deref() {
        None => Fault::None,
        Some(s) => s.parse().map_err(|_| usage(format!("unknown fault {s:?}")))?,
    };
    Ok(ScenarioConfig {
        scenario,
        p_over_m1,
        sin2_theta,
        dm2_over_m1sq,
        ml_over_m1,
        t_max: o.t_max,
        steps: steps as usize,
        out_path: o.out.unwrap_or_else(|| PathBuf::from(DEFAULT_OUT)),
        precision: precision as usize,
        fault,
    })
}

fn read_config_file(path: &Path) -> Result<Opts, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_config_text(&text).map_err(|e| match e {
        CliError::Usage(msg) => CliError::Usage(format!("{}: {msg}", path.display())),
        other => other,
    })
}

/// Parses the `key = value` grammar described in the module docs.
pub fn parse_config_text(text: &str) -> Result<Opts, CliError> {
    let mut o = Opts::default();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let lineno = n + 1;
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| usage(format!("line {lineno}: expected `key = value`, got {line:?}")))?;
        let key = key.trim().replace('-', "_");
        let value = value.trim();
        let real = |v: &str| -> Result<f64, CliError> {
            v.trim().parse().map_err(|_| usage(format!("line {lineno}: {key} expects a number, got {v:?}")))
        };
        let int = |v: &str| -> Result<i64, CliError> {
            v.parse().map_err(|_| usage(format!("line {lineno}: {key} expects an integer, got {v:?}")))
        };
        match key.as_str() {
            "p_over_m1" => o.p_over_m1 = Some(value.split(',').map(real).collect::<Result<_, _>>()?),
            "sin2_theta" => o.sin2_theta = Some(real(value)?),
            "dm2_over_m1sq" => o.dm2_over_m1sq = Some(real(value)?),
            "ml_over_m1" => o.ml_over_m1 = Some(real(value)?),
            "t_max" => o.t_max = Some(real(value)?),
            "steps" => o.steps = Some(int(value)?),
            "precision" => o.precision = Some(int(value)?),
            "out" => o.out = Some(PathBuf::from(value)),
            other => return Err(usage(format!("line {lineno}: unknown key {other:?}"))),
        }
    }
    Ok(o)
}
