//! Command-line flags, the flat config file, and their merge.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use qspline_core::pipeline::{shots_mode, FitConfig};
use qspline_core::vqls::{Entangler, OptimizerKind, SolveConfig};
use qspline_core::{Mode, TargetKind};

use crate::error::CliError;

pub const SEED_ENV: &str = "QSPLINE_SEED";
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_SHOTS: u64 = 10_000;

#[derive(Debug, Parser)]
#[command(name = "qspline", version, about = "Quantum spline fitting on a simulated statevector")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit one function and write its CSV (and optionally SVG).
    Fit(RunArgs),
    /// Fit all four functions and print the NRMSE table.
    Bench(RunArgs),
    /// Print the unitary decomposition of a 2×2 block or a spline system.
    Decompose(DecomposeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Shots,
}

#[derive(Debug, Clone, Default, Args)]
pub struct RunArgs {
    /// sigmoid, relu, elu or sin.
    #[arg(long)]
    pub function: Option<String>,
    /// Number of sample points K (power of two, 2..=64).
    #[arg(long)]
    pub knots: Option<usize>,
    #[arg(long)]
    pub degree: Option<usize>,
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    #[arg(long)]
    pub shots: Option<u64>,
    #[arg(long)]
    pub restarts: Option<usize>,
    #[arg(long)]
    pub layers: Option<usize>,
    /// Run seed; falls back to the config file, then QSPLINE_SEED, then 42.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write an SVG plot.
    #[arg(long)]
    pub svg: bool,
    /// Skip the variational solve and use the exact classical solution.
    #[arg(long)]
    pub classical_only: bool,
    /// bfgs, gradient-descent or simplex.
    #[arg(long)]
    pub optimizer: Option<String>,
    /// linear-cnot, ring-cnot, linear-cz, ring-cz or none.
    #[arg(long)]
    pub entangler: Option<String>,
    #[arg(long)]
    pub max_iterations: Option<usize>,
    /// Solve the Hermitian dilation of the system instead.
    #[arg(long)]
    pub dilation: bool,
    /// Flat key=value file; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct DecomposeArgs {
    /// Decompose [[1−a, a], [0, 1−b]].
    #[arg(long, num_args = 2, value_names = ["A", "B"], allow_negative_numbers = true, conflicts_with_all = ["function", "knots"])]
    pub block: Option<Vec<f64>>,
    #[arg(long, requires = "knots")]
    pub function: Option<String>,
    #[arg(long, requires = "function")]
    pub knots: Option<usize>,
}

/// Fully resolved run settings.
#[derive(Debug, Clone, PartialEq)]
pub struct Settings {
    pub function: Option<TargetKind>,
    pub knots: usize,
    pub degree: usize,
    pub mode: ModeArg,
    pub shots: u64,
    pub restarts: usize,
    pub layers: Option<usize>,
    pub seed: u64,
    pub out: PathBuf,
    pub svg: bool,
    pub classical_only: bool,
    pub optimizer: OptimizerKind,
    pub entangler: Entangler,
    pub max_iterations: Option<usize>,
    pub dilation: bool,
}

const KEYS: [&str; 15] = [
    "function",
    "knots",
    "degree",
    "mode",
    "shots",
    "restarts",
    "layers",
    "seed",
    "out",
    "svg",
    "classical-only",
    "optimizer",
    "entangler",
    "max-iterations",
    "dilation",
];

/// Parses `key=value` lines; blank lines and `#` comments are skipped.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>, CliError> {
    let mut map = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("config line {}: expected key=value", n + 1)))?;
        let k = k.trim().replace('_', "-");
        if !KEYS.contains(&k.as_str()) {
            return Err(CliError::Usage(format!("config line {}: unknown key `{k}`", n + 1)));
        }
        map.insert(k, v.trim().to_string());
    }
    Ok(map)
}

fn read_config(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    parse_config(&text)
}

fn parse_value<T: std::str::FromStr>(key: &str, raw: &str) -> Result<T, CliError>
where
    T::Err: std::fmt::Display,
{
    raw.parse().map_err(|e| CliError::Usage(format!("invalid {key} `{raw}`: {e}")))
}

fn parse_bool(key: &str, raw: &str) -> Result<bool, CliError> {
    match raw {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        _ => Err(CliError::Usage(format!("invalid {key} `{raw}`: expected true or false"))),
    }
}

impl Settings {
    /// Merges flags over the config file over defaults. `env_seed` is the
    /// raw value of `QSPLINE_SEED`, if set.
    pub fn resolve(args: &RunArgs, env_seed: Option<&str>) -> Result<Self, CliError> {
        let file = match &args.config {
            Some(path) => read_config(path)?,
            None => BTreeMap::new(),
        };
        let from_file = |key: &str| file.get(key).map(String::as_str);

        macro_rules! pick {
            ($flag:expr, $key:literal) => {
                match $flag.clone() {
                    Some(v) => Some(v),
                    None => from_file($key).map(|raw| parse_value($key, raw)).transpose()?,
                }
            };
        }

        let function: Option<String> = pick!(args.function, "function");
        let function = function.map(|f| parse_value::<TargetKind>("function", &f)).transpose()?;
        let mode = match args.mode {
            Some(m) => m,
            None => match from_file("mode") {
                None | Some("exact") => ModeArg::Exact,
                Some("shots") => ModeArg::Shots,
                Some(other) => return Err(CliError::Usage(format!("invalid mode `{other}`: expected exact or shots"))),
            },
        };
        let seed = match pick!(args.seed, "seed") {
            Some(s) => s,
            None => match env_seed {
                Some(raw) => parse_value(SEED_ENV, raw.trim())?,
                None => DEFAULT_SEED,
            },
        };
        let optimizer: Option<String> = pick!(args.optimizer, "optimizer");
        let entangler: Option<String> = pick!(args.entangler, "entangler");
        let flag_or_file = |flag: bool, key: &str| -> Result<bool, CliError> {
            if flag {
                return Ok(true);
            }
            from_file(key).map(|raw| parse_bool(key, raw)).transpose().map(|v| v.unwrap_or(false))
        };

        let settings = Settings {
            function,
            knots: pick!(args.knots, "knots").unwrap_or(16),
            degree: pick!(args.degree, "degree").unwrap_or(1),
            mode,
            shots: pick!(args.shots, "shots").unwrap_or(DEFAULT_SHOTS),
            restarts: pick!(args.restarts, "restarts").unwrap_or(SolveConfig::default().restarts),
            layers: pick!(args.layers, "layers"),
            seed,
            out: pick!(args.out, "out").unwrap_or_else(|| PathBuf::from(".")),
            svg: flag_or_file(args.svg, "svg")?,
            classical_only: flag_or_file(args.classical_only, "classical-only")?,
            // sampled costs are not differentiable, so shots mode defaults to the simplex
            optimizer: optimizer.map(|o| parse_value("optimizer", &o)).transpose()?.unwrap_or(match mode {
                ModeArg::Exact => OptimizerKind::Bfgs,
                ModeArg::Shots => OptimizerKind::NelderMead,
            }),
            entangler: entangler.map(|e| parse_value("entangler", &e)).transpose()?.unwrap_or_default(),
            max_iterations: pick!(args.max_iterations, "max-iterations"),
            dilation: flag_or_file(args.dilation, "dilation")?,
        };
        settings.validate()?;
        Ok(settings)
    }

    fn validate(&self) -> Result<(), CliError> {
        if !self.knots.is_power_of_two() || !(2..=qspline_core::pipeline::MAX_KNOTS).contains(&self.knots) {
            return Err(CliError::Usage(format!(
                "--knots must be a power of two between 2 and {}, got {}",
                qspline_core::pipeline::MAX_KNOTS,
                self.knots
            )));
        }
        if self.degree != 1 {
            return Err(CliError::Usage(format!("--degree {} is not supported; only degree 1 systems are square", self.degree)));
        }
        if self.restarts == 0 {
            return Err(CliError::Usage("--restarts must be at least 1".into()));
        }
        if self.mode == ModeArg::Shots && self.shots == 0 {
            return Err(CliError::Usage("--shots must be at least 1".into()));
        }
        if self.max_iterations == Some(0) {
            return Err(CliError::Usage("--max-iterations must be at least 1".into()));
        }
        Ok(())
    }

    pub fn core_mode(&self) -> Mode {
        match self.mode {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Shots => shots_mode(self.shots, self.seed),
        }
    }

    pub fn fit_config(&self, function: TargetKind) -> FitConfig {
        let mut solve = SolveConfig { mode: self.core_mode(), optimizer: self.optimizer, restarts: self.restarts, seed: self.seed, ..Default::default() };
        if let Some(n) = self.max_iterations {
            solve.max_iterations = n;
        }
        FitConfig {
            function,
            knots: self.knots,
            degree: self.degree,
            solve,
            layers: self.layers,
            entangler: self.entangler,
            dilation: self.dilation,
            classical_only: self.classical_only,
        }
    }
}
