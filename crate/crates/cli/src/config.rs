//! Command-line flags, the optional JSON config file, and their merge into
//! one resolved [`RunConfig`]. Flags win over the file, the file wins over
//! built-in defaults.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use ptlg::checks::DEFAULT_SAMPLE_SIZE;
use ptlg::sweep::{DEFAULT_REFINE_TOLERANCE, FIGURE_ALPHAS, FIGURE_PHI, FIGURE_THETA, FIGURE_T_POINTS};
use ptlg::{Expression, Grid};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::output::Format;

#[derive(Debug, Parser)]
#[command(
    name = "ptlg",
    version,
    about = "Leggett-Garg, NSIT and arrow-of-time diagnostics under PT-symmetric qubit dynamics"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the data behind one of the four figures.
    Figure {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=4))]
        number: u8,
    },
    /// Maximize an LG expression over the configured grid.
    Optimize {
        /// L13, V1, V2 or V3.
        expression: Expression,
        /// Hermitian reference dynamics or the PT-symmetric Hamiltonian.
        #[arg(long)]
        dynamics: Option<Dynamics>,
        /// Also optimize the initial-state angles of the variant scenario.
        #[arg(long)]
        free_state: bool,
        #[arg(long)]
        refine_tolerance: Option<f64>,
    },
    /// Run the identity suite over a deterministic parameter sample.
    Check {
        #[arg(long)]
        sample_size: Option<usize>,
        /// Perturb the propagator entering the U U^dagger check by 1e-3.
        #[arg(long)]
        inject_fault: bool,
    },
    /// Signaling deviation of the Bell-pair reduced state over the grid.
    Nosignal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Dynamics {
    Unitary,
    Pt,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Switch {
    On,
    Off,
}

/// Flags shared by every command. Angles are in radians.
#[derive(Debug, Default, Args)]
pub struct CommonArgs {
    /// Non-Hermiticity angle(s), comma separated.
    #[arg(long, global = true, value_delimiter = ',', allow_negative_numbers = true)]
    pub alpha: Vec<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub t_min: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub t_max: Option<f64>,
    #[arg(long, global = true)]
    pub t_steps: Option<usize>,
    /// Polar angle of the pure initial state.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub theta: Option<f64>,
    /// Azimuthal angle of the pure initial state.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub phi: Option<f64>,
    /// Energy scale of the Hamiltonian.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub s: Option<f64>,
    /// Evolve the initial state by one step before the first measurement.
    #[arg(long, global = true)]
    pub pre_evolution: Option<Switch>,
    #[arg(long, global = true)]
    pub format: Option<Format>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// JSON file with defaults for any of the flags.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

/// One value or a list, for `alpha` in the config file.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany {
    One(f64),
    Many(Vec<f64>),
}

/// Contents of `--config`. Unknown keys are rejected.
#[derive(Debug, Default, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub alpha: Option<OneOrMany>,
    pub t_min: Option<f64>,
    pub t_max: Option<f64>,
    pub t_steps: Option<usize>,
    pub theta: Option<f64>,
    pub phi: Option<f64>,
    pub s: Option<f64>,
    pub pre_evolution: Option<bool>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub dynamics: Option<Dynamics>,
    pub free_state: Option<bool>,
    pub refine_tolerance: Option<f64>,
    pub sample_size: Option<usize>,
}

impl FileConfig {
    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            context: "cannot read config",
            path: path.to_path_buf(),
            source,
        })?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TGrid {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl TGrid {
    pub fn grid(&self) -> CliResult<Grid> {
        Ok(Grid::new(self.min, self.max, self.steps)?)
    }
}

/// Fully resolved settings for one run; echoed under `config` in JSON output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub figure: Option<u8>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expression: Option<String>,
    pub alpha: Vec<f64>,
    pub t: TGrid,
    pub theta: f64,
    pub phi: f64,
    pub s: f64,
    /// `None` keeps each preset's own convention.
    pub pre_evolution: Option<bool>,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub dynamics: Dynamics,
    pub free_state: bool,
    pub refine_tolerance: f64,
    pub sample_size: usize,
    pub inject_fault: bool,
}

impl RunConfig {
    pub fn resolve(command: &Command, flags: &CommonArgs, file: &FileConfig) -> Self {
        let (name, figure, expression) = match command {
            Command::Figure { number } => ("figure", Some(*number), None),
            Command::Optimize { expression, .. } => ("optimize", None, Some(expression.name().to_string())),
            Command::Check { .. } => ("check", None, None),
            Command::Nosignal => ("nosignal", None, None),
        };
        let default_alpha = match command {
            Command::Optimize { .. } => vec![0.0],
            _ => FIGURE_ALPHAS.to_vec(),
        };
        let alpha = if !flags.alpha.is_empty() {
            flags.alpha.clone()
        } else {
            match &file.alpha {
                Some(OneOrMany::One(a)) => vec![*a],
                Some(OneOrMany::Many(list)) => list.clone(),
                None => default_alpha,
            }
        };
        let (mut dynamics, mut free_state, mut refine_tolerance) = (None, false, None);
        let (mut sample_size, mut inject_fault) = (None, false);
        match command {
            Command::Optimize { dynamics: d, free_state: f, refine_tolerance: r, .. } => {
                (dynamics, free_state, refine_tolerance) = (*d, *f, *r);
            }
            Command::Check { sample_size: n, inject_fault: f } => {
                (sample_size, inject_fault) = (*n, *f);
            }
            _ => {}
        }
        Self {
            command: name.into(),
            figure,
            expression,
            alpha,
            t: TGrid {
                min: flags.t_min.or(file.t_min).unwrap_or(0.0),
                max: flags.t_max.or(file.t_max).unwrap_or(PI),
                steps: flags.t_steps.or(file.t_steps).unwrap_or(FIGURE_T_POINTS),
            },
            theta: flags.theta.or(file.theta).unwrap_or(FIGURE_THETA),
            phi: flags.phi.or(file.phi).unwrap_or(FIGURE_PHI),
            s: flags.s.or(file.s).unwrap_or(1.0),
            pre_evolution: flags.pre_evolution.map(|s| s == Switch::On).or(file.pre_evolution),
            format: flags.format.or(file.format).unwrap_or(Format::Csv),
            out: flags.out.clone().or_else(|| file.out.clone()),
            dynamics: dynamics.or(file.dynamics).unwrap_or(Dynamics::Pt),
            free_state: free_state || file.free_state.unwrap_or(false),
            refine_tolerance: refine_tolerance.or(file.refine_tolerance).unwrap_or(DEFAULT_REFINE_TOLERANCE),
            sample_size: sample_size.or(file.sample_size).unwrap_or(DEFAULT_SAMPLE_SIZE),
            inject_fault,
        }
    }

    pub fn from_cli(cli: &Cli) -> CliResult<Self> {
        let file = match &cli.common.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        Ok(Self::resolve(&cli.command, &cli.common, &file))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> Cli {
        Cli::try_parse_from(std::iter::once("ptlg").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn flags_override_file_and_defaults() {
        let cli = parse(&["figure", "2", "--alpha", "0.5,-0.25", "--t-steps", "8"]);
        let file: FileConfig =
            serde_json::from_str(r#"{"alpha": 1.0, "t_steps": 4, "theta": 0.3, "format": "json"}"#).unwrap();
        let cfg = RunConfig::resolve(&cli.command, &cli.common, &file);
        assert_eq!(cfg.alpha, vec![0.5, -0.25]);
        assert_eq!(cfg.t.steps, 8);
        assert_eq!(cfg.theta, 0.3);
        assert_eq!(cfg.format, Format::Json);
        assert_eq!(cfg.phi, FIGURE_PHI);
        assert_eq!(cfg.figure, Some(2));
    }

    #[test]
    fn unknown_config_keys_are_rejected() {
        assert!(serde_json::from_str::<FileConfig>(r#"{"alpha": 0.1, "gamma": 2}"#).is_err());
    }

    #[test]
    fn pre_evolution_switch_and_optimize_defaults() {
        let cli = parse(&["optimize", "v3", "--pre-evolution", "off"]);
        let cfg = RunConfig::resolve(&cli.command, &cli.common, &FileConfig::default());
        assert_eq!(cfg.pre_evolution, Some(false));
        assert_eq!(cfg.alpha, vec![0.0]);
        assert_eq!(cfg.expression.as_deref(), Some("V3"));
        assert_eq!(cfg.dynamics, Dynamics::Pt);
    }

    #[test]
    fn figure_number_is_range_checked() {
        assert!(Cli::try_parse_from(["ptlg", "figure", "5"]).is_err());
        assert!(Cli::try_parse_from(["ptlg", "optimize", "L14"]).is_err());
    }
}
