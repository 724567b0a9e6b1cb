use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use dirmono_core::{
    CheckOptions, CopulaSpec, DependenceNotion, Direction, Family, GridSpec, Method,
    DEFAULT_EPS_DEN, DEFAULT_TOL,
};

use crate::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "dirmono",
    version,
    about = "Grid checks of directional monotonicity for copulas"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Classify directions of one copula on a lattice.
    Check(CheckArgs),
}

/// Flags of `check`. Every field is optional so a config file can fill gaps.
#[derive(Debug, Default, Clone, Args, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct CheckArgs {
    /// product, m, w, fgm, amh, convexpim or survival-of:<family>
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub dim: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub theta: Option<f64>,
    /// Sign tokens such as "+,-,+". Repeatable.
    #[arg(
        long = "direction",
        allow_hyphen_values = true,
        conflicts_with = "all_directions"
    )]
    #[serde(default)]
    pub direction: Option<Vec<String>>,
    #[arg(long)]
    #[serde(default)]
    pub all_directions: bool,
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long, value_parser = Method::from_str)]
    pub method: Option<Method>,
    #[arg(long, value_parser = DependenceNotion::from_str)]
    pub notion: Option<DependenceNotion>,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub eps_den: Option<f64>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON file with the same keys as the flags; flags take precedence.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    #[serde(default)]
    pub allow_conjectural_pure: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// A fully resolved run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub spec: CopulaSpec,
    /// `None` means every direction.
    pub directions: Option<Vec<Direction>>,
    pub grid: GridSpec,
    pub method: Method,
    pub notion: DependenceNotion,
    pub tol: f64,
    pub eps_den: f64,
    pub allow_conjectural_pure: bool,
    pub format: Format,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn options(&self) -> CheckOptions {
        CheckOptions {
            tol: self.tol,
            eps_den: self.eps_den,
            notion: self.notion,
            allow_conjectural_pure: self.allow_conjectural_pure,
        }
    }

    pub fn resolved_directions(&self) -> Vec<Direction> {
        match &self.directions {
            Some(list) => list.clone(),
            None => Direction::all(self.spec.dim()).expect("spec dimension is validated"),
        }
    }
}

/// Parses a full argument vector, program name first.
pub fn parse_config<I, T>(argv: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let Command::Check(args) = Cli::try_parse_from(argv)?.command;
    resolve(args)
}

fn load_file(path: &Path) -> Result<CheckArgs, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("invalid config {}: {e}", path.display())))
}

/// Fills unset flags from `base`.
fn overlay(flags: CheckArgs, base: CheckArgs) -> CheckArgs {
    let explicit_list = flags.direction.is_some() || flags.all_directions;
    CheckArgs {
        family: flags.family.or(base.family),
        dim: flags.dim.or(base.dim),
        lambda: flags.lambda.or(base.lambda),
        delta: flags.delta.or(base.delta),
        theta: flags.theta.or(base.theta),
        direction: if explicit_list {
            flags.direction
        } else {
            base.direction
        },
        all_directions: if explicit_list {
            flags.all_directions
        } else {
            base.all_directions
        },
        grid: flags.grid.or(base.grid),
        method: flags.method.or(base.method),
        notion: flags.notion.or(base.notion),
        tol: flags.tol.or(base.tol),
        eps_den: flags.eps_den.or(base.eps_den),
        format: flags.format.or(base.format),
        out: flags.out.or(base.out),
        config: flags.config,
        allow_conjectural_pure: flags.allow_conjectural_pure || base.allow_conjectural_pure,
    }
}

pub fn resolve(flags: CheckArgs) -> Result<RunConfig, CliError> {
    let args = match &flags.config {
        Some(path) => {
            let base = load_file(path)?;
            overlay(flags, base)
        }
        None => flags,
    };

    let tag = args
        .family
        .as_deref()
        .ok_or_else(|| CliError::Config("--family is required".into()))?;
    let dim = args
        .dim
        .ok_or_else(|| CliError::Config("--dim is required".into()))?;
    let family = Family::from_tag(tag, args.lambda, args.delta, args.theta)?;
    let spec = CopulaSpec::new(family, dim)?;

    if args.all_directions && args.direction.is_some() {
        return Err(CliError::Config(
            "--direction and --all-directions are mutually exclusive".into(),
        ));
    }
    let directions = match args.direction {
        Some(list) if !args.all_directions => {
            let parsed = list
                .iter()
                .map(|s| s.parse::<Direction>())
                .collect::<Result<Vec<_>, _>>()?;
            for d in &parsed {
                if d.dim() != dim {
                    return Err(CliError::Config(format!(
                        "direction {d} has {} signs, expected {dim}",
                        d.dim()
                    )));
                }
            }
            Some(parsed)
        }
        _ => None,
    };

    let grid = match args.grid {
        Some(g) => GridSpec::new(g)?,
        None => GridSpec::default_for_dim(dim),
    };
    let tol = args.tol.unwrap_or(DEFAULT_TOL);
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(CliError::Config(format!(
            "--tol must be positive, got {tol}"
        )));
    }
    let eps_den = args.eps_den.unwrap_or(DEFAULT_EPS_DEN);
    if !(eps_den > 0.0 && eps_den.is_finite()) {
        return Err(CliError::Config(format!(
            "--eps-den must be positive, got {eps_den}"
        )));
    }

    Ok(RunConfig {
        spec,
        directions,
        grid,
        method: args.method.unwrap_or(Method::Both),
        notion: args.notion.unwrap_or_default(),
        tol,
        eps_den,
        allow_conjectural_pure: args.allow_conjectural_pure,
        format: args.format.unwrap_or(Format::Text),
        out: args.out,
    })
}
