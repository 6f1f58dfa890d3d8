//! `ftopsis` command-line surface.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 invalid input or usage,
//! 3 computation failure.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::matrix_file::{parse_matrix, serialize_matrix, MatrixFileError};
use crate::report::{render_ranking, render_scale, Format, Note, RenderOptions, MAX_PRECISION};
use crate::rollup::{rollup, RollupError};
use crate::scale::LinguisticScale;
use crate::survey::{parse_config, parse_survey, serialize_dataset, ConfigError, StudyConfig, SurveyDataset};
use crate::topsis::{
    assemble_matrix, run_pipeline, FuzzyDecisionMatrix, IdealStrategy, Normalization,
    PipelineInput, PipelineOptions, TopsisError,
};

#[derive(Debug, Parser)]
#[command(name = "ftopsis", version, about = "Fuzzy TOPSIS ranking from linguistic expert ratings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a study config and its ratings file, reporting every problem
    Validate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        ratings: PathBuf,
    },
    /// Rank alternatives from ratings or a pre-aggregated matrix
    Rank {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        report: ReportArgs,
    },
    /// Roll item ratings up into the config's categories and rank those
    Rollup {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        report: ReportArgs,
    },
    /// Print the linguistic scale (the built-in one unless a config is given)
    Scales {
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Print ratings or a matrix in canonical form
    Canonicalize {
        #[command(flatten)]
        input: InputArgs,
    },
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Study config (TOML)
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Expert ratings (CSV); requires --config
    #[arg(long, conflicts_with = "matrix", requires = "config")]
    pub ratings: Option<PathBuf>,
    /// Pre-aggregated decision matrix (CSV)
    #[arg(long)]
    pub matrix: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[arg(long, default_value = "table")]
    pub format: Format,
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(0..=MAX_PRECISION as i64))]
    pub precision: u32,
    /// Round closeness to --precision decimals before ranking
    #[arg(long)]
    pub round_before_rank: bool,
    #[arg(long)]
    pub ideal_strategy: Option<IdealStrategy>,
    #[arg(long)]
    pub normalization: Option<Normalization>,
    #[arg(long, default_value_t = 0.0, value_parser = parse_epsilon)]
    pub tie_epsilon: f64,
}

fn parse_epsilon(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(x) if x >= 0.0 && x.is_finite() => Ok(x),
        _ => Err(format!("`{s}` is not a finite number >= 0")),
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {message}")]
    Invalid { path: PathBuf, message: String },
    #[error(transparent)]
    Rollup(#[from] RollupError),
    #[error(transparent)]
    Computation(#[from] TopsisError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } => 1,
            CliError::Usage(_) | CliError::Invalid { .. } | CliError::Rollup(_) => 2,
            CliError::Computation(_) => 3,
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn invalid(path: &Path, message: impl ToString) -> CliError {
    CliError::Invalid {
        path: path.to_path_buf(),
        message: message.to_string(),
    }
}

fn load_config(path: &Path) -> Result<StudyConfig, CliError> {
    parse_config(&read(path)?).map_err(|e: ConfigError| invalid(path, e))
}

fn load_dataset(config: &StudyConfig, path: &Path) -> Result<SurveyDataset, CliError> {
    parse_survey(&read(path)?, config).map_err(|e| invalid(path, e))
}

fn load_matrix(path: &Path) -> Result<FuzzyDecisionMatrix, CliError> {
    parse_matrix(&read(path)?).map_err(|e: MatrixFileError| invalid(path, e))
}

enum Loaded {
    Survey(SurveyDataset),
    Matrix {
        matrix: FuzzyDecisionMatrix,
        config: Option<StudyConfig>,
    },
}

impl Loaded {
    fn config(&self) -> Option<&StudyConfig> {
        match self {
            Loaded::Survey(d) => Some(d.config()),
            Loaded::Matrix { config, .. } => config.as_ref(),
        }
    }
}

fn load_input(input: &InputArgs) -> Result<Loaded, CliError> {
    let config = input.config.as_deref().map(load_config).transpose()?;
    match (&input.matrix, &input.ratings, config) {
        (Some(m), _, config) => Ok(Loaded::Matrix {
            matrix: load_matrix(m)?,
            config,
        }),
        (None, Some(r), Some(config)) => Ok(Loaded::Survey(load_dataset(&config, r)?)),
        _ => Err(CliError::Usage(
            "give --matrix, or --config together with --ratings".into(),
        )),
    }
}

fn pipeline_options(config: Option<&StudyConfig>, args: &ReportArgs) -> PipelineOptions {
    let base = config.map(PipelineOptions::from_config).unwrap_or_default();
    PipelineOptions {
        ideal_strategy: args.ideal_strategy.unwrap_or(base.ideal_strategy),
        normalization: args.normalization.unwrap_or(base.normalization),
        tie_epsilon: args.tie_epsilon,
        round_before_rank: args.round_before_rank.then_some(args.precision),
    }
}

fn render_options(args: &ReportArgs) -> RenderOptions {
    RenderOptions {
        format: args.format,
        precision: args.precision,
    }
}

pub fn cmd_validate(config: &Path, ratings: &Path) -> Result<String, CliError> {
    let config = load_config(config)?;
    let dataset = load_dataset(&config, ratings)?;
    Ok(format!(
        "ok: K={} m={} n={} categories={}\n",
        dataset.expert_count(),
        config.alternatives.len(),
        config.criteria.len(),
        config.categories.as_ref().map_or(0, |c| c.len()),
    ))
}

pub fn cmd_rank(input: &InputArgs, args: &ReportArgs) -> Result<String, CliError> {
    let loaded = load_input(input)?;
    let options = pipeline_options(loaded.config(), args);
    let default_scale = LinguisticScale::default_scale();
    let result = match &loaded {
        Loaded::Survey(d) => run_pipeline(PipelineInput::Survey(d), &options)?,
        Loaded::Matrix { matrix, config } => run_pipeline(
            PipelineInput::Matrix {
                matrix,
                scale: config.as_ref().map_or(&default_scale, |c| &c.scale),
            },
            &options,
        )?,
    };
    Ok(render_ranking(&result, &render_options(args), "alternative", &[]))
}

pub fn cmd_rollup(input: &InputArgs, args: &ReportArgs) -> Result<String, CliError> {
    if input.config.is_none() {
        return Err(CliError::Usage("rollup needs --config with categories".into()));
    }
    let loaded = load_input(input)?;
    let config = loaded.config().expect("config given").clone();
    let Some(categories) = &config.categories else {
        return Err(CliError::Usage(format!(
            "config `{}` defines no categories",
            config.name
        )));
    };
    let items = match &loaded {
        Loaded::Survey(d) => assemble_matrix(d)?,
        Loaded::Matrix { matrix, .. } => matrix.clone(),
    };
    let rolled = rollup(&items, categories)?;
    let options = pipeline_options(Some(&config), args);
    let result = run_pipeline(
        PipelineInput::Matrix {
            matrix: &rolled,
            scale: &config.scale,
        },
        &options,
    )?;
    let notes: Vec<Note> = categories
        .categories()
        .iter()
        .filter_map(|c| {
            c.note.as_ref().map(|text| Note {
                subject: c.id.clone(),
                text: text.clone(),
            })
        })
        .collect();
    Ok(render_ranking(&result, &render_options(args), "category", &notes))
}

pub fn cmd_scales(config: Option<&Path>) -> Result<String, CliError> {
    let scale = match config {
        Some(p) => load_config(p)?.scale,
        None => LinguisticScale::default_scale(),
    };
    Ok(render_scale(&scale))
}

pub fn cmd_canonicalize(input: &InputArgs) -> Result<String, CliError> {
    match load_input(input)? {
        Loaded::Survey(d) => Ok(serialize_dataset(&d)),
        Loaded::Matrix { matrix, .. } => {
            let path = input.matrix.as_deref().expect("matrix given");
            serialize_matrix(&matrix.sorted_by_alternative()).map_err(|e| invalid(path, e))
        }
    }
}

pub fn execute(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Validate { config, ratings } => cmd_validate(config, ratings),
        Command::Rank { input, report } => cmd_rank(input, report),
        Command::Rollup { input, report } => cmd_rollup(input, report),
        Command::Scales { config } => cmd_scales(config.as_deref()),
        Command::Canonicalize { input } => cmd_canonicalize(input),
    }
}
