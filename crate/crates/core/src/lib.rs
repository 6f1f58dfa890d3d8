//! Fuzzy TOPSIS ranking of alternatives from multi-expert linguistic ratings.
//!
//! The pipeline runs from expert questionnaires ([`survey`]) through the
//! triangular fuzzy number arithmetic in [`tfn`] and the ranking engine in
//! [`topsis`], with optional category roll-ups ([`rollup`]) and rendering
//! ([`report`]).

pub mod cli;
pub mod matrix_file;
pub mod report;
pub mod rollup;
pub mod scale;
pub mod survey;
pub mod tfn;
pub mod topsis;

pub use scale::LinguisticScale;
pub use survey::{parse_config, parse_survey, serialize_dataset, StudyConfig, SurveyDataset};
pub use tfn::{aggregate, vertex_distance, Tfn};
pub use topsis::{run_pipeline, FuzzyDecisionMatrix, PipelineInput, PipelineOptions, RankingResult};
