//! The fuzzy TOPSIS pipeline.
//!
//! Expert ratings are aggregated into a decision matrix, normalized per
//! criterion, multiplied by the criterion weights, and compared against a
//! positive and a negative ideal with the vertex distance. Each alternative's
//! closeness coefficient `S- / (S- + S+)` determines its rank.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::scale::LinguisticScale;
use crate::survey::{CriterionSpec, Direction, StudyConfig, SurveyDataset, WeightSpec};
use crate::tfn::{aggregate, compensated_sum, Tfn, TfnError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IdealStrategy {
    /// `A* = (1,1,1)`, `A- = (L/U, L/U, L/U)` from the scale bounds.
    PaperFixed,
    /// `A* = (1,1,1)`, `A- = (0,0,0)`.
    ChenFixed,
    /// Component-wise max / min over the weighted column.
    Extremal,
}

impl fmt::Display for IdealStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IdealStrategy::PaperFixed => "paper-fixed",
            IdealStrategy::ChenFixed => "chen-fixed",
            IdealStrategy::Extremal => "extremal",
        })
    }
}

impl FromStr for IdealStrategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "paper-fixed" => Ok(IdealStrategy::PaperFixed),
            "chen-fixed" => Ok(IdealStrategy::ChenFixed),
            "extremal" => Ok(IdealStrategy::Extremal),
            other => Err(format!(
                "unknown ideal strategy `{other}` (expected paper-fixed, chen-fixed or extremal)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    /// Column extremes over the alternatives.
    Relative,
    /// The scale's global bounds.
    Absolute,
}

impl fmt::Display for Normalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Normalization::Relative => "relative",
            Normalization::Absolute => "absolute",
        })
    }
}

impl FromStr for Normalization {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "relative" => Ok(Normalization::Relative),
            "absolute" => Ok(Normalization::Absolute),
            other => Err(format!(
                "unknown normalization `{other}` (expected relative or absolute)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Stage {
    Raw,
    Normalized,
    Weighted,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Raw => "raw",
            Stage::Normalized => "normalized",
            Stage::Weighted => "weighted",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TopsisError {
    #[error("expected a {expected} matrix, got a {found} one")]
    WrongStage { expected: Stage, found: Stage },
    #[error("dimension mismatch: expected {expected} {what}, got {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("cost criterion `{criterion}`: alternative `{alternative}` has a non-positive component")]
    CostDivideByZero {
        alternative: String,
        criterion: String,
    },
    #[error("criterion `{0}`: every upper vertex is zero, cannot normalize")]
    ZeroColumn(String),
    #[error("scale bounds ({lower}, {upper}) cannot normalize: {reason}")]
    InvalidScaleBounds {
        lower: f64,
        upper: f64,
        reason: &'static str,
    },
    #[error("alternative `{0}` is at distance 0 from both ideals and cannot be ranked")]
    DegenerateAlternative(String),
    #[error("criterion `{0}` has an elicited weight but no weight ratings are available")]
    ElicitedWeightUnavailable(String),
    #[error("duplicate alternative `{0}`")]
    DuplicateAlternative(String),
    #[error("a matrix needs at least one alternative and one criterion")]
    Empty,
    #[error(transparent)]
    Tfn(#[from] TfnError),
}

/// `m x n` grid of fuzzy ratings, tagged with the pipeline stage it is at.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyDecisionMatrix {
    alternatives: Vec<String>,
    criteria: Vec<CriterionSpec>,
    cells: Vec<Vec<Tfn>>,
    stage: Stage,
}

impl FuzzyDecisionMatrix {
    /// A raw matrix; `cells[i][j]` rates alternative `i` on criterion `j`.
    pub fn new(
        alternatives: Vec<String>,
        criteria: Vec<CriterionSpec>,
        cells: Vec<Vec<Tfn>>,
    ) -> Result<Self, TopsisError> {
        if alternatives.is_empty() || criteria.is_empty() {
            return Err(TopsisError::Empty);
        }
        if cells.len() != alternatives.len() {
            return Err(TopsisError::DimensionMismatch {
                what: "rows",
                expected: alternatives.len(),
                found: cells.len(),
            });
        }
        if let Some(row) = cells.iter().find(|r| r.len() != criteria.len()) {
            return Err(TopsisError::DimensionMismatch {
                what: "columns",
                expected: criteria.len(),
                found: row.len(),
            });
        }
        for (k, a) in alternatives.iter().enumerate() {
            if alternatives[..k].contains(a) {
                return Err(TopsisError::DuplicateAlternative(a.clone()));
            }
        }
        Ok(FuzzyDecisionMatrix {
            alternatives,
            criteria,
            cells,
            stage: Stage::Raw,
        })
    }

    pub fn alternatives(&self) -> &[String] {
        &self.alternatives
    }

    pub fn criteria(&self) -> &[CriterionSpec] {
        &self.criteria
    }

    pub fn stage(&self) -> Stage {
        self.stage
    }

    pub fn cell(&self, alternative: usize, criterion: usize) -> Tfn {
        self.cells[alternative][criterion]
    }

    pub fn rows(&self) -> &[Vec<Tfn>] {
        &self.cells
    }

    pub fn position(&self, alternative: &str) -> Option<usize> {
        self.alternatives.iter().position(|a| a == alternative)
    }

    pub fn column(&self, criterion: usize) -> impl Iterator<Item = Tfn> + '_ {
        self.cells.iter().map(move |row| row[criterion])
    }

    /// Same matrix with rows reordered by alternative id.
    pub fn sorted_by_alternative(&self) -> Self {
        let mut order: Vec<usize> = (0..self.alternatives.len()).collect();
        order.sort_by(|&x, &y| self.alternatives[x].cmp(&self.alternatives[y]));
        FuzzyDecisionMatrix {
            alternatives: order.iter().map(|&i| self.alternatives[i].clone()).collect(),
            criteria: self.criteria.clone(),
            cells: order.iter().map(|&i| self.cells[i].clone()).collect(),
            stage: self.stage,
        }
    }

    fn expect_stage(&self, expected: Stage) -> Result<(), TopsisError> {
        if self.stage != expected {
            return Err(TopsisError::WrongStage {
                expected,
                found: self.stage,
            });
        }
        Ok(())
    }

    fn map_cells(
        &self,
        stage: Stage,
        mut f: impl FnMut(usize, usize, Tfn) -> Result<Tfn, TopsisError>,
    ) -> Result<Self, TopsisError> {
        let cells = self
            .cells
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, t)| f(i, j, *t))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(FuzzyDecisionMatrix {
            alternatives: self.alternatives.clone(),
            criteria: self.criteria.clone(),
            cells,
            stage,
        })
    }
}

/// Aggregate each cell over the experts' encoded ratings.
pub fn assemble_matrix(dataset: &SurveyDataset) -> Result<FuzzyDecisionMatrix, TopsisError> {
    let config = dataset.config();
    let scale = &config.scale;
    let k = dataset.expert_count();
    let mut cells = Vec::with_capacity(config.alternatives.len());
    for i in 0..config.alternatives.len() {
        let mut row = Vec::with_capacity(config.criteria.len());
        for j in 0..config.criteria.len() {
            let ratings = (0..k)
                .map(|e| {
                    scale
                        .term_to_tfn(dataset.rating(e, i, j))
                        .expect("dataset labels are validated against the scale")
                })
                .collect::<Vec<_>>();
            row.push(aggregate(&ratings)?);
        }
        cells.push(row);
    }
    FuzzyDecisionMatrix::new(config.alternatives.clone(), config.criteria.clone(), cells)
}

/// One weight per criterion: fixed weights pass through, elicited ones are
/// aggregated over the experts' weight terms.
pub fn combine_weights(dataset: &SurveyDataset) -> Result<Vec<Tfn>, TopsisError> {
    let config = dataset.config();
    config
        .criteria
        .iter()
        .enumerate()
        .map(|(j, crit)| match crit.weight {
            WeightSpec::Fixed(w) => Ok(w),
            WeightSpec::Elicited => {
                let terms = (0..dataset.expert_count())
                    .filter_map(|e| dataset.weight_rating(e, j))
                    .map(|label| {
                        config
                            .scale
                            .term_to_tfn(label)
                            .expect("dataset labels are validated against the scale")
                    })
                    .collect::<Vec<_>>();
                if terms.is_empty() {
                    return Err(TopsisError::ElicitedWeightUnavailable(crit.id.clone()));
                }
                Ok(aggregate(&terms)?)
            }
        })
        .collect()
}

/// Fixed weights declared on the matrix's own criteria.
pub fn declared_weights(matrix: &FuzzyDecisionMatrix) -> Result<Vec<Tfn>, TopsisError> {
    matrix
        .criteria
        .iter()
        .map(|c| match c.weight {
            WeightSpec::Fixed(w) => Ok(w),
            WeightSpec::Elicited => Err(TopsisError::ElicitedWeightUnavailable(c.id.clone())),
        })
        .collect()
}

/// Linear scale transformation to a dimensionless matrix.
///
/// Benefit criteria divide by the largest upper vertex, cost criteria divide
/// the smallest lower vertex by each component (which swaps `a` and `c`).
/// `Absolute` uses the scale's bounds instead of the column extremes.
pub fn normalize(
    matrix: &FuzzyDecisionMatrix,
    mode: Normalization,
    scale: &LinguisticScale,
) -> Result<FuzzyDecisionMatrix, TopsisError> {
    matrix.expect_stage(Stage::Raw)?;
    let n = matrix.criteria.len();
    let mut divisors = Vec::with_capacity(n);
    for (j, crit) in matrix.criteria.iter().enumerate() {
        let value = match (crit.direction, mode) {
            (Direction::Benefit, Normalization::Relative) => {
                let c_star = matrix.column(j).map(|t| t.c()).fold(f64::NEG_INFINITY, f64::max);
                if c_star <= 0.0 {
                    return Err(TopsisError::ZeroColumn(crit.id.clone()));
                }
                c_star
            }
            (Direction::Cost, Normalization::Relative) => {
                matrix.column(j).map(|t| t.a()).fold(f64::INFINITY, f64::min)
            }
            (Direction::Benefit, Normalization::Absolute) => {
                if scale.upper_bound() <= 0.0 {
                    return Err(TopsisError::InvalidScaleBounds {
                        lower: scale.lower_bound(),
                        upper: scale.upper_bound(),
                        reason: "upper bound must be positive",
                    });
                }
                scale.upper_bound()
            }
            (Direction::Cost, Normalization::Absolute) => {
                if scale.lower_bound() <= 0.0 {
                    return Err(TopsisError::InvalidScaleBounds {
                        lower: scale.lower_bound(),
                        upper: scale.upper_bound(),
                        reason: "lower bound must be positive for cost criteria",
                    });
                }
                scale.lower_bound()
            }
        };
        divisors.push(value);
    }
    matrix.map_cells(Stage::Normalized, |i, j, x| {
        let crit = &matrix.criteria[j];
        match crit.direction {
            Direction::Benefit => Ok(x.scale_div(divisors[j])?),
            Direction::Cost => {
                if x.a() <= 0.0 {
                    return Err(TopsisError::CostDivideByZero {
                        alternative: matrix.alternatives[i].clone(),
                        criterion: crit.id.clone(),
                    });
                }
                let num = divisors[j];
                Ok(Tfn::new(num / x.c(), num / x.b(), num / x.a())?)
            }
        }
    })
}

pub fn apply_weights(
    matrix: &FuzzyDecisionMatrix,
    weights: &[Tfn],
) -> Result<FuzzyDecisionMatrix, TopsisError> {
    matrix.expect_stage(Stage::Normalized)?;
    if weights.len() != matrix.criteria.len() {
        return Err(TopsisError::DimensionMismatch {
            what: "weights",
            expected: matrix.criteria.len(),
            found: weights.len(),
        });
    }
    matrix.map_cells(Stage::Weighted, |_, j, r| Ok(r.multiply(&weights[j])?))
}

/// Positive and negative ideal per criterion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdealPair {
    pub positive: Vec<Tfn>,
    pub negative: Vec<Tfn>,
    pub strategy: IdealStrategy,
}

pub fn compute_ideals(
    matrix: &FuzzyDecisionMatrix,
    strategy: IdealStrategy,
    scale: &LinguisticScale,
) -> Result<IdealPair, TopsisError> {
    matrix.expect_stage(Stage::Weighted)?;
    let n = matrix.criteria.len();
    let (positive, negative) = match strategy {
        IdealStrategy::PaperFixed => {
            let (lower, upper) = (scale.lower_bound(), scale.upper_bound());
            if upper <= 0.0 || lower < 0.0 {
                return Err(TopsisError::InvalidScaleBounds {
                    lower,
                    upper,
                    reason: "fixed negative ideal needs 0 <= lower and 0 < upper",
                });
            }
            (vec![Tfn::ONE; n], vec![Tfn::crisp(lower / upper)?; n])
        }
        IdealStrategy::ChenFixed => (vec![Tfn::ONE; n], vec![Tfn::ZERO; n]),
        IdealStrategy::Extremal => {
            let mut pos = Vec::with_capacity(n);
            let mut neg = Vec::with_capacity(n);
            for j in 0..n {
                let fold = |pick: fn(f64, f64) -> f64, init: f64| {
                    matrix.column(j).fold([init; 3], |acc, t| {
                        let v = t.to_array();
                        [pick(acc[0], v[0]), pick(acc[1], v[1]), pick(acc[2], v[2])]
                    })
                };
                pos.push(Tfn::try_from(fold(f64::max, f64::NEG_INFINITY))?);
                neg.push(Tfn::try_from(fold(f64::min, f64::INFINITY))?);
            }
            (pos, neg)
        }
    };
    Ok(IdealPair {
        positive,
        negative,
        strategy,
    })
}

/// Summed distances of one alternative to the two ideals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Separation {
    pub s_plus: f64,
    pub s_minus: f64,
}

pub fn compute_distances(
    matrix: &FuzzyDecisionMatrix,
    ideals: &IdealPair,
) -> Result<Vec<Separation>, TopsisError> {
    matrix.expect_stage(Stage::Weighted)?;
    let n = matrix.criteria.len();
    for len in [ideals.positive.len(), ideals.negative.len()] {
        if len != n {
            return Err(TopsisError::DimensionMismatch {
                what: "ideals",
                expected: n,
                found: len,
            });
        }
    }
    Ok(matrix
        .cells
        .iter()
        .map(|row| Separation {
            s_plus: compensated_sum(row.iter().zip(&ideals.positive).map(|(v, p)| v.distance(p))),
            s_minus: compensated_sum(row.iter().zip(&ideals.negative).map(|(v, q)| v.distance(q))),
        })
        .collect())
}

/// Closeness coefficient `S- / (S- + S+)`, or `None` if both distances are 0.
pub fn closeness(s_plus: f64, s_minus: f64) -> Option<f64> {
    if s_plus + s_minus == 0.0 {
        return None;
    }
    if s_minus == 0.0 {
        return Some(0.0);
    }
    // Equal to s_minus / (s_minus + s_plus); this form stays monotone in
    // each argument under rounding.
    Some(1.0 / (1.0 + s_plus / s_minus))
}

/// Rank position of one input entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ranked {
    pub index: usize,
    pub rank: usize,
}

/// Competition ranking ("1-2-2-4") by descending score.
///
/// An entry shares the rank of the first entry of the current tie group when
/// their scores differ by at most `tie_epsilon`. The sort is stable, so equal
/// scores keep their input order.
pub fn rank(scores: &[f64], tie_epsilon: f64) -> Vec<Ranked> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&x, &y| scores[y].total_cmp(&scores[x]));
    let mut leader: Option<(f64, usize)> = None;
    order
        .iter()
        .enumerate()
        .map(|(pos, &index)| {
            let score = scores[index];
            let rank = match leader {
                Some((top, r)) if (top - score).abs() <= tie_epsilon => r,
                _ => {
                    leader = Some((score, pos + 1));
                    pos + 1
                }
            };
            Ranked { index, rank }
        })
        .collect()
}

/// Round to `decimals` places exactly as `format!("{:.p$}")` displays it.
pub fn round_to(x: f64, decimals: u32) -> f64 {
    format!("{:.*}", decimals as usize, x)
        .parse()
        .expect("formatted float parses")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TiePolicy {
    pub tie_epsilon: f64,
    /// Closeness was rounded to this many decimals before ranking.
    pub rounded_to: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankingRow {
    pub alternative: String,
    pub s_plus: f64,
    pub s_minus: f64,
    pub cc: f64,
    pub rank: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankingResult {
    /// Sorted by rank.
    pub rows: Vec<RankingRow>,
    pub ideals: IdealPair,
    pub normalization: Normalization,
    pub tie_policy: TiePolicy,
    /// The aggregated matrix the ranking was computed from.
    pub raw: FuzzyDecisionMatrix,
}

impl RankingResult {
    pub fn row(&self, alternative: &str) -> Option<&RankingRow> {
        self.rows.iter().find(|r| r.alternative == alternative)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineOptions {
    pub ideal_strategy: IdealStrategy,
    pub normalization: Normalization,
    pub tie_epsilon: f64,
    pub round_before_rank: Option<u32>,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            ideal_strategy: IdealStrategy::PaperFixed,
            normalization: Normalization::Relative,
            tie_epsilon: 0.0,
            round_before_rank: None,
        }
    }
}

impl PipelineOptions {
    pub fn from_config(config: &StudyConfig) -> Self {
        PipelineOptions {
            ideal_strategy: config.ideal_strategy,
            normalization: config.normalization,
            ..Default::default()
        }
    }
}

pub enum PipelineInput<'a> {
    Survey(&'a SurveyDataset),
    /// Pre-aggregated raw matrix; weights come from its criterion specs.
    Matrix {
        matrix: &'a FuzzyDecisionMatrix,
        scale: &'a LinguisticScale,
    },
}

pub fn run_pipeline(
    input: PipelineInput<'_>,
    options: &PipelineOptions,
) -> Result<RankingResult, TopsisError> {
    let (raw, weights, scale) = match input {
        PipelineInput::Survey(dataset) => (
            assemble_matrix(dataset)?,
            combine_weights(dataset)?,
            &dataset.config().scale,
        ),
        PipelineInput::Matrix { matrix, scale } => {
            matrix.expect_stage(Stage::Raw)?;
            (matrix.clone(), declared_weights(matrix)?, scale)
        }
    };
    let normalized = normalize(&raw, options.normalization, scale)?;
    let weighted = apply_weights(&normalized, &weights)?;
    let ideals = compute_ideals(&weighted, options.ideal_strategy, scale)?;
    let separations = compute_distances(&weighted, &ideals)?;

    let cc = separations
        .iter()
        .zip(&raw.alternatives)
        .map(|(s, id)| {
            closeness(s.s_plus, s.s_minus)
                .ok_or_else(|| TopsisError::DegenerateAlternative(id.clone()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let keys: Vec<f64> = match options.round_before_rank {
        Some(p) => cc.iter().map(|&x| round_to(x, p)).collect(),
        None => cc.clone(),
    };
    let rows = rank(&keys, options.tie_epsilon)
        .into_iter()
        .map(|r| RankingRow {
            alternative: raw.alternatives[r.index].clone(),
            s_plus: separations[r.index].s_plus,
            s_minus: separations[r.index].s_minus,
            cc: cc[r.index],
            rank: r.rank,
        })
        .collect();
    Ok(RankingResult {
        rows,
        ideals,
        normalization: options.normalization,
        tie_policy: TiePolicy {
            tie_epsilon: options.tie_epsilon,
            rounded_to: options.round_before_rank,
        },
        raw,
    })
}
