//! Study configuration and expert questionnaire ingestion.
//!
//! A study is described by a TOML document:
//!
//! ```toml
//! name = "pilot"
//! ideal_strategy = "paper-fixed"   # or "chen-fixed", "extremal"
//! normalization = "relative"       # or "absolute"
//! alternatives = ["alpha", "beta"]
//!
//! [scale]                          # optional, defaults to the five-term scale
//! name = "five"
//! terms = [{ label = "low", value = [1, 1, 3] }, { label = "high", value = [3, 5, 5] }]
//!
//! [[criteria]]
//! id = "impact"
//! direction = "benefit"            # or "cost"
//! weight = [1, 1, 1]               # or "elicited" to read per-expert weight terms
//!
//! [[categories]]                   # optional
//! id = "group a"
//! members = ["alpha"]
//! note = "free text shown under roll-up reports"
//! ```
//!
//! Ratings are long-format CSV with the header `expert,alternative,criterion,term`.
//! Weight ratings for `elicited` criteria follow in the same file under a second
//! header line `expert,criterion,term`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::Deserialize;
use thiserror::Error;

use crate::rollup::{Category, CategoryMap, RollupError};
use crate::scale::{normalize_label, LinguisticScale, RawScale, ScaleError};
use crate::tfn::Tfn;
use crate::topsis::{IdealStrategy, Normalization};

pub const RATINGS_HEADER: [&str; 4] = ["expert", "alternative", "criterion", "term"];
pub const WEIGHTS_HEADER: [&str; 3] = ["expert", "criterion", "term"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Benefit,
    Cost,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Benefit => "benefit",
            Direction::Cost => "cost",
        })
    }
}

impl std::str::FromStr for Direction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "benefit" => Ok(Direction::Benefit),
            "cost" => Ok(Direction::Cost),
            other => Err(format!("unknown direction `{other}` (expected benefit or cost)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightSpec {
    Fixed(Tfn),
    /// Combined from per-expert linguistic weight ratings.
    Elicited,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionSpec {
    pub id: String,
    pub direction: Direction,
    pub weight: WeightSpec,
}

impl CriterionSpec {
    pub fn benefit(id: impl Into<String>) -> Self {
        CriterionSpec {
            id: id.into(),
            direction: Direction::Benefit,
            weight: WeightSpec::Fixed(Tfn::ONE),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyConfig {
    pub name: String,
    pub scale: LinguisticScale,
    pub criteria: Vec<CriterionSpec>,
    pub alternatives: Vec<String>,
    pub categories: Option<CategoryMap>,
    pub ideal_strategy: IdealStrategy,
    pub normalization: Normalization,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("duplicate {kind} id `{id}`")]
    DuplicateId { kind: &'static str, id: String },
    #[error("category `{category}` lists unknown alternative `{member}`")]
    UnknownCategoryMember { category: String, member: String },
    #[error("invalid {field} `{value}`")]
    InvalidStrategy { field: &'static str, value: String },
    #[error("invalid weight for criterion `{criterion}`: {reason}")]
    InvalidWeight { criterion: String, reason: String },
    #[error("a study needs at least 2 alternatives, got {0}")]
    TooFewAlternatives(usize),
    #[error("a study needs at least 1 criterion")]
    NoCriteria,
    #[error("empty {0} id")]
    EmptyId(&'static str),
    #[error("cost criterion `{0}` requires a scale whose lower bound is positive")]
    CostNeedsPositiveScale(String),
    #[error(transparent)]
    Scale(#[from] ScaleError),
    #[error(transparent)]
    Categories(#[from] RollupError),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(default)]
    name: Option<String>,
    #[serde(default)]
    scale: Option<RawScale>,
    #[serde(default)]
    criteria: Vec<RawCriterion>,
    alternatives: Vec<String>,
    #[serde(default)]
    categories: Vec<RawCategory>,
    #[serde(default)]
    ideal_strategy: Option<String>,
    #[serde(default)]
    normalization: Option<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCriterion {
    id: String,
    #[serde(default)]
    direction: Option<String>,
    #[serde(default)]
    weight: Option<RawWeight>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawWeight {
    Fixed([f64; 3]),
    Keyword(String),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCategory {
    id: String,
    members: Vec<String>,
    #[serde(default)]
    note: Option<String>,
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rfind('\n').map_or(before.len(), |nl| before.len() - nl - 1) + 1;
    (line, column)
}

fn check_unique<'a>(
    kind: &'static str,
    ids: impl IntoIterator<Item = &'a String>,
) -> Result<(), ConfigError> {
    let mut seen = BTreeSet::new();
    for id in ids {
        if id.is_empty() {
            return Err(ConfigError::EmptyId(kind));
        }
        if !seen.insert(id.as_str()) {
            return Err(ConfigError::DuplicateId {
                kind,
                id: id.clone(),
            });
        }
    }
    Ok(())
}

/// Parse and validate a study configuration document.
pub fn parse_config(text: &str) -> Result<StudyConfig, ConfigError> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map_or((0, 0), |s| line_col(text, s.start));
        ConfigError::Parse {
            line,
            column,
            message: e.message().to_string(),
        }
    })?;

    let scale = match &raw.scale {
        Some(s) => LinguisticScale::validate(s)?,
        None => LinguisticScale::default_scale(),
    };

    let alternatives: Vec<String> = raw.alternatives.iter().map(|a| a.trim().to_string()).collect();
    check_unique("alternative", &alternatives)?;
    if alternatives.len() < 2 {
        return Err(ConfigError::TooFewAlternatives(alternatives.len()));
    }

    if raw.criteria.is_empty() {
        return Err(ConfigError::NoCriteria);
    }
    let mut criteria = Vec::with_capacity(raw.criteria.len());
    for rc in &raw.criteria {
        let id = rc.id.trim().to_string();
        let direction = match &rc.direction {
            None => Direction::Benefit,
            Some(d) => d.parse().map_err(|_| ConfigError::InvalidStrategy {
                field: "direction",
                value: d.clone(),
            })?,
        };
        let weight = match &rc.weight {
            None => WeightSpec::Fixed(Tfn::ONE),
            Some(RawWeight::Fixed(v)) => {
                let w = Tfn::try_from(*v).map_err(|e| ConfigError::InvalidWeight {
                    criterion: id.clone(),
                    reason: e.to_string(),
                })?;
                if !w.is_nonnegative() {
                    return Err(ConfigError::InvalidWeight {
                        criterion: id,
                        reason: "components must be nonnegative".into(),
                    });
                }
                WeightSpec::Fixed(w)
            }
            Some(RawWeight::Keyword(k)) if k.trim().eq_ignore_ascii_case("elicited") => {
                WeightSpec::Elicited
            }
            Some(RawWeight::Keyword(k)) => {
                return Err(ConfigError::InvalidWeight {
                    criterion: id,
                    reason: format!("expected [a, b, c] or \"elicited\", got `{k}`"),
                })
            }
        };
        if direction == Direction::Cost && scale.lower_bound() <= 0.0 {
            return Err(ConfigError::CostNeedsPositiveScale(id));
        }
        criteria.push(CriterionSpec {
            id,
            direction,
            weight,
        });
    }
    check_unique("criterion", criteria.iter().map(|c| &c.id))?;

    let categories = if raw.categories.is_empty() {
        None
    } else {
        let cats: Vec<Category> = raw
            .categories
            .iter()
            .map(|c| Category {
                id: c.id.trim().to_string(),
                members: c.members.iter().map(|m| m.trim().to_string()).collect(),
                note: c.note.clone(),
            })
            .collect();
        check_unique("category", cats.iter().map(|c| &c.id))?;
        for cat in &cats {
            if let Some(member) = cat.members.iter().find(|m| !alternatives.contains(m)) {
                return Err(ConfigError::UnknownCategoryMember {
                    category: cat.id.clone(),
                    member: member.clone(),
                });
            }
        }
        Some(CategoryMap::new(cats)?)
    };

    let ideal_strategy = match &raw.ideal_strategy {
        None => IdealStrategy::PaperFixed,
        Some(s) => s.parse().map_err(|_| ConfigError::InvalidStrategy {
            field: "ideal_strategy",
            value: s.clone(),
        })?,
    };
    let normalization = match &raw.normalization {
        None => Normalization::Relative,
        Some(s) => s.parse().map_err(|_| ConfigError::InvalidStrategy {
            field: "normalization",
            value: s.clone(),
        })?,
    };

    Ok(StudyConfig {
        name: raw.name.unwrap_or_else(|| "study".to_string()),
        scale,
        criteria,
        alternatives,
        categories,
        ideal_strategy,
        normalization,
    })
}

/// `(expert, alternative, criterion)` identifying one rating.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RatingKey {
    pub expert: String,
    pub alternative: String,
    pub criterion: String,
}

impl fmt::Display for RatingKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.expert, self.alternative, self.criterion)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SurveyError {
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error("line {line}: {source}")]
    UnknownTerm {
        line: u64,
        #[source]
        source: ScaleError,
    },
    #[error("line {line}: unknown alternative `{id}`")]
    UnknownAlternative { line: u64, id: String },
    #[error("line {line}: unknown criterion `{id}`")]
    UnknownCriterion { line: u64, id: String },
    #[error("line {line}: weight rating from `{expert}` who gave no alternative ratings")]
    UnknownExpert { line: u64, expert: String },
    #[error("line {line}: criterion `{criterion}` has a fixed weight; weight ratings are not accepted for it")]
    WeightNotElicited { line: u64, criterion: String },
    #[error("line {line}: duplicate rating {key} (first given on line {first})")]
    DuplicateRating { line: u64, first: u64, key: RatingKey },
    #[error("line {line}: duplicate weight rating ({expert}, {criterion}) (first given on line {first})")]
    DuplicateWeightRating {
        line: u64,
        first: u64,
        expert: String,
        criterion: String,
    },
    #[error("no ratings found")]
    NoRatings,
    #[error("incomplete ratings, {} missing: {}", missing.len(), join_keys(missing))]
    Incomplete { missing: Vec<RatingKey> },
    #[error("incomplete weight ratings, {} missing: {}", missing.len(), missing.iter().map(|(e, c)| format!("({e}, {c})")).collect::<Vec<_>>().join(", "))]
    IncompleteWeights { missing: Vec<(String, String)> },
}

fn join_keys(keys: &[RatingKey]) -> String {
    keys.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(", ")
}

/// Every problem found in a ratings document, in discovery order.
#[derive(Debug, Clone, PartialEq, Error)]
pub struct SurveyErrors(pub Vec<SurveyError>);

impl SurveyErrors {
    pub fn errors(&self) -> &[SurveyError] {
        &self.0
    }
}

impl fmt::Display for SurveyErrors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let lines: Vec<String> = self.0.iter().map(|e| e.to_string()).collect();
        f.write_str(&lines.join("\n"))
    }
}

/// A complete, validated set of expert ratings for one study.
#[derive(Debug, Clone, PartialEq)]
pub struct SurveyDataset {
    config: StudyConfig,
    experts: Vec<String>,
    // normalized labels, indexed [expert][alternative][criterion]
    ratings: Vec<String>,
    weight_ratings: BTreeMap<(usize, usize), String>,
}

impl SurveyDataset {
    pub fn config(&self) -> &StudyConfig {
        &self.config
    }

    pub fn experts(&self) -> &[String] {
        &self.experts
    }

    pub fn expert_count(&self) -> usize {
        self.experts.len()
    }

    fn index(&self, expert: usize, alternative: usize, criterion: usize) -> usize {
        let m = self.config.alternatives.len();
        let n = self.config.criteria.len();
        (expert * m + alternative) * n + criterion
    }

    /// Label given by `expert` for `(alternative, criterion)`, all by position.
    pub fn rating(&self, expert: usize, alternative: usize, criterion: usize) -> &str {
        &self.ratings[self.index(expert, alternative, criterion)]
    }

    pub fn set_rating(
        &mut self,
        expert: usize,
        alternative: usize,
        criterion: usize,
        label: &str,
    ) -> Result<(), ScaleError> {
        self.config.scale.term_to_tfn(label)?;
        let idx = self.index(expert, alternative, criterion);
        self.ratings[idx] = normalize_label(label);
        Ok(())
    }

    /// Weight label given by `expert` for `criterion`, if the criterion is elicited.
    pub fn weight_rating(&self, expert: usize, criterion: usize) -> Option<&str> {
        self.weight_ratings
            .get(&(expert, criterion))
            .map(String::as_str)
    }

    pub fn has_weight_ratings(&self) -> bool {
        !self.weight_ratings.is_empty()
    }

    /// Build a dataset directly from in-memory labels, indexed
    /// `[expert][alternative][criterion]`.
    pub fn from_labels(
        config: StudyConfig,
        experts: Vec<String>,
        labels: Vec<Vec<Vec<String>>>,
        weight_labels: BTreeMap<(usize, usize), String>,
    ) -> Result<Self, SurveyErrors> {
        let mut text = String::new();
        text.push_str(&RATINGS_HEADER.join(","));
        text.push('\n');
        let mut rows = Vec::new();
        for (e, per_alt) in labels.iter().enumerate() {
            for (i, per_crit) in per_alt.iter().enumerate() {
                for (j, label) in per_crit.iter().enumerate() {
                    rows.push([
                        experts.get(e).cloned().unwrap_or_default(),
                        config.alternatives.get(i).cloned().unwrap_or_default(),
                        config.criteria.get(j).map(|c| c.id.clone()).unwrap_or_default(),
                        label.clone(),
                    ]);
                }
            }
        }
        let mut w = csv_writer();
        for r in &rows {
            w.write_record(r).expect("in-memory write");
        }
        text.push_str(&String::from_utf8(w.into_inner().expect("flush")).expect("utf8"));
        if !weight_labels.is_empty() {
            let mut w = csv_writer();
            w.write_record(WEIGHTS_HEADER).expect("in-memory write");
            for ((e, j), label) in &weight_labels {
                w.write_record([
                    experts.get(*e).cloned().unwrap_or_default(),
                    config.criteria.get(*j).map(|c| c.id.clone()).unwrap_or_default(),
                    label.clone(),
                ])
                .expect("in-memory write");
            }
            text.push('\n');
            text.push_str(&String::from_utf8(w.into_inner().expect("flush")).expect("utf8"));
        }
        parse_survey(&text, &config)
    }
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .has_headers(false)
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new())
}

fn is_header(record: &csv::StringRecord, header: &[&str]) -> bool {
    record.len() == header.len()
        && record
            .iter()
            .zip(header)
            .all(|(f, h)| f.trim().eq_ignore_ascii_case(h))
}

enum Section {
    Start,
    Ratings,
    Weights,
}

/// Parse a ratings document against a validated study configuration.
///
/// All problems are collected; the error lists every one of them.
// (alternative, criterion) -> (label, line)
type CellsByExpert = HashMap<(usize, usize), (String, u64)>;

pub fn parse_survey(text: &str, config: &StudyConfig) -> Result<SurveyDataset, SurveyErrors> {
    let mut errors = Vec::new();
    let alt_index: HashMap<&str, usize> = config
        .alternatives
        .iter()
        .enumerate()
        .map(|(i, a)| (a.as_str(), i))
        .collect();
    let crit_index: HashMap<&str, usize> = config
        .criteria
        .iter()
        .enumerate()
        .map(|(j, c)| (c.id.as_str(), j))
        .collect();

    let mut given: BTreeMap<String, CellsByExpert> = BTreeMap::new();
    let mut weight_rows: Vec<(String, usize, String, u64)> = Vec::new();
    let mut weight_seen: HashMap<(String, usize), u64> = HashMap::new();

    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut section = Section::Start;

    for result in reader.records() {
        let record = match result {
            Ok(r) => r,
            Err(e) => {
                let line = e.position().map_or(0, |p| p.line());
                errors.push(SurveyError::Parse {
                    line,
                    message: e.to_string(),
                });
                continue;
            }
        };
        let line = record.position().map_or(0, |p| p.line());
        if is_header(&record, &RATINGS_HEADER) {
            section = Section::Ratings;
            continue;
        }
        if is_header(&record, &WEIGHTS_HEADER) {
            section = Section::Weights;
            continue;
        }
        match section {
            Section::Start => {
                errors.push(SurveyError::Parse {
                    line,
                    message: format!("expected header `{}`", RATINGS_HEADER.join(",")),
                });
                // Treat the rest as ratings so every later problem is still reported.
                section = Section::Ratings;
            }
            Section::Ratings => {
                if record.len() != 4 {
                    errors.push(SurveyError::Parse {
                        line,
                        message: format!("expected 4 fields, found {}", record.len()),
                    });
                    continue;
                }
                let (expert, alt, crit, term) = (&record[0], &record[1], &record[2], &record[3]);
                if expert.is_empty() {
                    errors.push(SurveyError::Parse {
                        line,
                        message: "empty expert id".into(),
                    });
                    continue;
                }
                let i = alt_index.get(alt).copied();
                let j = crit_index.get(crit).copied();
                if i.is_none() {
                    errors.push(SurveyError::UnknownAlternative {
                        line,
                        id: alt.to_string(),
                    });
                }
                if j.is_none() {
                    errors.push(SurveyError::UnknownCriterion {
                        line,
                        id: crit.to_string(),
                    });
                }
                if let Err(source) = config.scale.term_to_tfn(term) {
                    errors.push(SurveyError::UnknownTerm { line, source });
                }
                let (Some(i), Some(j)) = (i, j) else { continue };
                let entry = given.entry(expert.to_string()).or_default();
                if let Some((_, first)) = entry.get(&(i, j)) {
                    errors.push(SurveyError::DuplicateRating {
                        line,
                        first: *first,
                        key: RatingKey {
                            expert: expert.to_string(),
                            alternative: alt.to_string(),
                            criterion: crit.to_string(),
                        },
                    });
                    continue;
                }
                entry.insert((i, j), (normalize_label(term), line));
            }
            Section::Weights => {
                if record.len() != 3 {
                    errors.push(SurveyError::Parse {
                        line,
                        message: format!("expected 3 fields, found {}", record.len()),
                    });
                    continue;
                }
                let (expert, crit, term) = (&record[0], &record[1], &record[2]);
                let Some(j) = crit_index.get(crit).copied() else {
                    errors.push(SurveyError::UnknownCriterion {
                        line,
                        id: crit.to_string(),
                    });
                    continue;
                };
                if config.criteria[j].weight != WeightSpec::Elicited {
                    errors.push(SurveyError::WeightNotElicited {
                        line,
                        criterion: crit.to_string(),
                    });
                    continue;
                }
                if let Err(source) = config.scale.term_to_tfn(term) {
                    errors.push(SurveyError::UnknownTerm { line, source });
                    continue;
                }
                if let Some(first) = weight_seen.get(&(expert.to_string(), j)) {
                    errors.push(SurveyError::DuplicateWeightRating {
                        line,
                        first: *first,
                        expert: expert.to_string(),
                        criterion: crit.to_string(),
                    });
                    continue;
                }
                weight_seen.insert((expert.to_string(), j), line);
                weight_rows.push((expert.to_string(), j, normalize_label(term), line));
            }
        }
    }

    if given.is_empty() && errors.is_empty() {
        errors.push(SurveyError::NoRatings);
    }

    let experts: Vec<String> = given.keys().cloned().collect();
    let expert_index: HashMap<&str, usize> = experts
        .iter()
        .enumerate()
        .map(|(k, e)| (e.as_str(), k))
        .collect();

    let mut missing = Vec::new();
    for (expert, entries) in &given {
        for (i, alt) in config.alternatives.iter().enumerate() {
            for (j, crit) in config.criteria.iter().enumerate() {
                if !entries.contains_key(&(i, j)) {
                    missing.push(RatingKey {
                        expert: expert.clone(),
                        alternative: alt.clone(),
                        criterion: crit.id.clone(),
                    });
                }
            }
        }
    }
    if !missing.is_empty() {
        errors.push(SurveyError::Incomplete { missing });
    }

    let mut weight_ratings = BTreeMap::new();
    for (expert, j, label, line) in weight_rows {
        match expert_index.get(expert.as_str()) {
            Some(&k) => {
                weight_ratings.insert((k, j), label);
            }
            None => errors.push(SurveyError::UnknownExpert { line, expert }),
        }
    }
    let mut missing_weights = Vec::new();
    for (k, expert) in experts.iter().enumerate() {
        for (j, crit) in config.criteria.iter().enumerate() {
            if crit.weight == WeightSpec::Elicited && !weight_ratings.contains_key(&(k, j)) {
                missing_weights.push((expert.clone(), crit.id.clone()));
            }
        }
    }
    if !missing_weights.is_empty() {
        errors.push(SurveyError::IncompleteWeights {
            missing: missing_weights,
        });
    }

    if !errors.is_empty() {
        return Err(SurveyErrors(errors));
    }

    let m = config.alternatives.len();
    let n = config.criteria.len();
    let mut ratings = vec![String::new(); experts.len() * m * n];
    for (k, expert) in experts.iter().enumerate() {
        for (&(i, j), (label, _)) in &given[expert] {
            ratings[(k * m + i) * n + j] = label.clone();
        }
    }
    Ok(SurveyDataset {
        config: config.clone(),
        experts,
        ratings,
        weight_ratings,
    })
}

/// Canonical CSV form: LF line endings, rows sorted by expert id, then by
/// alternative and criterion in config order, normalized lowercase terms.
pub fn serialize_dataset(dataset: &SurveyDataset) -> String {
    let config = &dataset.config;
    let mut w = csv_writer();
    w.write_record(RATINGS_HEADER).expect("in-memory write");
    for (k, expert) in dataset.experts.iter().enumerate() {
        for (i, alt) in config.alternatives.iter().enumerate() {
            for (j, crit) in config.criteria.iter().enumerate() {
                w.write_record([expert, alt, &crit.id, dataset.rating(k, i, j)])
                    .expect("in-memory write");
            }
        }
    }
    let mut out = String::from_utf8(w.into_inner().expect("flush")).expect("utf8");
    if !dataset.weight_ratings.is_empty() {
        let mut w = csv_writer();
        w.write_record(WEIGHTS_HEADER).expect("in-memory write");
        for ((k, j), label) in &dataset.weight_ratings {
            w.write_record([&dataset.experts[*k], &config.criteria[*j].id, label])
                .expect("in-memory write");
        }
        out.push('\n');
        out.push_str(&String::from_utf8(w.into_inner().expect("flush")).expect("utf8"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
alternatives = ["alpha", "beta"]

[[criteria]]
id = "impact"
"#;

    const SIX_ROWS: &str = "expert,alternative,criterion,term
e1,alpha,impact,weak
e1,beta,impact,high
e2,alpha,impact,medium
e2,beta,impact,very high
e3,alpha,impact,high
e3,beta,impact,Very Low
";

    fn minimal() -> StudyConfig {
        parse_config(MINIMAL).unwrap()
    }

    #[test]
    fn minimal_config_gets_defaults() {
        let c = minimal();
        assert_eq!(c.alternatives, vec!["alpha", "beta"]);
        assert_eq!(c.criteria, vec![CriterionSpec::benefit("impact")]);
        assert_eq!(c.scale, LinguisticScale::default_scale());
        assert_eq!(c.ideal_strategy, IdealStrategy::PaperFixed);
        assert_eq!(c.normalization, Normalization::Relative);
        assert!(c.categories.is_none());
    }

    #[test]
    fn config_errors() {
        let dup = r#"alternatives = ["a", "a"]
[[criteria]]
id = "x"
"#;
        assert_eq!(
            parse_config(dup),
            Err(ConfigError::DuplicateId {
                kind: "alternative",
                id: "a".into()
            })
        );

        let bad_strategy = format!("ideal_strategy = \"best\"\n{MINIMAL}");
        assert!(matches!(
            parse_config(&bad_strategy),
            Err(ConfigError::InvalidStrategy {
                field: "ideal_strategy",
                ..
            })
        ));

        let unknown_member = format!("{MINIMAL}\n[[categories]]\nid = \"g\"\nmembers = [\"gamma\"]\n");
        assert_eq!(
            parse_config(&unknown_member),
            Err(ConfigError::UnknownCategoryMember {
                category: "g".into(),
                member: "gamma".into()
            })
        );

        let one_alt = "alternatives = [\"a\"]\n[[criteria]]\nid = \"x\"\n";
        assert_eq!(parse_config(one_alt), Err(ConfigError::TooFewAlternatives(1)));

        assert_eq!(parse_config("alternatives = [\"a\", \"b\"]\n"), Err(ConfigError::NoCriteria));

        let negative_weight = "alternatives = [\"a\", \"b\"]\n[[criteria]]\nid = \"x\"\nweight = [-1, 0, 1]\n";
        assert!(matches!(
            parse_config(negative_weight),
            Err(ConfigError::InvalidWeight { .. })
        ));
    }

    #[test]
    fn parse_error_reports_position() {
        let text = "alternatives = [\"a\", \"b\"]\n[[criteria]]\nid = \n";
        match parse_config(text) {
            Err(ConfigError::Parse { line, column, .. }) => {
                assert_eq!(line, 3);
                assert!(column >= 1);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn cost_criterion_needs_positive_scale() {
        let text = r#"alternatives = ["a", "b"]
[scale]
terms = [{ label = "none", value = [0, 0, 1] }, { label = "some", value = [0, 1, 2] }]
[[criteria]]
id = "x"
direction = "cost"
"#;
        assert_eq!(
            parse_config(text),
            Err(ConfigError::CostNeedsPositiveScale("x".into()))
        );
    }

    #[test]
    fn six_row_fixture_parses() {
        let d = parse_survey(SIX_ROWS, &minimal()).unwrap();
        assert_eq!(d.expert_count(), 3);
        assert_eq!(d.rating(2, 1, 0), "very low");
        assert!(!d.has_weight_ratings());
    }

    #[test]
    fn missing_row_is_reported() {
        let text: String = SIX_ROWS
            .lines()
            .filter(|l| *l != "e2,beta,impact,very high")
            .map(|l| format!("{l}\n"))
            .collect();
        let err = parse_survey(&text, &minimal()).unwrap_err();
        assert_eq!(
            err.errors(),
            &[SurveyError::Incomplete {
                missing: vec![RatingKey {
                    expert: "e2".into(),
                    alternative: "beta".into(),
                    criterion: "impact".into()
                }]
            }]
        );
    }

    #[test]
    fn unknown_term_and_ids_are_all_reported() {
        let text = format!("{SIX_ROWS}e4,alpha,impact,extreme\ne4,gamma,impact,high\ne4,beta,reach,high\n");
        let err = parse_survey(&text, &minimal()).unwrap_err();
        let errs = err.errors();
        assert!(matches!(errs[0], SurveyError::UnknownTerm { line: 8, .. }));
        assert!(matches!(&errs[1], SurveyError::UnknownAlternative { id, .. } if id == "gamma"));
        assert!(matches!(&errs[2], SurveyError::UnknownCriterion { id, .. } if id == "reach"));
        // e4 only rated alpha
        assert!(matches!(&errs[3], SurveyError::Incomplete { missing } if missing.len() == 1));
    }

    #[test]
    fn duplicate_rating_is_rejected() {
        let text = format!("{SIX_ROWS}e1,alpha,impact,high\n");
        let err = parse_survey(&text, &minimal()).unwrap_err();
        assert!(matches!(
            err.errors()[0],
            SurveyError::DuplicateRating { line: 8, first: 2, .. }
        ));
    }

    #[test]
    fn missing_header_is_a_parse_error() {
        let err = parse_survey("e1,alpha,impact,weak\n", &minimal()).unwrap_err();
        assert!(matches!(err.errors()[0], SurveyError::Parse { line: 1, .. }));
    }

    #[test]
    fn serialize_is_canonical() {
        let d = parse_survey(SIX_ROWS, &minimal()).unwrap();
        let out = serialize_dataset(&d);
        assert_eq!(
            out,
            "expert,alternative,criterion,term
e1,alpha,impact,weak
e1,beta,impact,high
e2,alpha,impact,medium
e2,beta,impact,very high
e3,alpha,impact,high
e3,beta,impact,very low
"
        );
        assert_eq!(parse_survey(&out, &minimal()).unwrap(), d);
    }

    #[test]
    fn elicited_weights_section() {
        let config = parse_config(
            "alternatives = [\"alpha\", \"beta\"]\n[[criteria]]\nid = \"impact\"\nweight = \"elicited\"\n",
        )
        .unwrap();
        let text = "expert,alternative,criterion,term
e1,alpha,impact,weak
e1,beta,impact,high

expert,criterion,term
e1,impact,medium
";
        let d = parse_survey(text, &config).unwrap();
        assert_eq!(d.weight_rating(0, 0), Some("medium"));
        assert_eq!(serialize_dataset(&d), text);

        let no_weights = text.lines().take(3).map(|l| format!("{l}\n")).collect::<String>();
        let err = parse_survey(&no_weights, &config).unwrap_err();
        assert!(matches!(err.errors()[0], SurveyError::IncompleteWeights { .. }));

        let stranger = format!("{text}e9,impact,high\n");
        let err = parse_survey(&stranger, &config).unwrap_err();
        assert!(matches!(&err.errors()[0], SurveyError::UnknownExpert { expert, .. } if expert == "e9"));
    }

    #[test]
    fn weight_rows_for_fixed_criteria_are_rejected() {
        let text = format!("{SIX_ROWS}\nexpert,criterion,term\ne1,impact,high\n");
        let err = parse_survey(&text, &minimal()).unwrap_err();
        assert!(matches!(err.errors()[0], SurveyError::WeightNotElicited { .. }));
    }

    #[test]
    fn line_col_counts_from_one() {
        assert_eq!(line_col("ab\ncd", 0), (1, 1));
        assert_eq!(line_col("ab\ncd", 4), (2, 2));
    }
}
