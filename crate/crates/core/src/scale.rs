//! Linguistic term scales: ordered labels bound to triangular fuzzy numbers.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::tfn::{Tfn, TfnError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScaleError {
    #[error("unknown term `{label}` (known terms: {})", known.join(", "))]
    UnknownTerm { label: String, known: Vec<String> },
    #[error("duplicate term `{0}`")]
    DuplicateTerm(String),
    #[error("terms `{lower}` and `{upper}` are not strictly increasing")]
    NonMonotone { lower: String, upper: String },
    #[error("a scale needs at least 2 terms, got {0}")]
    TooFewTerms(usize),
    #[error("empty term label")]
    EmptyLabel,
    #[error("term `{label}`: {source}")]
    InvalidValue {
        label: String,
        #[source]
        source: TfnError,
    },
}

/// Trim, collapse internal whitespace and lowercase.
pub fn normalize_label(label: &str) -> String {
    label
        .split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .to_lowercase()
}

/// One row of a scale as written in a config file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawTerm {
    pub label: String,
    pub value: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawScale {
    #[serde(default = "default_scale_name")]
    pub name: String,
    pub terms: Vec<RawTerm>,
}

fn default_scale_name() -> String {
    "custom".to_string()
}

/// An ordered, validated linguistic scale.
///
/// Terms are ordered from worst to best, every vertex is weakly increasing
/// from one term to the next and at least one strictly.
#[derive(Debug, Clone, PartialEq)]
pub struct LinguisticScale {
    name: String,
    terms: Vec<(String, Tfn)>,
    lower_bound: f64,
    upper_bound: f64,
}

impl LinguisticScale {
    /// The five-term scale from very low `(1, 1, 3)` to very high `(7, 9, 9)`.
    pub fn default_scale() -> Self {
        let raw = RawScale {
            name: "default".to_string(),
            terms: [
                ("very low", [1.0, 1.0, 3.0]),
                ("weak", [1.0, 3.0, 5.0]),
                ("medium", [3.0, 5.0, 7.0]),
                ("high", [5.0, 7.0, 9.0]),
                ("very high", [7.0, 9.0, 9.0]),
            ]
            .into_iter()
            .map(|(label, value)| RawTerm {
                label: label.to_string(),
                value,
            })
            .collect(),
        };
        Self::validate(&raw).expect("built-in scale is valid")
    }

    pub fn validate(raw: &RawScale) -> Result<Self, ScaleError> {
        if raw.terms.len() < 2 {
            return Err(ScaleError::TooFewTerms(raw.terms.len()));
        }
        let mut terms: Vec<(String, Tfn)> = Vec::with_capacity(raw.terms.len());
        for term in &raw.terms {
            let label = normalize_label(&term.label);
            if label.is_empty() {
                return Err(ScaleError::EmptyLabel);
            }
            if terms.iter().any(|(l, _)| *l == label) {
                return Err(ScaleError::DuplicateTerm(label));
            }
            let value = Tfn::try_from(term.value).map_err(|source| ScaleError::InvalidValue {
                label: label.clone(),
                source,
            })?;
            terms.push((label, value));
        }
        for pair in terms.windows(2) {
            let (lo, hi) = (pair[0].1.to_array(), pair[1].1.to_array());
            let weak = lo.iter().zip(&hi).all(|(x, y)| x <= y);
            let strict = lo.iter().zip(&hi).any(|(x, y)| x < y);
            if !(weak && strict) {
                return Err(ScaleError::NonMonotone {
                    lower: pair[0].0.clone(),
                    upper: pair[1].0.clone(),
                });
            }
        }
        let lower_bound = terms
            .iter()
            .map(|(_, t)| t.a())
            .fold(f64::INFINITY, f64::min);
        let upper_bound = terms
            .iter()
            .map(|(_, t)| t.c())
            .fold(f64::NEG_INFINITY, f64::max);
        Ok(LinguisticScale {
            name: raw.name.trim().to_string(),
            terms,
            lower_bound,
            upper_bound,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn terms(&self) -> &[(String, Tfn)] {
        &self.terms
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.terms.iter().map(|(l, _)| l.as_str())
    }

    pub fn lower_bound(&self) -> f64 {
        self.lower_bound
    }

    pub fn upper_bound(&self) -> f64 {
        self.upper_bound
    }

    /// Position of a term in scale order, after label normalization.
    pub fn position(&self, label: &str) -> Option<usize> {
        let key = normalize_label(label);
        self.terms.iter().position(|(l, _)| *l == key)
    }

    pub fn term_to_tfn(&self, label: &str) -> Result<Tfn, ScaleError> {
        self.position(label)
            .map(|i| self.terms[i].1)
            .ok_or_else(|| ScaleError::UnknownTerm {
                label: label.to_string(),
                known: self.labels().map(str::to_string).collect(),
            })
    }

    pub fn to_raw(&self) -> RawScale {
        RawScale {
            name: self.name.clone(),
            terms: self
                .terms
                .iter()
                .map(|(label, value)| RawTerm {
                    label: label.clone(),
                    value: value.to_array(),
                })
                .collect(),
        }
    }
}

impl Default for LinguisticScale {
    fn default() -> Self {
        Self::default_scale()
    }
}
