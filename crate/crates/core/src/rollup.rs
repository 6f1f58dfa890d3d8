//! Roll-up of item-level fuzzy ratings into category-level ratings.
//!
//! A category's rating is the min/mean/max aggregate of its members' ratings,
//! the same combination rule used for experts, applied across items.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::tfn::{aggregate, TfnError};
use crate::topsis::{FuzzyDecisionMatrix, Stage, TopsisError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RollupError {
    #[error("category `{0}` has no members")]
    EmptyCategory(String),
    #[error("alternative `{member}` belongs to both `{first}` and `{second}`")]
    OverlappingCategories {
        member: String,
        first: String,
        second: String,
    },
    #[error("category `{category}` lists `{member}`, which is not in the matrix")]
    UnknownMember { category: String, member: String },
    #[error("roll-up needs a single-criterion matrix, got {0} criteria")]
    MultiCriterionUnsupported(usize),
    #[error("roll-up needs a raw matrix, got a {0} one")]
    WrongStage(Stage),
    #[error("no categories defined")]
    NoCategories,
    #[error(transparent)]
    Tfn(#[from] TfnError),
    #[error(transparent)]
    Matrix(#[from] TopsisError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Category {
    pub id: String,
    pub members: Vec<String>,
    /// Free-text remark carried through to roll-up reports.
    pub note: Option<String>,
}

/// Ordered, disjoint, nonempty categories.
#[derive(Debug, Clone, PartialEq)]
pub struct CategoryMap {
    categories: Vec<Category>,
}

impl CategoryMap {
    pub fn new(categories: Vec<Category>) -> Result<Self, RollupError> {
        if categories.is_empty() {
            return Err(RollupError::NoCategories);
        }
        let mut owner: BTreeMap<&str, &str> = BTreeMap::new();
        for cat in &categories {
            if cat.members.is_empty() {
                return Err(RollupError::EmptyCategory(cat.id.clone()));
            }
            for member in &cat.members {
                if let Some(first) = owner.insert(member, &cat.id) {
                    return Err(RollupError::OverlappingCategories {
                        member: member.clone(),
                        first: first.to_string(),
                        second: cat.id.clone(),
                    });
                }
            }
        }
        Ok(CategoryMap { categories })
    }

    pub fn categories(&self) -> &[Category] {
        &self.categories
    }

    pub fn len(&self) -> usize {
        self.categories.len()
    }

    pub fn is_empty(&self) -> bool {
        self.categories.is_empty()
    }
}

/// Collapse a raw single-criterion matrix into one row per category, in
/// category order.
pub fn rollup(
    matrix: &FuzzyDecisionMatrix,
    map: &CategoryMap,
) -> Result<FuzzyDecisionMatrix, RollupError> {
    if matrix.stage() != Stage::Raw {
        return Err(RollupError::WrongStage(matrix.stage()));
    }
    if matrix.criteria().len() != 1 {
        return Err(RollupError::MultiCriterionUnsupported(
            matrix.criteria().len(),
        ));
    }
    let mut ids = Vec::with_capacity(map.len());
    let mut rows = Vec::with_capacity(map.len());
    for cat in map.categories() {
        if cat.members.is_empty() {
            return Err(RollupError::EmptyCategory(cat.id.clone()));
        }
        let members = cat
            .members
            .iter()
            .map(|m| {
                matrix
                    .position(m)
                    .map(|i| matrix.cell(i, 0))
                    .ok_or_else(|| RollupError::UnknownMember {
                        category: cat.id.clone(),
                        member: m.clone(),
                    })
            })
            .collect::<Result<Vec<_>, _>>()?;
        ids.push(cat.id.clone());
        rows.push(vec![aggregate(&members)?]);
    }
    Ok(FuzzyDecisionMatrix::new(
        ids,
        matrix.criteria().to_vec(),
        rows,
    )?)
}
