//! Pre-aggregated decision matrix files.
//!
//! ```text
//! # comment
//! criterion,importance,benefit        <- optional; starts a criterion block
//! alternative,a,b,c
//! Financial capability,3,7.133,9
//! ```
//!
//! The `criterion` line takes an id, an optional direction (`benefit` or
//! `cost`) and an optional fixed weight `wa,wb,wc`. Without any `criterion`
//! line the file holds one benefit criterion named `importance` with weight
//! `(1, 1, 1)`. Every block must rate the same set of alternatives; row order
//! is taken from the first block.

use std::collections::HashMap;

use thiserror::Error;

use crate::survey::{CriterionSpec, Direction, WeightSpec};
use crate::tfn::{Tfn, TfnError};
use crate::topsis::{FuzzyDecisionMatrix, Stage, TopsisError};

pub const DEFAULT_CRITERION: &str = "importance";
const ROW_HEADER: [&str; 4] = ["alternative", "a", "b", "c"];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MatrixFileError {
    #[error("line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error("line {line}: {source}")]
    InvalidTfn {
        line: u64,
        #[source]
        source: TfnError,
    },
    #[error("line {line}: negative component; matrix cells must be nonnegative")]
    Negative { line: u64 },
    #[error("line {line}: duplicate alternative `{id}` in criterion `{criterion}`")]
    DuplicateAlternative {
        line: u64,
        id: String,
        criterion: String,
    },
    #[error("line {line}: duplicate criterion `{id}`")]
    DuplicateCriterion { line: u64, id: String },
    #[error("line {line}: alternative `{id}` is not in the first criterion block")]
    UnexpectedAlternative { line: u64, id: String },
    #[error("criterion `{criterion}` has no row for alternative `{id}`")]
    MissingAlternative { criterion: String, id: String },
    #[error("matrix file has no rows")]
    Empty,
    #[error(transparent)]
    Matrix(#[from] TopsisError),
}

struct Block {
    spec: CriterionSpec,
    rows: Vec<(String, Tfn, u64)>,
    has_header: bool,
}

fn parse_number(field: &str, line: u64) -> Result<f64, MatrixFileError> {
    field.parse::<f64>().map_err(|_| MatrixFileError::Parse {
        line,
        message: format!("`{field}` is not a number (use `.` as the decimal separator)"),
    })
}

fn parse_criterion_line(
    record: &csv::StringRecord,
    line: u64,
) -> Result<CriterionSpec, MatrixFileError> {
    let fields: Vec<&str> = record.iter().collect();
    if !(fields.len() == 2 || fields.len() == 3 || fields.len() == 6) {
        return Err(MatrixFileError::Parse {
            line,
            message: "expected `criterion,<id>[,<direction>[,wa,wb,wc]]`".into(),
        });
    }
    let id = fields[1].to_string();
    if id.is_empty() {
        return Err(MatrixFileError::Parse {
            line,
            message: "empty criterion id".into(),
        });
    }
    let direction = match fields.get(2) {
        Some(d) => d
            .parse::<Direction>()
            .map_err(|message| MatrixFileError::Parse { line, message })?,
        None => Direction::Benefit,
    };
    let weight = if fields.len() == 6 {
        let w = Tfn::new(
            parse_number(fields[3], line)?,
            parse_number(fields[4], line)?,
            parse_number(fields[5], line)?,
        )
        .map_err(|source| MatrixFileError::InvalidTfn { line, source })?;
        if !w.is_nonnegative() {
            return Err(MatrixFileError::Negative { line });
        }
        w
    } else {
        Tfn::ONE
    };
    Ok(CriterionSpec {
        id,
        direction,
        weight: WeightSpec::Fixed(weight),
    })
}

pub fn parse_matrix(text: &str) -> Result<FuzzyDecisionMatrix, MatrixFileError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut blocks: Vec<Block> = Vec::new();

    for result in reader.records() {
        let record = result.map_err(|e| MatrixFileError::Parse {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.get(0).is_some_and(|f| f.eq_ignore_ascii_case("criterion")) {
            let spec = parse_criterion_line(&record, line)?;
            if blocks.iter().any(|b| b.spec.id == spec.id) {
                return Err(MatrixFileError::DuplicateCriterion { line, id: spec.id });
            }
            blocks.push(Block {
                spec,
                rows: Vec::new(),
                has_header: false,
            });
            continue;
        }
        let is_header = record.len() == 4
            && record
                .iter()
                .zip(ROW_HEADER)
                .all(|(f, h)| f.eq_ignore_ascii_case(h));
        if is_header {
            match blocks.last_mut() {
                Some(b) if !b.has_header && b.rows.is_empty() => b.has_header = true,
                None => blocks.push(Block {
                    spec: CriterionSpec::benefit(DEFAULT_CRITERION),
                    rows: Vec::new(),
                    has_header: true,
                }),
                Some(_) => {
                    return Err(MatrixFileError::Parse {
                        line,
                        message: "repeated header; start a new block with a `criterion` line".into(),
                    })
                }
            }
            continue;
        }
        let Some(block) = blocks.last_mut().filter(|b| b.has_header) else {
            return Err(MatrixFileError::Parse {
                line,
                message: format!("expected header `{}`", ROW_HEADER.join(",")),
            });
        };
        if record.len() != 4 {
            return Err(MatrixFileError::Parse {
                line,
                message: format!("expected 4 fields, found {}", record.len()),
            });
        }
        let id = record[0].to_string();
        if id.is_empty() {
            return Err(MatrixFileError::Parse {
                line,
                message: "empty alternative id".into(),
            });
        }
        let t = Tfn::new(
            parse_number(&record[1], line)?,
            parse_number(&record[2], line)?,
            parse_number(&record[3], line)?,
        )
        .map_err(|source| MatrixFileError::InvalidTfn { line, source })?;
        if !t.is_nonnegative() {
            return Err(MatrixFileError::Negative { line });
        }
        if block.rows.iter().any(|(r, _, _)| *r == id) {
            return Err(MatrixFileError::DuplicateAlternative {
                line,
                id,
                criterion: block.spec.id.clone(),
            });
        }
        block.rows.push((id, t, line));
    }

    let Some(first) = blocks.first() else {
        return Err(MatrixFileError::Empty);
    };
    if first.rows.is_empty() {
        return Err(MatrixFileError::Empty);
    }
    let alternatives: Vec<String> = first.rows.iter().map(|(id, _, _)| id.clone()).collect();
    let index: HashMap<&str, usize> = alternatives
        .iter()
        .enumerate()
        .map(|(i, a)| (a.as_str(), i))
        .collect();
    let mut cells = vec![Vec::with_capacity(blocks.len()); alternatives.len()];
    for block in &blocks {
        let mut seen = vec![None; alternatives.len()];
        for (id, t, line) in &block.rows {
            match index.get(id.as_str()) {
                Some(&i) => seen[i] = Some(*t),
                None => {
                    return Err(MatrixFileError::UnexpectedAlternative {
                        line: *line,
                        id: id.clone(),
                    })
                }
            }
        }
        for (i, cell) in seen.into_iter().enumerate() {
            match cell {
                Some(t) => cells[i].push(t),
                None => {
                    return Err(MatrixFileError::MissingAlternative {
                        criterion: block.spec.id.clone(),
                        id: alternatives[i].clone(),
                    })
                }
            }
        }
    }
    let criteria = blocks.into_iter().map(|b| b.spec).collect();
    Ok(FuzzyDecisionMatrix::new(alternatives, criteria, cells)?)
}

/// Write a raw matrix in the file format above, one block per criterion.
pub fn serialize_matrix(matrix: &FuzzyDecisionMatrix) -> Result<String, MatrixFileError> {
    if matrix.stage() != Stage::Raw {
        return Err(MatrixFileError::Matrix(TopsisError::WrongStage {
            expected: Stage::Raw,
            found: matrix.stage(),
        }));
    }
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .flexible(true)
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    for (j, crit) in matrix.criteria().iter().enumerate() {
        let mut directive = vec![
            "criterion".to_string(),
            crit.id.clone(),
            crit.direction.to_string(),
        ];
        match crit.weight {
            WeightSpec::Fixed(wt) if wt != Tfn::ONE => {
                directive.extend(wt.to_array().iter().map(|x| x.to_string()))
            }
            WeightSpec::Fixed(_) => {}
            WeightSpec::Elicited => {
                return Err(MatrixFileError::Matrix(
                    TopsisError::ElicitedWeightUnavailable(crit.id.clone()),
                ))
            }
        }
        w.write_record(&directive).expect("in-memory write");
        w.write_record(ROW_HEADER).expect("in-memory write");
        for (i, alt) in matrix.alternatives().iter().enumerate() {
            let t = matrix.cell(i, j);
            w.write_record([
                alt.clone(),
                t.a().to_string(),
                t.b().to_string(),
                t.c().to_string(),
            ])
            .expect("in-memory write");
        }
    }
    Ok(String::from_utf8(w.into_inner().expect("flush")).expect("utf8"))
}

/// Parse, sort rows by alternative id and serialize again.
pub fn canonicalize_matrix(text: &str) -> Result<String, MatrixFileError> {
    serialize_matrix(&parse_matrix(text)?.sorted_by_alternative())
}
