//! Triangular fuzzy numbers and the handful of operations fuzzy TOPSIS needs:
//! component-wise product, division by a crisp scalar, the vertex distance and
//! min/mean/max aggregation across several sources.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TfnError {
    #[error("vertices out of order: ({a}, {b}, {c}) must satisfy a <= b <= c")]
    OrderViolation { a: f64, b: f64, c: f64 },
    #[error("non-finite vertex in ({a}, {b}, {c})")]
    NonFinite { a: f64, b: f64, c: f64 },
    #[error("negative operand in component-wise product: {0}")]
    NegativeOperand(Tfn),
    #[error("divisor must be positive, got {0}")]
    NonPositiveDivisor(f64),
    #[error("cannot aggregate an empty set of fuzzy numbers")]
    EmptyInput,
}

/// A triangular fuzzy number `(a, b, c)` with `a <= b <= c`.
///
/// Membership is 1 at the modal vertex `b` and falls linearly to 0 at `a` and
/// `c`. Crisp values are represented as `a == b == c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tfn {
    a: f64,
    b: f64,
    c: f64,
}

impl Tfn {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self, TfnError> {
        if !(a.is_finite() && b.is_finite() && c.is_finite()) {
            return Err(TfnError::NonFinite { a, b, c });
        }
        if a > b || b > c {
            return Err(TfnError::OrderViolation { a, b, c });
        }
        Ok(Tfn { a, b, c })
    }

    /// Crisp number `(x, x, x)`.
    pub fn crisp(x: f64) -> Result<Self, TfnError> {
        Tfn::new(x, x, x)
    }

    pub const ONE: Tfn = Tfn { a: 1.0, b: 1.0, c: 1.0 };
    pub const ZERO: Tfn = Tfn { a: 0.0, b: 0.0, c: 0.0 };

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.a, self.b, self.c]
    }

    pub fn is_crisp(&self) -> bool {
        self.a == self.b && self.b == self.c
    }

    pub fn is_nonnegative(&self) -> bool {
        self.a >= 0.0
    }

    /// Component-wise product `(a1*a2, b1*b2, c1*c2)`.
    ///
    /// Only defined for nonnegative operands; with mixed signs the
    /// component-wise form is no longer ordered.
    pub fn multiply(&self, other: &Tfn) -> Result<Tfn, TfnError> {
        for x in [self, other] {
            if !x.is_nonnegative() {
                return Err(TfnError::NegativeOperand(*x));
            }
        }
        Tfn::new(self.a * other.a, self.b * other.b, self.c * other.c)
    }

    /// `(a/d, b/d, c/d)` for a positive crisp divisor.
    pub fn scale_div(&self, divisor: f64) -> Result<Tfn, TfnError> {
        if !divisor.is_finite() || divisor <= 0.0 {
            return Err(TfnError::NonPositiveDivisor(divisor));
        }
        Tfn::new(self.a / divisor, self.b / divisor, self.c / divisor)
    }

    /// Vertex distance `sqrt(((a1-a2)^2 + (b1-b2)^2 + (c1-c2)^2) / 3)`.
    pub fn distance(&self, other: &Tfn) -> f64 {
        let da = self.a - other.a;
        let db = self.b - other.b;
        let dc = self.c - other.c;
        ((da * da + db * db + dc * dc) / 3.0).sqrt()
    }
}

impl fmt::Display for Tfn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match f.precision() {
            Some(p) => write!(f, "({:.p$}, {:.p$}, {:.p$})", self.a, self.b, self.c),
            None => write!(f, "({}, {}, {})", self.a, self.b, self.c),
        }
    }
}

impl TryFrom<[f64; 3]> for Tfn {
    type Error = TfnError;

    fn try_from([a, b, c]: [f64; 3]) -> Result<Self, Self::Error> {
        Tfn::new(a, b, c)
    }
}

impl<'de> Deserialize<'de> for Tfn {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = <[f64; 3]>::deserialize(deserializer)?;
        Tfn::try_from(raw).map_err(serde::de::Error::custom)
    }
}

/// Free-function form of [`Tfn::distance`].
pub fn vertex_distance(x: &Tfn, y: &Tfn) -> f64 {
    x.distance(y)
}

/// Combine several fuzzy ratings of the same quantity into one:
/// minimum of the lower vertices, mean of the modal vertices, maximum of the
/// upper vertices.
///
/// The result does not depend on the order of `ratings`, down to the last
/// bit: each vertex column is sorted before it is reduced.
pub fn aggregate(ratings: &[Tfn]) -> Result<Tfn, TfnError> {
    if ratings.is_empty() {
        return Err(TfnError::EmptyInput);
    }
    let lower = ratings.iter().map(|t| t.a).min_by(f64::total_cmp);
    let upper = ratings.iter().map(|t| t.c).max_by(f64::total_cmp);
    let mut modal: Vec<f64> = ratings.iter().map(|t| t.b).collect();
    modal.sort_by(f64::total_cmp);
    // Averaging offsets from the smallest value keeps identical inputs exact.
    let base = modal[0];
    let top = modal[modal.len() - 1];
    let spread = compensated_sum(modal.iter().map(|b| b - base)) / ratings.len() as f64;
    let mean = (base + spread).clamp(base, top);
    // min/max of an empty iterator is ruled out above.
    Tfn::new(lower.unwrap_or(0.0), mean, upper.unwrap_or(0.0))
}

/// Neumaier's compensated summation.
pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0_f64;
    let mut compensation = 0.0_f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            compensation += (sum - t) + v;
        } else {
            compensation += (v - t) + sum;
        }
        sum = t;
    }
    sum + compensation
}
