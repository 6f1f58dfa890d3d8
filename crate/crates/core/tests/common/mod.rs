#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use fuzzy_topsis::survey::{CriterionSpec, Direction, StudyConfig, WeightSpec};
use fuzzy_topsis::topsis::{IdealStrategy, Normalization};
use fuzzy_topsis::{LinguisticScale, SurveyDataset, Tfn};
use rand::Rng;

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

pub fn read_fixture(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).expect("fixture readable")
}

/// Published per-factor results: (name, d+, d-, cc, rank).
pub const FACTORS: [(&str, f64, f64, f64, usize); 30] = [
    ("Financial capability", 0.403, 0.659, 0.620, 1),
    ("Ability to raise production capital", 0.408, 0.648, 0.613, 2),
    ("Change in interest rates", 0.542, 0.614, 0.531, 8),
    ("Change the exchange rate", 0.557, 0.592, 0.515, 11),
    ("Capital market volume", 0.590, 0.559, 0.486, 21),
    ("Technological advantage", 0.561, 0.587, 0.511, 12),
    ("Technological maturity", 0.572, 0.575, 0.501, 16),
    ("Reliability of technology", 0.572, 0.575, 0.501, 16),
    ("Alternative technology", 0.408, 0.648, 0.613, 2),
    ("Professional work experience", 0.539, 0.619, 0.534, 6),
    ("How difficult or easy it is to work with technology", 0.572, 0.575, 0.501, 17),
    ("how standard the equipment and production process are", 0.562, 0.585, 0.510, 13),
    ("Employee decisions", 0.583, 0.564, 0.491, 19),
    ("Raw material supply capacity", 0.570, 0.577, 0.503, 16),
    ("Raw material prices", 0.572, 0.575, 0.501, 16),
    ("Product life cycle", 0.543, 0.611, 0.529, 9),
    ("Capacity and time of admission", 0.551, 0.600, 0.521, 10),
    ("Product competitiveness", 0.537, 0.623, 0.537, 5),
    ("Potential rival effect", 0.542, 0.614, 0.531, 8),
    ("Marketing capability", 0.535, 0.626, 0.539, 4),
    ("Network readiness", 0.566, 0.581, 0.506, 14),
    ("New technology acceptance network", 0.573, 0.573, 0.500, 18),
    ("Quality and experience of managers", 0.541, 0.616, 0.532, 7),
    ("The ease of obtaining information", 0.568, 0.579, 0.505, 15),
    ("The rate of use of collective wisdom", 0.573, 0.575, 0.501, 17),
    ("Project management mechanism", 0.568, 0.579, 0.504, 15),
    ("The desirability of legal environment policies", 0.568, 0.579, 0.504, 15),
    ("Macroeconomic environment desirability", 0.533, 0.631, 0.542, 3),
    ("Favorable social environment", 0.588, 0.560, 0.487, 20),
    ("the environment condition", 0.629, 0.534, 0.459, 22),
];

/// Published per-category results: (name, b, d+, d-, cc, rank).
pub const CATEGORIES: [(&str, f64, f64, f64, f64, usize); 6] = [
    ("financial risk", 6.066, 0.546, 0.607, 0.526, 1),
    ("Technology risk", 5.773, 0.553, 0.597, 0.519, 3),
    ("Production risk", 5.066, 0.571, 0.575, 0.502, 5),
    ("Market risk", 5.85, 0.551, 0.600, 0.521, 2),
    ("Management risk", 5.433, 0.562, 0.586, 0.510, 4),
    ("Environment risk", 4.95, 0.575, 0.572, 0.499, 6),
];

/// A random complete study on the default scale, benefit criteria with
/// weight (1, 1, 1).
pub fn random_study(
    rng: &mut impl Rng,
    max_m: usize,
    max_n: usize,
    max_k: usize,
    normalization: Normalization,
    ideal_strategy: IdealStrategy,
) -> SurveyDataset {
    let m = rng.random_range(2..=max_m);
    let n = rng.random_range(1..=max_n);
    let k = rng.random_range(1..=max_k);
    let scale = LinguisticScale::default_scale();
    let labels: Vec<String> = scale.labels().map(str::to_string).collect();
    let config = StudyConfig {
        name: "random".into(),
        scale,
        criteria: (0..n)
            .map(|j| CriterionSpec {
                id: format!("c{j}"),
                direction: Direction::Benefit,
                weight: WeightSpec::Fixed(Tfn::ONE),
            })
            .collect(),
        alternatives: (0..m).map(|i| format!("a{i}")).collect(),
        categories: None,
        ideal_strategy,
        normalization,
    };
    let experts: Vec<String> = (0..k).map(|e| format!("e{e}")).collect();
    let cells = (0..k)
        .map(|_| {
            (0..m)
                .map(|_| {
                    (0..n)
                        .map(|_| labels[rng.random_range(0..labels.len())].clone())
                        .collect()
                })
                .collect()
        })
        .collect();
    SurveyDataset::from_labels(config, experts, cells, BTreeMap::new()).expect("valid study")
}

/// Crisp TOPSIS with linear max/min normalization, ideals 1 and 0 and
/// separations summed per criterion. Returns closeness per alternative.
///
/// `values[i][j]` must be positive; `cost[j]` marks cost criteria.
pub fn crisp_topsis_oracle(values: &[Vec<f64>], cost: &[bool], weights: &[f64]) -> Vec<f64> {
    let m = values.len();
    let n = weights.len();
    let mut closeness = Vec::with_capacity(m);
    for i in 0..m {
        let mut s_plus = 0.0;
        let mut s_minus = 0.0;
        for j in 0..n {
            let column: Vec<f64> = values.iter().map(|row| row[j]).collect();
            let r = if cost[j] {
                let lo = column.iter().cloned().fold(f64::INFINITY, f64::min);
                lo / values[i][j]
            } else {
                let hi = column.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                values[i][j] / hi
            };
            let v = r * weights[j];
            s_plus += (1.0 - v).abs();
            s_minus += v.abs();
        }
        closeness.push(s_minus / (s_plus + s_minus));
    }
    closeness
}
