//! Fixtures shared by the benchmarks.

use num_bigint::BigInt;
use octant_core::{count_quadrant, parse_model, Mode, QuadrantModel, StepSet};

/// Kreweras-like model with a group of order 24.
pub const FINITE_3D: &str = "-00;0-0;00-;+++";
/// A six-step model whose group exceeds the default bound.
pub const INFINITE_3D: &str = "-00;0-0;00-;00+;+++;-++";
/// Extraction example with a group of order 8.
pub const EXTRACTION_3D: &str = "-0-;-++;0-+;+0-;+++";
pub const WEIGHTED_2D: &str = "--;-0*2;-+;+0;+-";

pub fn model(text: &str) -> StepSet {
    parse_model(text).expect("fixture parses")
}

/// Excursion counts of the weighted quadrant fixture.
pub fn excursions(n: usize) -> Vec<BigInt> {
    let m = QuadrantModel::parse(WEIGHTED_2D).expect("fixture parses");
    count_quadrant(&m, n, Mode::Exact)
        .expect("exact counting")
        .specialization(&[false, false])
}
