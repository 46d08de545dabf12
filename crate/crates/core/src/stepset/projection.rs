use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{dimension, Axis, StepSet};

/// A non-zero step of `{-1,0,1}^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuadrantStep {
    pub i: i8,
    pub j: i8,
}

impl QuadrantStep {
    pub const ALL: [QuadrantStep; 8] = [
        QuadrantStep { i: -1, j: -1 },
        QuadrantStep { i: -1, j: 0 },
        QuadrantStep { i: -1, j: 1 },
        QuadrantStep { i: 0, j: -1 },
        QuadrantStep { i: 0, j: 1 },
        QuadrantStep { i: 1, j: -1 },
        QuadrantStep { i: 1, j: 0 },
        QuadrantStep { i: 1, j: 1 },
    ];

    pub fn new(i: i8, j: i8) -> Option<QuadrantStep> {
        let ok = |c: i8| (-1..=1).contains(&c);
        (ok(i) && ok(j) && (i, j) != (0, 0)).then_some(QuadrantStep { i, j })
    }

    pub fn index(self) -> usize {
        let raw = ((self.i + 1) * 3 + (self.j + 1)) as usize;
        if raw < 4 {
            raw
        } else {
            raw - 1
        }
    }

    pub fn swapped(self) -> QuadrantStep {
        QuadrantStep {
            i: self.j,
            j: self.i,
        }
    }
}

impl fmt::Display for QuadrantStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = |v: i8| match v {
            -1 => '-',
            0 => '0',
            _ => '+',
        };
        write!(f, "{}{}", c(self.i), c(self.j))
    }
}

/// A quadrant model whose steps carry positive integer multiplicities.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuadrantModel {
    /// Multiplicity of each step of [`QuadrantStep::ALL`] (0 = absent).
    pub weights: [u32; 8],
    /// Number of steps that projected onto `(0,0)` and were dropped.
    pub dropped_null_steps: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProjectionError {
    #[error("axis {axis} is not redundant for model {model}")]
    NotRedundant { axis: Axis, model: String },
    #[error("model {0} has unused steps")]
    UnusedSteps(String),
    #[error("projection of {0} has no non-null step")]
    Empty(String),
    #[error("malformed quadrant model token {0:?}")]
    BadToken(String),
}

impl QuadrantModel {
    pub fn from_weighted(steps: &[(QuadrantStep, u32)]) -> QuadrantModel {
        let mut weights = [0u32; 8];
        for &(s, w) in steps {
            weights[s.index()] += w;
        }
        QuadrantModel {
            weights,
            dropped_null_steps: 0,
        }
    }

    /// Multiplicity-free model from a list of steps.
    pub fn from_steps(steps: &[(i8, i8)]) -> QuadrantModel {
        let ws: Vec<(QuadrantStep, u32)> = steps
            .iter()
            .map(|&(i, j)| (QuadrantStep::new(i, j).expect("invalid quadrant step"), 1))
            .collect();
        QuadrantModel::from_weighted(&ws)
    }

    pub fn weight(&self, s: QuadrantStep) -> u32 {
        self.weights[s.index()]
    }

    /// Steps with positive multiplicity, in index order.
    pub fn steps(&self) -> Vec<(QuadrantStep, u32)> {
        QuadrantStep::ALL
            .iter()
            .filter(|s| self.weight(**s) > 0)
            .map(|&s| (s, self.weight(s)))
            .collect()
    }

    pub fn total_weight(&self) -> u32 {
        self.weights.iter().sum()
    }

    pub fn is_multiplicity_free(&self) -> bool {
        self.weights.iter().all(|&w| w <= 1)
    }

    pub fn swapped(&self) -> QuadrantModel {
        let mut weights = [0u32; 8];
        for s in QuadrantStep::ALL {
            weights[s.swapped().index()] = self.weight(s);
        }
        QuadrantModel {
            weights,
            dropped_null_steps: self.dropped_null_steps,
        }
    }

    /// Representative of the model under the `x <-> y` swap.
    pub fn canonical(&self) -> QuadrantModel {
        let sw = self.swapped();
        if sw < *self {
            sw
        } else {
            self.clone()
        }
    }

    /// Embeds the support as a 3D step set with `z = 0`.
    pub fn support_3d(&self) -> StepSet {
        StepSet::from_triples(
            &self
                .steps()
                .iter()
                .map(|(s, _)| [s.i, s.j, 0])
                .collect::<Vec<_>>(),
        )
    }

    /// Parses `dd*w` tokens separated by `;` or `,`; `*w` defaults to 1.
    pub fn parse(text: &str) -> Result<QuadrantModel, ProjectionError> {
        let mut weights = [0u32; 8];
        for tok in text.split([';', ',']) {
            let tok = tok.trim();
            let bad = || ProjectionError::BadToken(tok.to_string());
            let (st, w) = match tok.split_once('*') {
                Some((a, b)) => (a, b.parse::<u32>().map_err(|_| bad())?),
                None => (tok, 1),
            };
            let c: Vec<i8> = st
                .chars()
                .map(|ch| match ch {
                    '-' => Some(-1),
                    '0' => Some(0),
                    '+' => Some(1),
                    _ => None,
                })
                .collect::<Option<_>>()
                .ok_or_else(bad)?;
            if c.len() != 2 || w == 0 {
                return Err(bad());
            }
            let s = QuadrantStep::new(c[0], c[1]).ok_or_else(bad)?;
            weights[s.index()] += w;
        }
        Ok(QuadrantModel {
            weights,
            dropped_null_steps: 0,
        })
    }
}

impl fmt::Display for QuadrantModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let toks: Vec<String> = self
            .steps()
            .iter()
            .map(|(s, w)| format!("{s}*{w}"))
            .collect();
        write!(f, "{}", toks.join(";"))
    }
}

/// Projects a 2D octant model onto the quadrant by deleting the coordinate of
/// `redundant_axis`, counting multiplicities; the result is canonical under
/// the `x <-> y` swap.
pub fn project_to_quadrant(
    s: StepSet,
    redundant_axis: Axis,
) -> Result<QuadrantModel, ProjectionError> {
    let d = dimension(s).map_err(|_| ProjectionError::UnusedSteps(s.to_string()))?;
    if !d.redundant_axes.contains(&redundant_axis) {
        return Err(ProjectionError::NotRedundant {
            axis: redundant_axis,
            model: s.to_string(),
        });
    }
    Ok(project_unchecked(s, redundant_axis))
}

pub(crate) fn project_unchecked(s: StepSet, redundant_axis: Axis) -> QuadrantModel {
    let keep: Vec<usize> = (0..3).filter(|&a| a != redundant_axis.index()).collect();
    let mut weights = [0u32; 8];
    let mut dropped = 0u32;
    for st in s.iter() {
        let c = st.coords();
        match QuadrantStep::new(c[keep[0]], c[keep[1]]) {
            Some(q) => weights[q.index()] += 1,
            None => dropped += 1,
        }
    }
    QuadrantModel {
        weights,
        dropped_null_steps: dropped,
    }
    .canonical()
}
