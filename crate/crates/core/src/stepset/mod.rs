//! Step sets in `{-1,0,1}^3 \ {0}`.
//!
//! The 26 non-zero steps are numbered lexicographically on `(i, j, k)` with
//! `-1 < 0 < 1`, skipping the null step. Bit `b` of a [`StepSet`] mask is set
//! iff step number `b` belongs to the set. This layout is frozen: canonical
//! codes, stores and exported files all depend on it.

mod dimension;
mod enumerate;
mod parse;
mod projection;
mod unused;

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

pub use dimension::{
    dimension, implied_by, lemma1d_check, linear_form, AlphaBeta, DimensionAnalysis, DimensionError,
    OBSERVED_ALPHA_BETA,
};
pub use enumerate::{
    enumerate_models, enumerate_quadrant_models, projected_quadrant_models, ModelFilter,
};
pub use parse::{parse_model, ParseError};
pub use projection::{project_to_quadrant, ProjectionError, QuadrantModel, QuadrantStep};
pub use unused::{reachability_unused, unused_steps};

pub(crate) use dimension::dim_le1_mask;
pub(crate) use unused::has_unused;

/// Number of non-zero small steps in three dimensions.
pub const NUM_STEPS: usize = 26;
/// Mask with all 26 steps.
pub const FULL_MASK: u32 = (1 << NUM_STEPS) - 1;

/// A coordinate axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }

    pub fn from_index(i: usize) -> Axis {
        Axis::ALL[i]
    }

    pub fn name(self) -> char {
        ['x', 'y', 'z'][self.index()]
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// A non-zero step of `{-1,0,1}^3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Step {
    pub i: i8,
    pub j: i8,
    pub k: i8,
}

impl Step {
    /// Builds a step, returning `None` for the null step or out-of-range coordinates.
    pub fn new(i: i8, j: i8, k: i8) -> Option<Step> {
        let ok = |c: i8| (-1..=1).contains(&c);
        if !(ok(i) && ok(j) && ok(k)) || (i, j, k) == (0, 0, 0) {
            return None;
        }
        Some(Step { i, j, k })
    }

    pub fn coords(self) -> [i8; 3] {
        [self.i, self.j, self.k]
    }

    pub fn from_coords(c: [i8; 3]) -> Option<Step> {
        Step::new(c[0], c[1], c[2])
    }

    pub fn coord(self, axis: Axis) -> i8 {
        self.coords()[axis.index()]
    }

    /// Bit index in the frozen layout.
    pub fn index(self) -> usize {
        let raw = ((self.i + 1) * 9 + (self.j + 1) * 3 + (self.k + 1)) as usize;
        if raw < 13 {
            raw
        } else {
            raw - 1
        }
    }

    pub fn from_index(b: usize) -> Step {
        assert!(b < NUM_STEPS, "step index out of range");
        let raw = if b < 13 { b } else { b + 1 } as i8;
        Step {
            i: raw / 9 - 1,
            j: (raw / 3) % 3 - 1,
            k: raw % 3 - 1,
        }
    }

    pub fn bit(self) -> u32 {
        1 << self.index()
    }

    /// Applies a coordinate permutation: coordinate `a` of the result is
    /// coordinate `perm[a]` of `self`.
    pub fn permuted(self, perm: [usize; 3]) -> Step {
        let c = self.coords();
        Step {
            i: c[perm[0]],
            j: c[perm[1]],
            k: c[perm[2]],
        }
    }

    pub fn is_nonnegative(self) -> bool {
        self.i >= 0 && self.j >= 0 && self.k >= 0
    }
}

fn sign_char(c: i8) -> char {
    match c {
        -1 => '-',
        0 => '0',
        _ => '+',
    }
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}{}", sign_char(self.i), sign_char(self.j), sign_char(self.k))
    }
}

/// The six permutations of three coordinates, identity first.
pub const PERMUTATIONS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

/// Inverse of a coordinate permutation.
pub fn inverse_permutation(p: [usize; 3]) -> [usize; 3] {
    let mut inv = [0; 3];
    for (a, &b) in p.iter().enumerate() {
        inv[b] = a;
    }
    inv
}

/// A set of steps, stored as a 26-bit mask.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct StepSet {
    mask: u32,
}

impl StepSet {
    pub const EMPTY: StepSet = StepSet { mask: 0 };

    pub fn from_mask(mask: u32) -> Option<StepSet> {
        (mask <= FULL_MASK).then_some(StepSet { mask })
    }

    pub fn from_steps<I: IntoIterator<Item = Step>>(steps: I) -> StepSet {
        StepSet {
            mask: steps.into_iter().fold(0, |m, s| m | s.bit()),
        }
    }

    /// Convenience constructor from coordinate triples; panics on the null step.
    pub fn from_triples(triples: &[[i8; 3]]) -> StepSet {
        StepSet::from_steps(
            triples
                .iter()
                .map(|&c| Step::from_coords(c).expect("invalid step")),
        )
    }

    pub fn mask(self) -> u32 {
        self.mask
    }

    pub fn len(self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.mask == 0
    }

    pub fn contains(self, s: Step) -> bool {
        self.mask & s.bit() != 0
    }

    pub fn insert(&mut self, s: Step) {
        self.mask |= s.bit();
    }

    pub fn remove(&mut self, s: Step) {
        self.mask &= !s.bit();
    }

    pub fn union(self, other: StepSet) -> StepSet {
        StepSet {
            mask: self.mask | other.mask,
        }
    }

    pub fn difference(self, other: StepSet) -> StepSet {
        StepSet {
            mask: self.mask & !other.mask,
        }
    }

    pub fn is_subset(self, other: StepSet) -> bool {
        self.mask & !other.mask == 0
    }

    /// Steps in increasing bit order.
    pub fn iter(self) -> impl Iterator<Item = Step> {
        let mut m = self.mask;
        std::iter::from_fn(move || {
            if m == 0 {
                return None;
            }
            let b = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(Step::from_index(b))
        })
    }

    pub fn steps(self) -> Vec<Step> {
        self.iter().collect()
    }

    pub fn permuted(self, perm: [usize; 3]) -> StepSet {
        StepSet::from_steps(self.iter().map(|s| s.permuted(perm)))
    }

    /// Minimum mask over the six coordinate permutations.
    pub fn canonical_code(self) -> u32 {
        let t = perm_tables();
        let bytes = [
            (self.mask & 0xff) as usize,
            (self.mask >> 8 & 0xff) as usize,
            (self.mask >> 16 & 0xff) as usize,
            (self.mask >> 24) as usize,
        ];
        (0..PERMUTATIONS.len())
            .map(|p| {
                t[p][0][bytes[0]] | t[p][1][bytes[1]] | t[p][2][bytes[2]] | t[p][3][bytes[3]]
            })
            .min()
            .unwrap_or(0)
    }

    pub fn canonical(self) -> StepSet {
        StepSet {
            mask: self.canonical_code(),
        }
    }

    pub fn is_canonical(self) -> bool {
        self.canonical_code() == self.mask
    }

    /// Renders the mask as a 7-hex-digit code, e.g. `0x0000421`.
    pub fn code_string(self) -> String {
        format!("0x{:07x}", self.mask)
    }
}

type PermTables = [[[u32; 256]; 4]; 6];

/// Byte-chunked images of masks under each permutation.
fn perm_tables() -> &'static PermTables {
    static TABLES: OnceLock<Box<PermTables>> = OnceLock::new();
    TABLES.get_or_init(|| {
        let mut t = Box::new([[[0u32; 256]; 4]; 6]);
        for (p, &perm) in PERMUTATIONS.iter().enumerate() {
            for chunk in 0..4 {
                for byte in 0..256u32 {
                    let mask = (byte << (8 * chunk)) & FULL_MASK;
                    t[p][chunk][byte as usize] = StepSet { mask }.permuted(perm).mask;
                }
            }
        }
        t
    })
}

/// Canonical code of a model up to coordinate permutations.
pub fn canonical_code(s: StepSet) -> u32 {
    s.canonical_code()
}

impl fmt::Display for StepSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for s in self.iter() {
            if !first {
                write!(f, ";")?;
            }
            first = false;
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl Serialize for StepSet {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for StepSet {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        parse_model(&s).map_err(serde::de::Error::custom)
    }
}
