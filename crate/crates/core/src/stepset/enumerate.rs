use super::dimension::dim_le1_mask;
use super::projection::{project_unchecked, QuadrantModel};
use super::unused::has_unused;
use super::{dimension, StepSet, FULL_MASK};

/// Predicates applied during enumeration.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ModelFilter {
    pub no_unused: bool,
    /// Allowed dimensions; `None` accepts all.
    pub dimensions: Option<Vec<u8>>,
}

impl ModelFilter {
    pub fn none() -> ModelFilter {
        ModelFilter::default()
    }

    /// No unused step and dimension 2 or 3.
    pub fn interesting() -> ModelFilter {
        ModelFilter {
            no_unused: true,
            dimensions: Some(vec![2, 3]),
        }
    }

    pub fn with_dimension(d: u8) -> ModelFilter {
        ModelFilter {
            no_unused: true,
            dimensions: Some(vec![d]),
        }
    }

    pub fn accepts(&self, s: StepSet) -> bool {
        let mask = s.mask();
        if self.no_unused && has_unused(mask) {
            return false;
        }
        let Some(dims) = &self.dimensions else {
            return true;
        };
        let le1 = dim_le1_mask(mask);
        let wants_low = dims.iter().any(|&d| d <= 1);
        let wants_high = dims.iter().any(|&d| d >= 2);
        if le1 && !wants_low || !le1 && !wants_high {
            return false;
        }
        let all_low = dims.contains(&0) && dims.contains(&1);
        let all_high = dims.contains(&2) && dims.contains(&3);
        if le1 && all_low || !le1 && all_high {
            return true;
        }
        match dimension(s) {
            Ok(d) => dims.contains(&d.dimension),
            Err(_) => false,
        }
    }
}

/// Streams one representative (the canonical one) per permutation class of
/// cardinality at most `max_card`, in ascending code order.
pub fn enumerate_models(max_card: usize, filter: ModelFilter) -> impl Iterator<Item = StepSet> {
    (0..=FULL_MASK)
        .filter(move |m| m.count_ones() as usize <= max_card)
        .map(|m| StepSet::from_mask(m).expect("in range"))
        .filter(|s| s.is_canonical())
        .filter(move |s| filter.accepts(*s))
}

/// All multiplicity-free quadrant models with no unused step and dimension 2,
/// up to the `x <-> y` swap, with at most `max_card` steps.
pub fn enumerate_quadrant_models(max_card: usize) -> Vec<QuadrantModel> {
    let mut out: Vec<QuadrantModel> = (1u32..256)
        .filter(|m| m.count_ones() as usize <= max_card)
        .map(|m| {
            let steps: Vec<(i8, i8)> = (0..8)
                .filter(|b| m >> b & 1 == 1)
                .map(|b| {
                    let s = super::QuadrantStep::ALL[b];
                    (s.i, s.j)
                })
                .collect();
            QuadrantModel::from_steps(&steps)
        })
        .filter(|q| *q == q.canonical())
        .filter(|q| {
            let s = q.support_3d();
            !has_unused(s.mask()) && matches!(dimension(s), Ok(d) if d.dimension == 2)
        })
        .collect();
    out.sort();
    out
}

/// Quadrant models obtained by projecting every two-dimensional octant model
/// with at most `max_card` steps along its first redundant axis. Models are
/// identified by their step weights; the count of dropped null steps is
/// reset to zero.
pub fn projected_quadrant_models(max_card: usize) -> Vec<QuadrantModel> {
    let mut set = std::collections::BTreeSet::new();
    for s in enumerate_models(max_card, ModelFilter::with_dimension(2)) {
        let d = dimension(s).expect("no unused steps");
        let mut q = project_unchecked(s, d.redundant_axes[0]);
        q.dropped_null_steps = 0;
        set.insert(q);
    }
    set.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn single_steps() {
        let all: Vec<_> = enumerate_models(1, ModelFilter::none()).collect();
        // the empty set plus three classes of single steps per sign pattern
        let singles = all.iter().filter(|s| s.len() == 1).count();
        assert_eq!(all.iter().filter(|s| s.is_empty()).count(), 1);
        // classes of steps under permutation = multisets of 3 signs minus 000
        assert_eq!(singles, 9);
        let usable: Vec<_> = enumerate_models(1, ModelFilter { no_unused: true, dimensions: None })
            .filter(|s| s.len() == 1)
            .collect();
        assert!(usable.iter().all(|s| s.iter().all(|st| st.is_nonnegative())));
        assert_eq!(usable.len(), 3);
    }

    #[test]
    fn codes_are_distinct_fixpoints() {
        let codes: Vec<u32> = enumerate_models(3, ModelFilter::none()).map(|s| s.mask()).collect();
        let set: HashSet<u32> = codes.iter().copied().collect();
        assert_eq!(set.len(), codes.len());
        assert!(codes.windows(2).all(|w| w[0] < w[1]));
        for c in codes {
            let s = StepSet::from_mask(c).unwrap();
            assert_eq!(s.canonical_code(), c);
        }
    }

    #[test]
    fn burnside_agrees_with_direct_orbits_small() {
        // orbit count of sets of size <= 2 by Burnside, computed by hand:
        // size 1: 26 steps -> 9 classes (tested above)
        let n2 = enumerate_models(2, ModelFilter::none()).filter(|s| s.len() == 2).count();
        let mut fixed = [0u64; 3];
        for a in 0..26 {
            for b in a + 1..26 {
                let s = StepSet::from_mask(1 << a | 1 << b).unwrap();
                if s.permuted([0, 1, 2]) == s {
                    fixed[0] += 1;
                }
                if s.permuted([1, 0, 2]) == s {
                    fixed[1] += 1;
                }
                if s.permuted([1, 2, 0]) == s {
                    fixed[2] += 1;
                }
            }
        }
        let burnside = (fixed[0] + 3 * fixed[1] + 2 * fixed[2]) / 6;
        assert_eq!(n2 as u64, burnside);
    }

    #[test]
    fn multiplicity_free_quadrant_scope() {
        assert_eq!(enumerate_quadrant_models(8).len(), 79);
    }
}
