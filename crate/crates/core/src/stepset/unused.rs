use std::collections::HashSet;
use std::sync::OnceLock;

use super::{Step, StepSet, NUM_STEPS};

/// Precomputed step masks used by the bitwise predicates.
pub(crate) struct Masks {
    /// `neg[a]`: steps with coordinate `a` equal to -1.
    pub neg: [u32; 3],
    /// `pos[a]`: steps with coordinate `a` equal to +1.
    pub pos: [u32; 3],
    /// Steps with no negative coordinate.
    pub nonneg: u32,
    /// `unit[a]`: the positive unit step along axis `a`.
    pub unit: [u32; 3],
    /// `unit_neg[a]`: the negative unit step along axis `a`.
    pub unit_neg: [u32; 3],
    /// `sum_le0[a]`: steps whose two coordinates other than `a` sum to at most 0.
    pub sum_le0: [u32; 3],
    /// `ge[a][b]`: steps with coordinate `b` at least coordinate `a`.
    pub ge: [[u32; 3]; 3],
}

pub(crate) fn masks() -> &'static Masks {
    static MASKS: OnceLock<Masks> = OnceLock::new();
    MASKS.get_or_init(|| {
        let mut m = Masks {
            neg: [0; 3],
            pos: [0; 3],
            nonneg: 0,
            unit: [0; 3],
            unit_neg: [0; 3],
            sum_le0: [0; 3],
            ge: [[0; 3]; 3],
        };
        for b in 0..NUM_STEPS {
            let s = Step::from_index(b);
            let c = s.coords();
            let bit = 1u32 << b;
            for a in 0..3 {
                if c[a] < 0 {
                    m.neg[a] |= bit;
                }
                if c[a] > 0 {
                    m.pos[a] |= bit;
                }
                let others: i8 = (0..3).filter(|&o| o != a).map(|o| c[o]).sum();
                if others <= 0 {
                    m.sum_le0[a] |= bit;
                }
                let is_unit = (0..3).all(|o| if o == a { c[o] != 0 } else { c[o] == 0 });
                if is_unit && c[a] > 0 {
                    m.unit[a] |= bit;
                }
                if is_unit && c[a] < 0 {
                    m.unit_neg[a] |= bit;
                }
                for bb in 0..3 {
                    if c[bb] >= c[a] {
                        m.ge[a][bb] |= bit;
                    }
                }
            }
            if s.is_nonnegative() {
                m.nonneg |= bit;
            }
        }
        m
    })
}

/// Steps flagged by one application of the unused-step rules
/// (cases A, B and C together with their coordinate permutations).
pub(crate) fn flagged_once(mask: u32) -> u32 {
    let m = masks();
    let mut flagged = 0u32;
    for a in 0..3 {
        // A: negative steps along `a` but no positive one.
        if mask & m.neg[a] != 0 && mask & m.pos[a] == 0 {
            flagged |= mask & m.neg[a];
        }
        // C: contains the unit step along `a`, the other two coordinates
        // sum to at most 0 on every step, and the set is not contained in
        // the two unit steps along `a`.
        let pair = m.unit[a] | m.unit_neg[a];
        if mask & m.unit[a] != 0 && mask & !m.sum_le0[a] == 0 && mask & !pair != 0 {
            let others: u32 = (0..3).filter(|&o| o != a).map(|o| m.neg[o]).fold(0, |x, y| x | y);
            flagged |= mask & others;
        }
    }
    // B: every step has a negative coordinate.
    if mask != 0 && mask & m.nonneg == 0 {
        flagged |= mask;
    }
    flagged
}

/// True iff the set contains at least one unused step.
pub(crate) fn has_unused(mask: u32) -> bool {
    flagged_once(mask) != 0
}

/// Returns every step of `s` that is never used by an octant walk, by
/// iterating the unused-step rules until no further step is flagged.
pub fn unused_steps(s: StepSet) -> StepSet {
    let mut current = s.mask();
    let mut removed = 0u32;
    loop {
        let f = flagged_once(current);
        if f == 0 {
            break;
        }
        removed |= f;
        current &= !f;
    }
    StepSet::from_mask(removed).expect("subset of a valid mask")
}

/// Brute-force oracle: the steps of `s` that occur in no octant walk of
/// length at most `max_len`.
pub fn reachability_unused(s: StepSet, max_len: usize) -> StepSet {
    if max_len == 0 {
        return s;
    }
    let steps = s.steps();
    let mut seen: HashSet<[i32; 3]> = HashSet::new();
    let mut frontier = vec![[0i32; 3]];
    seen.insert([0, 0, 0]);
    let mut used = StepSet::EMPTY;
    for depth in 0..max_len {
        let mut next = Vec::new();
        for p in &frontier {
            for &st in &steps {
                let q = [p[0] + st.i as i32, p[1] + st.j as i32, p[2] + st.k as i32];
                if q.iter().all(|&c| c >= 0) {
                    used.insert(st);
                    if depth + 1 < max_len && seen.insert(q) {
                        next.push(q);
                    }
                }
            }
        }
        frontier = next;
    }
    s.difference(used)
}
