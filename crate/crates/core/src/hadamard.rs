//! Hadamard structure `S = (U x {0}) ∪ (V x T)` and the assembly of octant
//! counts from a coloured walk count and a lower-dimensional walk count.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::counting::{
    count_coloured, run, CountError, CountTable, Integers, Mode, Table, TableData, WeightedStep,
};
use crate::stepset::{inverse_permutation, Step, StepSet, PERMUTATIONS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum HadamardKind {
    /// One coordinate in the first block, two in the second.
    OneTwo,
    /// Two coordinates in the first block, one in the second.
    TwoOne,
}

impl HadamardKind {
    pub fn first_block(self) -> usize {
        match self {
            HadamardKind::OneTwo => 1,
            HadamardKind::TwoOne => 2,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            HadamardKind::OneTwo => "(1,2)",
            HadamardKind::TwoOne => "(2,1)",
        }
    }
}

/// A decomposition of the permuted model: coordinate `a` of the permuted
/// steps is coordinate `perm[a]` of the original ones.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HadamardDecomposition {
    pub kind: HadamardKind,
    pub perm: [usize; 3],
    pub u: Vec<Vec<i8>>,
    pub v: Vec<Vec<i8>>,
    pub t: Vec<Vec<i8>>,
}

fn step_string(s: &[i8]) -> String {
    s.iter()
        .map(|&c| match c {
            -1 => '-',
            0 => '0',
            _ => '+',
        })
        .collect()
}

fn set_string(s: &[Vec<i8>]) -> String {
    if s.is_empty() {
        return "{}".into();
    }
    format!("{{{}}}", s.iter().map(|x| step_string(x)).collect::<Vec<_>>().join(","))
}

impl std::fmt::Display for HadamardDecomposition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} perm={:?} U={} V={} T={}",
            self.kind.label(),
            self.perm,
            set_string(&self.u),
            set_string(&self.v),
            set_string(&self.t)
        )
    }
}

impl HadamardDecomposition {
    /// The step set described by the decomposition, in original coordinates.
    pub fn reconstruct(&self) -> StepSet {
        let inv = inverse_permutation(self.perm);
        let mut steps = Vec::new();
        let d = self.kind.first_block();
        let zero = vec![0i8; 3 - d];
        let mut push = |a: &[i8], b: &[i8]| {
            let c: Vec<i8> = a.iter().chain(b).copied().collect();
            let s = Step::from_coords([c[0], c[1], c[2]]).expect("non-null");
            steps.push(s.permuted(inv));
        };
        for a in &self.u {
            push(a, &zero);
        }
        for a in &self.v {
            for b in &self.t {
                push(a, b);
            }
        }
        StepSet::from_steps(steps)
    }

    /// Whether `U`, `V`, `T` give a disjoint union equal to `s`.
    pub fn is_valid_for(&self, s: StepSet) -> bool {
        let d = self.kind.first_block();
        let n = self.u.len() + self.v.len() * self.t.len();
        !self.t.is_empty()
            && self.t.iter().all(|b| b.iter().any(|&c| c != 0))
            && self.u.iter().all(|a| a.iter().any(|&c| c != 0))
            && self.u.iter().chain(&self.v).all(|a| a.len() == d)
            && self.reconstruct() == s
            && n == s.len()
    }
}

/// All Hadamard decompositions over the six coordinate permutations and
/// both block splits, in that order; duplicates are removed.
pub fn detect_hadamard(s: StepSet) -> Vec<HadamardDecomposition> {
    let mut out: Vec<HadamardDecomposition> = Vec::new();
    for kind in [HadamardKind::OneTwo, HadamardKind::TwoOne] {
        let d = kind.first_block();
        for perm in PERMUTATIONS {
            let steps: Vec<[i8; 3]> = s.iter().map(|st| st.permuted(perm).coords()).collect();
            let mut u = Vec::new();
            let mut v: Vec<Vec<i8>> = Vec::new();
            let mut t: Vec<Vec<i8>> = Vec::new();
            let mut rest = 0;
            for c in &steps {
                let (a, b) = (c[..d].to_vec(), c[d..].to_vec());
                if b.iter().all(|&x| x == 0) {
                    u.push(a);
                } else {
                    rest += 1;
                    if !v.contains(&a) {
                        v.push(a);
                    }
                    if !t.contains(&b) {
                        t.push(b);
                    }
                }
            }
            if t.is_empty() || v.len() * t.len() != rest {
                continue;
            }
            u.sort();
            v.sort();
            t.sort();
            let dec = HadamardDecomposition { kind, perm, u, v, t };
            debug_assert!(dec.is_valid_for(s));
            let dup = out
                .iter()
                .any(|o| o.kind == dec.kind && o.u == dec.u && o.v == dec.v && o.t == dec.t && o.perm == dec.perm);
            if !dup {
                out.push(dec);
            }
        }
    }
    out
}

/// Walks of the second block in `N^delta`, counted by length.
fn second_block_table(t: &[Vec<i8>], n: usize) -> Table<BigInt> {
    let steps: Vec<WeightedStep<BigInt>> = t
        .iter()
        .map(|b| WeightedStep {
            delta: b.clone(),
            weight: BigInt::from(1),
        })
        .collect();
    run(&Integers, t[0].len(), &steps, None, n, true)
}

/// Octant counts `o(e; n) = sum_k c1(e1; n, k) c2(e2; k)` for `n <= n_max`,
/// returned in the original coordinates.
pub fn hadamard_assemble(dec: &HadamardDecomposition, n_max: usize) -> Result<CountTable, CountError> {
    let d = dec.kind.first_block();
    let c1 = count_coloured(&dec.u, &dec.v, d, n_max)?;
    let c2 = second_block_table(&dec.t, n_max);
    let mut steps = Vec::new();
    for a in &dec.u {
        let mut c = a.clone();
        c.resize(3, 0);
        steps.push(c);
    }
    // assemble slab by slab on the octant box of the original model
    let mut slabs = Vec::new();
    let mut series = vec![Vec::new(); 8];
    for n in 0..=n_max {
        let side = n + 1;
        let mut data = vec![BigInt::zero(); side * side * side];
        for (i, cell) in data.iter_mut().enumerate() {
            let e = [(i / (side * side)) as i64, (i / side % side) as i64, (i % side) as i64];
            // permuted coordinates
            let ep: Vec<i64> = dec.perm.iter().map(|&p| e[p]).collect();
            let mut acc = BigInt::zero();
            for k in 0..=n {
                let a = c1.get(&ep[..d], n, k);
                if a.is_zero() {
                    continue;
                }
                if let Some(b) = c2.get(k, &ep[d..]) {
                    acc += a * b;
                }
            }
            *cell = acc;
        }
        let slab = crate::counting::slab_from_octant_data(n, data);
        crate::counting::push_series(&slab, &mut series);
        slabs.push(slab);
    }
    Ok(CountTable {
        model: dec.reconstruct().to_string(),
        mode: Mode::Exact,
        data: TableData::Exact(Table {
            dim: 3,
            n_max,
            free_axis: None,
            slabs,
            full: true,
            series,
        }),
    })
}

/// The inner `T` sets (as quadrant step lists) of all `(1,2)` decompositions.
pub fn inner_quadrant_models(decs: &[HadamardDecomposition]) -> Vec<Vec<Vec<i8>>> {
    decs.iter()
        .filter(|d| d.kind == HadamardKind::OneTwo)
        .map(|d| d.t.clone())
        .collect()
}
