use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::unused::{has_unused, masks};
use super::{Axis, StepSet, PERMUTATIONS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DimensionError {
    #[error("model {model} still contains unused steps {unused}")]
    UnusedSteps { model: String, unused: String },
}

/// A witness `k >= alpha*i + beta*j` for every step, after applying `perm`
/// (coordinate `a` of the permuted step is coordinate `perm[a]` of the original).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlphaBeta {
    pub perm: [usize; 3],
    pub alpha: (i64, i64),
    pub beta: (i64, i64),
}

impl AlphaBeta {
    pub fn alpha(&self) -> BigRational {
        BigRational::new(self.alpha.0.into(), self.alpha.1.into())
    }

    pub fn beta(&self) -> BigRational {
        BigRational::new(self.beta.0.into(), self.beta.1.into())
    }

    pub fn holds(&self, s: StepSet) -> bool {
        let (a, b) = (self.alpha(), self.beta());
        s.iter().all(|st| {
            let c = st.permuted(self.perm).coords();
            let lhs = BigRational::from_integer(c[2].into());
            let rhs = &a * BigRational::from_integer(c[0].into())
                + &b * BigRational::from_integer(c[1].into());
            lhs >= rhs
        })
    }
}

/// The pairs reported as explaining every 2D model, tried first.
pub const OBSERVED_ALPHA_BETA: [((i64, i64), (i64, i64)); 5] = [
    ((0, 1), (0, 1)),
    ((1, 1), (0, 1)),
    ((1, 1), (1, 1)),
    ((1, 2), (1, 2)),
    ((1, 1), (2, 1)),
];

/// Result of the dimension analysis of a model.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionAnalysis {
    pub dimension: u8,
    /// Axes whose inequality is implied by the two others.
    pub redundant_axes: Vec<Axis>,
    /// For each non-redundant axis, integer multiplicities (one per step, in
    /// bit order) satisfying the two other inequalities and violating its own.
    pub certificates: Vec<(Axis, Vec<i64>)>,
    pub alpha_beta: Option<AlphaBeta>,
}

impl DimensionAnalysis {
    pub fn certificate(&self, axis: Axis) -> Option<&[i64]> {
        self.certificates
            .iter()
            .find(|(a, _)| *a == axis)
            .map(|(_, c)| c.as_slice())
    }
}

/// Evaluates the linear form of `axis` at the multiplicity tuple `a`.
pub fn linear_form(s: StepSet, axis: Axis, a: &[i64]) -> i64 {
    s.iter()
        .zip(a)
        .map(|(st, &m)| st.coord(axis) as i64 * m)
        .sum()
}

type Row = (Vec<BigInt>, BigInt);

fn normalize(row: Row) -> Row {
    let (coeffs, rhs) = row;
    let mut g = rhs.abs();
    for c in &coeffs {
        g = g.gcd(c);
    }
    if g.is_zero() || g.is_one() {
        return (coeffs, rhs);
    }
    (coeffs.into_iter().map(|c| c / &g).collect(), rhs / g)
}

/// Finds a rational point of `{a >= 0, rows}` where each row `(c, b)` reads
/// `c . a >= b`, by Fourier-Motzkin elimination and back-substitution.
fn fm_feasible(nvars: usize, rows: Vec<Row>) -> Option<Vec<BigRational>> {
    let mut system: Vec<Row> = rows;
    for v in 0..nvars {
        let mut e = vec![BigInt::zero(); nvars];
        e[v] = BigInt::one();
        system.push((e, BigInt::zero()));
    }
    let mut stages: Vec<Vec<Row>> = Vec::with_capacity(nvars);
    for v in (0..nvars).rev() {
        stages.push(system.clone());
        let (mut lower, mut upper, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for r in system {
            match r.0[v].sign() {
                num_bigint::Sign::Plus => lower.push(r),
                num_bigint::Sign::Minus => upper.push(r),
                num_bigint::Sign::NoSign => rest.push(r),
            }
        }
        for l in &lower {
            for u in &upper {
                let (cl, cu) = (l.0[v].clone(), -u.0[v].clone());
                let coeffs: Vec<BigInt> =
                    (0..nvars).map(|t| &l.0[t] * &cu + &u.0[t] * &cl).collect();
                let rhs = &l.1 * &cu + &u.1 * &cl;
                rest.push(normalize((coeffs, rhs)));
            }
        }
        rest.sort();
        rest.dedup();
        system = rest;
    }
    // All variables eliminated: rows read 0 >= b.
    if system.iter().any(|r| r.1.is_positive()) {
        return None;
    }
    stages.reverse();
    let mut values = vec![BigRational::zero(); nvars];
    for (v, stage) in stages.iter().enumerate() {
        let mut lo: Option<BigRational> = None;
        let mut hi: Option<BigRational> = None;
        for (coeffs, rhs) in stage {
            let c = &coeffs[v];
            if c.is_zero() {
                continue;
            }
            let mut acc = BigRational::from_integer(rhs.clone());
            for (t, val) in values.iter().enumerate().take(v) {
                acc -= BigRational::from_integer(coeffs[t].clone()) * val;
            }
            let bound = acc / BigRational::from_integer(c.clone());
            if c.is_positive() {
                if lo.as_ref().is_none_or(|x| bound > *x) {
                    lo = Some(bound);
                }
            } else if hi.as_ref().is_none_or(|x| bound < *x) {
                hi = Some(bound);
            }
        }
        values[v] = match (lo, hi) {
            (Some(l), _) => l,
            (None, Some(h)) => h,
            (None, None) => BigRational::zero(),
        };
    }
    Some(values)
}

/// Searches for a multiplicity tuple with every retained form `>= 0` and the
/// target form `<= -1`. `None` means the target inequality is implied.
fn non_redundancy_witness(s: StepSet, retained: &[Axis], target: Axis) -> Option<Vec<i64>> {
    let steps = s.steps();
    let n = steps.len();
    let mut rows: Vec<Row> = retained
        .iter()
        .map(|&ax| {
            (
                steps.iter().map(|st| BigInt::from(st.coord(ax))).collect(),
                BigInt::zero(),
            )
        })
        .collect();
    rows.push((
        steps.iter().map(|st| BigInt::from(-st.coord(target))).collect(),
        BigInt::one(),
    ));
    let point = fm_feasible(n, rows)?;
    let mut den = BigInt::one();
    for p in &point {
        den = den.lcm(p.denom());
    }
    let ints: Vec<i64> = point
        .iter()
        .map(|p| {
            let v = p.numer() * (&den / p.denom());
            i64::try_from(v).expect("certificate entries fit in i64")
        })
        .collect();
    Some(ints)
}

/// True iff the non-negativity of the `retained` forms implies that of `target`
/// over all non-negative multiplicity tuples.
pub fn implied_by(s: StepSet, retained: &[Axis], target: Axis) -> bool {
    non_redundancy_witness(s, retained, target).is_none()
}

/// Lemma-style combinatorial test: with `axis` enforced, the two other
/// octant conditions can be ignored.
pub fn lemma1d_check(s: StepSet, axis: Axis) -> bool {
    lemma1d_mask(s.mask(), axis.index())
}

pub(crate) fn lemma1d_mask(mask: u32, a: usize) -> bool {
    let m = masks();
    (0..3).filter(|&o| o != a).all(|o| mask & m.neg[o] == 0 || mask & !m.ge[a][o] == 0)
}

/// Dimension at most 1 by the combinatorial criterion on some axis.
pub(crate) fn dim_le1_mask(mask: u32) -> bool {
    (0..3).any(|a| lemma1d_mask(mask, a))
}

fn small_rationals() -> Vec<(i64, i64)> {
    let mut v: Vec<(i64, i64)> = Vec::new();
    for d in 1..=4i64 {
        for n in 0..=4i64 {
            if n.gcd(&d) == 1 || n == 0 && d == 1 {
                v.push((n, d));
            }
        }
    }
    v.sort_by(|a, b| (a.0 * b.1).cmp(&(b.0 * a.1)));
    v.dedup_by(|a, b| a.0 * b.1 == b.0 * a.1);
    v
}

fn search_alpha_beta(s: StepSet, redundant: Axis) -> Option<AlphaBeta> {
    let perms: Vec<[usize; 3]> = PERMUTATIONS
        .iter()
        .copied()
        .filter(|p| p[2] == redundant.index())
        .collect();
    let mut candidates: Vec<((i64, i64), (i64, i64))> = Vec::new();
    for &(a, b) in &OBSERVED_ALPHA_BETA {
        candidates.push((a, b));
        candidates.push((b, a));
    }
    let rats = small_rationals();
    for &a in &rats {
        for &b in &rats {
            candidates.push((a, b));
        }
    }
    for (alpha, beta) in candidates {
        for &perm in &perms {
            let ab = AlphaBeta { perm, alpha, beta };
            if ab.holds(s) {
                return Some(ab);
            }
        }
    }
    None
}

/// Computes the dimension of a model: the least number of octant
/// inequalities whose enforcement implies all three.
pub fn dimension(s: StepSet) -> Result<DimensionAnalysis, DimensionError> {
    if has_unused(s.mask()) {
        return Err(DimensionError::UnusedSteps {
            model: s.to_string(),
            unused: super::unused_steps(s).to_string(),
        });
    }
    let others = |t: Axis| -> Vec<Axis> { Axis::ALL.into_iter().filter(|&a| a != t).collect() };

    let mut redundant_axes = Vec::new();
    let mut certificates = Vec::new();
    for t in Axis::ALL {
        match non_redundancy_witness(s, &others(t), t) {
            None => redundant_axes.push(t),
            Some(c) => certificates.push((t, c)),
        }
    }

    let implies_all = |retained: &[Axis]| {
        Axis::ALL
            .into_iter()
            .filter(|t| !retained.contains(t))
            .all(|t| implied_by(s, retained, t))
    };
    let dimension = if implies_all(&[]) {
        0
    } else if Axis::ALL.into_iter().any(|a| implies_all(&[a])) {
        1
    } else if !redundant_axes.is_empty() {
        2
    } else {
        3
    };

    let alpha_beta = if dimension == 2 {
        search_alpha_beta(s, redundant_axes[0])
    } else {
        None
    };
    Ok(DimensionAnalysis {
        dimension,
        redundant_axes,
        certificates,
        alpha_beta,
    })
}
