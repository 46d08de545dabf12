//! Model counts by cardinality up to coordinate permutation.
//!
//! Two independent routes: a Burnside sweep over invariant step sets, and
//! inclusion-exclusion closed forms written in the bases `[i] = (1+u)^i`,
//! `[[j]] = (1+u^2)^j` and `<j> = (1+u^3)^j`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::stepset::{dim_le1_mask, has_unused, Step, NUM_STEPS};

/// Counts of models by cardinality; index = number of steps.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusPolynomial {
    pub coefficients: Vec<u64>,
}

impl CensusPolynomial {
    pub fn coeff(&self, d: usize) -> u64 {
        self.coefficients.get(d).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.coefficients.iter().sum()
    }

    pub fn total_up_to(&self, d: usize) -> u64 {
        self.coefficients.iter().take(d + 1).sum()
    }

    fn from_signed(p: &Poly) -> CensusPolynomial {
        let mut c: Vec<u64> = p
            .0
            .iter()
            .map(|&v| u64::try_from(v).expect("census coefficient is a non-negative integer"))
            .collect();
        while c.last() == Some(&0) {
            c.pop();
        }
        CensusPolynomial { coefficients: c }
    }
}

impl fmt::Display for CensusPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .coefficients
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(d, c)| match d {
                0 => format!("{c}"),
                1 => format!("{c}*u"),
                _ => format!("{c}*u^{d}"),
            })
            .collect();
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// Predicates accepted by [`burnside_census`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CensusPredicate {
    NoUnused,
    LowDimension,
    Interesting,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown census predicate {0:?} (expected no-unused, low-dimension or interesting)")]
pub struct UnknownPredicate(pub String);

impl FromStr for CensusPredicate {
    type Err = UnknownPredicate;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "no-unused" | "J" => Ok(CensusPredicate::NoUnused),
            "low-dimension" | "K" => Ok(CensusPredicate::LowDimension),
            "interesting" | "I" => Ok(CensusPredicate::Interesting),
            _ => Err(UnknownPredicate(s.to_string())),
        }
    }
}

impl CensusPredicate {
    #[inline]
    pub fn holds(self, mask: u32) -> bool {
        if has_unused(mask) {
            return false;
        }
        match self {
            CensusPredicate::NoUnused => true,
            CensusPredicate::LowDimension => dim_le1_mask(mask),
            CensusPredicate::Interesting => !dim_le1_mask(mask),
        }
    }
}

/// Orbits of steps under the cyclic group generated by a permutation.
fn step_orbits(perm: [usize; 3]) -> Vec<u32> {
    let mut seen = 0u32;
    let mut orbits = Vec::new();
    for b in 0..NUM_STEPS {
        if seen >> b & 1 == 1 {
            continue;
        }
        let mut orbit = 0u32;
        let mut s = Step::from_index(b);
        while orbit & s.bit() == 0 {
            orbit |= s.bit();
            s = s.permuted(perm);
        }
        seen |= orbit;
        orbits.push(orbit);
    }
    orbits
}

/// Counts `perm`-invariant step sets satisfying `pred`, by cardinality.
fn invariant_counts(perm: [usize; 3], pred: CensusPredicate) -> [u64; NUM_STEPS + 1] {
    let orbits = step_orbits(perm);
    let k = orbits.len();
    const CHUNK: u64 = 1 << 16;
    let total: u64 = 1 << k;
    let chunks = total.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = [0u64; NUM_STEPS + 1];
            let lo = c * CHUNK;
            let hi = (lo + CHUNK).min(total);
            for sel in lo..hi {
                let mask = if k == NUM_STEPS {
                    sel as u32
                } else {
                    let mut m = 0u32;
                    let mut r = sel;
                    while r != 0 {
                        m |= orbits[r.trailing_zeros() as usize];
                        r &= r - 1;
                    }
                    m
                };
                if pred.holds(mask) {
                    acc[mask.count_ones() as usize] += 1;
                }
            }
            acc
        })
        .reduce(
            || [0u64; NUM_STEPS + 1],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        )
}

/// Number of permutation classes of step sets satisfying `pred`, by
/// cardinality, via Burnside's lemma over the symmetric group on 3 letters.
pub fn burnside_census(pred: CensusPredicate) -> CensusPolynomial {
    let id = invariant_counts([0, 1, 2], pred);
    let tr = invariant_counts([1, 0, 2], pred);
    let cy = invariant_counts([1, 2, 0], pred);
    let mut p = Poly(vec![0; NUM_STEPS + 1]);
    for d in 0..=NUM_STEPS {
        let sum = id[d] + 3 * tr[d] + 2 * cy[d];
        assert_eq!(sum % 6, 0, "Burnside sum not divisible by 6");
        p.0[d] = (sum / 6) as i128;
    }
    CensusPolynomial::from_signed(&p)
}

/// Dense univariate polynomial with signed coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Poly(Vec<i128>);

impl Poly {
    fn constant(c: i128) -> Poly {
        Poly(vec![c])
    }

    fn monomial(d: usize, c: i128) -> Poly {
        let mut v = vec![0; d + 1];
        v[d] = c;
        Poly(v)
    }

    /// `(1 + u^step)^e`
    fn binom_power(step: usize, e: u32) -> Poly {
        let mut p = Poly::constant(1);
        let base = Poly::constant(1).add(&Poly::monomial(step, 1));
        for _ in 0..e {
            p = p.mul(&base);
        }
        p
    }

    fn add(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly(
            (0..n)
                .map(|i| self.0.get(i).copied().unwrap_or(0) + o.0.get(i).copied().unwrap_or(0))
                .collect(),
        )
    }

    fn scale(&self, c: i128) -> Poly {
        Poly(self.0.iter().map(|v| v * c).collect())
    }

    fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.scale(-1))
    }

    fn mul(&self, o: &Poly) -> Poly {
        let mut r = vec![0i128; self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                r[i + j] += a * b;
            }
        }
        Poly(r)
    }

    fn div_exact(&self, d: i128) -> Poly {
        Poly(
            self.0
                .iter()
                .map(|v| {
                    assert_eq!(v % d, 0, "inexact division in census formula");
                    v / d
                })
                .collect(),
        )
    }
}

fn b(i: u32) -> Poly {
    Poly::binom_power(1, i)
}
fn bb(j: u32) -> Poly {
    Poly::binom_power(2, j)
}
fn angle(j: u32) -> Poly {
    Poly::binom_power(3, j)
}
fn u(d: usize) -> Poly {
    Poly::monomial(d, 1)
}
fn one() -> Poly {
    Poly::constant(1)
}

/// Signed linear combination of polynomials.
fn combo(terms: &[(i128, Poly)]) -> Poly {
    terms
        .iter()
        .fold(Poly::constant(0), |acc, (c, p)| acc.add(&p.scale(*c)))
}

fn j_id() -> Poly {
    let main = combo(&[
        (1, b(26)),
        (-1, b(19)),
        (-3, b(17)),
        (3, b(14)),
        (3, b(11)),
        (-3, b(10)),
        (3, b(8)),
        (-9, b(5)),
        (6, b(4)),
        (3, b(2)),
        (-3, b(1)),
        (1, one()),
    ]);
    let corr = u(1).mul(&combo(&[(-1, b(16)), (2, b(13)), (-1, b(10))])).scale(3);
    main.add(&corr)
}

fn j_12() -> Poly {
    combo(&[
        (1, b(8).mul(&bb(9))),
        (-1, b(5).mul(&bb(7).add(&bb(6)).add(&bb(3)))),
        (1, b(4).mul(&bb(5).add(&bb(3)))),
        (1, b(2).mul(&bb(3).add(&one()))),
        (-1, b(1).mul(&bb(2).add(&one()))),
        (1, one()),
        (-1, u(1).mul(&b(4)).mul(&bb(6).sub(&bb(3)))),
    ])
}

fn j_123() -> Poly {
    combo(&[(1, b(2).mul(&angle(8))), (-1, b(1).mul(&angle(6))), (1, one())])
}

fn k_id() -> Poly {
    let sq = b(2).sub(&one());
    combo(&[
        (3, b(13)),
        (-3, b(12)),
        (9, b(11)),
        (-6, b(10)),
        (-6, b(9)),
        (3, b(8)),
        (-2, b(7)),
        (3, b(3)),
        (-3, u(2).mul(&b(3))),
        (-3, sq.mul(&sq).mul(&b(1))),
        (1, u(2)),
    ])
}

fn k_12() -> Poly {
    let sq = b(2).sub(&one());
    combo(&[
        (1, b(5).mul(&bb(3))),
        (1, b(5).mul(&bb(4))),
        (-1, b(4).mul(&bb(2))),
        (1, b(1).mul(&bb(1))),
        (-1, b(4).mul(&bb(4))),
        (1, u(2).mul(&b(3))),
        (1, sq.mul(&sq).mul(&b(1))),
        (-1, u(2)),
    ])
}

fn k_123() -> Poly {
    b(1).mul(&angle(2)).add(&u(2))
}

/// The per-symmetry closed forms, exposed for cross-checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AppendixSeries {
    pub j_id: CensusPolynomial,
    pub j_12: CensusPolynomial,
    pub j_123: CensusPolynomial,
    pub k_id: CensusPolynomial,
    pub k_12: CensusPolynomial,
    pub k_123: CensusPolynomial,
}

pub fn appendix_series() -> AppendixSeries {
    AppendixSeries {
        j_id: CensusPolynomial::from_signed(&j_id()),
        j_12: CensusPolynomial::from_signed(&j_12()),
        j_123: CensusPolynomial::from_signed(&j_123()),
        k_id: CensusPolynomial::from_signed(&k_id()),
        k_12: CensusPolynomial::from_signed(&k_12()),
        k_123: CensusPolynomial::from_signed(&k_123()),
    }
}

/// Evaluates the closed forms and returns `(J, K, I)` with `I = J - K`.
pub fn appendix_polynomials() -> (CensusPolynomial, CensusPolynomial, CensusPolynomial) {
    let j = j_id().add(&j_12().scale(3)).add(&j_123().scale(2)).div_exact(6);
    let k = k_id().add(&k_12().scale(3)).add(&k_123().scale(2)).div_exact(6);
    let i = j.sub(&k);
    (
        CensusPolynomial::from_signed(&j),
        CensusPolynomial::from_signed(&k),
        CensusPolynomial::from_signed(&i),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stepset::{enumerate_models, ModelFilter, StepSet};
    use std::collections::HashSet;

    const J: [u64; 27] = [
        1, 3, 21, 179, 1294, 7041, 28917, 92216, 235338, 492509, 860520, 1271528, 1603192,
        1734397, 1614372, 1293402, 890395, 524638, 263008, 111251, 39256, 11390, 2676, 500, 73,
        9, 1,
    ];
    const K: [u64; 14] = [1, 3, 21, 106, 315, 616, 846, 844, 622, 341, 138, 40, 8, 1];

    #[test]
    fn appendix_matches_stated_polynomials() {
        let (j, k, i) = appendix_polynomials();
        assert_eq!(j.coefficients, J.to_vec());
        assert_eq!(k.coefficients, K.to_vec());
        assert_eq!(i.coeff(3), 73);
        assert_eq!(i.coeff(4), 979);
        assert_eq!(i.coeff(6), 28917 - 846);
        assert_eq!(i.coeff(26), 1);
        assert_eq!(i.total(), 11_074_225);
        assert_eq!(i.total_up_to(6), 35_548);
    }

    #[test]
    fn cyclic_closed_form_constant_term() {
        assert_eq!(appendix_series().j_123.coeff(0), 1);
    }

    #[test]
    fn orbit_counts() {
        assert_eq!(step_orbits([0, 1, 2]).len(), 26);
        assert_eq!(step_orbits([1, 0, 2]).len(), 17);
        assert_eq!(step_orbits([1, 2, 0]).len(), 10);
    }

    /// The symmetric-set closed forms agree with direct enumeration of
    /// invariant sets (cheap for the non-identity permutations).
    #[test]
    fn symmetric_closed_forms_match_invariant_sets() {
        let a = appendix_series();
        let tr = invariant_counts([1, 0, 2], CensusPredicate::NoUnused);
        let cy = invariant_counts([1, 2, 0], CensusPredicate::NoUnused);
        assert_eq!(trim(&tr), a.j_12.coefficients);
        assert_eq!(trim(&cy), a.j_123.coefficients);
        let tr = invariant_counts([1, 0, 2], CensusPredicate::LowDimension);
        let cy = invariant_counts([1, 2, 0], CensusPredicate::LowDimension);
        assert_eq!(trim(&tr), a.k_12.coefficients);
        assert_eq!(trim(&cy), a.k_123.coefficients);
    }

    fn trim(v: &[u64]) -> Vec<u64> {
        let mut v = v.to_vec();
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    }

    /// Direct orbit counting (canonical codes) agrees with the Burnside
    /// route at small cardinality.
    #[test]
    fn direct_orbit_count_small_cardinality() {
        let mut codes: HashSet<u32> = HashSet::new();
        for m in 0u32..(1 << 26) {
            if m.count_ones() <= 3 && CensusPredicate::Interesting.holds(m) {
                codes.insert(StepSet::from_mask(m).unwrap().canonical_code());
            }
        }
        let mut by_card = [0u64; 4];
        for c in &codes {
            by_card[c.count_ones() as usize] += 1;
        }
        let (_, _, i) = appendix_polynomials();
        for d in 0..4 {
            assert_eq!(by_card[d], i.coeff(d));
        }
        let streamed = enumerate_models(3, ModelFilter::interesting()).count();
        assert_eq!(streamed, codes.len());
    }

    #[test]
    fn predicate_parsing() {
        assert_eq!("no-unused".parse::<CensusPredicate>().unwrap(), CensusPredicate::NoUnused);
        assert!("bogus".parse::<CensusPredicate>().is_err());
    }
}
