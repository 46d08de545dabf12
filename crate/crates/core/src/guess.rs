//! Guessing linear recurrences with polynomial coefficients,
//! `sum_{i=0}^{r} p_i(n) a(n+i) = 0` with `deg p_i <= d`, over a prime field.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::modp::{self, DEFAULT_PRIME};

/// Equations held back from the solver and used to screen candidates.
pub const MARGIN: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GuessError {
    #[error("{have} terms given, at least {need} needed for r <= {r_max}, d <= {d_max}")]
    InsufficientTerms {
        have: usize,
        need: usize,
        r_max: usize,
        d_max: usize,
    },
    #[error("{0} is not an odd prime")]
    BadPrime(u64),
    #[error("recurrence order must be at least 1")]
    ZeroOrder,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecurrenceCandidate {
    pub order: usize,
    pub degree: usize,
    pub prime: u64,
    /// `coeffs[i][k]` is the coefficient of `n^k` in `p_i(n)`, reduced mod `prime`.
    pub coeffs: Vec<Vec<u64>>,
    pub source: String,
}

impl RecurrenceCandidate {
    /// From integer coefficients.
    pub fn from_integers(coeffs: &[Vec<BigInt>], prime: u64, source: &str) -> RecurrenceCandidate {
        let degree = coeffs.iter().map(|p| p.len()).max().unwrap_or(1).saturating_sub(1);
        let coeffs = coeffs
            .iter()
            .map(|p| {
                let mut v: Vec<u64> = p.iter().map(|c| modp::from_bigint(c, prime)).collect();
                v.resize(degree + 1, 0);
                v
            })
            .collect::<Vec<_>>();
        RecurrenceCandidate {
            order: coeffs.len() - 1,
            degree,
            prime,
            coeffs,
            source: source.to_string(),
        }
    }

    pub fn labelled(mut self, source: &str) -> RecurrenceCandidate {
        self.source = source.to_string();
        self
    }

    fn eval_coeff(&self, i: usize, n: u64) -> u64 {
        let p = self.prime;
        self.coeffs[i]
            .iter()
            .rev()
            .fold(0, |acc, &c| modp::add(modp::mul(acc, n % p, p), c, p))
    }

    /// `sum_i p_i(n) a(n+i)` for residues `a`.
    fn residual(&self, a: &[u64], n: usize) -> u64 {
        let p = self.prime;
        (0..=self.order).fold(0, |acc, i| modp::add(acc, modp::mul(self.eval_coeff(i, n as u64), a[n + i], p), p))
    }

    /// The first index `n` where the recurrence fails on `seq`.
    pub fn first_failure(&self, seq: &[BigInt]) -> Option<usize> {
        let a: Vec<u64> = seq.iter().map(|v| modp::from_bigint(v, self.prime)).collect();
        (0..a.len().saturating_sub(self.order)).find(|&n| self.residual(&a, n) != 0)
    }

    /// Coefficients scaled so the first non-zero one is 1.
    pub fn normalized(&self) -> Vec<u64> {
        let p = self.prime;
        let flat: Vec<u64> = self.coeffs.iter().flatten().copied().collect();
        let Some(&lead) = flat.iter().find(|&&c| c != 0) else {
            return flat;
        };
        let li = modp::inv(lead, p).expect("non-zero");
        flat.iter().map(|&c| modp::mul(c, li, p)).collect()
    }

    /// The primitive integer recurrence whose reduction is proportional to
    /// this one, by rational reconstruction; the last non-zero coefficient is
    /// positive.
    pub fn lift(&self) -> Option<Vec<Vec<BigInt>>> {
        let m = BigInt::from(self.prime);
        let rats: Vec<BigRational> = self
            .normalized()
            .iter()
            .map(|&c| modp::rational_reconstruction(&BigInt::from(c), &m))
            .collect::<Option<_>>()?;
        let den = rats.iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
        let ints: Vec<BigInt> = rats.iter().map(|r| (r * BigRational::from_integer(den.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
        let sign = if ints.iter().rev().find(|v| !v.is_zero()).is_some_and(|v| v.is_negative()) {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        let ints: Vec<BigInt> = ints.iter().map(|v| v / &g * &sign).collect();
        Some(ints.chunks(self.degree + 1).map(|c| c.to_vec()).collect())
    }
}

/// True iff the recurrence holds wherever all referenced terms exist.
pub fn verify_candidate(c: &RecurrenceCandidate, seq: &[BigInt]) -> bool {
    c.first_failure(seq).is_none()
}

/// Minimal number of terms for a sweep up to `(r_max, d_max)`.
pub fn terms_needed(r_max: usize, d_max: usize) -> usize {
    (r_max + 1) * (d_max + 1) + r_max + MARGIN
}

/// Basis of the right nullspace of `rows` (each of length `cols`) mod `p`,
/// from the reduced row echelon form.
fn nullspace(mut rows: Vec<Vec<u64>>, cols: usize, p: u64) -> Vec<Vec<u64>> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(k) = (r..rows.len()).find(|&k| rows[k][c] != 0) else {
            continue;
        };
        rows.swap(r, k);
        let iv = modp::inv(rows[r][c], p).expect("non-zero pivot");
        for x in rows[r].iter_mut() {
            *x = modp::mul(*x, iv, p);
        }
        let pivot_row = rows[r].clone();
        for (k, row) in rows.iter_mut().enumerate() {
            if k != r && row[c] != 0 {
                let f = row[c];
                for (x, &y) in row.iter_mut().zip(&pivot_row).skip(c) {
                    *x = modp::sub(*x, modp::mul(f, y, p), p);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![0u64; cols];
            v[f] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = modp::neg(rows[i][f], p);
            }
            v
        })
        .collect()
}

/// Candidate for one `(r, d)` cell, if the fitted solution also holds on
/// every remaining equation.
fn solve_cell(a: &[u64], r: usize, d: usize, p: u64) -> Option<RecurrenceCandidate> {
    let unknowns = (r + 1) * (d + 1);
    let equations = a.len().checked_sub(r)?;
    let available = equations.checked_sub(MARGIN)?;
    if available < unknowns {
        return None;
    }
    let fit = available.min(2 * unknowns + MARGIN);
    let rows: Vec<Vec<u64>> = (0..fit)
        .map(|n| {
            let mut row = Vec::with_capacity(unknowns);
            for i in 0..=r {
                let mut pw = 1u64;
                for _ in 0..=d {
                    row.push(modp::mul(pw, a[n + i], p));
                    pw = modp::mul(pw, n as u64 % p, p);
                }
            }
            row
        })
        .collect();
    for v in nullspace(rows, unknowns, p) {
        let coeffs: Vec<Vec<u64>> = v.chunks(d + 1).map(|c| c.to_vec()).collect();
        if coeffs[r].iter().all(|&c| c == 0) {
            continue;
        }
        let c = RecurrenceCandidate {
            order: r,
            degree: d,
            prime: p,
            coeffs,
            source: String::new(),
        };
        if (0..equations).all(|n| c.residual(a, n) == 0) {
            return Some(c);
        }
    }
    None
}

/// Sweeps `(r, d)` by increasing `r + d`, then `r`, and returns the verified
/// candidates that are not dominated by an earlier one (`r' <= r`,
/// `d' <= d`). An empty list means nothing was found at these sizes.
pub fn guess_precursive(
    seq: &[BigInt],
    r_max: usize,
    d_max: usize,
    prime: u64,
) -> Result<Vec<RecurrenceCandidate>, GuessError> {
    if prime < 3 || !modp::is_prime(prime) {
        return Err(GuessError::BadPrime(prime));
    }
    if r_max == 0 {
        return Err(GuessError::ZeroOrder);
    }
    let need = terms_needed(r_max, d_max);
    if seq.len() < need {
        return Err(GuessError::InsufficientTerms {
            have: seq.len(),
            need,
            r_max,
            d_max,
        });
    }
    let a: Vec<u64> = seq.iter().map(|v| modp::from_bigint(v, prime)).collect();
    let mut found: Vec<RecurrenceCandidate> = Vec::new();
    for s in 1..=r_max + d_max {
        let cells: Vec<(usize, usize)> = (1..=r_max.min(s))
            .filter(|&r| s - r <= d_max)
            .map(|r| (r, s - r))
            .filter(|&(r, d)| !found.iter().any(|c| c.order <= r && c.degree <= d))
            .collect();
        let results: Vec<Option<RecurrenceCandidate>> =
            cells.par_iter().map(|&(r, d)| solve_cell(&a, r, d, prime)).collect();
        for c in results.into_iter().flatten() {
            if !found.iter().any(|f| f.order <= c.order && f.degree <= c.degree) {
                found.push(c);
            }
        }
    }
    Ok(found)
}

/// Guess with the default prime.
pub fn guess_default(seq: &[BigInt], r_max: usize, d_max: usize) -> Result<Vec<RecurrenceCandidate>, GuessError> {
    guess_precursive(seq, r_max, d_max, DEFAULT_PRIME)
}

/// Whether two candidate lists agree in `(r, d)` and in their lifted
/// integer coefficients.
pub fn prime_stable(a: &[RecurrenceCandidate], b: &[RecurrenceCandidate]) -> bool {
    a.len() == b.len()
        && a.iter().zip(b).all(|(x, y)| {
            x.order == y.order && x.degree == y.degree && x.lift().is_some() && x.lift() == y.lift()
        })
}

/// Product of linear factors `prod (a n + b)` as coefficients in `n`.
pub fn linear_product(factors: &[(i64, i64)]) -> Vec<BigInt> {
    let mut out = vec![BigInt::one()];
    for &(a, b) in factors {
        let mut next = vec![BigInt::zero(); out.len() + 1];
        for (k, c) in out.iter().enumerate() {
            next[k] += c * b;
            next[k + 1] += c * a;
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modp::SECOND_PRIME;
    use proptest::prelude::*;

    fn ints(v: impl IntoIterator<Item = BigInt>) -> Vec<BigInt> {
        v.into_iter().collect()
    }

    fn powers_of_two(n: usize) -> Vec<BigInt> {
        ints((0..n).map(|k| BigInt::one() << k))
    }

    fn central_binomials(n: usize) -> Vec<BigInt> {
        let mut v = vec![BigInt::one()];
        for k in 0..n as i64 - 1 {
            let next = v.last().unwrap() * (4 * k + 2) / (k + 1);
            v.push(next);
        }
        v
    }

    #[test]
    fn geometric() {
        let c = guess_default(&powers_of_two(60), 2, 2).unwrap();
        assert_eq!(c.len(), 1);
        assert_eq!((c[0].order, c[0].degree), (1, 0));
        assert_eq!(c[0].lift().unwrap(), vec![vec![BigInt::from(-2)], vec![BigInt::one()]]);
        assert!(verify_candidate(&c[0], &powers_of_two(1000)));
        let mut bad = powers_of_two(1000);
        bad[500] += 1;
        let n = c[0].first_failure(&bad).unwrap();
        assert!((499..=500).contains(&n));
    }

    #[test]
    fn central_binomial() {
        let c = guess_default(&central_binomials(60), 2, 2).unwrap();
        assert_eq!((c[0].order, c[0].degree), (1, 1));
        // (n+1) a(n+1) - (4n+2) a(n) = 0
        let want = vec![
            vec![BigInt::from(-2), BigInt::from(-4)],
            vec![BigInt::from(1), BigInt::from(1)],
        ];
        assert_eq!(c[0].lift().unwrap(), want);
    }

    #[test]
    fn too_few_terms() {
        assert!(matches!(
            guess_default(&powers_of_two(10), 2, 2),
            Err(GuessError::InsufficientTerms { need: 21, .. })
        ));
        assert_eq!(guess_precursive(&powers_of_two(40), 1, 1, 15), Err(GuessError::BadPrime(15)));
    }

    #[test]
    fn stable_across_primes() {
        let s = central_binomials(60);
        let a = guess_precursive(&s, 3, 3, DEFAULT_PRIME).unwrap();
        let b = guess_precursive(&s, 3, 3, SECOND_PRIME).unwrap();
        assert!(prime_stable(&a, &b));
    }

    #[test]
    fn linear_products() {
        assert_eq!(
            linear_product(&[(1, 1), (2, 3)]),
            vec![BigInt::from(3), BigInt::from(5), BigInt::from(2)]
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn held_out_terms(a in 1i64..6, b in -5i64..6, c0 in 1i64..4) {
            // a(n+1) = (a n + b) a(n) + c0 a(n-1)... kept first order for speed
            let mut s = vec![BigInt::from(c0)];
            for n in 0..79i64 {
                let next = s.last().unwrap() * (a * n + b);
                s.push(next);
            }
            let train = &s[..64];
            for cand in guess_default(train, 2, 2).unwrap() {
                prop_assert!(verify_candidate(&cand, &s));
            }
        }
    }
}
