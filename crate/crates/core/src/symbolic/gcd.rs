//! Heuristic multivariate polynomial GCD over the integers, with exact
//! division as the verification step.
//!
//! Inputs are polynomials (non-negative exponents). A failed heuristic
//! returns the trivial divisor, so results are always correct divisors
//! though not necessarily greatest.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::laurent::{sub_exps, Exps, LaurentPoly, Var, NVARS};

const MAX_ATTEMPTS: usize = 6;
const MAX_BITS: u64 = 60_000;

/// Exact quotient `a / b` of polynomials over Q, or `None` if `b` does not
/// divide `a` (lexicographic division).
pub fn div_exact(a: &LaurentPoly, b: &LaurentPoly) -> Option<LaurentPoly> {
    if b.is_zero() {
        return None;
    }
    if a.is_zero() {
        return Some(LaurentPoly::zero());
    }
    let (lb, cb) = {
        let (e, c) = b.lex_leading()?;
        (*e, c.clone())
    };
    let mut r = a.clone();
    let mut q = LaurentPoly::zero();
    let a_min = a.min_exps();
    let b_min = b.min_exps();
    while let Some((lr, cr)) = r.lex_leading().map(|(e, c)| (*e, c.clone())) {
        let m = sub_exps(&lr, &lb);
        // quotient exponents are bounded below by a_min - b_min
        if (0..NVARS).any(|i| m[i] < a_min[i] - b_min[i]) {
            return None;
        }
        let c = cr / &cb;
        let term = LaurentPoly::monomial(m, c);
        r -= &(&term * b);
        q += &term;
    }
    Some(q)
}

fn int_content(p: &LaurentPoly) -> BigInt {
    let mut g = BigInt::zero();
    for (_, c) in p.terms() {
        g = g.gcd(c.numer());
    }
    g
}

fn div_int(p: &LaurentPoly, d: &BigInt) -> LaurentPoly {
    let d = BigRational::from_integer(d.clone());
    p.scale(&d.recip())
}

/// Primitive integer polynomial with positive lexicographic leading coefficient.
pub fn primitive_normalized(p: &LaurentPoly) -> LaurentPoly {
    if p.is_zero() {
        return LaurentPoly::zero();
    }
    let mut q = p.scale(&p.content().recip());
    if q.lex_leading().is_some_and(|(_, c)| c.is_negative()) {
        q = -q;
    }
    q
}

fn vars_of(a: &LaurentPoly, b: &LaurentPoly) -> Vec<Var> {
    (0..NVARS)
        .map(Var::from_index)
        .filter(|&v| a.involves(v) || b.involves(v))
        .collect()
}

fn symmetric_mod(c: &BigInt, m: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

/// xi-adic reconstruction of a polynomial in `v` from its value at `xi`.
fn reconstruct(gamma: &LaurentPoly, xi: &BigInt, v: Var) -> LaurentPoly {
    let mut g = gamma.clone();
    let mut out = LaurentPoly::zero();
    let mut i = 0;
    while !g.is_zero() {
        let mut digit = LaurentPoly::zero();
        for (e, c) in g.terms() {
            let s = symmetric_mod(c.numer(), xi);
            digit.add_term(*e, BigRational::from_integer(s));
        }
        let mut shifted = [0; NVARS];
        shifted[v.index()] = i;
        out += &digit.mul_monomial(&shifted);
        g = (&g - &digit).scale(&BigRational::from_integer(xi.clone()).recip());
        i += 1;
        if i > 10_000 {
            break;
        }
    }
    out
}

/// Full GCD of integer polynomials including the integer content.
fn heu_full(a: &LaurentPoly, b: &LaurentPoly, vars: &[Var]) -> Option<LaurentPoly> {
    if a.is_zero() {
        return Some(b.clone());
    }
    if b.is_zero() {
        return Some(a.clone());
    }
    let ca = int_content(a);
    let cb = int_content(b);
    let c = ca.gcd(&cb);
    let g = heu_primitive(&div_int(a, &ca), &div_int(b, &cb), vars)?;
    Some(g.scale(&BigRational::from_integer(c)))
}

/// GCD of primitive integer polynomials, normalized primitive.
fn heu_primitive(a: &LaurentPoly, b: &LaurentPoly, vars: &[Var]) -> Option<LaurentPoly> {
    if a.is_constant() || b.is_constant() {
        return Some(LaurentPoly::one());
    }
    let Some(pos) = vars.iter().position(|&v| a.involves(v) || b.involves(v)) else {
        return Some(LaurentPoly::one());
    };
    let v = vars[pos];
    let rest = &vars[pos + 1..];
    let deg = a.degree(v).max(b.degree(v)).max(1) as u64;
    let mut xi: BigInt = 2 * a.max_abs_coeff().min(b.max_abs_coeff()) + 29;
    for _ in 0..MAX_ATTEMPTS {
        if xi.bits() * deg > MAX_BITS {
            return None;
        }
        let xr = BigRational::from_integer(xi.clone());
        let ae = a.eval_var(v, &xr);
        let be = b.eval_var(v, &xr);
        if !ae.is_zero() && !be.is_zero() {
            if let Some(gamma) = heu_full(&ae, &be, rest) {
                let g = primitive_normalized(&reconstruct(&gamma, &xi, v));
                if !g.is_zero() && div_exact(a, &g).is_some() && div_exact(b, &g).is_some() {
                    return Some(g);
                }
            }
        }
        xi = xi * 73794 / 27011;
    }
    None
}

/// GCD of two polynomials over Q, primitive with positive lexicographic
/// leading coefficient; falls back to 1 when the heuristic fails.
pub fn poly_gcd(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    if a.is_zero() {
        return primitive_normalized(b);
    }
    if b.is_zero() {
        return primitive_normalized(a);
    }
    let ma = a.min_exps();
    let mb = b.min_exps();
    let mut m: Exps = [0; NVARS];
    for i in 0..NVARS {
        m[i] = ma[i].min(mb[i]).max(0);
    }
    let neg = |e: &Exps| -> Exps {
        let mut r = *e;
        for x in r.iter_mut() {
            *x = -*x;
        }
        r
    };
    let a0 = primitive_normalized(&a.mul_monomial(&neg(&ma)));
    let b0 = primitive_normalized(&b.mul_monomial(&neg(&mb)));
    let vars = vars_of(&a0, &b0);
    let g = heu_primitive(&a0, &b0, &vars).unwrap_or_else(LaurentPoly::one);
    g.mul_monomial(&m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::laurent::walk_poly;
    use proptest::prelude::*;

    #[test]
    fn division() {
        let a = walk_poly(&[(1, [2, 0, 0]), (-1, [0, 0, 0])]);
        let b = walk_poly(&[(1, [1, 0, 0]), (-1, [0, 0, 0])]);
        let q = div_exact(&a, &b).unwrap();
        assert_eq!(q, walk_poly(&[(1, [1, 0, 0]), (1, [0, 0, 0])]));
        assert!(div_exact(&b, &a).is_none());
        let c = walk_poly(&[(1, [1, 0, 0]), (1, [0, 1, 0])]);
        assert!(div_exact(&a, &c).is_none());
    }

    #[test]
    fn gcd_of_products() {
        let f = walk_poly(&[(1, [1, 1, 0]), (3, [0, 0, 1]), (-2, [0, 0, 0])]);
        let g = walk_poly(&[(1, [2, 0, 0]), (1, [0, 2, 1])]);
        let h = walk_poly(&[(5, [0, 1, 0]), (1, [1, 0, 2])]);
        let a = &f * &g;
        let b = &f * &h;
        assert_eq!(poly_gcd(&a, &b), primitive_normalized(&f));
        let one = poly_gcd(&g, &h);
        assert!(one.is_one());
    }

    #[test]
    fn gcd_with_monomial_factor() {
        let f = walk_poly(&[(1, [1, 0, 0]), (1, [0, 0, 0])]);
        let a = (&f * &f).mul_monomial(&[2, 1, 0, 0, 0]);
        let b = f.mul_monomial(&[1, 3, 0, 0, 0]);
        assert_eq!(poly_gcd(&a, &b), f.mul_monomial(&[1, 1, 0, 0, 0]));
    }

    fn arb_poly() -> impl Strategy<Value = LaurentPoly> {
        prop::collection::vec((-4i64..5, 0i32..3, 0i32..3, 0i32..3), 1..5).prop_map(|ts| {
            walk_poly(&ts.into_iter().map(|(c, a, b, d)| (c, [a, b, d])).collect::<Vec<_>>())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn gcd_divides_and_recovers_common_factor(f in arb_poly(), g in arb_poly(), h in arb_poly()) {
            prop_assume!(!f.is_zero() && !g.is_zero() && !h.is_zero());
            let a = &f * &g;
            let b = &f * &h;
            let d = poly_gcd(&a, &b);
            prop_assert!(div_exact(&a, &d).is_some());
            prop_assert!(div_exact(&b, &d).is_some());
            // the common factor divides the gcd unless the heuristic gave up
            if !d.is_one() {
                prop_assert!(div_exact(&d, &primitive_normalized(&f)).is_some() || f.is_constant());
            }
        }
    }
}
