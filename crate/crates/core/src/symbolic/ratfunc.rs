use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use super::gcd::{div_exact, poly_gcd};
use super::laurent::{Exps, LaurentPoly, NVARS};
use crate::modp;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RatFuncError {
    #[error("division by zero")]
    DivisionByZero,
}

/// A rational function `num / den` of Laurent polynomials.
///
/// Normal form: common polynomial factors found by the heuristic GCD are
/// cancelled, the monomial content of the denominator is moved to the
/// numerator, and the denominator is a primitive integer polynomial whose
/// graded-lex leading coefficient is positive. Equality is decided by
/// cross-multiplication and never relies on the normal form.
#[derive(Clone)]
pub struct RatFunc {
    num: LaurentPoly,
    den: LaurentPoly,
}

fn neg_exps(e: &Exps) -> Exps {
    let mut r = *e;
    for x in r.iter_mut() {
        *x = -*x;
    }
    r
}

impl RatFunc {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<RatFunc, RatFuncError> {
        if den.is_zero() {
            return Err(RatFuncError::DivisionByZero);
        }
        Ok(RatFunc::normalized(num, den, true))
    }

    /// Builds without cancelling common factors (content and sign only).
    pub fn new_unreduced(num: LaurentPoly, den: LaurentPoly) -> Result<RatFunc, RatFuncError> {
        if den.is_zero() {
            return Err(RatFuncError::DivisionByZero);
        }
        Ok(RatFunc::normalized(num, den, false))
    }

    fn normalized(num: LaurentPoly, den: LaurentPoly, reduce: bool) -> RatFunc {
        if num.is_zero() {
            return RatFunc::zero();
        }
        // denominators become polynomials without monomial factor
        let dm = den.min_exps();
        let mut den = den.mul_monomial(&neg_exps(&dm));
        let mut num = num.mul_monomial(&neg_exps(&dm));
        if reduce && !den.is_constant() {
            let nm = num.min_exps();
            let num_poly = num.mul_monomial(&neg_exps(&nm));
            let g = poly_gcd(&num_poly, &den);
            if !g.is_constant() {
                if let (Some(n2), Some(d2)) = (div_exact(&num_poly, &g), div_exact(&den, &g)) {
                    num = n2.mul_monomial(&nm);
                    den = d2;
                    let dm = den.min_exps();
                    den = den.mul_monomial(&neg_exps(&dm));
                    num = num.mul_monomial(&neg_exps(&dm));
                }
            }
        }
        let mut c = den.content();
        if den
            .grlex_leading()
            .is_some_and(|(_, lc)| lc.is_negative())
        {
            c = -c;
        }
        if !c.is_one() {
            let inv = c.recip();
            den = den.scale(&inv);
            num = num.scale(&inv);
        }
        RatFunc { num, den }
    }

    pub fn zero() -> RatFunc {
        RatFunc {
            num: LaurentPoly::zero(),
            den: LaurentPoly::one(),
        }
    }

    pub fn one() -> RatFunc {
        RatFunc::from_poly(LaurentPoly::one())
    }

    pub fn from_poly(p: LaurentPoly) -> RatFunc {
        RatFunc {
            num: p,
            den: LaurentPoly::one(),
        }
    }

    pub fn constant(c: BigRational) -> RatFunc {
        RatFunc::from_poly(LaurentPoly::constant(c))
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// True iff the denominator is a constant, i.e. a Laurent polynomial.
    pub fn is_laurent(&self) -> bool {
        self.den.is_constant()
    }

    /// The Laurent polynomial, if the denominator is constant.
    pub fn as_laurent(&self) -> Option<LaurentPoly> {
        if self.den.is_constant() {
            Some(self.num.scale(&self.den.constant_term().recip()))
        } else {
            None
        }
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return RatFunc::normalized(&self.num + &o.num, self.den.clone(), true);
        }
        let g = poly_gcd(&self.den, &o.den);
        let (a, b) = if g.is_constant() {
            (o.den.clone(), self.den.clone())
        } else {
            (
                div_exact(&o.den, &g).expect("gcd divides"),
                div_exact(&self.den, &g).expect("gcd divides"),
            )
        };
        let num = &(&self.num * &a) + &(&o.num * &b);
        let den = &self.den * &a;
        RatFunc::normalized(num, den, true)
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero();
        }
        RatFunc::normalized(&self.num * &o.num, &self.den * &o.den, true)
    }

    pub fn mul_poly(&self, p: &LaurentPoly) -> RatFunc {
        RatFunc::normalized(&self.num * p, self.den.clone(), true)
    }

    pub fn inv(&self) -> Result<RatFunc, RatFuncError> {
        if self.is_zero() {
            return Err(RatFuncError::DivisionByZero);
        }
        Ok(RatFunc::normalized(self.den.clone(), self.num.clone(), false))
    }

    pub fn div(&self, o: &RatFunc) -> Result<RatFunc, RatFuncError> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn pow(&self, n: i32) -> Result<RatFunc, RatFuncError> {
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let k = n.unsigned_abs();
        Ok(RatFunc {
            num: base.num.pow(k),
            den: base.den.pow(k),
        })
    }

    /// Exact equality by cross-multiplication.
    pub fn equals(&self, o: &RatFunc) -> bool {
        &self.num * &o.den == &o.num * &self.den
    }

    /// Evaluates modulo `p`; `None` if the denominator vanishes or a
    /// coefficient denominator is not invertible.
    pub fn eval_modp(&self, vals: &[u64; NVARS], invs: &[u64; NVARS], p: u64) -> Option<u64> {
        let n = self.num.eval_modp(vals, invs, p)?;
        let d = self.den.eval_modp(vals, invs, p)?;
        Some(modp::mul(n, modp::inv(d, p)?, p))
    }

    pub fn eval(&self, vals: &[BigRational; NVARS]) -> Option<BigRational> {
        let d = self.den.eval(vals);
        if d.is_zero() {
            return None;
        }
        Some(self.num.eval(vals) / d)
    }

    /// Substitutes the walk variables of `p` by rational functions.
    pub fn substitute_poly(p: &LaurentPoly, vals: &[RatFunc; 3]) -> RatFunc {
        if p.is_zero() {
            return RatFunc::zero();
        }
        let lo = p.min_exps();
        let hi = p.max_exps();
        // p = sum c m ; clear denominators with prod den_i^(hi_i) num_i^(-lo_i)
        let mut pows_num: Vec<Vec<LaurentPoly>> = Vec::new();
        let mut pows_den: Vec<Vec<LaurentPoly>> = Vec::new();
        for i in 0..3 {
            let span = (hi[i] - lo[i]) as usize;
            let mut pn = vec![LaurentPoly::one()];
            let mut pd = vec![LaurentPoly::one()];
            for k in 1..=span {
                pn.push(&pn[k - 1] * &vals[i].num);
                pd.push(&pd[k - 1] * &vals[i].den);
            }
            pows_num.push(pn);
            pows_den.push(pd);
        }
        // monomial x^e -> num^(e-lo) den^(hi-e) / (num^-lo den^hi) ...
        // common denominator D = prod num_i^(-lo_i) den_i^(hi_i) when lo<0<hi
        let mut total = LaurentPoly::zero();
        for (e, c) in p.terms() {
            let mut term = LaurentPoly::constant(c.clone());
            for i in 0..3 {
                let a = (e[i] - lo[i]) as usize;
                let b = (hi[i] - e[i]) as usize;
                term = &(&term * &pows_num[i][a]) * &pows_den[i][b];
            }
            let mut rest = *e;
            rest[0] = 0;
            rest[1] = 0;
            rest[2] = 0;
            total += &term.mul_monomial(&rest);
        }
        let mut den = LaurentPoly::one();
        for i in 0..3 {
            let span = (hi[i] - lo[i]) as usize;
            den = &den * &pows_den[i][span];
        }
        // total / den equals p(vals) * prod (num_i/den_i)^(-lo_i) ; fix the factor
        let mut r = RatFunc::normalized(total, den, true);
        for i in 0..3 {
            if lo[i] != 0 {
                let f = vals[i].pow(lo[i]).expect("non-zero substitution value");
                r = r.mul(&f);
            }
        }
        r
    }

    /// Substitutes the walk variables of `self` by rational functions.
    pub fn substitute(&self, vals: &[RatFunc; 3]) -> RatFunc {
        let n = RatFunc::substitute_poly(&self.num, vals);
        let d = RatFunc::substitute_poly(&self.den, vals);
        n.div(&d).expect("substituted denominator vanishes")
    }

    pub fn to_string_in(&self, names: &[&str; NVARS]) -> String {
        if self.den.is_one() {
            return self.num.to_string_in(names);
        }
        format!(
            "({})/({})",
            self.num.to_string_in(names),
            self.den.to_string_in(names)
        )
    }
}

impl PartialEq for RatFunc {
    fn eq(&self, o: &RatFunc) -> bool {
        self.equals(o)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_in(&["x", "y", "z", "t", "v"]))
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({self})")
    }
}

impl From<LaurentPoly> for RatFunc {
    fn from(p: LaurentPoly) -> RatFunc {
        RatFunc::from_poly(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::laurent::{walk_poly, Var};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rf(n: &[(i64, [i32; 3])], d: &[(i64, [i32; 3])]) -> RatFunc {
        RatFunc::new(walk_poly(n), walk_poly(d)).unwrap()
    }

    #[test]
    fn normal_form_cancels_common_factors() {
        // (x^2 - 1)/(x - 1) = x + 1
        let r = rf(&[(1, [2, 0, 0]), (-1, [0, 0, 0])], &[(1, [1, 0, 0]), (-1, [0, 0, 0])]);
        assert!(r.is_laurent());
        assert_eq!(r.as_laurent().unwrap(), walk_poly(&[(1, [1, 0, 0]), (1, [0, 0, 0])]));
        // x^-1 (1+y) / (2 x^-3 (1+y)^2)  =  x^2 / (2(1+y))
        let r = rf(&[(1, [-1, 0, 0]), (1, [-1, 1, 0])], &[(2, [-3, 0, 0]), (4, [-3, 1, 0]), (2, [-3, 2, 0])]);
        assert_eq!(r.den(), &walk_poly(&[(1, [0, 0, 0]), (1, [0, 1, 0])]));
        assert_eq!(r.num().to_string(), "1/2*x^2");
    }

    #[test]
    fn division_by_zero() {
        assert!(RatFunc::new(LaurentPoly::one(), LaurentPoly::zero()).is_err());
        assert!(RatFunc::zero().inv().is_err());
    }

    #[test]
    fn substitution_of_involution() {
        // x -> xbar (y + ybar z + ybar zbar) is an involution of x + xbar * A
        let a = walk_poly(&[(1, [0, 1, 0]), (1, [0, -1, 1]), (1, [0, -1, -1])]);
        let img = RatFunc::from_poly(a.mul_monomial(&[-1, 0, 0, 0, 0]));
        let x = RatFunc::from_poly(LaurentPoly::var(Var::X));
        let y = RatFunc::from_poly(LaurentPoly::var(Var::Y));
        let z = RatFunc::from_poly(LaurentPoly::var(Var::Z));
        let twice = img.substitute(&[img.clone(), y, z]);
        assert!(twice.equals(&x));
    }

    fn arb_rf() -> impl Strategy<Value = RatFunc> {
        let poly = prop::collection::vec((-3i64..4, -1i32..2, -1i32..2, -1i32..2), 1..4);
        (poly.clone(), poly).prop_filter_map("non-zero denominator", |(n, d)| {
            let to = |v: Vec<(i64, i32, i32, i32)>| {
                walk_poly(&v.into_iter().map(|(c, a, b, e)| (c, [a, b, e])).collect::<Vec<_>>())
            };
            RatFunc::new(to(n), to(d)).ok()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        /// Cross-multiplication equality agrees with evaluation at random points.
        #[test]
        fn equality_matches_random_evaluation(a in arb_rf(), b in arb_rf(), seed in 0u64..1000) {
            let sum1 = a.add(&b).sub(&b);
            prop_assert!(sum1.equals(&a));
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let exact = a.equals(&b);
            let mut all_equal = true;
            for _ in 0..20 {
                let mut vals: [BigRational; NVARS] = Default::default();
                for v in vals.iter_mut().take(3) {
                    *v = BigRational::new(rng.gen_range(1i64..50).into(), rng.gen_range(1i64..50).into());
                }
                for v in vals.iter_mut().skip(3) {
                    *v = BigRational::one();
                }
                if let (Some(x), Some(y)) = (a.eval(&vals), b.eval(&vals)) {
                    if x != y { all_equal = false; }
                }
            }
            prop_assert_eq!(exact, all_equal);
        }

        #[test]
        fn field_laws(a in arb_rf(), b in arb_rf()) {
            prop_assert!(a.mul(&b).equals(&b.mul(&a)));
            if !b.is_zero() {
                prop_assert!(a.mul(&b).div(&b).unwrap().equals(&a));
            }
        }
    }
}
