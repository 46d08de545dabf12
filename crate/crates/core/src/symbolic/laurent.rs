use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::modp;

/// Number of variables: `x, y, z` (walk variables), `t` and `v`.
pub const NVARS: usize = 5;

/// Exponent vector over `(x, y, z, t, v)`.
pub type Exps = [i32; NVARS];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X = 0,
    Y = 1,
    Z = 2,
    T = 3,
    V = 4,
}

impl Var {
    pub const WALK: [Var; 3] = [Var::X, Var::Y, Var::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Var {
        [Var::X, Var::Y, Var::Z, Var::T, Var::V][i]
    }

    pub fn name(self) -> &'static str {
        ["x", "y", "z", "t", "v"][self.index()]
    }
}

pub fn unit_exps(v: Var, e: i32) -> Exps {
    let mut x = [0; NVARS];
    x[v.index()] = e;
    x
}

pub fn add_exps(a: &Exps, b: &Exps) -> Exps {
    let mut r = *a;
    for i in 0..NVARS {
        r[i] += b[i];
    }
    r
}

pub fn sub_exps(a: &Exps, b: &Exps) -> Exps {
    let mut r = *a;
    for i in 0..NVARS {
        r[i] -= b[i];
    }
    r
}

/// A Laurent polynomial with rational coefficients. Zero coefficients are
/// never stored, so equality is structural.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<Exps, BigRational>,
}

impl LaurentPoly {
    pub fn zero() -> LaurentPoly {
        LaurentPoly::default()
    }

    pub fn one() -> LaurentPoly {
        LaurentPoly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> LaurentPoly {
        LaurentPoly::monomial([0; NVARS], c)
    }

    pub fn from_int(c: i64) -> LaurentPoly {
        LaurentPoly::constant(BigRational::from_integer(c.into()))
    }

    pub fn monomial(e: Exps, c: BigRational) -> LaurentPoly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        LaurentPoly { terms }
    }

    pub fn var(v: Var) -> LaurentPoly {
        LaurentPoly::var_pow(v, 1)
    }

    /// `v^e`, with negative `e` allowed.
    pub fn var_pow(v: Var, e: i32) -> LaurentPoly {
        LaurentPoly::monomial(unit_exps(v, e), BigRational::one())
    }

    pub fn from_terms<I: IntoIterator<Item = (Exps, BigRational)>>(it: I) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        for (e, c) in it {
            p.add_term(e, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&[0; NVARS])
                .is_some_and(|c| c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exps, &BigRational)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> impl Iterator<Item = (Exps, BigRational)> {
        self.terms.into_iter()
    }

    pub fn coeff(&self, e: &Exps) -> BigRational {
        self.terms.get(e).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add_term(&mut self, e: Exps, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Whether the polynomial is a (possibly zero) constant.
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| *e == [0; NVARS])
    }

    pub fn constant_term(&self) -> BigRational {
        self.coeff(&[0; NVARS])
    }

    /// True iff the polynomial is `c * monomial`.
    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn single_term(&self) -> Option<(Exps, BigRational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(e, c)| (*e, c.clone()))
        } else {
            None
        }
    }

    pub fn scale(&self, c: &BigRational) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    pub fn scale_int(&self, c: i64) -> LaurentPoly {
        self.scale(&BigRational::from_integer(c.into()))
    }

    pub fn mul_monomial(&self, m: &Exps) -> LaurentPoly {
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, v)| (add_exps(e, m), v.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, n: u32) -> LaurentPoly {
        let mut result = LaurentPoly::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Minimum exponent of each variable over the support (zeros if empty).
    pub fn min_exps(&self) -> Exps {
        let mut m = [i32::MAX; NVARS];
        for e in self.terms.keys() {
            for i in 0..NVARS {
                m[i] = m[i].min(e[i]);
            }
        }
        if self.is_zero() {
            [0; NVARS]
        } else {
            m
        }
    }

    pub fn max_exps(&self) -> Exps {
        let mut m = [i32::MIN; NVARS];
        for e in self.terms.keys() {
            for i in 0..NVARS {
                m[i] = m[i].max(e[i]);
            }
        }
        if self.is_zero() {
            [0; NVARS]
        } else {
            m
        }
    }

    pub fn degree(&self, v: Var) -> i32 {
        self.max_exps()[v.index()]
    }

    pub fn low_degree(&self, v: Var) -> i32 {
        self.min_exps()[v.index()]
    }

    pub fn involves(&self, v: Var) -> bool {
        self.terms.keys().any(|e| e[v.index()] != 0)
    }

    /// Coefficient of `v^k`, as a polynomial not involving `v`.
    pub fn coeff_of(&self, v: Var, k: i32) -> LaurentPoly {
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e[v.index()] == k)
                .map(|(e, c)| {
                    let mut e = *e;
                    e[v.index()] = 0;
                    (e, c.clone())
                })
                .collect(),
        }
    }

    /// Keeps only the terms accepted by `keep`.
    pub fn filter<F: Fn(&Exps) -> bool>(&self, keep: F) -> LaurentPoly {
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| keep(e))
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }

    /// Replaces `v` by `v^-1`.
    pub fn invert_var(&self, v: Var) -> LaurentPoly {
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e = *e;
                    e[v.index()] = -e[v.index()];
                    (e, c.clone())
                })
                .collect(),
        }
    }

    /// Swaps two variables.
    pub fn swap_vars(&self, a: Var, b: Var) -> LaurentPoly {
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e = *e;
                    e.swap(a.index(), b.index());
                    (e, c.clone())
                })
                .collect(),
        }
    }

    /// Substitutes `v -> c * v^k`.
    pub fn subs_monomial(&self, v: Var, c: &BigRational, k: i32) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e, coef) in &self.terms {
            let n = e[v.index()];
            let mut f = *e;
            f[v.index()] = n * k;
            let factor = rational_pow(c, n);
            out.add_term(f, coef * factor);
        }
        out
    }

    /// Substitutes `v` by a rational value.
    pub fn eval_var(&self, v: Var, val: &BigRational) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e, coef) in &self.terms {
            let mut f = *e;
            let n = f[v.index()];
            f[v.index()] = 0;
            out.add_term(f, coef * rational_pow(val, n));
        }
        out
    }

    /// Evaluates all variables at rational values.
    pub fn eval(&self, vals: &[BigRational; NVARS]) -> BigRational {
        let mut s = BigRational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for i in 0..NVARS {
                if e[i] != 0 {
                    term *= rational_pow(&vals[i], e[i]);
                }
            }
            s += term;
        }
        s
    }

    /// Evaluates modulo `p`; `None` if a coefficient denominator vanishes.
    /// Negative powers use the supplied inverses.
    pub fn eval_modp(&self, vals: &[u64; NVARS], invs: &[u64; NVARS], p: u64) -> Option<u64> {
        let mut s = 0u64;
        for (e, c) in &self.terms {
            let mut term = modp::from_rational(c, p)?;
            for i in 0..NVARS {
                if e[i] > 0 {
                    term = modp::mul(term, modp::pow(vals[i], e[i] as u64, p), p);
                } else if e[i] < 0 {
                    term = modp::mul(term, modp::pow(invs[i], (-e[i]) as u64, p), p);
                }
            }
            s = modp::add(s, term, p);
        }
        Some(s)
    }

    /// Positive rational `c` with `self / c` a primitive integer polynomial
    /// (gcd of numerators over lcm of denominators).
    pub fn content(&self) -> BigRational {
        let mut g = BigInt::zero();
        let mut l = BigInt::one();
        for c in self.terms.values() {
            g = g.gcd(c.numer());
            l = l.lcm(c.denom());
        }
        if g.is_zero() {
            return BigRational::one();
        }
        BigRational::new(g, l)
    }

    /// Monomial `m` with `self / m` a polynomial having no monomial factor.
    pub fn monomial_content(&self) -> Exps {
        self.min_exps()
    }

    /// Leading term for the graded lexicographic order on `(x, y, z)` with
    /// `x > y > z`, ties broken by `(t, v)` lexicographically.
    pub fn grlex_leading(&self) -> Option<(&Exps, &BigRational)> {
        self.terms.iter().max_by(|a, b| grlex_key(a.0).cmp(&grlex_key(b.0)))
    }

    /// Lexicographically largest exponent (x first).
    pub fn lex_leading(&self) -> Option<(&Exps, &BigRational)> {
        self.terms.iter().next_back()
    }

    /// Coefficients are all integers.
    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// Maximal absolute value of the coefficients (assumed integral).
    pub fn max_abs_coeff(&self) -> BigInt {
        self.terms
            .values()
            .map(|c| c.numer().abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    /// Exponents are non-negative.
    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x >= 0))
    }

    /// Total degree in the walk variables.
    pub fn walk_total_degree(&self) -> i32 {
        self.terms
            .keys()
            .map(|e| e[0] + e[1] + e[2])
            .max()
            .unwrap_or(0)
    }

    /// Restricts exponents of the walk variables to a box.
    pub fn restrict_box(&self, lo: &[i32; 3], hi: &[i32; 3]) -> LaurentPoly {
        self.filter(|e| (0..3).all(|i| e[i] >= lo[i] && e[i] <= hi[i]))
    }

    /// Terms with every walk-variable exponent in `vars` strictly positive.
    pub fn positive_part(&self, vars: &[Var]) -> LaurentPoly {
        self.filter(|e| vars.iter().all(|v| e[v.index()] > 0))
    }

    pub fn to_string_in(&self, names: &[&str; NVARS]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (e, c)) in self.terms.iter().enumerate() {
            let mono: Vec<String> = (0..NVARS)
                .filter(|&i| e[i] != 0)
                .map(|i| {
                    if e[i] == 1 {
                        names[i].to_string()
                    } else {
                        format!("{}^{}", names[i], e[i])
                    }
                })
                .collect();
            let neg = c.is_negative();
            let abs = c.abs();
            if idx > 0 {
                out.push_str(if neg { " - " } else { " + " });
            } else if neg {
                out.push('-');
            }
            if mono.is_empty() {
                out.push_str(&abs.to_string());
            } else {
                if !abs.is_one() {
                    out.push_str(&abs.to_string());
                    out.push('*');
                }
                out.push_str(&mono.join("*"));
            }
        }
        out
    }
}

fn grlex_key(e: &Exps) -> (i32, i32, i32, i32, i32, i32) {
    (e[0] + e[1] + e[2], e[0], e[1], e[2], e[3], e[4])
}

pub fn rational_pow(c: &BigRational, n: i32) -> BigRational {
    if n == 0 {
        return BigRational::one();
    }
    let p = num_traits::pow(c.clone(), n.unsigned_abs() as usize);
    if n < 0 {
        p.recip()
    } else {
        p
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_string_in(&["x", "y", "z", "t", "v"]))
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, o: &LaurentPoly) {
        for (e, c) in &o.terms {
            self.add_term(*e, c.clone());
        }
    }
}

impl SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, o: &LaurentPoly) {
        for (e, c) in &o.terms {
            self.add_term(*e, -c.clone());
        }
    }
}

impl Add<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, o: &LaurentPoly) -> LaurentPoly {
        let mut r = self.clone();
        r += o;
        r
    }
}

impl Sub<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, o: &LaurentPoly) -> LaurentPoly {
        let mut r = self.clone();
        r -= o;
        r
    }
}

impl Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(mut self, o: LaurentPoly) -> LaurentPoly {
        self += &o;
        self
    }
}

impl Sub for LaurentPoly {
    type Output = LaurentPoly;
    fn sub(mut self, o: LaurentPoly) -> LaurentPoly {
        self -= &o;
        self
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect(),
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl Mul<&LaurentPoly> for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, o: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || o.is_zero() {
            return LaurentPoly::zero();
        }
        let mut acc: std::collections::HashMap<Exps, BigRational> =
            std::collections::HashMap::with_capacity(self.len() * o.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let e = add_exps(ea, eb);
                let v = ca * cb;
                acc.entry(e)
                    .and_modify(|x| *x += &v)
                    .or_insert(v);
            }
        }
        LaurentPoly {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

impl Mul for LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, o: LaurentPoly) -> LaurentPoly {
        &self * &o
    }
}

/// Convenience constructor: `lp(&[(c, [i, j, k])])` builds `sum c x^i y^j z^k`.
pub fn walk_poly(terms: &[(i64, [i32; 3])]) -> LaurentPoly {
    LaurentPoly::from_terms(terms.iter().map(|&(c, e)| {
        (
            [e[0], e[1], e[2], 0, 0],
            BigRational::from_integer(c.into()),
        )
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn x() -> LaurentPoly {
        LaurentPoly::var(Var::X)
    }

    #[test]
    fn arithmetic_basics() {
        let xb = LaurentPoly::var_pow(Var::X, -1);
        let p = &x() + &xb;
        let sq = &p * &p;
        assert_eq!(sq, walk_poly(&[(1, [2, 0, 0]), (2, [0, 0, 0]), (1, [-2, 0, 0])]));
        assert_eq!(&p - &p, LaurentPoly::zero());
        assert_eq!(p.pow(3), &sq * &p);
        assert_eq!(sq.to_string(), "x^-2 + 2 + x^2");
    }

    #[test]
    fn content_and_leading() {
        let p = walk_poly(&[(6, [1, 0, 0]), (-4, [0, 1, 0])]).scale(&BigRational::new(1.into(), 3.into()));
        assert_eq!(p.content(), BigRational::new(2.into(), 3.into()));
        let q = walk_poly(&[(1, [0, 0, 3]), (-2, [1, 1, 0])]);
        let (e, c) = q.grlex_leading().unwrap();
        assert_eq!(*e, [0, 0, 3, 0, 0]);
        assert!(c.is_one());
    }

    #[test]
    fn coefficient_slices_recombine() {
        let p = walk_poly(&[(1, [-1, 1, 0]), (2, [0, 0, 1]), (1, [1, -1, -1])]);
        let mut r = LaurentPoly::zero();
        for k in -1..=1 {
            r += &p.coeff_of(Var::X, k).mul_monomial(&unit_exps(Var::X, k));
        }
        assert_eq!(r, p);
    }

    fn arb_poly() -> impl Strategy<Value = LaurentPoly> {
        prop::collection::vec((-3i64..4, -2i32..3, -2i32..3, -2i32..3), 0..6)
            .prop_map(|ts| walk_poly(&ts.into_iter().map(|(c, a, b, d)| (c, [a, b, d])).collect::<Vec<_>>()))
    }

    proptest! {
        #[test]
        fn ring_laws(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }

        #[test]
        fn positive_part_splits(a in arb_poly()) {
            let pos = a.positive_part(&[Var::X]);
            let rest = a.filter(|e| e[0] <= 0);
            prop_assert_eq!(&pos + &rest, a.clone());
            prop_assert_eq!(pos.positive_part(&[Var::X]), pos);
        }
    }
}
