//! Power series in `t` with Laurent-polynomial coefficients, and algebraic
//! series computed by Newton iteration.

use num_rational::BigRational;
use thiserror::Error;

use super::gcd::div_exact;
use super::laurent::{LaurentPoly, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("constant term {0} is not an invertible monomial")]
    NotInvertible(String),
    #[error("initial value is not a root of the defining polynomial at t = 0")]
    NotARoot,
    #[error("derivative of the defining polynomial vanishes at the initial value (Newton condition)")]
    SingularRoot,
    #[error("residual check failed at t^{0}")]
    Residual(usize),
    #[error("substituted series has a non-zero constant term")]
    NonZeroConstantTerm,
    #[error("division leaves a pole in t")]
    Pole,
    #[error("coefficient of t^{0} is not a polynomial in the substituted variable")]
    NotPolynomial(usize),
}

/// A power series `sum_n c_n t^n` known modulo `t^(prec)`, `prec = len`.
/// Coefficients are Laurent polynomials in the walk variables and `v`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct PowerSeries {
    coeffs: Vec<LaurentPoly>,
}

impl PowerSeries {
    /// The zero series to precision `prec`.
    pub fn zero(prec: usize) -> PowerSeries {
        PowerSeries {
            coeffs: vec![LaurentPoly::zero(); prec],
        }
    }

    pub fn constant(c: LaurentPoly, prec: usize) -> PowerSeries {
        let mut s = PowerSeries::zero(prec);
        if prec > 0 {
            s.coeffs[0] = c;
        }
        s
    }

    pub fn one(prec: usize) -> PowerSeries {
        PowerSeries::constant(LaurentPoly::one(), prec)
    }

    /// `c t^k`.
    pub fn monomial(c: LaurentPoly, k: usize, prec: usize) -> PowerSeries {
        let mut s = PowerSeries::zero(prec);
        if k < prec {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn t(prec: usize) -> PowerSeries {
        PowerSeries::monomial(LaurentPoly::one(), 1, prec)
    }

    pub fn from_coeffs(coeffs: Vec<LaurentPoly>) -> PowerSeries {
        PowerSeries { coeffs }
    }

    /// Rational coefficient sequence.
    pub fn from_rationals(cs: &[BigRational]) -> PowerSeries {
        PowerSeries::from_coeffs(cs.iter().map(|c| LaurentPoly::constant(c.clone())).collect())
    }

    /// Reads the `t` exponent of a polynomial as the series degree.
    pub fn from_poly_in_t(p: &LaurentPoly, prec: usize) -> PowerSeries {
        let mut s = PowerSeries::zero(prec);
        for (e, c) in p.terms() {
            let k = e[Var::T.index()];
            assert!(k >= 0, "negative power of t");
            if (k as usize) < prec {
                let mut f = *e;
                f[Var::T.index()] = 0;
                s.coeffs[k as usize].add_term(f, c.clone());
            }
        }
        s
    }

    pub fn prec(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[LaurentPoly] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &LaurentPoly {
        &self.coeffs[n]
    }

    pub fn set_coeff(&mut self, n: usize, c: LaurentPoly) {
        self.coeffs[n] = c;
    }

    /// Rational value of a constant coefficient.
    pub fn rational_coeff(&self, n: usize) -> BigRational {
        self.coeffs[n].constant_term()
    }

    pub fn truncate(&self, prec: usize) -> PowerSeries {
        let mut c = self.coeffs.clone();
        c.truncate(prec);
        PowerSeries { coeffs: c }
    }

    /// Index of the first non-zero coefficient, if any within precision.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.valuation().is_none()
    }

    pub fn add(&self, o: &PowerSeries) -> PowerSeries {
        let p = self.prec().min(o.prec());
        PowerSeries {
            coeffs: (0..p).map(|i| &self.coeffs[i] + &o.coeffs[i]).collect(),
        }
    }

    pub fn sub(&self, o: &PowerSeries) -> PowerSeries {
        let p = self.prec().min(o.prec());
        PowerSeries {
            coeffs: (0..p).map(|i| &self.coeffs[i] - &o.coeffs[i]).collect(),
        }
    }

    pub fn neg(&self) -> PowerSeries {
        PowerSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, o: &PowerSeries) -> PowerSeries {
        let p = self.prec().min(o.prec());
        let mut out = vec![LaurentPoly::zero(); p];
        for (i, a) in self.coeffs.iter().enumerate().take(p) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(p - i) {
                if !b.is_zero() {
                    out[i + j] += &(a * b);
                }
            }
        }
        PowerSeries { coeffs: out }
    }

    pub fn scale(&self, c: &LaurentPoly) -> PowerSeries {
        PowerSeries {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn scale_rational(&self, c: &BigRational) -> PowerSeries {
        PowerSeries {
            coeffs: self.coeffs.iter().map(|a| a.scale(c)).collect(),
        }
    }

    /// Multiplies by `t^k` (precision grows by `k`).
    pub fn shift(&self, k: usize) -> PowerSeries {
        let mut c = vec![LaurentPoly::zero(); k];
        c.extend(self.coeffs.iter().cloned());
        PowerSeries { coeffs: c }
    }

    /// Divides by `t^k`; the first `k` coefficients must vanish.
    pub fn unshift(&self, k: usize) -> Result<PowerSeries, SeriesError> {
        if self.coeffs.iter().take(k).any(|c| !c.is_zero()) {
            return Err(SeriesError::Pole);
        }
        Ok(PowerSeries {
            coeffs: self.coeffs.iter().skip(k).cloned().collect(),
        })
    }

    pub fn pow(&self, n: u32) -> PowerSeries {
        let mut r = PowerSeries::one(self.prec());
        for _ in 0..n {
            r = r.mul(self);
        }
        r
    }

    /// Multiplicative inverse; the constant term must be a non-zero monomial.
    pub fn inverse(&self) -> Result<PowerSeries, SeriesError> {
        let p = self.prec();
        if p == 0 {
            return Ok(PowerSeries::zero(0));
        }
        let c0 = &self.coeffs[0];
        let Some((e, c)) = c0.single_term() else {
            return Err(SeriesError::NotInvertible(c0.to_string()));
        };
        let mut ne = e;
        for x in ne.iter_mut() {
            *x = -*x;
        }
        let inv0 = LaurentPoly::monomial(ne, c.recip());
        let mut out = vec![LaurentPoly::zero(); p];
        out[0] = inv0.clone();
        for n in 1..p {
            let mut s = LaurentPoly::zero();
            for k in 1..=n {
                if !self.coeffs[k].is_zero() && !out[n - k].is_zero() {
                    s += &(&self.coeffs[k] * &out[n - k]);
                }
            }
            out[n] = -(&s * &inv0);
        }
        Ok(PowerSeries { coeffs: out })
    }

    /// Quotient `self / o` where `o` may have positive valuation; the
    /// precision drops by the valuation of `o`.
    pub fn div(&self, o: &PowerSeries) -> Result<PowerSeries, SeriesError> {
        let v = o.valuation().ok_or(SeriesError::Pole)?;
        let a = self.unshift(v)?;
        let b = o.unshift(v)?;
        Ok(a.mul(&b.inverse()?))
    }

    /// Applies `f` to each coefficient.
    pub fn map_coeffs<F: Fn(&LaurentPoly) -> LaurentPoly>(&self, f: F) -> PowerSeries {
        PowerSeries {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    /// Divides every coefficient exactly by a polynomial.
    pub fn div_exact_poly(&self, d: &LaurentPoly) -> Option<PowerSeries> {
        let m = d.min_exps();
        let mut neg = m;
        for x in neg.iter_mut() {
            *x = -*x;
        }
        let d0 = d.mul_monomial(&neg);
        let mut out = Vec::with_capacity(self.prec());
        for c in &self.coeffs {
            if c.is_zero() {
                out.push(LaurentPoly::zero());
                continue;
            }
            let cm = c.min_exps();
            let mut shift = cm;
            for x in shift.iter_mut() {
                *x = -*x;
            }
            let q = div_exact(&c.mul_monomial(&shift), &d0)?;
            out.push(q.mul_monomial(&cm).mul_monomial(&neg));
        }
        Some(PowerSeries { coeffs: out })
    }

    /// Evaluates a polynomial whose coefficients are series at `self`.
    pub fn eval_poly(coeffs: &[PowerSeries], z: &PowerSeries) -> PowerSeries {
        let prec = coeffs
            .iter()
            .map(|c| c.prec())
            .chain(std::iter::once(z.prec()))
            .min()
            .unwrap_or(0);
        let mut acc = PowerSeries::zero(prec);
        for c in coeffs.iter().rev() {
            acc = acc.mul(z).add(&c.truncate(prec));
        }
        acc
    }

    /// Substitutes the variable `var` by the series `g` (`g(0) = 0`). Each
    /// coefficient of `self` must be a polynomial in `var`.
    pub fn substitute(&self, var: Var, g: &PowerSeries) -> Result<PowerSeries, SeriesError> {
        if g.prec() > 0 && !g.coeffs[0].is_zero() {
            return Err(SeriesError::NonZeroConstantTerm);
        }
        let prec = self.prec().min(g.prec());
        let mut out = PowerSeries::zero(prec);
        let mut powers: Vec<PowerSeries> = vec![PowerSeries::one(prec)];
        for n in 0..prec {
            let c = &self.coeffs[n];
            if c.is_zero() {
                continue;
            }
            if c.low_degree(var) < 0 {
                return Err(SeriesError::NotPolynomial(n));
            }
            let deg = c.degree(var) as usize;
            while powers.len() <= deg {
                let next = powers.last().unwrap().mul(g);
                powers.push(next);
            }
            for k in 0..=deg {
                let ck = c.coeff_of(var, k as i32);
                if ck.is_zero() || n + k >= prec {
                    continue;
                }
                let term = powers[k].scale(&ck).shift(n).truncate(prec);
                out = out.add(&term);
            }
        }
        Ok(out)
    }

    /// Formal derivative with respect to `t`.
    pub fn derivative(&self) -> PowerSeries {
        PowerSeries {
            coeffs: (1..self.prec())
                .map(|n| self.coeffs[n].scale_int(n as i64))
                .collect(),
        }
    }

    /// Square root with constant term 1.
    pub fn sqrt(&self) -> Result<PowerSeries, SeriesError> {
        let prec = self.prec();
        let poly = vec![self.neg(), PowerSeries::zero(prec), PowerSeries::one(prec)];
        let r = solve_algebraic_series(&poly, &LaurentPoly::one(), prec.saturating_sub(1))?;
        Ok(r.z)
    }
}

/// A root `Z(t)` of `P(Z; t) = sum_i p_i(t) Z^i`.
#[derive(Clone, Debug)]
pub struct AlgebraicSeries {
    pub poly: Vec<PowerSeries>,
    pub z: PowerSeries,
}

impl AlgebraicSeries {
    /// `P(Z)` truncated at the common precision.
    pub fn residual(&self) -> PowerSeries {
        PowerSeries::eval_poly(&self.poly, &self.z)
    }

    pub fn order(&self) -> usize {
        self.z.prec().saturating_sub(1)
    }
}

fn derivative_in_z(poly: &[PowerSeries]) -> Vec<PowerSeries> {
    poly.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c.scale_rational(&BigRational::from_integer((i as i64).into())))
        .collect()
}

/// Root of `P(Z;t)` with `Z(0) = initial` to order `n` (precision `n+1`),
/// by Newton iteration doubling the precision at each step.
pub fn solve_algebraic_series(
    poly: &[PowerSeries],
    initial: &LaurentPoly,
    n: usize,
) -> Result<AlgebraicSeries, SeriesError> {
    let prec = n + 1;
    let poly: Vec<PowerSeries> = poly
        .iter()
        .map(|c| {
            let mut c = c.truncate(prec);
            while c.prec() < prec {
                c.coeffs.push(LaurentPoly::zero());
            }
            c
        })
        .collect();
    let dpoly = derivative_in_z(&poly);
    let z0 = PowerSeries::constant(initial.clone(), 1);
    let head: Vec<PowerSeries> = poly.iter().map(|c| c.truncate(1)).collect();
    if !PowerSeries::eval_poly(&head, &z0).is_zero() {
        return Err(SeriesError::NotARoot);
    }
    let dhead: Vec<PowerSeries> = dpoly.iter().map(|c| c.truncate(1)).collect();
    let d0 = PowerSeries::eval_poly(&dhead, &z0);
    if d0.coeff(0).single_term().is_none() {
        return Err(SeriesError::SingularRoot);
    }
    let mut z = z0;
    let mut p = 1;
    while p < prec {
        p = (2 * p).min(prec);
        let mut zp = z.clone();
        while zp.prec() < p {
            zp.coeffs.push(LaurentPoly::zero());
        }
        let ptr: Vec<PowerSeries> = poly.iter().map(|c| c.truncate(p)).collect();
        let dtr: Vec<PowerSeries> = dpoly.iter().map(|c| c.truncate(p)).collect();
        let f = PowerSeries::eval_poly(&ptr, &zp);
        let df = PowerSeries::eval_poly(&dtr, &zp);
        z = zp.sub(&f.mul(&df.inverse()?));
    }
    let res = AlgebraicSeries { poly, z };
    if let Some(k) = res.residual().valuation() {
        return Err(SeriesError::Residual(k));
    }
    Ok(res)
}

/// Rational number helper.
pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Series with rational coefficients from integers.
pub fn int_series(v: &[i64]) -> PowerSeries {
    PowerSeries::from_rationals(
        &v.iter()
            .map(|&x| BigRational::from_integer(x.into()))
            .collect::<Vec<_>>(),
    )
}

/// True iff every known coefficient is zero.
pub fn all_zero(s: &PowerSeries) -> bool {
    s.coeffs.iter().all(|c| c.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn rat_coeffs(s: &PowerSeries) -> Vec<BigRational> {
        (0..s.prec()).map(|n| s.rational_coeff(n)).collect()
    }

    #[test]
    fn geometric_inverse() {
        let s = int_series(&[1, -1, 0, 0, 0]);
        let inv = s.inverse().unwrap();
        assert_eq!(inv, int_series(&[1, 1, 1, 1, 1]));
    }

    /// T(1 - 4T^2) = t, checked against plain fixed-point iteration.
    #[test]
    fn newton_matches_fixed_point() {
        let n = 12;
        let prec = n + 1;
        let poly = vec![
            PowerSeries::t(prec).neg(),
            PowerSeries::one(prec),
            PowerSeries::zero(prec),
            PowerSeries::constant(LaurentPoly::from_int(-4), prec),
        ];
        let r = solve_algebraic_series(&poly, &LaurentPoly::zero(), n).unwrap();
        // T = t + 4 T^3
        let mut t = PowerSeries::zero(prec);
        for _ in 0..prec {
            t = PowerSeries::t(prec).add(&t.pow(3).scale_rational(&q(4, 1)));
        }
        assert_eq!(r.z, t);
        assert_eq!(rat_coeffs(&r.z)[..6], [q(0, 1), q(1, 1), q(0, 1), q(4, 1), q(0, 1), q(48, 1)]);
    }

    #[test]
    fn lemma_parametrization_series() {
        // Z(1-Z)(1-2Z)^4 = t^2
        let n = 8;
        let prec = n + 1;
        let coeffs: Vec<i64> = {
            // expand Z(1-Z)(1-2Z)^4 as a polynomial in Z
            let mut p = vec![0i64, 1, -1];
            for _ in 0..4 {
                let mut next = vec![0i64; p.len() + 1];
                for (i, c) in p.iter().enumerate() {
                    next[i] += c;
                    next[i + 1] -= 2 * c;
                }
                p = next;
            }
            p
        };
        let mut poly: Vec<PowerSeries> = coeffs
            .iter()
            .map(|&c| PowerSeries::constant(LaurentPoly::from_int(c), prec))
            .collect();
        poly[0] = PowerSeries::monomial(LaurentPoly::from_int(-1), 2, prec);
        let r = solve_algebraic_series(&poly, &LaurentPoly::zero(), n).unwrap();
        let c = rat_coeffs(&r.z);
        assert_eq!(c[2], q(1, 1));
        assert_eq!(c[4], q(9, 1));
        assert!(c[1].is_zero() && c[3].is_zero());
    }

    #[test]
    fn binomial_square_root() {
        let f = int_series(&[1, 1, 0, 0, 0]);
        let s = f.sqrt().unwrap();
        assert_eq!(rat_coeffs(&s)[..4], [q(1, 1), q(1, 2), q(-1, 8), q(1, 16)]);
        assert_eq!(s.mul(&s), f);
    }

    #[test]
    fn newton_condition_errors() {
        let prec = 4;
        // Z^2 - t has no series root at 0 with non-zero derivative
        let poly = vec![PowerSeries::t(prec).neg(), PowerSeries::zero(prec), PowerSeries::one(prec)];
        assert_eq!(
            solve_algebraic_series(&poly, &LaurentPoly::zero(), 3).unwrap_err(),
            SeriesError::SingularRoot
        );
        assert_eq!(
            solve_algebraic_series(&poly, &LaurentPoly::one(), 3).unwrap_err(),
            SeriesError::NotARoot
        );
    }

    #[test]
    fn substitution() {
        // f = 1 + x t, g = t  ->  1 + t^2
        let prec = 5;
        let mut f = PowerSeries::one(prec);
        f.set_coeff(1, LaurentPoly::var(Var::X));
        let g = PowerSeries::t(prec);
        assert_eq!(f.substitute(Var::X, &g).unwrap(), int_series(&[1, 0, 1, 0, 0]));
        // f = x, g arbitrary -> g
        let fx = PowerSeries::constant(LaurentPoly::var(Var::X), prec);
        let g = int_series(&[0, 1, 3, 5, 7]);
        assert_eq!(fx.substitute(Var::X, &g).unwrap(), g);
        assert!(fx.substitute(Var::X, &int_series(&[1, 1, 0, 0, 0])).is_err());
    }

    #[test]
    fn division_with_valuation() {
        let a = int_series(&[0, 0, 2, 2, 0, 0]);
        let b = int_series(&[0, 0, 1, 0, 0, 0]);
        assert_eq!(a.div(&b).unwrap(), int_series(&[2, 2, 0, 0]));
    }
}
