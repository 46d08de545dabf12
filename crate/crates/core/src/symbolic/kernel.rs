//! Characteristic polynomials and the directional slices of the kernel.

use num_rational::BigRational;

use super::laurent::{LaurentPoly, Var};
use crate::stepset::{QuadrantModel, StepSet};

/// `S(x,y,z) = sum over steps of x^i y^j z^k`.
pub fn char_poly(s: StepSet) -> LaurentPoly {
    LaurentPoly::from_terms(s.iter().map(|st| {
        let [i, j, k] = st.coords();
        (
            [i as i32, j as i32, k as i32, 0, 0],
            BigRational::from_integer(1.into()),
        )
    }))
}

/// `S(x,y) = sum of w * x^i y^j` over weighted quadrant steps.
pub fn quadrant_char_poly(m: &QuadrantModel) -> LaurentPoly {
    LaurentPoly::from_terms(m.steps().into_iter().map(|(st, w)| {
        (
            [st.i as i32, st.j as i32, 0, 0, 0],
            BigRational::from_integer(w.into()),
        )
    }))
}

/// Slices of `S` along each variable and the kernel `K = 1 - tS`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelData {
    pub s: LaurentPoly,
    pub a_minus: LaurentPoly,
    pub a_zero: LaurentPoly,
    pub a_plus: LaurentPoly,
    pub b_minus: LaurentPoly,
    pub b_zero: LaurentPoly,
    pub b_plus: LaurentPoly,
    pub c_minus: LaurentPoly,
    pub c_zero: LaurentPoly,
    pub c_plus: LaurentPoly,
    /// `[x^-1 y^-1] S`, a polynomial in `z`.
    pub d_minus: LaurentPoly,
    /// `[x^-1 z^-1] S`, a polynomial in `y`.
    pub e_minus: LaurentPoly,
    /// `[y^-1 z^-1] S`, a polynomial in `x`.
    pub f_minus: LaurentPoly,
    pub epsilon: u8,
    pub kernel: LaurentPoly,
}

impl KernelData {
    pub fn from_poly(s: LaurentPoly) -> KernelData {
        let sl = |v: Var, k: i32| s.coeff_of(v, k);
        let d_minus = s.coeff_of(Var::X, -1).coeff_of(Var::Y, -1);
        let e_minus = s.coeff_of(Var::X, -1).coeff_of(Var::Z, -1);
        let f_minus = s.coeff_of(Var::Y, -1).coeff_of(Var::Z, -1);
        let eps = d_minus.coeff_of(Var::Z, -1);
        let epsilon = if eps.is_zero() { 0 } else { 1 };
        let kernel = &LaurentPoly::one() - &(&s * &LaurentPoly::var(Var::T));
        KernelData {
            a_minus: sl(Var::X, -1),
            a_zero: sl(Var::X, 0),
            a_plus: sl(Var::X, 1),
            b_minus: sl(Var::Y, -1),
            b_zero: sl(Var::Y, 0),
            b_plus: sl(Var::Y, 1),
            c_minus: sl(Var::Z, -1),
            c_zero: sl(Var::Z, 0),
            c_plus: sl(Var::Z, 1),
            d_minus,
            e_minus,
            f_minus,
            epsilon,
            kernel,
            s,
        }
    }

    /// Recombines the slices along `v` into `S`.
    pub fn recombine(&self, v: Var) -> LaurentPoly {
        let (m, z, p) = match v {
            Var::X => (&self.a_minus, &self.a_zero, &self.a_plus),
            Var::Y => (&self.b_minus, &self.b_zero, &self.b_plus),
            Var::Z => (&self.c_minus, &self.c_zero, &self.c_plus),
            _ => panic!("slices exist for walk variables only"),
        };
        &(&m.mul_monomial(&unit(v, -1)) + z) + &p.mul_monomial(&unit(v, 1))
    }
}

fn unit(v: Var, k: i32) -> [i32; 5] {
    super::laurent::unit_exps(v, k)
}

pub fn kernel_data(s: StepSet) -> KernelData {
    KernelData::from_poly(char_poly(s))
}

pub fn quadrant_kernel_data(m: &QuadrantModel) -> KernelData {
    KernelData::from_poly(quadrant_char_poly(m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stepset::{enumerate_models, parse_model, ModelFilter};

    #[test]
    fn characteristic_polynomials() {
        assert_eq!(char_poly(parse_model("+00").unwrap()), LaurentPoly::var(Var::X));
        assert!(char_poly(StepSet::EMPTY).is_zero());
        let s = char_poly(parse_model("---;--+;-+0;+00").unwrap());
        assert_eq!(s.to_string(), "x^-1*y^-1*z^-1 + x^-1*y^-1*z + x^-1*y + x");
    }

    #[test]
    fn kernel_slices_of_examples() {
        let k = kernel_data(parse_model("---;--+;-+0;+00").unwrap());
        assert_eq!(k.a_minus.to_string(), "y^-1*z^-1 + y^-1*z + y");
        assert!(k.a_plus.is_one());
        assert_eq!(k.epsilon, 1);
        let k = kernel_data(parse_model("-0-;-++;0-+;+0-;+++").unwrap());
        let s = crate::symbolic::walk_poly(&[
            (1, [-1, 0, -1]),
            (1, [-1, 1, 1]),
            (1, [0, -1, 1]),
            (1, [1, 0, -1]),
            (1, [1, 1, 1]),
        ]);
        assert_eq!(k.kernel, &LaurentPoly::one() - &(&s * &LaurentPoly::var(Var::T)));
        assert_eq!(k.epsilon, 0);
    }

    #[test]
    fn slices_recombine_for_small_models() {
        for s in enumerate_models(4, ModelFilter::none()) {
            let k = kernel_data(s);
            for v in [Var::X, Var::Y, Var::Z] {
                assert_eq!(k.recombine(v), k.s);
            }
        }
    }
}
