//! Iterated Laurent expansion of rational functions into windowed series.
//!
//! A denominator `D` is expanded in a fixed variable order (outermost
//! first). With `m` the lexicographically smallest monomial of `D`,
//! `1/D = m^-1 * sum_k r^k` where `r = 1 - D/m` only has monomials that are
//! lexicographically positive. Partial products that can no longer reach
//! the requested box are pruned, which makes the sum finite and exact on
//! the box.

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use super::laurent::{add_exps, Exps, LaurentPoly, Var, NVARS};
use super::ratfunc::RatFunc;

/// A box `lo <= e <= hi` on the walk variables `x, y, z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window {
    pub lo: [i32; 3],
    pub hi: [i32; 3],
}

const UNBOUNDED: i32 = 1 << 24;

impl Window {
    pub fn new(lo: [i32; 3], hi: [i32; 3]) -> Window {
        Window { lo, hi }
    }

    /// The same interval on every walk variable.
    pub fn cube(lo: i32, hi: i32) -> Window {
        Window::new([lo; 3], [hi; 3])
    }

    pub fn unbounded() -> Window {
        Window::cube(-UNBOUNDED, UNBOUNDED)
    }

    pub fn contains(&self, e: &Exps) -> bool {
        (0..3).all(|i| e[i] >= self.lo[i] && e[i] <= self.hi[i])
    }

    pub fn contains_window(&self, o: &Window) -> bool {
        (0..3).all(|i| o.lo[i] >= self.lo[i] && o.hi[i] <= self.hi[i])
    }

    pub fn intersect(&self, o: &Window) -> Window {
        let mut w = *self;
        for i in 0..3 {
            w.lo[i] = w.lo[i].max(o.lo[i]);
            w.hi[i] = w.hi[i].min(o.hi[i]);
        }
        w
    }

    pub fn is_empty(&self) -> bool {
        (0..3).any(|i| self.lo[i] > self.hi[i])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExpansionError {
    #[error("denominator involves {0}, which is not in the expansion order")]
    NoExpansionDirection(&'static str),
    #[error("comparison window {requested:?} is not inside the guaranteed window {guaranteed:?}")]
    OutsideWindow { requested: Window, guaranteed: Window },
    #[error("empty guaranteed window")]
    EmptyWindow,
}

/// Series in `t` whose coefficients are exact on a window of the walk
/// variables; nothing is stored outside the window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<LaurentPoly>,
    window: Window,
}

/// First mismatch found by [`TruncatedSeries::first_difference`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Discrepancy {
    pub degree: usize,
    pub exps: [i32; 3],
    pub left: BigRational,
    pub right: BigRational,
}

impl TruncatedSeries {
    /// Builds from per-degree coefficients, restricting them to the window.
    pub fn new(coeffs: Vec<LaurentPoly>, window: Window) -> TruncatedSeries {
        let coeffs = coeffs
            .into_iter()
            .map(|c| c.filter(|e| window.contains(e)))
            .collect();
        TruncatedSeries { coeffs, window }
    }

    /// An exact series (unbounded window).
    pub fn exact(coeffs: Vec<LaurentPoly>) -> TruncatedSeries {
        TruncatedSeries {
            coeffs,
            window: Window::unbounded(),
        }
    }

    /// A polynomial in the walk variables and `t`, truncated at `t^n`.
    pub fn from_poly(p: &LaurentPoly, n: usize) -> TruncatedSeries {
        TruncatedSeries::exact(split_t(p, n))
    }

    pub fn order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn coeffs(&self) -> &[LaurentPoly] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &LaurentPoly {
        &self.coeffs[n]
    }

    pub fn restrict(&self, w: &Window) -> TruncatedSeries {
        TruncatedSeries::new(self.coeffs.clone(), self.window.intersect(w))
    }

    pub fn truncate(&self, n: usize) -> TruncatedSeries {
        let mut c = self.coeffs.clone();
        c.truncate(n + 1);
        TruncatedSeries {
            coeffs: c,
            window: self.window,
        }
    }

    pub fn add(&self, o: &TruncatedSeries) -> TruncatedSeries {
        let w = self.window.intersect(&o.window);
        let n = self.coeffs.len().min(o.coeffs.len());
        TruncatedSeries::new(
            (0..n).map(|i| &self.coeffs[i] + &o.coeffs[i]).collect(),
            w,
        )
    }

    pub fn sub(&self, o: &TruncatedSeries) -> TruncatedSeries {
        let w = self.window.intersect(&o.window);
        let n = self.coeffs.len().min(o.coeffs.len());
        TruncatedSeries::new(
            (0..n).map(|i| &self.coeffs[i] - &o.coeffs[i]).collect(),
            w,
        )
    }

    /// Product with an exact Laurent polynomial in the walk variables; the
    /// window shrinks to `[lo + max, hi + min]` of the polynomial's support.
    pub fn mul_poly(&self, p: &LaurentPoly) -> TruncatedSeries {
        if p.is_zero() {
            return TruncatedSeries::exact(vec![LaurentPoly::zero(); self.coeffs.len()]);
        }
        let mut w = self.window;
        let pmin = p.min_exps();
        let pmax = p.max_exps();
        for i in 0..3 {
            if w.lo[i] > -UNBOUNDED {
                w.lo[i] += pmax[i];
            }
            if w.hi[i] < UNBOUNDED {
                w.hi[i] += pmin[i];
            }
        }
        let n = self.coeffs.len();
        let pt = split_t(p, n.saturating_sub(1));
        let mut out = vec![LaurentPoly::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in pt.iter().enumerate() {
                if i + j < n && !a.is_zero() && !b.is_zero() {
                    out[i + j] += &mul_in_window(a, b, &w);
                }
            }
        }
        TruncatedSeries { coeffs: out, window: w }
    }

    /// Keeps monomials with positive exponent in `v`.
    pub fn positive_part(&self, v: Var) -> TruncatedSeries {
        TruncatedSeries {
            coeffs: self
                .coeffs
                .iter()
                .map(|c| c.filter(|e| e[v.index()] > 0))
                .collect(),
            window: self.window,
        }
    }

    /// Keeps monomials with non-positive exponent in `v`.
    pub fn nonpositive_part(&self, v: Var) -> TruncatedSeries {
        TruncatedSeries {
            coeffs: self
                .coeffs
                .iter()
                .map(|c| c.filter(|e| e[v.index()] <= 0))
                .collect(),
            window: self.window,
        }
    }

    /// First coefficient where the two series differ on `w`, which must lie
    /// inside both guaranteed windows.
    pub fn first_difference(
        &self,
        o: &TruncatedSeries,
        w: &Window,
    ) -> Result<Option<Discrepancy>, ExpansionError> {
        for s in [self, o] {
            if !s.window.contains_window(w) {
                return Err(ExpansionError::OutsideWindow {
                    requested: *w,
                    guaranteed: s.window,
                });
            }
        }
        let n = self.coeffs.len().min(o.coeffs.len());
        for d in 0..n {
            let a = self.coeffs[d].filter(|e| w.contains(e));
            let b = o.coeffs[d].filter(|e| w.contains(e));
            if a != b {
                let diff = &a - &b;
                let (e, _) = diff.terms().next().expect("non-zero difference");
                return Ok(Some(Discrepancy {
                    degree: d,
                    exps: [e[0], e[1], e[2]],
                    left: a.coeff(e),
                    right: b.coeff(e),
                }));
            }
        }
        Ok(None)
    }
}

fn mul_in_window(a: &LaurentPoly, b: &LaurentPoly, w: &Window) -> LaurentPoly {
    let mut acc: HashMap<Exps, BigRational> = HashMap::new();
    for (ea, ca) in a.terms() {
        for (eb, cb) in b.terms() {
            let e = add_exps(ea, eb);
            if w.contains(&e) {
                *acc.entry(e).or_insert_with(BigRational::zero) += ca * cb;
            }
        }
    }
    LaurentPoly::from_terms(acc)
}

/// Splits a polynomial by its power of `t`, keeping degrees `0..=n`.
fn split_t(p: &LaurentPoly, n: usize) -> Vec<LaurentPoly> {
    let ti = Var::T.index();
    let mut out = vec![LaurentPoly::zero(); n + 1];
    for (e, c) in p.terms() {
        let k = e[ti];
        assert!(k >= 0, "negative power of t");
        if (k as usize) <= n {
            let mut f = *e;
            f[ti] = 0;
            out[k as usize].add_term(f, c.clone());
        }
    }
    out
}

/// Pruned geometric expansion of `1/den` in the order `ord`, exact for
/// every monomial whose `ord` exponents are bounded by `upper`.
fn inverse_expansion(
    den: &LaurentPoly,
    ord: &[usize],
    upper: &[i32],
) -> LaurentPoly {
    let key = |e: &Exps| -> Vec<i32> { ord.iter().map(|&i| e[i]).collect() };
    let (lead, lc) = den
        .terms()
        .min_by(|a, b| key(a.0).cmp(&key(b.0)))
        .map(|(e, c)| (*e, c.clone()))
        .expect("non-zero denominator");
    let inv_lc = lc.recip();
    let mut neg_lead = lead;
    for x in neg_lead.iter_mut() {
        *x = -*x;
    }
    // r = 1 - den/lead
    let r: Vec<(Exps, BigRational, usize)> = den
        .terms()
        .filter(|(e, _)| **e != lead)
        .map(|(e, c)| {
            let f = add_exps(e, &neg_lead);
            let level = ord
                .iter()
                .position(|&i| f[i] != 0)
                .expect("distinct monomials differ in an ordered variable");
            debug_assert!(f[ord[level]] > 0);
            (f, -(c * &inv_lc), level)
        })
        .collect();
    let m = ord.len();
    let mut slack = vec![0i64; m];
    for (l, s) in slack.iter_mut().enumerate() {
        for (f, _, lev) in &r {
            if *lev < l {
                *s = (*s).max(-(f[ord[l]] as i64));
            }
        }
    }
    let reachable = |e: &Exps| -> bool {
        let mut total = 0i64;
        for l in 0..m {
            let cnt = upper[l] as i64 - e[ord[l]] as i64 + slack[l] * total;
            if cnt < 0 {
                return false;
            }
            total += cnt;
        }
        true
    };
    let mut result: HashMap<Exps, BigRational> = HashMap::new();
    let zero: Exps = [0; NVARS];
    let mut layer: HashMap<Exps, BigRational> = HashMap::new();
    if reachable(&zero) {
        layer.insert(zero, BigRational::one());
    }
    while !layer.is_empty() {
        let mut next: HashMap<Exps, BigRational> = HashMap::new();
        for (e, c) in &layer {
            *result.entry(*e).or_insert_with(BigRational::zero) += c;
            for (f, rc, _) in &r {
                let g = add_exps(e, f);
                if reachable(&g) {
                    *next.entry(g).or_insert_with(BigRational::zero) += c * rc;
                }
            }
        }
        next.retain(|_, c| !c.is_zero());
        layer = next;
    }
    LaurentPoly::from_terms(result.into_iter().map(|(e, c)| (add_exps(&e, &neg_lead), c * &inv_lc)))
}

/// Iterated Laurent expansion of `r`, with the walk variables expanded in
/// `order` (outermost first; `t`, if present in the denominator, is always
/// outermost), truncated at `t^n` and exact on the window `w`.
pub fn expand_ratfunc(
    r: &RatFunc,
    order: &[Var],
    n: usize,
    w: Window,
) -> Result<TruncatedSeries, ExpansionError> {
    if w.is_empty() {
        return Err(ExpansionError::EmptyWindow);
    }
    let den = r.den();
    let num = r.num();
    let mut ord: Vec<usize> = Vec::new();
    if den.involves(Var::T) {
        ord.push(Var::T.index());
    }
    ord.extend(order.iter().map(|v| v.index()));
    for i in 0..NVARS {
        if !ord.contains(&i) && den.involves(Var::from_index(i)) {
            return Err(ExpansionError::NoExpansionDirection(Var::from_index(i).name()));
        }
    }
    let upper_of = |i: usize| -> i32 {
        if i == Var::T.index() {
            n as i32
        } else {
            w.hi[i]
        }
    };
    let inv = if den.is_monomial() {
        let (e, c) = den.single_term().expect("monomial");
        let mut ne = e;
        for x in ne.iter_mut() {
            *x = -*x;
        }
        LaurentPoly::monomial(ne, c.recip())
    } else {
        let nmin = num.min_exps();
        let key = |e: &Exps| -> Vec<i32> { ord.iter().map(|&i| e[i]).collect() };
        let lead = *den
            .terms()
            .min_by(|a, b| key(a.0).cmp(&key(b.0)))
            .expect("non-zero denominator")
            .0;
        let upper: Vec<i32> = ord
            .iter()
            .map(|&i| upper_of(i) + lead[i] - nmin[i])
            .collect();
        inverse_expansion(den, &ord, &upper)
    };
    let mut coeffs = vec![LaurentPoly::zero(); n + 1];
    let ti = Var::T.index();
    for (ea, ca) in num.terms() {
        for (eb, cb) in inv.terms() {
            let e = add_exps(ea, eb);
            let k = e[ti];
            if k < 0 || k as usize > n || !w.contains(&e) {
                continue;
            }
            let mut f = e;
            f[ti] = 0;
            coeffs[k as usize].add_term(f, ca * cb);
        }
    }
    Ok(TruncatedSeries { coeffs, window: w })
}
