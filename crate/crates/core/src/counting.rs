//! Dynamic-programming walk counting in `N^d` (optionally with one free axis).
//!
//! All engines share one pull recurrence: the slab for length `n` is a dense
//! box `[lo, n]^d` (`lo = 0` on confined axes, `-n` on a free axis) and each
//! cell sums the weighted cells of slab `n - 1` it can be reached from.

use std::io::Write;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::modp;
use crate::stepset::{QuadrantModel, QuadrantStep, StepSet};
use crate::symbolic::LaurentPoly;

/// Cells per slab below which the update runs sequentially.
const PAR_THRESHOLD: usize = 1 << 14;

pub const BINARY_MAGIC: &[u8; 8] = b"OCTWALK1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CountError {
    #[error("{0} is not an odd prime")]
    BadModulus(u64),
    #[error("dimension {0} not supported here")]
    BadDimension(usize),
    #[error("axis {0} out of range")]
    BadAxis(usize),
    #[error("steps on the free axis are not of the form U + V(z + 1/z)")]
    NotReflectable,
    #[error("binary export needs a modular table")]
    NotModular,
    #[error("empty step set")]
    EmptyStepSet,
    #[error("i/o: {0}")]
    Io(String),
}

/// Arithmetic used by the recurrence.
pub trait CountRing: Sync {
    type Elem: Clone + Send + Sync;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add_assign(&self, acc: &mut Self::Elem, b: &Self::Elem);
    /// `acc += w * x`
    fn fma(&self, acc: &mut Self::Elem, w: &Self::Elem, x: &Self::Elem);
}

pub struct Integers;

impl CountRing for Integers {
    type Elem = BigInt;
    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn add_assign(&self, acc: &mut BigInt, b: &BigInt) {
        *acc += b;
    }
    fn fma(&self, acc: &mut BigInt, w: &BigInt, x: &BigInt) {
        if x.is_zero() {
            return;
        }
        if w.is_one() {
            *acc += x;
        } else {
            *acc += w * x;
        }
    }
}

pub struct Residues(pub u64);

impl CountRing for Residues {
    type Elem = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add_assign(&self, acc: &mut u64, b: &u64) {
        *acc = modp::add(*acc, *b, self.0);
    }
    fn fma(&self, acc: &mut u64, w: &u64, x: &u64) {
        *acc = modp::add(*acc, modp::mul(*w, *x, self.0), self.0);
    }
}

/// Laurent polynomials in auxiliary variables, for formal step weights.
pub struct Polynomials;

impl CountRing for Polynomials {
    type Elem = LaurentPoly;
    fn zero(&self) -> LaurentPoly {
        LaurentPoly::zero()
    }
    fn one(&self) -> LaurentPoly {
        LaurentPoly::one()
    }
    fn is_zero(&self, a: &LaurentPoly) -> bool {
        a.is_zero()
    }
    fn add_assign(&self, acc: &mut LaurentPoly, b: &LaurentPoly) {
        *acc += b;
    }
    fn fma(&self, acc: &mut LaurentPoly, w: &LaurentPoly, x: &LaurentPoly) {
        if !x.is_zero() {
            *acc += &(w * x);
        }
    }
}

/// Counts of walks of one length `n`, on the box `[lo_a, n]` per axis.
#[derive(Clone, Debug)]
pub struct Slab<E> {
    pub n: usize,
    pub lo: Vec<i64>,
    side: Vec<usize>,
    pub data: Vec<E>,
}

impl<E> Slab<E> {
    fn index(&self, e: &[i64]) -> Option<usize> {
        let mut idx = 0usize;
        for a in 0..self.lo.len() {
            let c = e[a] - self.lo[a];
            if c < 0 || c as usize >= self.side[a] {
                return None;
            }
            idx = idx * self.side[a] + c as usize;
        }
        Some(idx)
    }

    pub fn get(&self, e: &[i64]) -> Option<&E> {
        self.index(e).map(|i| &self.data[i])
    }

    fn coords_of(&self, mut idx: usize) -> Vec<i64> {
        let d = self.lo.len();
        let mut e = vec![0; d];
        for a in (0..d).rev() {
            e[a] = self.lo[a] + (idx % self.side[a]) as i64;
            idx /= self.side[a];
        }
        e
    }

    /// `(endpoint, value)` pairs in index order.
    pub fn cells(&self) -> impl Iterator<Item = (Vec<i64>, &E)> {
        self.data.iter().enumerate().map(|(i, v)| (self.coords_of(i), v))
    }
}

/// A weighted step for the generic engine.
#[derive(Clone, Debug)]
pub struct WeightedStep<E> {
    pub delta: Vec<i8>,
    pub weight: E,
}

/// Result of a run: retained slabs plus the `2^d` specializations.
#[derive(Clone, Debug)]
pub struct Table<E> {
    pub dim: usize,
    pub n_max: usize,
    pub free_axis: Option<usize>,
    /// Either every slab `0..=n_max`, or only the last one.
    pub slabs: Vec<Slab<E>>,
    pub full: bool,
    /// `series[mask][n]`: sum over endpoints with coordinate 0 on every axis
    /// whose bit in `mask` is clear (the variable set to 0) and any value on
    /// axes whose bit is set (the variable set to 1).
    pub series: Vec<Vec<E>>,
}

impl<E: Clone> Table<E> {
    pub fn slab(&self, n: usize) -> Option<&Slab<E>> {
        if self.full {
            self.slabs.get(n)
        } else {
            self.slabs.last().filter(|s| s.n == n)
        }
    }

    pub fn get(&self, n: usize, e: &[i64]) -> Option<&E> {
        self.slab(n)?.get(e)
    }

    /// The series with each walk variable set to 0 or 1 (`point[a]` true
    /// means 1).
    pub fn specialization(&self, point: &[bool]) -> &[E] {
        let mut mask = 0;
        for (a, &b) in point.iter().enumerate() {
            if b {
                mask |= 1 << a;
            }
        }
        &self.series[mask]
    }
}

fn new_slab<R: CountRing>(ring: &R, n: usize, dim: usize, free: Option<usize>) -> Slab<R::Elem> {
    let lo: Vec<i64> = (0..dim)
        .map(|a| if Some(a) == free { -(n as i64) } else { 0 })
        .collect();
    let side: Vec<usize> = lo.iter().map(|&l| (n as i64 - l + 1) as usize).collect();
    let size = side.iter().product();
    Slab {
        n,
        lo,
        side,
        data: vec![ring.zero(); size],
    }
}

fn step_slab<R: CountRing>(
    ring: &R,
    prev: &Slab<R::Elem>,
    steps: &[WeightedStep<R::Elem>],
    free: Option<usize>,
) -> Slab<R::Elem> {
    let dim = prev.lo.len();
    let mut next = new_slab(ring, prev.n + 1, dim, free);
    let inner: usize = next.side[1..].iter().product();
    let lo = next.lo.clone();
    let side = next.side.clone();
    let fill = |(c0, chunk): (usize, &mut [R::Elem])| {
        let mut e = vec![0i64; dim];
        let mut src = vec![0i64; dim];
        e[0] = lo[0] + c0 as i64;
        for (off, cell) in chunk.iter_mut().enumerate() {
            let mut r = off;
            for a in (1..dim).rev() {
                e[a] = lo[a] + (r % side[a]) as i64;
                r /= side[a];
            }
            for st in steps {
                for a in 0..dim {
                    src[a] = e[a] - st.delta[a] as i64;
                }
                if let Some(v) = prev.get(&src) {
                    ring.fma(cell, &st.weight, v);
                }
            }
        }
    };
    if next.data.len() >= PAR_THRESHOLD {
        next.data.par_chunks_mut(inner).enumerate().for_each(fill);
    } else {
        next.data.chunks_mut(inner).enumerate().for_each(fill);
    }
    next
}

fn accumulate_series<R: CountRing>(ring: &R, slab: &Slab<R::Elem>, series: &mut [Vec<R::Elem>]) {
    let dim = slab.lo.len();
    let full = (1usize << dim) - 1;
    let mut acc = vec![ring.zero(); 1 << dim];
    for (i, v) in slab.data.iter().enumerate() {
        if ring.is_zero(v) {
            continue;
        }
        let e = slab.coords_of(i);
        let nz = (0..dim).filter(|&a| e[a] != 0).fold(0usize, |m, a| m | 1 << a);
        // every superset of the non-zero axes
        let mut m = nz;
        loop {
            ring.add_assign(&mut acc[m], v);
            if m == full {
                break;
            }
            m = (m + 1) | nz;
        }
    }
    for (s, a) in series.iter_mut().zip(acc) {
        s.push(a);
    }
}

/// Dense octant slab of length `n` from data in index order.
pub(crate) fn slab_from_octant_data(n: usize, data: Vec<BigInt>) -> Slab<BigInt> {
    let mut s = new_slab(&Integers, n, 3, None);
    assert_eq!(s.data.len(), data.len());
    s.data = data;
    s
}

pub(crate) fn push_series(slab: &Slab<BigInt>, series: &mut [Vec<BigInt>]) {
    accumulate_series(&Integers, slab, series);
}

/// Runs the recurrence to length `n_max`.
pub fn run<R: CountRing>(
    ring: &R,
    dim: usize,
    steps: &[WeightedStep<R::Elem>],
    free: Option<usize>,
    n_max: usize,
    keep_full: bool,
) -> Table<R::Elem> {
    let mut slab = new_slab(ring, 0, dim, free);
    slab.data[0] = ring.one();
    let mut series = vec![Vec::with_capacity(n_max + 1); 1 << dim];
    accumulate_series(ring, &slab, &mut series);
    let mut slabs = Vec::new();
    for _ in 0..n_max {
        let next = step_slab(ring, &slab, steps, free);
        accumulate_series(ring, &next, &mut series);
        if keep_full {
            slabs.push(std::mem::replace(&mut slab, next));
        } else {
            slab = next;
        }
    }
    slabs.push(slab);
    Table {
        dim,
        n_max,
        free_axis: free,
        slabs,
        full: keep_full,
        series,
    }
}

/// Exact integers or residues modulo a prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    Exact,
    Modular(u64),
}

impl Mode {
    pub fn check(self) -> Result<Mode, CountError> {
        match self {
            Mode::Modular(p) if p == 2 || !modp::is_prime(p) => Err(CountError::BadModulus(p)),
            m => Ok(m),
        }
    }

    pub fn label(self) -> String {
        match self {
            Mode::Exact => "exact".into(),
            Mode::Modular(p) => format!("mod {p}"),
        }
    }
}

#[derive(Clone, Debug)]
pub enum TableData {
    Exact(Table<BigInt>),
    Modular(Table<u64>),
}

/// Counts `c(endpoint; n)` for a model, exact or modular.
#[derive(Clone, Debug)]
pub struct CountTable {
    pub model: String,
    pub mode: Mode,
    pub data: TableData,
}

impl CountTable {
    pub fn dim(&self) -> usize {
        match &self.data {
            TableData::Exact(t) => t.dim,
            TableData::Modular(t) => t.dim,
        }
    }

    pub fn n_max(&self) -> usize {
        match &self.data {
            TableData::Exact(t) => t.n_max,
            TableData::Modular(t) => t.n_max,
        }
    }

    /// The count (a residue in modular mode); zero outside the box, `None`
    /// if the slab was not retained.
    pub fn get(&self, n: usize, e: &[i64]) -> Option<BigInt> {
        match &self.data {
            TableData::Exact(t) => {
                let s = t.slab(n)?;
                Some(s.get(e).cloned().unwrap_or_default())
            }
            TableData::Modular(t) => {
                let s = t.slab(n)?;
                Some(BigInt::from(s.get(e).copied().unwrap_or(0)))
            }
        }
    }

    /// Specialization at a point of `{0,1}^d`, as integers (residues in
    /// modular mode).
    pub fn specialization(&self, point: &[bool]) -> Vec<BigInt> {
        match &self.data {
            TableData::Exact(t) => t.specialization(point).to_vec(),
            TableData::Modular(t) => t.specialization(point).iter().map(|&v| BigInt::from(v)).collect(),
        }
    }

    pub fn exact(&self) -> Option<&Table<BigInt>> {
        match &self.data {
            TableData::Exact(t) => Some(t),
            TableData::Modular(_) => None,
        }
    }

    pub fn modular(&self) -> Option<&Table<u64>> {
        match &self.data {
            TableData::Modular(t) => Some(t),
            TableData::Exact(_) => None,
        }
    }

    /// All `2^d` specializations, labelled by their point (e.g. `"101"`).
    pub fn export(&self) -> SeriesExport {
        let d = self.dim();
        let series = (0..1usize << d)
            .map(|mask| {
                let point: Vec<bool> = (0..d).map(|a| mask >> a & 1 == 1).collect();
                let label: String = point.iter().map(|&b| if b { '1' } else { '0' }).collect();
                let vals = self.specialization(&point).iter().map(|v| v.to_string()).collect();
                (label, vals)
            })
            .collect();
        SeriesExport {
            model: self.model.clone(),
            n: self.n_max(),
            mode: self.mode.label(),
            series,
        }
    }

    /// Writes all retained slabs in the binary layout: the 8-byte magic, then
    /// little-endian `u32` dimension, `u32` N, `u64` prime, `u8` free axis
    /// (255 for none), `u8` full flag, then for each retained slab its `u32`
    /// length and `(side)^d` little-endian `u64` residues, last axis fastest.
    pub fn write_binary<W: Write>(&self, mut w: W) -> Result<(), CountError> {
        let (TableData::Modular(t), Mode::Modular(p)) = (&self.data, self.mode) else {
            return Err(CountError::NotModular);
        };
        let io = |e: std::io::Error| CountError::Io(e.to_string());
        w.write_all(BINARY_MAGIC).map_err(io)?;
        w.write_all(&(t.dim as u32).to_le_bytes()).map_err(io)?;
        w.write_all(&(t.n_max as u32).to_le_bytes()).map_err(io)?;
        w.write_all(&p.to_le_bytes()).map_err(io)?;
        w.write_all(&[t.free_axis.map_or(255, |a| a as u8), t.full as u8]).map_err(io)?;
        for s in &t.slabs {
            w.write_all(&(s.n as u32).to_le_bytes()).map_err(io)?;
            for v in &s.data {
                w.write_all(&v.to_le_bytes()).map_err(io)?;
            }
        }
        Ok(())
    }
}

/// Serialized form of the specializations of a table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesExport {
    pub model: String,
    pub n: usize,
    pub mode: String,
    pub series: Vec<(String, Vec<String>)>,
}

fn int_steps(steps: &[(Vec<i8>, u64)]) -> Vec<WeightedStep<BigInt>> {
    steps
        .iter()
        .map(|(d, w)| WeightedStep {
            delta: d.clone(),
            weight: BigInt::from(*w),
        })
        .collect()
}

fn mod_steps(steps: &[(Vec<i8>, u64)], p: u64) -> Vec<WeightedStep<u64>> {
    steps
        .iter()
        .map(|(d, w)| WeightedStep {
            delta: d.clone(),
            weight: w % p,
        })
        .collect()
}

fn count_generic(
    model: String,
    dim: usize,
    steps: &[(Vec<i8>, u64)],
    free: Option<usize>,
    n: usize,
    mode: Mode,
    keep_full: bool,
) -> Result<CountTable, CountError> {
    let mode = mode.check()?;
    let data = match mode {
        Mode::Exact => TableData::Exact(run(&Integers, dim, &int_steps(steps), free, n, keep_full)),
        Mode::Modular(p) => TableData::Modular(run(&Residues(p), dim, &mod_steps(steps, p), free, n, keep_full)),
    };
    Ok(CountTable { model, mode, data })
}

fn octant_steps(s: StepSet) -> Vec<(Vec<i8>, u64)> {
    s.iter().map(|st| (st.coords().to_vec(), 1)).collect()
}

fn quadrant_steps(m: &QuadrantModel) -> Vec<(Vec<i8>, u64)> {
    m.steps().iter().map(|(st, w)| (vec![st.i, st.j], *w as u64)).collect()
}

/// Full table `o(i,j,k;n)` for `n <= n_max`.
pub fn count_octant(s: StepSet, n_max: usize, mode: Mode) -> Result<CountTable, CountError> {
    count_generic(s.to_string(), 3, &octant_steps(s), None, n_max, mode, true)
}

/// Only the eight specializations (memory stays at two slabs).
pub fn octant_series(s: StepSet, n_max: usize, mode: Mode) -> Result<CountTable, CountError> {
    count_generic(s.to_string(), 3, &octant_steps(s), None, n_max, mode, false)
}

/// Full table `q(i,j;n)`, each step counted with its multiplicity.
pub fn count_quadrant(m: &QuadrantModel, n_max: usize, mode: Mode) -> Result<CountTable, CountError> {
    count_generic(m.to_string(), 2, &quadrant_steps(m), None, n_max, mode, true)
}

/// Quadrant counting with formal step weights.
pub fn count_quadrant_weighted(steps: &[(QuadrantStep, LaurentPoly)], n_max: usize) -> Table<LaurentPoly> {
    let ws: Vec<WeightedStep<LaurentPoly>> = steps
        .iter()
        .map(|(s, w)| WeightedStep {
            delta: vec![s.i, s.j],
            weight: w.clone(),
        })
        .collect();
    run(&Polynomials, 2, &ws, None, n_max, true)
}

/// Walks confined to the octant except along `free_axis`, tracked over `[-n, n]`.
pub fn count_mixed(s: StepSet, free_axis: usize, n_max: usize, mode: Mode) -> Result<CountTable, CountError> {
    if free_axis > 2 {
        return Err(CountError::BadAxis(free_axis));
    }
    count_generic(s.to_string(), 3, &octant_steps(s), Some(free_axis), n_max, mode, true)
}

/// True when the steps moving along `axis` come in mirror pairs, i.e. the
/// model is `U + V (w + 1/w)` in the variable `w` of that axis.
pub fn is_reflectable(s: StepSet, axis: usize) -> bool {
    s.iter().all(|st| {
        let mut c = st.coords();
        if c[axis] == 0 {
            return true;
        }
        c[axis] = -c[axis];
        crate::stepset::Step::from_coords(c).is_some_and(|m| s.contains(m))
    })
}

/// Octant counts from a mixed table by the reflection principle:
/// `o(e; n) = q(e; n) - q(e + 2 u; n)` with `u` the unit vector of the free axis.
pub fn reflection_combine(s: StepSet, mixed: &CountTable) -> Result<CountTable, CountError> {
    let axis = match &mixed.data {
        TableData::Exact(t) => t.free_axis,
        TableData::Modular(t) => t.free_axis,
    }
    .ok_or(CountError::NotReflectable)?;
    if !is_reflectable(s, axis) {
        return Err(CountError::NotReflectable);
    }
    fn combine<R: CountRing>(
        ring: &R,
        t: &Table<R::Elem>,
        axis: usize,
        neg: impl Fn(&R::Elem) -> R::Elem,
    ) -> Table<R::Elem> {
        let mut slabs = Vec::new();
        let mut series = vec![Vec::new(); 1 << t.dim];
        for q in &t.slabs {
            let mut o = new_slab(ring, q.n, t.dim, None);
            for i in 0..o.data.len() {
                let e = o.coords_of(i);
                let mut v = q.get(&e).cloned().unwrap_or_else(|| ring.zero());
                let mut e2 = e.clone();
                e2[axis] += 2;
                if let Some(w) = q.get(&e2) {
                    ring.add_assign(&mut v, &neg(w));
                }
                o.data[i] = v;
            }
            accumulate_series(ring, &o, &mut series);
            slabs.push(o);
        }
        Table {
            dim: t.dim,
            n_max: t.n_max,
            free_axis: None,
            slabs,
            full: t.full,
            series,
        }
    }
    let data = match &mixed.data {
        TableData::Exact(t) => TableData::Exact(combine(&Integers, t, axis, |w| -w)),
        TableData::Modular(t) => {
            let Mode::Modular(p) = mixed.mode else { unreachable!() };
            TableData::Modular(combine(&Residues(p), t, axis, |w| modp::neg(*w, p)))
        }
    };
    Ok(CountTable {
        model: mixed.model.clone(),
        mode: mixed.mode,
        data,
    })
}

/// Coloured walks in `N^d` with steps in `U ∪ V`: `c(e; n, k)` with `k` the
/// number of black steps. Steps of `U \ V` are white, of `V \ U` black, and
/// shared steps may take either colour.
#[derive(Clone, Debug)]
pub struct ColouredCountTable {
    pub d: usize,
    pub u: Vec<Vec<i8>>,
    pub v: Vec<Vec<i8>>,
    /// Exact table in dimension `d + 1`, the last axis holding `k`.
    pub table: Table<BigInt>,
}

impl ColouredCountTable {
    pub fn get(&self, e: &[i64], n: usize, k: usize) -> BigInt {
        let mut c = e.to_vec();
        c.push(k as i64);
        self.table.get(n, &c).cloned().unwrap_or_default()
    }

    pub fn n_max(&self) -> usize {
        self.table.n_max
    }
}

/// Coloured `(U, V)`-walks in dimension `d` (1 or 2); steps are `d`-tuples.
pub fn count_coloured(u: &[Vec<i8>], v: &[Vec<i8>], d: usize, n_max: usize) -> Result<ColouredCountTable, CountError> {
    if !(1..=2).contains(&d) {
        return Err(CountError::BadDimension(d));
    }
    if u.is_empty() && v.is_empty() {
        return Err(CountError::EmptyStepSet);
    }
    if u.iter().chain(v).any(|s| s.len() != d) {
        return Err(CountError::BadDimension(d));
    }
    let mut steps = Vec::new();
    for s in u {
        let mut c = s.clone();
        c.push(0);
        steps.push((c, 1));
    }
    for s in v {
        let mut c = s.clone();
        c.push(1);
        steps.push((c, 1));
    }
    let table = run(&Integers, d + 1, &int_steps(&steps), None, n_max, true);
    Ok(ColouredCountTable {
        d,
        u: u.to_vec(),
        v: v.to_vec(),
        table,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stepset::parse_model;
    use proptest::prelude::*;

    /// Walk enumeration oracle: all walks of length `n` staying in `N^d`.
    fn brute(steps: &[(Vec<i8>, u64)], n: usize) -> std::collections::HashMap<Vec<i64>, u64> {
        let d = steps[0].0.len();
        let mut out = std::collections::HashMap::new();
        fn rec(
            steps: &[(Vec<i8>, u64)],
            pos: &mut Vec<i64>,
            left: usize,
            w: u64,
            out: &mut std::collections::HashMap<Vec<i64>, u64>,
        ) {
            if left == 0 {
                *out.entry(pos.clone()).or_insert(0) += w;
                return;
            }
            for (s, m) in steps {
                for a in 0..pos.len() {
                    pos[a] += s[a] as i64;
                }
                if pos.iter().all(|&c| c >= 0) {
                    rec(steps, pos, left - 1, w * m, out);
                }
                for a in 0..pos.len() {
                    pos[a] -= s[a] as i64;
                }
            }
        }
        rec(steps, &mut vec![0; d], n, 1, &mut out);
        out
    }

    const EX43: &str = "---;--+;-+0;+00";
    const EX44: &str = "-0-;-++;0-+;+0-;+++";

    #[test]
    fn first_example_return_count() {
        let s = parse_model(EX43).unwrap();
        let t = count_octant(s, 8, Mode::Exact).unwrap();
        assert_eq!(t.get(0, &[0, 0, 0]), Some(BigInt::one()));
        assert_eq!(t.get(8, &[0, 0, 0]), Some(BigInt::from(28)));
        let oracle = brute(&octant_steps(s), 8);
        assert_eq!(oracle[&vec![0, 0, 0]], 28);
    }

    #[test]
    fn second_example_period() {
        let t = count_octant(parse_model(EX44).unwrap(), 24, Mode::Exact).unwrap();
        for n in 1..=24 {
            let v = t.get(n, &[0, 0, 0]).unwrap();
            assert_eq!(v.is_zero(), n % 8 != 0, "n = {n}");
        }
    }

    #[test]
    fn quadrant_examples() {
        let s0 = QuadrantModel::parse("--;-0*2;-+;+0;+-").unwrap();
        let t = count_quadrant(&s0, 2, Mode::Exact).unwrap();
        assert_eq!(t.get(2, &[0, 0]), Some(BigInt::from(2)));
        let s1bar = QuadrantModel::parse("--;-0;+-;+0*2;++").unwrap();
        let t = count_quadrant(&s1bar, 4, Mode::Exact).unwrap();
        assert_eq!(t.get(2, &[0, 0]), Some(BigInt::from(3)));
        assert_eq!(t.get(4, &[0, 0]), Some(BigInt::from(26)));
        // no step increases i + j by more than 1 in S0
        let t = count_quadrant(&s0, 6, Mode::Exact).unwrap();
        for (e, v) in t.exact().unwrap().slab(6).unwrap().cells() {
            if e[0] + e[1] > 6 {
                assert!(v.is_zero());
            }
        }
    }

    #[test]
    fn specializations_match_sums() {
        let s = parse_model(EX44).unwrap();
        let t = count_octant(s, 10, Mode::Exact).unwrap();
        let tab = t.exact().unwrap();
        for n in 0..=10 {
            let slab = tab.slab(n).unwrap();
            for mask in 0..8usize {
                let want: BigInt = slab
                    .cells()
                    .filter(|(e, _)| (0..3).all(|a| mask >> a & 1 == 1 || e[a] == 0))
                    .map(|(_, v)| v.clone())
                    .sum();
                assert_eq!(tab.series[mask][n], want);
            }
        }
        let s = octant_series(s, 10, Mode::Exact).unwrap();
        assert_eq!(s.specialization(&[true, true, true]), t.specialization(&[true, true, true]));
    }

    #[test]
    fn modulus_checked() {
        let s = parse_model(EX43).unwrap();
        assert!(count_octant(s, 2, Mode::Modular(2)).is_err());
        assert!(count_octant(s, 2, Mode::Modular(15)).is_err());
        assert!(count_octant(s, 2, Mode::Modular(101)).is_ok());
    }

    #[test]
    fn coloured_trivial() {
        let c = count_coloured(&[vec![1], vec![-1]], &[], 1, 4).unwrap();
        assert_eq!(c.get(&[0], 2, 0), BigInt::one());
        for n in 0..=4 {
            for k in 1..=n {
                for i in 0..=n as i64 {
                    assert!(c.get(&[i], n, k).is_zero());
                }
            }
        }
    }

    #[test]
    fn coloured_matches_weighted_walks() {
        // U = {1}, V = {-1, 0, 1}: weight 1 + v on the shared step
        let c = count_coloured(&[vec![1]], &[vec![-1], vec![0], vec![1]], 1, 10).unwrap();
        let z = LaurentPoly::var(crate::symbolic::Var::V);
        let one = LaurentPoly::one();
        let steps = vec![
            WeightedStep { delta: vec![1], weight: &one + &z },
            WeightedStep { delta: vec![-1], weight: z.clone() },
            WeightedStep { delta: vec![0], weight: z.clone() },
        ];
        let w = run(&Polynomials, 1, &steps, None, 10, true);
        for n in 0..=10 {
            for i in 0..=n as i64 {
                let p = w.get(n, &[i]).unwrap();
                for k in 0..=n {
                    let coeff = p.coeff(&[0, 0, 0, 0, k as i32]);
                    assert_eq!(coeff.to_integer(), c.get(&[i], n, k));
                }
            }
        }
    }

    #[test]
    fn mixed_without_negative_free_steps_is_octant() {
        let s = parse_model("+00;0+0;00+;-++").unwrap();
        let m = count_mixed(s, 2, 8, Mode::Exact).unwrap();
        let o = count_octant(s, 8, Mode::Exact).unwrap();
        for n in 0..=8 {
            for (e, v) in o.exact().unwrap().slab(n).unwrap().cells() {
                assert_eq!(&m.get(n, &e).unwrap(), v);
            }
        }
    }

    #[test]
    fn reflection_on_hadamard_example() {
        // x + xy + (xbar + xbar ybar)(z + zbar)
        let s = parse_model("+00;++0;-0+;-0-;--+;---").unwrap();
        let m = count_mixed(s, 2, 12, Mode::Exact).unwrap();
        let r = reflection_combine(s, &m).unwrap();
        let o = count_octant(s, 12, Mode::Exact).unwrap();
        for n in 0..=12 {
            for (e, v) in o.exact().unwrap().slab(n).unwrap().cells() {
                assert_eq!(&r.get(n, &e).unwrap(), v);
            }
        }
        let bad = parse_model("+00;-0+;00-").unwrap();
        let m = count_mixed(bad, 2, 3, Mode::Exact).unwrap();
        assert_eq!(reflection_combine(bad, &m).unwrap_err(), CountError::NotReflectable);
    }

    #[test]
    fn weighted_quadrant_lifts_octant_model() {
        use crate::symbolic::{walk_poly, Var};
        // {0-0, 10+, -1-, -10, -1+}: weights 1, z, 1/z + 1 + z
        let s = parse_model("0-0;+0+;-+-;-+0;-++").unwrap();
        let zw = walk_poly(&[(1, [0, 0, -1]), (1, [0, 0, 0]), (1, [0, 0, 1])]);
        let steps = vec![
            (QuadrantStep::new(0, -1).unwrap(), LaurentPoly::one()),
            (QuadrantStep::new(1, 0).unwrap(), LaurentPoly::var(Var::Z)),
            (QuadrantStep::new(-1, 1).unwrap(), zw),
        ];
        let w = count_quadrant_weighted(&steps, 12);
        let o = count_octant(s, 12, Mode::Exact).unwrap();
        for n in 0..=12 {
            for (e, v) in o.exact().unwrap().slab(n).unwrap().cells() {
                let p = w.get(n, &e[..2]).unwrap();
                let c = p.coeff(&[0, 0, e[2] as i32, 0, 0]);
                assert_eq!(c.to_integer(), *v);
            }
        }
    }

    #[test]
    fn binary_export_layout() {
        let s = parse_model(EX43).unwrap();
        let t = count_octant(s, 3, Mode::Modular(101)).unwrap();
        let mut buf = Vec::new();
        t.write_binary(&mut buf).unwrap();
        assert_eq!(&buf[..8], BINARY_MAGIC);
        let cells: usize = (0..=3).map(|n| (n + 1usize).pow(3)).sum();
        assert_eq!(buf.len(), 8 + 4 + 4 + 8 + 2 + 4 * 4 + 8 * cells);
        let e = count_octant(s, 3, Mode::Exact).unwrap();
        assert_eq!(e.write_binary(Vec::new()).unwrap_err(), CountError::NotModular);
        let json = serde_json::to_string(&t.export()).unwrap();
        let back: SeriesExport = serde_json::from_str(&json).unwrap();
        assert_eq!(back.series.len(), 8);
    }

    fn arb_steps() -> impl Strategy<Value = StepSet> {
        (1u32..(1 << 26)).prop_filter_map("size", |m| {
            let s = StepSet::from_mask(m)?;
            (s.len() <= 5).then_some(s)
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn dp_matches_enumeration(s in arb_steps()) {
            let t = count_octant(s, 5, Mode::Exact).unwrap();
            let oracle = brute(&octant_steps(s), 5);
            let slab = t.exact().unwrap().slab(5).unwrap();
            let mut total = BigInt::zero();
            for (e, v) in slab.cells() {
                prop_assert_eq!(v.clone(), BigInt::from(*oracle.get(&e).unwrap_or(&0)));
                total += v;
            }
            prop_assert!(total <= BigInt::from(s.len()).pow(5));
        }

        #[test]
        fn exact_and_modular_agree(s in arb_steps()) {
            let p = 1_000_003;
            let e = count_octant(s, 12, Mode::Exact).unwrap();
            let m = count_octant(s, 12, Mode::Modular(p)).unwrap();
            for n in 0..=12 {
                for (c, v) in e.exact().unwrap().slab(n).unwrap().cells() {
                    prop_assert_eq!(modp::from_bigint(v, p), m.modular().unwrap().get(n, &c).copied().unwrap());
                }
            }
        }
    }
}
