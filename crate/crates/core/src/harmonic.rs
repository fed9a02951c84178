//! Discrete harmonic functions on the `d`-subsets of `{1..n}`.
//!
//! A function `f` on `E_d` is harmonic when the differentiation `gamma`
//! (sum over the `(d-1)`-subsets of each `d`-subset) kills it. Its
//! extension `f~(X)` sums `f` over the `d`-subsets of `X`.

use std::collections::BTreeMap;
use std::ops::{Add, Deref};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poly::{fmt_rational, parse_rational, Coeff};
use crate::subset::{self, Subset, MAX_N};

/// A rational-valued function on `d`-subsets. Zero values are not stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetFn {
    n: usize,
    d: usize,
    values: BTreeMap<Subset, Coeff>,
}

impl SubsetFn {
    pub fn zero(n: usize, d: usize) -> Result<Self> {
        if n > MAX_N {
            return Err(Error::Input(format!("n = {n} exceeds {MAX_N}")));
        }
        if d > n {
            return Err(Error::Input(format!("degree {d} exceeds n = {n}")));
        }
        Ok(SubsetFn { n, d, values: BTreeMap::new() })
    }

    pub fn from_values(n: usize, d: usize, values: impl IntoIterator<Item = (Subset, Coeff)>) -> Result<Self> {
        let mut f = Self::zero(n, d)?;
        for (z, v) in values {
            f.set(z, v)?;
        }
        Ok(f)
    }

    pub fn set(&mut self, z: Subset, v: Coeff) -> Result<()> {
        if subset::size(z) != self.d || z & !subset::full(self.n) != 0 {
            return Err(Error::Input(format!("{:?} is not a {}-subset of 1..={}", subset::to_list(z), self.d, self.n)));
        }
        if v.is_zero() {
            self.values.remove(&z);
        } else {
            self.values.insert(z, v);
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    pub fn get(&self, z: Subset) -> Coeff {
        self.values.get(&z).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = (Subset, &Coeff)> {
        self.values.iter().map(|(z, v)| (*z, v))
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// `gamma(f)(Y) = sum of f(Z) over d-sets Z containing Y`.
    pub fn gamma(&self) -> Result<SubsetFn> {
        if self.d == 0 {
            return Err(Error::DegreeZero);
        }
        let mut out = SubsetFn::zero(self.n, self.d - 1)?;
        let mut acc: BTreeMap<Subset, Coeff> = BTreeMap::new();
        for (z, v) in &self.values {
            let mut bits = *z;
            while bits != 0 {
                let b = bits & bits.wrapping_neg();
                *acc.entry(z & !b).or_insert_with(Coeff::zero) += v;
                bits &= bits - 1;
            }
        }
        for (y, v) in acc {
            out.set(y, v)?;
        }
        Ok(out)
    }

    pub fn is_harmonic(&self) -> bool {
        self.d == 0 || self.gamma().map(|g| g.is_zero()).unwrap_or(false)
    }

    /// `f~(X) = sum of f(Z) over d-sets Z inside X`.
    pub fn tilde(&self, x: Subset) -> Coeff {
        let mut acc = Coeff::zero();
        for (z, v) in &self.values {
            if z & !x == 0 {
                acc += v;
            }
        }
        acc
    }

    /// `f~` on all `2^n` subsets, indexed by mask (subset-sum transform).
    pub fn tilde_table(&self) -> Vec<Coeff> {
        let size = 1usize << self.n;
        let mut t = vec![Coeff::zero(); size];
        for (z, v) in &self.values {
            t[*z as usize] = v.clone();
        }
        for i in 0..self.n {
            let bit = 1usize << i;
            for x in 0..size {
                if x & bit != 0 {
                    let lower = t[x ^ bit].clone();
                    if !lower.is_zero() {
                        t[x] += lower;
                    }
                }
            }
        }
        t
    }

    /// `f^(i)(J) = sum of f(Z) over d-sets Z meeting J in exactly i points`.
    pub fn level_sum(&self, j: Subset, i: usize) -> Coeff {
        let mut acc = Coeff::zero();
        for (z, v) in &self.values {
            if subset::size(z & j) == i {
                acc += v;
            }
        }
        acc
    }

    pub fn to_json(&self) -> HarmonicJson {
        let mut coeffs: Vec<(Vec<usize>, String)> =
            self.values.iter().map(|(z, v)| (subset::to_list(*z), fmt_rational(v))).collect();
        coeffs.sort();
        HarmonicJson {
            n: self.n,
            d: self.d,
            coeffs: coeffs.into_iter().map(|(subset, value)| CoeffJson { subset, value }).collect(),
        }
    }

    pub fn from_json(j: &HarmonicJson) -> Result<SubsetFn> {
        let mut f = SubsetFn::zero(j.n, j.d)?;
        for c in &j.coeffs {
            let z = subset::from_list(j.n, &c.subset)?;
            let v = parse_rational(&c.value)?;
            let prev = f.get(z);
            f.set(z, prev + v)?;
        }
        Ok(f)
    }
}

impl Add<&SubsetFn> for &SubsetFn {
    type Output = SubsetFn;
    fn add(self, rhs: &SubsetFn) -> SubsetFn {
        assert_eq!((self.n, self.d), (rhs.n, rhs.d), "adding functions of different shapes");
        let mut out = self.clone();
        for (z, v) in &rhs.values {
            let s = out.get(*z) + v;
            out.set(*z, s).expect("same shape");
        }
        out
    }
}

/// A [`SubsetFn`] known to lie in `Harm_d(n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HarmonicFunction(SubsetFn);

impl HarmonicFunction {
    pub fn new(f: SubsetFn) -> Result<Self> {
        if f.d > 0 {
            if let Some((y, _)) = f.gamma()?.support().next() {
                return Err(Error::NotHarmonic(subset::to_list(y)));
            }
        }
        Ok(HarmonicFunction(f))
    }

    /// Skips the harmonicity check. Identities that depend on it may fail.
    pub fn new_unchecked(f: SubsetFn) -> Self {
        HarmonicFunction(f)
    }

    /// The degree-0 function `{} -> c`.
    pub fn constant(n: usize, c: Coeff) -> Result<Self> {
        Ok(HarmonicFunction(SubsetFn::from_values(n, 0, [(0, c)])?))
    }

    pub fn into_inner(self) -> SubsetFn {
        self.0
    }
}

impl Deref for HarmonicFunction {
    type Target = SubsetFn;
    fn deref(&self) -> &SubsetFn {
        &self.0
    }
}

impl Add<&HarmonicFunction> for &HarmonicFunction {
    type Output = HarmonicFunction;
    fn add(self, rhs: &HarmonicFunction) -> HarmonicFunction {
        HarmonicFunction(&self.0 + &rhs.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoeffJson {
    pub subset: Vec<usize>,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HarmonicJson {
    pub n: usize,
    pub d: usize,
    pub coeffs: Vec<CoeffJson>,
}

/// Basis of `Harm_d(n)` in reduced row echelon form, columns ordered by the
/// lexicographic order of `d`-subsets. Its size is `C(n,d) - C(n,d-1)` when
/// positive, and zero otherwise.
///
/// Eliminating `gamma` with its columns scanned right to left puts the
/// pivots on the rightmost possible columns; the free columns are then the
/// leftmost ones and the standard null-space vectors already form the
/// reduced echelon basis of the kernel.
pub fn harm_basis(n: usize, d: usize) -> Result<Vec<HarmonicFunction>> {
    if n > MAX_N || d > n {
        return Err(Error::Input(format!("need 0 <= d <= n <= {MAX_N}, got n = {n}, d = {d}")));
    }
    let cols = subset::k_subsets(n, d);
    if d == 0 {
        return Ok(vec![HarmonicFunction::constant(n, Coeff::one())?]);
    }
    let rows = subset::k_subsets(n, d - 1);
    let row_index: BTreeMap<Subset, usize> = rows.iter().enumerate().map(|(i, y)| (*y, i)).collect();

    // gamma as a sparse-built dense matrix; column order reversed.
    let ncols = cols.len();
    let mut m: Vec<Vec<Coeff>> = vec![vec![Coeff::zero(); ncols]; rows.len()];
    for (c, z) in cols.iter().enumerate() {
        let rc = ncols - 1 - c;
        let mut bits = *z;
        while bits != 0 {
            let b = bits & bits.wrapping_neg();
            m[row_index[&(z & !b)]][rc] = Coeff::one();
            bits &= bits - 1;
        }
    }
    let pivots = rref(&mut m);

    let mut is_pivot = vec![None; ncols];
    for (r, &pc) in pivots.iter().enumerate() {
        is_pivot[pc] = Some(r);
    }
    let mut basis = Vec::new();
    // Free columns, visited in original (left to right) order.
    for c in 0..ncols {
        let rc = ncols - 1 - c;
        if is_pivot[rc].is_some() {
            continue;
        }
        let mut f = SubsetFn::zero(n, d)?;
        f.set(cols[c], Coeff::one())?;
        for (r, &pc) in pivots.iter().enumerate() {
            let v = &m[r][rc];
            if !v.is_zero() {
                f.set(cols[ncols - 1 - pc], -v.clone())?;
            }
        }
        basis.push(HarmonicFunction(f));
    }
    Ok(basis)
}

/// In-place reduced row echelon form; returns the pivot column of each
/// nonzero row.
pub(crate) fn rref(m: &mut [Vec<Coeff>]) -> Vec<usize> {
    let nrows = m.len();
    let ncols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        if !inv.is_one() {
            for v in m[r].iter_mut().skip(c) {
                *v *= &inv;
            }
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !pv.is_zero() {
                    *v -= &factor * pv;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}
