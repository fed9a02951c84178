//! Exact arithmetic in `Q(zeta_24)`, the 2x2 matrix groups generated by
//! `S_{m,q}` and a scalar root of unity, Molien series for their relative
//! invariants, and the action of the generators on a `Z` polynomial.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::poly::{fmt_rational, int, Coeff, ExpPoly};

/// Largest group the closure will build.
pub const GROUP_CAP: usize = 100_000;

/// Degree of `Phi_24`.
const DIM: usize = 8;

/// An element of `Q(zeta_24)` in the basis `zeta^0 .. zeta^7`, reduced by
/// `zeta^8 = zeta^4 - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cyclotomic([Coeff; DIM]);

impl Cyclotomic {
    pub fn zero() -> Self {
        Cyclotomic(std::array::from_fn(|_| Coeff::zero()))
    }

    pub fn one() -> Self {
        Self::rational(Coeff::one())
    }

    pub fn rational(c: Coeff) -> Self {
        let mut z = Self::zero();
        z.0[0] = c;
        z
    }

    /// `zeta_24^k` for any integer `k`.
    pub fn zeta(k: i64) -> Self {
        let k = k.rem_euclid(24) as usize;
        let mut v = vec![Coeff::zero(); 24];
        v[k] = Coeff::one();
        Self::reduce(v)
    }

    /// `omega_k = exp(2 pi i / k)` raised to `j`, for `k` dividing 24.
    pub fn omega(k: u32, j: i64) -> Result<Self> {
        if k == 0 || 24 % k != 0 {
            return Err(Error::Input(format!("omega_{k} is not in Q(zeta_24)")));
        }
        Ok(Self::zeta(j * (24 / k as i64)))
    }

    pub fn sqrt2() -> Self {
        Self::zeta(3) + Self::zeta(21)
    }

    pub fn sqrt3() -> Self {
        Self::zeta(2) + Self::zeta(22)
    }

    /// `sqrt(q^m)` for `q` in `{2, 3, 4}` or `m` even.
    pub fn sqrt_power(q: u64, m: u32) -> Result<Self> {
        let half = Self::rational(Coeff::from_integer(BigInt::from(q).pow(m / 2)));
        if m % 2 == 0 {
            return Ok(half);
        }
        let root = match q {
            2 => Self::sqrt2(),
            3 => Self::sqrt3(),
            4 => Self::rational(int(2)),
            _ => return Err(Error::Input(format!("sqrt({q}) is not handled in Q(zeta_24)"))),
        };
        Ok(&half * &root)
    }

    fn reduce(mut v: Vec<Coeff>) -> Self {
        for j in (DIM..v.len()).rev() {
            let c = std::mem::take(&mut v[j]);
            if c.is_zero() {
                continue;
            }
            v[j - 4] += &c;
            v[j - 8] -= &c;
        }
        Cyclotomic(std::array::from_fn(|i| v.get(i).cloned().unwrap_or_else(Coeff::zero)))
    }

    pub fn coords(&self) -> &[Coeff; DIM] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.0[1..].iter().all(Zero::is_zero)
    }

    pub fn as_rational(&self) -> Option<Coeff> {
        self.is_rational().then(|| self.0[0].clone())
    }

    /// Applies `zeta -> zeta^j` for `j` coprime to 24.
    pub fn galois(&self, j: i64) -> Self {
        let mut out = vec![Coeff::zero(); 24];
        for (i, c) in self.0.iter().enumerate() {
            if !c.is_zero() {
                out[(i as i64 * j).rem_euclid(24) as usize] += c;
            }
        }
        Self::reduce(out)
    }

    /// Complex conjugation.
    pub fn conj(&self) -> Self {
        self.galois(-1)
    }

    /// Inverse through the product of the nontrivial Galois conjugates.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut others = Self::one();
        for j in [5, 7, 11, 13, 17, 19, 23] {
            others = &others * &self.galois(j);
        }
        let norm = (self * &others).as_rational().expect("field norm is rational");
        Ok(others.scale(&norm.recip()))
    }

    pub fn scale(&self, c: &Coeff) -> Self {
        Cyclotomic(std::array::from_fn(|i| &self.0[i] * c))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// `j` with `self = omega_k^j`, if any.
    pub fn omega_exponent(&self, k: u32) -> Option<u32> {
        (0..k).find(|&j| Self::omega(k, j as i64).map(|w| &w == self).unwrap_or(false))
    }
}

impl fmt::Display for Cyclotomic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_rational() {
            return f.write_str(&fmt_rational(&q));
        }
        if let Some(j) = self.omega_exponent(24) {
            let g = j.gcd(&24);
            return write!(f, "omega{}^{}", 24 / g, j / g);
        }
        let mut parts = Vec::new();
        for (i, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            parts.push(match i {
                0 => fmt_rational(c),
                1 => format!("{}*z", fmt_rational(c)),
                _ => format!("{}*z^{i}", fmt_rational(c)),
            });
        }
        write!(f, "{} (z = zeta24)", parts.join(" + "))
    }
}

impl Add for Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: Cyclotomic) -> Cyclotomic {
        &self + &rhs
    }
}

impl Add<&Cyclotomic> for &Cyclotomic {
    type Output = Cyclotomic;
    fn add(self, rhs: &Cyclotomic) -> Cyclotomic {
        Cyclotomic(std::array::from_fn(|i| &self.0[i] + &rhs.0[i]))
    }
}

impl Sub<&Cyclotomic> for &Cyclotomic {
    type Output = Cyclotomic;
    fn sub(self, rhs: &Cyclotomic) -> Cyclotomic {
        Cyclotomic(std::array::from_fn(|i| &self.0[i] - &rhs.0[i]))
    }
}

impl Neg for &Cyclotomic {
    type Output = Cyclotomic;
    fn neg(self) -> Cyclotomic {
        Cyclotomic(std::array::from_fn(|i| -&self.0[i]))
    }
}

impl Mul<&Cyclotomic> for &Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: &Cyclotomic) -> Cyclotomic {
        let mut v = vec![Coeff::zero(); 2 * DIM - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.0.iter().enumerate() {
                if !b.is_zero() {
                    v[i + j] += a * b;
                }
            }
        }
        Cyclotomic::reduce(v)
    }
}

impl Mul for Cyclotomic {
    type Output = Cyclotomic;
    fn mul(self, rhs: Cyclotomic) -> Cyclotomic {
        &self * &rhs
    }
}

pub type Mat2 = [[Cyclotomic; 2]; 2];

pub fn identity() -> Mat2 {
    [[Cyclotomic::one(), Cyclotomic::zero()], [Cyclotomic::zero(), Cyclotomic::one()]]
}

pub fn mat_mul(a: &Mat2, b: &Mat2) -> Mat2 {
    std::array::from_fn(|i| std::array::from_fn(|j| &(&a[i][0] * &b[0][j]) + &(&a[i][1] * &b[1][j])))
}

pub fn trace(a: &Mat2) -> Cyclotomic {
    &a[0][0] + &a[1][1]
}

pub fn det(a: &Mat2) -> Cyclotomic {
    &(&a[0][0] * &a[1][1]) - &(&a[0][1] * &a[1][0])
}

/// `S_{m,q} = q^(-m/2) [[1, q^m - 1], [1, -1]]`.
pub fn s_matrix(m: u32, q: u64) -> Result<Mat2> {
    let inv = Cyclotomic::sqrt_power(q, m)?.inv()?;
    let qm = int(q as i64).pow(m as i32);
    let r = |c: Coeff| inv.scale(&c);
    Ok([[r(int(1)), r(qm - int(1))], [r(int(1)), r(int(-1))]])
}

pub fn scalar_matrix(c: Cyclotomic) -> Mat2 {
    [[c.clone(), Cyclotomic::zero()], [Cyclotomic::zero(), c]]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CodeType {
    I,
    II,
    III,
    IV,
}

impl CodeType {
    pub const ALL: [CodeType; 4] = [CodeType::I, CodeType::II, CodeType::III, CodeType::IV];

    /// Field order `q` in `S_{m,q}`.
    pub fn q(self) -> u64 {
        match self {
            CodeType::I | CodeType::II => 2,
            CodeType::III => 3,
            CodeType::IV => 4,
        }
    }

    /// Order `k` of the scalar generator `omega_k I`.
    pub fn scalar_order(self) -> u32 {
        match self {
            CodeType::I | CodeType::IV => 2,
            CodeType::II => 8,
            CodeType::III => 4,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            CodeType::I => "I",
            CodeType::II => "II",
            CodeType::III => "III",
            CodeType::IV => "IV",
        }
    }
}

impl FromStr for CodeType {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "I" | "1" => Ok(CodeType::I),
            "II" | "2" => Ok(CodeType::II),
            "III" | "3" => Ok(CodeType::III),
            "IV" | "4" => Ok(CodeType::IV),
            other => Err(Error::Input(format!("unknown code type {other:?}"))),
        }
    }
}

impl fmt::Display for CodeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone)]
pub struct Generator {
    pub name: String,
    pub matrix: Mat2,
    /// `Some(k)` for the scalar `omega_k I`, whose character value is
    /// `omega_k^(-d)`; `None` for `S`, with value `(-1)^(-d)`.
    pub scalar_order: Option<u32>,
}

impl Generator {
    /// Character value as an exponent of `zeta_24`.
    fn character_exponent(&self, d: i64) -> i64 {
        match self.scalar_order {
            Some(k) => (-(24 / k as i64) * d).rem_euclid(24),
            None => (12 * d).rem_euclid(24),
        }
    }
}

#[derive(Debug, Clone)]
pub struct GroupElement {
    pub matrix: Mat2,
    /// Generator indices whose product (left to right) gives `matrix`.
    pub word: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct MatrixGroup {
    pub label: String,
    pub generators: Vec<Generator>,
    pub elements: Vec<GroupElement>,
    /// Pairs of distinct words that produced the same matrix.
    pub collisions: Vec<(Vec<usize>, Vec<usize>)>,
}

impl MatrixGroup {
    /// Closure by breadth-first search from the identity.
    pub fn generate(label: impl Into<String>, generators: Vec<Generator>) -> Result<Self> {
        for g in &generators {
            if det(&g.matrix).is_zero() {
                return Err(Error::Input(format!("generator {} is singular", g.name)));
            }
        }
        let mut elements = vec![GroupElement { matrix: identity(), word: Vec::new() }];
        let mut index: HashMap<Mat2, usize> = HashMap::from([(identity(), 0)]);
        let mut collisions = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for (gi, g) in generators.iter().enumerate() {
                let product = mat_mul(&elements[i].matrix, &g.matrix);
                let mut word = elements[i].word.clone();
                word.push(gi);
                match index.get(&product) {
                    Some(&j) => collisions.push((word, elements[j].word.clone())),
                    None => {
                        if elements.len() >= GROUP_CAP {
                            return Err(Error::GroupTooLarge(GROUP_CAP));
                        }
                        index.insert(product.clone(), elements.len());
                        queue.push_back(elements.len());
                        elements.push(GroupElement { matrix: product, word });
                    }
                }
            }
        }
        Ok(MatrixGroup { label: label.into(), generators, elements, collisions })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    fn word_exponent(&self, word: &[usize], d: i64) -> i64 {
        word.iter().map(|&g| self.generators[g].character_exponent(d)).sum::<i64>().rem_euclid(24)
    }

    /// Character values (as `zeta_24` exponents) extended along words.
    /// Every recorded collision must agree.
    pub fn character(&self, d: i64) -> Result<Vec<i64>> {
        for (a, b) in &self.collisions {
            if self.word_exponent(a, d) != self.word_exponent(b, d) {
                return Err(Error::CharacterIllDefined(a.clone(), b.clone()));
            }
        }
        Ok(self.elements.iter().map(|e| self.word_exponent(&e.word, d)).collect())
    }

    pub fn is_closed(&self) -> bool {
        let set: HashMap<&Mat2, ()> = self.elements.iter().map(|e| (&e.matrix, ())).collect();
        self.elements.iter().all(|a| self.elements.iter().all(|b| set.contains_key(&mat_mul(&a.matrix, &b.matrix))))
    }
}

/// `G_m^X = < S_{m,q}, omega_k I >`.
pub fn build_group(ty: CodeType, m: u32) -> Result<MatrixGroup> {
    if m == 0 {
        return Err(Error::Input("m must be positive".into()));
    }
    let k = ty.scalar_order();
    let gens = vec![
        Generator { name: format!("S_{{{m},{}}}", ty.q()), matrix: s_matrix(m, ty.q())?, scalar_order: None },
        Generator {
            name: format!("omega{k}*I"),
            matrix: scalar_matrix(Cyclotomic::omega(k, 1)?),
            scalar_order: Some(k),
        },
    ];
    MatrixGroup::generate(format!("G_{m}^{ty}"), gens)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MolienResult {
    pub label: String,
    pub m: Option<u32>,
    pub d: i64,
    pub degree: usize,
    pub coefficients: Vec<BigInt>,
}

impl MolienResult {
    pub fn to_json(&self) -> Value {
        json!({
            "group": self.label,
            "m": self.m,
            "d": self.d,
            "K": self.degree,
            "coefficients": self.coefficients.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        })
    }
}

/// Power series of `1 / det(I - t g)` up to `t^k`.
fn inverse_det_series(g: &Mat2, k: usize) -> Vec<Cyclotomic> {
    let (tr, dt) = (trace(g), det(g));
    let mut c = Vec::with_capacity(k + 1);
    c.push(Cyclotomic::one());
    if k >= 1 {
        c.push(tr.clone());
    }
    for i in 2..=k {
        let next = &(&tr * &c[i - 1]) - &(&dt * &c[i - 2]);
        c.push(next);
    }
    c
}

/// `(1/|G|) sum conj(chi(g)) / det(I - t g)`, truncated at `t^k`.
pub fn molien_series(group: &MatrixGroup, d: i64, k: usize, m: Option<u32>) -> Result<MolienResult> {
    let chi = group.character(d)?;
    let per_element: Vec<Vec<Cyclotomic>> = group
        .elements
        .par_iter()
        .zip(chi.par_iter())
        .map(|(g, &e)| {
            let weight = Cyclotomic::zeta(-e);
            inverse_det_series(&g.matrix, k).iter().map(|c| &weight * c).collect()
        })
        .collect();
    let mut sum = vec![Cyclotomic::zero(); k + 1];
    for series in &per_element {
        for (acc, c) in sum.iter_mut().zip(series) {
            *acc = &*acc + c;
        }
    }
    let order = Coeff::from_integer(BigInt::from(group.order()));
    let mut coefficients = Vec::with_capacity(k + 1);
    for (degree, c) in sum.into_iter().enumerate() {
        let c = c.scale(&order.recip());
        let value = c.as_rational().filter(|q| q.is_integer() && !q.is_negative());
        match value {
            Some(q) => coefficients.push(q.to_integer()),
            None => return Err(Error::NonIntegerDimension { degree, value: c.to_string() }),
        }
    }
    Ok(MolienResult { label: group.label.clone(), m, d, degree: k, coefficients })
}

/// Expansion of `numerator / prod (1 - t^a)` up to `t^k`; the numerator is
/// given as `(degree, coefficient)` pairs.
pub fn hilbert_expansion(numerator: &[(usize, i64)], denominator: &[usize], k: usize) -> Vec<BigInt> {
    let mut s = vec![BigInt::zero(); k + 1];
    for &(deg, c) in numerator {
        if deg <= k {
            s[deg] += c;
        }
    }
    for &a in denominator {
        for i in a..=k {
            let prev = s[i - a].clone();
            s[i] += prev;
        }
    }
    s
}

/// Hilbert series read off the generator degrees of the relative invariant
/// rings, for the branches with an unambiguous reading: Type II with
/// `d = 0 (mod 8)` and every Type III residue.
pub fn expected_series(ty: CodeType, d: i64) -> Option<(Vec<(usize, i64)>, Vec<usize>)> {
    match (ty, d.rem_euclid(ty.scalar_order() as i64)) {
        (CodeType::II, 0) => Some((vec![(0, 1), (8, 3)], vec![8, 8])),
        (CodeType::III, 0) => Some((vec![(0, 1), (4, 1)], vec![4, 4])),
        (CodeType::III, 1) => Some((vec![(3, 2)], vec![4, 4])),
        (CodeType::III, 2) => Some((vec![(2, 2)], vec![4, 4])),
        (CodeType::III, 3) => Some((vec![(1, 1), (5, 1)], vec![4, 4])),
        _ => None,
    }
}

/// Bivariate homogeneous polynomial with cyclotomic coefficients, keyed by
/// `(deg_x, deg_y)`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CycloPoly(BTreeMap<(u32, u32), Cyclotomic>);

impl CycloPoly {
    /// Requires integer `x`, `y` exponents and no `lambda`.
    pub fn from_exp_poly(p: &ExpPoly) -> Result<Self> {
        let mut out = BTreeMap::new();
        for (m, c) in p.terms() {
            if !m[2].is_zero() || !m[0].is_integer() || !m[1].is_integer() || m[0].is_negative() || m[1].is_negative() {
                return Err(Error::NonIntegralExponent(p.to_string()));
            }
            out.insert((m[0].to_integer() as u32, m[1].to_integer() as u32), Cyclotomic::rational(c.clone()));
        }
        Ok(CycloPoly(out))
    }

    fn add_term(&mut self, key: (u32, u32), c: Cyclotomic) {
        let slot = self.0.entry(key).or_insert_with(Cyclotomic::zero);
        *slot = &*slot + &c;
        if slot.is_zero() {
            self.0.remove(&key);
        }
    }

    fn mul(&self, other: &CycloPoly) -> CycloPoly {
        let mut out = CycloPoly::default();
        for ((a, b), c) in &self.0 {
            for ((e, f), g) in &other.0 {
                out.add_term((a + e, b + f), c * g);
            }
        }
        out
    }

    fn linear(a: &Cyclotomic, b: &Cyclotomic) -> CycloPoly {
        let mut p = CycloPoly::default();
        p.add_term((1, 0), a.clone());
        p.add_term((0, 1), b.clone());
        p
    }

    /// `P(g (x, y)^T)`: `x -> g00 x + g01 y`, `y -> g10 x + g11 y`.
    pub fn act(&self, g: &Mat2) -> CycloPoly {
        let lx = Self::linear(&g[0][0], &g[0][1]);
        let ly = Self::linear(&g[1][0], &g[1][1]);
        let powers = |l: &CycloPoly, k: u32| {
            let mut v = vec![CycloPoly(BTreeMap::from([((0, 0), Cyclotomic::one())]))];
            for i in 1..=k as usize {
                let next = v[i - 1].mul(l);
                v.push(next);
            }
            v
        };
        let max_x = self.0.keys().map(|k| k.0).max().unwrap_or(0);
        let max_y = self.0.keys().map(|k| k.1).max().unwrap_or(0);
        let (px, py) = (powers(&lx, max_x), powers(&ly, max_y));
        let mut out = CycloPoly::default();
        for ((a, b), c) in &self.0 {
            for (k, v) in px[*a as usize].mul(&py[*b as usize]).0 {
                out.add_term(k, c * &v);
            }
        }
        out
    }

    /// `c` with `self = c * other`, if one exists.
    pub fn ratio_to(&self, other: &CycloPoly) -> Option<Cyclotomic> {
        let (key, lead) = other.0.iter().next_back()?;
        let c = self.0.get(key).cloned().unwrap_or_else(Cyclotomic::zero);
        let c = &c * &lead.inv().ok()?;
        let keys: std::collections::BTreeSet<_> = self.0.keys().chain(other.0.keys()).collect();
        keys.into_iter()
            .all(|k| {
                let lhs = self.0.get(k).cloned().unwrap_or_else(Cyclotomic::zero);
                let rhs = other.0.get(k).map(|v| &c * v).unwrap_or_else(Cyclotomic::zero);
                lhs == rhs
            })
            .then_some(c)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorDiagnosis {
    pub generator: String,
    /// `c` with `g.z = c z`; `None` when `z = 0`, where every `c` works.
    pub scalar: Option<Cyclotomic>,
    /// The value `chi_d(g)` assigned to the generator.
    pub stated: Cyclotomic,
    /// For scalar generators `omega I`: `omega^deg(z)`.
    pub forced: Option<Cyclotomic>,
}

impl GeneratorDiagnosis {
    /// The measured scalar, or the homogeneity value when `z = 0`.
    pub fn observed(&self) -> Option<&Cyclotomic> {
        self.scalar.as_ref().or(self.forced.as_ref())
    }

    /// Whether the observed value equals the stated character value.
    pub fn agrees_with_stated(&self) -> Option<bool> {
        self.observed().map(|c| *c == self.stated)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "generator": self.generator,
            "scalar": self.scalar.as_ref().map(|c| c.to_string()),
            "stated_character": self.stated.to_string(),
            "homogeneity_value": self.forced.as_ref().map(|c| c.to_string()),
            "agrees_with_stated": self.agrees_with_stated(),
        })
    }
}

/// Action of each generator of `G_m^X` on `z`, with the scalar it produces,
/// the stated character value and, for scalar generators, the value forced
/// by homogeneity. `degree` is the degree used when `z = 0` (`n - 2d` for a
/// `Z` polynomial). Fails if `g.z` is not a multiple of `z`.
pub fn character_diagnosis(
    z: &ExpPoly,
    ty: CodeType,
    m: u32,
    d: i64,
    degree: Option<u32>,
) -> Result<Vec<GeneratorDiagnosis>> {
    let group = build_group(ty, m)?;
    let p = CycloPoly::from_exp_poly(z)?;
    let degree = if z.is_zero() {
        degree.ok_or_else(|| Error::Input("zero polynomial needs an explicit degree".into()))?
    } else {
        let deg = z.homogeneous_xy_degree().ok_or_else(|| Error::Input("polynomial is not homogeneous".into()))?;
        deg.to_integer() as u32
    };
    let mut out = Vec::new();
    for g in &group.generators {
        let scalar = if z.is_zero() {
            None
        } else {
            Some(p.act(&g.matrix).ratio_to(&p).ok_or_else(|| Error::NotRelativeInvariant(g.name.clone()))?)
        };
        let forced = g.scalar_order.map(|_| g.matrix[0][0].pow(degree));
        out.push(GeneratorDiagnosis {
            generator: g.name.clone(),
            scalar,
            stated: Cyclotomic::zeta(g.character_exponent(d)),
            forced,
        });
    }
    Ok(out)
}
