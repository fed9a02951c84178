//! Exact polynomials over the rationals in `x`, `y` and `lambda`.
//!
//! Exponents are rationals: demi-matroid ranks of codes over `Z_{p^e}` are
//! multiples of `1/e`, so powers like `lambda^(1/2)` occur naturally.
//! Exponents combine only by addition on identical variables, which is all
//! multiplication of monomials needs; binomial expansion (substitution) is
//! restricted to integral exponents.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};

pub type Exp = Rational64;
pub type Coeff = BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X,
    Y,
    Lambda,
}

impl Var {
    pub const ALL: [Var; 3] = [Var::X, Var::Y, Var::Lambda];

    fn slot(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::Y => "y",
            Var::Lambda => "lambda",
        }
    }
}

/// Exponents of `(x, y, lambda)`.
pub type Monomial = [Exp; 3];

pub fn int(n: i64) -> Coeff {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Coeff {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn big(n: impl Into<BigInt>) -> Coeff {
    BigRational::from_integer(n.into())
}

pub fn exp(n: i64) -> Exp {
    Exp::from_integer(n)
}

/// Renders a rational as `num/den`, or `num` when the denominator is 1.
pub fn fmt_rational<T: fmt::Display + Clone + num_integer::Integer>(q: &num_rational::Ratio<T>) -> String {
    if q.denom().is_one() {
        format!("{}", q.numer())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Coeff> {
    let bad = || Error::Input(format!("bad rational {s:?}"));
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

fn exact_root(n: &BigInt, k: u32) -> Option<BigInt> {
    if n.is_negative() {
        if k % 2 == 0 {
            return None;
        }
        return exact_root(&-n, k).map(|r| -r);
    }
    let r = n.nth_root(k);
    (num_traits::pow(r.clone(), k as usize) == *n).then_some(r)
}

/// `base^e` in exact arithmetic. Fractional exponents resolve only when the
/// base is a perfect power of the exponent's denominator.
pub fn rational_pow(base: &Coeff, e: Exp) -> Result<Coeff> {
    let irrational = || Error::IrrationalPower { base: fmt_rational(base), exp: fmt_rational(&e) };
    if e.is_zero() {
        return Ok(Coeff::one());
    }
    if base.is_zero() {
        return if e.is_positive() { Ok(Coeff::zero()) } else { Err(Error::DivisionByZero) };
    }
    let den = *e.denom() as u32;
    let num = *e.numer();
    let root = if den == 1 {
        base.clone()
    } else {
        let n = exact_root(base.numer(), den).ok_or_else(irrational)?;
        let d = exact_root(base.denom(), den).ok_or_else(irrational)?;
        BigRational::new(n, d)
    };
    let p = num_traits::pow(root, num.unsigned_abs() as usize);
    Ok(if num < 0 { p.recip() } else { p })
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ExpPoly {
    terms: BTreeMap<Monomial, Coeff>,
}

/// `a*x + b*y`, the right-hand side of a linear substitution.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearForm {
    pub a: Coeff,
    pub b: Coeff,
}

impl LinearForm {
    pub fn new(a: Coeff, b: Coeff) -> Self {
        LinearForm { a, b }
    }

    pub fn to_poly(&self) -> ExpPoly {
        ExpPoly::term(self.a.clone(), [exp(1), exp(0), exp(0)])
            + ExpPoly::term(self.b.clone(), [exp(0), exp(1), exp(0)])
    }
}

impl ExpPoly {
    pub fn zero() -> Self {
        ExpPoly::default()
    }

    pub fn constant(c: Coeff) -> Self {
        Self::term(c, [exp(0); 3])
    }

    pub fn one() -> Self {
        Self::constant(Coeff::one())
    }

    pub fn var(v: Var) -> Self {
        let mut m = [exp(0); 3];
        m[v.slot()] = exp(1);
        Self::term(Coeff::one(), m)
    }

    pub fn term(c: Coeff, m: Monomial) -> Self {
        let mut p = ExpPoly::zero();
        p.add_term(m, c);
        p
    }

    /// `c * x^i * y^j * lambda^l` with rational exponents.
    pub fn monomial(c: Coeff, x: Exp, y: Exp, lambda: Exp) -> Self {
        Self::term(c, [x, y, lambda])
    }

    pub fn add_term(&mut self, m: Monomial, c: Coeff) {
        debug_assert!(m.iter().all(|e| !e.is_negative()), "negative exponent {m:?}");
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
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

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Coeff)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Coeff {
        self.terms.get(m).cloned().unwrap_or_else(Coeff::zero)
    }

    pub fn scale(&self, c: &Coeff) -> ExpPoly {
        if c.is_zero() {
            return ExpPoly::zero();
        }
        ExpPoly { terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect() }
    }

    pub fn pow(&self, k: u32) -> ExpPoly {
        let mut acc = ExpPoly::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    pub fn degree_in(&self, v: Var) -> Option<Exp> {
        self.terms.keys().map(|m| m[v.slot()]).max()
    }

    /// Total degree in `x` and `y` if every term has the same one.
    pub fn homogeneous_xy_degree(&self) -> Option<Exp> {
        let mut degs = self.terms.keys().map(|m| m[0] + m[1]);
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    /// Substitutes polynomials for variables. Every substituted variable must
    /// carry nonnegative integer exponents.
    pub fn substitute(&self, map: &[(Var, ExpPoly)]) -> Result<ExpPoly> {
        let mut powers: Vec<(Var, Vec<ExpPoly>)> =
            map.iter().map(|(v, p)| (*v, vec![ExpPoly::one(), p.clone()])).collect();
        let mut out = ExpPoly::zero();
        for (m, c) in &self.terms {
            let mut kept = *m;
            let mut factor = ExpPoly::constant(c.clone());
            for (v, pows) in powers.iter_mut() {
                let e = m[v.slot()];
                if !e.is_integer() || e.is_negative() {
                    return Err(Error::NonIntegralExponent(fmt_rational(&e)));
                }
                let k = e.to_integer() as usize;
                while pows.len() <= k {
                    let next = &pows[pows.len() - 1] * &pows[1];
                    pows.push(next);
                }
                factor = &factor * &pows[k];
                kept[v.slot()] = exp(0);
            }
            out = out + &factor * &ExpPoly::term(Coeff::one(), kept);
        }
        Ok(out)
    }

    pub fn substitute_linear(&self, map: &[(Var, LinearForm)]) -> Result<ExpPoly> {
        let polys: Vec<(Var, ExpPoly)> = map.iter().map(|(v, f)| (*v, f.to_poly())).collect();
        self.substitute(&polys)
    }

    /// Exact quotient by `x^xe * y^ye`.
    pub fn divide_by_monomial(&self, xe: Exp, ye: Exp) -> Result<ExpPoly> {
        let mut out = ExpPoly::zero();
        for (m, c) in &self.terms {
            if m[0] < xe || m[1] < ye {
                return Err(Error::NotDivisible { term: render_term(m, c, true) });
            }
            out.terms.insert([m[0] - xe, m[1] - ye, m[2]], c.clone());
        }
        Ok(out)
    }

    pub fn mul_monomial(&self, m: Monomial) -> ExpPoly {
        ExpPoly {
            terms: self.terms.iter().map(|(k, c)| ([k[0] + m[0], k[1] + m[1], k[2] + m[2]], c.clone())).collect(),
        }
    }

    /// Substitutes a rational value for one variable.
    pub fn eval_var(&self, v: Var, value: &Coeff) -> Result<ExpPoly> {
        let mut out = ExpPoly::zero();
        for (m, c) in &self.terms {
            let mut k = *m;
            k[v.slot()] = exp(0);
            out.add_term(k, c * rational_pow(value, m[v.slot()])?);
        }
        Ok(out)
    }

    /// Full evaluation. Variables absent from `point` must not occur.
    pub fn eval(&self, point: &[(Var, Coeff)]) -> Result<Coeff> {
        let mut acc = Coeff::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for v in Var::ALL {
                let e = m[v.slot()];
                if e.is_zero() {
                    continue;
                }
                let val = point
                    .iter()
                    .find(|(w, _)| *w == v)
                    .map(|(_, q)| q)
                    .ok_or_else(|| Error::Input(format!("no value for {}", v.name())))?;
                t *= rational_pow(val, e)?;
            }
            acc += t;
        }
        Ok(acc)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .rev()
                .map(|(m, c)| {
                    json!({
                        "coeff": fmt_rational(c),
                        "exps": {"x": fmt_rational(&m[0]), "y": fmt_rational(&m[1]), "lambda": fmt_rational(&m[2])}
                    })
                })
                .collect(),
        )
    }

    /// First monomial where the two polynomials differ, with both coefficients.
    pub fn first_difference(&self, other: &ExpPoly) -> Option<(Monomial, Coeff, Coeff)> {
        let diff = self - other;
        diff.terms.iter().next_back().map(|(m, _)| (*m, self.coeff(m), other.coeff(m)))
    }
}

fn fmt_power(name: &str, e: &Exp) -> String {
    if e.is_one() {
        name.to_string()
    } else if e.is_integer() {
        format!("{name}^{e}")
    } else {
        format!("{name}^({})", fmt_rational(e))
    }
}

fn render_term(m: &Monomial, c: &Coeff, with_sign: bool) -> String {
    let factors: Vec<String> =
        Var::ALL.iter().filter(|v| !m[v.slot()].is_zero()).map(|v| fmt_power(v.name(), &m[v.slot()])).collect();
    let mag = if with_sign { c.clone() } else { c.abs() };
    if factors.is_empty() {
        return fmt_rational(&mag);
    }
    let body = factors.join("*");
    if mag.is_one() {
        body
    } else if (-mag.clone()).is_one() {
        format!("-{body}")
    } else {
        format!("{}*{body}", fmt_rational(&mag))
    }
}

/// Joins signed terms as `a - b + c`.
fn join_terms(terms: impl Iterator<Item = (String, bool)>) -> String {
    let mut out = String::new();
    for (i, (body, negative)) in terms.enumerate() {
        if i == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

impl fmt::Display for ExpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = join_terms(self.terms.iter().rev().map(|(m, c)| (render_term(m, c, false), c.is_negative())));
        f.write_str(&s)
    }
}

impl Add for ExpPoly {
    type Output = ExpPoly;
    fn add(mut self, rhs: ExpPoly) -> ExpPoly {
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
        self
    }
}

impl Add<&ExpPoly> for &ExpPoly {
    type Output = ExpPoly;
    fn add(self, rhs: &ExpPoly) -> ExpPoly {
        self.clone() + rhs.clone()
    }
}

impl Neg for &ExpPoly {
    type Output = ExpPoly;
    fn neg(self) -> ExpPoly {
        ExpPoly { terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }
}

impl Neg for ExpPoly {
    type Output = ExpPoly;
    fn neg(self) -> ExpPoly {
        -&self
    }
}

impl Sub for ExpPoly {
    type Output = ExpPoly;
    fn sub(self, rhs: ExpPoly) -> ExpPoly {
        self + (-rhs)
    }
}

impl Sub<&ExpPoly> for &ExpPoly {
    type Output = ExpPoly;
    fn sub(self, rhs: &ExpPoly) -> ExpPoly {
        self.clone() + (-rhs)
    }
}

impl Mul<&ExpPoly> for &ExpPoly {
    type Output = ExpPoly;
    fn mul(self, rhs: &ExpPoly) -> ExpPoly {
        let mut out = ExpPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term([ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2]], ca * cb);
            }
        }
        out
    }
}

impl Mul for ExpPoly {
    type Output = ExpPoly;
    fn mul(self, rhs: ExpPoly) -> ExpPoly {
        &self * &rhs
    }
}

/// `sum c * (x-1)^e1 * (y-1)^e2`, kept in the shifted basis because the
/// exponents may be fractional.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TutteForm {
    terms: BTreeMap<(Exp, Exp), Coeff>,
}

impl TutteForm {
    pub fn zero() -> Self {
        TutteForm::default()
    }

    pub fn add_term(&mut self, e1: Exp, e2: Exp, c: Coeff) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry((e1, e2)).or_insert_with(Coeff::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&(e1, e2));
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&(Exp, Exp), &Coeff)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e1: Exp, e2: Exp) -> Coeff {
        self.terms.get(&(e1, e2)).cloned().unwrap_or_else(Coeff::zero)
    }

    /// `T(y, x)`: exchanges the roles of the two variables.
    pub fn swap_variables(&self) -> TutteForm {
        TutteForm { terms: self.terms.iter().map(|((a, b), c)| ((*b, *a), c.clone())).collect() }
    }

    pub fn scale(&self, c: &Coeff) -> TutteForm {
        let mut out = TutteForm::zero();
        for ((a, b), v) in &self.terms {
            out.add_term(*a, *b, v * c);
        }
        out
    }

    pub fn eval(&self, x: &Coeff, y: &Coeff) -> Result<Coeff> {
        let bx = x - Coeff::one();
        let by = y - Coeff::one();
        let mut acc = Coeff::zero();
        for ((a, b), c) in &self.terms {
            acc += c * rational_pow(&bx, *a)? * rational_pow(&by, *b)?;
        }
        Ok(acc)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.terms
                .iter()
                .rev()
                .map(|((a, b), c)| json!({"coeff": fmt_rational(c), "exps": {"x-1": fmt_rational(a), "y-1": fmt_rational(b)}}))
                .collect(),
        )
    }
}

impl fmt::Display for TutteForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = join_terms(self.terms.iter().rev().map(|((a, b), c)| {
            let mut factors = Vec::new();
            if !a.is_zero() {
                factors.push(fmt_power("(x-1)", a));
            }
            if !b.is_zero() {
                factors.push(fmt_power("(y-1)", b));
            }
            let mag = c.abs();
            let body = if factors.is_empty() {
                fmt_rational(&mag)
            } else if mag.is_one() {
                factors.join("*")
            } else {
                format!("{}*{}", fmt_rational(&mag), factors.join("*"))
            };
            (body, c.is_negative())
        }));
        f.write_str(&s)
    }
}

/// Lossy conversion used only for diagnostics.
pub fn approx(q: &Coeff) -> f64 {
    q.numer().to_f64().unwrap_or(f64::NAN) / q.denom().to_f64().unwrap_or(f64::NAN)
}
