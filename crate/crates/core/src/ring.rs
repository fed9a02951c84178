//! Finite commutative rings of prime-power order.
//!
//! Two families are supported: the residue rings `Z_{p^e}` and the Galois
//! fields `GF(p^k)`. Elements are plain indices in `0..|R|`; for `Z_{p^e}`
//! the index is the residue, for `GF(p^k)` it is the residue polynomial
//! evaluated at `p` (coefficient of `x^i` is base-`p` digit `i`).
//! Addition and multiplication go through precomputed tables.

use std::fmt;

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported ring order. Keeps element indices in `u16` and the
/// operation tables at most 64K entries.
pub const MAX_ORDER: u64 = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Elem(pub u16);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// JSON ring descriptor: `{"kind":"Zm","m":4}` or
/// `{"kind":"GF","p":2,"k":2,"modulus":[1,1,1]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum RingDescriptor {
    Zm {
        m: u64,
    },
    #[serde(rename = "GF")]
    Gf {
        p: u64,
        k: u32,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        modulus: Option<Vec<u32>>,
    },
}

impl RingDescriptor {
    pub fn zm(m: u64) -> Self {
        RingDescriptor::Zm { m }
    }

    pub fn gf(p: u64, k: u32) -> Self {
        RingDescriptor::Gf { p, k, modulus: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RingKind {
    Zm,
    Gf,
}

#[derive(Clone)]
pub struct FiniteRing {
    kind: RingKind,
    p: u32,
    exp: u32,
    modulus: Vec<u32>,
    order: usize,
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
}

impl fmt::Debug for FiniteRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteRing({})", self.name())
    }
}

impl PartialEq for FiniteRing {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.p == other.p && self.exp == other.exp && self.modulus == other.modulus
    }
}

impl Eq for FiniteRing {}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Returns `(p, e)` with `n = p^e`, or `None` if `n` is not a prime power.
pub(crate) fn prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= n && n % p != 0 {
        p += 1;
    }
    if n % p != 0 {
        p = n;
    }
    let mut rest = n;
    let mut e = 0;
    while rest % p == 0 {
        rest /= p;
        e += 1;
    }
    (rest == 1).then_some((p, e))
}

fn default_modulus(p: u32, k: u32) -> Option<Vec<u32>> {
    match (p, k) {
        (_, 1) => Some(vec![0, 1]),
        (2, 2) => Some(vec![1, 1, 1]),
        (2, 3) => Some(vec![1, 1, 0, 1]),
        (3, 2) => Some(vec![1, 0, 1]),
        (2, 4) => Some(vec![1, 1, 0, 0, 1]),
        _ => None,
    }
}

// Dense polynomials over Z_p, low degree first.

fn poly_trim(a: &mut Vec<u32>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = mod_inv(m[dm], p);
    while r.len() > dm {
        let shift = r.len() - 1 - dm;
        let c = r[r.len() - 1] * lead_inv % p;
        for (i, &mi) in m.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p * p - c * mi % p) % p;
        }
        poly_trim(&mut r);
    }
    r
}

fn mod_inv(a: u32, p: u32) -> u32 {
    (1..p).find(|&b| a * b % p == 1).expect("nonzero element of a prime field")
}

/// Irreducibility by trial division against every monic polynomial of
/// degree `1..=deg/2`.
fn is_irreducible(m: &[u32], p: u32) -> bool {
    let deg = m.len() - 1;
    for fd in 1..=deg / 2 {
        let count = (p as u64).pow(fd as u32);
        for code in 0..count {
            let mut f = Vec::with_capacity(fd + 1);
            let mut c = code;
            for _ in 0..fd {
                f.push((c % p as u64) as u32);
                c /= p as u64;
            }
            f.push(1);
            if poly_rem(m, &f, p).is_empty() {
                return false;
            }
        }
    }
    true
}

fn first_irreducible(p: u32, k: u32) -> Vec<u32> {
    let count = (p as u64).pow(k);
    for code in 0..count {
        let mut f = Vec::with_capacity(k as usize + 1);
        let mut c = code;
        for _ in 0..k {
            f.push((c % p as u64) as u32);
            c /= p as u64;
        }
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists over GF(p)")
}

impl FiniteRing {
    pub fn new(spec: &RingDescriptor) -> Result<FiniteRing> {
        match spec {
            RingDescriptor::Zm { m } => Self::zm(*m),
            RingDescriptor::Gf { p, k, modulus } => Self::gf(*p, *k, modulus.clone()),
        }
    }

    pub fn zm(m: u64) -> Result<FiniteRing> {
        let (p, e) = prime_power(m).ok_or(Error::CompositeNonPrimePower(m))?;
        if m > MAX_ORDER {
            return Err(Error::InvalidRing(format!("order {m} exceeds {MAX_ORDER}")));
        }
        let n = m as usize;
        let mut add = vec![0u16; n * n];
        let mut mul = vec![0u16; n * n];
        for a in 0..n {
            for b in 0..n {
                add[a * n + b] = ((a + b) % n) as u16;
                mul[a * n + b] = ((a * b) % n) as u16;
            }
        }
        let neg = (0..n).map(|a| ((n - a) % n) as u16).collect();
        Ok(FiniteRing { kind: RingKind::Zm, p: p as u32, exp: e, modulus: Vec::new(), order: n, add, mul, neg })
    }

    pub fn gf(p: u64, k: u32, modulus: Option<Vec<u32>>) -> Result<FiniteRing> {
        if !is_prime(p) {
            return Err(Error::InvalidRing(format!("GF characteristic {p} is not prime")));
        }
        if k == 0 {
            return Err(Error::InvalidRing("GF degree must be at least 1".into()));
        }
        let order = (p as u128)
            .checked_pow(k)
            .filter(|&o| o <= MAX_ORDER as u128)
            .ok_or_else(|| Error::InvalidRing(format!("order {p}^{k} exceeds {MAX_ORDER}")))?
            as usize;
        let p = p as u32;
        let modulus = match modulus {
            Some(mut m) => {
                if m.iter().any(|&c| c >= p) {
                    return Err(Error::InvalidRing(format!("modulus coefficients must lie in 0..{p}")));
                }
                poly_trim(&mut m);
                if m.len() != k as usize + 1 || m[k as usize] != 1 {
                    return Err(Error::InvalidRing(format!("modulus must be monic of degree {k}")));
                }
                if !is_irreducible(&m, p) {
                    return Err(Error::ReducibleModulus(m, p));
                }
                m
            }
            None => default_modulus(p, k).unwrap_or_else(|| first_irreducible(p, k)),
        };

        let digits = |mut v: usize| -> Vec<u32> {
            let mut d = Vec::with_capacity(k as usize);
            for _ in 0..k {
                d.push((v % p as usize) as u32);
                v /= p as usize;
            }
            d
        };
        let pack = |d: &[u32]| -> usize { d.iter().rev().fold(0usize, |acc, &c| acc * p as usize + c as usize) };

        let n = order;
        let mut add = vec![0u16; n * n];
        let mut mul = vec![0u16; n * n];
        let all: Vec<Vec<u32>> = (0..n).map(digits).collect();
        for a in 0..n {
            for b in 0..n {
                let s: Vec<u32> = all[a].iter().zip(&all[b]).map(|(x, y)| (x + y) % p).collect();
                add[a * n + b] = pack(&s) as u16;
                let mut prod = vec![0u32; 2 * k as usize];
                for (i, &x) in all[a].iter().enumerate() {
                    for (j, &y) in all[b].iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                let mut r = poly_rem(&prod, &modulus, p);
                r.resize(k as usize, 0);
                mul[a * n + b] = pack(&r) as u16;
            }
        }
        let neg = all.iter().map(|d| pack(&d.iter().map(|&c| (p - c) % p).collect::<Vec<_>>()) as u16).collect();
        Ok(FiniteRing { kind: RingKind::Gf, p, exp: k, modulus, order: n, add, mul, neg })
    }

    pub fn kind(&self) -> RingKind {
        self.kind
    }

    pub fn characteristic_prime(&self) -> u32 {
        self.p
    }

    /// `e` for `Z_{p^e}`, `k` for `GF(p^k)`.
    pub fn exponent(&self) -> u32 {
        self.exp
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn is_field(&self) -> bool {
        self.kind == RingKind::Gf || self.exp == 1
    }

    pub fn name(&self) -> String {
        match self.kind {
            RingKind::Zm => format!("Z{}", self.order),
            RingKind::Gf => format!("F{}", self.order),
        }
    }

    pub fn descriptor(&self) -> RingDescriptor {
        match self.kind {
            RingKind::Zm => RingDescriptor::Zm { m: self.order as u64 },
            RingKind::Gf => RingDescriptor::Gf { p: self.p as u64, k: self.exp, modulus: Some(self.modulus.clone()) },
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.order as u16).map(Elem)
    }

    pub fn elem(&self, index: u64) -> Result<Elem> {
        if index < self.order as u64 {
            Ok(Elem(index as u16))
        } else {
            Err(Error::Input(format!("element {index} out of range for {}", self.name())))
        }
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        Elem(self.add[a.index() * self.order + b.index()])
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        Elem(self.mul[a.index() * self.order + b.index()])
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        Elem(self.neg[a.index()])
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut base = a;
        let mut acc = Elem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Whether the Hermitian conjugation `v -> v^sqrt(q)` exists.
    pub fn supports_conjugation(&self) -> bool {
        self.kind == RingKind::Gf && self.exp % 2 == 0
    }

    pub fn conjugate(&self, v: Elem) -> Result<Elem> {
        if !self.supports_conjugation() {
            return Err(Error::ConjugationUnsupported);
        }
        Ok(self.pow(v, (self.p as u64).pow(self.exp / 2)))
    }

    /// `log_{|R|}(count)` for a count that is a power of `p`, as an exact rational.
    pub fn log_order(&self, count: u64) -> Rational64 {
        let mut rest = count;
        let mut v = 0i64;
        while rest > 1 && rest % self.p as u64 == 0 {
            rest /= self.p as u64;
            v += 1;
        }
        assert_eq!(rest, 1, "{count} is not a power of {}", self.p);
        Rational64::new(v, self.exp as i64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z4_addition() {
        let r = FiniteRing::zm(4).unwrap();
        assert_eq!(r.order(), 4);
        assert_eq!(r.add(Elem(2), Elem(3)), Elem(1));
        assert_eq!(r.mul(Elem(2), Elem(2)), Elem(0));
    }

    #[test]
    fn gf4_generator_squares_to_a_plus_one() {
        let r = FiniteRing::gf(2, 2, None).unwrap();
        // a = x -> index 2, a + 1 -> index 3
        assert_eq!(r.modulus(), &[1, 1, 1]);
        assert_eq!(r.mul(Elem(2), Elem(2)), Elem(3));
    }

    #[test]
    fn composite_orders_rejected() {
        assert_eq!(FiniteRing::zm(6).unwrap_err(), Error::CompositeNonPrimePower(6));
        assert_eq!(FiniteRing::zm(1).unwrap_err(), Error::CompositeNonPrimePower(1));
    }

    #[test]
    fn reducible_modulus_rejected() {
        // x^2 + 1 = (x+1)^2 over GF(2)
        let err = FiniteRing::gf(2, 2, Some(vec![1, 0, 1])).unwrap_err();
        assert!(matches!(err, Error::ReducibleModulus(..)));
        // x^4 + x^2 + 1 = (x^2+x+1)^2 has no roots but is reducible
        let err = FiniteRing::gf(2, 4, Some(vec![1, 0, 1, 0, 1])).unwrap_err();
        assert!(matches!(err, Error::ReducibleModulus(..)));
        assert!(FiniteRing::gf(3, 2, Some(vec![2, 2, 1])).is_ok());
    }

    #[test]
    fn default_moduli() {
        assert_eq!(FiniteRing::gf(2, 3, None).unwrap().modulus(), &[1, 1, 0, 1]);
        assert_eq!(FiniteRing::gf(3, 2, None).unwrap().modulus(), &[1, 0, 1]);
        assert_eq!(FiniteRing::gf(2, 4, None).unwrap().modulus(), &[1, 1, 0, 0, 1]);
        let f25 = FiniteRing::gf(5, 2, None).unwrap();
        assert!(is_irreducible(f25.modulus(), 5));
    }

    #[test]
    fn conjugation_on_gf4() {
        let r = FiniteRing::gf(2, 2, None).unwrap();
        let a = Elem(2);
        assert_eq!(r.conjugate(a).unwrap(), Elem(3));
        assert_eq!(r.conjugate(Elem::ONE).unwrap(), Elem::ONE);
        assert_eq!(r.conjugate(r.conjugate(a).unwrap()).unwrap(), a);
        assert_eq!(FiniteRing::zm(4).unwrap().conjugate(a), Err(Error::ConjugationUnsupported));
        assert_eq!(FiniteRing::gf(2, 3, None).unwrap().conjugate(a), Err(Error::ConjugationUnsupported));
    }

    fn small_rings() -> Vec<FiniteRing> {
        vec![
            FiniteRing::zm(2).unwrap(),
            FiniteRing::zm(4).unwrap(),
            FiniteRing::zm(8).unwrap(),
            FiniteRing::zm(9).unwrap(),
            FiniteRing::zm(16).unwrap(),
            FiniteRing::gf(2, 2, None).unwrap(),
            FiniteRing::gf(2, 3, None).unwrap(),
            FiniteRing::gf(3, 2, None).unwrap(),
            FiniteRing::gf(2, 4, None).unwrap(),
        ]
    }

    #[test]
    fn ring_axioms_exhaustive() {
        for r in small_rings() {
            for u in r.elements() {
                assert_eq!(r.add(u, r.neg(u)), Elem::ZERO);
                assert_eq!(r.mul(u, Elem::ONE), u);
                for v in r.elements() {
                    assert_eq!(r.mul(u, v), r.mul(v, u), "{r:?}");
                    assert_eq!(r.add(u, v), r.add(v, u));
                    for w in r.elements() {
                        assert_eq!(r.add(r.add(u, v), w), r.add(u, r.add(v, w)));
                        assert_eq!(r.mul(r.mul(u, v), w), r.mul(u, r.mul(v, w)));
                        assert_eq!(r.mul(u, r.add(v, w)), r.add(r.mul(u, v), r.mul(u, w)));
                    }
                }
            }
        }
    }

    #[test]
    fn fields_have_inverses() {
        for r in small_rings().into_iter().filter(|r| r.kind() == RingKind::Gf) {
            for u in r.elements().skip(1) {
                assert!(r.elements().any(|v| r.mul(u, v) == Elem::ONE), "{r:?} {u}");
            }
        }
    }

    #[test]
    fn conjugation_is_field_automorphism() {
        for r in [
            FiniteRing::gf(2, 2, None).unwrap(),
            FiniteRing::gf(3, 2, None).unwrap(),
            FiniteRing::gf(2, 4, None).unwrap(),
        ] {
            for u in r.elements() {
                let cu = r.conjugate(u).unwrap();
                assert_eq!(r.conjugate(cu).unwrap(), u);
                for v in r.elements() {
                    let cv = r.conjugate(v).unwrap();
                    assert_eq!(r.conjugate(r.add(u, v)).unwrap(), r.add(cu, cv));
                    assert_eq!(r.conjugate(r.mul(u, v)).unwrap(), r.mul(cu, cv));
                }
            }
            // the prime subfield is fixed
            for c in 0..r.characteristic_prime() as u16 {
                assert_eq!(r.conjugate(Elem(c)).unwrap(), Elem(c));
            }
        }
    }

    #[test]
    fn descriptor_json() {
        let d: RingDescriptor = serde_json::from_str(r#"{"kind":"Zm","m":4}"#).unwrap();
        assert_eq!(d, RingDescriptor::zm(4));
        let d: RingDescriptor = serde_json::from_str(r#"{"kind":"GF","p":2,"k":2,"modulus":[1,1,1]}"#).unwrap();
        assert_eq!(FiniteRing::new(&d).unwrap().order(), 4);
    }

    #[test]
    fn log_order_is_fractional_over_chain_rings() {
        let z4 = FiniteRing::zm(4).unwrap();
        assert_eq!(z4.log_order(2), Rational64::new(1, 2));
        assert_eq!(z4.log_order(16), Rational64::from(2));
        assert_eq!(z4.log_order(1), Rational64::from(0));
    }
}
