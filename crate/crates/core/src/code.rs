//! Linear codes over a [`FiniteRing`], stored fully enumerated.
//!
//! Codewords are packed base-`|R|` into a `u64` (coordinate `i` is digit
//! `i`), which bounds `|R|^n` by `2^64`. Everything downstream is a sum over
//! codewords or over subsets of coordinates, so the enumerated form is the
//! only representation needed.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{Elem, FiniteRing, RingDescriptor};
use crate::subset::{self, Subset, MAX_N};

/// Default cap on enumerated sets (codes, ambient spaces for duals).
pub const DEFAULT_MAX_ENUM: u128 = 1 << 24;

/// Cap on `|C|^m` for the direct m-tuple enumeration oracle.
pub const TUPLE_ORACLE_CAP: u128 = 1 << 22;

/// Enumeration cap, overridable through `HTUTTE_MAX_ENUM`.
pub fn max_enum() -> u128 {
    std::env::var("HTUTTE_MAX_ENUM").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_MAX_ENUM)
}

fn check_cap(what: &'static str, size: u128) -> Result<()> {
    let cap = max_enum();
    if size > cap {
        return Err(Error::EnumerationTooLarge { what, size, cap });
    }
    Ok(())
}

#[derive(Clone)]
pub struct LinearCode {
    ring: Arc<FiniteRing>,
    n: usize,
    generators: Vec<Vec<Elem>>,
    words: Vec<u64>,
    supports: Vec<Subset>,
}

impl fmt::Debug for LinearCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinearCode({}, n={}, |C|={})", self.ring.name(), self.n, self.words.len())
    }
}

impl PartialEq for LinearCode {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.n == other.n && self.words == other.words
    }
}

impl Eq for LinearCode {}

/// Packing helper for vectors of length `n` over a ring of order `q`.
#[derive(Debug, Clone, Copy)]
struct Packer {
    q: u64,
    n: usize,
}

impl Packer {
    fn new(ring: &FiniteRing, n: usize) -> Result<Packer> {
        if n > MAX_N {
            return Err(Error::Input(format!("code length {n} exceeds {MAX_N}")));
        }
        let q = ring.order() as u64;
        if (q as u128).pow(n as u32) > u64::MAX as u128 + 1 {
            return Err(Error::EnumerationTooLarge {
                what: "packed vectors",
                size: (q as u128).pow(n as u32),
                cap: u64::MAX as u128,
            });
        }
        Ok(Packer { q, n })
    }

    fn pack(&self, v: &[Elem]) -> u64 {
        v.iter().rev().fold(0u64, |acc, e| acc.wrapping_mul(self.q).wrapping_add(e.0 as u64))
    }

    fn unpack_into(&self, mut w: u64, out: &mut [Elem]) {
        for slot in out.iter_mut().take(self.n) {
            *slot = Elem((w % self.q) as u16);
            w /= self.q;
        }
    }

    fn unpack(&self, w: u64) -> Vec<Elem> {
        let mut v = vec![Elem::ZERO; self.n];
        self.unpack_into(w, &mut v);
        v
    }

    fn support(&self, mut w: u64) -> Subset {
        let mut s = 0;
        for i in 0..self.n {
            if w % self.q != 0 {
                s |= 1 << i;
            }
            w /= self.q;
        }
        s
    }

    fn combine(&self, ring: &FiniteRing, a: u64, b: u64, f: impl Fn(&FiniteRing, Elem, Elem) -> Elem) -> u64 {
        let (mut a, mut b) = (a, b);
        let mut out = 0u64;
        let mut place = 1u64;
        for i in 0..self.n {
            let d = f(ring, Elem((a % self.q) as u16), Elem((b % self.q) as u16));
            out = out.wrapping_add((d.0 as u64).wrapping_mul(place));
            a /= self.q;
            b /= self.q;
            if i + 1 < self.n {
                place = place.wrapping_mul(self.q);
            }
        }
        out
    }

    fn add(&self, ring: &FiniteRing, a: u64, b: u64) -> u64 {
        self.combine(ring, a, b, FiniteRing::add)
    }

    fn sub(&self, ring: &FiniteRing, a: u64, b: u64) -> u64 {
        self.combine(ring, a, b, FiniteRing::sub)
    }

    fn space_size(&self) -> u128 {
        (self.q as u128).pow(self.n as u32)
    }
}

/// Grows the submodule `words` (with membership set `set`) by `R g`.
/// Returns whether anything was added.
fn extend_by(ring: &FiniteRing, pk: Packer, words: &mut Vec<u64>, set: &mut HashSet<u64>, g: &[Elem]) -> Result<bool> {
    let mut reps: Vec<u64> = Vec::new();
    for a in ring.elements() {
        let scaled: Vec<Elem> = g.iter().map(|&x| ring.mul(a, x)).collect();
        let w = pk.pack(&scaled);
        if reps.iter().all(|&r| !set.contains(&pk.sub(ring, w, r))) {
            reps.push(w);
        }
    }
    if reps.len() <= 1 {
        return Ok(false);
    }
    check_cap("code", words.len() as u128 * reps.len() as u128)?;
    let base_len = words.len();
    words.reserve(base_len * (reps.len() - 1));
    for &r in &reps[1..] {
        for i in 0..base_len {
            let w = pk.add(ring, words[i], r);
            words.push(w);
            set.insert(w);
        }
    }
    Ok(true)
}

impl LinearCode {
    /// All `R`-linear combinations of the generator rows.
    pub fn span(ring: Arc<FiniteRing>, n: usize, generators: Vec<Vec<Elem>>) -> Result<LinearCode> {
        let pk = Packer::new(&ring, n)?;
        for g in &generators {
            if g.len() != n {
                return Err(Error::Input(format!("generator of length {} in a code of length {n}", g.len())));
            }
            if g.iter().any(|e| e.index() >= ring.order()) {
                return Err(Error::Input(format!("generator entry outside {}", ring.name())));
            }
        }
        let mut words = vec![0u64];
        let mut set: HashSet<u64> = HashSet::from([0u64]);
        for g in &generators {
            extend_by(&ring, pk, &mut words, &mut set, g)?;
        }
        Ok(Self::assemble(ring, n, generators, words, pk))
    }

    /// Builds a code from a known, closed set of packed words and picks a
    /// generating set greedily.
    fn from_closed_words(ring: Arc<FiniteRing>, n: usize, mut words: Vec<u64>) -> Result<LinearCode> {
        let pk = Packer::new(&ring, n)?;
        words.sort_unstable();
        let mut span_words = vec![0u64];
        let mut set: HashSet<u64> = HashSet::from([0u64]);
        let mut generators = Vec::new();
        for &w in &words {
            if span_words.len() == words.len() {
                break;
            }
            if !set.contains(&w) {
                let g = pk.unpack(w);
                extend_by(&ring, pk, &mut span_words, &mut set, &g)?;
                generators.push(g);
            }
        }
        debug_assert_eq!(span_words.len(), words.len());
        Ok(Self::assemble(ring, n, generators, words, pk))
    }

    fn assemble(
        ring: Arc<FiniteRing>,
        n: usize,
        generators: Vec<Vec<Elem>>,
        mut words: Vec<u64>,
        pk: Packer,
    ) -> LinearCode {
        words.sort_unstable();
        words.dedup();
        let supports = words.iter().map(|&w| pk.support(w)).collect();
        LinearCode { ring, n, generators, words, supports }
    }

    pub fn zero_code(ring: Arc<FiniteRing>, n: usize) -> Result<LinearCode> {
        Self::span(ring, n, Vec::new())
    }

    pub fn ring(&self) -> &Arc<FiniteRing> {
        &self.ring
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn size(&self) -> usize {
        self.words.len()
    }

    pub fn generators(&self) -> &[Vec<Elem>] {
        &self.generators
    }

    fn packer(&self) -> Packer {
        Packer { q: self.ring.order() as u64, n: self.n }
    }

    pub fn codewords(&self) -> impl Iterator<Item = Vec<Elem>> + '_ {
        let pk = self.packer();
        self.words.iter().map(move |&w| pk.unpack(w))
    }

    pub fn supports(&self) -> &[Subset] {
        &self.supports
    }

    pub fn contains(&self, v: &[Elem]) -> bool {
        v.len() == self.n && self.words.binary_search(&self.packer().pack(v)).is_ok()
    }

    /// Closure under addition and under scalar multiplication by every ring
    /// element, checked exhaustively.
    pub fn is_closed(&self) -> bool {
        let pk = self.packer();
        let r = &self.ring;
        let has = |w: u64| self.words.binary_search(&w).is_ok();
        if !has(0) {
            return false;
        }
        for &a in &self.words {
            for s in r.elements() {
                let v: Vec<Elem> = pk.unpack(a).into_iter().map(|x| r.mul(s, x)).collect();
                if !has(pk.pack(&v)) {
                    return false;
                }
            }
            for &b in &self.words {
                if !has(pk.add(r, a, b)) {
                    return false;
                }
            }
        }
        true
    }

    /// `C^perp` (or the Hermitian dual with `conjugate`), by exhaustive search
    /// over `R^n`. The search is split in two halves matched on partial
    /// syndromes, which keeps it brute force without solving linear systems.
    pub fn dual(&self, conjugate: bool) -> Result<LinearCode> {
        let r = &*self.ring;
        if conjugate && !r.supports_conjugation() {
            return Err(Error::ConjugationUnsupported);
        }
        let pk = self.packer();
        check_cap("ambient space for dual", pk.space_size())?;
        let h = |v: Elem| if conjugate { r.conjugate(v).expect("checked above") } else { v };

        let mut gens: Vec<Vec<Elem>> =
            self.generators.iter().filter(|g| g.iter().any(|e| *e != Elem::ZERO)).cloned().collect();
        gens.sort();
        gens.dedup();
        let k = gens.len();
        let q = r.order() as u64;
        let nl = self.n.div_ceil(2);
        let nr = self.n - nl;
        let syn_pk = Packer { q, n: k };

        // Partial syndromes over a block of coordinates.
        let syndrome = |offset: usize, digits: &[Elem]| -> Vec<Elem> {
            gens.iter()
                .map(|g| {
                    digits.iter().enumerate().fold(Elem::ZERO, |acc, (i, &v)| r.add(acc, r.mul(g[offset + i], h(v))))
                })
                .collect()
        };

        let left_count = q.pow(nl as u32);
        let right_count = q.pow(nr as u32);
        let mut by_syndrome: HashMap<u64, Vec<u64>> = HashMap::new();
        let mut digits = vec![Elem::ZERO; nl];
        let lp = Packer { q, n: nl };
        for lw in 0..left_count {
            lp.unpack_into(lw, &mut digits);
            let s = syndrome(0, &digits);
            by_syndrome.entry(syn_pk.pack(&s)).or_default().push(lw);
        }
        let rp = Packer { q, n: nr };
        let mut digits = vec![Elem::ZERO; nr];
        let shift = left_count;
        let mut words = Vec::new();
        for rw in 0..right_count {
            rp.unpack_into(rw, &mut digits);
            let s: Vec<Elem> = syndrome(nl, &digits).into_iter().map(|e| r.neg(e)).collect();
            if let Some(lefts) = by_syndrome.get(&syn_pk.pack(&s)) {
                for &lw in lefts {
                    words.push(lw + rw * shift);
                }
            }
        }
        Self::from_closed_words(self.ring.clone(), self.n, words)
    }

    /// `C \ X`: delete the coordinates in `X`.
    pub fn puncture(&self, x: Subset) -> Result<LinearCode> {
        let keep = subset::full(self.n) & !x;
        let m = subset::size(keep);
        let pk = self.packer();
        let out_pk = Packer::new(&self.ring, m)?;
        let project = |v: &[Elem]| -> Vec<Elem> { (0..self.n).filter(|i| keep >> i & 1 == 1).map(|i| v[i]).collect() };
        let mut words: Vec<u64> = self.words.iter().map(|&w| out_pk.pack(&project(&pk.unpack(w)))).collect();
        words.sort_unstable();
        words.dedup();
        let generators = self.generators.iter().map(|g| project(g)).collect();
        Ok(Self::assemble(self.ring.clone(), m, generators, words, out_pk))
    }

    /// `C / X`: keep the codewords vanishing on `X`, then delete `X`.
    pub fn shorten(&self, x: Subset) -> Result<LinearCode> {
        let keep = subset::full(self.n) & !x;
        let pk = self.packer();
        let out_pk = Packer::new(&self.ring, subset::size(keep))?;
        let words: Vec<u64> = self
            .words
            .iter()
            .zip(&self.supports)
            .filter(|(_, s)| *s & x == 0)
            .map(|(&w, _)| {
                let v = pk.unpack(w);
                out_pk.pack(&(0..self.n).filter(|i| keep >> i & 1 == 1).map(|i| v[i]).collect::<Vec<_>>())
            })
            .collect();
        Self::from_closed_words(self.ring.clone(), subset::size(keep), words)
    }

    /// `C(X)`: the codewords supported inside `X`, length unchanged.
    pub fn restrict(&self, x: Subset) -> Result<LinearCode> {
        let words = self.words.iter().zip(&self.supports).filter(|(_, s)| *s & !x == 0).map(|(&w, _)| w).collect();
        Self::from_closed_words(self.ring.clone(), self.n, words)
    }

    /// Number of codewords with support exactly `X`, for every `X`.
    pub fn support_distribution(&self) -> Vec<u64> {
        let mut a = vec![0u64; 1 << self.n];
        for &s in &self.supports {
            a[s as usize] += 1;
        }
        a
    }

    /// `|C/(E-X)|` for every `X`: codewords supported inside `X`.
    pub fn inner_counts(&self) -> Vec<u64> {
        let mut b = self.support_distribution();
        for i in 0..self.n {
            let bit = 1usize << i;
            for x in 0..b.len() {
                if x & bit != 0 {
                    b[x] += b[x ^ bit];
                }
            }
        }
        b
    }

    /// `A^[m]` and `B^[m]` over all subsets: `B^[m](X) = |C/(E-X)|^m`, and
    /// `A^[m]` by inclusion-exclusion.
    pub fn support_counters(&self, m: u32) -> SupportCounters {
        assert!(m >= 1, "m must be positive");
        let b: Vec<BigInt> =
            self.inner_counts().into_iter().map(|c| num_traits::pow(BigInt::from(c), m as usize)).collect();
        let mut a = b.clone();
        for i in 0..self.n {
            let bit = 1usize << i;
            for x in 0..a.len() {
                if x & bit != 0 {
                    let lower = a[x ^ bit].clone();
                    a[x] -= lower;
                }
            }
        }
        SupportCounters { n: self.n, m, a, b }
    }

    /// `A^[m]` by enumerating all m-tuples of codewords. Test oracle only.
    pub fn support_counters_by_enumeration(&self, m: u32) -> Result<Vec<BigInt>> {
        let total = (self.size() as u128).checked_pow(m).unwrap_or(u128::MAX);
        if total > TUPLE_ORACLE_CAP {
            return Err(Error::EnumerationTooLarge {
                what: "m-tuples of codewords",
                size: total,
                cap: TUPLE_ORACLE_CAP,
            });
        }
        let mut counts = vec![0u64; 1 << self.n];
        fn rec(supports: &[Subset], depth: u32, acc: Subset, counts: &mut [u64]) {
            if depth == 0 {
                counts[acc as usize] += 1;
                return;
            }
            for &s in supports {
                rec(supports, depth - 1, acc | s, counts);
            }
        }
        rec(&self.supports, m, 0, &mut counts);
        Ok(counts.into_iter().map(BigInt::from).collect())
    }

    pub fn to_json(&self) -> CodeJson {
        CodeJson {
            ring: self.ring.descriptor(),
            n: self.n,
            generators: self.generators.iter().map(|g| g.iter().map(|e| e.0 as u64).collect()).collect(),
        }
    }

    pub fn from_json(j: &CodeJson) -> Result<LinearCode> {
        let ring = Arc::new(FiniteRing::new(&j.ring)?);
        let gens = j
            .generators
            .iter()
            .map(|g| g.iter().map(|&e| ring.elem(e)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        LinearCode::span(ring, j.n, gens)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportCounters {
    pub n: usize,
    pub m: u32,
    /// `A^[m](X)`: m-tuples whose joint support is exactly `X`.
    pub a: Vec<BigInt>,
    /// `B^[m](X)`: m-tuples whose joint support lies inside `X`.
    pub b: Vec<BigInt>,
}

impl SupportCounters {
    pub fn total(&self) -> BigInt {
        self.a.iter().fold(BigInt::zero(), |acc, v| acc + v)
    }

    pub fn is_consistent(&self) -> bool {
        (0..self.a.len() as Subset)
            .all(|x| subset::submasks(x).fold(BigInt::zero(), |acc, y| acc + &self.a[y as usize]) == self.b[x as usize])
            && self.b[0].is_one()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeJson {
    pub ring: RingDescriptor,
    pub n: usize,
    pub generators: Vec<Vec<u64>>,
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn code(ring: FiniteRing, gens: &[&[u16]]) -> LinearCode {
        let n = gens.first().map_or(0, |g| g.len());
        LinearCode::span(Arc::new(ring), n, gens.iter().map(|g| g.iter().map(|&e| Elem(e)).collect()).collect())
            .unwrap()
    }

    fn z4_example() -> LinearCode {
        code(FiniteRing::zm(4).unwrap(), &[&[1, 1, 0], &[0, 0, 3]])
    }

    fn hamming8() -> LinearCode {
        code(
            FiniteRing::zm(2).unwrap(),
            &[
                &[1, 1, 1, 1, 0, 0, 0, 0],
                &[0, 0, 1, 1, 1, 1, 0, 0],
                &[0, 0, 0, 0, 1, 1, 1, 1],
                &[0, 1, 0, 1, 0, 1, 0, 1],
            ],
        )
    }

    /// Dual by checking every vector of `R^n` against every codeword.
    fn naive_dual(c: &LinearCode) -> Vec<Vec<Elem>> {
        let r = c.ring();
        let n = c.len();
        let q = r.order() as u64;
        let words: Vec<Vec<Elem>> = c.codewords().collect();
        let mut out = Vec::new();
        for packed in 0..q.pow(n as u32) {
            let v = Packer { q, n }.unpack(packed);
            if words
                .iter()
                .all(|u| u.iter().zip(&v).fold(Elem::ZERO, |acc, (&a, &b)| r.add(acc, r.mul(a, b))) == Elem::ZERO)
            {
                out.push(v);
            }
        }
        out.sort();
        out
    }

    #[test]
    fn span_sizes() {
        let c = z4_example();
        assert_eq!(c.size(), 16);
        assert!(c.is_closed());
        let zero = LinearCode::zero_code(Arc::new(FiniteRing::zm(4).unwrap()), 3).unwrap();
        assert_eq!(zero.size(), 1);
        let h = hamming8();
        assert_eq!(h.size(), 16);
        assert!(h.is_closed());
    }

    #[test]
    fn duals() {
        let c = z4_example();
        let d = c.dual(false).unwrap();
        assert_eq!(d.size(), 4);
        let mut got: Vec<_> = d.codewords().collect();
        got.sort();
        assert_eq!(got, naive_dual(&c));
        assert_eq!(d.dual(false).unwrap(), c);

        let zero = LinearCode::zero_code(Arc::new(FiniteRing::zm(4).unwrap()), 3).unwrap();
        assert_eq!(zero.dual(false).unwrap().size(), 64);

        let h = hamming8();
        assert_eq!(h.dual(false).unwrap(), h);
    }

    #[test]
    fn hermitian_dual() {
        let f4 = Arc::new(FiniteRing::gf(2, 2, None).unwrap());
        // (1, w) with w = x (index 2): 1 + w * conj(w) = 1 + w^3 = 0
        let c = LinearCode::span(f4.clone(), 2, vec![vec![Elem(1), Elem(2)]]).unwrap();
        assert_eq!(c.dual(true).unwrap(), c);
        assert_ne!(c.dual(false).unwrap(), c);
        let z4 = z4_example();
        assert_eq!(z4.dual(true).unwrap_err(), Error::ConjugationUnsupported);
    }

    #[test]
    fn puncture_and_shorten() {
        let c = z4_example();
        let s = c.shorten(0b100).unwrap();
        assert_eq!((s.len(), s.size()), (2, 4));
        assert!(s.contains(&[Elem(1), Elem(1)]));
        assert_eq!(c.puncture(0).unwrap(), c);
        assert_eq!(c.shorten(0).unwrap(), c);
        // |C| = |C/X| * |C \ (E - X)| with X = {3}
        let p = c.puncture(0b011).unwrap();
        assert_eq!(p.size(), 4);
        assert_eq!(c.size(), s.size() * p.size());
        let r = c.restrict(0b011).unwrap();
        assert_eq!((r.len(), r.size()), (3, 4));
    }

    #[test]
    fn lemma_size_product_everywhere() {
        for c in [z4_example(), hamming8()] {
            let e = subset::full(c.len());
            for x in 0..=e {
                let lhs = c.shorten(x).unwrap().size() * c.puncture(e & !x).unwrap().size();
                assert_eq!(lhs, c.size());
            }
        }
    }

    #[test]
    fn counters_on_z4_example() {
        let c = z4_example();
        let sc = c.support_counters(1);
        assert_eq!(sc.a[0b100], BigInt::from(3));
        assert_eq!(sc.a[0b011], BigInt::from(3));
        assert_eq!(sc.a[0b111], BigInt::from(9));
        assert_eq!(sc.a[0], BigInt::from(1));
        assert_eq!(sc.b[0b111], BigInt::from(16));
        assert!(sc.is_consistent());
        for m in 1..=3 {
            let sc = c.support_counters(m);
            assert_eq!(sc.total(), BigInt::from(16u64.pow(m)));
            assert_eq!(sc.a, c.support_counters_by_enumeration(m).unwrap());
        }
    }

    #[test]
    fn zero_code_counters() {
        let zero = LinearCode::zero_code(Arc::new(FiniteRing::zm(9).unwrap()), 4).unwrap();
        for m in 1..=2 {
            let sc = zero.support_counters(m);
            assert_eq!(sc.a[0], BigInt::from(1));
            assert!(sc.a[1..].iter().all(|v| v.is_zero()));
        }
    }

    #[test]
    fn frobenius_size_duality() {
        for c in [z4_example(), hamming8(), code(FiniteRing::zm(8).unwrap(), &[&[2, 4, 6], &[0, 4, 1]])] {
            let d = c.dual(false).unwrap();
            let q = c.ring().order();
            assert_eq!(c.size() * d.size(), q.pow(c.len() as u32));
            let e = subset::full(c.len());
            for x in 0..=e {
                let lhs = c.puncture(e & !x).unwrap().size() * d.shorten(e & !x).unwrap().size();
                assert_eq!(lhs, q.pow(subset::size(x) as u32));
            }
        }
    }

    #[test]
    fn caps_are_enforced() {
        let f16 = Arc::new(FiniteRing::gf(2, 4, None).unwrap());
        let zero = LinearCode::zero_code(f16, 7).unwrap();
        assert!(matches!(zero.dual(false), Err(Error::EnumerationTooLarge { .. })));
        let c = z4_example();
        assert!(matches!(c.support_counters_by_enumeration(6), Err(Error::EnumerationTooLarge { .. })));
    }

    #[test]
    fn json_roundtrip() {
        let j: CodeJson =
            serde_json::from_str(r#"{"ring":{"kind":"Zm","m":4},"n":3,"generators":[[1,1,0],[0,0,3]]}"#).unwrap();
        let c = LinearCode::from_json(&j).unwrap();
        assert_eq!(c, z4_example());
        assert_eq!(c.to_json(), j);
        let bad: CodeJson =
            serde_json::from_str(r#"{"ring":{"kind":"Zm","m":4},"n":3,"generators":[[1,1,7]]}"#).unwrap();
        assert!(LinearCode::from_json(&bad).is_err());
    }
}
