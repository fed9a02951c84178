//! Subsets of `E = {1..n}` as bitmasks (bit `i-1` stands for element `i`).

use crate::error::{Error, Result};

pub type Subset = u32;

pub const MAX_N: usize = 16;

#[inline]
pub fn size(x: Subset) -> usize {
    x.count_ones() as usize
}

#[inline]
pub fn full(n: usize) -> Subset {
    if n == 0 {
        0
    } else {
        u32::MAX >> (32 - n)
    }
}

/// All `k`-subsets of `{1..n}` in lexicographic order of their sorted
/// element lists.
pub fn k_subsets(n: usize, k: usize) -> Vec<Subset> {
    fn rec(start: usize, n: usize, k: usize, acc: Subset, out: &mut Vec<Subset>) {
        if k == 0 {
            out.push(acc);
            return;
        }
        for i in start..n {
            if n - i < k {
                break;
            }
            rec(i + 1, n, k - 1, acc | (1 << i), out);
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, 0, &mut out);
    }
    out
}

/// Iterates over all submasks of `x`, including `0` and `x` itself.
pub fn submasks(x: Subset) -> impl Iterator<Item = Subset> {
    let mut next = Some(x);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 { None } else { Some((cur - 1) & x) };
        Some(cur)
    })
}

/// 1-based sorted element list.
pub fn to_list(x: Subset) -> Vec<usize> {
    (0..32).filter(|i| x >> i & 1 == 1).map(|i| i + 1).collect()
}

pub fn from_list(n: usize, elems: &[usize]) -> Result<Subset> {
    let mut x = 0;
    for &e in elems {
        if e == 0 || e > n {
            return Err(Error::Input(format!("element {e} outside 1..={n}")));
        }
        x |= 1 << (e - 1);
    }
    Ok(x)
}

/// Packs the bits of `x` selected by `keep` into the low bits, preserving
/// order. Used to re-index subsets of `E - T` onto `{1..|E-T|}`.
pub fn compress(x: Subset, keep: Subset) -> Subset {
    let mut out = 0;
    let mut j = 0;
    let mut k = keep;
    while k != 0 {
        let i = k.trailing_zeros();
        if x >> i & 1 == 1 {
            out |= 1 << j;
        }
        j += 1;
        k &= k - 1;
    }
    out
}

/// Inverse of [`compress`]: spreads the low `|keep|` bits of `y` onto the
/// positions of `keep`.
pub fn expand(y: Subset, keep: Subset) -> Subset {
    let mut out = 0;
    let mut j = 0;
    let mut k = keep;
    while k != 0 {
        let i = k.trailing_zeros();
        if y >> j & 1 == 1 {
            out |= 1 << i;
        }
        j += 1;
        k &= k - 1;
    }
    out
}

pub fn binomial(n: i64, k: i64) -> u128 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k) as u128;
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n as u128 - i) / (i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lexicographic_k_subsets() {
        let s: Vec<Vec<usize>> = k_subsets(4, 2).into_iter().map(to_list).collect();
        assert_eq!(s, vec![vec![1, 2], vec![1, 3], vec![1, 4], vec![2, 3], vec![2, 4], vec![3, 4]]);
        assert_eq!(k_subsets(3, 0), vec![0]);
        assert!(k_subsets(2, 3).is_empty());
    }

    #[test]
    fn submask_enumeration() {
        let mut v: Vec<_> = submasks(0b101).collect();
        v.sort();
        assert_eq!(v, vec![0, 1, 4, 5]);
        assert_eq!(submasks(0).collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn compress_expand_roundtrip() {
        let keep = 0b10110;
        for y in 0..8 {
            assert_eq!(compress(expand(y, keep), keep), y);
        }
        assert_eq!(compress(0b10010, keep), 0b101);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(3, -1), 0);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial(0, 0), 1);
    }
}
