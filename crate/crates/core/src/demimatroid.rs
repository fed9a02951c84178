//! Real demi-matroids `(E, s, t)` as dense rank tables over `2^E`.
//!
//! Ranks are exact rationals. For codes over `Z_{p^e}` they are multiples of
//! `1/e`, since every subcode has order a power of `p`.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::code::LinearCode;
use crate::error::{Error, Result};
use crate::poly::{exp, fmt_rational, int, Exp, ExpPoly};
use crate::subset::{self, Subset, MAX_N};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DemiMatroid {
    n: usize,
    s: Vec<Exp>,
    t: Vec<Exp>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flavor {
    /// `(E, alpha_C, beta_C)`: ranks from punctured codes.
    AlphaBeta,
    /// `(E, gamma_C, delta_C)`: ranks from shortened codes (the supplement).
    GammaDelta,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub axiom: &'static str,
    pub subsets: Vec<Vec<usize>>,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) fails at {:?}: {}", self.axiom, self.subsets, self.detail)
    }
}

impl DemiMatroid {
    pub fn new(n: usize, s: Vec<Exp>, t: Vec<Exp>) -> Result<Self> {
        if n > MAX_N {
            return Err(Error::Input(format!("ground set size {n} exceeds {MAX_N}")));
        }
        if s.len() != 1 << n || t.len() != 1 << n {
            return Err(Error::Input(format!("rank tables must have 2^{n} entries")));
        }
        Ok(DemiMatroid { n, s, t })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ground(&self) -> Subset {
        subset::full(self.n)
    }

    pub fn s(&self, x: Subset) -> Exp {
        self.s[x as usize]
    }

    pub fn t(&self, x: Subset) -> Exp {
        self.t[x as usize]
    }

    /// `(D1)` on covering pairs plus the bounds, then `(D2)` and `(D3)`.
    /// Returns the first violation found.
    pub fn check_axioms(&self) -> Option<Violation> {
        let e = self.ground();
        let list = subset::to_list;
        for (name, f) in [("s", &self.s), ("t", &self.t)] {
            for x in 0..=e {
                let size = exp(subset::size(x) as i64);
                let v = f[x as usize];
                if v.is_negative() || v > size {
                    return Some(Violation {
                        axiom: "D1",
                        subsets: vec![list(x)],
                        detail: format!("{name} = {} outside [0, {}]", fmt_rational(&v), size),
                    });
                }
                for i in 0..self.n {
                    let y = x | (1 << i);
                    if y != x && f[y as usize] < v {
                        return Some(Violation {
                            axiom: "D1",
                            subsets: vec![list(x), list(y)],
                            detail: format!(
                                "{name} decreases: {} > {}",
                                fmt_rational(&v),
                                fmt_rational(&f[y as usize])
                            ),
                        });
                    }
                }
            }
        }
        for x in 0..=e {
            let c = e & !x;
            let lhs = exp(subset::size(c) as i64) - self.s(c);
            let rhs = self.t(e) - self.t(x);
            if lhs != rhs {
                return Some(Violation {
                    axiom: "D2",
                    subsets: vec![list(x)],
                    detail: format!("|E-X| - s(E-X) = {} but t(E) - t(X) = {}", fmt_rational(&lhs), fmt_rational(&rhs)),
                });
            }
            let lhs = exp(subset::size(c) as i64) - self.t(c);
            let rhs = self.s(e) - self.s(x);
            if lhs != rhs {
                return Some(Violation {
                    axiom: "D3",
                    subsets: vec![list(x)],
                    detail: format!("|E-X| - t(E-X) = {} but s(E) - s(X) = {}", fmt_rational(&lhs), fmt_rational(&rhs)),
                });
            }
        }
        None
    }

    /// Demi-matroid of a code. Needs the dual for the second rank function.
    pub fn from_code(c: &LinearCode, flavor: Flavor) -> Result<Self> {
        let dual = c.dual(false)?;
        Self::from_code_and_dual(c, &dual, flavor)
    }

    pub fn from_code_and_dual(c: &LinearCode, dual: &LinearCode, flavor: Flavor) -> Result<Self> {
        if c.len() != dual.len() || c.ring() != dual.ring() {
            return Err(Error::Mismatch("code and dual differ in length or ring".into()));
        }
        let n = c.len();
        let e = subset::full(n);
        let ring = c.ring();
        let ranks = |code: &LinearCode| -> Vec<Exp> {
            // inner[X] = |code/(E-X)|; |code \ (E-X)| = |code| / |code/X|.
            let inner = code.inner_counts();
            (0..=e)
                .map(|x| match flavor {
                    Flavor::AlphaBeta => ring.log_order(code.size() as u64 / inner[(e & !x) as usize]),
                    Flavor::GammaDelta => ring.log_order(inner[x as usize]),
                })
                .collect()
        };
        DemiMatroid::new(n, ranks(c), ranks(dual))
    }

    /// `D* = (E, t, s)`.
    pub fn dual(&self) -> Self {
        DemiMatroid { n: self.n, s: self.t.clone(), t: self.s.clone() }
    }

    /// `(E, s-bar, t-bar)` with `g-bar(X) = g(E) - g(E-X)`.
    pub fn supplement(&self) -> Self {
        let e = self.ground();
        let bar = |g: &[Exp]| (0..=e).map(|x| g[e as usize] - g[(e & !x) as usize]).collect();
        DemiMatroid { n: self.n, s: bar(&self.s), t: bar(&self.t) }
    }

    fn minor(&self, t: Subset, contract_s: bool) -> Self {
        let keep = self.ground() & !t;
        let m = subset::size(keep);
        let restrict =
            |g: &[Exp]| -> Vec<Exp> { (0..1u32 << m).map(|y| g[subset::expand(y, keep) as usize]).collect() };
        let hat = |g: &[Exp]| -> Vec<Exp> {
            (0..1u32 << m).map(|y| g[(subset::expand(y, keep) | t) as usize] - g[t as usize]).collect()
        };
        if contract_s {
            DemiMatroid { n: m, s: hat(&self.s), t: restrict(&self.t) }
        } else {
            DemiMatroid { n: m, s: restrict(&self.s), t: hat(&self.t) }
        }
    }

    /// `D \ T = (E-T, s|, t^)`, re-indexed onto `{1..|E-T|}` in order.
    pub fn delete(&self, t: Subset) -> Self {
        self.minor(t & self.ground(), false)
    }

    /// `D / T = (E-T, s^, t|)` with `s^(X) = s(X u T) - s(T)`.
    pub fn contract(&self, t: Subset) -> Self {
        self.minor(t & self.ground(), true)
    }

    /// `D.T = D / (E-T)`, a demi-matroid on `T`.
    pub fn dot(&self, t: Subset) -> Self {
        self.contract(self.ground() & !t)
    }

    /// `chi(D; lambda) = sum over X of (-1)^|X| lambda^(s(E) - s(X))`.
    pub fn characteristic_poly(&self) -> ExpPoly {
        let e = self.ground();
        let se = self.s(e);
        let mut p = ExpPoly::zero();
        for x in 0..=e {
            let sign = if subset::size(x) % 2 == 0 { 1 } else { -1 };
            p.add_term([exp(0), exp(0), se - self.s(x)], int(sign));
        }
        p
    }

    pub fn to_json(&self) -> Value {
        let table = |g: &[Exp]| -> Value {
            let mut xs: Vec<Subset> = (0..=self.ground()).collect();
            xs.sort_by_key(|&x| (subset::size(x), subset::to_list(x)));
            Value::Array(
                xs.into_iter()
                    .map(|x| {
                        let label = subset::to_list(x).iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",");
                        json!([label, fmt_rational(&g[x as usize])])
                    })
                    .collect(),
            )
        };
        json!({"n": self.n, "s": table(&self.s), "t": table(&self.t)})
    }

    /// Parses `{"n":..,"s":[[subset, rank],..],"t":[..]}`. A subset is a
    /// comma-separated string (`""`, `"1"`, `"1,3"`) or an array of elements.
    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Input(format!("demi-matroid JSON: {m}"));
        let n = v.get("n").and_then(Value::as_u64).ok_or_else(|| bad("missing n"))? as usize;
        if n > MAX_N {
            return Err(bad("n too large"));
        }
        let parse_table = |key: &str| -> Result<Vec<Exp>> {
            let entries = v.get(key).and_then(Value::as_array).ok_or_else(|| bad(&format!("missing {key}")))?;
            let mut table: Vec<Option<Exp>> = vec![None; 1 << n];
            for entry in entries {
                let pair =
                    entry.as_array().filter(|p| p.len() == 2).ok_or_else(|| bad("entries are [subset, rank] pairs"))?;
                let elems: Vec<usize> = match &pair[0] {
                    Value::String(s) => s
                        .split([',', ' '])
                        .filter(|t| !t.is_empty())
                        .map(|t| t.parse::<usize>().map_err(|_| bad("bad subset label")))
                        .collect::<Result<_>>()?,
                    Value::Array(a) => a
                        .iter()
                        .map(|e| e.as_u64().map(|e| e as usize).ok_or_else(|| bad("bad element")))
                        .collect::<Result<_>>()?,
                    _ => return Err(bad("bad subset")),
                };
                let x = subset::from_list(n, &elems)?;
                let rank = match &pair[1] {
                    Value::String(s) => parse_exp(s)?,
                    Value::Number(num) => exp(num.as_i64().ok_or_else(|| bad("bad rank"))?),
                    _ => return Err(bad("bad rank")),
                };
                table[x as usize] = Some(rank);
            }
            table
                .into_iter()
                .enumerate()
                .map(|(x, r)| r.ok_or_else(|| bad(&format!("{key} missing subset {:?}", subset::to_list(x as Subset)))))
                .collect()
        };
        DemiMatroid::new(n, parse_table("s")?, parse_table("t")?)
    }
}

fn parse_exp(s: &str) -> Result<Exp> {
    let bad = || Error::Input(format!("bad rank {s:?}"));
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim().parse::<i64>().map_err(|_| bad())?, d.trim().parse::<i64>().map_err(|_| bad())?),
        None => (s.parse::<i64>().map_err(|_| bad())?, 1),
    };
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Exp::new(n, d))
}

/// `(E, |.|, 0)`: the free matroid with its dual rank.
pub fn free(n: usize) -> DemiMatroid {
    let size = 1usize << n;
    DemiMatroid { n, s: (0..size).map(|x| exp(x.count_ones() as i64)).collect(), t: vec![exp(0); size] }
}
