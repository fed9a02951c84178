//! Harmonic weight enumerators of codes, harmonic Tutte and coboundary
//! polynomials of demi-matroids, and exact checks of the identities that
//! relate them.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use crate::code::LinearCode;
use crate::demimatroid::DemiMatroid;
use crate::error::{Error, Result};
use crate::harmonic::SubsetFn;
use crate::poly::{
    big, exp, fmt_rational, int, rational_pow, Coeff, Exp, ExpPoly, LinearForm, Monomial, TutteForm, Var,
};
use crate::ring::RingKind;
use crate::subset::{self, Subset};

/// Rational sample points used for identities involving rational functions.
pub const SAMPLE_POINTS: usize = 25;

pub const DEFAULT_SEED: u64 = 0x5eed;

fn check_length(n: usize, f: &SubsetFn) -> Result<()> {
    if f.n() != n {
        return Err(Error::Mismatch(format!("function on {} points, ground set has {n}", f.n())));
    }
    Ok(())
}

fn sign(d: usize) -> Coeff {
    if d % 2 == 0 {
        int(1)
    } else {
        int(-1)
    }
}

fn x_minus_y_powers(k: usize) -> Vec<ExpPoly> {
    let base = ExpPoly::var(Var::X) - ExpPoly::var(Var::Y);
    let mut out = vec![ExpPoly::one()];
    for i in 1..=k {
        let next = &out[i - 1] * &base;
        out.push(next);
    }
    out
}

fn xy(x: usize, y: usize, lambda: Exp) -> Monomial {
    [exp(x as i64), exp(y as i64), lambda]
}

/// `W = sum f~(X) A^[m](X) x^|E-X| y^|X|`.
pub fn weight_enum(c: &LinearCode, f: &SubsetFn, m: u32) -> Result<ExpPoly> {
    let n = c.len();
    check_length(n, f)?;
    let a = c.support_counters(m).a;
    let ft = f.tilde_table();
    let mut w = ExpPoly::zero();
    for x in 0..=subset::full(n) {
        let (fx, ax) = (&ft[x as usize], &a[x as usize]);
        if fx.is_zero() || ax.is_zero() {
            continue;
        }
        let k = subset::size(x);
        w.add_term(xy(n - k, k, exp(0)), fx * big(ax.clone()));
    }
    Ok(w)
}

/// `Z = W / (xy)^d`.
pub fn z_poly(c: &LinearCode, f: &SubsetFn, m: u32) -> Result<ExpPoly> {
    let d = exp(f.degree() as i64);
    weight_enum(c, f, m)?.divide_by_monomial(d, d)
}

/// `Z` through the punctured-code ranks:
/// `(-1)^d sum f~(X) (|R|^m)^(alpha(E) - alpha(X)) (x-y)^(|X|-d) y^(|E-X|-d)`.
pub fn z_via_newz(c: &LinearCode, f: &SubsetFn, m: u32) -> Result<ExpPoly> {
    let n = c.len();
    check_length(n, f)?;
    let d = f.degree();
    let e = subset::full(n);
    let inner = c.inner_counts();
    let ft = f.tilde_table();
    let xmy = x_minus_y_powers(n);
    let mut z = ExpPoly::zero();
    for x in 0..=e {
        let k = subset::size(x);
        let fx = &ft[x as usize];
        if k < d || k + d > n || fx.is_zero() {
            continue;
        }
        // (|R|^m)^(alpha(E) - alpha(X)) = (|C| / |C \ (E-X)|)^m = |C/X|^m.
        let ratio = num_traits::pow(big(inner[(e & !x) as usize]), m as usize);
        let coeff = fx * ratio;
        z = z + xmy[k - d].mul_monomial(xy(0, n - k - d, exp(0))).scale(&coeff);
    }
    Ok(z.scale(&sign(d)))
}

/// `Z` of the dual code from `C` alone:
/// `sum f~(X) (|R|^m)^(d - alpha(X)) (x-y)^(|E-X|-d) (|R|^m y)^(|X|-d)`.
pub fn z_dual_via_newzperp(c: &LinearCode, f: &SubsetFn, m: u32) -> Result<ExpPoly> {
    let n = c.len();
    check_length(n, f)?;
    let d = f.degree();
    let e = subset::full(n);
    let inner = c.inner_counts();
    let ft = f.tilde_table();
    let xmy = x_minus_y_powers(n);
    let q = num_traits::pow(big(c.ring().order() as u64), m as usize);
    let size = big(c.size() as u64);
    let mut z = ExpPoly::zero();
    for x in 0..=e {
        let k = subset::size(x);
        let fx = &ft[x as usize];
        if k < d || k + d > n || fx.is_zero() {
            continue;
        }
        // (|R|^m)^(-alpha(X)) = (|C/X| / |C|)^m.
        let punctured = num_traits::pow(big(inner[(e & !x) as usize]) / &size, m as usize);
        let coeff = fx * num_traits::pow(q.clone(), d) * punctured * num_traits::pow(q.clone(), k - d);
        z = z + xmy[n - k - d].mul_monomial(xy(0, k - d, exp(0))).scale(&coeff);
    }
    Ok(z)
}

/// `sum_j (-1)^(d-j) C(e-d+j, e-i) C(d, j) == C(e-d, i)` in big integers.
pub fn binomial_identity(e_size: usize, d: usize, i: usize) -> bool {
    let b = |n: i64, k: i64| BigInt::from(subset::binomial(n, k));
    let (e, d, i) = (e_size as i64, d as i64, i as i64);
    let mut lhs = BigInt::zero();
    for j in 0..=d {
        let term = b(e - d + j, e - i) * b(d, j);
        if (d - j) % 2 == 0 {
            lhs += term;
        } else {
            lhs -= term;
        }
    }
    lhs == b(e - d, i)
}

/// `T(D, f; x, y) = sum f~(X) (x-1)^(s(E)-s(X)) (y-1)^(|X|-s(X))`.
pub fn harmonic_tutte(dm: &DemiMatroid, f: &SubsetFn) -> Result<TutteForm> {
    check_length(dm.n(), f)?;
    let e = dm.ground();
    let ft = f.tilde_table();
    let mut t = TutteForm::zero();
    for x in 0..=e {
        let fx = &ft[x as usize];
        if fx.is_zero() {
            continue;
        }
        t.add_term(dm.s(e) - dm.s(x), exp(subset::size(x) as i64) - dm.s(x), fx.clone());
    }
    Ok(t)
}

/// `W_D = sum f~(T) chi(D.T; lambda) x^|E-T| y^|T|`, from contractions.
pub fn harmonic_coboundary(dm: &DemiMatroid, f: &SubsetFn) -> Result<ExpPoly> {
    check_length(dm.n(), f)?;
    let n = dm.n();
    let ft = f.tilde_table();
    let mut w = ExpPoly::zero();
    for t in 0..=dm.ground() {
        let ftv = &ft[t as usize];
        if ftv.is_zero() {
            continue;
        }
        let k = subset::size(t);
        w = w + dm.dot(t).characteristic_poly().mul_monomial(xy(n - k, k, exp(0))).scale(ftv);
    }
    Ok(w)
}

/// `Z_D = W_D / (xy)^d`.
pub fn z_coboundary(dm: &DemiMatroid, f: &SubsetFn) -> Result<ExpPoly> {
    let d = exp(f.degree() as i64);
    harmonic_coboundary(dm, f)?.divide_by_monomial(d, d)
}

/// `Z_D = (-1)^d sum f~(T) lambda^(s(E)-s(T)) (x-y)^(|T|-d) y^(|E-T|-d)`.
pub fn z_coboundary_alter(dm: &DemiMatroid, f: &SubsetFn) -> Result<ExpPoly> {
    check_length(dm.n(), f)?;
    let n = dm.n();
    let d = f.degree();
    let e = dm.ground();
    let ft = f.tilde_table();
    let xmy = x_minus_y_powers(n);
    let mut z = ExpPoly::zero();
    for t in 0..=e {
        let k = subset::size(t);
        let ftv = &ft[t as usize];
        if k < d || k + d > n || ftv.is_zero() {
            continue;
        }
        z = z + xmy[k - d].mul_monomial(xy(0, n - k - d, dm.s(e) - dm.s(t))).scale(ftv);
    }
    Ok(z.scale(&sign(d)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Equal,
    /// Carries a concrete differing term or sample point.
    Mismatch(String),
}

impl Verdict {
    pub fn is_equal(&self) -> bool {
        matches!(self, Verdict::Equal)
    }

    fn to_json(&self) -> Value {
        match self {
            Verdict::Equal => json!({"verdict": "equal"}),
            Verdict::Mismatch(w) => json!({"verdict": "mismatch", "witness": w}),
        }
    }
}

fn compare_polys(lhs: Result<ExpPoly>, rhs: Result<ExpPoly>) -> Verdict {
    match (lhs, rhs) {
        (Ok(l), Ok(r)) => match l.first_difference(&r) {
            None => Verdict::Equal,
            Some((m, a, b)) => Verdict::Mismatch(format!(
                "coefficient of {}: left {}, right {}",
                ExpPoly::term(Coeff::one(), m),
                fmt_rational(&a),
                fmt_rational(&b)
            )),
        },
        (Err(e), _) | (_, Err(e)) => Verdict::Mismatch(e.to_string()),
    }
}

fn compare_tutte(lhs: &TutteForm, rhs: &TutteForm) -> Verdict {
    let mut keys: Vec<(Exp, Exp)> = lhs.terms().chain(rhs.terms()).map(|(k, _)| *k).collect();
    keys.sort();
    keys.dedup();
    for &(a, b) in keys.iter().rev() {
        let (l, r) = (lhs.coeff(a, b), rhs.coeff(a, b));
        if l != r {
            let mut unit = TutteForm::zero();
            unit.add_term(a, b, Coeff::one());
            return Verdict::Mismatch(format!(
                "coefficient of {unit}: left {}, right {}",
                fmt_rational(&l),
                fmt_rational(&r)
            ));
        }
    }
    Verdict::Equal
}

/// Runs `point` for each sample and compares both sides exactly.
fn compare_samples(
    rng: &mut ChaCha8Rng,
    mut draw: impl FnMut(&mut ChaCha8Rng) -> Option<Vec<(&'static str, Coeff)>>,
    sides: impl Fn(&[(&'static str, Coeff)]) -> Result<(Coeff, Coeff)>,
) -> Verdict {
    let mut done = 0;
    let mut attempts = 0;
    while done < SAMPLE_POINTS {
        attempts += 1;
        if attempts > 100 * SAMPLE_POINTS {
            return Verdict::Mismatch("could not draw admissible sample points".into());
        }
        let Some(point) = draw(rng) else { continue };
        let at = || point.iter().map(|(k, v)| format!("{k}={}", fmt_rational(v))).collect::<Vec<_>>().join(", ");
        match sides(&point) {
            Ok((l, r)) if l == r => done += 1,
            Ok((l, r)) => {
                return Verdict::Mismatch(format!("at {}: left {}, right {}", at(), fmt_rational(&l), fmt_rational(&r)))
            }
            Err(e) => return Verdict::Mismatch(format!("at {}: {e}", at())),
        }
    }
    Verdict::Equal
}

/// Small nonzero rational `a/b`.
fn small_rational(rng: &mut ChaCha8Rng) -> Coeff {
    let mut a: i64 = rng.gen_range(1..=7);
    if rng.gen_bool(0.5) {
        a = -a;
    }
    Coeff::new(a.into(), rng.gen_range(1..=4i64).into())
}

/// Least common multiple of the denominators of the rank values.
fn rank_denominator(dm: &DemiMatroid) -> u32 {
    let mut l: i64 = 1;
    for x in 0..=dm.ground() {
        l = l.lcm(dm.s(x).denom()).lcm(dm.t(x).denom());
    }
    l as u32
}

fn lpow(v: &Coeff, l: u32) -> Coeff {
    num_traits::pow(v.clone(), l as usize)
}

fn get(point: &[(&'static str, Coeff)], key: &str) -> Coeff {
    point.iter().find(|(k, _)| *k == key).map(|(_, v)| v.clone()).expect("sample point key")
}

/// Named identity verdicts plus the polynomials they were computed from.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EnumeratorReport {
    pub subject: String,
    pub function: String,
    pub m: Option<u32>,
    pub seed: Option<u64>,
    pub polynomials: BTreeMap<String, String>,
    pub checks: Vec<(String, Verdict)>,
}

impl EnumeratorReport {
    fn new(subject: String, f: &SubsetFn, m: Option<u32>, seed: Option<u64>) -> Self {
        EnumeratorReport { subject, function: describe_fn(f), m, seed, ..Default::default() }
    }

    fn poly(&mut self, name: &str, p: &Result<ExpPoly>) {
        let text = match p {
            Ok(p) => p.to_string(),
            Err(e) => format!("error: {e}"),
        };
        self.polynomials.insert(name.to_string(), text);
    }

    fn check(&mut self, name: &str, v: Verdict) {
        self.checks.push((name.to_string(), v));
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|(_, v)| v.is_equal())
    }

    pub fn first_mismatch(&self) -> Option<(&str, &str)> {
        self.checks.iter().find_map(|(n, v)| match v {
            Verdict::Mismatch(w) => Some((n.as_str(), w.as_str())),
            Verdict::Equal => None,
        })
    }

    /// Appends the checks and polynomials of another report on the same input.
    /// A check already present by name is computed from the same data and kept once.
    pub fn absorb(&mut self, other: EnumeratorReport) {
        self.polynomials.extend(other.polynomials);
        for (name, v) in other.checks {
            if !self.checks.iter().any(|(n, _)| *n == name) {
                self.checks.push((name, v));
            }
        }
        self.seed = self.seed.or(other.seed);
    }

    pub fn to_json(&self) -> Value {
        let mut checks = Map::new();
        for (n, v) in &self.checks {
            checks.insert(n.clone(), v.to_json());
        }
        let mut out = Map::new();
        out.insert("subject".into(), json!(self.subject));
        out.insert("function".into(), json!(self.function));
        if let Some(m) = self.m {
            out.insert("m".into(), json!(m));
        }
        if let Some(s) = self.seed {
            out.insert("seed".into(), json!(s));
        }
        out.insert("polynomials".into(), json!(self.polynomials));
        out.insert("checks".into(), Value::Object(checks));
        out.insert("passed".into(), json!(self.passed()));
        Value::Object(out)
    }

    pub fn render_text(&self) -> String {
        let mut s = format!("{}\nf: {}\n", self.subject, self.function);
        if let Some(m) = self.m {
            s.push_str(&format!("m: {m}\n"));
        }
        if let Some(seed) = self.seed {
            s.push_str(&format!("seed: {seed}\n"));
        }
        for (k, v) in &self.polynomials {
            s.push_str(&format!("{k} = {v}\n"));
        }
        for (k, v) in &self.checks {
            match v {
                Verdict::Equal => s.push_str(&format!("{k}: equal\n")),
                Verdict::Mismatch(w) => s.push_str(&format!("{k}: MISMATCH ({w})\n")),
            }
        }
        s
    }
}

pub fn describe_fn(f: &SubsetFn) -> String {
    let vals: Vec<String> = f
        .support()
        .map(|(z, v)| {
            let elems = subset::to_list(z).iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",");
            format!("{{{elems}}}:{}", fmt_rational(v))
        })
        .collect();
    format!("n={} d={} [{}]", f.n(), f.degree(), vals.join(" "))
}

pub fn describe_code(c: &LinearCode) -> String {
    let gens: Vec<String> = c
        .generators()
        .iter()
        .map(|g| format!("({})", g.iter().map(|e| e.0.to_string()).collect::<Vec<_>>().join(",")))
        .collect();
    format!("{} n={} |C|={} span{{{}}}", c.ring().name(), c.len(), c.size(), gens.join(","))
}

/// A code with its brute-force dual and its demi-matroid `(E, alpha, beta)`.
#[derive(Debug, Clone)]
pub struct CodeContext {
    pub code: LinearCode,
    pub dual: LinearCode,
    pub conjugate: bool,
    pub dm: DemiMatroid,
}

impl CodeContext {
    pub fn new(code: LinearCode, conjugate: bool) -> Result<Self> {
        let dual = code.dual(conjugate)?;
        let dm = DemiMatroid::from_code_and_dual(&code, &dual, crate::demimatroid::Flavor::AlphaBeta)?;
        Ok(CodeContext { code, dual, conjugate, dm })
    }

    fn q_m(&self, m: u32) -> Coeff {
        num_traits::pow(int(self.code.ring().order() as i64), m as usize)
    }
}

/// Greene-type identity `Z_C^[m](x,y) = Z_{D_C}(|R|^m, x, y)`, the
/// AlterCoboundary route, and the Tutte-form corollary at sample points.
pub fn verify_greene(ctx: &CodeContext, f: &SubsetFn, m: u32, seed: u64) -> EnumeratorReport {
    let mut rep = EnumeratorReport::new(describe_code(&ctx.code), f, Some(m), Some(seed));
    let n = ctx.code.len();
    let d = f.degree();
    let q = ctx.q_m(m);
    let z = z_poly(&ctx.code, f, m);
    let zd = z_coboundary(&ctx.dm, f);
    let zd_alt = z_coboundary_alter(&ctx.dm, f);
    rep.poly("W_C", &weight_enum(&ctx.code, f, m));
    rep.poly("Z_C", &z);
    rep.poly("W_D", &harmonic_coboundary(&ctx.dm, f));
    rep.poly("Z_D", &zd);
    let evaluated = zd.clone().and_then(|p| p.eval_var(Var::Lambda, &q));
    rep.check("greene", compare_polys(z.clone(), evaluated));
    rep.check("alter_coboundary", compare_polys(zd, zd_alt));

    let verdict = match (z, harmonic_tutte(&ctx.dm, f)) {
        (Ok(z), Ok(t)) => {
            rep.polynomials.insert("T_D".into(), t.to_string());
            let l = rank_denominator(&ctx.dm);
            let alpha_e = ctx.dm.s(ctx.dm.ground());
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            compare_samples(
                &mut rng,
                |rng| {
                    let v = lpow(&small_rational(rng), l);
                    let w = lpow(&small_rational(rng), l);
                    let x = &v + &w;
                    (!x.is_zero()).then(|| vec![("x", x), ("y", v)])
                },
                |p| {
                    let (x, y) = (get(p, "x"), get(p, "y"));
                    let lhs = z.eval(&[(Var::X, x.clone()), (Var::Y, y.clone())])?;
                    let big_x = (&x + (&q - Coeff::one()) * &y) / (&x - &y);
                    let big_y = &x / &y;
                    let rhs = sign(d)
                        * rational_pow(&(&x - &y), alpha_e - exp(d as i64))?
                        * rational_pow(&y, exp((n - d) as i64) - alpha_e)?
                        * t.eval(&big_x, &big_y)?;
                    Ok((lhs, rhs))
                },
            )
        }
        (Err(e), _) | (_, Err(e)) => Verdict::Mismatch(e.to_string()),
    };
    rep.check("greene_corollary", verdict);
    rep
}

/// MacWilliams-type identity against the brute-force dual. With
/// `field_scaled`, the `q^(m/2)`-normalised form is checked through
/// homogeneity, which turns its prefactor into `q^(md) / |C|^m`.
pub fn verify_macwilliams(ctx: &CodeContext, f: &SubsetFn, m: u32, field_scaled: bool) -> Result<EnumeratorReport> {
    if field_scaled && ctx.code.ring().kind() != RingKind::Gf {
        return Err(Error::Input("the field-scaled form needs a finite field".into()));
    }
    let mut rep = EnumeratorReport::new(describe_code(&ctx.code), f, Some(m), None);
    let n = ctx.code.len();
    let d = f.degree();
    let q = ctx.q_m(m);
    let size_m = num_traits::pow(big(ctx.code.size() as u64), m as usize);
    let z = z_poly(&ctx.code, f, m);
    let z_dual = z_poly(&ctx.dual, f, m);
    rep.poly("Z_C", &z);
    rep.poly("Z_dual", &z_dual);
    let subst = |z: &ExpPoly| {
        z.substitute_linear(&[
            (Var::X, LinearForm::new(int(1), &q - Coeff::one())),
            (Var::Y, LinearForm::new(int(1), int(-1))),
        ])
    };
    let transform = z.clone().and_then(|z| {
        let factor = sign(d) * num_traits::pow(q.clone(), d) / &size_m;
        Ok(subst(&z)?.scale(&factor))
    });
    rep.poly("transform", &transform);
    rep.check("macwilliams", compare_polys(z_dual.clone(), transform));

    if field_scaled {
        let scaled = z.and_then(|z| {
            let degree = exp((n - 2 * d) as i64);
            if !z.is_zero() && z.homogeneous_xy_degree() != Some(degree) {
                return Err(Error::Mismatch(format!("Z_C is not homogeneous of degree {degree}")));
            }
            // q^(nm/2) * q^(-m(n-2d)/2): exponents combined before any power is taken.
            let qq = int(ctx.code.ring().order() as i64);
            let e = Exp::new((n * m as usize) as i64, 2) - Exp::new(m as i64 * (n as i64 - 2 * d as i64), 2);
            let factor = sign(d) * rational_pow(&qq, e)? / &size_m;
            Ok(subst(&z)?.scale(&factor))
        });
        rep.check("macwilliams_field_scaled", compare_polys(z_dual, scaled));
    }
    Ok(rep)
}

/// NewZ and NewZperp against the definitional enumerators of `C` and its dual.
pub fn verify_newz(ctx: &CodeContext, f: &SubsetFn, m: u32) -> EnumeratorReport {
    let mut rep = EnumeratorReport::new(describe_code(&ctx.code), f, Some(m), None);
    rep.check("newz", compare_polys(z_poly(&ctx.code, f, m), z_via_newz(&ctx.code, f, m)));
    rep.check("newzperp", compare_polys(z_poly(&ctx.dual, f, m), z_dual_via_newzperp(&ctx.code, f, m)));
    rep
}

/// Duality relations for the Tutte and coboundary forms, the two coboundary
/// routes, and the Tutte/coboundary equivalence.
pub fn verify_dualities(dm: &DemiMatroid, f: &SubsetFn, seed: u64) -> EnumeratorReport {
    let mut rep = EnumeratorReport::new(format!("demi-matroid on {} points", dm.n()), f, None, Some(seed));
    let d = f.degree();
    let e = dm.ground();
    let (se, te) = (dm.s(e), dm.t(e));
    let sg = sign(d);
    let l = rank_denominator(dm);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dual = dm.dual();
    let supp = dm.supplement();

    let t = harmonic_tutte(dm, f);
    if let Ok(t) = &t {
        rep.polynomials.insert("T_D".into(), t.to_string());
    }
    let z = z_coboundary(dm, f);
    rep.poly("Z_D", &z);
    rep.check("alter_coboundary", compare_polys(z.clone(), z_coboundary_alter(dm, f)));

    let (t, z) = match (t, z) {
        (Ok(t), Ok(z)) => (t, z),
        (Err(e), _) | (_, Err(e)) => {
            rep.check("dualities", Verdict::Mismatch(e.to_string()));
            return rep;
        }
    };

    // T(D*, f; x, y) = (-1)^d T(D, f; y, x), compared term by term.
    match harmonic_tutte(&dual, f) {
        Ok(td) => rep.check("dual_supp_i", compare_tutte(&td, &t.swap_variables().scale(&sg))),
        Err(e) => rep.check("dual_supp_i", Verdict::Mismatch(e.to_string())),
    }

    // T(D-bar, f; x, y) = (-1)^d (x-1)^s(E) (y-1)^t(E) T(D, f; x/(x-1), y/(y-1)).
    let verdict = match harmonic_tutte(&supp, f) {
        Ok(tb) => compare_samples(
            &mut rng,
            |rng| {
                let x = Coeff::one() + lpow(&small_rational(rng), l);
                let y = Coeff::one() + lpow(&small_rational(rng), l);
                Some(vec![("x", x), ("y", y)])
            },
            |p| {
                let (x, y) = (get(p, "x"), get(p, "y"));
                let (x1, y1) = (&x - Coeff::one(), &y - Coeff::one());
                let lhs = tb.eval(&x, &y)?;
                let rhs = &sg * rational_pow(&x1, se)? * rational_pow(&y1, te)? * t.eval(&(&x / &x1), &(&y / &y1))?;
                Ok((lhs, rhs))
            },
        ),
        Err(e) => Verdict::Mismatch(e.to_string()),
    };
    rep.check("dual_supp_ii", verdict);

    // lambda^(s(E)-d) Z_{D*}(lambda, x, y) = (-1)^d Z_D(lambda, x + (lambda-1) y, x - y), symbolically.
    let lambda = ExpPoly::var(Var::Lambda);
    let (xv, yv) = (ExpPoly::var(Var::X), ExpPoly::var(Var::Y));
    let lhs = z_coboundary(&dual, f).map(|zd| zd.mul_monomial([exp(0), exp(0), se - exp(d as i64)]));
    let rhs = z
        .substitute(&[(Var::X, &xv + &(&(&lambda - &ExpPoly::one()) * &yv)), (Var::Y, &xv - &yv)])
        .map(|p| p.scale(&sg));
    rep.check("coboundary_dual_supp_i", compare_polys(lhs, rhs));

    // lambda^(-s(E)) Z_{D-bar}(lambda, x, y) = (-1)^d Z_D(1/lambda, x, x - y).
    let verdict = match z_coboundary(&supp, f) {
        Ok(zb) => compare_samples(
            &mut rng,
            |rng| {
                let lam = lpow(&small_rational(rng), l);
                let x = small_rational(rng);
                let y = small_rational(rng);
                (x != y).then(|| vec![("lambda", lam), ("x", x), ("y", y)])
            },
            |p| {
                let (lam, x, y) = (get(p, "lambda"), get(p, "x"), get(p, "y"));
                let lhs = rational_pow(&lam, -se)?
                    * zb.eval(&[(Var::Lambda, lam.clone()), (Var::X, x.clone()), (Var::Y, y.clone())])?;
                let rhs = &sg * z.eval(&[(Var::Lambda, lam.recip()), (Var::X, x.clone()), (Var::Y, &x - &y)])?;
                Ok((lhs, rhs))
            },
        ),
        Err(e) => Verdict::Mismatch(e.to_string()),
    };
    rep.check("coboundary_dual_supp_ii", verdict);

    // (-1)^d (y-1)^(s(E)-d) T(D, f; x, y) = Z_D((x-1)(y-1), y, 1).
    let verdict = compare_samples(
        &mut rng,
        |rng| {
            let u = lpow(&small_rational(rng), l);
            let v = lpow(&small_rational(rng), l);
            Some(vec![("x", Coeff::one() + u), ("y", Coeff::one() + v)])
        },
        |p| {
            let (x, y) = (get(p, "x"), get(p, "y"));
            let y1 = &y - Coeff::one();
            let lhs = &sg * rational_pow(&y1, se - exp(d as i64))? * t.eval(&x, &y)?;
            let lam = (&x - Coeff::one()) * &y1;
            let rhs = z.eval(&[(Var::Lambda, lam), (Var::X, y.clone()), (Var::Y, Coeff::one())])?;
            Ok((lhs, rhs))
        },
    );
    rep.check("tutte_coboundary_equivalence", verdict);
    rep
}

/// `sum f~(X) A^[m](X)` computed directly, the value of `W` at `x = y = 1`.
pub fn tilde_weighted_count(c: &LinearCode, f: &SubsetFn, m: u32) -> Coeff {
    let a = c.support_counters(m).a;
    let ft = f.tilde_table();
    ft.iter().zip(a).fold(Coeff::zero(), |acc, (fx, ax)| acc + fx * big(ax))
}

/// Sum of `f~` over all `t`-subsets.
pub fn tilde_level_total(f: &SubsetFn, t: usize) -> Coeff {
    subset::k_subsets(f.n(), t).into_iter().map(|x: Subset| f.tilde(x)).fold(Coeff::zero(), |a, b| a + b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::demimatroid::{free, Flavor};
    use crate::harmonic::harm_basis;
    use crate::ring::{Elem, FiniteRing};
    use std::sync::Arc;

    fn code(ring: FiniteRing, gens: &[&[u16]]) -> LinearCode {
        let n = gens[0].len();
        LinearCode::span(Arc::new(ring), n, gens.iter().map(|g| g.iter().map(|&e| Elem(e)).collect()).collect())
            .unwrap()
    }

    fn z4_example() -> LinearCode {
        code(FiniteRing::zm(4).unwrap(), &[&[1, 1, 0], &[0, 0, 3]])
    }

    #[test]
    fn z4_example_polynomials() {
        let c = z4_example();
        let dm = DemiMatroid::from_code(&c, Flavor::AlphaBeta).unwrap();
        for f in harm_basis(3, 1).unwrap() {
            assert_eq!(weight_enum(&c, &f, 1).unwrap().to_string(), "-3*x^2*y + 3*x*y^2");
            assert_eq!(z_poly(&c, &f, 1).unwrap().to_string(), "-3*x + 3*y");
            assert_eq!(z_via_newz(&c, &f, 1).unwrap().to_string(), "-3*x + 3*y");
            assert_eq!(harmonic_tutte(&dm, &f).unwrap().to_string(), "(x-1)*(y-1) - 1");
            let w = harmonic_coboundary(&dm, &f).unwrap();
            let lam = ExpPoly::var(Var::Lambda) - ExpPoly::one();
            let expected = &lam
                * &(ExpPoly::monomial(int(1), exp(1), exp(2), exp(0))
                    - ExpPoly::monomial(int(1), exp(2), exp(1), exp(0)));
            assert_eq!(w, expected);
            assert_eq!(
                z_coboundary(&dm, &f).unwrap().eval_var(Var::Lambda, &int(4)).unwrap(),
                z_poly(&c, &f, 1).unwrap()
            );
        }
    }

    #[test]
    fn z4_example_reports() {
        let ctx = CodeContext::new(z4_example(), false).unwrap();
        for f in harm_basis(3, 1).unwrap() {
            for m in 1..=2 {
                let g = verify_greene(&ctx, &f, m, 7);
                assert!(g.passed(), "{}", g.render_text());
                let mw = verify_macwilliams(&ctx, &f, m, false).unwrap();
                assert!(mw.passed(), "{}", mw.render_text());
                assert!(verify_newz(&ctx, &f, m).passed());
            }
            let r = verify_dualities(&ctx.dm, &f, 11);
            assert!(r.passed(), "{}", r.render_text());
        }
    }

    #[test]
    fn zero_code_vanishes() {
        let c = LinearCode::zero_code(Arc::new(FiniteRing::zm(4).unwrap()), 4).unwrap();
        for f in harm_basis(4, 1).unwrap() {
            assert!(weight_enum(&c, &f, 1).unwrap().is_zero());
            assert!(z_via_newz(&c, &f, 1).unwrap().is_zero());
            assert!(z_dual_via_newzperp(&c, &f, 1).unwrap().is_zero());
        }
    }

    #[test]
    fn classical_case() {
        let rep = code(FiniteRing::gf(2, 1, None).unwrap(), &[&[1, 1, 1]]);
        let one = crate::harmonic::HarmonicFunction::constant(3, int(1)).unwrap();
        let z = z_poly(&rep, &one, 1).unwrap();
        assert_eq!(z.to_string(), "x^3 + y^3");
        let ctx = CodeContext::new(rep, false).unwrap();
        assert!(verify_greene(&ctx, &one, 1, 1).passed());
        assert!(verify_macwilliams(&ctx, &one, 1, true).unwrap().passed());
    }

    #[test]
    fn binomial_sweep() {
        assert!(binomial_identity(5, 2, 1));
        for e in 0..=12 {
            for d in 0..=6.min(e) {
                for i in 0..=e - d {
                    assert!(binomial_identity(e, d, i), "{e} {d} {i}");
                }
            }
        }
    }

    #[test]
    fn free_pair_dualities() {
        for f in harm_basis(2, 1).unwrap() {
            let r = verify_dualities(&free(2), &f, 3);
            assert!(r.passed(), "{}", r.render_text());
            let r = verify_dualities(&free(2).dual(), &f, 3);
            assert!(r.passed(), "{}", r.render_text());
        }
    }

    #[test]
    fn tutte_dual_involution() {
        let dm = DemiMatroid::from_code(&z4_example(), Flavor::AlphaBeta).unwrap();
        let f = &harm_basis(3, 1).unwrap()[0];
        let t = harmonic_tutte(&dm, f).unwrap();
        let twice = harmonic_tutte(&dm.dual().dual(), f).unwrap();
        assert_eq!(t, twice);
    }

    #[test]
    fn mismatch_has_witness() {
        let v = compare_polys(Ok(ExpPoly::var(Var::X)), Ok(ExpPoly::var(Var::Y)));
        match v {
            Verdict::Mismatch(w) => assert_eq!(w, "coefficient of x: left 1, right 0"),
            Verdict::Equal => panic!("expected mismatch"),
        }
        let mut r = EnumeratorReport::default();
        r.check("demo", Verdict::Mismatch("w".into()));
        assert_eq!(r.to_json()["checks"]["demo"]["witness"], "w");
    }
}
