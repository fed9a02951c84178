//! Seeded randomized verification over random codes and harmonic functions,
//! plus a fixed set of pinned regression cases.

use std::sync::Arc;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::code::LinearCode;
use crate::demimatroid::DemiMatroid;
use crate::enumerators::{
    describe_code, describe_fn, verify_dualities, verify_greene, verify_macwilliams, verify_newz, CodeContext, Verdict,
};
use crate::error::{Error, Result};
use crate::harmonic::{harm_basis, HarmonicFunction};
use crate::ring::{Elem, FiniteRing, RingDescriptor, RingKind};
use crate::subset::{self, MAX_N};

/// Largest length for which the minor identities are checked over all `T`.
pub const MINOR_CHECK_MAX_N: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteConfig {
    pub rings: Vec<RingDescriptor>,
    pub max_n: usize,
    pub max_d: usize,
    pub max_m: u32,
    pub cases: usize,
    pub seed: u64,
    pub pinned: bool,
    pub checks: CheckSet,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            rings: default_rings(),
            max_n: 7,
            max_d: 2,
            max_m: 2,
            cases: 200,
            seed: 42,
            pinned: true,
            checks: CheckSet::all(),
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_n > MAX_N {
            return Err(Error::Input(format!("max n {} exceeds {MAX_N}", self.max_n)));
        }
        if self.max_m == 0 {
            return Err(Error::Input("max m must be positive".into()));
        }
        if self.rings.is_empty() && self.cases > 0 && self.max_n > 0 {
            return Err(Error::Input("empty ring list".into()));
        }
        Ok(())
    }

    fn to_json(&self) -> Value {
        json!({
            "rings": self.rings.iter().map(|r| FiniteRing::new(r).map(|r| r.name()).unwrap_or_default()).collect::<Vec<_>>(),
            "max_n": self.max_n,
            "max_d": self.max_d,
            "max_m": self.max_m,
            "cases": self.cases,
            "seed": self.seed,
            "pinned": self.pinned,
        })
    }
}

/// `F2, F3, F4, Z4, Z8, Z9`.
pub fn default_rings() -> Vec<RingDescriptor> {
    vec![
        RingDescriptor::gf(2, 1),
        RingDescriptor::gf(3, 1),
        RingDescriptor::gf(2, 2),
        RingDescriptor::zm(4),
        RingDescriptor::zm(8),
        RingDescriptor::zm(9),
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckSet {
    pub greene: bool,
    pub macwilliams: bool,
    pub newz: bool,
    pub dualities: bool,
    pub demimatroid: bool,
}

impl CheckSet {
    pub fn all() -> Self {
        CheckSet { greene: true, macwilliams: true, newz: true, dualities: true, demimatroid: true }
    }

    pub fn none() -> Self {
        CheckSet { greene: false, macwilliams: false, newz: false, dualities: false, demimatroid: false }
    }
}

/// One verification input.
#[derive(Debug, Clone)]
pub struct Case {
    pub label: String,
    pub code: LinearCode,
    pub conjugate: bool,
    pub f: HarmonicFunction,
    pub m: u32,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseResult {
    pub label: String,
    pub code: String,
    pub function: String,
    pub m: u32,
    pub checks: Vec<(String, Verdict)>,
}

impl CaseResult {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|(_, v)| v.is_equal())
    }

    pub fn failures(&self) -> impl Iterator<Item = (&str, &str)> {
        self.checks.iter().filter_map(|(n, v)| match v {
            Verdict::Mismatch(w) => Some((n.as_str(), w.as_str())),
            Verdict::Equal => None,
        })
    }

    pub fn to_json(&self) -> Value {
        let mut checks = Map::new();
        for (n, v) in &self.checks {
            checks.insert(
                n.clone(),
                match v {
                    Verdict::Equal => json!({"verdict": "equal"}),
                    Verdict::Mismatch(w) => json!({"verdict": "mismatch", "witness": w}),
                },
            );
        }
        json!({
            "label": self.label,
            "code": self.code,
            "function": self.function,
            "m": self.m,
            "checks": checks,
            "passed": self.passed(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SuiteReport {
    pub config: Option<SuiteConfig>,
    pub cases: Vec<CaseResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(CaseResult::passed)
    }

    pub fn failure_count(&self) -> usize {
        self.cases.iter().filter(|c| !c.passed()).count()
    }

    /// Canonical JSON: keys sorted, cases in index order. A report without
    /// cases renders as `{}`.
    pub fn to_json(&self) -> Value {
        if self.cases.is_empty() {
            return json!({});
        }
        let mut out = Map::new();
        if let Some(cfg) = &self.config {
            out.insert("config".into(), cfg.to_json());
        }
        out.insert("cases".into(), Value::Array(self.cases.iter().map(CaseResult::to_json).collect()));
        out.insert("summary".into(), json!({"cases": self.cases.len(), "failures": self.failure_count()}));
        Value::Object(out)
    }

    pub fn render_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("report serializes")
    }

    pub fn render_text(&self) -> String {
        let mut s = String::new();
        for c in &self.cases {
            if c.passed() {
                s.push_str(&format!(
                    "{}: ok ({} checks) {} | {} | m={}\n",
                    c.label,
                    c.checks.len(),
                    c.code,
                    c.function,
                    c.m
                ));
            } else {
                s.push_str(&format!("{}: FAIL {} | {} | m={}\n", c.label, c.code, c.function, c.m));
                for (n, w) in c.failures() {
                    s.push_str(&format!("  {n}: {w}\n"));
                }
            }
        }
        s.push_str(&format!("{} cases, {} failures\n", self.cases.len(), self.failure_count()));
        s
    }
}

fn mismatch(e: impl ToString) -> Verdict {
    Verdict::Mismatch(e.to_string())
}

fn demimatroid_checks(ctx: &CodeContext, out: &mut Vec<(String, Verdict)>) {
    let dm = &ctx.dm;
    let axioms = |d: &DemiMatroid| d.check_axioms().map_or(Verdict::Equal, mismatch);
    out.push(("axioms".into(), axioms(dm)));
    out.push((
        "axioms_gamma_delta".into(),
        match DemiMatroid::from_code_and_dual(&ctx.code, &ctx.dual, crate::demimatroid::Flavor::GammaDelta) {
            Ok(gd) if gd == dm.supplement() => axioms(&gd),
            Ok(_) => mismatch("(E, gamma, delta) differs from the supplement of (E, alpha, beta)"),
            Err(e) => mismatch(e),
        },
    ));
    if ctx.code.len() > MINOR_CHECK_MAX_N {
        return;
    }
    let mut prop = Verdict::Equal;
    let mut cor = Verdict::Equal;
    let dual = dm.dual();
    let supp = dm.supplement();
    for t in 0..=dm.ground() {
        let contracted = dm.contract(t);
        if prop.is_equal() {
            if dual.delete(t).dual() != contracted {
                prop = mismatch(format!("(D* \\ T)* != D / T at T = {:?}", subset::to_list(t)));
            } else if supp.delete(t).supplement() != contracted {
                prop = mismatch(format!("supplement(supplement(D) \\ T) != D / T at T = {:?}", subset::to_list(t)));
            } else if let Some(v) = contracted.check_axioms() {
                prop = mismatch(format!("D / T at T = {:?}: {v}", subset::to_list(t)));
            }
        }
        if cor.is_equal() {
            let shortened = ctx.code.shorten(t).and_then(|s| {
                let sd = s.dual(ctx.conjugate)?;
                DemiMatroid::from_code_and_dual(&s, &sd, crate::demimatroid::Flavor::AlphaBeta)
            });
            match shortened {
                Ok(d) if d == contracted => {}
                Ok(_) => cor = mismatch(format!("D_C / T != D_(C/T) at T = {:?}", subset::to_list(t))),
                Err(e) => cor = mismatch(e),
            }
        }
    }
    out.push(("minor_proposition".into(), prop));
    out.push(("contraction_corollary".into(), cor));
}

/// Runs the selected checks on one case.
pub fn run_case(case: &Case, checks: CheckSet) -> CaseResult {
    let mut out = Vec::new();
    let f = &*case.f;
    match CodeContext::new(case.code.clone(), case.conjugate) {
        Err(e) => out.push(("context".into(), mismatch(e))),
        Ok(ctx) => {
            let mut sub = ChaCha8Rng::seed_from_u64(case.seed);
            if checks.greene {
                out.extend(verify_greene(&ctx, f, case.m, sub.gen()).checks);
            }
            if checks.macwilliams {
                let field = ctx.code.ring().kind() == RingKind::Gf;
                match verify_macwilliams(&ctx, f, case.m, field) {
                    Ok(r) => out.extend(r.checks),
                    Err(e) => out.push(("macwilliams".into(), mismatch(e))),
                }
            }
            if checks.newz {
                out.extend(verify_newz(&ctx, f, case.m).checks);
            }
            if checks.dualities {
                let seed = sub.gen();
                let mut r = verify_dualities(&ctx.dm, f, seed).checks;
                // alter_coboundary is already part of the Greene report.
                if checks.greene {
                    r.retain(|(n, _)| n != "alter_coboundary");
                }
                out.extend(r);
            }
            if checks.demimatroid {
                demimatroid_checks(&ctx, &mut out);
            }
        }
    }
    CaseResult {
        label: case.label.clone(),
        code: describe_code(&case.code),
        function: describe_fn(f),
        m: case.m,
        checks: out,
    }
}

fn ring(desc: &RingDescriptor) -> Arc<FiniteRing> {
    Arc::new(FiniteRing::new(desc).expect("built-in ring"))
}

fn code(desc: &RingDescriptor, rows: &[&[u16]]) -> LinearCode {
    let n = rows[0].len();
    LinearCode::span(ring(desc), n, rows.iter().map(|r| r.iter().map(|&e| Elem(e)).collect()).collect())
        .expect("built-in code")
}

/// `Z4` code spanned by `(1,1,0)` and `(0,0,3)`.
pub fn z4_example() -> LinearCode {
    code(&RingDescriptor::zm(4), &[&[1, 1, 0], &[0, 0, 3]])
}

/// Extended binary Hamming `[8,4]` code (self-dual, Type II).
pub fn extended_hamming() -> LinearCode {
    code(
        &RingDescriptor::gf(2, 1),
        &[&[1, 1, 1, 1, 0, 0, 0, 0], &[0, 0, 1, 1, 1, 1, 0, 0], &[0, 0, 0, 0, 1, 1, 1, 1], &[0, 1, 0, 1, 0, 1, 0, 1]],
    )
}

/// Ternary tetracode `[4,2]` (self-dual, Type III).
pub fn tetracode() -> LinearCode {
    code(&RingDescriptor::gf(3, 1), &[&[1, 0, 1, 1], &[0, 1, 1, 2]])
}

/// `F4` code spanned by `(1, w)`, Hermitian self-dual (Type IV).
pub fn f4_pair() -> LinearCode {
    code(&RingDescriptor::gf(2, 2), &[&[1, 2]])
}

/// Binary repetition code of length 2 (Type I).
pub fn repetition2() -> LinearCode {
    code(&RingDescriptor::gf(2, 1), &[&[1, 1]])
}

/// Regression cases run ahead of the random ones.
pub fn pinned_cases(seed: u64) -> Vec<Case> {
    let mut cases = Vec::new();
    let mut push = |label: &str, code: LinearCode, conjugate: bool, d: usize, m: u32| {
        let n = code.len();
        for (i, f) in harm_basis(n, d).expect("basis").into_iter().enumerate() {
            cases.push(Case { label: format!("pinned {label} b{}", i + 1), code: code.clone(), conjugate, f, m, seed });
        }
    };
    push("z4-example", z4_example(), false, 1, 1);
    push("z4-example", z4_example(), false, 1, 2);
    push("hamming8", extended_hamming(), false, 1, 1);
    push("tetracode", tetracode(), false, 1, 1);
    push("f4-hermitian", f4_pair(), true, 1, 1);
    push("repetition2", repetition2(), false, 1, 1);
    cases
}

/// Random case `index`; depends only on the seed and the index.
pub fn random_case(cfg: &SuiteConfig, index: usize) -> Result<Case> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(index as u64);
    let desc = &cfg.rings[rng.gen_range(0..cfg.rings.len())];
    let r = Arc::new(FiniteRing::new(desc)?);
    let n = rng.gen_range(1..=cfg.max_n);
    let d = rng.gen_range(0..=cfg.max_d.min(n / 2));
    let k = rng.gen_range(0..=n);
    let q = r.order() as u16;
    let rows: Vec<Vec<Elem>> = (0..k).map(|_| (0..n).map(|_| Elem(rng.gen_range(0..q))).collect()).collect();
    let code = LinearCode::span(r, n, rows)?;
    let basis = harm_basis(n, d)?;
    let f = basis[rng.gen_range(0..basis.len())].clone();
    let m = rng.gen_range(1..=cfg.max_m);
    Ok(Case { label: format!("case {index}"), code, conjugate: false, f, m, seed: rng.gen() })
}

/// Runs pinned and random cases in parallel; results keep case order.
pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    cfg.validate()?;
    let mut cases = if cfg.pinned { pinned_cases(cfg.seed) } else { Vec::new() };
    if cfg.max_n > 0 {
        for i in 0..cfg.cases {
            cases.push(random_case(cfg, i)?);
        }
    }
    let results = cases.par_iter().map(|c| run_case(c, cfg.checks)).collect();
    Ok(SuiteReport { config: Some(cfg.clone()), cases: results })
}

/// Wall-clock seconds of `f`, with its result.
pub fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed().as_secs_f64())
}
