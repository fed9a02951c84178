mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use htutte_core::code::LinearCode;
use htutte_core::demimatroid::{DemiMatroid, Flavor};
use htutte_core::enumerators::{
    describe_code, describe_fn, harmonic_coboundary, harmonic_tutte, verify_dualities, verify_greene,
    verify_macwilliams, verify_newz, weight_enum, z_coboundary, z_poly, CodeContext, DEFAULT_SEED,
};
use htutte_core::harmonic::harm_basis;
use htutte_core::invariants::{
    build_group, character_diagnosis, expected_series, hilbert_expansion, molien_series, CodeType,
};
use htutte_core::poly::ExpPoly;
use htutte_core::ring::RingKind;
use htutte_core::subset;
use htutte_core::suite::{default_rings, run_suite, CheckSet, SuiteConfig};
use htutte_core::Result;
use serde_json::{json, Value};

use crate::input::{load_code, load_dm, load_function, load_functions, parse_ring};

#[derive(Parser)]
#[command(
    name = "htutte",
    version,
    about = "Harmonic weight enumerators and demi-matroid polynomials in exact arithmetic"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Harmonic function spaces.
    #[command(subcommand)]
    Harm(HarmCommand),
    /// Linear codes.
    #[command(subcommand)]
    Code(CodeCommand),
    /// Demi-matroids.
    #[command(subcommand)]
    Dm(DmCommand),
    /// Harmonic m-tuple weight enumerator W and its reduced form Z.
    Wenum {
        code: PathBuf,
        /// Function file, or `basis:D` for every basis element of Harm_D(n).
        f: String,
        #[arg(short, default_value_t = 1)]
        m: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Harmonic Tutte polynomial of a demi-matroid.
    Tutte {
        dm: PathBuf,
        f: String,
        #[command(flatten)]
        common: Common,
    },
    /// Harmonic coboundary polynomial of a demi-matroid.
    Coboundary {
        dm: PathBuf,
        f: String,
        #[command(flatten)]
        common: Common,
    },
    /// Exact identity checks; exit status 1 on any mismatch.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Molien series of the relative invariant space.
    Molien {
        #[arg(long = "type")]
        ty: CodeType,
        #[arg(short, default_value_t = 1)]
        m: u32,
        #[arg(short, default_value_t = 0, allow_negative_numbers = true)]
        d: i64,
        #[arg(short = 'K', default_value_t = 32)]
        k: usize,
        #[arg(long)]
        json: bool,
    },
    /// Action of the group generators on Z of a code.
    Invariance {
        code: PathBuf,
        f: String,
        #[arg(short, default_value_t = 1)]
        m: u32,
        #[arg(long = "type")]
        ty: CodeType,
        /// Use the Hermitian (conjugate) dual.
        #[arg(long)]
        conjugate: bool,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Clone, Copy)]
struct Common {
    #[arg(long)]
    json: bool,
    /// Accept functions that are not harmonic.
    #[arg(long)]
    allow_nonharmonic: bool,
}

#[derive(Subcommand)]
enum HarmCommand {
    /// Reduced echelon basis of Harm_D(N).
    Basis {
        n: usize,
        d: usize,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Subcommand)]
enum CodeCommand {
    /// Codewords and weight distribution.
    Enumerate {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Dual code, as code JSON.
    Dual {
        file: PathBuf,
        #[arg(long)]
        conjugate: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FlavorArg {
    AlphaBeta,
    GammaDelta,
}

#[derive(Subcommand)]
enum DmCommand {
    /// Checks the demi-matroid axioms; exit status 1 on a violation.
    Check {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Demi-matroid of a code, as demi-matroid JSON.
    FromCode {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "alpha-beta")]
        flavor: FlavorArg,
        #[arg(long)]
        conjugate: bool,
    },
}

#[derive(Args)]
struct VerifyArgs {
    code: PathBuf,
    f: String,
    #[arg(short, default_value_t = 1)]
    m: u32,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long)]
    conjugate: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Subcommand)]
enum VerifyCommand {
    /// Greene-type identity and its corollaries.
    Greene(VerifyArgs),
    /// MacWilliams-type identity.
    Macwilliams(VerifyArgs),
    /// Duality and supplement identities on the code's demi-matroid.
    Dualities(VerifyArgs),
    /// Every identity above plus the NewZ cross-checks.
    All(VerifyArgs),
    /// Seeded randomized suite over random codes and harmonic functions.
    Suite {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 200)]
        cases: usize,
        #[arg(long, default_value_t = 7)]
        max_n: usize,
        #[arg(long, default_value_t = 2)]
        max_d: usize,
        #[arg(long, default_value_t = 2)]
        max_m: u32,
        /// Comma-separated ring list, e.g. `F2,F3,Z4`.
        #[arg(long, value_delimiter = ',')]
        rings: Option<Vec<String>>,
        /// Skip the pinned regression cases.
        #[arg(long)]
        no_pinned: bool,
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse().command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("JSON value serializes"));
}

/// Returns whether every check passed.
fn run(command: Command) -> Result<bool> {
    match command {
        Command::Harm(HarmCommand::Basis { n, d, json }) => {
            let basis = harm_basis(n, d)?;
            if json {
                print_json(&Value::Array(basis.iter().map(|b| json!(b.to_json())).collect()));
            } else {
                println!("dim Harm_{d}({n}) = {}", basis.len());
                for (i, b) in basis.iter().enumerate() {
                    println!("b{}: {}", i + 1, describe_fn(b));
                }
            }
        }
        Command::Code(CodeCommand::Enumerate { file, json }) => enumerate(&load_code(&file)?, json),
        Command::Code(CodeCommand::Dual { file, conjugate }) => {
            print_json(&json!(load_code(&file)?.dual(conjugate)?.to_json()));
        }
        Command::Dm(DmCommand::Check { file, json }) => {
            let violation = load_dm(&file)?.check_axioms();
            if json {
                print_json(&json!({"valid": violation.is_none(), "violation": violation}));
            } else {
                match &violation {
                    None => println!("ok"),
                    Some(v) => println!("violation: {v}"),
                }
            }
            return Ok(violation.is_none());
        }
        Command::Dm(DmCommand::FromCode { file, flavor, conjugate }) => {
            let c = load_code(&file)?;
            let flavor = match flavor {
                FlavorArg::AlphaBeta => Flavor::AlphaBeta,
                FlavorArg::GammaDelta => Flavor::GammaDelta,
            };
            print_json(&DemiMatroid::from_code_and_dual(&c, &c.dual(conjugate)?, flavor)?.to_json());
        }
        Command::Wenum { code, f, m, common } => {
            let c = load_code(&code)?;
            let fs = load_functions(&f, c.len(), common.allow_nonharmonic)?;
            let mut rows = Vec::new();
            for (label, f) in &fs {
                rows.push((label.clone(), describe_fn(f), weight_enum(&c, f, m)?, z_poly(&c, f, m)?));
            }
            if common.json {
                let items: Vec<Value> = rows
                    .iter()
                    .map(|(l, d, w, z)| json!({"label": l, "function": d, "W": poly_json(w), "Z": poly_json(z)}))
                    .collect();
                print_json(&json!({"m": m, "functions": items}));
            } else {
                for (l, d, w, z) in &rows {
                    println!("{l}: {d}");
                    println!("W[{l}] = {w}");
                    println!("Z[{l}] = {z}");
                }
                if rows.len() > 1 {
                    let parts: Vec<String> = rows.iter().map(|(l, _, _, z)| format!("{l}*({z})")).collect();
                    println!("Z = {}", parts.join(" + "));
                }
            }
        }
        Command::Tutte { dm, f, common } => {
            let dm = load_dm(&dm)?;
            let f = load_function(&f, dm.n(), common.allow_nonharmonic)?;
            let t = harmonic_tutte(&dm, &f)?;
            if common.json {
                print_json(&json!({"function": describe_fn(&f), "T": t.to_json(), "text": t.to_string()}));
            } else {
                println!("T = {t}");
            }
        }
        Command::Coboundary { dm, f, common } => {
            let dm = load_dm(&dm)?;
            let f = load_function(&f, dm.n(), common.allow_nonharmonic)?;
            let w = harmonic_coboundary(&dm, &f)?;
            let z = z_coboundary(&dm, &f)?;
            if common.json {
                print_json(&json!({"function": describe_fn(&f), "W": poly_json(&w), "Z": poly_json(&z)}));
            } else {
                println!("W = {w}");
                println!("Z = {z}");
            }
        }
        Command::Verify(VerifyCommand::Suite { seed, cases, max_n, max_d, max_m, rings, no_pinned, json }) => {
            let rings = match rings {
                Some(names) => names.iter().map(|r| parse_ring(r)).collect::<Result<Vec<_>>>()?,
                None => default_rings(),
            };
            let cfg =
                SuiteConfig { rings, max_n, max_d, max_m, cases, seed, pinned: !no_pinned, checks: CheckSet::all() };
            let report = run_suite(&cfg)?;
            if json {
                println!("{}", report.render_json());
            } else {
                print!("{}", report.render_text());
            }
            return Ok(report.passed());
        }
        Command::Verify(v) => return verify(v),
        Command::Molien { ty, m, d, k, json } => return molien(ty, m, d, k, json),
        Command::Invariance { code, f, m, ty, conjugate, common } => {
            let c = load_code(&code)?;
            let f = load_function(&f, c.len(), common.allow_nonharmonic)?;
            let z = z_poly(&c, &f, m)?;
            let n = c.len() as i64;
            let deg = n - 2 * f.degree() as i64;
            let diagnosis = character_diagnosis(&z, ty, m, f.degree() as i64, u32::try_from(deg).ok())?;
            let dual = c.dual(conjugate)?;
            let self_dual = dual.size() == c.size() && c.codewords().all(|w| dual.contains(&w));
            if common.json {
                print_json(&json!({
                    "type": ty.label(),
                    "m": m,
                    "function": describe_fn(&f),
                    "self_dual": self_dual,
                    "Z": poly_json(&z),
                    "generators": diagnosis.iter().map(|g| g.to_json()).collect::<Vec<_>>(),
                }));
            } else {
                println!("Z = {z}");
                println!("self-dual: {self_dual}");
                for g in &diagnosis {
                    let scalar = g.scalar.as_ref().map_or("any (Z = 0)".to_string(), |c| c.to_string());
                    let forced = g.forced.as_ref().map_or(String::new(), |c| format!(", homogeneity {c}"));
                    let agree = match g.agrees_with_stated() {
                        Some(true) => "agrees",
                        Some(false) => "differs",
                        None => "undetermined",
                    };
                    println!("{}: scalar {scalar}, stated {}{forced} ({agree})", g.generator, g.stated);
                }
            }
        }
    }
    Ok(true)
}

fn poly_json(p: &ExpPoly) -> Value {
    json!({"text": p.to_string(), "terms": p.to_json()})
}

fn enumerate(c: &LinearCode, json: bool) {
    let mut weights = vec![0u64; c.len() + 1];
    for &s in c.supports() {
        weights[subset::size(s)] += 1;
    }
    let words: Vec<Vec<u16>> = c.codewords().map(|w| w.iter().map(|e| e.0).collect()).collect();
    if json {
        print_json(&json!({
            "ring": c.ring().name(),
            "n": c.len(),
            "size": c.size(),
            "codewords": words,
            "weight_distribution": weights,
        }));
    } else {
        println!("{} n={} |C|={}", c.ring().name(), c.len(), c.size());
        for w in &words {
            println!("{}", w.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(" "));
        }
        let dist: Vec<String> =
            weights.iter().enumerate().filter(|(_, &a)| a > 0).map(|(i, a)| format!("A{i}={a}")).collect();
        println!("weights: {}", dist.join(" "));
    }
}

fn verify(v: VerifyCommand) -> Result<bool> {
    let (kind, a) = match v {
        VerifyCommand::Greene(a) => ("greene", a),
        VerifyCommand::Macwilliams(a) => ("macwilliams", a),
        VerifyCommand::Dualities(a) => ("dualities", a),
        VerifyCommand::All(a) => ("all", a),
        VerifyCommand::Suite { .. } => unreachable!("handled by the caller"),
    };
    let c = load_code(&a.code)?;
    let f = load_function(&a.f, c.len(), a.common.allow_nonharmonic)?;
    let field_scaled = c.ring().kind() == RingKind::Gf;
    let ctx = CodeContext::new(c, a.conjugate)?;
    let mut parts = Vec::new();
    if matches!(kind, "greene" | "all") {
        parts.push(verify_greene(&ctx, &f, a.m, a.seed));
    }
    if matches!(kind, "macwilliams" | "all") {
        parts.push(verify_macwilliams(&ctx, &f, a.m, field_scaled)?);
    }
    if kind == "all" {
        parts.push(verify_newz(&ctx, &f, a.m));
    }
    if matches!(kind, "dualities" | "all") {
        let mut d = verify_dualities(&ctx.dm, &f, a.seed);
        d.subject = describe_code(&ctx.code);
        d.m = Some(a.m);
        parts.push(d);
    }
    let mut parts = parts.into_iter();
    let mut rep = parts.next().expect("at least one check group");
    parts.for_each(|p| rep.absorb(p));
    if a.common.json {
        print_json(&rep.to_json());
    } else {
        print!("{}", rep.render_text());
    }
    Ok(rep.passed())
}

fn molien(ty: CodeType, m: u32, d: i64, k: usize, json: bool) -> Result<bool> {
    let group = build_group(ty, m)?;
    let r = molien_series(&group, d, k, Some(m))?;
    let closed = expected_series(ty, d);
    let matched = closed.as_ref().map(|(num, den)| hilbert_expansion(num, den, k) == r.coefficients);
    let form = closed.as_ref().map(|(num, den)| {
        let num: Vec<String> =
            num.iter().map(|(e, c)| if *e == 0 { c.to_string() } else { format!("{c}*t^{e}") }).collect();
        let mut factors = den.to_vec();
        factors.dedup();
        let den: String = factors
            .iter()
            .map(|a| match den.iter().filter(|b| *b == a).count() {
                1 => format!("(1 - t^{a})"),
                k => format!("(1 - t^{a})^{k}"),
            })
            .collect();
        format!("({}) / {den}", num.join(" + "))
    });
    if json {
        let mut v = r.to_json();
        v["order"] = json!(group.order());
        v["closed_form"] = json!(form);
        v["matched"] = json!(matched);
        print_json(&v);
    } else {
        println!("{} (order {}), d = {d}, K = {k}", r.label, group.order());
        for (i, c) in r.coefficients.iter().enumerate() {
            println!("t^{i}: {c}");
        }
        match (&form, matched) {
            (Some(f), Some(true)) => println!("matches {f}"),
            (Some(f), Some(false)) => println!("DOES NOT match {f}"),
            _ => println!("no closed form known for this branch"),
        }
    }
    Ok(matched != Some(false))
}
