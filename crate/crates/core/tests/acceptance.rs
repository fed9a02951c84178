//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::process::ExitCode;
use std::time::Instant;

use htutte_core::demimatroid::{DemiMatroid, Flavor};
use htutte_core::enumerators::{
    binomial_identity, harmonic_coboundary, harmonic_tutte, weight_enum, z_coboundary, z_poly, CodeContext,
};
use htutte_core::harmonic::harm_basis;
use htutte_core::invariants::{
    build_group, character_diagnosis, expected_series, hilbert_expansion, molien_series, CodeType, CycloPoly,
    Cyclotomic,
};
use htutte_core::poly::{exp, int, Coeff, ExpPoly, Var};
use htutte_core::suite::{extended_hamming, run_suite, z4_example, CheckSet, SuiteConfig, SuiteReport};
use num_bigint::BigInt;
use num_traits::{One, Zero};

type Outcome = std::result::Result<String, String>;

fn suite(checks: CheckSet) -> SuiteReport {
    let cfg = SuiteConfig { checks, ..SuiteConfig::default() };
    run_suite(&cfg).expect("suite runs")
}

fn suite_outcome(report: &SuiteReport, names: &[&str]) -> Outcome {
    let mut ran = 0;
    for case in &report.cases {
        for (name, verdict) in &case.checks {
            if !names.iter().any(|n| name == n) {
                continue;
            }
            ran += 1;
            if let htutte_core::enumerators::Verdict::Mismatch(w) = verdict {
                return Err(format!("{} [{}] {name}: {w}", case.label, case.code));
            }
        }
    }
    let random = report.cases.iter().filter(|c| c.label.starts_with("case ")).count();
    if random != 200 {
        return Err(format!("expected 200 random cases, ran {random}"));
    }
    Ok(format!("{} cases, {ran} exact checks", report.cases.len()))
}

fn poly(terms: &[(i64, i64, i64, i64)]) -> ExpPoly {
    let mut p = ExpPoly::zero();
    for &(c, x, y, l) in terms {
        p.add_term([exp(x), exp(y), exp(l)], int(c));
    }
    p
}

fn criterion_1() -> Outcome {
    let c = z4_example();
    let dm = DemiMatroid::from_code(&c, Flavor::AlphaBeta).map_err(|e| e.to_string())?;
    let w_expected = poly(&[(-3, 2, 1, 0), (3, 1, 2, 0)]);
    let z_expected = poly(&[(-3, 1, 0, 0), (3, 0, 1, 0)]);
    let wd_expected = poly(&[(1, 1, 2, 1), (-1, 1, 2, 0), (-1, 2, 1, 1), (1, 2, 1, 0)]);
    let basis = harm_basis(3, 1).map_err(|e| e.to_string())?;
    if basis.len() != 2 {
        return Err(format!("Harm_1(3) has dimension {}", basis.len()));
    }
    for (i, f) in basis.iter().enumerate() {
        let w = weight_enum(&c, f, 1).map_err(|e| e.to_string())?;
        let z = z_poly(&c, f, 1).map_err(|e| e.to_string())?;
        let t = harmonic_tutte(&dm, f).map_err(|e| e.to_string())?;
        let wd = harmonic_coboundary(&dm, f).map_err(|e| e.to_string())?;
        let zd4 = z_coboundary(&dm, f).and_then(|p| p.eval_var(Var::Lambda, &int(4))).map_err(|e| e.to_string())?;
        let t_ok = t.terms().count() == 2 && t.coeff(exp(1), exp(1)).is_one() && t.coeff(exp(0), exp(0)) == int(-1);
        if w != w_expected || z != z_expected || !t_ok || wd != wd_expected || zd4 != z {
            return Err(format!("basis {}: W = {w}, Z = {z}, T = {t}, W_D = {wd}, Z_D(4) = {zd4}", i + 1));
        }
    }
    Ok("W = -3*x^2*y + 3*x*y^2, Z = 3(y-x), T = (x-1)*(y-1) - 1, W_D = (lambda-1)(xy^2 - x^2y) for both directions"
        .into())
}

/// Rank of an integer matrix by fraction-free elimination.
fn bareiss_rank(mut a: Vec<Vec<BigInt>>) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !a[r][col].is_zero()) else { continue };
        a.swap(rank, p);
        for r in rank + 1..rows {
            for c in col + 1..cols {
                let v = (&a[rank][col] * &a[r][c] - &a[r][col] * &a[rank][c]) / &prev;
                a[r][c] = v;
            }
            a[r][col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

fn masks_of_size(n: usize, k: usize) -> Vec<u32> {
    (0u32..1 << n).filter(|x| x.count_ones() as usize == k).collect()
}

fn binom(n: usize, k: usize) -> i64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1i64, |acc, i| acc * (n - i) as i64 / (i + 1) as i64)
}

fn criterion_6() -> Outcome {
    let mut dims = 0;
    for n in 0..=10usize {
        for d in 0..=n {
            let cols = masks_of_size(n, d);
            let rows = if d == 0 { Vec::new() } else { masks_of_size(n, d - 1) };
            let gamma: Vec<Vec<BigInt>> =
                rows.iter().map(|&y| cols.iter().map(|&z| BigInt::from(u8::from(y & !z == 0))).collect()).collect();
            let kernel = cols.len() - bareiss_rank(gamma);
            let basis = harm_basis(n, d).map_err(|e| e.to_string())?;
            let formula = (binom(n, d) - if d == 0 { 0 } else { binom(n, d - 1) }).max(0) as usize;
            if basis.len() != kernel || kernel != formula {
                return Err(format!("n={n} d={d}: basis {}, rank oracle {kernel}, formula {formula}", basis.len()));
            }
            for f in &basis {
                for &y in &rows {
                    let s: Coeff = cols.iter().filter(|&&z| y & !z == 0).map(|&z| f.get(z)).sum();
                    if !s.is_zero() {
                        return Err(format!("n={n} d={d}: basis element not harmonic at {y:b}"));
                    }
                }
            }
            dims += 1;
        }
    }

    let mut lemma = 0;
    for n in 0..=7usize {
        for d in 0..=n {
            for f in harm_basis(n, d).map_err(|e| e.to_string())? {
                let ds = masks_of_size(n, d);
                for j in 0u32..1 << n {
                    let tilde: Coeff = ds.iter().filter(|&&z| z & !j == 0).map(|&z| f.get(z)).sum();
                    for i in 0..=d {
                        let level: Coeff =
                            ds.iter().filter(|&&z| (z & j).count_ones() as usize == i).map(|&z| f.get(z)).sum();
                        let sign = if (d - i) % 2 == 0 { 1 } else { -1 };
                        if level != &tilde * int(sign * binom(d, i)) {
                            return Err(format!("level-sum identity fails: n={n} d={d} J={j:b} i={i}"));
                        }
                        lemma += 1;
                    }
                }
            }
        }
    }

    let mut sweep = 0;
    for e in 0..=12usize {
        for d in 0..=e {
            for i in 0..=e - d {
                if !binomial_identity(e, d, i) {
                    return Err(format!("binomial identity fails at |E-Y|={e} d={d} i={i}"));
                }
                sweep += 1;
            }
        }
    }
    Ok(format!("{dims} (n,d) dimensions, {lemma} level-sum identities, {sweep} binomial identities"))
}

fn criterion_7() -> Outcome {
    let ii = build_group(CodeType::II, 1).map_err(|e| e.to_string())?;
    let r = molien_series(&ii, 0, 32, Some(1)).map_err(|e| e.to_string())?;
    // (1 + 3t^8) / (1 - t^8)^2 = sum (4j + 1) t^(8j).
    let expected: Vec<BigInt> = (0..=32).map(|k| BigInt::from(if k % 8 == 0 { 4 * (k / 8) + 1 } else { 0 })).collect();
    if r.coefficients != expected {
        return Err(format!("Type II d=0: {:?}", r.coefficients));
    }
    for d in 0..4 {
        let g = build_group(CodeType::III, 1).map_err(|e| e.to_string())?;
        let r = molien_series(&g, d, 32, Some(1)).map_err(|e| e.to_string())?;
        let (num, den) = expected_series(CodeType::III, d).expect("Type III branch");
        if r.coefficients != hilbert_expansion(&num, &den, 32) {
            return Err(format!("Type III residue {d}: {:?}", r.coefficients));
        }
    }
    let mut computed = 0;
    let mut ill_defined = Vec::new();
    for ty in CodeType::ALL {
        for m in 1..=2 {
            let g = build_group(ty, m).map_err(|e| e.to_string())?;
            for d in 0..ty.scalar_order() as i64 {
                match molien_series(&g, d, 32, Some(m)) {
                    Ok(_) => computed += 1,
                    Err(htutte_core::Error::CharacterIllDefined(..)) => ill_defined.push(format!("{ty}/m={m}/d={d}")),
                    Err(e) => return Err(format!("type {ty} m={m} d={d}: {e}")),
                }
            }
        }
    }
    let mut msg = format!("Type II d=0 and Type III residues 0..3 match; {computed} series are nonnegative integers");
    if !ill_defined.is_empty() {
        msg.push_str(&format!("; character ill-defined for {}", ill_defined.join(", ")));
    }
    Ok(msg)
}

/// Checks `S.z = (-1)^d z` and the `omega8 I` diagnosis for every basis
/// function of degree `d`; returns whether `Z` vanished for all of them and
/// whether the residue is flagged against the stated character.
fn hamming_degree(c: &htutte_core::code::LinearCode, d: usize) -> std::result::Result<(bool, bool), String> {
    let s = build_group(CodeType::II, 1).map_err(|e| e.to_string())?.generators[0].matrix.clone();
    let nominal = (8 - 2 * d) as u32;
    let forced = Cyclotomic::omega(8, nominal as i64).expect("omega8");
    let stated = Cyclotomic::omega(8, -(d as i64)).expect("omega8");
    let mut all_zero = true;
    for f in harm_basis(8, d).map_err(|e| e.to_string())? {
        let z = z_poly(c, &f, 1).map_err(|e| e.to_string())?;
        all_zero &= z.is_zero();
        let p = CycloPoly::from_exp_poly(&z).map_err(|e| e.to_string())?;
        let sign = Cyclotomic::rational(if d % 2 == 0 { int(1) } else { int(-1) });
        let moved = p.act(&s);
        let expected_image =
            CycloPoly::from_exp_poly(&z.scale(&sign.as_rational().expect("sign"))).map_err(|e| e.to_string())?;
        if moved != expected_image {
            return Err(format!("d={d}: S.Z != {sign} Z for Z = {z}"));
        }
        let diag = character_diagnosis(&z, CodeType::II, 1, d as i64, Some(nominal)).map_err(|e| e.to_string())?;
        let (sd, wd) = (&diag[0], &diag[1]);
        if !z.is_zero() && (sd.scalar.as_ref() != Some(&sign) || wd.scalar.as_ref() != Some(&forced)) {
            return Err(format!("d={d}: diagnosis scalars {:?} / {:?}", sd.scalar, wd.scalar));
        }
        if wd.forced.as_ref() != Some(&forced) || wd.stated != stated {
            return Err(format!("d={d}: omega8 I reported {:?} against {}", wd.forced, wd.stated));
        }
        if wd.agrees_with_stated() != Some(forced == stated) {
            return Err(format!("d={d}: flag does not match omega8^{nominal} vs omega8^(-{d})"));
        }
    }
    Ok((all_zero, forced != stated))
}

fn criterion_8() -> Outcome {
    let c = extended_hamming();
    let ctx = CodeContext::new(c.clone(), false).map_err(|e| e.to_string())?;
    if ctx.dual != c {
        return Err("extended Hamming code is not self-dual".into());
    }
    let (zero0, flag0) = hamming_degree(&c, 0)?;
    let (zero1, flag1) = hamming_degree(&c, 1)?;
    if zero0 || flag0 || !flag1 {
        return Err(format!("unexpected flags: d=0 {flag0}, d=1 {flag1}"));
    }
    // Degree 4 has a nonzero constant Z, so the omega8 I scalar is measured.
    let (zero4, flag4) = hamming_degree(&c, 4)?;
    if zero4 || !flag4 {
        return Err("d=4 supplement: expected nonzero Z flagged against omega8^(-4)".into());
    }
    let note = if zero1 { " (Z vanishes for every f of degree 1: the weight classes are 3-designs)" } else { "" };
    Ok(format!(
        "S_{{1,2}} acts by (-1)^d for d=0,1{note}; omega8 I gives omega8^(8-2d); d=1 flagged against omega8^(-d); \
         d=4 check: constant Z, scalar 1, flagged against omega8^(-4)"
    ))
}

fn main() -> ExitCode {
    let mut all_ok = true;
    let mut report = |id: usize, title: &str, limit: Option<f64>, run: &dyn Fn() -> Outcome| {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        let outcome = match (outcome, limit) {
            (Ok(_), Some(l)) if secs >= l => Err(format!("took {secs:.2} s, limit {l} s")),
            (o, _) => o,
        };
        match outcome {
            Ok(msg) => println!("PASS [{id}] {title} ({secs:.2} s): {msg}"),
            Err(msg) => {
                all_ok = false;
                println!("FAIL [{id}] {title} ({secs:.2} s): {msg}");
            }
        }
    };

    report(1, "Z4 example reproduction", Some(1.0), &criterion_1);
    report(2, "Greene-type identity, 200-case suite", Some(60.0), &|| {
        let r = suite(CheckSet { greene: true, ..CheckSet::none() });
        suite_outcome(&r, &["greene"])
    });
    report(3, "MacWilliams-type identity against brute-force duals", Some(120.0), &|| {
        let r = suite(CheckSet { macwilliams: true, ..CheckSet::none() });
        suite_outcome(&r, &["macwilliams", "macwilliams_field_scaled"])
    });
    report(4, "NewZ and NewZperp against definitional enumerators", None, &|| {
        let r = suite(CheckSet { newz: true, ..CheckSet::none() });
        suite_outcome(&r, &["newz", "newzperp"])
    });
    report(5, "Demi-matroid axioms, minor proposition and contraction corollary", None, &|| {
        let r = suite(CheckSet { demimatroid: true, ..CheckSet::none() });
        suite_outcome(&r, &["axioms", "axioms_gamma_delta", "minor_proposition", "contraction_corollary"])
    });
    report(6, "Harmonic kernel dimensions, level sums, binomial sweep", None, &criterion_6);
    report(7, "Molien series", Some(60.0), &criterion_7);
    report(8, "Self-dual invariance of the extended Hamming code", Some(5.0), &criterion_8);

    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
