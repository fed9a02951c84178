use std::fs;
use std::path::Path;

use htutte_core::code::{CodeJson, LinearCode};
use htutte_core::demimatroid::DemiMatroid;
use htutte_core::harmonic::{harm_basis, HarmonicFunction, HarmonicJson, SubsetFn};
use htutte_core::ring::RingDescriptor;
use htutte_core::{Error, Result};
use serde_json::Value;

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn parse<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    serde_json::from_str(&read(path)?).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

pub fn load_code(path: &Path) -> Result<LinearCode> {
    LinearCode::from_json(&parse::<CodeJson>(path)?)
}

pub fn load_dm(path: &Path) -> Result<DemiMatroid> {
    DemiMatroid::from_json(&parse::<Value>(path)?)
}

/// A harmonic function argument: a JSON file, or `basis:D` for every basis
/// element of `Harm_D(n)` labeled `b1, b2, ...`.
pub fn load_functions(spec: &str, n: usize, allow_nonharmonic: bool) -> Result<Vec<(String, SubsetFn)>> {
    if let Some(d) = spec.strip_prefix("basis:") {
        let d: usize = d.trim().parse().map_err(|_| Error::Input(format!("bad degree in {spec:?}")))?;
        return Ok(harm_basis(n, d)?
            .into_iter()
            .enumerate()
            .map(|(i, b)| (format!("b{}", i + 1), b.into_inner()))
            .collect());
    }
    let f = SubsetFn::from_json(&parse::<HarmonicJson>(Path::new(spec))?)?;
    if f.n() != n {
        return Err(Error::Mismatch(format!("function has n = {}, input has n = {n}", f.n())));
    }
    let f = if allow_nonharmonic { f } else { HarmonicFunction::new(f)?.into_inner() };
    Ok(vec![("f".into(), f)])
}

pub fn load_function(spec: &str, n: usize, allow_nonharmonic: bool) -> Result<SubsetFn> {
    let mut fs = load_functions(spec, n, allow_nonharmonic)?;
    if fs.len() != 1 {
        return Err(Error::Input(format!("{spec:?} names {} functions, this command takes one", fs.len())));
    }
    Ok(fs.remove(0).1)
}

fn prime_power(q: u64) -> Option<(u64, u32)> {
    let p = (2..=q).find(|p| q % p == 0)?;
    let (mut r, mut k) = (q, 0);
    while r % p == 0 {
        r /= p;
        k += 1;
    }
    (r == 1).then_some((p, k))
}

/// `Z4`, `Z9`, `F4`, `GF8`.
pub fn parse_ring(s: &str) -> Result<RingDescriptor> {
    let bad = || Error::Input(format!("bad ring {s:?}, expected Z<m> or F<q>"));
    let u = s.trim().to_ascii_uppercase();
    if let Some(m) = u.strip_prefix('Z') {
        return Ok(RingDescriptor::zm(m.parse().map_err(|_| bad())?));
    }
    let q: u64 = u.strip_prefix("GF").or_else(|| u.strip_prefix('F')).ok_or_else(bad)?.parse().map_err(|_| bad())?;
    let (p, k) = prime_power(q).ok_or(Error::CompositeNonPrimePower(q))?;
    Ok(RingDescriptor::gf(p, k))
}
