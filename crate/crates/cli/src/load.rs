//! Input parsing. Every failure here is a usage or spec error (exit 2).

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::de::DeserializeOwned;
use shiftlab::{DyadicDistance, Point, PseudoOrbit, SetPresentation, SetSpec, Subshift, SubshiftSpec, Word};

fn read_json<T: DeserializeOwned>(path: &Path, what: &str) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {what} file {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {what} file {}", path.display()))
}

pub fn subshift(path: &Path) -> Result<(SubshiftSpec, Subshift)> {
    let spec: SubshiftSpec = read_json(path, "subshift")?;
    let gamma = Subshift::from_spec(&spec).with_context(|| format!("invalid subshift in {}", path.display()))?;
    Ok((spec, gamma))
}

pub fn pseudo_orbit(path: &Path) -> Result<PseudoOrbit> {
    let po: PseudoOrbit = read_json(path, "pseudo-orbit")?;
    if po.points.is_empty() {
        bail!("pseudo-orbit in {} has no points", path.display());
    }
    Ok(po)
}

pub fn set(path: &Path) -> Result<(SetSpec, SetPresentation)> {
    let spec: SetSpec = read_json(path, "set")?;
    let z = SetPresentation::from_spec(&spec).with_context(|| format!("invalid set in {}", path.display()))?;
    Ok((spec, z))
}

/// `2^-m` or `1`; zero is not a distance bound.
pub fn dyadic(s: &str) -> Result<DyadicDistance, String> {
    match s.parse::<DyadicDistance>() {
        Ok(DyadicDistance::Zero) | Err(_) => Err(format!("expected 2^-m or 1, got {s:?}")),
        Ok(d) => Ok(d),
    }
}

pub fn point(s: &str) -> Result<Point, String> {
    s.parse().map_err(|e: shiftlab::Error| e.to_string())
}

pub fn word(s: &str) -> Result<Word, String> {
    s.parse().map_err(|e: shiftlab::Error| e.to_string())
}
