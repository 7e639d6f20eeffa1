//! Pseudo-orbits and the diagonal shadowing constructions.
//!
//! With `δ = 2^(1-M)`, a step `d(σ(x^i), x^(i+1)) < δ` means the two points
//! share their first `M` symbols. Chaining `M` such steps shows the heads of a
//! pseudo-orbit spell every `x^i` on `M + 1` symbols, so the diagonal point
//! `z_i = x^i_0` satisfies `z[i, i+M+1) = x^i[0, M+1)`. Once `M + 1 >= L` every
//! window of `z` is a window of some `x^i`, which is what keeps `z` inside a
//! subshift of bounded type.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::{agree, lcp, DyadicDistance, Lcp};
use crate::point::{Point, PointStream};
use crate::subshift::Subshift;
use crate::word::{Symbol, Word};

/// A finite pseudo-orbit with its claimed defect bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PseudoOrbit {
    pub delta: DyadicDistance,
    pub points: Vec<Point>,
}

impl PseudoOrbit {
    pub fn new(points: Vec<Point>, delta: DyadicDistance) -> Self {
        PseudoOrbit { delta, points }
    }
}

/// First index at which a checked condition fails. `level` is the scale `m`
/// of an asymptotic check, absent for fixed-bound checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub index: usize,
    pub level: Option<usize>,
}

impl Violation {
    pub fn at(index: usize) -> Self {
        Violation { index, level: None }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.level {
            Some(m) => write!(f, "violation at index {} for 2^-{m}", self.index),
            None => write!(f, "violation at index {}", self.index),
        }
    }
}

/// Convergence rate `m ↦ N(m)` of an asymptotic pseudo-orbit: for
/// `i >= N(m)` the step `σ(x^i) → x^(i+1)` preserves at least `m` symbols.
#[derive(Clone)]
pub enum Rate {
    /// Every step is exact.
    Zero,
    /// Per-step common prefix lengths (`None` for an exact step) of the
    /// first `len` steps; every later step is exact.
    Defects(Vec<Option<usize>>),
    /// Caller-supplied; must be non-decreasing.
    Function(Arc<dyn Fn(usize) -> usize + Send + Sync>),
}

impl Rate {
    pub fn eval(&self, m: usize) -> usize {
        match self {
            Rate::Zero => 0,
            Rate::Defects(d) => d
                .iter()
                .rposition(|l| l.is_some_and(|l| l < m))
                .map_or(0, |i| i + 1),
            Rate::Function(f) => f(m),
        }
    }
}

impl fmt::Debug for Rate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rate::Zero => f.write_str("Zero"),
            Rate::Defects(d) => f.debug_tuple("Defects").field(d).finish(),
            Rate::Function(_) => f.write_str("Function(..)"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct AsymptoticPseudoOrbit {
    pub stream: PointStream,
    pub rate: Rate,
}

impl AsymptoticPseudoOrbit {
    /// Checks the claimed rate: for every `m <= cap` and `N(m) <= i < horizon`,
    /// `σ(x^i)` and `x^(i+1)` agree on `m` symbols.
    pub fn verify(&self, cap: usize, horizon: usize) -> Result<(), Violation> {
        for m in 0..=cap {
            for i in self.rate.eval(m)..horizon {
                if !agree(&self.stream.point(i).shift(1), &self.stream.point(i + 1), m) {
                    return Err(Violation { index: i, level: Some(m) });
                }
            }
        }
        Ok(())
    }
}

/// `(M, δ)` with `M = max(L-1, min{m : 2^-m < ε})` and `δ = 2^(1-M)`.
pub fn shadowing_modulus(gamma: &Subshift, eps: DyadicDistance) -> Result<(usize, DyadicDistance)> {
    if !gamma.is_sbt() {
        return Err(Error::NeedsExplicitBasis);
    }
    let e = eps.exponent().ok_or(Error::ZeroDistance)? as usize;
    let m = gamma.gluing_bound().max(e + 1);
    Ok((m, DyadicDistance::pow2_neg((m - 1) as u32)))
}

/// Checks `d(σ(x^i), x^(i+1)) < δ` for every consecutive pair. Exact: each
/// test compares a fixed number of leading symbols.
pub fn verify_pseudo_orbit(po: &PseudoOrbit) -> Result<(), Violation> {
    let Some(n) = po.delta.strict_agreement() else {
        return match po.points.len() {
            0 | 1 => Ok(()),
            _ => Err(Violation::at(0)),
        };
    };
    for (i, pair) in po.points.windows(2).enumerate() {
        if !agree(&pair[0].shift(1), &pair[1], n) {
            return Err(Violation::at(i));
        }
    }
    Ok(())
}

/// Heads of all but the last point, followed by the last point.
///
/// With `δ = 2^(1-M)` the result satisfies `z[i, i+M) = x^i[0, M)` for every
/// `i`, and lies in `gamma` whenever every `x^i` does and `M >= L - 1`. Both
/// facts are re-checked (to `horizon` for schemes) before returning.
pub fn synthesize_shadow(gamma: &Subshift, po: &PseudoOrbit, horizon: usize) -> Result<Point> {
    let last = po.points.last().ok_or(Error::EmptySet)?;
    let e = po.delta.exponent().ok_or(Error::ZeroDistance)? as usize;
    let m = e + 1;
    let needed = gamma.gluing_bound().max(1);
    if m < needed {
        return Err(Error::DeltaTooCoarse { delta: po.delta.to_string(), needed: (needed - 1) as u32 });
    }
    verify_pseudo_orbit(po).map_err(|v| Error::NotPseudoOrbit { index: v.index })?;
    let horizon = horizon.max(gamma.max_basis_length());
    for (index, x) in po.points.iter().enumerate() {
        if !gamma.point_in_subshift(x, horizon)?.holds {
            return Err(Error::PointOutsideSubshift { index });
        }
    }

    let heads: Word = po.points[..po.points.len() - 1].iter().map(|x| x.symbol_at(0)).collect();
    let z = Point::heads_then_tail(heads, last.clone());

    if !gamma.point_in_subshift(&z, horizon + po.points.len())?.holds {
        return Err(Error::Construction("shadow left the subshift".into()));
    }
    for (i, x) in po.points.iter().enumerate() {
        if !agree(&z.shift(i), x, m) {
            return Err(Error::Construction(format!("shadow drifts from the pseudo-orbit at {i}")));
        }
    }
    Ok(z)
}

/// A point `y` of `gamma` with `σ^steps(y) = x`.
///
/// Over the unrestricted alphabet the prefix consists of fresh symbols. With
/// a finite or rule-bounded alphabet each step prepends the smallest symbol
/// `s` for which `s · y[0, max(L,1))` is globally allowed.
pub fn back_extend(gamma: &Subshift, x: &Point, steps: usize) -> Result<Point> {
    if steps == 0 {
        return Ok(x.clone());
    }
    let l = gamma.max_basis_length().max(1);
    if gamma.has_fresh_symbols() {
        let avoid = x.symbols_or_prefix(l);
        let fresh = gamma.fresh_symbols(steps, &avoid)?;
        return Ok(Point::back_extended(Word::new(fresh), x.clone()));
    }
    let alphabet = gamma.search_alphabet();
    let mut prefix: Vec<Symbol> = Vec::with_capacity(steps);
    for _ in 0..steps {
        // current point is prefix · x; its leading L symbols decide the step
        let mut lead: Vec<Symbol> = prefix.iter().copied().take(l).collect();
        let mut j = 0;
        while lead.len() < l {
            lead.push(x.symbol_at(j));
            j += 1;
        }
        let s = alphabet
            .iter()
            .copied()
            .find(|&s| {
                let mut w = Vec::with_capacity(l + 1);
                w.push(s);
                w.extend_from_slice(&lead);
                gamma.is_globally_allowed(&w)
            })
            .ok_or_else(|| Error::BackExtension { prefix: Word::new(lead.clone()) })?;
        prefix.insert(0, s);
    }
    Ok(Point::back_extended(Word::new(prefix), x.clone()))
}

/// Output of the asymptotic construction.
#[derive(Clone, Debug)]
pub struct AsymptoticShadow {
    pub point: Point,
    /// Index `I*` where the diagonal starts.
    pub start: usize,
    /// `L`, the offset in `N'(m) = max(N(m + L), I*)`.
    pub offset: usize,
    pub rate: Rate,
}

impl AsymptoticShadow {
    /// `N'(m)`: from this index on `d(σ^i(z), x^i) < 2^-m`.
    pub fn modulus(&self, m: usize) -> usize {
        self.rate.eval(m + self.offset).max(self.start)
    }
}

/// Diagonal of the stream from `I* = N(max(L,1))`, back-extended by `I*`
/// steps. Membership is re-checked to `horizon` before returning.
pub fn synthesize_asymptotic_shadow(
    gamma: &Subshift,
    apo: &AsymptoticPseudoOrbit,
    horizon: usize,
) -> Result<AsymptoticShadow> {
    if !gamma.is_sbt() {
        return Err(Error::NeedsExplicitBasis);
    }
    let l = gamma.max_basis_length();
    let start = apo.rate.eval(l.max(1));
    let horizon = horizon.max(l);
    for i in 0..=start {
        if !gamma.point_in_subshift(&apo.stream.point(i), horizon)?.holds {
            return Err(Error::PointOutsideSubshift { index: i });
        }
    }
    let tail = Point::diagonal(apo.stream.clone(), start);
    let point = back_extend(gamma, &tail, start)?;
    if !gamma.point_in_subshift(&point, horizon + start)?.holds {
        return Err(Error::Construction("asymptotic shadow left the subshift".into()));
    }
    Ok(AsymptoticShadow { point, start, offset: l, rate: apo.rate.clone() })
}

/// Where two orbits first separate to distance 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expansivity {
    /// Smallest `n` with `x_n != y_n`, so `d(σ^n x, σ^n y) = 1`.
    At(usize),
    /// The points are equal (certified for eventually periodic pairs).
    Identical,
    /// The points agree on the first `horizon` symbols.
    AgreeTo(usize),
}

pub fn expansivity_witness(x: &Point, y: &Point, horizon: usize) -> Expansivity {
    match lcp(x, y, horizon) {
        Lcp::Exact(n) => Expansivity::At(n),
        Lcp::Infinite => Expansivity::Identical,
        Lcp::AtLeast(n) => Expansivity::AgreeTo(n),
    }
}

/// Checks `d(σ^i(z), x^i) < ε` for every index of the pseudo-orbit.
pub fn verify_shadow(z: &Point, po: &PseudoOrbit, eps: DyadicDistance) -> Result<(), Violation> {
    let Some(n) = eps.strict_agreement() else {
        return if po.points.is_empty() { Ok(()) } else { Err(Violation::at(0)) };
    };
    for (i, x) in po.points.iter().enumerate() {
        if !agree(&z.shift(i), x, n) {
            return Err(Violation::at(i));
        }
    }
    Ok(())
}

/// For every `m <= cap`: `d(σ^i(z), x^i) < 2^-m` for `modulus(m) <= i < horizon`.
pub fn verify_asymptotic_shadow(
    z: &Point,
    stream: &PointStream,
    modulus: impl Fn(usize) -> usize,
    cap: usize,
    horizon: usize,
) -> Result<(), Violation> {
    for m in 0..=cap {
        for i in modulus(m)..horizon {
            if !agree(&z.shift(i), &stream.point(i), m + 1) {
                return Err(Violation { index: i, level: Some(m) });
            }
        }
    }
    Ok(())
}
