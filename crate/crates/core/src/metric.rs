//! The product metric on infinite sequences, kept exact.
//!
//! Distances are always powers of two, so they are stored as exponents:
//! `d(x, y) = 2^-lcp(x, y)` where `lcp` is the length of the longest common
//! prefix, and `2^-inf = 0`. Under this convention
//!
//! * `d(x, y) <= 2^-m` iff `x` and `y` agree on their first `m` symbols, and
//! * `d(x, y) < 2^-m` iff they agree on their first `m + 1` symbols.
//!
//! Strict comparisons against a bound are therefore prefix-agreement tests
//! of a known length, which are exact for every point representation.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::point::Point;

/// Result of a longest-common-prefix query.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Lcp {
    Exact(usize),
    /// The points are equal.
    Infinite,
    /// The points agree on the first `n` symbols; the scan stopped there.
    AtLeast(usize),
}

/// A value in `{1, 1/2, 1/4, ...} ∪ {0}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DyadicDistance {
    Zero,
    /// `2^-n`
    Pow(u32),
}

impl DyadicDistance {
    pub const ONE: DyadicDistance = DyadicDistance::Pow(0);

    pub fn pow2_neg(n: u32) -> Self {
        DyadicDistance::Pow(n)
    }

    /// `None` encodes the exponent `inf`, i.e. distance zero.
    pub fn exponent(self) -> Option<u32> {
        match self {
            DyadicDistance::Zero => None,
            DyadicDistance::Pow(n) => Some(n),
        }
    }

    pub fn is_zero(self) -> bool {
        matches!(self, DyadicDistance::Zero)
    }

    pub fn from_lcp(lcp: usize) -> Self {
        DyadicDistance::Pow(u32::try_from(lcp).unwrap_or(u32::MAX))
    }

    /// Number of leading symbols two points must share for their distance to
    /// be strictly below `self`. `None` when no distance is below `self`.
    pub fn strict_agreement(self) -> Option<usize> {
        self.exponent().map(|n| n as usize + 1)
    }

    pub fn as_f64(self) -> f64 {
        match self {
            DyadicDistance::Zero => 0.0,
            DyadicDistance::Pow(n) => 2f64.powi(-(n as i32)),
        }
    }
}

impl Ord for DyadicDistance {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (DyadicDistance::Zero, DyadicDistance::Zero) => Ordering::Equal,
            (DyadicDistance::Zero, _) => Ordering::Less,
            (_, DyadicDistance::Zero) => Ordering::Greater,
            (DyadicDistance::Pow(a), DyadicDistance::Pow(b)) => b.cmp(a),
        }
    }
}

impl PartialOrd for DyadicDistance {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for DyadicDistance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DyadicDistance::Zero => f.write_str("0"),
            DyadicDistance::Pow(0) => f.write_str("1"),
            DyadicDistance::Pow(n) => write!(f, "2^-{n}"),
        }
    }
}

impl FromStr for DyadicDistance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let t = s.trim();
        match t {
            "1" => return Ok(DyadicDistance::ONE),
            "0" => return Ok(DyadicDistance::Zero),
            _ => {}
        }
        t.strip_prefix("2^-")
            .and_then(|e| e.parse::<u32>().ok())
            .map(DyadicDistance::Pow)
            .ok_or_else(|| Error::Parse(format!("expected 2^-m or 1, got {s:?}")))
    }
}

impl Serialize for DyadicDistance {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for DyadicDistance {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A distance reading. When the underlying prefix scan hit its horizon the
/// value is only an upper bound (`exact == false`).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Distance {
    pub value: DyadicDistance,
    pub exact: bool,
}

/// Longest common prefix of two points. Exact when both are eventually
/// periodic; otherwise the scan stops at `horizon`.
pub fn lcp(x: &Point, y: &Point, horizon: usize) -> Lcp {
    if let (Some(a), Some(b)) = (x.as_periodic(), y.as_periodic()) {
        return match a.lcp(b) {
            Some(n) => Lcp::Exact(n),
            None => Lcp::Infinite,
        };
    }
    for i in 0..horizon {
        if x.symbol_at(i) != y.symbol_at(i) {
            return Lcp::Exact(i);
        }
    }
    Lcp::AtLeast(horizon)
}

pub fn distance(x: &Point, y: &Point, horizon: usize) -> Distance {
    match lcp(x, y, horizon) {
        Lcp::Exact(n) => Distance { value: DyadicDistance::from_lcp(n), exact: true },
        Lcp::Infinite => Distance { value: DyadicDistance::Zero, exact: true },
        Lcp::AtLeast(n) => Distance { value: DyadicDistance::from_lcp(n), exact: false },
    }
}

/// True iff `x` and `y` agree on their first `n` symbols.
pub fn agree(x: &Point, y: &Point, n: usize) -> bool {
    if let (Some(a), Some(b)) = (x.as_periodic(), y.as_periodic()) {
        return a.lcp(b).is_none_or(|l| l >= n);
    }
    (0..n).all(|i| x.symbol_at(i) == y.symbol_at(i))
}

/// Exact test of `d(x, y) < bound`.
pub fn closer_than(x: &Point, y: &Point, bound: DyadicDistance) -> bool {
    match bound.strict_agreement() {
        Some(n) => agree(x, y, n),
        None => false,
    }
}
