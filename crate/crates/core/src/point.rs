//! Points of `Λ^ω` and the shift action.
//!
//! A point is either eventually periodic, stored in a normal form so that
//! equality is syntactic, or a generator scheme: a closed descriptor with a
//! total, deterministic `symbol_at`. Schemes never hold callbacks, so every
//! point can be serialized and replayed.
//!
//! Literal codec: `"PRE|PER"` for `PRE·PER^ω` (each side in the word codec),
//! plus the scheme names `remark1` and `remark2`. Other schemes serialize as
//! a JSON object `{"scheme": ...}`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::{Symbol, Word};

/// `pre · per^ω` with minimal period and minimal preperiod.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Periodic {
    pre: Word,
    per: Word,
}

impl Periodic {
    pub fn new(pre: Word, per: Word) -> Result<Self> {
        if per.is_empty() {
            return Err(Error::EmptyPeriod);
        }
        let mut pre = pre.into_vec();
        let mut per = per.into_vec();
        let p = minimal_period(&per);
        per.truncate(p);
        while let (Some(a), Some(b)) = (pre.last(), per.last()) {
            if a != b {
                break;
            }
            pre.pop();
            per.rotate_right(1);
        }
        Ok(Periodic { pre: Word::new(pre), per: Word::new(per) })
    }

    pub fn preperiod(&self) -> &Word {
        &self.pre
    }

    pub fn period(&self) -> &Word {
        &self.per
    }

    pub fn symbol_at(&self, i: usize) -> Symbol {
        if i < self.pre.len() {
            self.pre[i]
        } else {
            self.per[(i - self.pre.len()) % self.per.len()]
        }
    }

    pub fn shift(&self, n: usize) -> Periodic {
        if n <= self.pre.len() {
            return Periodic { pre: self.pre.slice(n, self.pre.len()), per: self.per.clone() };
        }
        let mut per = self.per.clone().into_vec();
        let r = (n - self.pre.len()) % per.len();
        per.rotate_left(r);
        Periodic { pre: Word::empty(), per: Word::new(per) }
    }

    /// Length of the longest common prefix, `None` if the points are equal.
    pub fn lcp(&self, other: &Periodic) -> Option<usize> {
        if self == other {
            return None;
        }
        let bound = self.pre.len().max(other.pre.len()) + lcm(self.per.len(), other.per.len());
        (0..bound).find(|&i| self.symbol_at(i) != other.symbol_at(i))
    }

    /// Every symbol occurring in the point.
    pub fn symbols(&self) -> BTreeSet<Symbol> {
        self.pre.iter().chain(self.per.iter()).copied().collect()
    }

    /// The set of length-`n` factors of the periodic tail.
    pub fn tail_factors(&self, n: usize) -> BTreeSet<Word> {
        let p = self.per.len();
        (0..p)
            .map(|r| (0..n).map(|j| self.per[(r + j) % p]).collect())
            .collect()
    }
}

fn minimal_period(w: &[Symbol]) -> usize {
    let n = w.len();
    (1..=n)
        .find(|&p| n.is_multiple_of(p) && (p..n).all(|i| w[i] == w[i - p]))
        .unwrap_or(n)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 { a } else { gcd(b, a % b) }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// A strictly increasing index map used to take subsequences of streams.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IndexMap {
    /// `i ↦ stride·i + offset`, `stride >= 1`
    Affine { stride: usize, offset: usize },
    /// `i ↦ i² + offset`
    Square { offset: usize },
}

impl IndexMap {
    pub fn apply(&self, i: usize) -> usize {
        match *self {
            IndexMap::Affine { stride, offset } => stride.max(1) * i + offset,
            IndexMap::Square { offset } => i * i + offset,
        }
    }
}

/// An index-addressable, replayable sequence of points.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointStream {
    /// `i ↦ σ^i(x)`
    Orbit(Point),
    /// `transient` once, then `cycle` repeated forever.
    Cyclic { transient: Vec<Point>, cycle: Vec<Point> },
    Subsequence { base: Box<PointStream>, map: IndexMap },
}

impl PointStream {
    pub fn constant(p: Point) -> Self {
        PointStream::Cyclic { transient: Vec::new(), cycle: vec![p] }
    }

    pub fn point(&self, i: usize) -> Point {
        match self {
            PointStream::Orbit(x) => x.shift(i),
            PointStream::Cyclic { transient, cycle } => {
                if i < transient.len() {
                    transient[i].clone()
                } else {
                    cycle[(i - transient.len()) % cycle.len()].clone()
                }
            }
            PointStream::Subsequence { base, map } => base.point(map.apply(i)),
        }
    }

    /// `point(i)` restricted to its first `n` symbols.
    pub fn prefix(&self, i: usize, n: usize) -> Word {
        match self {
            PointStream::Orbit(x) => x.window(i, i + n),
            PointStream::Cyclic { .. } => self.point(i).prefix(n),
            PointStream::Subsequence { base, map } => base.prefix(map.apply(i), n),
        }
    }

    pub fn head(&self, i: usize) -> Symbol {
        match self {
            PointStream::Orbit(x) => x.symbol_at(i),
            PointStream::Cyclic { transient, cycle } => {
                if i < transient.len() {
                    transient[i].symbol_at(0)
                } else {
                    cycle[(i - transient.len()) % cycle.len()].symbol_at(0)
                }
            }
            PointStream::Subsequence { base, map } => base.head(map.apply(i)),
        }
    }

    pub fn subsequence(self, map: IndexMap) -> Self {
        PointStream::Subsequence { base: Box::new(self), map }
    }
}

/// Closed descriptors for points that are not (known to be) eventually
/// periodic.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// `0^1 2 1^2 3 0^3 4 1^4 5 …`: blocks of alternating `0`/`1` of growing
    /// length, each closed by a separator one larger than the block length.
    Remark1,
    /// `0 1 2 0^2 1^2 3 0^3 1^3 4 …`: segment `k` is `0^k 1^k (k+1)`.
    Remark2,
    /// `b_0 s_0 b_1 s_1 …` where the blocks run in rounds `t = 1, 2, …`,
    /// each round emitting `p[0,t)` for every `p` in `schedule` in order, and
    /// `s_j = first_separator + j`.
    Interleave { schedule: Vec<Point>, first_separator: Symbol },
    /// Finite heads followed by a tail point.
    HeadsThenTail { heads: Word, tail: Point },
    /// A finite prefix spliced in front of a base point.
    BackExtended { prefix: Word, base: Point },
    /// `j ↦ stream(start + j)_0`
    Diagonal { stream: PointStream, start: usize },
    /// `j ↦ base(offset + j)`
    Shifted { base: Point, offset: usize },
}

impl Scheme {
    fn symbol_at(&self, i: usize) -> Symbol {
        match self {
            Scheme::Remark1 => remark1_symbol(i),
            Scheme::Remark2 => remark2_symbol(i),
            Scheme::Interleave { schedule, first_separator } => {
                interleave_symbol(schedule, *first_separator, i)
            }
            Scheme::HeadsThenTail { heads: h, tail: t } | Scheme::BackExtended { prefix: h, base: t } => {
                if i < h.len() { h[i] } else { t.symbol_at(i - h.len()) }
            }
            Scheme::Diagonal { stream, start } => stream.head(start + i),
            Scheme::Shifted { base, offset } => base.symbol_at(offset + i),
        }
    }
}

/// Segment index `k >= 1` of the triangular layout whose segment `k` starts
/// at `(k-1)(k+2)/2` (segment `k` has length `k + 1`).
fn triangular_segment(i: usize) -> usize {
    let start = |k: usize| (k - 1) * (k + 2) / 2;
    let mut k = ((9 + 8 * i).isqrt().saturating_sub(3) / 2).max(1);
    while start(k + 1) <= i {
        k += 1;
    }
    while k > 1 && start(k) > i {
        k -= 1;
    }
    k
}

fn remark1_symbol(i: usize) -> Symbol {
    let k = triangular_segment(i);
    let o = i - (k - 1) * (k + 2) / 2;
    if o < k {
        Symbol(if k % 2 == 1 { 0 } else { 1 })
    } else {
        Symbol(k as u64 + 1)
    }
}

fn remark2_symbol(i: usize) -> Symbol {
    // segment k occupies [k^2 - 1, (k+1)^2 - 1)
    let k = (i + 1).isqrt();
    let o = i + 1 - k * k;
    if o < k {
        Symbol(0)
    } else if o < 2 * k {
        Symbol(1)
    } else {
        Symbol(k as u64 + 1)
    }
}

fn interleave_symbol(schedule: &[Point], first_separator: Symbol, i: usize) -> Symbol {
    let c = schedule.len();
    let t = triangular_segment(i / c);
    let o = i - c * ((t - 1) * (t + 2) / 2);
    let (b, pos) = (o / (t + 1), o % (t + 1));
    if pos < t {
        schedule[b].symbol_at(pos)
    } else {
        Symbol(first_separator.0 + (c * (t - 1) + b) as u64)
    }
}

/// A point of `Λ^ω`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Point {
    Periodic(Periodic),
    Scheme(Arc<Scheme>),
}

impl Point {
    /// `pre · per^ω` in normal form.
    pub fn periodic(pre: Word, per: Word) -> Result<Point> {
        Periodic::new(pre, per).map(Point::Periodic)
    }

    /// `s^ω`
    pub fn constant(s: u64) -> Point {
        Point::Periodic(Periodic { pre: Word::empty(), per: Word::from_values([s]) })
    }

    pub fn remark1() -> Point {
        Point::Scheme(Arc::new(Scheme::Remark1))
    }

    pub fn remark2() -> Point {
        Point::Scheme(Arc::new(Scheme::Remark2))
    }

    /// Panics if `schedule` is empty.
    pub fn interleave(schedule: Vec<Point>, first_separator: Symbol) -> Point {
        assert!(!schedule.is_empty(), "interleave schedule must be nonempty");
        Point::Scheme(Arc::new(Scheme::Interleave { schedule, first_separator }))
    }

    /// `heads · tail`; collapses to normal form when `tail` is eventually
    /// periodic.
    pub fn heads_then_tail(heads: Word, tail: Point) -> Point {
        Self::splice(heads, tail, |heads, tail| Scheme::HeadsThenTail { heads, tail })
    }

    /// `prefix · base`, the splice produced by backward extension.
    pub fn back_extended(prefix: Word, base: Point) -> Point {
        Self::splice(prefix, base, |prefix, base| Scheme::BackExtended { prefix, base })
    }

    fn splice(head: Word, tail: Point, wrap: impl FnOnce(Word, Point) -> Scheme) -> Point {
        if head.is_empty() {
            return tail;
        }
        match &tail {
            Point::Periodic(p) => {
                let pre = head.concat(&p.pre);
                Point::Periodic(Periodic::new(pre, p.per.clone()).expect("period is nonempty"))
            }
            Point::Scheme(_) => Point::Scheme(Arc::new(wrap(head, tail))),
        }
    }

    /// The point `j ↦ stream(start + j)_0`.
    pub fn diagonal(stream: PointStream, start: usize) -> Point {
        match stream {
            PointStream::Orbit(x) => x.shift(start),
            PointStream::Cyclic { ref transient, ref cycle } => {
                let heads = |ps: &[Point]| ps.iter().map(|p| p.symbol_at(0)).collect::<Word>();
                let t = transient.len();
                if start < t {
                    Point::periodic(heads(&transient[start..]), heads(cycle)).expect("nonempty cycle")
                } else {
                    let mut per = heads(cycle).into_vec();
                    let r = (start - t) % per.len();
                    per.rotate_left(r);
                    Point::periodic(Word::empty(), Word::new(per)).expect("nonempty cycle")
                }
            }
            stream @ PointStream::Subsequence { .. } => {
                Point::Scheme(Arc::new(Scheme::Diagonal { stream, start }))
            }
        }
    }

    pub fn as_periodic(&self) -> Option<&Periodic> {
        match self {
            Point::Periodic(p) => Some(p),
            Point::Scheme(_) => None,
        }
    }

    pub fn is_eventually_periodic(&self) -> bool {
        self.as_periodic().is_some()
    }

    pub fn scheme(&self) -> Option<&Scheme> {
        match self {
            Point::Periodic(_) => None,
            Point::Scheme(s) => Some(s),
        }
    }

    pub fn symbol_at(&self, i: usize) -> Symbol {
        match self {
            Point::Periodic(p) => p.symbol_at(i),
            Point::Scheme(s) => s.symbol_at(i),
        }
    }

    /// `x[from, to)`
    pub fn window(&self, from: usize, to: usize) -> Word {
        (from..to).map(|i| self.symbol_at(i)).collect()
    }

    pub fn prefix(&self, n: usize) -> Word {
        self.window(0, n)
    }

    /// `σ^n(x)`
    pub fn shift(&self, n: usize) -> Point {
        if n == 0 {
            return self.clone();
        }
        match self {
            Point::Periodic(p) => Point::Periodic(p.shift(n)),
            Point::Scheme(s) => match s.as_ref() {
                Scheme::Shifted { base, offset } => base.shift_scheme(offset + n),
                Scheme::HeadsThenTail { heads: h, tail: t } | Scheme::BackExtended { prefix: h, base: t } => {
                    if n >= h.len() {
                        t.shift(n - h.len())
                    } else {
                        Point::heads_then_tail(h.slice(n, h.len()), t.clone())
                    }
                }
                Scheme::Diagonal { stream, start } => {
                    Point::diagonal(stream.clone(), start + n)
                }
                _ => self.shift_scheme(n),
            },
        }
    }

    fn shift_scheme(&self, offset: usize) -> Point {
        if offset == 0 {
            return self.clone();
        }
        Point::Scheme(Arc::new(Scheme::Shifted { base: self.clone(), offset }))
    }

    /// Every symbol of an eventually periodic point.
    pub fn symbols(&self) -> Option<BTreeSet<Symbol>> {
        self.as_periodic().map(Periodic::symbols)
    }

    /// Symbols of an eventually periodic point, or of the first `n` symbols
    /// of a scheme.
    pub fn symbols_or_prefix(&self, n: usize) -> BTreeSet<Symbol> {
        self.symbols().unwrap_or_else(|| self.prefix(n).iter().copied().collect())
    }

    /// A length from which on the symbols of two eventually periodic points
    /// are periodic with a common period: `preperiod + lcm(periods)`.
    pub fn exactness_horizon(&self, other: &Point) -> Option<usize> {
        let (a, b) = (self.as_periodic()?, other.as_periodic()?);
        Some(a.pre.len().max(b.pre.len()) + lcm(a.per.len(), b.per.len()))
    }
}

/// Exact equality of eventually periodic points via their normal forms.
pub fn ep_equal(x: &Point, y: &Point) -> Result<bool> {
    match (x.as_periodic(), y.as_periodic()) {
        (Some(a), Some(b)) => Ok(a == b),
        _ => Err(Error::NotEventuallyPeriodic),
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Periodic(p) => write!(f, "{}|{}", p.pre, p.per),
            Point::Scheme(s) => match s.as_ref() {
                Scheme::Remark1 => f.write_str("remark1"),
                Scheme::Remark2 => f.write_str("remark2"),
                Scheme::Interleave { schedule, first_separator } => {
                    write!(f, "interleave[")?;
                    for (i, p) in schedule.iter().enumerate() {
                        if i > 0 {
                            f.write_str(", ")?;
                        }
                        write!(f, "{p}")?;
                    }
                    write!(f, "; s0={first_separator}]")
                }
                Scheme::HeadsThenTail { heads, tail } => write!(f, "heads[{heads}]·({tail})"),
                Scheme::BackExtended { prefix, base } => write!(f, "back[{prefix}]·({base})"),
                Scheme::Diagonal { start, .. } => write!(f, "diagonal[from {start}]"),
                Scheme::Shifted { base, offset } => write!(f, "shift^{offset}({base})"),
            },
        }
    }
}

impl FromStr for Point {
    type Err = Error;

    fn from_str(s: &str) -> Result<Point> {
        match s.trim() {
            "remark1" => return Ok(Point::remark1()),
            "remark2" => return Ok(Point::remark2()),
            _ => {}
        }
        let (pre, per) = s
            .split_once('|')
            .ok_or_else(|| Error::Parse(format!("point literal {s:?} must look like PRE|PER")))?;
        Point::periodic(pre.parse()?, per.parse()?)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum PointRepr {
    Literal(String),
    Scheme { scheme: Scheme },
}

impl Serialize for Point {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self.scheme() {
            None | Some(Scheme::Remark1) | Some(Scheme::Remark2) => serializer.collect_str(self),
            Some(s) => PointRepr::Scheme { scheme: s.clone() }.serialize(serializer),
        }
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        match PointRepr::deserialize(deserializer)? {
            PointRepr::Literal(s) => s.parse().map_err(serde::de::Error::custom),
            PointRepr::Scheme { scheme } => Ok(Point::Scheme(Arc::new(scheme))),
        }
    }
}
