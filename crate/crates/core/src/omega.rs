//! Omega-limit sets at finite resolution.
//!
//! The depth-`n` prefixes of `ω(x)` are the words that occur in `x` at
//! infinitely many positions. The ladder approximation intersects the factor
//! sets of the disjoint windows `[2^j·T0, 2^(j+1)·T0)`, `j < levels`; a word
//! occurring only finitely often drops out once some window misses it.
//!
//! Eventually periodic inputs and eventually cyclic streams are answered
//! exactly from their periodic part. For the two built-in remark schemes a
//! ladder result equal to the closed form is certified: every word that
//! avoids the one-off separators lies inside a single block, and with two or
//! more levels no separator-bearing word survives.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::metric::DyadicDistance;
use crate::point::{IndexMap, Point, PointStream, Scheme};
use crate::shadowing::Violation;
use crate::transitivity::SetPresentation;
use crate::word::{Symbol, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ladder {
    pub t0: usize,
    pub levels: usize,
}

impl Ladder {
    pub fn new(t0: usize, levels: usize) -> Self {
        Ladder { t0, levels }
    }

    /// `[2^j·T0, 2^(j+1)·T0)` for `j < levels`.
    pub fn windows(self) -> impl Iterator<Item = (usize, usize)> {
        (0..self.levels).map(move |j| (self.t0 << j, self.t0 << (j + 1)))
    }
}

/// Depth-`n` prefix set of an omega-limit set, with its provenance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaApprox {
    pub depth: usize,
    pub prefixes: BTreeSet<Word>,
    pub ladder: Ladder,
    /// The set is the exact prefix set, not just a ladder reading.
    pub exact: bool,
}

/// `{ x[i, i+n) : from ≤ i ≤ to - n }`
pub fn factor_set(x: &Point, n: usize, from: usize, to: usize) -> BTreeSet<Word> {
    if to < from + n {
        return BTreeSet::new();
    }
    let buf = x.window(from, to);
    buf.windows(n).map(Word::from).collect()
}

fn ladder_intersection(ladder: Ladder, mut window_set: impl FnMut(usize, usize) -> BTreeSet<Word>) -> BTreeSet<Word> {
    let mut acc: Option<BTreeSet<Word>> = None;
    for (from, to) in ladder.windows() {
        let s = window_set(from, to);
        acc = Some(match acc {
            None => s,
            Some(a) => a.intersection(&s).cloned().collect(),
        });
    }
    acc.unwrap_or_default()
}

/// Closed-form prefix set of `ω(x)` for the built-in remark schemes.
fn remark_closed_form(x: &Point, n: usize) -> Option<BTreeSet<Word>> {
    match x.scheme()? {
        Scheme::Remark1 => Some([Word::repeat(Symbol(0), n), Word::repeat(Symbol(1), n)].into()),
        Scheme::Remark2 => Some(zero_one_staircase(n)),
        _ => None,
    }
}

/// `{0^a 1^b : a + b = n}`
fn zero_one_staircase(n: usize) -> BTreeSet<Word> {
    (0..=n)
        .map(|a| Word::repeat(Symbol(0), a).concat(&Word::repeat(Symbol(1), n - a)))
        .collect()
}

pub fn omega_prefixes(x: &Point, n: usize, t0: usize, levels: usize) -> OmegaApprox {
    let ladder = Ladder::new(t0, levels);
    if let Some(p) = x.as_periodic() {
        return OmegaApprox { depth: n, prefixes: p.tail_factors(n), ladder, exact: true };
    }
    let prefixes = ladder_intersection(ladder, |from, to| factor_set(x, n, from, to));
    let exact = levels >= 2 && remark_closed_form(x, n).is_some_and(|c| c == prefixes);
    OmegaApprox { depth: n, prefixes, ladder, exact }
}

/// Base stream, transient length and cycle length of a stream that is
/// eventually cyclic, with the composite index map of any subsequences.
fn cyclic_core(stream: &PointStream) -> Option<(Vec<&IndexMap>, usize, usize)> {
    match stream {
        PointStream::Cyclic { transient, cycle } => Some((Vec::new(), transient.len(), cycle.len())),
        PointStream::Orbit(x) => {
            let p = x.as_periodic()?;
            Some((Vec::new(), p.preperiod().len(), p.period().len()))
        }
        PointStream::Subsequence { base, map } => {
            let (mut maps, t, c) = cyclic_core(base)?;
            maps.push(map);
            Some((maps, t, c))
        }
    }
}

/// The points visited infinitely often by an eventually cyclic stream.
///
/// Affine and square index maps are periodic modulo the cycle length `c`
/// with period `c`, and so are their compositions; every map is at least
/// the identity, so indices `i ≥ t` already land in the cycle.
fn recurrent_indices(stream: &PointStream) -> Option<Vec<usize>> {
    let (maps, t, c) = cyclic_core(stream)?;
    let outer = |i: usize| maps.iter().rev().fold(i, |acc, m| m.apply(acc));
    // outer(i) is evaluated for i < t + c only; the maps are polynomial so
    // this stays small for the stream sizes in use
    Some((t..t + c).map(outer).collect())
}

fn stream_base(stream: &PointStream) -> &PointStream {
    match stream {
        PointStream::Subsequence { base, .. } => stream_base(base),
        s => s,
    }
}

pub fn sequence_omega_prefixes(stream: &PointStream, n: usize, t0: usize, levels: usize) -> OmegaApprox {
    let ladder = Ladder::new(t0, levels);
    if let Some(idx) = recurrent_indices(stream) {
        let base = stream_base(stream);
        let prefixes = idx.into_iter().map(|i| base.prefix(i, n)).collect();
        return OmegaApprox { depth: n, prefixes, ladder, exact: true };
    }
    let prefixes = ladder_intersection(ladder, |from, to| (from..to).map(|i| stream.prefix(i, n)).collect());
    let exact = match stream {
        PointStream::Orbit(x) => levels >= 2 && remark_closed_form(x, n).is_some_and(|c| c == prefixes),
        _ => false,
    };
    OmegaApprox { depth: n, prefixes, ladder, exact }
}

/// Exact depth-`n` prefix set of `Z`.
pub fn z_prefixes(z: &SetPresentation, n: usize) -> BTreeSet<Word> {
    match z {
        SetPresentation::FiniteEp(points) => points.iter().map(|p| p.prefix(n)).collect(),
        SetPresentation::Remark2Family => zero_one_staircase(n),
        SetPresentation::PrefixOracle { prefixes, .. } => prefixes(n),
    }
}

/// `d(σ^i(x), Z) < ε` for `N ≤ i < horizon`, via prefix membership at
/// depth `e + 1` for `ε = 2^-e`.
pub fn attracting_check(
    x: &Point,
    z: &SetPresentation,
    eps: DyadicDistance,
    from: usize,
    horizon: usize,
) -> Result<(), Violation> {
    let Some(depth) = eps.strict_agreement() else {
        return if from < horizon { Err(Violation::at(from)) } else { Ok(()) };
    };
    let allowed = z_prefixes(z, depth);
    if from >= horizon {
        return Ok(());
    }
    let buf = x.window(from, horizon + depth);
    for (k, w) in buf.windows(depth).take(horizon - from).enumerate() {
        if !allowed.contains(w) {
            return Err(Violation::at(from + k));
        }
    }
    Ok(())
}

/// `omega_prefixes(x, n, T0, levels) = z_prefixes(Z, n)`
pub fn omega_equals(x: &Point, z: &SetPresentation, n: usize, t0: usize, levels: usize) -> bool {
    omega_prefixes(x, n, t0, levels).prefixes == z_prefixes(z, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ep(pre: &[u64], per: &[u64]) -> Point {
        Point::periodic(Word::from_values(pre.to_vec()), Word::from_values(per.to_vec())).unwrap()
    }

    fn words(ws: &[&[u64]]) -> BTreeSet<Word> {
        ws.iter().map(|w| Word::from_values(w.to_vec())).collect()
    }

    fn set(ps: &[Point]) -> SetPresentation {
        SetPresentation::finite(ps.iter().cloned()).unwrap()
    }

    #[test]
    fn factor_set_examples() {
        assert_eq!(factor_set(&ep(&[], &[0, 1]), 2, 0, 10), words(&[&[0, 1], &[1, 0]]));
        assert_eq!(factor_set(&Point::remark1(), 1, 0, 5), words(&[&[0], &[2], &[1], &[3]]));
        assert_eq!(factor_set(&ep(&[], &[0]), 3, 0, 10), words(&[&[0, 0, 0]]));
        assert!(factor_set(&ep(&[], &[0]), 3, 4, 6).is_empty());
    }

    #[test]
    fn omega_examples() {
        let o = omega_prefixes(&Point::remark1(), 2, 64, 4);
        assert_eq!(o.prefixes, words(&[&[0, 0], &[1, 1]]));
        assert!(o.exact);
        let o = omega_prefixes(&Point::remark2(), 3, 64, 4);
        assert_eq!(o.prefixes, words(&[&[0, 0, 0], &[0, 0, 1], &[0, 1, 1], &[1, 1, 1]]));
        assert!(o.exact);
        let o = omega_prefixes(&ep(&[0, 1, 2, 3], &[4]), 1, 8, 3);
        assert_eq!(o.prefixes, words(&[&[4]]));
        assert!(o.exact);
        // a single window cannot shed the separators
        assert!(!omega_prefixes(&Point::remark1(), 2, 64, 1).exact);
    }

    #[test]
    fn sequence_examples() {
        let s = PointStream::constant(ep(&[], &[0]));
        assert_eq!(sequence_omega_prefixes(&s, 3, 8, 2).prefixes, words(&[&[0, 0, 0]]));
        let s = PointStream::Orbit(Point::remark1());
        let o = sequence_omega_prefixes(&s, 2, 64, 4);
        assert_eq!(o.prefixes, words(&[&[0, 0], &[1, 1]]));
        assert!(o.exact);
        let s = PointStream::Orbit(ep(&[7], &[0, 1])).subsequence(IndexMap::Affine { stride: 2, offset: 0 });
        assert_eq!(sequence_omega_prefixes(&s, 2, 8, 2).prefixes, words(&[&[1, 0]]));
        let s = PointStream::Orbit(ep(&[], &[0, 1, 2])).subsequence(IndexMap::Square { offset: 0 });
        // i² mod 3 ∈ {0, 1}
        assert_eq!(sequence_omega_prefixes(&s, 1, 8, 2).prefixes, words(&[&[0], &[1]]));
    }

    #[test]
    fn z_prefix_examples() {
        assert_eq!(z_prefixes(&set(&[ep(&[], &[0]), ep(&[], &[1])]), 2), words(&[&[0, 0], &[1, 1]]));
        assert_eq!(
            z_prefixes(&SetPresentation::Remark2Family, 3),
            words(&[&[0, 0, 0], &[0, 0, 1], &[0, 1, 1], &[1, 1, 1]])
        );
        assert_eq!(z_prefixes(&set(&[ep(&[], &[0, 1]), ep(&[], &[1, 0])]), 3), words(&[&[0, 1, 0], &[1, 0, 1]]));
    }

    #[test]
    fn attracting_examples() {
        let one = set(&[ep(&[], &[1])]);
        assert_eq!(attracting_check(&ep(&[0, 0, 0], &[1]), &one, DyadicDistance::pow2_neg(9), 3, 100), Ok(()));
        assert!(attracting_check(&ep(&[0, 0, 0], &[1]), &one, DyadicDistance::pow2_neg(9), 2, 100).is_err());
        let z = set(&[ep(&[], &[0]), ep(&[], &[1])]);
        let v = attracting_check(&Point::remark1(), &z, DyadicDistance::pow2_neg(1), 50, 10_000).unwrap_err();
        assert!(Point::remark1().window(v.index, v.index + 2).iter().any(|s| s.0 >= 2));
    }

    #[test]
    fn omega_equals_examples() {
        let z = set(&[ep(&[], &[0]), ep(&[], &[1])]);
        assert!(omega_equals(&Point::remark1(), &z, 2, 64, 4));
        assert!(omega_equals(&Point::remark2(), &SetPresentation::Remark2Family, 3, 64, 4));
        assert!(!omega_equals(&ep(&[], &[0]), &set(&[ep(&[], &[1])]), 1, 8, 2));
    }
}
