//! δ-chains inside finite sets of eventually periodic points, internal chain
//! transitivity, and the constructions realizing a set as an omega-limit set.
//!
//! For a finite set `Z` of eventually periodic points every edge test
//! `d(σ(p), q) < δ` is exact, and only finitely many distinct edge relations
//! occur: once `δ = 2^-e` with `e` at least the largest finite
//! `lcp(σ(p), q)`, the only remaining edges are the exact ones `σ(p) = q`.
//! That stable rung decides chain transitivity at every finer `δ`.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metric::{agree, DyadicDistance};
use crate::point::{Point, PointStream};
use crate::shadowing::{synthesize_asymptotic_shadow, AsymptoticPseudoOrbit, AsymptoticShadow, Rate};
use crate::subshift::Subshift;
use crate::word::{Symbol, Word};

type PrefixFn = Arc<dyn Fn(usize) -> BTreeSet<Word> + Send + Sync>;

/// A set `Z ⊆ Λ^ω` in one of the forms the library can reason about.
#[derive(Clone)]
pub enum SetPresentation {
    /// Distinct eventually periodic points, sorted by normal form.
    FiniteEp(Vec<Point>),
    /// `{0^ω, 1^ω} ∪ {0^k 1^ω : k ≥ 1}`
    Remark2Family,
    /// Depth `n` ↦ the length-`n` prefixes of the set's points.
    PrefixOracle { name: String, prefixes: PrefixFn },
}

impl SetPresentation {
    /// Deduplicates; every point must be eventually periodic.
    pub fn finite<I: IntoIterator<Item = Point>>(points: I) -> Result<Self> {
        let set: BTreeSet<Point> = points.into_iter().collect();
        if set.iter().any(|p| !p.is_eventually_periodic()) {
            return Err(Error::NotEventuallyPeriodic);
        }
        Ok(SetPresentation::FiniteEp(set.into_iter().collect()))
    }

    pub fn oracle(name: impl Into<String>, prefixes: impl Fn(usize) -> BTreeSet<Word> + Send + Sync + 'static) -> Self {
        SetPresentation::PrefixOracle { name: name.into(), prefixes: Arc::new(prefixes) }
    }

    /// `{0^ω, 1^ω} ∪ {0^k 1^ω : 1 ≤ k ≤ max_k}`
    pub fn remark2_truncated(max_k: usize) -> Self {
        let one = Word::from_values([1]);
        let mut pts = vec![Point::constant(0), Point::constant(1)];
        for k in 1..=max_k {
            pts.push(Point::periodic(Word::repeat(Symbol(0), k), one.clone()).expect("nonempty period"));
        }
        SetPresentation::finite(pts).expect("eventually periodic")
    }

    /// The orbit `{x, σx, …}` of an eventually periodic point.
    pub fn orbit_of(x: &Point) -> Result<Self> {
        let p = x.as_periodic().ok_or(Error::NotEventuallyPeriodic)?;
        let n = p.preperiod().len() + p.period().len();
        SetPresentation::finite((0..n).map(|i| x.shift(i)))
    }

    pub fn points(&self) -> Option<&[Point]> {
        match self {
            SetPresentation::FiniteEp(p) => Some(p),
            _ => None,
        }
    }

    fn require_points(&self) -> Result<&[Point]> {
        self.points().ok_or(Error::NeedsFiniteSet)
    }

    pub fn contains(&self, x: &Point) -> Option<bool> {
        self.points().map(|ps| ps.contains(x))
    }

    /// Union of the symbols of a finite presentation.
    pub fn symbols(&self) -> Option<BTreeSet<Symbol>> {
        self.points().map(|ps| ps.iter().flat_map(|p| p.symbols().unwrap_or_default()).collect())
    }

    pub fn to_spec(&self) -> Option<SetSpec> {
        match self {
            SetPresentation::FiniteEp(p) => Some(SetSpec::Finite { points: p.clone() }),
            SetPresentation::Remark2Family => Some(SetSpec::Family { name: "remark2".into() }),
            SetPresentation::PrefixOracle { .. } => None,
        }
    }

    pub fn from_spec(spec: &SetSpec) -> Result<Self> {
        match spec {
            SetSpec::Finite { points } => SetPresentation::finite(points.iter().cloned()),
            SetSpec::Family { name } if name == "remark2" => Ok(SetPresentation::Remark2Family),
            SetSpec::Family { name } => Err(Error::Parse(format!("unknown set family {name:?}"))),
        }
    }
}

impl fmt::Debug for SetPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SetPresentation::FiniteEp(p) => f.debug_tuple("FiniteEp").field(p).finish(),
            SetPresentation::Remark2Family => f.write_str("Remark2Family"),
            SetPresentation::PrefixOracle { name, .. } => write!(f, "PrefixOracle({name:?})"),
        }
    }
}

/// JSON form: `{"kind":"finite","points":[…]}` or `{"kind":"family","name":"remark2"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum SetSpec {
    Finite { points: Vec<Point> },
    Family { name: String },
}

/// `entries[0] → entries[1] → …` with every step `d(σ(p), q) < delta`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaChain {
    pub delta: DyadicDistance,
    pub entries: Vec<Point>,
}

impl DeltaChain {
    /// Re-checks every link.
    pub fn is_valid(&self) -> bool {
        let Some(n) = self.delta.strict_agreement() else {
            return self.entries.len() == 1;
        };
        !self.entries.is_empty() && self.entries.windows(2).all(|w| agree(&w[0].shift(1), &w[1], n))
    }
}

/// Edge relation of `Z` at `δ`: `adj[i]` lists `j` with `d(σ(z_i), z_j) < δ`.
fn edges(points: &[Point], delta: DyadicDistance) -> Vec<Vec<usize>> {
    let shifted: Vec<Point> = points.iter().map(|p| p.shift(1)).collect();
    shifted
        .iter()
        .map(|sp| match delta.strict_agreement() {
            Some(n) => (0..points.len()).filter(|&j| agree(sp, &points[j], n)).collect(),
            None => Vec::new(),
        })
        .collect()
}

/// Shortest path with at least `min_steps` edges and at most `max_len` entries.
fn bfs(adj: &[Vec<usize>], from: usize, to: usize, max_len: usize, min_steps: usize) -> Option<Vec<usize>> {
    if min_steps == 0 && from == to {
        return (max_len >= 1).then(|| vec![from]);
    }
    // states (vertex, min(steps, min_steps)); steps only matter below the floor
    let floor = min_steps.max(1);
    let key = |v: usize, s: usize| v * (floor + 1) + s.min(floor);
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; adj.len() * (floor + 1)];
    let mut seen = vec![false; adj.len() * (floor + 1)];
    let mut queue = VecDeque::new();
    seen[key(from, 0)] = true;
    queue.push_back((from, 0usize, 1usize));
    while let Some((v, s, len)) = queue.pop_front() {
        if len >= max_len {
            continue;
        }
        for &w in &adj[v] {
            let s2 = (s + 1).min(floor);
            if seen[key(w, s2)] {
                continue;
            }
            seen[key(w, s2)] = true;
            parent[key(w, s2)] = Some((v, s));
            if w == to && s2 >= min_steps {
                let mut path = vec![w];
                let mut cur = (v, s);
                loop {
                    path.push(cur.0);
                    match parent[key(cur.0, cur.1)] {
                        Some(p) if !(cur.0 == from && cur.1 == 0) => cur = p,
                        _ => break,
                    }
                }
                path.reverse();
                return Some(path);
            }
            queue.push_back((w, s2, len + 1));
        }
    }
    None
}

fn index_of(points: &[Point], x: &Point) -> Result<usize> {
    points.iter().position(|p| p == x).ok_or(Error::NotInSet)
}

/// A shortest δ-chain from `a` to `b` inside `Z`, with at most `max_len`
/// entries. Absence is exact. `a → a` is the one-entry chain `[a]`.
pub fn find_delta_chain(
    z: &SetPresentation,
    a: &Point,
    b: &Point,
    delta: DyadicDistance,
    max_len: usize,
) -> Result<Option<DeltaChain>> {
    find_delta_chain_min_steps(z, a, b, delta, max_len, 0)
}

/// As [`find_delta_chain`], requiring at least `min_steps` links.
pub fn find_delta_chain_min_steps(
    z: &SetPresentation,
    a: &Point,
    b: &Point,
    delta: DyadicDistance,
    max_len: usize,
    min_steps: usize,
) -> Result<Option<DeltaChain>> {
    let points = z.require_points()?;
    let (i, j) = (index_of(points, a)?, index_of(points, b)?);
    let adj = edges(points, delta);
    Ok(bfs(&adj, i, j, max_len, min_steps)
        .map(|path| DeltaChain { delta, entries: path.into_iter().map(|k| points[k].clone()).collect() }))
}

/// Chains exist between every ordered pair at this `δ`.
pub fn is_ict(z: &SetPresentation, delta: DyadicDistance, max_len: usize) -> Result<bool> {
    Ok(first_missing_chain(z.require_points()?, delta, max_len).is_none())
}

fn first_missing_chain(points: &[Point], delta: DyadicDistance, max_len: usize) -> Option<(usize, usize)> {
    let adj = edges(points, delta);
    (0..points.len())
        .flat_map(|i| (0..points.len()).map(move |j| (i, j)))
        .find(|&(i, j)| bfs(&adj, i, j, max_len, 0).is_none())
}

/// Largest finite `lcp(σ(p), q)` over `p, q ∈ Z`: from `δ = 2^-e` with `e`
/// at least this value on, only exact edges remain.
pub fn stable_exponent(z: &SetPresentation) -> Result<u32> {
    let points = z.require_points()?;
    let mut e = 0usize;
    for p in points {
        let sp = p.shift(1);
        let sp = sp.as_periodic().expect("finite sets hold eventually periodic points");
        for q in points {
            if let Some(l) = sp.lcp(q.as_periodic().expect("eventually periodic")) {
                e = e.max(l);
            }
        }
    }
    Ok(e as u32)
}

/// Exact internal chain transitivity: chains at the stable rung, whose
/// edge relation is contained in that of every coarser `δ`.
pub fn certify_ict(z: &SetPresentation) -> Result<bool> {
    let points = z.require_points()?;
    let delta = DyadicDistance::pow2_neg(stable_exponent(z)?);
    Ok(first_missing_chain(points, delta, points.len() + 1).is_none())
}

/// `σ(Z) = Z` as sets of normal forms.
pub fn check_closed_invariant(z: &SetPresentation) -> Result<bool> {
    let points = z.require_points()?;
    let image: BTreeSet<Point> = points.iter().map(|p| p.shift(1)).collect();
    let set: BTreeSet<Point> = points.iter().cloned().collect();
    Ok(image == set)
}

/// A stream visiting every point of `Z` infinitely often, joined by chains.
///
/// Target `n` is `Z[n mod |Z|]`, reached from target `n - 1` by a shortest
/// `2^-n`-chain of at least one link; the stream concatenates the chains,
/// dropping each chain's last entry (it opens the next chain). From the
/// stable rung on the chains repeat with period `|Z|`, so the stream is
/// eventually cyclic and its rate is an exact table of the transient defects.
pub fn ict_to_apo(z: &SetPresentation) -> Result<AsymptoticPseudoOrbit> {
    let points = z.require_points()?;
    if points.is_empty() {
        return Err(Error::EmptySet);
    }
    let k = points.len();
    let stable = stable_exponent(z)? as usize;
    let max_len = k + 1;
    let mut chains: Vec<Vec<usize>> = Vec::with_capacity(stable + k);
    for n in 0..stable + k {
        let delta = DyadicDistance::pow2_neg(n as u32);
        let adj = edges(points, delta);
        let (from, to) = (n % k, (n + 1) % k);
        let path = bfs(&adj, from, to, max_len, 1).ok_or(Error::NotIct { exponent: n as u32, from, to })?;
        chains.push(path);
    }
    let body = |cs: &[Vec<usize>]| -> Vec<Point> {
        cs.iter().flat_map(|c| c[..c.len() - 1].iter().map(|&i| points[i].clone())).collect()
    };
    let transient = body(&chains[..stable]);
    let cycle = body(&chains[stable..]);

    // defects of the steps leaving each transient entry
    let defects: Vec<Option<usize>> = (0..transient.len())
        .map(|i| {
            let next = if i + 1 < transient.len() { &transient[i + 1] } else { &cycle[0] };
            let sp = transient[i].shift(1);
            sp.as_periodic().and_then(|a| a.lcp(next.as_periodic().expect("eventually periodic")))
        })
        .collect();
    let rate = if defects.iter().all(Option::is_none) { Rate::Zero } else { Rate::Defects(defects) };
    Ok(AsymptoticPseudoOrbit { stream: PointStream::Cyclic { transient, cycle }, rate })
}

/// Realization of a chain transitive set in a subshift of bounded type: the
/// asymptotic shadow of [`ict_to_apo`]. The result's omega-limit set is `Z`.
pub fn realize_ict(gamma: &Subshift, z: &SetPresentation, horizon: usize) -> Result<(AsymptoticPseudoOrbit, AsymptoticShadow)> {
    if !gamma.is_sbt() {
        return Err(Error::NeedsExplicitBasis);
    }
    let points = z.require_points()?;
    for (index, p) in points.iter().enumerate() {
        if !gamma.contains(p, horizon) {
            return Err(Error::PointOutsideSubshift { index });
        }
    }
    let apo = ict_to_apo(z)?;
    let shadow = synthesize_asymptotic_shadow(gamma, &apo, horizon)?;
    Ok((apo, shadow))
}

/// `x, z, σ(z), …, σ^(N+1)(z) = y` with `z = x[1, N+1) · c · y`, `2^-N < δ`
/// and `c` a fresh symbol.
pub fn sft_connecting_chain(gamma: &Subshift, x: &Point, y: &Point, delta: DyadicDistance) -> Result<DeltaChain> {
    if !gamma.has_fresh_symbols() {
        return Err(Error::NeedsExplicitBasis);
    }
    let n = delta.strict_agreement().ok_or(Error::ZeroDistance)?;
    for (index, p) in [x, y].into_iter().enumerate() {
        if !gamma.contains(p, 64) {
            return Err(Error::PointOutsideSubshift { index });
        }
    }
    let mut avoid = x.symbols_or_prefix(n + 2);
    avoid.extend(y.symbols_or_prefix(n + 2));
    let c = gamma.fresh_symbols(1, &avoid)?[0];
    let mut head = x.window(1, n + 1);
    head.push(c);
    let zp = Point::heads_then_tail(head, y.clone());
    let mut entries = vec![x.clone()];
    entries.extend((0..=n + 1).map(|i| zp.shift(i)));
    let chain = DeltaChain { delta, entries };
    if !chain.is_valid() {
        return Err(Error::Construction("connecting chain has a long link".into()));
    }
    if let Some(index) = chain.entries.iter().position(|p| !gamma.contains(p, 64)) {
        return Err(Error::Construction(format!("connecting chain entry {index} left the subshift")));
    }
    Ok(chain)
}

/// `b_0 s_0 b_1 s_1 …`: blocks run in rounds `t = 1, 2, …`, each emitting
/// `p[0, t)` for every `p ∈ Z` in order; separators are increasing fresh
/// symbols above every basis and `Z` symbol.
pub fn realize_invariant_sft(gamma: &Subshift, z: &SetPresentation) -> Result<Point> {
    if !gamma.has_fresh_symbols() {
        return Err(Error::NeedsExplicitBasis);
    }
    let points = z.require_points()?;
    if points.is_empty() {
        return Err(Error::EmptySet);
    }
    if !check_closed_invariant(z)? {
        return Err(Error::NotInvariant);
    }
    for (index, p) in points.iter().enumerate() {
        if !gamma.contains(p, 64) {
            return Err(Error::PointOutsideSubshift { index });
        }
    }
    let avoid = z.symbols().unwrap_or_default();
    let first = gamma.fresh_symbols(1, &avoid)?[0];
    Ok(Point::interleave(points.to_vec(), first))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subshift::Direction;

    fn ep(pre: &[u64], per: &[u64]) -> Point {
        Point::periodic(Word::from_values(pre.to_vec()), Word::from_values(per.to_vec())).unwrap()
    }

    fn set(ps: &[Point]) -> SetPresentation {
        SetPresentation::finite(ps.iter().cloned()).unwrap()
    }

    fn pow(n: u32) -> DyadicDistance {
        DyadicDistance::pow2_neg(n)
    }

    #[test]
    fn chain_examples() {
        let (zero, one) = (ep(&[], &[0]), ep(&[], &[1]));
        let z = set(&[zero.clone(), one.clone()]);
        assert_eq!(find_delta_chain(&z, &zero, &one, pow(1), 10).unwrap(), None);

        let (a, b) = (ep(&[], &[0, 1]), ep(&[], &[1, 0]));
        let z2 = set(&[a.clone(), b.clone()]);
        let c = find_delta_chain(&z2, &a, &b, pow(2), 10).unwrap().unwrap();
        assert_eq!(c.entries, vec![a.clone(), b.clone()]);
        assert!(c.is_valid());

        let c = find_delta_chain(&z, &one, &one, pow(5), 1).unwrap().unwrap();
        assert_eq!(c.entries, vec![one.clone()]);
        assert_eq!(find_delta_chain(&z, &a, &one, pow(1), 3), Err(Error::NotInSet));
    }

    #[test]
    fn min_steps_and_length_cap() {
        let (a, b) = (ep(&[], &[0, 1]), ep(&[], &[1, 0]));
        let z = set(&[a.clone(), b.clone()]);
        let c = find_delta_chain_min_steps(&z, &a, &a, pow(3), 10, 1).unwrap().unwrap();
        assert_eq!(c.entries, vec![a.clone(), b.clone(), a.clone()]);
        assert_eq!(find_delta_chain_min_steps(&z, &a, &a, pow(3), 2, 1).unwrap(), None);
        assert_eq!(find_delta_chain(&z, &a, &b, pow(3), 1).unwrap(), None);
    }

    #[test]
    fn ict_examples() {
        assert!(is_ict(&set(&[ep(&[], &[0])]), pow(9), 4).unwrap());
        assert!(!is_ict(&set(&[ep(&[], &[0]), ep(&[], &[1])]), pow(1), 4).unwrap());
        assert!(is_ict(&set(&[ep(&[], &[0, 1]), ep(&[], &[1, 0])]), pow(3), 4).unwrap());
        assert!(is_ict(&SetPresentation::Remark2Family, pow(1), 4).is_err());
    }

    #[test]
    fn certified_ict() {
        let z = SetPresentation::orbit_of(&ep(&[], &[0, 0, 1])).unwrap();
        assert!(certify_ict(&z).unwrap());
        assert!(!certify_ict(&set(&[ep(&[], &[0]), ep(&[], &[1])])).unwrap());
        // 0^ω ↔ 0 1^ω is chain transitive only at coarse δ
        let z = set(&[ep(&[], &[0]), ep(&[], &[0, 0, 0, 1])]);
        assert!(is_ict(&z, pow(0), 8).unwrap());
        assert!(!certify_ict(&z).unwrap());
    }

    #[test]
    fn invariance_examples() {
        assert!(check_closed_invariant(&set(&[ep(&[], &[0]), ep(&[], &[1])])).unwrap());
        assert!(!check_closed_invariant(&set(&[ep(&[0], &[1]), ep(&[], &[1])])).unwrap());
        assert!(check_closed_invariant(&set(&[ep(&[], &[0, 1]), ep(&[], &[1, 0])])).unwrap());
    }

    #[test]
    fn apo_examples() {
        let apo = ict_to_apo(&set(&[ep(&[], &[0])])).unwrap();
        assert!(matches!(apo.rate, Rate::Zero));
        assert_eq!(apo.stream.point(17), ep(&[], &[0]));

        let (a, b) = (ep(&[], &[0, 1]), ep(&[], &[1, 0]));
        let apo = ict_to_apo(&set(&[a.clone(), b.clone()])).unwrap();
        assert!(matches!(apo.rate, Rate::Zero));
        assert_eq!(apo.stream.point(0), a);
        assert_eq!(apo.stream.point(1), b);
        assert_eq!(apo.stream.point(6), a);

        assert!(matches!(
            ict_to_apo(&set(&[ep(&[], &[0]), ep(&[], &[1])])),
            Err(Error::NotIct { .. })
        ));
    }

    #[test]
    fn apo_rate_is_honest() {
        // coarse rungs take inexact shortcuts around the cycle
        let z = SetPresentation::orbit_of(&ep(&[], &[0, 1, 1, 1, 1, 1])).unwrap();
        let apo = ict_to_apo(&z).unwrap();
        assert!(matches!(apo.rate, Rate::Defects(_)));
        assert_eq!(apo.verify(12, 200), Ok(()));
    }

    #[test]
    fn realize_examples() {
        let full = Subshift::full();
        let (_, s) = realize_ict(&full, &set(&[ep(&[], &[0])]), 64).unwrap();
        assert_eq!(s.point.as_periodic().unwrap().period(), &Word::from_values([0]));

        let mono = Subshift::monotone(Direction::NonIncreasing, 16);
        let (_, s) = realize_ict(&mono, &set(&[ep(&[], &[0])]), 64).unwrap();
        assert!(mono.contains(&s.point, 64));
    }

    #[test]
    fn connecting_chain_examples() {
        let full = Subshift::full();
        let (zero, one) = (ep(&[], &[0]), ep(&[], &[1]));
        let c = sft_connecting_chain(&full, &zero, &one, pow(2)).unwrap();
        assert_eq!(c.entries.len(), 6);
        assert_eq!(c.entries[1], ep(&[0, 0, 0, 2], &[1]));
        assert_eq!(c.entries[5], one);

        let c = sft_connecting_chain(&full, &zero, &zero, DyadicDistance::ONE).unwrap();
        assert_eq!(c.entries, vec![zero.clone(), ep(&[0, 1], &[0]), ep(&[1], &[0]), zero.clone()]);

        let s = Subshift::explicit([Word::from_values([2, 1])]).unwrap();
        let c = sft_connecting_chain(&s, &zero, &one, pow(1)).unwrap();
        assert_eq!(c.entries[1], ep(&[0, 0, 3], &[1]));

        let mono = Subshift::monotone(Direction::NonIncreasing, 8);
        assert!(sft_connecting_chain(&mono, &zero, &zero, pow(1)).is_err());
    }

    #[test]
    fn invariant_realization_layout() {
        let full = Subshift::full();
        let x = realize_invariant_sft(&full, &set(&[ep(&[], &[0]), ep(&[], &[1])])).unwrap();
        assert_eq!(x.prefix(10).values(), vec![0, 2, 1, 3, 0, 0, 4, 1, 1, 5]);
        assert_eq!(
            realize_invariant_sft(&full, &set(&[ep(&[0], &[1]), ep(&[], &[1])])),
            Err(Error::NotInvariant)
        );
    }

    #[test]
    fn set_spec_round_trip() {
        let json = r#"{"kind":"finite","points":["|0","|1"]}"#;
        let spec: SetSpec = serde_json::from_str(json).unwrap();
        let z = SetPresentation::from_spec(&spec).unwrap();
        assert_eq!(z.points().unwrap().len(), 2);
        assert_eq!(serde_json::to_string(&z.to_spec().unwrap()).unwrap(), json);
        let fam: SetSpec = serde_json::from_str(r#"{"kind":"family","name":"remark2"}"#).unwrap();
        assert!(matches!(SetPresentation::from_spec(&fam).unwrap(), SetPresentation::Remark2Family));
    }
}
