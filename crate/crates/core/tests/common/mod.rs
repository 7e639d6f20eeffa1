//! Shared generators and oracles for the integration suites.

#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use shiftlab::{DyadicDistance, Point, PseudoOrbit, Subshift, Symbol, Word};

pub fn ep(pre: &[u64], per: &[u64]) -> Point {
    Point::periodic(Word::from_values(pre.to_vec()), Word::from_values(per.to_vec())).unwrap()
}

pub fn pow(n: u32) -> DyadicDistance {
    DyadicDistance::pow2_neg(n)
}

/// Up to five words of length 1..=3 over symbols `< 8`.
pub fn random_basis_words(rng: &mut ChaCha8Rng) -> Vec<Word> {
    let n = rng.gen_range(1..=5);
    (0..n)
        .map(|_| {
            let len = rng.gen_range(1..=3);
            Word::from_values((0..len).map(|_| rng.gen_range(0..8u64)))
        })
        .collect()
}

pub fn random_basis(rng: &mut ChaCha8Rng) -> Subshift {
    Subshift::explicit(random_basis_words(rng)).unwrap()
}

pub fn random_ep(rng: &mut ChaCha8Rng, alphabet: &[Symbol], max_pre: usize, max_per: usize) -> Point {
    let pre: Word = (0..rng.gen_range(0..=max_pre)).map(|_| *alphabet.choose(rng).unwrap()).collect();
    let per: Word = (0..rng.gen_range(1..=max_per)).map(|_| *alphabet.choose(rng).unwrap()).collect();
    Point::periodic(pre, per).unwrap()
}

/// A random eventually periodic point of `gamma`, or `fallback` when
/// rejection sampling keeps missing.
pub fn random_member(rng: &mut ChaCha8Rng, gamma: &Subshift, fallback: Point) -> Point {
    let alphabet = gamma.search_alphabet();
    for _ in 0..20 {
        let p = random_ep(rng, &alphabet, 4, 3);
        if gamma.contains(&p, 32) {
            return p;
        }
    }
    fallback
}

/// A `2^(1-m)`-pseudo-orbit of `len` points in `gamma`: each point keeps
/// `σ(previous)[0, m)` and continues randomly; `close` supplies a tail that
/// is always admissible after a given prefix.
pub fn random_pseudo_orbit(
    rng: &mut ChaCha8Rng,
    gamma: &Subshift,
    m: usize,
    len: usize,
    start: Point,
    close: impl Fn(&Word) -> Point,
) -> PseudoOrbit {
    let alphabet = gamma.search_alphabet();
    let mut points = vec![start];
    while points.len() < len {
        let prefix = points.last().unwrap().window(1, 1 + m);
        let mut next = None;
        for _ in 0..8 {
            let tail = random_ep(rng, &alphabet, 3, 3);
            let cand = Point::heads_then_tail(prefix.clone(), tail);
            if gamma.contains(&cand, 32) {
                next = Some(cand);
                break;
            }
        }
        points.push(next.unwrap_or_else(|| close(&prefix)));
    }
    PseudoOrbit::new(points, pow((m - 1) as u32))
}

/// Independent local-admissibility oracle over a small index alphabet.
pub struct LocalOracle {
    pub basis: Vec<Vec<u8>>,
    pub max_len: usize,
}

impl LocalOracle {
    pub fn new(basis: &[Vec<u8>]) -> Self {
        let max_len = basis.iter().map(Vec::len).max().unwrap_or(0);
        LocalOracle { basis: basis.to_vec(), max_len }
    }

    /// No basis word occurs in `x` ending at a position `>= from`.
    pub fn alive_from(&self, x: &[u8], from: usize) -> bool {
        for end in from + 1..=x.len() {
            for b in &self.basis {
                if b.len() <= end && &x[end - b.len()..end] == b.as_slice() {
                    return false;
                }
            }
        }
        true
    }

    pub fn local(&self, x: &[u8]) -> bool {
        self.alive_from(x, 0)
    }
}

/// Every word over `0..a` of length in `lens`, in length-lexicographic order.
pub fn all_words(a: u8, lens: std::ops::RangeInclusive<usize>) -> Vec<Vec<u8>> {
    let a = a as usize;
    let mut out = Vec::new();
    for len in lens {
        for code in 0..a.pow(len as u32) {
            let mut w = vec![0u8; len];
            let mut c = code;
            for slot in w.iter_mut().rev() {
                *slot = (c % a) as u8;
                c /= a;
            }
            out.push(w);
        }
    }
    out
}

/// State of the admissibility automaton: dead, or the last `≤ K` symbols.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scan {
    Dead,
    Live(Vec<u8>),
}

impl LocalOracle {
    pub fn start(&self) -> Scan {
        Scan::Live(Vec::new())
    }

    /// Reads one symbol; a basis word ending here kills the scan.
    pub fn step(&self, s: &Scan, c: u8) -> Scan {
        let Scan::Live(tail) = s else { return Scan::Dead };
        let mut x = tail.clone();
        x.push(c);
        if self.basis.iter().any(|b| x.ends_with(b)) {
            return Scan::Dead;
        }
        let keep = self.max_len.saturating_sub(1);
        let cut = x.len().saturating_sub(keep);
        Scan::Live(x[cut..].to_vec())
    }
}

/// Exact counts over every triple `(u, w, v)` with `|u|, |v| ≤ 3` and
/// `|w| ∈ mids`, alphabet `0..a`: returns `(triples, violations)` where a
/// violation has `uw` and `wv` admissible but `uwv` not.
///
/// Three copies of the automaton run in lockstep (on `uw`, on `wv`, on
/// `uwv`) and configurations are merged with multiplicities, so the count
/// covers the whole box without listing it.
pub fn gluing_census(oracle: &LocalOracle, a: u8, mids: std::ops::RangeInclusive<usize>) -> (u128, u128) {
    use std::collections::HashMap;
    fn advance<K: Clone + Eq + std::hash::Hash>(
        m: &HashMap<K, u128>,
        a: u8,
        f: impl Fn(&K, u8) -> K,
    ) -> HashMap<K, u128> {
        let mut out = HashMap::new();
        for (k, n) in m {
            for c in 0..a {
                *out.entry(f(k, c)).or_insert(0) += n;
            }
        }
        out
    }
    fn merge<K: Clone + Eq + std::hash::Hash>(into: &mut HashMap<K, u128>, from: &HashMap<K, u128>) {
        for (k, n) in from {
            *into.entry(k.clone()).or_insert(0) += n;
        }
    }

    // u: one scan shared by uw and uwv
    let mut cur: HashMap<Scan, u128> = HashMap::from([(oracle.start(), 1)]);
    let mut after_u = cur.clone();
    for _ in 0..3 {
        cur = advance(&cur, a, |s, c| oracle.step(s, c));
        merge(&mut after_u, &cur);
    }

    // w: (uw = uwv scan, wv scan)
    let mut cur: HashMap<(Scan, Scan), u128> = after_u.into_iter().map(|(s, n)| ((s, oracle.start()), n)).collect();
    let mut after_w = HashMap::new();
    for len in 0..=*mids.end() {
        if mids.contains(&len) {
            merge(&mut after_w, &cur);
        }
        cur = advance(&cur, a, |(s, t), c| (oracle.step(s, c), oracle.step(t, c)));
    }

    // v: (uw alive, wv scan, uwv scan)
    let mut cur: HashMap<(bool, Scan, Scan), u128> =
        after_w.into_iter().map(|((s, t), n)| ((s != Scan::Dead, t, s), n)).collect();
    let mut done = cur.clone();
    for _ in 0..3 {
        cur = advance(&cur, a, |(uw, t, s), c| (*uw, oracle.step(t, c), oracle.step(s, c)));
        merge(&mut done, &cur);
    }
    let total = done.values().sum();
    let bad = done
        .iter()
        .filter(|((uw, wv, uwv), _)| *uw && *wv != Scan::Dead && *uwv == Scan::Dead)
        .map(|(_, n)| n)
        .sum();
    (total, bad)
}
