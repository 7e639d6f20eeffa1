//! Absence certificates for δ-chains over a whole subshift.
//!
//! A δ-chain `x^0, …, x^k` in Γ with `δ = 2^-e` and `n = e + 1` satisfies
//! `x^{i+1}[0, n) = x^i[1, n+1)`, and `x^i[0, n+1)` is an allowed word. So
//! the `n`-prefixes walk the graph on allowed `n`-words with an edge
//! `a·u → u·b` whenever `a·u·b` is allowed. No path between the endpoint
//! prefixes means no chain in Γ.
//!
//! Over the countable alphabet every symbol outside the basis behaves the
//! same, so inactive symbols are projected to one class representative;
//! the projection maps chains to chains.

use std::collections::{BTreeSet, HashSet, VecDeque};

use serde::Serialize;
use shiftlab::{DyadicDistance, Point, Subshift, Symbol, Word};

/// Explored vertices beyond which the search gives up without a verdict.
const MAX_WINDOWS: usize = 200_000;

#[derive(Debug, Serialize)]
pub struct WindowCertificate {
    pub window_len: usize,
    pub alphabet: Vec<Symbol>,
    /// Allowed windows reachable from the source prefix.
    pub reachable: usize,
    pub source: Word,
    pub target: Word,
}

#[derive(Debug)]
pub enum Outcome {
    /// No chain exists in Γ.
    Absent(WindowCertificate),
    /// The prefix graph connects the endpoints; this alone proves nothing.
    Connected,
    /// Search not applicable or too large.
    Unknown(String),
}

pub fn window_reachability(gamma: &Subshift, x: &Point, y: &Point, delta: DyadicDistance) -> Outcome {
    let Some(n) = delta.strict_agreement() else {
        return Outcome::Unknown("δ = 0".into());
    };
    let alphabet = gamma.search_alphabet();
    let known: BTreeSet<Symbol> = alphabet.iter().copied().collect();
    let project = |w: Word| -> Option<Word> {
        w.iter()
            .map(|s| match known.contains(s) {
                true => Some(*s),
                false if gamma.has_fresh_symbols() => Some(gamma.class_symbol()),
                false => None,
            })
            .collect()
    };
    let (Some(source), Some(target)) = (project(x.prefix(n)), project(y.prefix(n))) else {
        return Outcome::Unknown("endpoint uses symbols outside the searched alphabet".into());
    };
    if !gamma.is_globally_allowed(&source) || !gamma.is_globally_allowed(&target) {
        return Outcome::Unknown("endpoint prefix is not allowed".into());
    }
    let mut seen = HashSet::from([source.clone()]);
    let mut queue = VecDeque::from([source.clone()]);
    while let Some(w) = queue.pop_front() {
        if w == target {
            return Outcome::Connected;
        }
        for &b in &alphabet {
            let long = w.concat(&[b]);
            if !gamma.is_globally_allowed(&long) {
                continue;
            }
            let next = long.slice(1, n + 1);
            if seen.insert(next.clone()) {
                if seen.len() > MAX_WINDOWS {
                    return Outcome::Unknown(format!("more than {MAX_WINDOWS} windows"));
                }
                queue.push_back(next);
            }
        }
    }
    Outcome::Absent(WindowCertificate { window_len: n, alphabet, reachable: seen.len(), source, target })
}
