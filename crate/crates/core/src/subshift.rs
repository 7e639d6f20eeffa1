//! Forbidden-word bases and the languages they define.
//!
//! A [`Subshift`] is built from a [`ForbiddenBasis`]: either an explicit
//! finite set of words (a subshift of finite type) or a rule that forbids
//! some words of length at most `max_len` (a subshift of bounded type).
//!
//! Local admissibility is a factor scan against the basis. Global
//! admissibility (being a factor of an actual point) is decided on the window
//! graph, whose vertices are the locally allowed words of length `L - 1`. For
//! explicit bases over the countable alphabet every symbol outside the active
//! alphabet behaves the same, so one class symbol stands in for all of them
//! and the graph is finite and exact.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point::Point;
use crate::word::{Symbol, Word};

/// Orientation of the built-in monotone rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    /// Forbids rises `st` with `s < t`; points are non-increasing.
    NonIncreasing,
    /// Forbids falls `st` with `s > t`; points are non-decreasing.
    NonDecreasing,
}

type Predicate = Arc<dyn Fn(&[Symbol]) -> bool + Send + Sync>;

/// A decidable predicate selecting the forbidden words of a bounded basis.
#[derive(Clone)]
pub enum Rule {
    Monotone(Direction),
    /// `forbids(w)` is only ever called with `1 <= |w| <= max_len`.
    Custom { name: String, forbids: Predicate },
}

impl Rule {
    pub fn custom(name: impl Into<String>, forbids: impl Fn(&[Symbol]) -> bool + Send + Sync + 'static) -> Rule {
        Rule::Custom { name: name.into(), forbids: Arc::new(forbids) }
    }

    pub fn name(&self) -> &str {
        match self {
            Rule::Monotone(_) => "monotone",
            Rule::Custom { name, .. } => name,
        }
    }

    pub fn forbids(&self, w: &[Symbol]) -> bool {
        match self {
            Rule::Monotone(Direction::NonIncreasing) => w.len() == 2 && w[0] < w[1],
            Rule::Monotone(Direction::NonDecreasing) => w.len() == 2 && w[0] > w[1],
            Rule::Custom { forbids, .. } => forbids(w),
        }
    }

    fn min_len(&self) -> usize {
        match self {
            Rule::Monotone(_) => 2,
            Rule::Custom { .. } => 1,
        }
    }
}

impl fmt::Debug for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::Monotone(d) => f.debug_tuple("Monotone").field(d).finish(),
            Rule::Custom { name, .. } => f.debug_struct("Custom").field("name", name).finish_non_exhaustive(),
        }
    }
}

/// A basis for the forbidden words.
#[derive(Clone, Debug)]
pub enum ForbiddenBasis {
    /// A finite set of forbidden words. `alphabet: Some(k)` restricts the
    /// alphabet to `{0, …, k-1}`; `None` is the full countable alphabet.
    Explicit { words: BTreeSet<Word>, alphabet: Option<u64> },
    /// Every word of length `<= max_len` accepted by `rule` is forbidden.
    /// Searches enumerate the symbols `0..alphabet_bound`, so global answers
    /// hold up to that bound.
    Bounded { max_len: usize, rule: Rule, alphabet_bound: u64 },
}

/// JSON form of a basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum SubshiftSpec {
    Sft {
        forbidden: Vec<Vec<u64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        alphabet: Option<u64>,
    },
    Rule {
        name: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        direction: Option<Direction>,
        max_len: usize,
        alphabet_bound: u64,
    },
}

/// Two-sided verdict of a horizon-bounded check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    /// False when the answer is only known up to the scanned horizon.
    pub exact: bool,
}

#[derive(Debug, Default)]
struct Trie {
    next: Vec<HashMap<Symbol, usize>>,
    terminal: Vec<bool>,
}

impl Trie {
    fn build<'a>(words: impl IntoIterator<Item = &'a Word>) -> Trie {
        let mut t = Trie { next: vec![HashMap::new()], terminal: vec![false] };
        for w in words {
            let mut node = 0;
            for &s in w.iter() {
                node = match t.next[node].get(&s) {
                    Some(&n) => n,
                    None => {
                        t.next.push(HashMap::new());
                        t.terminal.push(false);
                        let n = t.next.len() - 1;
                        t.next[node].insert(s, n);
                        n
                    }
                };
            }
            t.terminal[node] = true;
        }
        t
    }

    /// True iff some basis word starts at the beginning of `w`.
    fn matches_prefix_of(&self, w: &[Symbol]) -> bool {
        let mut node = 0;
        for s in w {
            match self.next[node].get(s) {
                Some(&n) if self.terminal[n] => return true,
                Some(&n) => node = n,
                None => return false,
            }
        }
        false
    }
}

/// The graph of locally allowed windows of length `L - 1`, trimmed to the
/// vertices lying on bi-infinite paths.
#[derive(Debug)]
struct WindowGraph {
    k: usize,
    essential: HashSet<Word>,
    /// Factors of essential windows shorter than `k`.
    short_factors: HashSet<Word>,
}

impl WindowGraph {
    fn build(k: usize, alphabet: &[Symbol], allowed: impl Fn(&[Symbol]) -> bool) -> WindowGraph {
        // enumerate locally allowed k-words
        let mut vertices: Vec<Word> = vec![Word::empty()];
        for _ in 0..k {
            let mut grown = Vec::new();
            for v in &vertices {
                for &a in alphabet {
                    let u = v.concat(&[a]);
                    if allowed(&u) {
                        grown.push(u);
                    }
                }
            }
            vertices = grown;
        }
        let index: HashMap<&[Symbol], usize> =
            vertices.iter().enumerate().map(|(i, v)| (v.as_slice(), i)).collect();
        let n = vertices.len();
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut pred: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, v) in vertices.iter().enumerate() {
            for &a in alphabet {
                let u = v.concat(&[a]);
                if !allowed(&u) {
                    continue;
                }
                let j = index[&u[1..]];
                if !succ[i].contains(&j) {
                    succ[i].push(j);
                    pred[j].push(i);
                }
            }
        }
        let mut outdeg: Vec<usize> = succ.iter().map(Vec::len).collect();
        let mut indeg: Vec<usize> = pred.iter().map(Vec::len).collect();
        let mut alive = vec![true; n];
        let mut queue: VecDeque<usize> = (0..n).filter(|&i| outdeg[i] == 0 || indeg[i] == 0).collect();
        while let Some(i) = queue.pop_front() {
            if !alive[i] {
                continue;
            }
            alive[i] = false;
            for &j in &succ[i] {
                if alive[j] {
                    indeg[j] -= 1;
                    if indeg[j] == 0 {
                        queue.push_back(j);
                    }
                }
            }
            for &j in &pred[i] {
                if alive[j] {
                    outdeg[j] -= 1;
                    if outdeg[j] == 0 {
                        queue.push_back(j);
                    }
                }
            }
        }
        let essential: HashSet<Word> =
            vertices.into_iter().zip(alive).filter_map(|(v, a)| a.then_some(v)).collect();
        let mut short_factors = HashSet::new();
        for v in &essential {
            for len in 0..k {
                for s in 0..=(k - len) {
                    short_factors.insert(v.slice(s, s + len));
                }
            }
        }
        WindowGraph { k, essential, short_factors }
    }

    /// `w` is assumed locally allowed.
    fn extends_both_ways(&self, w: &[Symbol]) -> bool {
        if w.len() >= self.k {
            self.essential.contains(&w[..self.k]) && self.essential.contains(&w[w.len() - self.k..])
        } else {
            self.short_factors.contains(w)
        }
    }
}

/// A validated subshift presented by a forbidden-word basis.
#[derive(Debug)]
pub struct Subshift {
    basis: ForbiddenBasis,
    max_len: usize,
    active: BTreeSet<Symbol>,
    is_sft: bool,
    is_sbt: bool,
    trie: Trie,
    graph: OnceLock<WindowGraph>,
}

impl Clone for Subshift {
    fn clone(&self) -> Self {
        Subshift::validate(self.basis.clone()).expect("already validated")
    }
}

impl Subshift {
    /// Checks a basis and computes the derived data.
    pub fn validate(basis: ForbiddenBasis) -> Result<Subshift> {
        let (max_len, active, is_sft, trie) = match &basis {
            ForbiddenBasis::Explicit { words, alphabet } => {
                if words.iter().any(|w| w.is_empty()) {
                    return Err(Error::EmptyBasisWord);
                }
                if *alphabet == Some(0) {
                    return Err(Error::EmptyAlphabet);
                }
                let max_len = words.iter().map(|w| w.len()).max().unwrap_or(0);
                let active = words.iter().flat_map(|w| w.iter().copied()).collect();
                (max_len, active, true, Trie::build(words))
            }
            ForbiddenBasis::Bounded { max_len, rule, alphabet_bound } => {
                if *max_len == 0 {
                    return Err(Error::ZeroMaxLen);
                }
                if *alphabet_bound == 0 {
                    return Err(Error::EmptyAlphabet);
                }
                if *max_len < rule.min_len() {
                    return Err(Error::RuleTooShort {
                        name: rule.name().to_string(),
                        needed: rule.min_len(),
                        got: *max_len,
                    });
                }
                (*max_len, BTreeSet::new(), false, Trie::default())
            }
        };
        Ok(Subshift { basis, max_len, active, is_sft, is_sbt: true, trie, graph: OnceLock::new() })
    }

    /// The full shift on the countable alphabet.
    pub fn full() -> Subshift {
        Self::explicit(std::iter::empty::<Word>()).expect("empty basis is valid")
    }

    pub fn explicit<I: IntoIterator<Item = W>, W: Into<Word>>(words: I) -> Result<Subshift> {
        Self::validate(ForbiddenBasis::Explicit {
            words: words.into_iter().map(Into::into).collect(),
            alphabet: None,
        })
    }

    /// An explicit basis over the finite alphabet `{0, …, size-1}`.
    pub fn explicit_finite<I: IntoIterator<Item = W>, W: Into<Word>>(words: I, size: u64) -> Result<Subshift> {
        Self::validate(ForbiddenBasis::Explicit {
            words: words.into_iter().map(Into::into).collect(),
            alphabet: Some(size),
        })
    }

    pub fn monotone(direction: Direction, alphabet_bound: u64) -> Subshift {
        Self::validate(ForbiddenBasis::Bounded {
            max_len: 2,
            rule: Rule::Monotone(direction),
            alphabet_bound,
        })
        .expect("monotone rule is valid")
    }

    /// The finite-alphabet SFT on `{0, …, size-1}` forbidding `0 1` and every
    /// symbol other than `0` and `1`.
    pub fn two_symbol_barrier(size: u64) -> Result<Subshift> {
        let mut words = vec![Word::from_values([0, 1])];
        words.extend((2..size).map(|s| Word::from_values([s])));
        Self::explicit_finite(words, size)
    }

    pub fn from_spec(spec: &SubshiftSpec) -> Result<Subshift> {
        match spec {
            SubshiftSpec::Sft { forbidden, alphabet } => Self::validate(ForbiddenBasis::Explicit {
                words: forbidden.iter().map(|w| Word::from_values(w.iter().copied())).collect(),
                alphabet: *alphabet,
            }),
            SubshiftSpec::Rule { name, direction, max_len, alphabet_bound } => {
                let rule = match name.as_str() {
                    "monotone" => Rule::Monotone(direction.unwrap_or(Direction::NonIncreasing)),
                    _ => return Err(Error::UnknownRule(name.clone())),
                };
                Self::validate(ForbiddenBasis::Bounded {
                    max_len: *max_len,
                    rule,
                    alphabet_bound: *alphabet_bound,
                })
            }
        }
    }

    /// `None` for custom rules, which have no JSON form.
    pub fn to_spec(&self) -> Option<SubshiftSpec> {
        match &self.basis {
            ForbiddenBasis::Explicit { words, alphabet } => Some(SubshiftSpec::Sft {
                forbidden: words.iter().map(Word::values).collect(),
                alphabet: *alphabet,
            }),
            ForbiddenBasis::Bounded { max_len, rule: Rule::Monotone(d), alphabet_bound } => {
                Some(SubshiftSpec::Rule {
                    name: "monotone".into(),
                    direction: Some(*d),
                    max_len: *max_len,
                    alphabet_bound: *alphabet_bound,
                })
            }
            ForbiddenBasis::Bounded { .. } => None,
        }
    }

    pub fn basis(&self) -> &ForbiddenBasis {
        &self.basis
    }

    /// `L`, the length of the longest basis word (0 for the full shift).
    pub fn max_basis_length(&self) -> usize {
        self.max_len
    }

    pub fn active_alphabet(&self) -> &BTreeSet<Symbol> {
        &self.active
    }

    pub fn is_sft(&self) -> bool {
        self.is_sft
    }

    pub fn is_sbt(&self) -> bool {
        self.is_sbt
    }

    /// True for explicit bases over the unrestricted countable alphabet,
    /// where fresh symbols always exist.
    pub fn has_fresh_symbols(&self) -> bool {
        matches!(self.basis, ForbiddenBasis::Explicit { alphabet: None, .. })
    }

    /// Finite alphabet used by searches: the declared alphabet, the rule's
    /// bound, or the active alphabet plus one class symbol.
    pub fn search_alphabet(&self) -> Vec<Symbol> {
        match &self.basis {
            ForbiddenBasis::Explicit { alphabet: Some(k), .. } => (0..*k).map(Symbol).collect(),
            ForbiddenBasis::Explicit { alphabet: None, .. } => {
                let mut v: Vec<Symbol> = self.active.iter().copied().collect();
                v.push(self.class_symbol());
                v
            }
            ForbiddenBasis::Bounded { alphabet_bound, .. } => (0..*alphabet_bound).map(Symbol).collect(),
        }
    }

    /// Representative of every symbol outside the active alphabet.
    pub fn class_symbol(&self) -> Symbol {
        self.active.last().map_or(Symbol(0), |s| Symbol(s.0 + 1))
    }

    /// No factor of `w` is matched by the basis.
    pub fn is_locally_allowed(&self, w: &[Symbol]) -> bool {
        match &self.basis {
            ForbiddenBasis::Explicit { alphabet, .. } => {
                if let Some(k) = alphabet {
                    if w.iter().any(|s| s.0 >= *k) {
                        return false;
                    }
                }
                (0..w.len()).all(|i| !self.trie.matches_prefix_of(&w[i..]))
            }
            ForbiddenBasis::Bounded { max_len, rule, .. } => (0..w.len()).all(|i| {
                (1..=(*max_len).min(w.len() - i)).all(|len| !rule.forbids(&w[i..i + len]))
            }),
        }
    }

    fn window_k(&self) -> usize {
        self.max_len.saturating_sub(1)
    }

    fn graph(&self) -> &WindowGraph {
        self.graph.get_or_init(|| {
            WindowGraph::build(self.window_k(), &self.search_alphabet(), |w| self.is_locally_allowed(w))
        })
    }

    /// `w` is a factor of some point of the subshift, i.e. it is locally
    /// allowed and extends to a bi-infinite allowed path.
    ///
    /// For bounded rules, symbols of `w` beyond the declared bound are added
    /// to the search alphabet; the answer holds up to that alphabet.
    pub fn is_globally_allowed(&self, w: &[Symbol]) -> bool {
        if !self.is_locally_allowed(w) {
            return false;
        }
        match &self.basis {
            ForbiddenBasis::Explicit { alphabet: None, .. } => {
                let class = self.class_symbol();
                let mapped: Vec<Symbol> =
                    w.iter().map(|s| if self.active.contains(s) { *s } else { class }).collect();
                self.graph().extends_both_ways(&mapped)
            }
            ForbiddenBasis::Explicit { alphabet: Some(_), .. } => self.graph().extends_both_ways(w),
            ForbiddenBasis::Bounded { alphabet_bound, .. } => {
                let extra: BTreeSet<Symbol> = w.iter().copied().filter(|s| s.0 >= *alphabet_bound).collect();
                if extra.is_empty() {
                    self.graph().extends_both_ways(w)
                } else {
                    let mut alphabet = self.search_alphabet();
                    alphabet.extend(extra);
                    WindowGraph::build(self.window_k(), &alphabet, |u| self.is_locally_allowed(u))
                        .extends_both_ways(w)
                }
            }
        }
    }

    /// `M = max(L - 1, 0)`: gluing `uw` and `wv` along `|w| >= M` stays
    /// allowed.
    pub fn gluing_bound(&self) -> usize {
        self.window_k()
    }

    /// The instance `uw, wv ∈ B(Γ) ⇒ uwv ∈ B(Γ)` of the gluing property.
    pub fn verify_gluing(&self, u: &[Symbol], w: &[Symbol], v: &[Symbol]) -> Result<bool> {
        let bound = self.gluing_bound();
        if w.len() < bound {
            return Err(Error::GluingPrecondition { len: w.len(), bound });
        }
        let uw: Vec<Symbol> = [u, w].concat();
        let wv: Vec<Symbol> = [w, v].concat();
        if !(self.is_globally_allowed(&uw) && self.is_globally_allowed(&wv)) {
            return Ok(true);
        }
        Ok(self.is_globally_allowed(&[u, w, v].concat()))
    }

    /// `count` consecutive symbols starting at `1 + max(active ∪ avoid)`
    /// (or at 0 when both are empty).
    pub fn fresh_symbols(&self, count: usize, avoid: &BTreeSet<Symbol>) -> Result<Vec<Symbol>> {
        let alphabet = match &self.basis {
            ForbiddenBasis::Explicit { alphabet, .. } => *alphabet,
            ForbiddenBasis::Bounded { .. } => {
                return Err(Error::NoFreshSymbols("a bounded rule may constrain every symbol"));
            }
        };
        let start = self.active.iter().chain(avoid).map(|s| s.0 + 1).max().unwrap_or(0);
        if let Some(k) = alphabet {
            if start + count as u64 > k {
                return Err(Error::NoFreshSymbols("the declared alphabet is exhausted"));
            }
        }
        Ok((0..count as u64).map(|i| Symbol(start + i)).collect())
    }

    /// Membership of a point, checked on its first `horizon` symbols. For
    /// eventually periodic points the scan is lengthened to
    /// `preperiod + 2·period + L`, which makes the answer exact.
    pub fn point_in_subshift(&self, x: &Point, horizon: usize) -> Result<Verdict> {
        if horizon < self.max_len {
            return Err(Error::HorizonTooShort { horizon, needed: self.max_len });
        }
        let (n, exact) = match x.as_periodic() {
            Some(p) => (horizon.max(p.preperiod().len() + 2 * p.period().len() + self.max_len), true),
            None => (horizon, false),
        };
        let prefix = x.prefix(n);
        let holds = self.is_locally_allowed(&prefix)
            && self.is_globally_allowed(&prefix[..n.min(self.max_len.max(1))]);
        Ok(Verdict { holds, exact })
    }

    /// Shorthand for an exact membership test on an eventually periodic
    /// point, or a horizon-limited one for schemes.
    pub fn contains(&self, x: &Point, horizon: usize) -> bool {
        self.point_in_subshift(x, horizon.max(self.max_len)).is_ok_and(|v| v.holds)
    }
}
