//! Symbols of the countable alphabet and finite words over it.
//!
//! The alphabet is identified with the natural numbers, so a [`Symbol`] is a
//! thin wrapper around `u64`. Words use a plain text codec: base-10 symbols
//! separated by single spaces (`"0 4 1 1"`), with the empty word written as
//! the empty string.

use std::borrow::Borrow;
use std::fmt;
use std::ops::Deref;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// One letter of the alphabet.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Symbol(pub u64);

impl Symbol {
    pub fn value(self) -> u64 {
        self.0
    }
}

impl From<u64> for Symbol {
    fn from(v: u64) -> Self {
        Symbol(v)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A finite, possibly empty, sequence of symbols. Indexing is 0-based.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn new(symbols: Vec<Symbol>) -> Self {
        Word(symbols)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Builds a word from raw symbol values.
    pub fn from_values<I: IntoIterator<Item = u64>>(values: I) -> Self {
        Word(values.into_iter().map(Symbol).collect())
    }

    /// `a^n`
    pub fn repeat(symbol: Symbol, n: usize) -> Self {
        Word(vec![symbol; n])
    }

    pub fn as_slice(&self) -> &[Symbol] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Symbol> {
        self.0
    }

    pub fn push(&mut self, s: Symbol) {
        self.0.push(s);
    }

    pub fn values(&self) -> Vec<u64> {
        self.0.iter().map(|s| s.0).collect()
    }

    /// The subword `self[from..to)`.
    pub fn slice(&self, from: usize, to: usize) -> Word {
        Word(self.0[from..to].to_vec())
    }

    pub fn concat(&self, other: &[Symbol]) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(other);
        Word(v)
    }

    /// True iff `f` occurs as a contiguous block of `self`.
    pub fn contains_factor(&self, f: &[Symbol]) -> bool {
        contains_factor(&self.0, f)
    }
}

impl Deref for Word {
    type Target = [Symbol];

    fn deref(&self) -> &[Symbol] {
        &self.0
    }
}

impl Borrow<[Symbol]> for Word {
    fn borrow(&self) -> &[Symbol] {
        &self.0
    }
}

impl From<Vec<Symbol>> for Word {
    fn from(v: Vec<Symbol>) -> Self {
        Word(v)
    }
}

impl From<&[Symbol]> for Word {
    fn from(v: &[Symbol]) -> Self {
        Word(v.to_vec())
    }
}

impl FromIterator<Symbol> for Word {
    fn from_iter<I: IntoIterator<Item = Symbol>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a Word {
    type Item = &'a Symbol;
    type IntoIter = std::slice::Iter<'a, Symbol>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        s.split_whitespace()
            .map(|tok| {
                tok.parse::<u64>()
                    .map(Symbol)
                    .map_err(|_| Error::Parse(format!("bad symbol {tok:?} in word {s:?}")))
            })
            .collect()
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// True iff `f` occurs as a contiguous block inside `w`. The empty word is a
/// factor of every word.
pub fn contains_factor(w: &[Symbol], f: &[Symbol]) -> bool {
    if f.is_empty() {
        return true;
    }
    f.len() <= w.len() && w.windows(f.len()).any(|win| win == f)
}
