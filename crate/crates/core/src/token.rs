//! Flat tokens and class alphabets.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use crate::symbol::{Symbol, SymbolMap};

/// A finite tuple of symbols; the empty tuple is ε.
///
/// Tokens are ordered by length first, then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Token(pub Vec<Symbol>);

impl Token {
    pub fn empty() -> Self {
        Token(Vec::new())
    }

    pub fn unit(s: Symbol) -> Self {
        Token(vec![s])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn symbol_set(&self) -> BTreeSet<Symbol> {
        self.0.iter().cloned().collect()
    }

    /// Elementwise image; `None` when some symbol is outside the map's domain.
    pub fn map(&self, m: &SymbolMap) -> Option<Token> {
        self.0
            .iter()
            .map(|s| m.get(s).cloned())
            .collect::<Option<Vec<_>>>()
            .map(Token)
    }
}

impl<S: Into<Symbol>> FromIterator<S> for Token {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        Token(iter.into_iter().map(Into::into).collect())
    }
}

impl Ord for Token {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Token {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str(")")
    }
}

/// Shorthand for a token of atoms.
pub fn tok(names: &[&str]) -> Token {
    names.iter().map(|n| Symbol::atom(*n)).collect()
}

/// Base and core alphabets of a class; always disjoint.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Alphabet {
    pub base: BTreeSet<Symbol>,
    pub core: BTreeSet<Symbol>,
}

impl Alphabet {
    pub fn all(&self) -> BTreeSet<Symbol> {
        self.base.union(&self.core).cloned().collect()
    }

    pub fn contains(&self, s: &Symbol) -> bool {
        self.base.contains(s) || self.core.contains(s)
    }
}

/// All words over `alpha` of length exactly `len`, in canonical order.
pub fn words(alpha: &BTreeSet<Symbol>, len: usize) -> Vec<Token> {
    let letters: Vec<&Symbol> = alpha.iter().collect();
    let mut out = Vec::new();
    if len > 0 && letters.is_empty() {
        return out;
    }
    let mut idx = vec![0usize; len];
    loop {
        out.push(Token(idx.iter().map(|&i| letters[i].clone()).collect()));
        let mut pos = len;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < letters.len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// All words over `alpha` with length at most `max_len`.
pub fn words_up_to(alpha: &BTreeSet<Symbol>, max_len: usize) -> Vec<Token> {
    (0..=max_len).flat_map(|n| words(alpha, n)).collect()
}
