//! Structured symbols with a canonical total order.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::tree::TreeTerm;

/// Reserved marker kinds. They live in their own variant so they never
/// collide with user atoms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MarkerKind {
    Eps,
    Gamma,
    E,
    Zero,
    One,
    F,
}

impl MarkerKind {
    pub fn name(self) -> &'static str {
        match self {
            MarkerKind::Eps => "eps",
            MarkerKind::Gamma => "gamma",
            MarkerKind::E => "e",
            MarkerKind::Zero => "0",
            MarkerKind::One => "1",
            MarkerKind::F => "F",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "eps" => MarkerKind::Eps,
            "gamma" => MarkerKind::Gamma,
            "e" => MarkerKind::E,
            "0" => MarkerKind::Zero,
            "1" => MarkerKind::One,
            "F" => MarkerKind::F,
            _ => return None,
        })
    }
}

/// A marker together with its freshness index (0 for the plain marker).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Marker {
    pub kind: MarkerKind,
    pub index: u32,
}

/// An element of a base or core alphabet.
///
/// The derived order ranks variants in declaration order and then compares
/// fields recursively.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    Atom(String),
    Pair(Box<Symbol>, Box<Symbol>),
    Tag(String, Box<Symbol>),
    Fn(BTreeMap<Symbol, Symbol>),
    Subset(BTreeSet<Symbol>),
    Term(Box<TreeTerm>),
    Marker(Marker),
}

/// Elementwise symbol map used by heaps and token maps.
pub type SymbolMap = BTreeMap<Symbol, Symbol>;

impl Symbol {
    pub fn atom(name: impl Into<String>) -> Self {
        Symbol::Atom(name.into())
    }

    pub fn pair(left: Symbol, right: Symbol) -> Self {
        Symbol::Pair(Box::new(left), Box::new(right))
    }

    pub fn tag(label: impl Into<String>, inner: Symbol) -> Self {
        Symbol::Tag(label.into(), Box::new(inner))
    }

    pub fn marker(kind: MarkerKind) -> Self {
        Symbol::Marker(Marker { kind, index: 0 })
    }

    pub fn indexed_marker(kind: MarkerKind, index: u32) -> Self {
        Symbol::Marker(Marker { kind, index })
    }

    pub fn eps() -> Self {
        Self::marker(MarkerKind::Eps)
    }

    pub fn zero() -> Self {
        Self::marker(MarkerKind::Zero)
    }

    pub fn one() -> Self {
        Self::marker(MarkerKind::One)
    }

    /// Wraps a tree term as a symbol; a bare leaf stays the leaf symbol.
    pub fn from_term(term: TreeTerm) -> Self {
        match term {
            TreeTerm::Leaf(s) => s,
            other => Symbol::Term(Box::new(other)),
        }
    }

    /// Inverse of [`Symbol::from_term`].
    pub fn to_term(&self) -> TreeTerm {
        match self {
            Symbol::Term(t) => (**t).clone(),
            other => TreeTerm::Leaf(other.clone()),
        }
    }

    pub fn as_subset(&self) -> Option<&BTreeSet<Symbol>> {
        match self {
            Symbol::Subset(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_fn(&self) -> Option<&BTreeMap<Symbol, Symbol>> {
        match self {
            Symbol::Fn(g) => Some(g),
            _ => None,
        }
    }
}

impl From<&str> for Symbol {
    fn from(name: &str) -> Self {
        Symbol::atom(name)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Atom(name) => f.write_str(name),
            Symbol::Pair(l, r) => write!(f, "<{l},{r}>"),
            Symbol::Tag(label, inner) => write!(f, "{label}:{inner}"),
            Symbol::Fn(graph) => {
                f.write_str("fn:{")?;
                for (i, (k, v)) in graph.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{k}>{v}")?;
                }
                f.write_str("}")
            }
            Symbol::Subset(members) => {
                f.write_str("set:{")?;
                for (i, m) in members.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{m}")?;
                }
                f.write_str("}")
            }
            Symbol::Term(t) => write!(f, "term:{t}"),
            Symbol::Marker(m) => {
                write!(f, "#{}", m.kind.name())?;
                if m.index > 0 {
                    write!(f, "@{}", m.index)?;
                }
                Ok(())
            }
        }
    }
}

/// Builds a symbol set from atom names.
pub fn atoms<'a>(names: impl IntoIterator<Item = &'a str>) -> BTreeSet<Symbol> {
    names.into_iter().map(Symbol::atom).collect()
}
