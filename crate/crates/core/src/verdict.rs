//! Three-valued check results.

use std::fmt;

use crate::symbol::{Symbol, SymbolMap};
use crate::token::Token;

/// Reproducible evidence that a check failed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Token(Token),
    Symbol(Symbol),
    Map(SymbolMap),
    /// A cone (one base map per leg) that no candidate mediator factors.
    NoMediator(Vec<SymbolMap>),
    /// Two distinct mediators for the same cone.
    TwoMediators(SymbolMap, SymbolMap),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Fails(Witness),
    Undecided(usize),
}

impl Verdict {
    pub fn holds(&self) -> bool {
        matches!(self, Verdict::Holds)
    }

    pub fn fails(&self) -> bool {
        matches!(self, Verdict::Fails(_))
    }

    pub fn witness(&self) -> Option<&Witness> {
        match self {
            Verdict::Fails(w) => Some(w),
            _ => None,
        }
    }

    /// Conjunction: the first non-holding verdict wins.
    pub fn and_then(self, next: impl FnOnce() -> Verdict) -> Verdict {
        match self {
            Verdict::Holds => next(),
            other => other,
        }
    }
}

pub fn format_map(m: &SymbolMap) -> String {
    let body: Vec<String> = m.iter().map(|(k, v)| format!("{k}>{v}")).collect();
    format!("{{{}}}", body.join(","))
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Token(t) => write!(f, "token {t}"),
            Witness::Symbol(s) => write!(f, "symbol {s}"),
            Witness::Map(m) => write!(f, "map {}", format_map(m)),
            Witness::NoMediator(legs) => {
                let legs: Vec<String> = legs.iter().map(format_map).collect();
                write!(f, "cone [{}] has no mediator", legs.join(" "))
            }
            Witness::TwoMediators(a, b) => {
                write!(f, "mediators {} and {}", format_map(a), format_map(b))
            }
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Holds => f.write_str("Holds"),
            Verdict::Fails(w) => write!(f, "Fails: {w}"),
            Verdict::Undecided(b) => write!(f, "Undecided (bound {b})"),
        }
    }
}
