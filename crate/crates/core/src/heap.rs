//! Exact symbolic token sets.

use std::collections::{BTreeMap, BTreeSet};

use crate::symbol::{Symbol, SymbolMap};
use crate::token::{words_up_to, Token};
use crate::verdict::{Verdict, Witness};

/// Default length bound for enumerative subset checks.
pub const DEFAULT_BOUND: usize = 6;

/// Largest universe for which the symbol-set decision rule runs.
const EXACT_UNIVERSE_LIMIT: usize = 16;

/// Largest number of candidate tokens any single enumeration may visit.
const ENUMERATION_BUDGET: usize = 400_000;

/// A heap: a possibly infinite set of tokens, represented exactly.
///
/// `Preimage(m, h)` holds the tokens whose every symbol lies in the domain of
/// `m` and whose elementwise image lies in `h`. `ImageBij(m, h)` is the
/// image of `h` under the injective map `m`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Heap {
    Finite(BTreeSet<Token>),
    Full(BTreeSet<Symbol>),
    Union(Box<Heap>, Box<Heap>),
    Intersect(Box<Heap>, Box<Heap>),
    Difference(Box<Heap>, Box<Heap>),
    Preimage(SymbolMap, Box<Heap>),
    ImageBij(SymbolMap, Box<Heap>),
}

/// The three query kinds over a heap.
#[derive(Clone, Debug)]
pub enum HeapQuery {
    Member(Token),
    Subset(Heap, usize),
    Enumerate(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QueryAnswer {
    Member(bool),
    Subset(Verdict),
    Enumerate(Vec<Token>),
}

pub fn heap_query(query: &HeapQuery, heap: &Heap) -> QueryAnswer {
    match query {
        HeapQuery::Member(t) => QueryAnswer::Member(heap.contains(t)),
        HeapQuery::Subset(other, bound) => QueryAnswer::Subset(heap.subset_of(other, *bound)),
        HeapQuery::Enumerate(n) => QueryAnswer::Enumerate(heap.enumerate(*n)),
    }
}

fn inverse_fibers(m: &SymbolMap) -> BTreeMap<&Symbol, Vec<&Symbol>> {
    let mut inv: BTreeMap<&Symbol, Vec<&Symbol>> = BTreeMap::new();
    for (k, v) in m {
        inv.entry(v).or_default().push(k);
    }
    inv
}

fn preimages_of(t: &Token, inv: &BTreeMap<&Symbol, Vec<&Symbol>>, out: &mut BTreeSet<Token>) {
    let mut fibers = Vec::with_capacity(t.len());
    for s in t.symbols() {
        match inv.get(s) {
            Some(f) => fibers.push(f),
            None => return,
        }
    }
    let mut idx = vec![0usize; fibers.len()];
    loop {
        out.insert(Token(
            idx.iter()
                .zip(&fibers)
                .map(|(&i, f)| f[i].clone())
                .collect(),
        ));
        let mut pos = idx.len();
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < fibers[pos].len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

fn bij_inverse(m: &SymbolMap, s: &Symbol) -> Option<Symbol> {
    m.iter().find(|(_, v)| *v == s).map(|(k, _)| k.clone())
}

fn word_count(alpha: usize, max_len: usize) -> usize {
    let mut total: usize = 0;
    let mut layer: usize = 1;
    for _ in 0..=max_len {
        total = total.saturating_add(layer);
        layer = layer.saturating_mul(alpha.max(1));
    }
    total
}

impl Heap {
    pub fn empty() -> Heap {
        Heap::Finite(BTreeSet::new())
    }

    pub fn finite(tokens: impl IntoIterator<Item = Token>) -> Heap {
        Heap::Finite(tokens.into_iter().collect())
    }

    pub fn full(alpha: impl IntoIterator<Item = Symbol>) -> Heap {
        Heap::Full(alpha.into_iter().collect())
    }

    pub fn union(a: Heap, b: Heap) -> Heap {
        Heap::Union(Box::new(a), Box::new(b))
    }

    pub fn intersect(a: Heap, b: Heap) -> Heap {
        Heap::Intersect(Box::new(a), Box::new(b))
    }

    pub fn difference(a: Heap, b: Heap) -> Heap {
        Heap::Difference(Box::new(a), Box::new(b))
    }

    pub fn preimage(m: SymbolMap, of: Heap) -> Heap {
        Heap::Preimage(m, Box::new(of))
    }

    pub fn image_bij(m: SymbolMap, of: Heap) -> Heap {
        Heap::ImageBij(m, Box::new(of))
    }

    pub fn as_finite(&self) -> Option<&BTreeSet<Token>> {
        match self {
            Heap::Finite(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_empty_finite(&self) -> bool {
        matches!(self, Heap::Finite(s) if s.is_empty())
    }

    /// Exact membership by structural evaluation.
    pub fn contains(&self, t: &Token) -> bool {
        match self {
            Heap::Finite(s) => s.contains(t),
            Heap::Full(a) => t.symbols().iter().all(|x| a.contains(x)),
            Heap::Union(a, b) => a.contains(t) || b.contains(t),
            Heap::Intersect(a, b) => a.contains(t) && b.contains(t),
            Heap::Difference(a, b) => a.contains(t) && !b.contains(t),
            Heap::Preimage(m, h) => t.map(m).is_some_and(|u| h.contains(&u)),
            Heap::ImageBij(m, h) => t
                .symbols()
                .iter()
                .map(|s| bij_inverse(m, s))
                .collect::<Option<Vec<_>>>()
                .is_some_and(|u| h.contains(&Token(u))),
        }
    }

    /// A superset of the symbols that occur in members.
    pub fn universe(&self) -> BTreeSet<Symbol> {
        match self {
            Heap::Finite(s) => s.iter().flat_map(|t| t.symbols().iter().cloned()).collect(),
            Heap::Full(a) => a.clone(),
            Heap::Union(a, b) => a.universe().union(&b.universe()).cloned().collect(),
            Heap::Intersect(a, b) => a.universe().intersection(&b.universe()).cloned().collect(),
            Heap::Difference(a, _) => a.universe(),
            Heap::Preimage(m, h) => {
                let inner = h.universe();
                m.iter()
                    .filter(|(_, v)| inner.contains(v))
                    .map(|(k, _)| k.clone())
                    .collect()
            }
            Heap::ImageBij(m, h) => {
                let inner = h.universe();
                m.iter()
                    .filter(|(k, _)| inner.contains(k))
                    .map(|(_, v)| v.clone())
                    .collect()
            }
        }
    }

    /// The greatest member length when the heap is finite, `None` otherwise.
    pub fn finite_extent(&self) -> Option<usize> {
        match self {
            Heap::Finite(s) => Some(s.iter().map(Token::len).max().unwrap_or(0)),
            Heap::Full(a) => a.is_empty().then_some(0),
            Heap::Union(a, b) => Some(a.finite_extent()?.max(b.finite_extent()?)),
            Heap::Intersect(a, b) => match (a.finite_extent(), b.finite_extent()) {
                (Some(x), Some(y)) => Some(x.min(y)),
                (x, y) => x.or(y),
            },
            Heap::Difference(a, _) => a.finite_extent(),
            Heap::Preimage(_, h) | Heap::ImageBij(_, h) => h.finite_extent(),
        }
    }

    /// Longest token stored in any finite leaf.
    pub fn max_leaf_len(&self) -> usize {
        match self {
            Heap::Finite(s) => s.iter().map(Token::len).max().unwrap_or(0),
            Heap::Full(_) => 0,
            Heap::Union(a, b) | Heap::Intersect(a, b) | Heap::Difference(a, b) => {
                a.max_leaf_len().max(b.max_leaf_len())
            }
            Heap::Preimage(_, h) | Heap::ImageBij(_, h) => h.max_leaf_len(),
        }
    }

    /// Members of length at most `max_len`.
    pub fn members_up_to(&self, max_len: usize) -> BTreeSet<Token> {
        match self {
            Heap::Finite(s) => s.iter().filter(|t| t.len() <= max_len).cloned().collect(),
            Heap::Full(a) => words_up_to(a, max_len).into_iter().collect(),
            Heap::Union(a, b) => {
                let mut out = a.members_up_to(max_len);
                out.extend(b.members_up_to(max_len));
                out
            }
            Heap::Intersect(a, b) => {
                let (src, filter) = if a.finite_extent().is_none() && b.finite_extent().is_some() {
                    (b, a)
                } else {
                    (a, b)
                };
                src.members_up_to(max_len)
                    .into_iter()
                    .filter(|t| filter.contains(t))
                    .collect()
            }
            Heap::Difference(a, b) => a
                .members_up_to(max_len)
                .into_iter()
                .filter(|t| !b.contains(t))
                .collect(),
            Heap::Preimage(m, h) => {
                let inv = inverse_fibers(m);
                let mut out = BTreeSet::new();
                for u in h.members_up_to(max_len) {
                    preimages_of(&u, &inv, &mut out);
                }
                out
            }
            Heap::ImageBij(m, h) => h
                .members_up_to(max_len)
                .iter()
                .filter_map(|u| u.map(m))
                .collect(),
        }
    }

    /// Members of length at most `max_len`, in canonical order.
    pub fn enumerate(&self, max_len: usize) -> Vec<Token> {
        self.members_up_to(max_len).into_iter().collect()
    }

    /// Membership of any token longer than every finite leaf whose symbol
    /// set is exactly `set`. Such membership depends only on the set.
    pub fn contains_long(&self, set: &BTreeSet<Symbol>) -> bool {
        match self {
            Heap::Finite(_) => false,
            Heap::Full(a) => set.is_subset(a),
            Heap::Union(a, b) => a.contains_long(set) || b.contains_long(set),
            Heap::Intersect(a, b) => a.contains_long(set) && b.contains_long(set),
            Heap::Difference(a, b) => a.contains_long(set) && !b.contains_long(set),
            Heap::Preimage(m, h) => set
                .iter()
                .map(|s| m.get(s).cloned())
                .collect::<Option<BTreeSet<_>>>()
                .is_some_and(|img| h.contains_long(&img)),
            Heap::ImageBij(m, h) => set
                .iter()
                .map(|s| bij_inverse(m, s))
                .collect::<Option<BTreeSet<_>>>()
                .is_some_and(|pre| h.contains_long(&pre)),
        }
    }

    /// Algebraic simplification; the denoted set never changes.
    pub fn simplify(&self) -> Heap {
        match self {
            Heap::Finite(_) | Heap::Full(_) => self.clone(),
            Heap::Union(a, b) => {
                let (a, b) = (a.simplify(), b.simplify());
                match (a, b) {
                    (Heap::Finite(x), Heap::Finite(y)) => {
                        Heap::Finite(x.union(&y).cloned().collect())
                    }
                    (x, y) if x.is_empty_finite() => y,
                    (x, y) if y.is_empty_finite() => x,
                    (Heap::Full(x), Heap::Full(y)) if x.is_subset(&y) => Heap::Full(y),
                    (Heap::Full(x), Heap::Full(y)) if y.is_subset(&x) => Heap::Full(x),
                    (x, y) if x == y => x,
                    (x, y) => Heap::union(x, y),
                }
            }
            Heap::Intersect(a, b) => {
                let (a, b) = (a.simplify(), b.simplify());
                match (a, b) {
                    (Heap::Finite(x), y) => {
                        Heap::Finite(x.into_iter().filter(|t| y.contains(t)).collect())
                    }
                    (x, Heap::Finite(y)) => {
                        Heap::Finite(y.into_iter().filter(|t| x.contains(t)).collect())
                    }
                    (Heap::Full(x), Heap::Full(y)) => {
                        Heap::Full(x.intersection(&y).cloned().collect())
                    }
                    (x, y) if x == y => x,
                    (x, y) => Heap::intersect(x, y),
                }
            }
            Heap::Difference(a, b) => {
                let (a, b) = (a.simplify(), b.simplify());
                match (a, b) {
                    (Heap::Finite(x), y) => {
                        Heap::Finite(x.into_iter().filter(|t| !y.contains(t)).collect())
                    }
                    (x, y) if y.is_empty_finite() => x,
                    (x, y) if x == y => Heap::empty(),
                    (Heap::Full(x), Heap::Full(y)) if x.is_subset(&y) => Heap::empty(),
                    (x, y) => Heap::difference(x, y),
                }
            }
            Heap::Preimage(m, h) => match h.simplify() {
                Heap::Full(a) => Heap::Full(
                    m.iter()
                        .filter(|(_, v)| a.contains(v))
                        .map(|(k, _)| k.clone())
                        .collect(),
                ),
                Heap::Finite(s) => {
                    let inv = inverse_fibers(m);
                    let mut out = BTreeSet::new();
                    for u in &s {
                        preimages_of(u, &inv, &mut out);
                    }
                    Heap::Finite(out)
                }
                inner => Heap::preimage(m.clone(), inner),
            },
            Heap::ImageBij(m, h) => match h.simplify() {
                Heap::Full(a) => Heap::Full(
                    m.iter()
                        .filter(|(k, _)| a.contains(k))
                        .map(|(_, v)| v.clone())
                        .collect(),
                ),
                Heap::Finite(s) => Heap::Finite(s.iter().filter_map(|u| u.map(m)).collect()),
                inner => Heap::image_bij(m.clone(), inner),
            },
        }
    }

    /// Simplifies and then materializes finite heaps into a single leaf.
    pub fn normalize(&self) -> Heap {
        let s = self.simplify();
        match s.finite_extent() {
            Some(n) if !matches!(s, Heap::Finite(_)) => Heap::Finite(s.members_up_to(n)),
            _ => s,
        }
    }

    /// The member set when the heap is finite.
    pub fn materialize(&self) -> Option<BTreeSet<Token>> {
        let n = self.finite_extent()?;
        Some(self.members_up_to(n))
    }

    /// Three-valued containment `self ⊆ other`.
    ///
    /// Symbolic rules are tried first. When the universe is small the
    /// symbol-set rule decides exactly: beyond the longest finite leaf,
    /// membership depends only on the set of symbols a token uses. Otherwise
    /// members are enumerated up to `bound`.
    pub fn subset_of(&self, other: &Heap, bound: usize) -> Verdict {
        let l = self.simplify();
        let r = other.simplify();
        subset_simplified(&l, &r, bound)
    }

    /// Extensional equality as two containments.
    pub fn equal_to(&self, other: &Heap, bound: usize) -> Verdict {
        self.subset_of(other, bound)
            .and_then(|| other.subset_of(self, bound))
    }
}

fn subset_simplified(l: &Heap, r: &Heap, bound: usize) -> Verdict {
    if let Some(members) = l.materialize() {
        return match members.into_iter().find(|t| !r.contains(t)) {
            Some(t) => Verdict::Fails(Witness::Token(t)),
            None => Verdict::Holds,
        };
    }
    if let (Heap::Full(a), Heap::Full(b)) = (l, r) {
        return match a.difference(b).next() {
            Some(x) => Verdict::Fails(Witness::Token(Token::unit(x.clone()))),
            None => Verdict::Holds,
        };
    }
    if let Heap::Union(a, b) = l {
        let va = subset_simplified(a, r, bound);
        if va.fails() {
            return va;
        }
        let vb = subset_simplified(b, r, bound);
        if vb.fails() || (va.holds() && vb.holds()) {
            return vb;
        }
    }
    if let Heap::Intersect(a, b) = r {
        let va = subset_simplified(l, a, bound);
        if va.fails() {
            return va;
        }
        let vb = subset_simplified(l, b, bound);
        if vb.fails() || (va.holds() && vb.holds()) {
            return vb;
        }
    }
    let universe = l.universe();
    let leaf_len = l.max_leaf_len().max(r.max_leaf_len());
    if universe.len() <= EXACT_UNIVERSE_LIMIT
        && word_count(universe.len(), leaf_len) <= ENUMERATION_BUDGET
    {
        return symbol_set_rule(l, r, &universe, leaf_len);
    }
    bounded_subset(l, r, &universe, bound)
}

fn symbol_set_rule(l: &Heap, r: &Heap, universe: &BTreeSet<Symbol>, leaf_len: usize) -> Verdict {
    if let Some(t) = l
        .members_up_to(leaf_len)
        .into_iter()
        .find(|t| !r.contains(t))
    {
        return Verdict::Fails(Witness::Token(t));
    }
    let letters: Vec<&Symbol> = universe.iter().collect();
    let mut witness: Option<BTreeSet<Symbol>> = None;
    for mask in 1u32..(1u32 << letters.len()) {
        let set: BTreeSet<Symbol> = (0..letters.len())
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| letters[i].clone())
            .collect();
        if l.contains_long(&set) && !r.contains_long(&set) {
            let better = witness.as_ref().is_none_or(|w| set.len() < w.len());
            if better {
                witness = Some(set);
            }
        }
    }
    match witness {
        None => Verdict::Holds,
        Some(set) => {
            let len = set.len().max(leaf_len + 1);
            let mut syms: Vec<Symbol> = set.into_iter().collect();
            let last = syms.last().cloned().expect("non-empty set");
            while syms.len() < len {
                syms.push(last.clone());
            }
            let t = Token(syms);
            debug_assert!(l.contains(&t) && !r.contains(&t));
            Verdict::Fails(Witness::Token(t))
        }
    }
}

fn bounded_subset(l: &Heap, r: &Heap, universe: &BTreeSet<Symbol>, bound: usize) -> Verdict {
    let mut reached = 0;
    for n in 0..=bound {
        if word_count(universe.len(), n) > ENUMERATION_BUDGET {
            break;
        }
        reached = n;
    }
    match l
        .members_up_to(reached)
        .into_iter()
        .find(|t| !r.contains(t))
    {
        Some(t) => Verdict::Fails(Witness::Token(t)),
        None => Verdict::Undecided(reached),
    }
}
