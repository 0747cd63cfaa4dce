//! Token classes, token maps and hom-set enumeration.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::heap::{Heap, DEFAULT_BOUND};
use crate::symbol::{Symbol, SymbolMap};
use crate::token::{Alphabet, Token};
use crate::verdict::{format_map, Verdict, Witness};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ClassError {
    #[error("symbol {0} is in both base and core")]
    AlphabetOverlap(Symbol),
    #[error("token {token} uses undeclared symbol {symbol}")]
    ForeignSymbol { token: Token, symbol: Symbol },
    #[error("map is not defined on base symbol {0}")]
    NotTotal(Symbol),
    #[error("map sends a symbol to {0}, which is not in the target base")]
    ImageOutsideBase(Symbol),
    #[error("heap token {0} is not sent into the target heap")]
    HeapViolation(Token),
    #[error("heap containment undecided up to length {0}")]
    UndecidedContainment(usize),
    #[error("token {0} is not in the source heap")]
    ForeignToken(Token),
    #[error("map endpoints do not match")]
    EndpointMismatch,
    #[error("classes have different cores")]
    CoreMismatch,
    #[error("exponent needs a finite heap on the exponent side")]
    SymbolicExponentUnsupported,
    #[error("operation needs a finite heap")]
    SymbolicHeapUnsupported,
    #[error("map is not injective at {0}")]
    NotInjective(Symbol),
    #[error("{0} is not in the required set")]
    NotASubset(Symbol),
    #[error("base of size {0} exceeds the supported cap")]
    BaseTooLarge(usize),
    #[error("not a subclass: {0}")]
    NotASubclass(Witness),
    #[error("unknown diagram object {0}")]
    UnknownObject(String),
    #[error("marker {0} already occurs in the alphabet")]
    MarkerCollision(Symbol),
}

struct ClassData {
    name: String,
    alpha: Alphabet,
    heap: Heap,
}

/// A p-class ⟨B, E, Υ⟩. Cheap to clone.
#[derive(Clone)]
pub struct TokenClass(Arc<ClassData>);

impl PartialEq for TokenClass {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.alpha == other.0.alpha && self.0.heap == other.0.heap)
    }
}

impl Eq for TokenClass {}

impl fmt::Debug for TokenClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TokenClass")
            .field("name", &self.0.name)
            .field("base", &self.0.alpha.base)
            .field("core", &self.0.alpha.core)
            .field("heap", &self.0.heap)
            .finish()
    }
}

fn check_finite_leaves(heap: &Heap, alpha: &Alphabet) -> Result<(), ClassError> {
    match heap {
        Heap::Finite(tokens) => {
            for t in tokens {
                if let Some(s) = t.symbols().iter().find(|s| !alpha.contains(s)) {
                    return Err(ClassError::ForeignSymbol {
                        token: t.clone(),
                        symbol: s.clone(),
                    });
                }
            }
            Ok(())
        }
        Heap::Full(_) | Heap::Preimage(..) | Heap::ImageBij(..) | Heap::Intersect(..) => Ok(()),
        Heap::Difference(a, _) => check_finite_leaves(a, alpha),
        Heap::Union(a, b) => {
            check_finite_leaves(a, alpha)?;
            check_finite_leaves(b, alpha)
        }
    }
}

/// Validates and normalizes a class.
pub fn mk_class(
    name: impl Into<String>,
    base: BTreeSet<Symbol>,
    core: BTreeSet<Symbol>,
    heap: Heap,
) -> Result<TokenClass, ClassError> {
    if let Some(s) = base.intersection(&core).next() {
        return Err(ClassError::AlphabetOverlap(s.clone()));
    }
    let alpha = Alphabet { base, core };
    check_finite_leaves(&heap, &alpha)?;
    let heap = heap.normalize();
    if let Some(s) = heap.universe().into_iter().find(|s| !alpha.contains(s)) {
        return Err(ClassError::ForeignSymbol {
            token: Token::unit(s.clone()),
            symbol: s,
        });
    }
    Ok(TokenClass(Arc::new(ClassData {
        name: name.into(),
        alpha,
        heap,
    })))
}

impl TokenClass {
    pub fn name(&self) -> &str {
        &self.0.name
    }

    pub fn base(&self) -> &BTreeSet<Symbol> {
        &self.0.alpha.base
    }

    pub fn core(&self) -> &BTreeSet<Symbol> {
        &self.0.alpha.core
    }

    pub fn heap(&self) -> &Heap {
        &self.0.heap
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.0.alpha
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        self.0.alpha.all()
    }

    /// The heap as a finite set, when it is one.
    pub fn finite_heap(&self) -> Option<&BTreeSet<Token>> {
        self.0.heap.as_finite()
    }

    pub fn renamed(&self, name: impl Into<String>) -> TokenClass {
        TokenClass(Arc::new(ClassData {
            name: name.into(),
            alpha: self.0.alpha.clone(),
            heap: self.0.heap.clone(),
        }))
    }

    /// The same class viewed over a larger core.
    pub fn with_core(&self, core: BTreeSet<Symbol>) -> Result<TokenClass, ClassError> {
        if let Some(s) = self.core().difference(&core).next() {
            return Err(ClassError::NotASubset(s.clone()));
        }
        mk_class(self.name(), self.base().clone(), core, self.heap().clone())
    }

    pub fn contains(&self, t: &Token) -> bool {
        self.0.heap.contains(t)
    }
}

/// A p-map ⟨f, 1_E, p⟩; the core is fixed pointwise.
#[derive(Clone, Debug)]
pub struct TokenMap {
    src: TokenClass,
    dst: TokenClass,
    f0: SymbolMap,
}

impl PartialEq for TokenMap {
    fn eq(&self, other: &Self) -> bool {
        self.f0 == other.f0 && self.src == other.src && self.dst == other.dst
    }
}

impl Eq for TokenMap {}

impl fmt::Display for TokenMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_map(&self.f0))
    }
}

/// `f0` extended by the identity on `core`.
pub fn extend_with_core(f0: &SymbolMap, core: &BTreeSet<Symbol>) -> SymbolMap {
    let mut ext = f0.clone();
    for c in core {
        ext.insert(c.clone(), c.clone());
    }
    ext
}

/// Heap containment of the elementwise image, three-valued.
pub fn image_contained(src: &Heap, ext: &SymbolMap, dst: &Heap, bound: usize) -> Verdict {
    if let Heap::Finite(tokens) = src {
        for t in tokens {
            match t.map(ext) {
                Some(u) if dst.contains(&u) => {}
                _ => return Verdict::Fails(Witness::Token(t.clone())),
            }
        }
        return Verdict::Holds;
    }
    src.subset_of(&Heap::preimage(ext.clone(), dst.clone()), bound)
}

fn check_shape(src: &TokenClass, dst: &TokenClass, f0: &SymbolMap) -> Result<(), ClassError> {
    if src.core() != dst.core() {
        return Err(ClassError::CoreMismatch);
    }
    if let Some(s) = src.base().iter().find(|s| !f0.contains_key(s)) {
        return Err(ClassError::NotTotal(s.clone()));
    }
    if let Some(s) = f0.keys().find(|s| !src.base().contains(s)) {
        return Err(ClassError::ForeignSymbol {
            token: Token::unit(s.clone()),
            symbol: s.clone(),
        });
    }
    if let Some(s) = f0.values().find(|s| !dst.base().contains(s)) {
        return Err(ClassError::ImageOutsideBase(s.clone()));
    }
    Ok(())
}

/// Validates a base function as a token map.
pub fn mk_map(src: &TokenClass, dst: &TokenClass, f0: SymbolMap) -> Result<TokenMap, ClassError> {
    mk_map_bounded(src, dst, f0, DEFAULT_BOUND)
}

pub fn mk_map_bounded(
    src: &TokenClass,
    dst: &TokenClass,
    f0: SymbolMap,
    bound: usize,
) -> Result<TokenMap, ClassError> {
    check_shape(src, dst, &f0)?;
    let ext = extend_with_core(&f0, src.core());
    match image_contained(src.heap(), &ext, dst.heap(), bound) {
        Verdict::Holds => Ok(TokenMap {
            src: src.clone(),
            dst: dst.clone(),
            f0,
        }),
        Verdict::Fails(Witness::Token(t)) => Err(ClassError::HeapViolation(t)),
        Verdict::Fails(w) => Err(ClassError::NotASubclass(w)),
        Verdict::Undecided(b) => Err(ClassError::UndecidedContainment(b)),
    }
}

impl TokenMap {
    pub fn src(&self) -> &TokenClass {
        &self.src
    }

    pub fn dst(&self) -> &TokenClass {
        &self.dst
    }

    pub fn f0(&self) -> &SymbolMap {
        &self.f0
    }

    /// `f0 ∐ 1_E`.
    pub fn extended(&self) -> SymbolMap {
        extend_with_core(&self.f0, self.src.core())
    }

    pub fn apply_symbol(&self, s: &Symbol) -> Option<Symbol> {
        if self.src.core().contains(s) {
            return Some(s.clone());
        }
        self.f0.get(s).cloned()
    }

    /// Elementwise image of a heap token.
    pub fn apply(&self, t: &Token) -> Result<Token, ClassError> {
        if !self.src.contains(t) {
            return Err(ClassError::ForeignToken(t.clone()));
        }
        t.map(&self.extended())
            .ok_or_else(|| ClassError::ForeignToken(t.clone()))
    }

    pub fn is_injective(&self) -> bool {
        let img: BTreeSet<&Symbol> = self.f0.values().collect();
        img.len() == self.f0.len()
    }
}

pub fn identity(t: &TokenClass) -> TokenMap {
    TokenMap {
        src: t.clone(),
        dst: t.clone(),
        f0: t.base().iter().map(|s| (s.clone(), s.clone())).collect(),
    }
}

/// `g ∘ f`.
pub fn compose(g: &TokenMap, f: &TokenMap) -> Result<TokenMap, ClassError> {
    if f.dst != g.src {
        return Err(ClassError::EndpointMismatch);
    }
    let f0 =
        f.f0.iter()
            .map(|(k, v)| (k.clone(), g.f0[v].clone()))
            .collect();
    Ok(TokenMap {
        src: f.src.clone(),
        dst: g.dst.clone(),
        f0,
    })
}

/// The inverse of a base-bijective map, when it is itself a valid map.
pub fn inverse(m: &TokenMap) -> Result<TokenMap, ClassError> {
    if !m.is_injective() {
        let mut seen = BTreeSet::new();
        let dup =
            m.f0.values()
                .find(|v| !seen.insert(*v))
                .cloned()
                .expect("duplicate image");
        return Err(ClassError::NotInjective(dup));
    }
    if let Some(s) = m
        .dst
        .base()
        .iter()
        .find(|s| !m.f0.values().any(|v| v == *s))
    {
        return Err(ClassError::NotTotal(s.clone()));
    }
    let inv = m.f0.iter().map(|(k, v)| (v.clone(), k.clone())).collect();
    mk_map(&m.dst, &m.src, inv)
}

/// Holds when the map is invertible within the category.
pub fn is_iso(m: &TokenMap) -> Verdict {
    match inverse(m) {
        Ok(_) => Verdict::Holds,
        Err(ClassError::HeapViolation(t)) => Verdict::Fails(Witness::Token(t)),
        Err(ClassError::NotInjective(s)) | Err(ClassError::NotTotal(s)) => {
            Verdict::Fails(Witness::Symbol(s))
        }
        Err(ClassError::UndecidedContainment(b)) => Verdict::Undecided(b),
        Err(_) => Verdict::Fails(Witness::Map(m.f0.clone())),
    }
}

/// Result of enumerating a hom-set.
#[derive(Clone, Debug, Default)]
pub struct HomSet {
    pub maps: Vec<TokenMap>,
    /// Candidates whose containment check did not conclude.
    pub undecided: Vec<(SymbolMap, usize)>,
}

impl HomSet {
    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }
}

/// All token maps `t1 → t2`, in canonical order of their base functions.
pub fn hom_enumerate(t1: &TokenClass, t2: &TokenClass) -> HomSet {
    hom_enumerate_bounded(t1, t2, DEFAULT_BOUND)
}

pub fn hom_enumerate_bounded(t1: &TokenClass, t2: &TokenClass, bound: usize) -> HomSet {
    let mut out = HomSet::default();
    if t1.core() != t2.core() {
        return out;
    }
    match t1.finite_heap() {
        Some(tokens) => enumerate_pruned(t1, t2, tokens, &mut out),
        None => enumerate_all(t1, t2, bound, &mut out),
    }
    out.maps.sort_by(|a, b| a.f0.cmp(&b.f0));
    out
}

fn enumerate_all(t1: &TokenClass, t2: &TokenClass, bound: usize, out: &mut HomSet) {
    let dom: Vec<&Symbol> = t1.base().iter().collect();
    let cod: Vec<&Symbol> = t2.base().iter().collect();
    if cod.is_empty() && !dom.is_empty() {
        return;
    }
    let mut idx = vec![0usize; dom.len()];
    loop {
        let f0: SymbolMap = dom
            .iter()
            .zip(&idx)
            .map(|(d, &i)| ((*d).clone(), cod[i].clone()))
            .collect();
        let ext = extend_with_core(&f0, t1.core());
        match image_contained(t1.heap(), &ext, t2.heap(), bound) {
            Verdict::Holds => out.maps.push(TokenMap {
                src: t1.clone(),
                dst: t2.clone(),
                f0,
            }),
            Verdict::Undecided(b) => out.undecided.push((f0, b)),
            Verdict::Fails(_) => {}
        }
        let mut pos = idx.len();
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < cod.len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// Backtracking over base symbols; a heap token is checked as soon as all of
/// its base symbols are assigned.
fn enumerate_pruned(t1: &TokenClass, t2: &TokenClass, tokens: &BTreeSet<Token>, out: &mut HomSet) {
    let mut order: Vec<Symbol> = Vec::new();
    for t in tokens {
        for s in t.symbols() {
            if t1.base().contains(s) && !order.contains(s) {
                order.push(s.clone());
            }
        }
    }
    for s in t1.base() {
        if !order.contains(s) {
            order.push(s.clone());
        }
    }
    let position: BTreeMap<&Symbol, usize> =
        order.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut due: Vec<Vec<&Token>> = vec![Vec::new(); order.len() + 1];
    for t in tokens {
        let last = t
            .symbols()
            .iter()
            .filter_map(|s| position.get(s))
            .map(|&i| i + 1)
            .max()
            .unwrap_or(0);
        due[last].push(t);
    }
    let cod: Vec<Symbol> = t2.base().iter().cloned().collect();
    let mut ext = extend_with_core(&SymbolMap::new(), t1.core());
    if !tokens_ok(&due[0], &ext, t2.heap()) {
        return;
    }
    search(0, &order, &cod, &due, &mut ext, t1, t2, out);
}

fn tokens_ok(tokens: &[&Token], ext: &SymbolMap, dst: &Heap) -> bool {
    tokens
        .iter()
        .all(|t| t.map(ext).is_some_and(|u| dst.contains(&u)))
}

#[allow(clippy::too_many_arguments)]
fn search(
    depth: usize,
    order: &[Symbol],
    cod: &[Symbol],
    due: &[Vec<&Token>],
    ext: &mut SymbolMap,
    t1: &TokenClass,
    t2: &TokenClass,
    out: &mut HomSet,
) {
    if depth == order.len() {
        let f0 = order.iter().map(|s| (s.clone(), ext[s].clone())).collect();
        out.maps.push(TokenMap {
            src: t1.clone(),
            dst: t2.clone(),
            f0,
        });
        return;
    }
    for c in cod {
        ext.insert(order[depth].clone(), c.clone());
        if tokens_ok(&due[depth + 1], ext, t2.heap()) {
            search(depth + 1, order, cod, due, ext, t1, t2, out);
        }
    }
    ext.remove(&order[depth]);
}
