//! Subclasses, abstracting and stuffing, and the two-pullback subclass check.

use std::collections::BTreeSet;

use crate::class::{is_iso, mk_class, mk_map, ClassError, TokenClass, TokenMap};
use crate::heap::{Heap, DEFAULT_BOUND};
use crate::limit::{limit, tuple_symbol, Diagram};
use crate::structure::{constant_class, same_core, Constant};
use crate::symbol::{Symbol, SymbolMap};
use crate::token::Token;
use crate::tree::TreeTerm;
use crate::verdict::{Verdict, Witness};

/// Three-valued subclass test with a base-symbol or heap-token witness.
pub fn subclass_verdict(
    t1: &TokenClass,
    t2: &TokenClass,
    bound: usize,
) -> Result<Verdict, ClassError> {
    same_core(t1, t2)?;
    if let Some(s) = t1.base().iter().find(|s| !t2.base().contains(s)) {
        return Ok(Verdict::Fails(Witness::Symbol(s.clone())));
    }
    Ok(t1.heap().subset_of(t2.heap(), bound))
}

pub fn is_subclass(t1: &TokenClass, t2: &TokenClass) -> Result<bool, ClassError> {
    match subclass_verdict(t1, t2, DEFAULT_BOUND)? {
        Verdict::Holds => Ok(true),
        Verdict::Fails(_) => Ok(false),
        Verdict::Undecided(b) => Err(ClassError::UndecidedContainment(b)),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AbstractKind {
    Abstracting,
    Stuffing,
}

/// A heap token as a single base symbol.
pub fn token_symbol(t: &Token) -> Symbol {
    Symbol::Term(Box::new(TreeTerm::tuple(
        t.symbols().iter().cloned().map(TreeTerm::Leaf),
    )))
}

pub fn abstract_stuff(kind: AbstractKind, t: &TokenClass) -> Result<TokenClass, ClassError> {
    match kind {
        AbstractKind::Abstracting => {
            let heap = t
                .heap()
                .materialize()
                .ok_or(ClassError::SymbolicHeapUnsupported)?;
            let base = heap.iter().map(token_symbol).collect();
            mk_class(
                format!("abs({})", t.name()),
                base,
                t.core().clone(),
                Heap::empty(),
            )
        }
        AbstractKind::Stuffing => {
            let full = Heap::Full(t.symbols());
            mk_class(
                format!("stuff({})", t.name()),
                t.base().clone(),
                t.core().clone(),
                full,
            )
        }
    }
}

/// `⊚f`, sending each heap token to its image.
pub fn abstract_map(f: &TokenMap) -> Result<TokenMap, ClassError> {
    let src = abstract_stuff(AbstractKind::Abstracting, f.src())?;
    let dst = abstract_stuff(AbstractKind::Abstracting, f.dst())?;
    let tokens = f
        .src()
        .heap()
        .materialize()
        .ok_or(ClassError::SymbolicHeapUnsupported)?;
    let mut f0 = SymbolMap::new();
    for t in &tokens {
        f0.insert(token_symbol(t), token_symbol(&f.apply(t)?));
    }
    mk_map(&src, &dst, f0)
}

/// `♮f`, the same base function between stuffed classes.
pub fn stuff_map(f: &TokenMap) -> Result<TokenMap, ClassError> {
    let src = abstract_stuff(AbstractKind::Stuffing, f.src())?;
    let dst = abstract_stuff(AbstractKind::Stuffing, f.dst())?;
    mk_map(&src, &dst, f.f0().clone())
}

/// The characteristic map of `subset` into the truth class.
pub fn characteristic(x: &TokenClass, subset: &BTreeSet<Symbol>) -> Result<TokenMap, ClassError> {
    let truth = constant_class(Constant::Truth, x.core());
    let f0 = x
        .base()
        .iter()
        .map(|s| {
            (
                s.clone(),
                if subset.contains(s) {
                    Symbol::one()
                } else {
                    Symbol::zero()
                },
            )
        })
        .collect();
    mk_map(x, &truth, f0)
}

/// Checks that the square `right ∘ left = bottom ∘ top` is a pullback.
pub fn check_pullback(
    left: &TokenMap,
    top: &TokenMap,
    right: &TokenMap,
    bottom: &TokenMap,
) -> Verdict {
    let d = Diagram::new(left.src().core().clone())
        .object("X", right.src())
        .object("T", bottom.src())
        .object("O", right.dst())
        .arrow("X", "O", right)
        .arrow("T", "O", bottom);
    let lim = match limit(&d) {
        Ok(l) => l,
        Err(_) => return Verdict::Fails(Witness::Map(right.f0().clone())),
    };
    let mut f0 = SymbolMap::new();
    for p in left.src().base() {
        let x = left.f0()[p].clone();
        let t = top.f0()[p].clone();
        let o = right.f0()[&x].clone();
        let tuple = tuple_symbol(
            &[
                ("O".to_string(), o),
                ("T".to_string(), t),
                ("X".to_string(), x),
            ]
            .into_iter()
            .collect(),
        );
        if !lim.class.base().contains(&tuple) {
            return Verdict::Fails(Witness::Symbol(p.clone()));
        }
        f0.insert(p.clone(), tuple);
    }
    match mk_map(left.src(), &lim.class, f0) {
        Ok(c) => is_iso(&c),
        Err(ClassError::HeapViolation(t)) => Verdict::Fails(Witness::Token(t)),
        Err(ClassError::UndecidedContainment(b)) => Verdict::Undecided(b),
        Err(_) => Verdict::Fails(Witness::Map(left.f0().clone())),
    }
}

/// The characteristic maps of both squares.
#[derive(Clone, Debug)]
pub struct PullbackData {
    pub psi: TokenMap,
    pub phi: Option<TokenMap>,
    pub verdict: Verdict,
}

/// Certifies an injective map as a subclass inclusion through two pullbacks:
/// one over stuffed bases and one over abstracted heaps.
pub fn subclass_via_pullbacks(f: &TokenMap) -> Result<PullbackData, ClassError> {
    if !f.is_injective() {
        let mut seen = BTreeSet::new();
        let dup = f
            .f0()
            .values()
            .find(|v| !seen.insert(*v))
            .cloned()
            .expect("duplicate image");
        return Err(ClassError::NotInjective(dup));
    }
    let core = f.src().core().clone();
    let ter = constant_class(Constant::Terminal, &core);
    let truth = constant_class(Constant::Truth, &core);
    let t = mk_map(
        &ter,
        &truth,
        [(Symbol::zero(), Symbol::one())].into_iter().collect(),
    )?;
    let to_ter = |c: &TokenClass| {
        mk_map(
            c,
            &ter,
            c.base()
                .iter()
                .map(|s| (s.clone(), Symbol::zero()))
                .collect(),
        )
    };

    let sf = stuff_map(f)?;
    let image: BTreeSet<Symbol> = f.f0().values().cloned().collect();
    let psi = characteristic(sf.dst(), &image)?;
    let first = check_pullback(&sf, &to_ter(sf.src())?, &psi, &t);

    let (phi, second) = match abstract_map(f) {
        Ok(af) => {
            let saf = stuff_map(&af)?;
            let image: BTreeSet<Symbol> = saf.f0().values().cloned().collect();
            let phi = characteristic(saf.dst(), &image)?;
            let v = check_pullback(&saf, &to_ter(saf.src())?, &phi, &t);
            (Some(phi), v)
        }
        Err(ClassError::SymbolicHeapUnsupported) => (None, Verdict::Undecided(DEFAULT_BOUND)),
        Err(ClassError::HeapViolation(w)) => (None, Verdict::Fails(Witness::Token(w))),
        Err(e) => return Err(e),
    };
    let verdict = first.and_then(|| second);
    Ok(PullbackData { psi, phi, verdict })
}

/// Runs the two-pullback check on the inclusion of `t1` into `t2`, reporting
/// why no inclusion exists when it does not.
pub fn pullback_inclusion_check(t1: &TokenClass, t2: &TokenClass) -> Result<Verdict, ClassError> {
    same_core(t1, t2)?;
    if let Some(s) = t1.base().iter().find(|s| !t2.base().contains(s)) {
        return Ok(Verdict::Fails(Witness::Symbol(s.clone())));
    }
    let f0 = t1.base().iter().map(|s| (s.clone(), s.clone())).collect();
    match mk_map(t1, t2, f0) {
        Ok(f) => Ok(subclass_via_pullbacks(&f)?.verdict),
        Err(ClassError::HeapViolation(w)) => Ok(Verdict::Fails(Witness::Token(w))),
        Err(ClassError::UndecidedContainment(b)) => Ok(Verdict::Undecided(b)),
        Err(e) => Err(e),
    }
}
