//! The operator suite on flat token classes.

use std::collections::BTreeSet;

use crate::class::{extend_with_core, mk_class, mk_map, ClassError, TokenClass, TokenMap};
use crate::heap::Heap;
use crate::structure::{function_symbols, product, same_core};
use crate::subobject::subclass_verdict;
use crate::symbol::{MarkerKind, Symbol, SymbolMap};
use crate::token::Token;
use crate::verdict::{Verdict, Witness};
use crate::DEFAULT_BOUND;

/// Largest base accepted by powering.
pub const POWER_BASE_CAP: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SetOp {
    Merge,
    Meet,
    Forget,
    Delete,
}

/// Merge, meet, forget and delete. `Delete(T, T')` removes the heap of `T'`
/// from `T`.
pub fn setops(
    kind: SetOp,
    t: &TokenClass,
    other: Option<&TokenClass>,
) -> Result<TokenClass, ClassError> {
    let need = || other.ok_or(ClassError::EndpointMismatch);
    match kind {
        SetOp::Forget => mk_class(
            format!("forget({})", t.name()),
            t.base().clone(),
            t.core().clone(),
            Heap::empty(),
        ),
        SetOp::Merge => {
            let o = need()?;
            same_core(t, o)?;
            let base = t.base().union(o.base()).cloned().collect();
            mk_class(
                format!("{}|{}", t.name(), o.name()),
                base,
                t.core().clone(),
                Heap::union(t.heap().clone(), o.heap().clone()),
            )
        }
        SetOp::Meet => {
            let o = need()?;
            same_core(t, o)?;
            let base = t.base().intersection(o.base()).cloned().collect();
            mk_class(
                format!("{}&{}", t.name(), o.name()),
                base,
                t.core().clone(),
                Heap::intersect(t.heap().clone(), o.heap().clone()),
            )
        }
        SetOp::Delete => {
            let o = need()?;
            same_core(t, o)?;
            mk_class(
                format!("{}-{}", t.name(), o.name()),
                t.base().clone(),
                t.core().clone(),
                Heap::difference(t.heap().clone(), o.heap().clone()),
            )
        }
    }
}

/// The smallest index at which none of `kinds` occurs in any of `classes`.
pub fn fresh_index(classes: &[&TokenClass], kinds: &[MarkerKind]) -> u32 {
    let mut used = BTreeSet::new();
    for c in classes {
        for s in c.symbols() {
            collect_markers(&s, &mut used);
        }
    }
    (0..)
        .find(|i| {
            kinds
                .iter()
                .all(|k| !used.contains(&Symbol::indexed_marker(*k, *i)))
        })
        .expect("some index is free")
}

fn collect_markers(s: &Symbol, out: &mut BTreeSet<Symbol>) {
    match s {
        Symbol::Marker(_) => {
            out.insert(s.clone());
        }
        Symbol::Pair(a, b) => {
            collect_markers(a, out);
            collect_markers(b, out);
        }
        Symbol::Tag(_, a) => collect_markers(a, out),
        Symbol::Fn(g) => g.iter().for_each(|(k, v)| {
            collect_markers(k, out);
            collect_markers(v, out);
        }),
        Symbol::Subset(m) => m.iter().for_each(|x| collect_markers(x, out)),
        Symbol::Atom(_) | Symbol::Term(_) => {}
    }
}

fn unknown_at(t: &TokenClass, i: u32) -> Result<TokenClass, ClassError> {
    let e = Symbol::indexed_marker(MarkerKind::E, i);
    let eps = Symbol::indexed_marker(MarkerKind::Eps, i);
    let mut base = t.base().clone();
    base.insert(e.clone());
    let mut core = t.core().clone();
    core.insert(eps.clone());
    let heap = Heap::union(t.heap().clone(), Heap::finite([Token(vec![eps, e])]));
    mk_class(format!("unknown({})", t.name()), base, core, heap)
}

/// `⊙T = ⟨B ∪ {e}, E ∪ {ε}, Υ ∪ {(ε,e)}⟩` with fresh markers.
pub fn introduce_unknown(t: &TokenClass) -> Result<TokenClass, ClassError> {
    unknown_at(t, fresh_index(&[t], &[MarkerKind::E, MarkerKind::Eps]))
}

/// `⊙f = f ∪ {e ↦ e}`.
pub fn introduce_unknown_map(f: &TokenMap) -> Result<TokenMap, ClassError> {
    let i = fresh_index(&[f.src(), f.dst()], &[MarkerKind::E, MarkerKind::Eps]);
    let src = unknown_at(f.src(), i)?;
    let dst = unknown_at(f.dst(), i)?;
    let e = Symbol::indexed_marker(MarkerKind::E, i);
    let mut f0 = f.f0().clone();
    f0.insert(e.clone(), e);
    mk_map(&src, &dst, f0)
}

/// All subsets of `base` as `Subset` symbols.
pub fn power_set(base: &BTreeSet<Symbol>) -> Vec<Symbol> {
    let items: Vec<&Symbol> = base.iter().collect();
    (0u64..1 << items.len())
        .map(|mask| {
            Symbol::Subset(
                items
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, s)| (*s).clone())
                    .collect(),
            )
        })
        .collect()
}

fn power_at(t: &TokenClass, i: u32) -> Result<TokenClass, ClassError> {
    if t.base().len() > POWER_BASE_CAP {
        return Err(ClassError::BaseTooLarge(t.base().len()));
    }
    let heap = t
        .heap()
        .materialize()
        .ok_or(ClassError::SymbolicHeapUnsupported)?;
    let e = Symbol::indexed_marker(MarkerKind::E, i);
    let eps = Symbol::indexed_marker(MarkerKind::Eps, i);
    let gamma = Symbol::indexed_marker(MarkerKind::Gamma, i);
    let subsets = power_set(t.base());

    let mut tokens = BTreeSet::new();
    for s in &subsets {
        let members = s.as_subset().expect("subset symbol");
        for x in members.iter().chain([&e]) {
            tokens.insert(Token(vec![gamma.clone(), s.clone(), x.clone()]));
        }
    }
    for w in &heap {
        let options: Vec<Vec<Symbol>> = w
            .symbols()
            .iter()
            .map(|x| {
                let mut opts = vec![x.clone()];
                if t.base().contains(x) {
                    opts.extend(
                        subsets
                            .iter()
                            .filter(|s| s.as_subset().is_some_and(|m| m.contains(x)))
                            .cloned(),
                    );
                }
                opts
            })
            .collect();
        expand(&options, &mut Vec::new(), &mut tokens);
    }

    let mut base: BTreeSet<Symbol> = t.base().clone();
    base.insert(e);
    base.extend(subsets);
    let mut core = t.core().clone();
    core.insert(eps);
    core.insert(gamma);
    mk_class(
        format!("power({})", t.name()),
        base,
        core,
        Heap::Finite(tokens),
    )
}

fn expand(options: &[Vec<Symbol>], prefix: &mut Vec<Symbol>, out: &mut BTreeSet<Token>) {
    if prefix.len() == options.len() {
        out.insert(Token(prefix.clone()));
        return;
    }
    for o in &options[prefix.len()] {
        prefix.push(o.clone());
        expand(options, prefix, out);
        prefix.pop();
    }
}

const POWER_KINDS: [MarkerKind; 3] = [MarkerKind::E, MarkerKind::Eps, MarkerKind::Gamma];

/// `∇T`: base `{e} ∪ B ∪ 𝒫(B)` with membership tokens `(γ,S,x)` and every
/// heap token generalized position by position to subsets containing it.
pub fn powering(t: &TokenClass) -> Result<TokenClass, ClassError> {
    power_at(t, fresh_index(&[t], &POWER_KINDS))
}

fn power_f0(f: &SymbolMap, src_base: &BTreeSet<Symbol>, e: &Symbol) -> SymbolMap {
    let mut f0 = f.clone();
    f0.insert(e.clone(), e.clone());
    for s in power_set(src_base) {
        let img = s
            .as_subset()
            .expect("subset symbol")
            .iter()
            .map(|x| f[x].clone())
            .collect();
        f0.insert(s, Symbol::Subset(img));
    }
    f0
}

/// `∇f = f ∪ {e ↦ e} ∪ 𝒫(f)`.
pub fn powering_map(f: &TokenMap) -> Result<TokenMap, ClassError> {
    let i = fresh_index(&[f.src(), f.dst()], &POWER_KINDS);
    let src = power_at(f.src(), i)?;
    let dst = power_at(f.dst(), i)?;
    let e = Symbol::indexed_marker(MarkerKind::E, i);
    mk_map(&src, &dst, power_f0(f.f0(), f.src().base(), &e))
}

/// `⤳T = ⟨B ∐ E, ∅, Υ⟩`.
pub fn obscuring(t: &TokenClass) -> Result<TokenClass, ClassError> {
    mk_class(
        format!("obscure({})", t.name()),
        t.symbols(),
        BTreeSet::new(),
        t.heap().clone(),
    )
}

/// `⤳f = f ∐ 1_E`.
pub fn obscuring_map(f: &TokenMap) -> Result<TokenMap, ClassError> {
    mk_map(&obscuring(f.src())?, &obscuring(f.dst())?, f.extended())
}

/// `T1 ⊗ T2` by direct comprehension over finite heaps: a pair token is in
/// the heap iff both projections are.
pub fn matchup(t1: &TokenClass, t2: &TokenClass) -> Result<TokenClass, ClassError> {
    same_core(t1, t2)?;
    let (h1, h2) = match (t1.heap().materialize(), t2.heap().materialize()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Ok(product(t1, t2)?.class),
    };
    let mut tokens = BTreeSet::new();
    for x in &h1 {
        for y in h2.iter().filter(|y| y.len() == x.len()) {
            if let Some(w) = pair_tokens(x, y, t1.core()) {
                tokens.insert(w);
            }
        }
    }
    let base = pair_base(t1, t2);
    mk_class(
        format!("{}*{}", t1.name(), t2.name()),
        base,
        t1.core().clone(),
        Heap::Finite(tokens),
    )
}

fn pair_base(t1: &TokenClass, t2: &TokenClass) -> BTreeSet<Symbol> {
    t1.base()
        .iter()
        .flat_map(|x| {
            t2.base()
                .iter()
                .map(move |y| Symbol::pair(x.clone(), y.clone()))
        })
        .collect()
}

/// Zips two tokens; core positions must agree and stay unpaired.
fn pair_tokens(x: &Token, y: &Token, core: &BTreeSet<Symbol>) -> Option<Token> {
    x.symbols()
        .iter()
        .zip(y.symbols())
        .map(|(a, b)| match (core.contains(a), core.contains(b)) {
            (true, true) if a == b => Some(a.clone()),
            (false, false) => Some(Symbol::pair(a.clone(), b.clone())),
            _ => None,
        })
        .collect::<Option<Vec<_>>>()
        .map(Token)
}

/// `T1 ⊕ T2`: a pair token is in the heap iff either projection is.
pub fn blending(t1: &TokenClass, t2: &TokenClass) -> Result<TokenClass, ClassError> {
    same_core(t1, t2)?;
    let mut p1 = SymbolMap::new();
    let mut p2 = SymbolMap::new();
    for xy in pair_base(t1, t2) {
        if let Symbol::Pair(x, y) = &xy {
            p1.insert(xy.clone(), (**x).clone());
            p2.insert(xy.clone(), (**y).clone());
        }
    }
    let heap = Heap::union(
        Heap::preimage(extend_with_core(&p1, t1.core()), t1.heap().clone()),
        Heap::preimage(extend_with_core(&p2, t1.core()), t2.heap().clone()),
    );
    mk_class(
        format!("{}+{}", t1.name(), t2.name()),
        p1.into_keys().collect(),
        t1.core().clone(),
        heap,
    )
}

/// `T1 ⊎ T2` over the base `B1×{ε} ∪ {ε}×B2`.
pub fn union_y(t1: &TokenClass, t2: &TokenClass) -> Result<TokenClass, ClassError> {
    same_core(t1, t2)?;
    let eps = Symbol::eps();
    let j1: SymbolMap = t1
        .base()
        .iter()
        .map(|x| (x.clone(), Symbol::pair(x.clone(), eps.clone())))
        .collect();
    let j2: SymbolMap = t2
        .base()
        .iter()
        .map(|y| (y.clone(), Symbol::pair(eps.clone(), y.clone())))
        .collect();
    let base = j1.values().chain(j2.values()).cloned().collect();
    let heap = Heap::union(
        Heap::image_bij(extend_with_core(&j1, t1.core()), t1.heap().clone()),
        Heap::image_bij(extend_with_core(&j2, t1.core()), t2.heap().clone()),
    );
    mk_class(
        format!("{}u{}", t1.name(), t2.name()),
        base,
        t1.core().clone(),
        heap,
    )
}

/// `T1 ◁ T2` by direct evaluation of the membership condition against every
/// compatible tuple of `Υ2`.
pub fn refering(t1: &TokenClass, t2: &TokenClass) -> Result<TokenClass, ClassError> {
    same_core(t1, t2)?;
    let upsilon2 = t2
        .heap()
        .materialize()
        .ok_or(ClassError::SymbolicHeapUnsupported)?;
    let core = t1.core();
    let funcs = function_symbols(t2.base(), t1.base());
    let mut excluded = BTreeSet::new();
    for iota in &upsilon2 {
        let options: Vec<Vec<Symbol>> = iota
            .symbols()
            .iter()
            .map(|s| {
                if core.contains(s) {
                    vec![s.clone()]
                } else {
                    funcs.iter().cloned().collect()
                }
            })
            .collect();
        let mut zetas = BTreeSet::new();
        expand(&options, &mut Vec::new(), &mut zetas);
        for zeta in zetas {
            let evaluated: Token = zeta
                .symbols()
                .iter()
                .zip(iota.symbols())
                .map(|(z, i)| match z.as_fn() {
                    Some(g) => g[i].clone(),
                    None => z.clone(),
                })
                .collect();
            if !t1.contains(&evaluated) {
                excluded.insert(zeta);
            }
        }
    }
    let heap = Heap::difference(
        Heap::Full(funcs.union(core).cloned().collect()),
        Heap::Finite(excluded),
    );
    mk_class(
        format!("{}<{}", t1.name(), t2.name()),
        funcs,
        core.clone(),
        heap,
    )
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Retag {
    Lift(BTreeSet<Symbol>),
    AbsLift(BTreeSet<Symbol>),
    Release(BTreeSet<Symbol>),
    Rename(SymbolMap),
}

fn require_subset(s: &BTreeSet<Symbol>, of: &BTreeSet<Symbol>) -> Result<(), ClassError> {
    match s.iter().find(|x| !of.contains(x)) {
        Some(x) => Err(ClassError::NotASubset(x.clone())),
        None => Ok(()),
    }
}

/// The copy of a lifted base symbol in the core.
pub fn lifted(x: &Symbol) -> Symbol {
    Symbol::tag("lift", x.clone())
}

pub fn retag(kind: &Retag, t: &TokenClass) -> Result<TokenClass, ClassError> {
    match kind {
        Retag::Lift(s) => {
            require_subset(s, t.base())?;
            let base = t.base().difference(s).cloned().collect();
            let core = t.core().union(s).cloned().collect();
            mk_class(format!("lift({})", t.name()), base, core, t.heap().clone())
        }
        Retag::AbsLift(s) => {
            require_subset(s, t.base())?;
            let mut core = t.core().clone();
            core.extend(s.iter().map(lifted));
            let links = s.iter().map(|x| Token(vec![lifted(x), x.clone()]));
            let heap = Heap::union(t.heap().clone(), Heap::finite(links));
            mk_class(
                format!("abslift({})", t.name()),
                t.base().clone(),
                core,
                heap,
            )
        }
        Retag::Release(s) => {
            require_subset(s, t.core())?;
            let base = t.base().union(s).cloned().collect();
            let core = t.core().difference(s).cloned().collect();
            mk_class(
                format!("release({})", t.name()),
                base,
                core,
                t.heap().clone(),
            )
        }
        Retag::Rename(alpha) => {
            let keys: BTreeSet<Symbol> = alpha.keys().cloned().collect();
            require_subset(&keys, t.core())?;
            let mut total = extend_with_core(&SymbolMap::new(), t.core());
            total.extend(alpha.iter().map(|(k, v)| (k.clone(), v.clone())));
            let mut seen = BTreeSet::new();
            if let Some(dup) = total.values().find(|v| !seen.insert(*v)) {
                return Err(ClassError::NotInjective(dup.clone()));
            }
            let core: BTreeSet<Symbol> = total.values().cloned().collect();
            let mut m = total;
            m.extend(t.base().iter().map(|b| (b.clone(), b.clone())));
            let heap = rename_heap(t.heap(), &m);
            mk_class(
                format!("rename({})", t.name()),
                t.base().clone(),
                core,
                heap,
            )
        }
    }
}

fn rename_heap(h: &Heap, m: &SymbolMap) -> Heap {
    match h.materialize() {
        Some(tokens) => Heap::Finite(tokens.iter().filter_map(|w| w.map(m)).collect()),
        None => Heap::image_bij(m.clone(), h.clone()),
    }
}

/// `∇∅T` with markers at index `i`.
fn power_forget_at(t: &TokenClass, i: u32) -> Result<TokenClass, ClassError> {
    let forgot = mk_class(t.name(), t.base().clone(), t.core().clone(), Heap::empty())?;
    power_at(&forgot, i)
}

/// `⇌f : ∇∅T2 → ∇∅T1`, sending subsets to preimages and everything else to `e`.
pub fn reversing(f: &TokenMap) -> Result<TokenMap, ClassError> {
    let i = fresh_index(&[f.src(), f.dst()], &POWER_KINDS);
    let src = power_forget_at(f.dst(), i)?;
    let dst = power_forget_at(f.src(), i)?;
    let e = Symbol::indexed_marker(MarkerKind::E, i);
    let f0 = src
        .base()
        .iter()
        .map(|y| {
            let img = match y.as_subset() {
                Some(ys) => Symbol::Subset(preimage_set(f.f0(), ys)),
                None => e.clone(),
            };
            (y.clone(), img)
        })
        .collect();
    mk_map(&src, &dst, f0)
}

/// `T` with its core widened by the powering markers, and `∇T`; maps
/// `T → ∇T` run between these two classes.
pub fn powering_pair(t: &TokenClass) -> Result<(TokenClass, TokenClass), ClassError> {
    let p = powering(t)?;
    Ok((t.with_core(p.core().clone())?, p))
}

/// `⋊(f, T')` for `f : T → ∇T`: the image of `T'` when every `x` satisfies
/// `x ∈ f(x)` or `x = f(x)`, otherwise the image of `∅T'`.
pub fn generalizing(f: &TokenMap, t_prime: &TokenClass) -> Result<TokenClass, ClassError> {
    let sub = if t_prime.core() == f.src().core() {
        t_prime.clone()
    } else {
        t_prime.with_core(f.src().core().clone())?
    };
    match subclass_verdict(&sub, f.src(), DEFAULT_BOUND)? {
        Verdict::Holds => {}
        Verdict::Fails(w) => return Err(ClassError::NotASubclass(w)),
        Verdict::Undecided(b) => return Err(ClassError::UndecidedContainment(b)),
    }
    let keeps = f
        .f0()
        .iter()
        .all(|(x, y)| x == y || y.as_subset().is_some_and(|s| s.contains(x)));
    let base: BTreeSet<Symbol> = sub.base().iter().map(|x| f.f0()[x].clone()).collect();
    let heap = if keeps {
        let tokens = sub
            .heap()
            .materialize()
            .ok_or(ClassError::SymbolicHeapUnsupported)?;
        let ext = f.extended();
        Heap::Finite(tokens.iter().filter_map(|w| w.map(&ext)).collect())
    } else {
        Heap::empty()
    };
    mk_class(
        format!("gen({})", t_prime.name()),
        base,
        f.dst().core().clone(),
        heap,
    )
}

/// The witness for a failed generalizing guard, if any.
pub fn generalizing_guard(f: &TokenMap) -> Option<Witness> {
    f.f0()
        .iter()
        .find(|(x, y)| !(x == y || y.as_subset().is_some_and(|s| s.contains(*x))))
        .map(|(x, _)| Witness::Symbol(x.clone()))
}

/// Preimage of a subset along a base function.
pub fn preimage_set(f0: &SymbolMap, ys: &BTreeSet<Symbol>) -> BTreeSet<Symbol> {
    f0.iter()
        .filter(|(_, v)| ys.contains(v))
        .map(|(k, _)| k.clone())
        .collect()
}
