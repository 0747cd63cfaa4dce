//! Reification of tree tokens and t-classes as flat token classes.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::class::{hom_enumerate, mk_class, mk_map, ClassError, TokenClass, TokenMap};
use crate::heap::Heap;
use crate::symbol::{MarkerKind, Symbol};
use crate::token::Token;
use crate::tree::{
    extend_tree_assignment, mk_tmap, scatter_star, tmorph_apply, TreeClass, TreeError, TreeMap,
    TreeTerm,
};

/// Default depth bound on t-map images.
pub const DEFAULT_IMAGE_DEPTH: usize = 2;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ReifyError {
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Class(#[from] ClassError),
}

/// The reification marker `Ⅎ`.
pub fn reify_marker() -> Symbol {
    Symbol::marker(MarkerKind::F)
}

fn children(r: &TreeTerm) -> Vec<Symbol> {
    match r {
        TreeTerm::Amp(inner) => inner
            .factors()
            .iter()
            .cloned()
            .map(Symbol::from_term)
            .collect(),
        _ => Vec::new(),
    }
}

fn require_token(r: &TreeTerm) -> Result<(), TreeError> {
    if matches!(r, TreeTerm::Eps | TreeTerm::Concat(_)) {
        return Err(TreeError::NotAToken(r.clone()));
    }
    Ok(())
}

/// `∂(r)`: `{(ε,r)}` for a leaf, `{(ε,r), (x₁,…,xₙ)}` for `r = (x₁,…,xₙ)`.
pub fn self_nesting(r: &TreeTerm) -> Result<BTreeSet<Token>, TreeError> {
    require_token(r)?;
    let mut out = BTreeSet::new();
    out.insert(Token(vec![Symbol::eps(), Symbol::from_term(r.clone())]));
    if !r.is_leaf() {
        out.insert(Token(children(r)));
    }
    Ok(out)
}

/// The adjacency token `(ε, p, x₁, …, xₙ)` of a compound subtree.
pub fn adjacency(p: &TreeTerm) -> Token {
    let mut w = vec![Symbol::eps(), Symbol::from_term(p.clone())];
    w.extend(children(p));
    Token(w)
}

fn reified_parts(
    r: &TreeTerm,
    core: &BTreeSet<Symbol>,
) -> Result<(BTreeSet<Symbol>, BTreeSet<Token>), TreeError> {
    let star = scatter_star(r)?;
    let base = star
        .iter()
        .cloned()
        .map(Symbol::from_term)
        .filter(|s| !core.contains(s))
        .collect();
    let mut heap: BTreeSet<Token> = star
        .iter()
        .filter(|p| !p.is_leaf())
        .map(adjacency)
        .collect();
    heap.extend(self_nesting(r)?);
    Ok((base, heap))
}

fn reified_core(
    core: &BTreeSet<Symbol>,
    alphabet: &BTreeSet<Symbol>,
) -> Result<BTreeSet<Symbol>, ClassError> {
    for m in [Symbol::eps(), reify_marker()] {
        if alphabet.contains(&m) {
            return Err(ClassError::MarkerCollision(m));
        }
    }
    let mut out = core.clone();
    out.insert(Symbol::eps());
    out.insert(reify_marker());
    Ok(out)
}

/// `Ⅎ(r)` over the given alphabets.
pub fn reify_token(
    r: &TreeTerm,
    base: &BTreeSet<Symbol>,
    core: &BTreeSet<Symbol>,
) -> Result<TokenClass, ReifyError> {
    let alphabet = base.union(core).cloned().collect();
    let ext = reified_core(core, &alphabet)?;
    let (b, h) = reified_parts(r, core)?;
    Ok(mk_class("reified", b, ext, Heap::Finite(h))?)
}

/// `Ⅎ(T)`: the union of the reifications of all heap terms.
pub fn reify_class(t: &TreeClass) -> Result<TokenClass, ReifyError> {
    let alphabet = t.base().union(t.core()).cloned().collect();
    let ext = reified_core(t.core(), &alphabet)?;
    let mut base = BTreeSet::new();
    let mut heap = BTreeSet::new();
    for r in t.heap() {
        let (b, h) = reified_parts(r, t.core())?;
        base.extend(b);
        heap.extend(h);
    }
    Ok(mk_class("reified", base, ext, Heap::Finite(heap))?)
}

/// `Ⅎ(f)`: every subtree symbol goes to its image under `tmorph(f₀ ∐ 1_E)`.
pub fn reify_map(f: &TreeMap) -> Result<TokenMap, ReifyError> {
    reify_map_between(f, &reify_class(f.src())?, &reify_class(f.dst())?)
}

fn reify_map_between(
    f: &TreeMap,
    src: &TokenClass,
    dst: &TokenClass,
) -> Result<TokenMap, ReifyError> {
    let ext = extend_tree_assignment(f.f0(), f.src().core());
    let mut f0 = BTreeMap::new();
    for x in src.base() {
        f0.insert(
            x.clone(),
            Symbol::from_term(tmorph_apply(&ext, &x.to_term())?),
        );
    }
    Ok(mk_map(src, dst, f0)?)
}

/// Applies a reified map to a tree term by way of its symbol.
pub fn apply_reified(m: &TokenMap, r: &TreeTerm) -> Option<TreeTerm> {
    m.apply_symbol(&Symbol::from_term(r.clone()))
        .map(|s| s.to_term())
}

/// Every t-map `t1 → t2` whose leaf images have depth at most `depth`.
///
/// Candidate images are the subtrees of `t2`'s heap terms and its base
/// symbols. Partial assignments are abandoned once some heap term of `t1`
/// must map to a term longer than every heap term of `t2`.
pub fn tmap_enumerate(t1: &TreeClass, t2: &TreeClass, depth: usize) -> Vec<TreeMap> {
    if t1.core() != t2.core() {
        return Vec::new();
    }
    let mut cands: BTreeSet<TreeTerm> = t2.base().iter().cloned().map(TreeTerm::Leaf).collect();
    for r in t2.heap() {
        if let Ok(star) = scatter_star(r) {
            cands.extend(
                star.into_iter()
                    .filter(|p| p.depth() <= depth && *p != TreeTerm::Eps),
            );
        }
    }
    cands.retain(|p| !matches!(p, TreeTerm::Leaf(s) if t2.core().contains(s)));
    let search = TmapSearch {
        t1,
        t2,
        dom: t1.base().iter().collect(),
        cands: cands.into_iter().collect(),
        occurrences: t1
            .heap()
            .iter()
            .map(|r| {
                let mut occ: BTreeMap<&Symbol, usize> = BTreeMap::new();
                for s in r.leaves() {
                    *occ.entry(s).or_default() += 1;
                }
                occ
            })
            .collect(),
        max_len: t2.heap().iter().map(TreeTerm::length).max().unwrap_or(0),
    };
    let mut out = Vec::new();
    search.extend(&mut BTreeMap::new(), &mut out);
    out
}

struct TmapSearch<'a> {
    t1: &'a TreeClass,
    t2: &'a TreeClass,
    dom: Vec<&'a Symbol>,
    cands: Vec<TreeTerm>,
    /// Leaf occurrence counts per heap term of `t1`.
    occurrences: Vec<BTreeMap<&'a Symbol, usize>>,
    max_len: usize,
}

impl TmapSearch<'_> {
    fn too_long(&self, f0: &BTreeMap<Symbol, TreeTerm>) -> bool {
        self.occurrences.iter().any(|occ| {
            let least: usize = occ
                .iter()
                .map(|(s, n)| n * f0.get(*s).map_or(1, TreeTerm::length))
                .sum();
            least > self.max_len
        })
    }

    fn extend(&self, f0: &mut BTreeMap<Symbol, TreeTerm>, out: &mut Vec<TreeMap>) {
        let Some(x) = self.dom.get(f0.len()) else {
            if let Ok(m) = mk_tmap(self.t1, self.t2, f0.clone()) {
                out.push(m);
            }
            return;
        };
        for c in &self.cands {
            f0.insert((*x).clone(), c.clone());
            if !self.too_long(f0) {
                self.extend(f0, out);
            }
            f0.remove(*x);
        }
    }
}

/// The t-map obtained by restricting a p-map between reifications to the
/// base of `t1`.
pub fn restrict_pmap(m: &TokenMap, t1: &TreeClass, t2: &TreeClass) -> Result<TreeMap, ReifyError> {
    let mut f0 = BTreeMap::new();
    for x in t1.base() {
        let img = m
            .f0()
            .get(x)
            .ok_or_else(|| TreeError::Unassigned(x.clone()))?;
        f0.insert(x.clone(), img.to_term());
    }
    Ok(mk_tmap(t1, t2, f0)?)
}

/// Comparison of t-maps with p-maps between reifications.
#[derive(Clone, Debug)]
pub struct HomCorrespondence {
    pub depth: usize,
    pub tmaps: Vec<TreeMap>,
    pub pmaps: Vec<TokenMap>,
    /// p-maps whose leaf images have depth at most `depth`.
    pub pmaps_within_bound: usize,
    /// Every t-map reifies to a valid p-map in the enumerated hom-set.
    pub reified_ok: bool,
    /// Every p-map restricts to a t-map whose reification is that p-map.
    pub restrict_ok: bool,
    /// `f(r) = Ⅎ(f)(r)` for every t-map and heap term.
    pub agree_on_heap: bool,
    /// At most one p-map, checked when both classes have one heap term.
    pub singleton_unique: Option<bool>,
}

impl HomCorrespondence {
    pub fn holds(&self) -> bool {
        self.tmaps.len() == self.pmaps_within_bound
            && self.reified_ok
            && self.restrict_ok
            && self.agree_on_heap
            && self.singleton_unique != Some(false)
    }
}

pub fn hom_correspondence(
    t1: &TreeClass,
    t2: &TreeClass,
    depth: usize,
) -> Result<HomCorrespondence, ReifyError> {
    hom_correspondence_reified((t1, &reify_class(t1)?), (t2, &reify_class(t2)?), depth)
}

/// [`hom_correspondence`] with the reifications `Ⅎ(t1)` and `Ⅎ(t2)` supplied.
pub fn hom_correspondence_reified(
    (t1, r1): (&TreeClass, &TokenClass),
    (t2, r2): (&TreeClass, &TokenClass),
    depth: usize,
) -> Result<HomCorrespondence, ReifyError> {
    let tmaps = tmap_enumerate(t1, t2, depth);
    let pmaps = hom_enumerate(r1, r2).maps;

    let mut reified_ok = true;
    let mut agree_on_heap = true;
    for g in &tmaps {
        match reify_map_between(g, r1, r2) {
            Ok(m) if pmaps.contains(&m) => {
                for r in t1.heap() {
                    if g.apply(r).ok() != apply_reified(&m, r) {
                        agree_on_heap = false;
                    }
                }
            }
            _ => reified_ok = false,
        }
    }
    let mut restrict_ok = true;
    let mut within = 0;
    for m in &pmaps {
        match restrict_pmap(m, t1, t2) {
            Ok(g) => {
                if reify_map_between(&g, r1, r2).ok().as_ref() != Some(m) {
                    restrict_ok = false;
                }
                if g.f0().values().all(|v| v.depth() <= depth) {
                    within += 1;
                }
            }
            Err(_) => restrict_ok = false,
        }
    }
    let singleton_unique =
        (t1.heap().len() == 1 && t2.heap().len() == 1).then_some(pmaps.len() <= 1);
    Ok(HomCorrespondence {
        depth,
        tmaps,
        pmaps,
        pmaps_within_bound: within,
        reified_ok,
        restrict_ok,
        agree_on_heap,
        singleton_unique,
    })
}
