use std::collections::{BTreeMap, BTreeSet};

use crate::symbol::Symbol;

use super::algebra::{check_images, scatter_star, tmorph_apply};
use super::{TreeError, TreeTerm};

/// A t-class: alphabets plus a finite heap of treepoid elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeClass {
    base: BTreeSet<Symbol>,
    core: BTreeSet<Symbol>,
    heap: BTreeSet<TreeTerm>,
}

pub fn mk_tclass(
    base: BTreeSet<Symbol>,
    core: BTreeSet<Symbol>,
    heap: impl IntoIterator<Item = TreeTerm>,
) -> Result<TreeClass, TreeError> {
    if let Some(s) = base.intersection(&core).next() {
        return Err(TreeError::AlphabetOverlap(s.clone()));
    }
    let heap: BTreeSet<TreeTerm> = heap.into_iter().map(|t| t.normalize()).collect();
    for t in &heap {
        if !t.is_token() {
            return Err(TreeError::NotATreepoidElement(t.clone()));
        }
        if let Some(s) = t
            .leaves()
            .into_iter()
            .find(|s| !base.contains(s) && !core.contains(s))
        {
            return Err(TreeError::ForeignSymbol(s.clone()));
        }
    }
    Ok(TreeClass { base, core, heap })
}

/// The least base carrying `heap`: all leaf symbols outside the core.
pub fn base_of<'a>(
    heap: impl IntoIterator<Item = &'a TreeTerm>,
    core: &BTreeSet<Symbol>,
) -> BTreeSet<Symbol> {
    let mut out = BTreeSet::new();
    for r in heap {
        if let Ok(star) = scatter_star(r) {
            for t in star {
                if let TreeTerm::Leaf(s) = t {
                    if !core.contains(&s) {
                        out.insert(s);
                    }
                }
            }
        }
    }
    out
}

impl TreeClass {
    /// A class whose base is exactly the symbols its heap uses.
    pub fn from_heap(
        core: BTreeSet<Symbol>,
        heap: impl IntoIterator<Item = TreeTerm>,
    ) -> Result<TreeClass, TreeError> {
        let heap: Vec<TreeTerm> = heap.into_iter().collect();
        let base = base_of(&heap, &core);
        mk_tclass(base, core, heap)
    }

    pub fn base(&self) -> &BTreeSet<Symbol> {
        &self.base
    }

    pub fn core(&self) -> &BTreeSet<Symbol> {
        &self.core
    }

    pub fn heap(&self) -> &BTreeSet<TreeTerm> {
        &self.heap
    }
}

/// A t-map ⟨f₀, 1_E, p⟩.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeMap {
    src: TreeClass,
    dst: TreeClass,
    f0: BTreeMap<Symbol, TreeTerm>,
}

/// `f0` plus the identity on `core`.
pub fn extend_tree_assignment(
    f0: &BTreeMap<Symbol, TreeTerm>,
    core: &BTreeSet<Symbol>,
) -> BTreeMap<Symbol, TreeTerm> {
    let mut ext = f0.clone();
    for c in core {
        ext.insert(c.clone(), TreeTerm::Leaf(c.clone()));
    }
    ext
}

pub fn mk_tmap(
    src: &TreeClass,
    dst: &TreeClass,
    f0: BTreeMap<Symbol, TreeTerm>,
) -> Result<TreeMap, TreeError> {
    if src.core != dst.core {
        return Err(TreeError::CoreMismatch);
    }
    if let Some(s) = src.base.iter().find(|s| !f0.contains_key(s)) {
        return Err(TreeError::NotTotal(s.clone()));
    }
    check_images(&f0)?;
    for (k, v) in &f0 {
        if let TreeTerm::Leaf(s) = v {
            if dst.core.contains(s) {
                return Err(TreeError::ImageInCore(k.clone()));
            }
        }
        if let Some(s) = v
            .leaves()
            .into_iter()
            .find(|s| !dst.base.contains(s) && !dst.core.contains(s))
        {
            return Err(TreeError::ForeignSymbol(s.clone()));
        }
    }
    let ext = extend_tree_assignment(&f0, &src.core);
    for r in &src.heap {
        let img = tmorph_apply(&ext, r)?;
        if !dst.heap.contains(&img) {
            return Err(TreeError::HeapViolation(r.clone()));
        }
    }
    Ok(TreeMap {
        src: src.clone(),
        dst: dst.clone(),
        f0,
    })
}

impl TreeMap {
    pub fn src(&self) -> &TreeClass {
        &self.src
    }

    pub fn dst(&self) -> &TreeClass {
        &self.dst
    }

    pub fn f0(&self) -> &BTreeMap<Symbol, TreeTerm> {
        &self.f0
    }

    pub fn apply(&self, r: &TreeTerm) -> Result<TreeTerm, TreeError> {
        tmorph_apply(&extend_tree_assignment(&self.f0, &self.src.core), r)
    }
}

fn tag_base(r: &TreeTerm, label: &str, core: &BTreeSet<Symbol>) -> TreeTerm {
    r.map_leaves(&mut |s| {
        if core.contains(s) {
            s.clone()
        } else {
            Symbol::tag(label, s.clone())
        }
    })
}

/// Coproduct of t-classes with `L`/`R`-tagged bases.
pub fn tclass_coproduct(
    t1: &TreeClass,
    t2: &TreeClass,
) -> Result<(TreeClass, TreeMap, TreeMap), TreeError> {
    if t1.core != t2.core {
        return Err(TreeError::CoreMismatch);
    }
    let core = t1.core.clone();
    let base: BTreeSet<Symbol> = t1
        .base
        .iter()
        .map(|s| Symbol::tag("L", s.clone()))
        .chain(t2.base.iter().map(|s| Symbol::tag("R", s.clone())))
        .collect();
    let heap: BTreeSet<TreeTerm> = t1
        .heap
        .iter()
        .map(|r| tag_base(r, "L", &core))
        .chain(t2.heap.iter().map(|r| tag_base(r, "R", &core)))
        .collect();
    let sum = mk_tclass(base, core, heap)?;
    let inj = |t: &TreeClass, label: &str| {
        let f0 = t
            .base
            .iter()
            .map(|s| (s.clone(), TreeTerm::Leaf(Symbol::tag(label, s.clone()))))
            .collect();
        mk_tmap(t, &sum, f0)
    };
    let in1 = inj(t1, "L")?;
    let in2 = inj(t2, "R")?;
    Ok((sum, in1, in2))
}

fn same_core(a: &TreeClass, b: &TreeClass) -> Result<(), TreeError> {
    if a.core != b.core {
        return Err(TreeError::CoreMismatch);
    }
    Ok(())
}

pub fn tmerge(a: &TreeClass, b: &TreeClass) -> Result<TreeClass, TreeError> {
    same_core(a, b)?;
    mk_tclass(&a.base | &b.base, a.core.clone(), &a.heap | &b.heap)
}

pub fn tmeet(a: &TreeClass, b: &TreeClass) -> Result<TreeClass, TreeError> {
    same_core(a, b)?;
    mk_tclass(&a.base & &b.base, a.core.clone(), &a.heap & &b.heap)
}

pub fn tforget(a: &TreeClass) -> TreeClass {
    TreeClass {
        base: a.base.clone(),
        core: a.core.clone(),
        heap: BTreeSet::new(),
    }
}

/// The first class with the second one's heap removed.
pub fn tdelete(a: &TreeClass, b: &TreeClass) -> Result<TreeClass, TreeError> {
    same_core(a, b)?;
    mk_tclass(a.base.clone(), a.core.clone(), &a.heap - &b.heap)
}
