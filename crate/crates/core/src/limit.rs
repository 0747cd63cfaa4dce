//! Finite diagrams and their limits.

use std::collections::{BTreeMap, BTreeSet};

use crate::class::{extend_with_core, mk_class, mk_map, ClassError, TokenClass, TokenMap};
use crate::heap::Heap;
use crate::symbol::{Symbol, SymbolMap};

#[derive(Clone, Debug)]
pub struct Arrow {
    pub src: String,
    pub dst: String,
    pub map: TokenMap,
}

/// A finite diagram of classes over one core.
#[derive(Clone, Debug)]
pub struct Diagram {
    pub core: BTreeSet<Symbol>,
    pub objects: BTreeMap<String, TokenClass>,
    pub arrows: Vec<Arrow>,
}

impl Diagram {
    pub fn new(core: BTreeSet<Symbol>) -> Self {
        Diagram {
            core,
            objects: BTreeMap::new(),
            arrows: Vec::new(),
        }
    }

    pub fn object(mut self, id: &str, class: &TokenClass) -> Self {
        self.objects.insert(id.to_string(), class.clone());
        self
    }

    pub fn arrow(mut self, src: &str, dst: &str, map: &TokenMap) -> Self {
        self.arrows.push(Arrow {
            src: src.to_string(),
            dst: dst.to_string(),
            map: map.clone(),
        });
        self
    }

    /// Objects `A`, `B` and no arrows.
    pub fn discrete(a: &TokenClass, b: &TokenClass) -> Self {
        Diagram::new(a.core().clone()).object("A", a).object("B", b)
    }

    /// Parallel pair `f, g : A → B`.
    pub fn equalizer(f: &TokenMap, g: &TokenMap) -> Self {
        Diagram::new(f.src().core().clone())
            .object("A", f.src())
            .object("B", f.dst())
            .arrow("A", "B", f)
            .arrow("A", "B", g)
    }

    /// Cospan `f : A → C ← B : g`.
    pub fn cospan(f: &TokenMap, g: &TokenMap) -> Self {
        Diagram::new(f.src().core().clone())
            .object("A", f.src())
            .object("B", g.src())
            .object("C", f.dst())
            .arrow("A", "C", f)
            .arrow("B", "C", g)
    }

    fn validate(&self) -> Result<(), ClassError> {
        for c in self.objects.values() {
            if *c.core() != self.core {
                return Err(ClassError::CoreMismatch);
            }
        }
        for a in &self.arrows {
            let s = self
                .objects
                .get(&a.src)
                .ok_or_else(|| ClassError::UnknownObject(a.src.clone()))?;
            let d = self
                .objects
                .get(&a.dst)
                .ok_or_else(|| ClassError::UnknownObject(a.dst.clone()))?;
            if a.map.src() != s || a.map.dst() != d {
                return Err(ClassError::EndpointMismatch);
            }
        }
        Ok(())
    }
}

/// A limit class with its cone.
#[derive(Clone, Debug)]
pub struct Limit {
    pub class: TokenClass,
    pub cone: BTreeMap<String, TokenMap>,
}

/// The symbol `{id ↦ x}` standing for a commuting tuple.
pub fn tuple_symbol(assignment: &BTreeMap<String, Symbol>) -> Symbol {
    Symbol::Fn(
        assignment
            .iter()
            .map(|(k, v)| (Symbol::atom(k.clone()), v.clone()))
            .collect(),
    )
}

pub fn limit(d: &Diagram) -> Result<Limit, ClassError> {
    d.validate()?;
    let ids: Vec<&String> = d.objects.keys().collect();
    let mut tuples = Vec::new();
    let mut current = BTreeMap::new();
    commuting_tuples(d, &ids, 0, &mut current, &mut tuples);

    let base: BTreeSet<Symbol> = tuples.iter().map(tuple_symbol).collect();
    let mut projections: BTreeMap<String, SymbolMap> = BTreeMap::new();
    for t in &tuples {
        let s = tuple_symbol(t);
        for (id, x) in t {
            projections
                .entry(id.clone())
                .or_default()
                .insert(s.clone(), x.clone());
        }
    }
    let mut heap = Heap::Full(base.union(&d.core).cloned().collect());
    for (id, class) in &d.objects {
        let v = projections.remove(id).unwrap_or_default();
        heap = Heap::intersect(
            heap,
            Heap::preimage(extend_with_core(&v, &d.core), class.heap().clone()),
        );
        projections.insert(id.clone(), v);
    }
    let class = mk_class("limit", base, d.core.clone(), heap)?;
    let mut cone = BTreeMap::new();
    for (id, target) in &d.objects {
        cone.insert(id.clone(), mk_map(&class, target, projections[id].clone())?);
    }
    Ok(Limit { class, cone })
}

fn commuting_tuples(
    d: &Diagram,
    ids: &[&String],
    depth: usize,
    current: &mut BTreeMap<String, Symbol>,
    out: &mut Vec<BTreeMap<String, Symbol>>,
) {
    for a in &d.arrows {
        if let (Some(x), Some(y)) = (current.get(&a.src), current.get(&a.dst)) {
            if a.map.f0().get(x) != Some(y) {
                return;
            }
        }
    }
    if depth == ids.len() {
        out.push(current.clone());
        return;
    }
    let id = ids[depth];
    for x in d.objects[id].base() {
        current.insert(id.clone(), x.clone());
        commuting_tuples(d, ids, depth + 1, current, out);
        current.remove(id);
    }
}
