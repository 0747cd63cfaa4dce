//! Brute-force verification of universal properties and isomorphisms over
//! finite test families.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::class::{hom_enumerate, mk_class, mk_map, mk_map_bounded, TokenClass, TokenMap};
use crate::heap::Heap;
use crate::limit::{Diagram, Limit};
use crate::structure::{product, Coproduct, Exponential, Product};
use crate::symbol::{Symbol, SymbolMap};
use crate::token::{words, Token};
use crate::verdict::{Verdict, Witness};

/// Default cap on the number of classes in a generated family.
pub const DEFAULT_FAMILY_CAP: usize = 4096;

/// The test objects over which universal properties are checked.
#[derive(Clone, Debug)]
pub struct TestFamily {
    pub classes: Vec<TokenClass>,
    pub max_base: usize,
    pub max_token_len: usize,
    pub max_heap: usize,
}

fn family_tokens(base: &BTreeSet<Symbol>, core: &BTreeSet<Symbol>, max_len: usize) -> Vec<Token> {
    let alpha: BTreeSet<Symbol> = base.union(core).cloned().collect();
    (1..=max_len).flat_map(|n| words(&alpha, n)).collect()
}

fn family_base(n: usize) -> BTreeSet<Symbol> {
    (1..=n).map(|i| Symbol::atom(format!("b{i}"))).collect()
}

/// Pushes every `k`-subset of `pool` in lexicographic index order.
fn push_subsets(pool: &[Token], k: usize, cap: usize, out: &mut Vec<BTreeSet<Token>>) {
    let n = pool.len();
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if out.len() >= cap {
            return;
        }
        out.push(idx.iter().map(|&i| pool[i].clone()).collect());
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] < n - k + i {
                break;
            }
            if i == 0 {
                return;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

impl TestFamily {
    /// All classes over bases `{b1}, …, {b1,…,b_max_base}` whose finite heaps
    /// hold at most `max_heap` tokens of length `1..=max_token_len`, smallest
    /// heaps first, truncated to `cap` classes per base.
    pub fn generate(
        core: &BTreeSet<Symbol>,
        max_base: usize,
        max_token_len: usize,
        max_heap: usize,
        cap: usize,
    ) -> Self {
        let mut classes = Vec::new();
        for n in 1..=max_base {
            let base = family_base(n);
            let pool = family_tokens(&base, core, max_token_len);
            let mut heaps = Vec::new();
            for k in 0..=max_heap.min(pool.len()) {
                push_subsets(&pool, k, cap, &mut heaps);
            }
            for h in heaps {
                let name = format!("S{}", classes.len());
                classes.push(
                    mk_class(name, base.clone(), core.clone(), Heap::Finite(h))
                        .expect("family class"),
                );
            }
        }
        TestFamily {
            classes,
            max_base,
            max_token_len,
            max_heap,
        }
    }

    /// The default family: bases of at most 2 symbols, tokens of length at
    /// most 2, heaps of at most 8 tokens.
    pub fn default_for(core: &BTreeSet<Symbol>) -> Self {
        Self::generate(core, 2, 2, 8, DEFAULT_FAMILY_CAP)
    }

    /// `count` classes drawn with a seeded generator from the same scope.
    pub fn random(core: &BTreeSet<Symbol>, seed: u64, count: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (max_base, max_token_len, max_heap) = (2, 2, 8);
        let classes = (0..count)
            .map(|i| {
                let base = family_base(rng.gen_range(1..=max_base));
                let mut pool = family_tokens(&base, core, max_token_len);
                pool.shuffle(&mut rng);
                let k = rng.gen_range(0..=max_heap.min(pool.len()));
                let heap = pool.into_iter().take(k).collect();
                mk_class(format!("R{i}"), base, core.clone(), Heap::Finite(heap))
                    .expect("family class")
            })
            .collect();
        TestFamily {
            classes,
            max_base,
            max_token_len,
            max_heap,
        }
    }
}

/// A candidate universal object with its structure maps as raw base functions.
#[derive(Clone, Debug)]
pub enum Candidate {
    /// Legs from `class` to each factor.
    Product {
        class: TokenClass,
        factors: [TokenClass; 2],
        legs: [SymbolMap; 2],
    },
    /// Legs from each summand into `class`.
    Coproduct {
        class: TokenClass,
        summands: [TokenClass; 2],
        legs: [SymbolMap; 2],
    },
    /// Evaluation `product → t1` where `product` projects onto `class` and `t2`.
    Exponent {
        class: TokenClass,
        t1: TokenClass,
        t2: TokenClass,
        product: Box<Candidate>,
        eval: SymbolMap,
    },
    /// A cone over `diagram` with one leg per object.
    Limit {
        class: TokenClass,
        diagram: Diagram,
        legs: BTreeMap<String, SymbolMap>,
    },
    Terminal(TokenClass),
    Initial(TokenClass),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UniversalKind {
    Product,
    Coproduct,
    Exponent,
    Limit,
    Terminal,
    Initial,
}

impl Candidate {
    pub fn kind(&self) -> UniversalKind {
        match self {
            Candidate::Product { .. } => UniversalKind::Product,
            Candidate::Coproduct { .. } => UniversalKind::Coproduct,
            Candidate::Exponent { .. } => UniversalKind::Exponent,
            Candidate::Limit { .. } => UniversalKind::Limit,
            Candidate::Terminal(_) => UniversalKind::Terminal,
            Candidate::Initial(_) => UniversalKind::Initial,
        }
    }

    pub fn class(&self) -> &TokenClass {
        match self {
            Candidate::Product { class, .. }
            | Candidate::Coproduct { class, .. }
            | Candidate::Exponent { class, .. }
            | Candidate::Limit { class, .. }
            | Candidate::Terminal(class)
            | Candidate::Initial(class) => class,
        }
    }

    /// The same structure maps on a different object, used for corrupted
    /// negative controls.
    pub fn with_class(&self, new: TokenClass) -> Candidate {
        let mut c = self.clone();
        match &mut c {
            Candidate::Product { class, .. }
            | Candidate::Coproduct { class, .. }
            | Candidate::Exponent { class, .. }
            | Candidate::Limit { class, .. }
            | Candidate::Terminal(class)
            | Candidate::Initial(class) => *class = new,
        }
        c
    }
}

impl From<&Product> for Candidate {
    fn from(p: &Product) -> Self {
        Candidate::Product {
            class: p.class.clone(),
            factors: [p.pi1.dst().clone(), p.pi2.dst().clone()],
            legs: [p.pi1.f0().clone(), p.pi2.f0().clone()],
        }
    }
}

impl From<&Coproduct> for Candidate {
    fn from(c: &Coproduct) -> Self {
        Candidate::Coproduct {
            class: c.class.clone(),
            summands: [c.in1.src().clone(), c.in2.src().clone()],
            legs: [c.in1.f0().clone(), c.in2.f0().clone()],
        }
    }
}

impl From<&Exponential> for Candidate {
    fn from(e: &Exponential) -> Self {
        Candidate::Exponent {
            class: e.class.clone(),
            t1: e.t1.clone(),
            t2: e.t2.clone(),
            product: Box::new(Candidate::from(&e.product)),
            eval: e.eval.f0().clone(),
        }
    }
}

impl Candidate {
    pub fn from_limit(d: &Diagram, l: &Limit) -> Self {
        Candidate::Limit {
            class: l.class.clone(),
            diagram: d.clone(),
            legs: l
                .cone
                .iter()
                .map(|(k, m)| (k.clone(), m.f0().clone()))
                .collect(),
        }
    }
}

/// `g ∘ f` on base functions; `None` when some image is unassigned.
fn after(g: &SymbolMap, f: &SymbolMap) -> Option<SymbolMap> {
    f.iter()
        .map(|(k, v)| g.get(v).map(|w| (k.clone(), w.clone())))
        .collect()
}

fn validate(src: &TokenClass, dst: &TokenClass, f0: &SymbolMap) -> Result<TokenMap, Verdict> {
    mk_map(src, dst, f0.clone()).map_err(|_| Verdict::Fails(Witness::Map(f0.clone())))
}

/// Checks that every cone has exactly one mediator. `cones` are indexed by
/// leg tuples; `mediated` gives the cone induced by each mediator.
fn unique_mediation(
    cones: Vec<Vec<SymbolMap>>,
    mediators: Vec<(SymbolMap, Vec<SymbolMap>)>,
) -> Verdict {
    let mut by_cone: BTreeMap<Vec<SymbolMap>, Vec<SymbolMap>> = BTreeMap::new();
    for (m, cone) in mediators {
        by_cone.entry(cone).or_default().push(m);
    }
    for cone in cones {
        match by_cone.get(&cone).map(Vec::as_slice) {
            None | Some([]) => return Verdict::Fails(Witness::NoMediator(cone)),
            Some([_]) => {}
            Some([a, b, ..]) => return Verdict::Fails(Witness::TwoMediators(a.clone(), b.clone())),
        }
    }
    Verdict::Holds
}

fn maps_of(src: &TokenClass, dst: &TokenClass) -> Vec<SymbolMap> {
    hom_enumerate(src, dst)
        .maps
        .into_iter()
        .map(|m| m.f0().clone())
        .collect()
}

/// All cones from `s` over the diagram, as leg tuples in object-id order.
fn cones_from(s: &TokenClass, d: &Diagram) -> Vec<Vec<SymbolMap>> {
    let ids: Vec<&String> = d.objects.keys().collect();
    let homs: Vec<Vec<SymbolMap>> = ids.iter().map(|id| maps_of(s, &d.objects[*id])).collect();
    let mut out = Vec::new();
    let mut chosen: Vec<SymbolMap> = Vec::new();
    fn rec(
        i: usize,
        ids: &[&String],
        homs: &[Vec<SymbolMap>],
        d: &Diagram,
        chosen: &mut Vec<SymbolMap>,
        out: &mut Vec<Vec<SymbolMap>>,
    ) {
        if i == ids.len() {
            out.push(chosen.clone());
            return;
        }
        for c in &homs[i] {
            chosen.push(c.clone());
            let pos = |id: &String| ids.iter().position(|x| *x == id);
            let ok = d.arrows.iter().all(|a| match (pos(&a.src), pos(&a.dst)) {
                (Some(si), Some(di)) if si <= i && di <= i => {
                    after(a.map.f0(), &chosen[si]).as_ref() == Some(&chosen[di])
                }
                _ => true,
            });
            if ok {
                rec(i + 1, ids, homs, d, chosen, out);
            }
            chosen.pop();
        }
    }
    rec(0, &ids, &homs, d, &mut chosen, &mut out);
    out
}

fn verify_on(candidate: &Candidate, s: &TokenClass) -> Verdict {
    match candidate {
        Candidate::Product {
            class,
            legs,
            factors,
        } => {
            let cones = pair_cones(&maps_of(s, &factors[0]), &maps_of(s, &factors[1]));
            let meds = maps_of(s, class)
                .into_iter()
                .filter_map(|m| Some((m.clone(), vec![after(&legs[0], &m)?, after(&legs[1], &m)?])))
                .collect();
            unique_mediation(cones, meds)
        }
        Candidate::Coproduct {
            class,
            legs,
            summands,
        } => {
            let cones = pair_cones(&maps_of(&summands[0], s), &maps_of(&summands[1], s));
            let meds = maps_of(class, s)
                .into_iter()
                .filter_map(|m| Some((m.clone(), vec![after(&m, &legs[0])?, after(&m, &legs[1])?])))
                .collect();
            unique_mediation(cones, meds)
        }
        Candidate::Exponent {
            class,
            t2,
            t1,
            product: prod,
            eval,
        } => {
            let Candidate::Product {
                class: pclass,
                legs: plegs,
                ..
            } = prod.as_ref()
            else {
                return Verdict::Fails(Witness::Map(eval.clone()));
            };
            let st2 = match product(s, t2) {
                Ok(p) => p,
                Err(_) => return Verdict::Fails(Witness::Map(eval.clone())),
            };
            let index: BTreeMap<(Symbol, Symbol), Symbol> = pclass
                .base()
                .iter()
                .filter_map(|p| {
                    Some((
                        (plegs[0].get(p)?.clone(), plegs[1].get(p)?.clone()),
                        p.clone(),
                    ))
                })
                .collect();
            let cones = maps_of(&st2.class, t1)
                .into_iter()
                .map(|f| vec![f])
                .collect();
            let meds = maps_of(s, class)
                .into_iter()
                .filter_map(|g| {
                    let mut f = SymbolMap::new();
                    for st in st2.class.base() {
                        let x = &st2.pi1.f0()[st];
                        let b = &st2.pi2.f0()[st];
                        let p = index.get(&(g.get(x)?.clone(), b.clone()))?;
                        f.insert(st.clone(), eval.get(p)?.clone());
                    }
                    Some((g, vec![f]))
                })
                .collect();
            unique_mediation(cones, meds)
        }
        Candidate::Limit {
            class,
            diagram,
            legs,
        } => {
            let cones = cones_from(s, diagram);
            let meds = maps_of(s, class)
                .into_iter()
                .filter_map(|m| {
                    let cone = diagram
                        .objects
                        .keys()
                        .map(|id| after(legs.get(id)?, &m))
                        .collect::<Option<Vec<_>>>()?;
                    Some((m, cone))
                })
                .collect();
            unique_mediation(cones, meds)
        }
        Candidate::Terminal(class) => unique_mediation(
            vec![vec![]],
            maps_of(s, class).into_iter().map(|m| (m, vec![])).collect(),
        ),
        Candidate::Initial(class) => unique_mediation(
            vec![vec![]],
            maps_of(class, s).into_iter().map(|m| (m, vec![])).collect(),
        ),
    }
}

fn pair_cones(a: &[SymbolMap], b: &[SymbolMap]) -> Vec<Vec<SymbolMap>> {
    a.iter()
        .flat_map(|x| b.iter().map(move |y| vec![x.clone(), y.clone()]))
        .collect()
}

/// Validates the candidate's structure maps.
fn check_structure(candidate: &Candidate) -> Result<(), Verdict> {
    match candidate {
        Candidate::Product {
            class,
            factors,
            legs,
        } => {
            for (f, leg) in factors.iter().zip(legs) {
                validate(class, f, leg)?;
            }
        }
        Candidate::Coproduct {
            class,
            summands,
            legs,
        } => {
            for (f, leg) in summands.iter().zip(legs) {
                validate(f, class, leg)?;
            }
        }
        Candidate::Exponent {
            class,
            t1,
            t2,
            product: prod,
            eval,
        } => {
            let Candidate::Product {
                class: pclass,
                factors,
                ..
            } = prod.as_ref()
            else {
                return Err(Verdict::Fails(Witness::Map(eval.clone())));
            };
            if &factors[0] != class || &factors[1] != t2 {
                return Err(Verdict::Fails(Witness::Map(eval.clone())));
            }
            check_structure(prod)?;
            validate(pclass, t1, eval)?;
        }
        Candidate::Limit {
            class,
            diagram,
            legs,
        } => {
            for (id, obj) in &diagram.objects {
                let leg = legs.get(id).cloned().unwrap_or_default();
                validate(class, obj, &leg)?;
            }
            for a in &diagram.arrows {
                let src = legs.get(&a.src).cloned().unwrap_or_default();
                if after(a.map.f0(), &src) != Some(legs.get(&a.dst).cloned().unwrap_or_default()) {
                    return Err(Verdict::Fails(Witness::Map(src)));
                }
            }
        }
        Candidate::Terminal(_) | Candidate::Initial(_) => {}
    }
    Ok(())
}

/// Holds iff every cone from every family member has exactly one mediator.
///
/// Test objects are checked in parallel; the reported failure is the first
/// in family order.
pub fn verify_universal(candidate: &Candidate, family: &TestFamily) -> Verdict {
    if let Err(v) = check_structure(candidate) {
        return v;
    }
    family
        .classes
        .par_iter()
        .filter(|s| s.core() == candidate.class().core())
        .map(|s| verify_on(candidate, s))
        .find_map_first(|v| (!v.holds()).then_some(v))
        .unwrap_or(Verdict::Holds)
}

/// Occurrence counts keyed by (token length, position).
type Profile = BTreeMap<(usize, usize), usize>;

/// How often each symbol occurs at each (length, position) in a finite heap.
fn profiles(t: &TokenClass) -> Option<BTreeMap<Symbol, Profile>> {
    let heap = t.finite_heap()?;
    let mut out: BTreeMap<Symbol, Profile> = t
        .base()
        .iter()
        .map(|s| (s.clone(), BTreeMap::new()))
        .collect();
    for w in heap {
        for (i, s) in w.symbols().iter().enumerate() {
            if let Some(p) = out.get_mut(s) {
                *p.entry((w.len(), i)).or_default() += 1;
            }
        }
    }
    Some(out)
}

/// Searches for an isomorphism `t1 → t2`, checking heap containment both ways
/// with the given bound.
pub fn iso_witness(t1: &TokenClass, t2: &TokenClass, bound: usize) -> Option<TokenMap> {
    if t1.core() != t2.core() || t1.base().len() != t2.base().len() {
        return None;
    }
    let (p1, p2) = (profiles(t1), profiles(t2));
    let dom: Vec<&Symbol> = t1.base().iter().collect();
    let cod: Vec<&Symbol> = t2.base().iter().collect();
    let compatible = |a: &Symbol, b: &Symbol| match (&p1, &p2) {
        (Some(x), Some(y)) => x[a] == y[b],
        _ => true,
    };
    let mut used = vec![false; cod.len()];
    let mut f0 = SymbolMap::new();
    #[allow(clippy::too_many_arguments)]
    fn rec(
        i: usize,
        dom: &[&Symbol],
        cod: &[&Symbol],
        used: &mut [bool],
        f0: &mut SymbolMap,
        compatible: &dyn Fn(&Symbol, &Symbol) -> bool,
        t1: &TokenClass,
        t2: &TokenClass,
        bound: usize,
    ) -> Option<TokenMap> {
        if i == dom.len() {
            let f = mk_map_bounded(t1, t2, f0.clone(), bound).ok()?;
            let inv: SymbolMap = f0.iter().map(|(k, v)| (v.clone(), k.clone())).collect();
            mk_map_bounded(t2, t1, inv, bound).ok()?;
            return Some(f);
        }
        for j in 0..cod.len() {
            if used[j] || !compatible(dom[i], cod[j]) {
                continue;
            }
            used[j] = true;
            f0.insert(dom[i].clone(), cod[j].clone());
            if let Some(m) = rec(i + 1, dom, cod, used, f0, compatible, t1, t2, bound) {
                return Some(m);
            }
            f0.remove(dom[i]);
            used[j] = false;
        }
        None
    }
    rec(
        0,
        &dom,
        &cod,
        &mut used,
        &mut f0,
        &compatible,
        t1,
        t2,
        bound,
    )
}
