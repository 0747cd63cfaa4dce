//! Constant classes, binary products and coproducts, and exponents.

use std::collections::{BTreeMap, BTreeSet};

use crate::class::{extend_with_core, mk_class, mk_map, ClassError, TokenClass, TokenMap};
use crate::heap::Heap;
use crate::symbol::{Symbol, SymbolMap};
use crate::token::Token;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Constant {
    Initial,
    Terminal,
    Truth,
}

pub fn constant_class(kind: Constant, core: &BTreeSet<Symbol>) -> TokenClass {
    let (name, base): (&str, BTreeSet<Symbol>) = match kind {
        Constant::Initial => ("initial", BTreeSet::new()),
        Constant::Terminal => ("terminal", [Symbol::zero()].into_iter().collect()),
        Constant::Truth => (
            "truth",
            [Symbol::zero(), Symbol::one()].into_iter().collect(),
        ),
    };
    let heap = match kind {
        Constant::Initial => Heap::empty(),
        _ => Heap::Full(base.union(core).cloned().collect()),
    };
    mk_class(name, base, core.clone(), heap).expect("constant classes are well formed")
}

pub(crate) fn same_core(a: &TokenClass, b: &TokenClass) -> Result<(), ClassError> {
    if a.core() != b.core() {
        return Err(ClassError::CoreMismatch);
    }
    Ok(())
}

/// A product together with its projections.
#[derive(Clone, Debug)]
pub struct Product {
    pub class: TokenClass,
    pub pi1: TokenMap,
    pub pi2: TokenMap,
}

pub fn product(t1: &TokenClass, t2: &TokenClass) -> Result<Product, ClassError> {
    same_core(t1, t2)?;
    let mut base = BTreeSet::new();
    let mut p1 = SymbolMap::new();
    let mut p2 = SymbolMap::new();
    for x in t1.base() {
        for y in t2.base() {
            let xy = Symbol::pair(x.clone(), y.clone());
            p1.insert(xy.clone(), x.clone());
            p2.insert(xy.clone(), y.clone());
            base.insert(xy);
        }
    }
    let heap = Heap::intersect(
        Heap::preimage(extend_with_core(&p1, t1.core()), t1.heap().clone()),
        Heap::preimage(extend_with_core(&p2, t1.core()), t2.heap().clone()),
    );
    let name = format!("{}*{}", t1.name(), t2.name());
    let class = mk_class(name, base, t1.core().clone(), heap)?;
    let pi1 = mk_map(&class, t1, p1)?;
    let pi2 = mk_map(&class, t2, p2)?;
    Ok(Product { class, pi1, pi2 })
}

/// `⟨f, g⟩ : S → T1⊗T2` for maps `f : S → T1`, `g : S → T2`.
pub fn pairing(p: &Product, f: &TokenMap, g: &TokenMap) -> Result<TokenMap, ClassError> {
    if f.src() != g.src() || f.dst() != p.pi1.dst() || g.dst() != p.pi2.dst() {
        return Err(ClassError::EndpointMismatch);
    }
    let f0 = f
        .f0()
        .iter()
        .map(|(s, x)| (s.clone(), Symbol::pair(x.clone(), g.f0()[s].clone())))
        .collect();
    mk_map(f.src(), &p.class, f0)
}

/// `f × g : A⊗B → C⊗D`.
pub fn product_map(f: &TokenMap, g: &TokenMap) -> Result<TokenMap, ClassError> {
    let src = product(f.src(), g.src())?;
    let dst = product(f.dst(), g.dst())?;
    let mut f0 = SymbolMap::new();
    for (a, c) in f.f0() {
        for (b, d) in g.f0() {
            f0.insert(
                Symbol::pair(a.clone(), b.clone()),
                Symbol::pair(c.clone(), d.clone()),
            );
        }
    }
    mk_map(&src.class, &dst.class, f0)
}

/// A coproduct together with its injections.
#[derive(Clone, Debug)]
pub struct Coproduct {
    pub class: TokenClass,
    pub in1: TokenMap,
    pub in2: TokenMap,
}

pub fn coproduct(t1: &TokenClass, t2: &TokenClass) -> Result<Coproduct, ClassError> {
    same_core(t1, t2)?;
    let j1: SymbolMap = t1
        .base()
        .iter()
        .map(|x| (x.clone(), Symbol::tag("L", x.clone())))
        .collect();
    let j2: SymbolMap = t2
        .base()
        .iter()
        .map(|y| (y.clone(), Symbol::tag("R", y.clone())))
        .collect();
    let base: BTreeSet<Symbol> = j1.values().chain(j2.values()).cloned().collect();
    let heap = Heap::union(
        Heap::image_bij(extend_with_core(&j1, t1.core()), t1.heap().clone()),
        Heap::image_bij(extend_with_core(&j2, t1.core()), t2.heap().clone()),
    );
    let name = format!("{}+{}", t1.name(), t2.name());
    let class = mk_class(name, base, t1.core().clone(), heap)?;
    let in1 = mk_map(t1, &class, j1)?;
    let in2 = mk_map(t2, &class, j2)?;
    Ok(Coproduct { class, in1, in2 })
}

/// `[f, g] : T1∐T2 → S`.
pub fn copairing(c: &Coproduct, f: &TokenMap, g: &TokenMap) -> Result<TokenMap, ClassError> {
    if f.dst() != g.dst() || f.src() != c.in1.src() || g.src() != c.in2.src() {
        return Err(ClassError::EndpointMismatch);
    }
    let mut f0 = SymbolMap::new();
    for (x, y) in f.f0() {
        f0.insert(Symbol::tag("L", x.clone()), y.clone());
    }
    for (x, y) in g.f0() {
        f0.insert(Symbol::tag("R", x.clone()), y.clone());
    }
    mk_map(&c.class, f.dst(), f0)
}

/// All functions `dom → cod` as `Fn` symbols, in canonical order.
pub fn function_symbols(dom: &BTreeSet<Symbol>, cod: &BTreeSet<Symbol>) -> BTreeSet<Symbol> {
    let dom: Vec<&Symbol> = dom.iter().collect();
    let cod: Vec<&Symbol> = cod.iter().collect();
    let mut out = BTreeSet::new();
    if cod.is_empty() && !dom.is_empty() {
        return out;
    }
    let mut idx = vec![0usize; dom.len()];
    loop {
        let g: BTreeMap<Symbol, Symbol> = dom
            .iter()
            .zip(&idx)
            .map(|(d, &i)| ((*d).clone(), cod[i].clone()))
            .collect();
        out.insert(Symbol::Fn(g));
        let mut pos = idx.len();
        loop {
            if pos == 0 {
                return out;
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

/// The exponent `T1 ◁ T2` with its evaluation data.
#[derive(Clone, Debug)]
pub struct Exponential {
    pub class: TokenClass,
    pub t1: TokenClass,
    pub t2: TokenClass,
    /// `class ⊗ T2`, the domain of evaluation.
    pub product: Product,
    pub eval: TokenMap,
    /// Tokens removed from the full tokenoid over the function symbols.
    pub excluded: BTreeSet<Token>,
}

pub fn exponent(t1: &TokenClass, t2: &TokenClass) -> Result<Exponential, ClassError> {
    same_core(t1, t2)?;
    let upsilon2 = t2
        .heap()
        .materialize()
        .ok_or(ClassError::SymbolicExponentUnsupported)?;
    let core = t1.core().clone();
    let funcs = function_symbols(t2.base(), t1.base());

    let all_funcs = mk_class(
        "functions",
        funcs.clone(),
        core.clone(),
        Heap::Full(funcs.union(&core).cloned().collect()),
    )?;
    let candidates = product(&all_funcs, &t2.with_heap(Heap::Finite(upsilon2))?)?;
    let mut evl = SymbolMap::new();
    let mut pm = SymbolMap::new();
    for phi in &funcs {
        let graph = phi.as_fn().expect("function symbol");
        for b in t2.base() {
            let pair = Symbol::pair(phi.clone(), b.clone());
            evl.insert(pair.clone(), graph[b].clone());
            pm.insert(pair, phi.clone());
        }
    }
    let bad = Heap::difference(
        candidates.class.heap().clone(),
        Heap::preimage(extend_with_core(&evl, &core), t1.heap().clone()),
    );
    let pm = extend_with_core(&pm, &core);
    let excluded: BTreeSet<Token> = bad
        .materialize()
        .expect("finite candidate set")
        .iter()
        .map(|w| w.map(&pm).expect("projection is total"))
        .collect();

    let heap = Heap::difference(
        Heap::Full(funcs.union(&core).cloned().collect()),
        Heap::Finite(excluded.clone()),
    );
    let name = format!("{}^{}", t1.name(), t2.name());
    let class = mk_class(name, funcs, core, heap)?;
    let prod = product(&class, t2)?;
    let eval = mk_map(&prod.class, t1, evl)?;
    Ok(Exponential {
        class,
        t1: t1.clone(),
        t2: t2.clone(),
        product: prod,
        eval,
        excluded,
    })
}

impl TokenClass {
    /// The same alphabets with another heap.
    pub fn with_heap(&self, heap: Heap) -> Result<TokenClass, ClassError> {
        mk_class(self.name(), self.base().clone(), self.core().clone(), heap)
    }
}

impl Exponential {
    /// Transpose of `f : S⊗T2 → T1`.
    pub fn curry(&self, s: &TokenClass, f: &TokenMap) -> Result<TokenMap, ClassError> {
        let p = product(s, &self.t2)?;
        if *f.src() != p.class || *f.dst() != self.t1 {
            return Err(ClassError::EndpointMismatch);
        }
        let f0 = s
            .base()
            .iter()
            .map(|x| {
                let graph = self
                    .t2
                    .base()
                    .iter()
                    .map(|b| {
                        (
                            b.clone(),
                            f.f0()[&Symbol::pair(x.clone(), b.clone())].clone(),
                        )
                    })
                    .collect();
                (x.clone(), Symbol::Fn(graph))
            })
            .collect();
        mk_map(s, &self.class, f0)
    }

    /// Inverse transpose of `g : S → T1◁T2`.
    pub fn uncurry(&self, g: &TokenMap) -> Result<TokenMap, ClassError> {
        if *g.dst() != self.class {
            return Err(ClassError::EndpointMismatch);
        }
        let p = product(g.src(), &self.t2)?;
        let mut f0 = SymbolMap::new();
        for (x, phi) in g.f0() {
            let graph = phi.as_fn().expect("function symbol");
            for b in self.t2.base() {
                f0.insert(Symbol::pair(x.clone(), b.clone()), graph[b].clone());
            }
        }
        mk_map(&p.class, &self.t1, f0)
    }
}
