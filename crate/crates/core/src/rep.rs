//! Structured objects encoded as token classes.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::class::{mk_class, mk_map, ClassError, TokenClass, TokenMap};
use crate::heap::Heap;
use crate::ops::{power_set, powering, preimage_set};
use crate::symbol::{MarkerKind, Symbol, SymbolMap};
use crate::token::Token;
use crate::verdict::{Verdict, Witness};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum RepError {
    #[error("relation {relation} has a tuple of the wrong arity: {tuple}")]
    ArityViolation { relation: String, tuple: Token },
    #[error("not a structure: {0}")]
    NotAStructure(String),
    #[error("not a topology: {0}")]
    NotATopology(Witness),
    #[error("map does not preserve structure: {0}")]
    NotPreserving(Witness),
    #[error("map is not continuous: preimage of open set {0} is not open")]
    NotContinuous(Symbol),
    #[error(transparent)]
    Class(#[from] ClassError),
}

/// Special-element names and relation names with arities (`None` is variadic).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StructureSig {
    pub theta: BTreeSet<String>,
    pub gamma: BTreeMap<String, Option<usize>>,
}

/// A finite set with special elements and relations.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StructuredObject {
    pub sig: StructureSig,
    pub carrier: BTreeSet<Symbol>,
    pub specials: BTreeMap<String, Symbol>,
    pub relations: BTreeMap<String, BTreeSet<Vec<Symbol>>>,
    /// Tuples recorded without a leading relation symbol.
    pub bare: BTreeSet<Vec<Symbol>>,
}

impl StructuredObject {
    pub fn validate(&self) -> Result<(), RepError> {
        if let Some(n) = self
            .sig
            .theta
            .iter()
            .find(|n| self.sig.gamma.contains_key(*n))
        {
            return Err(RepError::NotAStructure(format!(
                "{n} is both a special element and a relation"
            )));
        }
        for name in &self.sig.theta {
            match self.specials.get(name) {
                Some(x) if self.carrier.contains(x) => {}
                Some(x) => {
                    return Err(RepError::NotAStructure(format!(
                        "special {name} = {x} is not in the carrier"
                    )))
                }
                None => {
                    return Err(RepError::NotAStructure(format!(
                        "special {name} is unassigned"
                    )))
                }
            }
        }
        if let Some(name) = self.specials.keys().find(|n| !self.sig.theta.contains(*n)) {
            return Err(RepError::NotAStructure(format!(
                "special {name} is not declared"
            )));
        }
        for (name, tuples) in &self.relations {
            let arity = self.sig.gamma.get(name).ok_or_else(|| {
                RepError::NotAStructure(format!("relation {name} is not declared"))
            })?;
            for t in tuples {
                if arity.is_some_and(|n| n != t.len()) {
                    return Err(RepError::ArityViolation {
                        relation: name.clone(),
                        tuple: Token(t.clone()),
                    });
                }
                if let Some(x) = t.iter().find(|x| !self.carrier.contains(x)) {
                    return Err(RepError::NotAStructure(format!(
                        "{x} in relation {name} is not in the carrier"
                    )));
                }
            }
        }
        for t in &self.bare {
            if let Some(x) = t.iter().find(|x| !self.carrier.contains(x)) {
                return Err(RepError::NotAStructure(format!(
                    "{x} is not in the carrier"
                )));
            }
        }
        Ok(())
    }

    fn core(&self) -> BTreeSet<Symbol> {
        self.sig
            .theta
            .iter()
            .chain(self.sig.gamma.keys())
            .map(|n| Symbol::atom(n.clone()))
            .collect()
    }

    fn tokens(&self) -> BTreeSet<Token> {
        let mut out = BTreeSet::new();
        for (name, x) in &self.specials {
            out.insert(Token(vec![Symbol::atom(name.clone()), x.clone()]));
        }
        for (name, tuples) in &self.relations {
            for t in tuples {
                let mut w = vec![Symbol::atom(name.clone())];
                w.extend(t.iter().cloned());
                out.insert(Token(w));
            }
        }
        out.extend(self.bare.iter().map(|t| Token(t.clone())));
        out
    }
}

/// `⟨A, Θ∪Γ, {(θ,θ_A)} ∪ {(γ,x₁,…,xₙ)}⟩`.
pub fn rep_structured(obj: &StructuredObject) -> Result<TokenClass, RepError> {
    obj.validate()?;
    Ok(mk_class(
        "rep",
        obj.carrier.clone(),
        obj.core(),
        Heap::Finite(obj.tokens()),
    )?)
}

pub fn check_preserving(f: &SymbolMap, src: &StructuredObject, dst: &StructuredObject) -> Verdict {
    if let Some(x) = src
        .carrier
        .iter()
        .find(|x| !f.get(*x).is_some_and(|y| dst.carrier.contains(y)))
    {
        return Verdict::Fails(Witness::Symbol(x.clone()));
    }
    for (name, x) in &src.specials {
        if dst.specials.get(name) != Some(&f[x]) {
            return Verdict::Fails(Witness::Token(Token(vec![
                Symbol::atom(name.clone()),
                x.clone(),
            ])));
        }
    }
    let empty = BTreeSet::new();
    for (name, tuples) in &src.relations {
        let target = dst.relations.get(name).unwrap_or(&empty);
        for t in tuples {
            let img: Vec<Symbol> = t.iter().map(|x| f[x].clone()).collect();
            if !target.contains(&img) {
                let mut w = vec![Symbol::atom(name.clone())];
                w.extend(t.iter().cloned());
                return Verdict::Fails(Witness::Token(Token(w)));
            }
        }
    }
    for t in &src.bare {
        let img: Vec<Symbol> = t.iter().map(|x| f[x].clone()).collect();
        if !dst.bare.contains(&img) {
            return Verdict::Fails(Witness::Token(Token(t.clone())));
        }
    }
    Verdict::Holds
}

/// `Rep(f)`, the token map of a structure preserving map.
pub fn rep_map(
    f: &SymbolMap,
    src: &StructuredObject,
    dst: &StructuredObject,
) -> Result<TokenMap, RepError> {
    let a = rep_structured(src)?;
    let b = rep_structured(dst)?;
    if let Verdict::Fails(w) = check_preserving(f, src, dst) {
        return Err(RepError::NotPreserving(w));
    }
    match mk_map(&a, &b, f.clone()) {
        Ok(m) => Ok(m),
        Err(ClassError::HeapViolation(t)) => Err(RepError::NotPreserving(Witness::Token(t))),
        Err(e) => Err(e.into()),
    }
}

fn names(items: &[&str]) -> BTreeSet<String> {
    items.iter().map(|s| s.to_string()).collect()
}

pub fn set_object(carrier: BTreeSet<Symbol>) -> StructuredObject {
    StructuredObject {
        carrier,
        ..Default::default()
    }
}

/// Pointed set with special element `amp`.
pub fn pointed(carrier: BTreeSet<Symbol>, point: Symbol) -> StructuredObject {
    StructuredObject {
        sig: StructureSig {
            theta: names(&["amp"]),
            gamma: BTreeMap::new(),
        },
        carrier,
        specials: [("amp".to_string(), point)].into_iter().collect(),
        ..Default::default()
    }
}

/// An ordered set given by its pairs `x ≥ y`, under the relation symbol `ge`.
pub fn ords(
    carrier: BTreeSet<Symbol>,
    ge: impl IntoIterator<Item = (Symbol, Symbol)>,
) -> StructuredObject {
    binary("ge", carrier, ge)
}

/// A directed graph under the relation symbol `Edg`.
pub fn graph(
    vertices: BTreeSet<Symbol>,
    edges: impl IntoIterator<Item = (Symbol, Symbol)>,
) -> StructuredObject {
    binary("Edg", vertices, edges)
}

fn binary(
    name: &str,
    carrier: BTreeSet<Symbol>,
    pairs: impl IntoIterator<Item = (Symbol, Symbol)>,
) -> StructuredObject {
    StructuredObject {
        sig: StructureSig {
            theta: BTreeSet::new(),
            gamma: [(name.to_string(), Some(2))].into_iter().collect(),
        },
        carrier,
        relations: [(
            name.to_string(),
            pairs.into_iter().map(|(x, y)| vec![x, y]).collect(),
        )]
        .into_iter()
        .collect(),
        ..Default::default()
    }
}

/// Operation tables of a finite ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingTables {
    pub carrier: Vec<Symbol>,
    pub add: BTreeMap<(Symbol, Symbol), Symbol>,
    pub mul: BTreeMap<(Symbol, Symbol), Symbol>,
    pub neg: BTreeMap<Symbol, Symbol>,
    pub zero: Symbol,
}

impl RingTables {
    /// `ℤ/n` with elements named `0 … n-1`.
    pub fn zn(n: usize) -> Self {
        let el = |i: usize| Symbol::atom((i % n).to_string());
        let mut add = BTreeMap::new();
        let mut mul = BTreeMap::new();
        for i in 0..n {
            for j in 0..n {
                add.insert((el(i), el(j)), el(i + j));
                mul.insert((el(i), el(j)), el(i * j));
            }
        }
        let neg = (0..n).map(|i| (el(i), el(n - i))).collect();
        RingTables {
            carrier: (0..n).map(el).collect(),
            add,
            mul,
            neg,
            zero: el(0),
        }
    }

    /// `ℤ/2 × ℤ/2` with elements named `00, 01, 10, 11`.
    pub fn z2xz2() -> Self {
        let el = |a: usize, b: usize| Symbol::atom(format!("{}{}", a % 2, b % 2));
        let pairs: Vec<(usize, usize)> = vec![(0, 0), (0, 1), (1, 0), (1, 1)];
        let mut add = BTreeMap::new();
        let mut mul = BTreeMap::new();
        for &(a, b) in &pairs {
            for &(c, d) in &pairs {
                add.insert((el(a, b), el(c, d)), el(a + c, b + d));
                mul.insert((el(a, b), el(c, d)), el(a * c, b * d));
            }
        }
        let neg = pairs.iter().map(|&(a, b)| (el(a, b), el(a, b))).collect();
        RingTables {
            carrier: pairs.iter().map(|&(a, b)| el(a, b)).collect(),
            add,
            mul,
            neg,
            zero: el(0, 0),
        }
    }

    fn check(&self) -> Result<(), RepError> {
        let carrier: BTreeSet<&Symbol> = self.carrier.iter().collect();
        for x in &self.carrier {
            for y in &self.carrier {
                for (name, table) in [("add", &self.add), ("mul", &self.mul)] {
                    match table.get(&(x.clone(), y.clone())) {
                        Some(z) if carrier.contains(z) => {}
                        _ => {
                            return Err(RepError::NotAStructure(format!(
                                "{name}({x},{y}) is not in the carrier"
                            )))
                        }
                    }
                }
            }
            match self.neg.get(x) {
                Some(z) if carrier.contains(z) => {}
                _ => {
                    return Err(RepError::NotAStructure(format!(
                        "neg({x}) is not in the carrier"
                    )))
                }
            }
        }
        if !carrier.contains(&self.zero) {
            return Err(RepError::NotAStructure("zero is not in the carrier".into()));
        }
        Ok(())
    }
}

/// A ring under `⟨{zero}, {add, mul, neg}⟩`.
pub fn ring(t: &RingTables) -> Result<StructuredObject, RepError> {
    t.check()?;
    let triples = |table: &BTreeMap<(Symbol, Symbol), Symbol>| {
        table
            .iter()
            .map(|((x, y), z)| vec![x.clone(), y.clone(), z.clone()])
            .collect::<BTreeSet<_>>()
    };
    Ok(StructuredObject {
        sig: StructureSig {
            theta: names(&["zero"]),
            gamma: [
                ("add".to_string(), Some(3)),
                ("mul".to_string(), Some(3)),
                ("neg".to_string(), Some(2)),
            ]
            .into_iter()
            .collect(),
        },
        carrier: t.carrier.iter().cloned().collect(),
        specials: [("zero".to_string(), t.zero.clone())].into_iter().collect(),
        relations: [
            ("add".to_string(), triples(&t.add)),
            ("mul".to_string(), triples(&t.mul)),
            (
                "neg".to_string(),
                t.neg
                    .iter()
                    .map(|(x, y)| vec![x.clone(), y.clone()])
                    .collect(),
            ),
        ]
        .into_iter()
        .collect(),
        ..Default::default()
    })
}

/// Scalar of the prime field `𝔽_p`.
pub fn scalar(a: usize) -> Symbol {
    Symbol::atom(format!("s{a}"))
}

/// Vector of `𝔽_p^d` named by its coordinates.
pub fn vector(coords: &[usize]) -> Symbol {
    Symbol::atom(format!(
        "v{}",
        coords.iter().map(|c| c.to_string()).collect::<String>()
    ))
}

fn vectors(p: usize, dim: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|v| (0..p).map(move |c| [v.clone(), vec![c]].concat()))
            .collect();
    }
    out
}

fn check_prime(p: usize) -> Result<(), RepError> {
    if p < 2 || (2..p).any(|d| p.is_multiple_of(d)) {
        return Err(RepError::NotAStructure(format!("{p} is not a prime")));
    }
    Ok(())
}

/// `𝔽_p^d` with `zero`, `add` and one binary relation per scalar.
pub fn vct(p: usize, dim: usize) -> Result<StructuredObject, RepError> {
    check_prime(p)?;
    let vs = vectors(p, dim);
    let add_v = |x: &[usize], y: &[usize]| {
        x.iter()
            .zip(y)
            .map(|(a, b)| (a + b) % p)
            .collect::<Vec<_>>()
    };
    let mut relations: BTreeMap<String, BTreeSet<Vec<Symbol>>> = BTreeMap::new();
    let mut gamma = BTreeMap::new();
    gamma.insert("add".to_string(), Some(3));
    for x in &vs {
        for y in &vs {
            relations.entry("add".into()).or_default().insert(vec![
                vector(x),
                vector(y),
                vector(&add_v(x, y)),
            ]);
        }
    }
    for a in 0..p {
        let name = scalar(a).to_string();
        gamma.insert(name.clone(), Some(2));
        let scaled = relations.entry(name).or_default();
        for x in &vs {
            scaled.insert(vec![
                vector(x),
                vector(&x.iter().map(|c| c * a % p).collect::<Vec<_>>()),
            ]);
        }
    }
    Ok(StructuredObject {
        sig: StructureSig {
            theta: names(&["zero"]),
            gamma,
        },
        carrier: vs.iter().map(|v| vector(v)).collect(),
        specials: [("zero".to_string(), vector(&vec![0; dim]))]
            .into_iter()
            .collect(),
        relations,
        ..Default::default()
    })
}

/// `𝔽_p^d` over the carrier `V ∪ 𝔽_p`, carrying both the vector and the
/// field structure, sort tokens `(V,x)`, `(R,a)` and bare tokens `(a,x,ax)`.
pub fn vct_prime(p: usize, dim: usize) -> Result<StructuredObject, RepError> {
    let base = vct(p, dim)?;
    let field = ring(&RingTables::zn(p))?;
    let rename = |x: &Symbol| scalar(x.to_string().parse::<usize>().expect("numeric element"));
    let vs = vectors(p, dim);
    let mut relations = BTreeMap::new();
    relations.insert("add".to_string(), base.relations["add"].clone());
    for (from, to) in [("add", "addR"), ("mul", "mulR"), ("neg", "negR")] {
        relations.insert(
            to.to_string(),
            field.relations[from]
                .iter()
                .map(|t| t.iter().map(rename).collect())
                .collect::<BTreeSet<_>>(),
        );
    }
    relations.insert(
        "V".to_string(),
        vs.iter().map(|v| vec![vector(v)]).collect(),
    );
    relations.insert("R".to_string(), (0..p).map(|a| vec![scalar(a)]).collect());
    let mut bare = BTreeSet::new();
    for a in 0..p {
        for x in &vs {
            bare.insert(vec![
                scalar(a),
                vector(x),
                vector(&x.iter().map(|c| c * a % p).collect::<Vec<_>>()),
            ]);
        }
    }
    let gamma = [
        ("add", 3),
        ("addR", 3),
        ("mulR", 3),
        ("negR", 2),
        ("V", 1),
        ("R", 1),
    ]
    .into_iter()
    .map(|(n, a)| (n.to_string(), Some(a)))
    .collect();
    let mut carrier = base.carrier.clone();
    carrier.extend((0..p).map(scalar));
    Ok(StructuredObject {
        sig: StructureSig {
            theta: names(&["zero", "zeroR"]),
            gamma,
        },
        carrier,
        specials: [
            ("zero".to_string(), vector(&vec![0; dim])),
            ("zeroR".to_string(), scalar(0)),
        ]
        .into_iter()
        .collect(),
        relations,
        bare,
    })
}

/// A finite topological space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Topology {
    pub points: BTreeSet<Symbol>,
    pub opens: BTreeSet<BTreeSet<Symbol>>,
}

impl Topology {
    pub fn check(&self) -> Result<(), RepError> {
        let fail = |s: &BTreeSet<Symbol>| {
            Err(RepError::NotATopology(Witness::Symbol(Symbol::Subset(
                s.clone(),
            ))))
        };
        if !self.opens.contains(&BTreeSet::new()) {
            return fail(&BTreeSet::new());
        }
        if !self.opens.contains(&self.points) {
            return fail(&self.points);
        }
        for u in &self.opens {
            if !u.is_subset(&self.points) {
                return fail(u);
            }
            for v in &self.opens {
                let union: BTreeSet<Symbol> = u.union(v).cloned().collect();
                let meet: BTreeSet<Symbol> = u.intersection(v).cloned().collect();
                if !self.opens.contains(&union) {
                    return fail(&union);
                }
                if !self.opens.contains(&meet) {
                    return fail(&meet);
                }
            }
        }
        Ok(())
    }
}

/// The core symbol `γ_O` marking open sets.
pub fn gamma_open() -> Symbol {
    Symbol::tag("O", Symbol::marker(MarkerKind::Gamma))
}

/// `∇⟨X,∅,∅⟩` extended with `(γ_O, S)` for every open `S`.
pub fn rep_top(top: &Topology) -> Result<TokenClass, RepError> {
    top.check()?;
    let bare = mk_class("X", top.points.clone(), BTreeSet::new(), Heap::empty())?;
    let p = powering(&bare)?;
    let mut core = p.core().clone();
    core.insert(gamma_open());
    let opens = top
        .opens
        .iter()
        .map(|s| Token(vec![gamma_open(), Symbol::Subset(s.clone())]));
    let heap = Heap::union(p.heap().clone(), Heap::finite(opens));
    Ok(mk_class("top", p.base().clone(), core, heap)?)
}

/// `fᵒᵖ : Rep(Y) → Rep(X)` for `f : X → Y`.
pub fn top_reverse(f: &SymbolMap, x: &Topology, y: &Topology) -> Result<TokenMap, RepError> {
    let rx = rep_top(x)?;
    let ry = rep_top(y)?;
    if let Some(p) = x
        .points
        .iter()
        .find(|p| !f.get(*p).is_some_and(|q| y.points.contains(q)))
    {
        return Err(ClassError::NotTotal(p.clone()).into());
    }
    let e = Symbol::marker(MarkerKind::E);
    let mut f0 = SymbolMap::new();
    for s in ry.base() {
        let img = match s.as_subset() {
            Some(ys) => Symbol::Subset(preimage_set(f, ys)),
            None => e.clone(),
        };
        f0.insert(s.clone(), img);
    }
    match mk_map(&ry, &rx, f0) {
        Ok(m) => Ok(m),
        Err(ClassError::HeapViolation(t)) => Err(RepError::NotContinuous(t.symbols()[1].clone())),
        Err(err) => Err(err.into()),
    }
}

/// All subsets of the points, as a convenience for enumerating topologies.
pub fn subsets_of(points: &BTreeSet<Symbol>) -> Vec<BTreeSet<Symbol>> {
    power_set(points)
        .into_iter()
        .map(|s| s.as_subset().expect("subset symbol").clone())
        .collect()
}

/// The builtin structure kinds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Builtin {
    Set(BTreeSet<Symbol>),
    Pointed(BTreeSet<Symbol>, Symbol),
    Ords(BTreeSet<Symbol>, Vec<(Symbol, Symbol)>),
    Gph(BTreeSet<Symbol>, Vec<(Symbol, Symbol)>),
    Rng(RingTables),
    Vct { p: usize, dim: usize },
    VctPrime { p: usize, dim: usize },
    TopOp(Topology),
}

pub fn builtin_object(kind: &Builtin) -> Result<StructuredObject, RepError> {
    Ok(match kind {
        Builtin::Set(c) => set_object(c.clone()),
        Builtin::Pointed(c, p) => pointed(c.clone(), p.clone()),
        Builtin::Ords(c, ge) => ords(c.clone(), ge.iter().cloned()),
        Builtin::Gph(v, e) => graph(v.clone(), e.iter().cloned()),
        Builtin::Rng(t) => ring(t)?,
        Builtin::Vct { p, dim } => vct(*p, *dim)?,
        Builtin::VctPrime { p, dim } => vct_prime(*p, *dim)?,
        Builtin::TopOp(_) => {
            return Err(RepError::NotAStructure(
                "topologies are encoded through rep_top".into(),
            ))
        }
    })
}

pub fn rep_builtin(kind: &Builtin) -> Result<TokenClass, RepError> {
    match kind {
        Builtin::TopOp(t) => rep_top(t),
        other => rep_structured(&builtin_object(other)?),
    }
}
