use std::collections::BTreeSet;

use tokenspace::ops::{blending, matchup, retag, Retag};
use tokenspace::rep::{ords, rep_structured};
use tokenspace::{is_subclass, mk_class, Heap, Symbol, SymbolMap, Token, TokenClass};

use crate::common::{ensure, sym};

const X: [&str; 2] = ["0", "1"];

/// `P⁰ = ⟨X, ≥⟩` for `dual = false`, `P¹ = ⟨X, ≤⟩` otherwise.
fn order_holds(dual: bool, x: usize, y: usize) -> bool {
    if dual {
        x <= y
    } else {
        x >= y
    }
}

fn order_class(dual: bool, relation: &Symbol) -> Result<TokenClass, String> {
    let pairs = (0..2)
        .flat_map(|x| (0..2).map(move |y| (x, y)))
        .filter(|&(x, y)| order_holds(dual, x, y))
        .map(|(x, y)| (sym(X[x]), sym(X[y])));
    let rep = rep_structured(&ords(X.iter().map(|s| sym(s)).collect(), pairs))
        .map_err(|e| e.to_string())?;
    let alpha: SymbolMap = [(sym("ge"), relation.clone())].into_iter().collect();
    retag(&Retag::Rename(alpha), &rep).map_err(|e| e.to_string())
}

fn vector(x1: usize, x2: usize) -> Symbol {
    Symbol::pair(sym(X[x1]), sym(X[x2]))
}

/// `(⩾_j, ⟨x₁,x₂⟩, ⟨y₁,y₂⟩)` for every componentwise-related pair.
fn comprehension(j: [bool; 2], relation: &Symbol) -> BTreeSet<Token> {
    let mut out = BTreeSet::new();
    for x1 in 0..2 {
        for x2 in 0..2 {
            for y1 in 0..2 {
                for y2 in 0..2 {
                    if order_holds(j[0], x1, y1) && order_holds(j[1], x2, y2) {
                        out.insert(Token(vec![
                            relation.clone(),
                            vector(x1, x2),
                            vector(y1, y2),
                        ]));
                    }
                }
            }
        }
    }
    out
}

fn covariant_orders() -> Result<Vec<(Symbol, TokenClass)>, String> {
    let mut out = Vec::new();
    let mut relations = BTreeSet::new();
    for j in [[false, false], [false, true], [true, false], [true, true]] {
        let relation = sym(&format!("geq{}{}", j[0] as u8, j[1] as u8));
        let m = matchup(
            &order_class(j[0], &relation)?,
            &order_class(j[1], &relation)?,
        )
        .map_err(|e| e.to_string())?;
        let heap = m.finite_heap().ok_or("matchup heap is not finite")?;
        ensure(*heap == comprehension(j, &relation), || {
            format!("{relation}: heap differs from the comprehension")
        })?;
        let common: SymbolMap = [(relation.clone(), sym("geq"))].into_iter().collect();
        let renamed = retag(&Retag::Rename(common), &m).map_err(|e| e.to_string())?;
        relations.insert(
            renamed
                .finite_heap()
                .cloned()
                .ok_or("renamed heap is not finite")?,
        );
        out.push((relation, m));
    }
    ensure(out.len() == 4 && relations.len() == 4, || {
        format!("{} distinct order relations", relations.len())
    })?;
    Ok(out)
}

fn weak_order(relation: &Symbol, m: &TokenClass) -> Result<usize, String> {
    let ids: BTreeSet<Symbol> = ["k1", "k2", "k3"].iter().map(|s| sym(s)).collect();
    let core: BTreeSet<Symbol> = [relation.clone()].into_iter().collect();
    let t_i = mk_class("I", ids, BTreeSet::new(), Heap::empty())
        .and_then(|t| t.with_core(core.clone()))
        .map_err(|e| e.to_string())?;
    let blended = blending(&t_i, m).map_err(|e| e.to_string())?;
    let holds = |p: &Symbol, q: &Symbol| {
        blended.contains(&Token(vec![relation.clone(), p.clone(), q.clone()]))
    };
    let elems: Vec<&Symbol> = blended.base().iter().collect();
    ensure(elems.len() == 12, || {
        format!("{} instances in the blended base", elems.len())
    })?;
    for p in &elems {
        ensure(holds(p, p), || format!("{relation}: not reflexive at {p}"))?;
    }
    let mut triples = 0;
    for p in &elems {
        for q in elems.iter().filter(|q| holds(p, q)) {
            for r in elems.iter().filter(|r| holds(q, r)) {
                ensure(holds(p, r), || {
                    format!("{relation}: not transitive at {p}, {q}, {r}")
                })?;
                triples += 1;
            }
        }
    }

    let data: BTreeSet<Symbol> = [
        ("k1", vector(0, 1)),
        ("k2", vector(1, 1)),
        ("k3", vector(1, 0)),
    ]
    .into_iter()
    .map(|(k, v)| Symbol::pair(sym(k), v))
    .collect();
    let heap: BTreeSet<Token> = data
        .iter()
        .flat_map(|p| {
            data.iter()
                .map(move |q| Token(vec![relation.clone(), p.clone(), q.clone()]))
        })
        .filter(|w| blended.contains(w))
        .collect();
    let d_j = mk_class("D", data, core, Heap::Finite(heap)).map_err(|e| e.to_string())?;
    ensure(
        is_subclass(&d_j, &blended).map_err(|e| e.to_string())?,
        || format!("{relation}: dataset is not a subclass"),
    )?;
    Ok(triples)
}

pub fn run() -> Result<String, String> {
    let orders = covariant_orders()?;
    let mut triples = 0;
    for (relation, m) in &orders {
        triples += weak_order(relation, m)?;
    }
    Ok(format!(
        "4 distinct covariant orders equal their comprehensions; blended classes reflexive and transitive over {triples} chains"
    ))
}
