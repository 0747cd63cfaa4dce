use std::collections::BTreeSet;

use tokenspace::{atoms, mk_class, Heap, Symbol, Token, TokenClass};

pub fn sym(name: &str) -> Symbol {
    Symbol::atom(name)
}

pub fn token(names: &[&str]) -> Token {
    names.iter().copied().collect()
}

/// A class with a finite heap given as symbol-name lists.
pub fn class(name: &str, base: &[&str], core: &[&str], heap: &[&[&str]]) -> TokenClass {
    mk_class(
        name,
        atoms(base.iter().copied()),
        atoms(core.iter().copied()),
        Heap::finite(heap.iter().map(|t| token(t))),
    )
    .expect("valid class")
}

pub fn finite_class(
    name: &str,
    base: &BTreeSet<Symbol>,
    core: &BTreeSet<Symbol>,
    heap: BTreeSet<Token>,
) -> TokenClass {
    mk_class(name, base.clone(), core.clone(), Heap::Finite(heap)).expect("valid class")
}

/// Every word of each length in `0..=max_len` over `alpha`.
pub fn words_up_to(alpha: &[Symbol], max_len: usize) -> Vec<Token> {
    let mut out = vec![Token(vec![])];
    let mut layer = vec![Vec::<Symbol>::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| {
                alpha
                    .iter()
                    .map(move |s| [w.clone(), vec![s.clone()]].concat())
            })
            .collect();
        out.extend(layer.iter().cloned().map(Token));
    }
    out
}

/// All subsets of `pool` with at most `k` elements.
pub fn subsets_up_to<T: Clone + Ord>(pool: &[T], k: usize) -> Vec<BTreeSet<T>> {
    let mut out = vec![BTreeSet::new()];
    let mut frontier = vec![(BTreeSet::new(), 0usize)];
    for _ in 0..k {
        let mut next = Vec::new();
        for (s, from) in &frontier {
            for (i, x) in pool.iter().enumerate().skip(*from) {
                let mut t: BTreeSet<T> = s.clone();
                t.insert(x.clone());
                out.push(t.clone());
                next.push((t, i + 1));
            }
        }
        frontier = next;
    }
    out
}

/// All functions `dom → cod` as index vectors.
pub fn functions(dom: usize, cod: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..dom {
        out = out
            .into_iter()
            .flat_map(|f| (0..cod).map(move |c| [f.clone(), vec![c]].concat()))
            .collect();
    }
    out
}

pub fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}
