use std::collections::{BTreeMap, BTreeSet};

use tokenspace::ops::refering;
use tokenspace::structure::function_symbols;
use tokenspace::{exponent, hom_enumerate, product, Exponential, Symbol, Token, TokenClass};

use crate::common::{class, ensure, finite_class, subsets_up_to, words_up_to};

/// Every class over bases `∅`, `{a}`, `{a,b}` whose heap holds at most three
/// tokens of length at most two.
fn instances() -> Vec<TokenClass> {
    let mut out = Vec::new();
    let none = BTreeSet::new();
    for base in [vec![], vec!["a"], vec!["a", "b"]] {
        let alpha: Vec<Symbol> = base.iter().map(|s| Symbol::atom(*s)).collect();
        let pool = words_up_to(&alpha, 2);
        let base: BTreeSet<Symbol> = alpha.into_iter().collect();
        for heap in subsets_up_to(&pool, 3) {
            out.push(finite_class(&format!("C{}", out.len()), &base, &none, heap));
        }
    }
    out
}

/// Words of length `len` over `funcs`, as index sequences in odometer order.
fn index_words(n: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w| (0..n).map(move |i| [w.clone(), vec![i]].concat()))
            .collect();
    }
    out
}

/// Brute-force supremum of the sets of function words that never evaluate
/// outside `Υ1` against a compatible `Υ2` token, compared with the exponent's
/// excluded set.
fn supremum_matches(t1: &TokenClass, t2: &TokenClass, e: &Exponential) -> Result<(), String> {
    let u1 = t1.finite_heap().expect("finite");
    let u2 = t2.finite_heap().expect("finite");
    let funcs: Vec<&BTreeMap<Symbol, Symbol>> = e
        .class
        .base()
        .iter()
        .map(|f| f.as_fn().expect("graph"))
        .collect();
    let fsyms: Vec<&Symbol> = e.class.base().iter().collect();
    let lengths: BTreeSet<usize> = u2.iter().map(Token::len).collect();
    ensure(
        e.excluded.iter().all(|w| lengths.contains(&w.len())),
        || {
            format!(
                "{}◁{}: excluded token of a length absent from Υ2",
                t1.name(),
                t2.name()
            )
        },
    )?;
    for &len in &lengths {
        let words = index_words(funcs.len(), len);
        assert!(words.len() <= 16, "brute force scope");
        let mut violating = 0u32;
        for (i, w) in words.iter().enumerate() {
            for v in u2.iter().filter(|v| v.len() == len) {
                let evl: Token = w
                    .iter()
                    .zip(v.symbols())
                    .map(|(&f, b)| funcs[f][b].clone())
                    .collect();
                if !u1.contains(&evl) {
                    violating |= 1 << i;
                }
            }
        }
        let mut sup = 0u32;
        for s in 0u32..(1 << words.len()) {
            if s & violating == 0 {
                sup |= s;
            }
        }
        ensure(sup & violating == 0, || {
            "supremum is not itself admissible".into()
        })?;
        for (i, w) in words.iter().enumerate() {
            let word: Token = w.iter().map(|&f| fsyms[f].clone()).collect();
            let in_sup = sup & (1 << i) != 0;
            ensure(in_sup != e.excluded.contains(&word), || {
                format!(
                    "{}◁{}: {word} supremum={in_sup} excluded={}",
                    t1.name(),
                    t2.name(),
                    e.excluded.contains(&word)
                )
            })?;
        }
    }
    Ok(())
}

fn probes() -> Vec<TokenClass> {
    vec![
        class("S0", &["s"], &[], &[]),
        class("S1", &["s"], &[], &[&["s"]]),
        class("S2", &["s"], &[], &[&["s", "s"]]),
        class("S3", &["s"], &[], &[&[], &["s"]]),
        class("S4", &["s", "t"], &[], &[]),
        class("S5", &["s", "t"], &[], &[&["s"]]),
        class("S6", &["s", "t"], &[], &[&["s", "t"]]),
        class("S7", &["s", "t"], &[], &[&["s"], &["t"]]),
        class("S8", &["s", "t"], &[], &[&["s", "s"], &["t"]]),
        class("S9", &["s", "t"], &[], &[&["s", "t"], &["t", "s"]]),
    ]
}

fn transpose_laws(e: &Exponential, s: &TokenClass) -> Result<usize, String> {
    let ctx = || format!("S={} T1={} T2={}", s.name(), e.t1.name(), e.t2.name());
    let p = product(s, &e.t2).map_err(|err| err.to_string())?;
    let left = hom_enumerate(&p.class, &e.t1);
    let right = hom_enumerate(s, &e.class);
    ensure(
        left.undecided.is_empty() && right.undecided.is_empty(),
        || format!("{}: undecided", ctx()),
    )?;
    ensure(left.len() == right.len(), || {
        format!(
            "{}: |hom(S⊗T2,T1)|={} |hom(S,T1◁T2)|={}",
            ctx(),
            left.len(),
            right.len()
        )
    })?;
    for f in &left.maps {
        let g = e
            .curry(s, f)
            .map_err(|err| format!("{}: curry {err}", ctx()))?;
        let back = e
            .uncurry(&g)
            .map_err(|err| format!("{}: uncurry {err}", ctx()))?;
        ensure(back.f0() == f.f0(), || {
            format!("{}: uncurry∘curry ≠ id", ctx())
        })?;
    }
    for g in &right.maps {
        let f = e
            .uncurry(g)
            .map_err(|err| format!("{}: uncurry {err}", ctx()))?;
        let back = e
            .curry(s, &f)
            .map_err(|err| format!("{}: curry {err}", ctx()))?;
        ensure(back.f0() == g.f0(), || {
            format!("{}: curry∘uncurry ≠ id", ctx())
        })?;
    }
    Ok(left.len())
}

pub fn run() -> Result<String, String> {
    let classes = instances();
    let probes = probes();
    let (mut memberships, mut maps) = (0usize, 0usize);
    for t1 in &classes {
        for t2 in &classes {
            let e = exponent(t1, t2).map_err(|err| err.to_string())?;
            let r = refering(t1, t2).map_err(|err| err.to_string())?;
            let funcs = function_symbols(t2.base(), t1.base());
            ensure(*e.class.base() == funcs && *r.base() == funcs, || {
                "function alphabet mismatch".into()
            })?;
            let alpha: Vec<Symbol> = funcs.into_iter().collect();
            for w in words_up_to(&alpha, 4) {
                ensure(e.class.contains(&w) == r.contains(&w), || {
                    format!(
                        "{}◁{}: {w} exponent={} refering={}",
                        t1.name(),
                        t2.name(),
                        e.class.contains(&w),
                        r.contains(&w)
                    )
                })?;
                memberships += 1;
            }
            supremum_matches(t1, t2, &e)?;
            for s in &probes {
                maps += transpose_laws(&e, s)?;
            }
        }
    }
    Ok(format!(
        "{} instances; {memberships} memberships agree; supremum exact; {maps} transposes round-trip",
        classes.len() * classes.len()
    ))
}
