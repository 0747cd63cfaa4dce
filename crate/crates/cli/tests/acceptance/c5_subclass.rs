use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tokenspace::{
    is_subclass, mk_map, pullback_inclusion_check, subclass_via_pullbacks, Symbol, SymbolMap,
    Token, TokenClass, Verdict, Witness,
};

use crate::common::{ensure, finite_class, words_up_to};

fn random_token(rng: &mut ChaCha8Rng, alpha: &[Symbol]) -> Token {
    (0..rng.gen_range(1..=3))
        .map(|_| alpha[rng.gen_range(0..alpha.len())].clone())
        .collect()
}

fn random_class(rng: &mut ChaCha8Rng, name: &str) -> TokenClass {
    let mut names = ["a", "b", "c"];
    names.shuffle(rng);
    let alpha: Vec<Symbol> = names[..rng.gen_range(1..=3)]
        .iter()
        .map(|s| Symbol::atom(*s))
        .collect();
    let heap = (0..rng.gen_range(1..=5))
        .map(|_| random_token(rng, &alpha))
        .collect();
    finite_class(
        name,
        &alpha.iter().cloned().collect(),
        &BTreeSet::new(),
        heap,
    )
}

fn inclusion_case(rng: &mut ChaCha8Rng, i: usize) -> Result<(), String> {
    let t2 = random_class(rng, &format!("T{i}"));
    let kept: BTreeSet<Symbol> = t2
        .base()
        .iter()
        .filter(|_| rng.gen_bool(0.7))
        .cloned()
        .collect();
    let kept = if kept.is_empty() {
        t2.base().iter().take(1).cloned().collect()
    } else {
        kept
    };
    let heap: BTreeSet<Token> = t2
        .finite_heap()
        .expect("finite")
        .iter()
        .filter(|w| w.symbols().iter().all(|s| kept.contains(s)) && rng.gen_bool(0.7))
        .cloned()
        .collect();
    let image = finite_class("image", &kept, t2.core(), heap.clone());

    let rename = |s: &Symbol| Symbol::atom(format!("{s}'"));
    let to_sub: SymbolMap = kept.iter().map(|s| (s.clone(), rename(s))).collect();
    let sub_heap = heap
        .iter()
        .map(|w| w.map(&to_sub).expect("total"))
        .collect();
    let t1 = finite_class(
        &format!("U{i}"),
        &to_sub.values().cloned().collect(),
        t2.core(),
        sub_heap,
    );
    let f0: SymbolMap = to_sub.iter().map(|(k, v)| (v.clone(), k.clone())).collect();
    let f = mk_map(&t1, &t2, f0).map_err(|e| format!("inclusion {i}: {e}"))?;

    let data = subclass_via_pullbacks(&f).map_err(|e| format!("inclusion {i}: {e}"))?;
    ensure(data.verdict.holds(), || {
        format!("inclusion {i}: {:?}", data.verdict)
    })?;
    let sub = is_subclass(&image, &t2).map_err(|e| e.to_string())?;
    ensure(sub, || format!("inclusion {i}: image is not a subclass"))
}

fn non_subclass_case(rng: &mut ChaCha8Rng, i: usize) -> Result<(), String> {
    let t2 = random_class(rng, &format!("T{i}"));
    let alpha: Vec<Symbol> = t2.base().iter().cloned().collect();
    let mut heap: BTreeSet<Token> = t2
        .finite_heap()
        .expect("finite")
        .iter()
        .filter(|_| rng.gen_bool(0.5))
        .cloned()
        .collect();
    let mut base = t2.base().clone();
    if i.is_multiple_of(2) {
        let extra = (0..100)
            .map(|_| random_token(rng, &alpha))
            .chain(words_up_to(&alpha, 4))
            .find(|w| !w.is_empty() && !t2.contains(w))
            .ok_or_else(|| format!("case {i}: no non-member token"))?;
        heap.insert(extra);
    } else {
        base.insert(Symbol::atom("z"));
        if rng.gen_bool(0.5) {
            heap.insert(Token(vec![Symbol::atom("z")]));
        }
    }
    let t1 = finite_class(&format!("U{i}"), &base, t2.core(), heap);
    ensure(!is_subclass(&t1, &t2).map_err(|e| e.to_string())?, || {
        format!("case {i}: generated pair is a subclass")
    })?;
    match pullback_inclusion_check(&t1, &t2).map_err(|e| e.to_string())? {
        Verdict::Fails(Witness::Token(w)) => ensure(t1.contains(&w) && !t2.contains(&w), || {
            format!("case {i}: spurious token witness {w}")
        }),
        Verdict::Fails(Witness::Symbol(s)) => {
            ensure(t1.base().contains(&s) && !t2.base().contains(&s), || {
                format!("case {i}: spurious symbol witness {s}")
            })
        }
        other => Err(format!("case {i}: {other:?}")),
    }
}

pub fn run() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..50 {
        inclusion_case(&mut rng, i)?;
    }
    for i in 0..50 {
        non_subclass_case(&mut rng, i)?;
    }
    Ok(
        "50 inclusions hold and are subclasses; 50 non-subclass pairs fail with genuine witnesses"
            .into(),
    )
}
