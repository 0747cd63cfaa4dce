use std::collections::BTreeSet;

use rayon::prelude::*;
use tokenspace::reify::{hom_correspondence_reified, reify_class, DEFAULT_IMAGE_DEPTH};
use tokenspace::tree::{TreeClass, TreeTerm};
use tokenspace::{Symbol, TokenClass};

use crate::common::ensure;

/// Depth of the deepest token in scope, so every t-map is enumerated.
const FULL_DEPTH: usize = 3;

/// Tuples of `k` tokens whose lengths sum to at most `len` and depths are at most `depth`.
fn sequences(
    k: usize,
    depth: usize,
    len: usize,
    shapes: &dyn Fn(usize, usize) -> Vec<TreeTerm>,
) -> Vec<Vec<TreeTerm>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first_len in 1..=len.saturating_sub(k - 1) {
        for head in shapes(depth, first_len) {
            for tail in sequences(k - 1, depth, len - head.length(), shapes) {
                out.push([vec![head.clone()], tail].concat());
            }
        }
    }
    out
}

/// Every ε-free token shape with a placeholder leaf `_`, depth at most `depth`
/// and exactly `len` leaves.
fn shapes(depth: usize, len: usize) -> Vec<TreeTerm> {
    let mut out = Vec::new();
    if depth == 0 || len == 0 {
        return out;
    }
    if len == 1 {
        out.push(TreeTerm::leaf("_"));
    }
    if depth >= 2 {
        for k in 1..=len {
            for parts in sequences(k, depth - 1, len, &shapes) {
                if parts.iter().map(TreeTerm::length).sum::<usize>() == len {
                    out.push(TreeTerm::tuple(parts));
                }
            }
        }
    }
    out
}

/// Labels the leaves of `shape` left to right, one label per restricted-growth position.
fn labellings(shape: &TreeTerm, names: &[&str]) -> Vec<TreeTerm> {
    let n = shape.length();
    let mut out = Vec::new();
    let mut rg = vec![0usize; n];
    fn rec(
        i: usize,
        max: usize,
        rg: &mut Vec<usize>,
        k: usize,
        shape: &TreeTerm,
        names: &[&str],
        out: &mut Vec<TreeTerm>,
    ) {
        if i == rg.len() {
            let mut it = rg.iter();
            out.push(shape.map_leaves(&mut |_| Symbol::atom(names[*it.next().expect("leaf")])));
            return;
        }
        for v in 0..=(max + 1).min(k - 1) {
            if i == 0 && v > 0 {
                break;
            }
            rg[i] = v;
            rec(i + 1, max.max(v), rg, k, shape, names, out);
        }
    }
    rec(0, 0, &mut rg, names.len(), shape, names, &mut out);
    out
}

fn check_pair(
    (t1, r1): (&TreeClass, &TokenClass),
    (t2, r2): (&TreeClass, &TokenClass),
) -> Result<usize, String> {
    let pair = || {
        format!(
            "{} → {}",
            t1.heap().iter().next().expect("singleton"),
            t2.heap().iter().next().expect("singleton")
        )
    };
    let h =
        hom_correspondence_reified((t1, r1), (t2, r2), FULL_DEPTH).map_err(|e| e.to_string())?;
    ensure(h.holds(), || format!("{}: {h:?}", pair()))?;
    ensure(h.tmaps.is_empty() == h.pmaps.is_empty(), || {
        format!("{}: t-map and p-map existence differ", pair())
    })?;
    let within = |vals: Vec<TreeTerm>| vals.iter().all(|v| v.depth() <= DEFAULT_IMAGE_DEPTH);
    let t_in = h
        .tmaps
        .iter()
        .filter(|g| within(g.f0().values().cloned().collect()))
        .count();
    let p_in = h
        .pmaps
        .iter()
        .filter(|m| within(t1.base().iter().map(|x| m.f0()[x].to_term()).collect()))
        .count();
    ensure(t_in == p_in, || {
        format!(
            "{}: {t_in} t-maps vs {p_in} p-maps within depth {DEFAULT_IMAGE_DEPTH}",
            pair()
        )
    })?;
    Ok(h.tmaps.len())
}

pub fn run() -> Result<String, String> {
    let names = ["a", "b", "c"];
    let mut tokens = BTreeSet::new();
    for len in 1..=4 {
        for s in shapes(3, len) {
            tokens.extend(labellings(&s, &names));
        }
    }
    let classes: Vec<TreeClass> = tokens
        .iter()
        .map(|r| TreeClass::from_heap(BTreeSet::new(), [r.clone()]).expect("class"))
        .collect();
    let reified = classes
        .iter()
        .map(reify_class)
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| e.to_string())?;
    let rows: Vec<usize> = classes
        .par_iter()
        .zip(&reified)
        .map(|src| {
            classes
                .iter()
                .zip(&reified)
                .map(|dst| check_pair(src, dst))
                .sum::<Result<usize, String>>()
        })
        .collect::<Result<_, _>>()?;
    Ok(format!(
        "{} singleton classes up to renaming; {} pairs; {} t-maps all matched by p-maps",
        classes.len(),
        classes.len() * classes.len(),
        rows.iter().sum::<usize>()
    ))
}
