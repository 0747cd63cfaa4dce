use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tokenspace::tree::{corr, flatten, one_to, scatter_flat, scatter_star, universal_of, TreeTerm};
use tokenspace::Symbol;

use crate::common::ensure;

/// A random ε-free tree token with depth at most `depth` and at most `len` leaves.
fn gen(rng: &mut ChaCha8Rng, depth: usize, len: usize, names: &[&str]) -> TreeTerm {
    if depth <= 1 || len == 1 || rng.gen_bool(0.25) {
        return TreeTerm::leaf(names[rng.gen_range(0..names.len())]);
    }
    let k = rng.gen_range(1..=len.min(4));
    let mut shares = vec![1; k];
    for _ in 0..rng.gen_range(0..=len - k) {
        shares[rng.gen_range(0..k)] += 1;
    }
    TreeTerm::tuple(shares.into_iter().map(|s| gen(rng, depth - 1, s, names)))
}

/// Replaces random subtrees and every leaf of `r` by variables, one per
/// distinct replaced subtree, using at most three variables.
fn coarsen(rng: &mut ChaCha8Rng, r: &TreeTerm) -> TreeTerm {
    fn go(
        rng: &mut ChaCha8Rng,
        r: &TreeTerm,
        keep: f64,
        vars: &mut BTreeMap<TreeTerm, TreeTerm>,
    ) -> TreeTerm {
        match r {
            TreeTerm::Amp(inner) if rng.gen_bool(keep) => TreeTerm::tuple(
                inner
                    .factors()
                    .iter()
                    .map(|f| go(rng, f, keep, vars))
                    .collect::<Vec<_>>(),
            ),
            _ => {
                let next = TreeTerm::leaf(Symbol::atom(format!("x{}", vars.len())));
                vars.entry(r.clone()).or_insert(next).clone()
            }
        }
    }
    let mut keep = 0.7;
    loop {
        let mut vars = BTreeMap::new();
        let out = go(rng, r, keep, &mut vars);
        if vars.len() <= 3 {
            return out;
        }
        keep /= 2.0;
    }
}

fn subst(src: &TreeTerm, sigma: &BTreeMap<Symbol, TreeTerm>) -> TreeTerm {
    match src {
        TreeTerm::Eps => TreeTerm::Eps,
        TreeTerm::Leaf(x) => sigma[x].clone(),
        TreeTerm::Amp(inner) => TreeTerm::amp(subst(inner, sigma)),
        TreeTerm::Concat(parts) => TreeTerm::seq(parts.iter().map(|p| subst(p, sigma))),
    }
}

/// Every leaf assignment into `Star(dst)` whose extension maps `src` onto `dst`.
fn all_correspondences(src: &TreeTerm, dst: &TreeTerm) -> Vec<BTreeMap<Symbol, TreeTerm>> {
    let mut vars: Vec<Symbol> = src.leaves().into_iter().cloned().collect();
    vars.sort();
    vars.dedup();
    let cands: Vec<TreeTerm> = scatter_star(dst)
        .expect("token")
        .into_iter()
        .filter(|t| *t != TreeTerm::Eps)
        .collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; vars.len()];
    loop {
        let sigma: BTreeMap<Symbol, TreeTerm> = vars
            .iter()
            .cloned()
            .zip(idx.iter().map(|&i| cands[i].clone()))
            .collect();
        if subst(src, &sigma) == *dst {
            out.push(sigma);
        }
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return out;
            }
            idx[pos] += 1;
            if idx[pos] < cands.len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

fn check_corr(src: &TreeTerm, dst: &TreeTerm) -> Result<bool, String> {
    let found = all_correspondences(src, dst);
    ensure(found.len() <= 1, || {
        format!("{src} → {dst}: {} correspondences", found.len())
    })?;
    let c = corr(src, dst);
    ensure(c.is_some() == (found.len() == 1), || {
        format!("{src} → {dst}: corr={} brute={}", c.is_some(), found.len())
    })?;
    if let Some(c) = c {
        ensure(c.assignment == found[0], || {
            format!("{src} → {dst}: assignment differs")
        })?;
    }
    Ok(!found.is_empty())
}

fn metric_laws(r: &TreeTerm, s: &TreeTerm) -> Result<(), String> {
    let joined = TreeTerm::concat(r.clone(), s.clone());
    ensure(joined.length() == r.length() + s.length(), || {
        format!("|{r}·{s}|")
    })?;
    ensure(joined.depth() == r.depth().max(s.depth()), || {
        format!("‖{r}·{s}‖")
    })?;
    ensure(joined.ary() == r.ary() + s.ary(), || {
        format!("ary({r}·{s})")
    })?;
    for t in [r.clone(), joined] {
        let w = TreeTerm::amp(t.clone());
        ensure(w.length() == t.length(), || format!("|&({t})|"))?;
        ensure(w.depth() == t.depth() + 1, || format!("‖&({t})‖"))?;
        ensure(w.ary() == 1, || format!("ary(&({t}))"))?;
        ensure(w.tary() == Ok(t.ary()), || format!("tary(&({t}))"))?;
    }
    Ok(())
}

fn flatten_laws(r: &TreeTerm) -> Result<(), String> {
    let f = flatten(r).map_err(|e| e.to_string())?;
    ensure(f.depth() == 2, || format!("‖⋈({r})‖ = {}", f.depth()))?;
    ensure(f.length() == r.length(), || {
        format!("|⋈({r})| = {}", f.length())
    })?;
    let u = universal_of(&f).map_err(|e| e.to_string())?;
    ensure(u == one_to(r.length()), || {
        format!("universal_of(⋈({r})) = {u}")
    })
}

fn star_laws(r: &TreeTerm) -> Result<(), String> {
    let star = scatter_star(r).map_err(|e| e.to_string())?;
    let flat = scatter_flat(r).map_err(|e| e.to_string())?;
    ensure(flat.is_subset(&star), || format!("Flat({r}) ⊄ Star({r})"))?;
    ensure(star.contains(r), || format!("{r} ∉ Star({r})"))?;
    for t in &star {
        ensure(t.depth() <= r.depth(), || format!("‖{t}‖ > ‖{r}‖"))?;
    }
    Ok(())
}

pub fn run() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let terms: Vec<TreeTerm> = (0..500)
        .map(|_| gen(&mut rng, 5, 8, &["a", "b", "c"]))
        .collect();
    for r in &terms {
        ensure(r.depth() <= 5 && r.length() <= 8 && r.is_token(), || {
            format!("generator out of scope: {r}")
        })?;
    }
    let mut matched = 0;
    for (i, r) in terms.iter().enumerate() {
        flatten_laws(r)?;
        star_laws(r)?;
        let s = &terms[(i + 1) % terms.len()];
        metric_laws(r, s)?;
        ensure(check_corr(r, r)?, || {
            format!("{r} has no correspondence onto itself")
        })?;
        check_corr(s, r)?;
        let coarse = coarsen(&mut rng, r);
        ensure(check_corr(&coarse, r)?, || {
            format!("{coarse} does not correspond onto {r}")
        })?;
        let u = universal_of(r).map_err(|e| e.to_string())?;
        ensure(corr(&u, r).is_some(), || {
            format!("no correspondence from universal_of({r})")
        })?;
        matched += 1;
    }
    Ok(format!(
        "500 terms; {matched} flatten/metric/star/corr checks with zero violations"
    ))
}
