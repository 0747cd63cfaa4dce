use std::collections::{BTreeMap, BTreeSet};

use crate::symbol::Symbol;

use super::{TreeError, TreeTerm};

fn unwrap_token(r: &TreeTerm) -> Result<TreeTerm, TreeError> {
    match r {
        TreeTerm::Amp(inner) => Ok((**inner).clone()),
        TreeTerm::Concat(_) => Err(TreeError::NotAToken(r.clone())),
        other => Ok(other.clone()),
    }
}

/// `r1 ⋈ r2 = &(&⁻¹(r1) · &⁻¹(r2))`; a bare leaf counts as its own wrapping.
pub fn connect(r1: &TreeTerm, r2: &TreeTerm) -> Result<TreeTerm, TreeError> {
    Ok(TreeTerm::amp(TreeTerm::concat(
        unwrap_token(r1)?,
        unwrap_token(r2)?,
    )))
}

/// The flattening `⋈(r)`.
pub fn flatten(r: &TreeTerm) -> Result<TreeTerm, TreeError> {
    match r {
        TreeTerm::Concat(_) => Err(TreeError::NotAToken(r.clone())),
        TreeTerm::Eps => Ok(TreeTerm::Eps),
        TreeTerm::Leaf(_) => Ok(TreeTerm::amp(r.clone())),
        TreeTerm::Amp(inner) => {
            if inner.factors().iter().all(TreeTerm::is_leaf) {
                return Ok(r.clone());
            }
            let mut acc = TreeTerm::amp(TreeTerm::Eps);
            for f in inner.factors() {
                acc = connect(&acc, &flatten(f)?)?;
            }
            Ok(acc)
        }
    }
}

/// Whether two tokens lie in one flattening class.
pub fn same_flattening(a: &TreeTerm, b: &TreeTerm) -> Result<bool, TreeError> {
    Ok(flatten(a)? == flatten(b)?)
}

fn index_symbol(i: usize) -> Symbol {
    Symbol::Atom(i.to_string())
}

/// `1:n`, the flat tuple `(1,…,n)`; `1:0 = ε`.
pub fn one_to(n: usize) -> TreeTerm {
    if n == 0 {
        return TreeTerm::Eps;
    }
    TreeTerm::tuple((1..=n).map(|i| TreeTerm::Leaf(index_symbol(i))))
}

/// Relabels the leaves of `r` by `1, 2, …` from left to right.
pub fn universal_of(r: &TreeTerm) -> Result<TreeTerm, TreeError> {
    if !r.is_token() {
        return Err(TreeError::NotAToken(r.clone()));
    }
    let mut next = 0;
    Ok(r.map_leaves(&mut |_| {
        next += 1;
        index_symbol(next)
    }))
}

pub fn is_universal(u: &TreeTerm) -> bool {
    match u {
        TreeTerm::Eps => true,
        _ => flatten(u).is_ok_and(|f| f == one_to(u.length())),
    }
}

/// The unique leaf assignment mapping `source` onto `target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Correspondence {
    pub source: TreeTerm,
    pub target: TreeTerm,
    pub assignment: BTreeMap<Symbol, TreeTerm>,
}

fn match_term(s: &TreeTerm, d: &TreeTerm, asg: &mut BTreeMap<Symbol, TreeTerm>) -> bool {
    match (s, d) {
        (TreeTerm::Eps, TreeTerm::Eps) => true,
        (TreeTerm::Leaf(x), d) => {
            if !d.is_token() || *d == TreeTerm::Eps {
                return false;
            }
            match asg.get(x) {
                Some(prev) => prev == d,
                None => {
                    asg.insert(x.clone(), d.clone());
                    true
                }
            }
        }
        (TreeTerm::Amp(a), TreeTerm::Amp(b)) => match_term(a, b, asg),
        (TreeTerm::Concat(ps), TreeTerm::Concat(qs)) => {
            ps.len() == qs.len() && ps.iter().zip(qs).all(|(p, q)| match_term(p, q, asg))
        }
        _ => false,
    }
}

/// The tree correspondence from `src` to `dst`, if one exists.
pub fn corr(src: &TreeTerm, dst: &TreeTerm) -> Option<Correspondence> {
    let mut asg = BTreeMap::new();
    match_term(src, dst, &mut asg).then(|| Correspondence {
        source: src.clone(),
        target: dst.clone(),
        assignment: asg,
    })
}

/// Rejects assignments whose images are not non-empty treepoid elements.
pub fn check_images(assign: &BTreeMap<Symbol, TreeTerm>) -> Result<(), TreeError> {
    for (k, v) in assign {
        if !v.is_token() {
            return Err(TreeError::ImageNotTreepoid(k.clone()));
        }
        if *v == TreeTerm::Eps {
            return Err(TreeError::EmptyImage(k.clone()));
        }
    }
    Ok(())
}

fn apply_unchecked(
    assign: &BTreeMap<Symbol, TreeTerm>,
    r: &TreeTerm,
) -> Result<TreeTerm, TreeError> {
    Ok(match r {
        TreeTerm::Eps => TreeTerm::Eps,
        TreeTerm::Leaf(x) => assign
            .get(x)
            .cloned()
            .ok_or_else(|| TreeError::Unassigned(x.clone()))?,
        TreeTerm::Concat(parts) => TreeTerm::seq(
            parts
                .iter()
                .map(|p| apply_unchecked(assign, p))
                .collect::<Result<Vec<_>, _>>()?,
        ),
        TreeTerm::Amp(inner) => TreeTerm::amp(apply_unchecked(assign, inner)?),
    })
}

/// The homomorphic extension of a leaf assignment.
pub fn tmorph_apply(
    assign: &BTreeMap<Symbol, TreeTerm>,
    r: &TreeTerm,
) -> Result<TreeTerm, TreeError> {
    check_images(assign)?;
    apply_unchecked(assign, r)
}

/// Scattering along a correspondence from a universal token onto `r`.
pub fn scatter_by(g: &Correspondence, r: &TreeTerm) -> Result<BTreeSet<TreeTerm>, TreeError> {
    if g.target != *r || !is_universal(&g.source) || corr(&g.source, r).as_ref() != Some(g) {
        return Err(TreeError::NotACorrespondence);
    }
    Ok(g.assignment.values().cloned().collect())
}

/// Flat scattering: scattering by `corr(1:n, ⋈(r))` with `n = |⋈(r)|`.
pub fn scatter_flat(r: &TreeTerm) -> Result<BTreeSet<TreeTerm>, TreeError> {
    let flat = flatten(r)?;
    let u = one_to(flat.length());
    match corr(&u, &flat) {
        Some(g) => Ok(g.assignment.into_values().collect()),
        None => Ok(BTreeSet::new()),
    }
}

/// Star scattering: every subtree of `r`, including `r` and its leaves.
pub fn scatter_star(r: &TreeTerm) -> Result<BTreeSet<TreeTerm>, TreeError> {
    if !r.is_token() {
        return Err(TreeError::NotAToken(r.clone()));
    }
    let mut out = BTreeSet::new();
    collect_subtrees(r, &mut out);
    Ok(out)
}

fn collect_subtrees(r: &TreeTerm, out: &mut BTreeSet<TreeTerm>) {
    match r {
        TreeTerm::Eps | TreeTerm::Leaf(_) => {
            out.insert(r.clone());
        }
        TreeTerm::Amp(inner) => {
            out.insert(r.clone());
            for f in inner.factors() {
                collect_subtrees(f, out);
            }
        }
        TreeTerm::Concat(parts) => parts.iter().for_each(|p| collect_subtrees(p, out)),
    }
}

/// Tokens of depth at most `max_depth` whose flattening equals `⋈(r)`.
///
/// Representatives containing `&(ε)` are not generated, except `r` itself.
pub fn flatten_class(r: &TreeTerm, max_depth: usize) -> Result<BTreeSet<TreeTerm>, TreeError> {
    let target = flatten(r)?;
    let mut out = BTreeSet::new();
    let leaves: Vec<Symbol> = target.leaves().into_iter().cloned().collect();
    if !leaves.is_empty() {
        for t in tokens_over(&leaves, max_depth) {
            if flatten(&t)? == target {
                out.insert(t);
            }
        }
    }
    if r.depth() <= max_depth {
        out.insert(r.clone());
    }
    Ok(out)
}

fn tokens_over(s: &[Symbol], depth: usize) -> Vec<TreeTerm> {
    let mut out = Vec::new();
    if depth == 0 {
        return out;
    }
    if s.len() == 1 {
        out.push(TreeTerm::Leaf(s[0].clone()));
    }
    if depth >= 2 {
        out.extend(seqs_over(s, depth - 1).into_iter().map(TreeTerm::amp));
    }
    out
}

fn seqs_over(s: &[Symbol], depth: usize) -> Vec<TreeTerm> {
    let mut out = Vec::new();
    for k in 1..=s.len() {
        let heads = tokens_over(&s[..k], depth);
        if k == s.len() {
            out.extend(heads);
            continue;
        }
        let tails = seqs_over(&s[k..], depth);
        for h in &heads {
            for t in &tails {
                out.push(TreeTerm::concat(h.clone(), t.clone()));
            }
        }
    }
    out
}
