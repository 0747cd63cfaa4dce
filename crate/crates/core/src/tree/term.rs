use std::fmt;

use crate::symbol::Symbol;

use super::TreeError;

/// A pre-treepoid term over `·`, `&` and `ε`, kept in normal form.
///
/// `Concat` always holds at least two parts, none of them `Eps` or `Concat`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TreeTerm {
    Eps,
    Leaf(Symbol),
    Concat(Vec<TreeTerm>),
    Amp(Box<TreeTerm>),
}

impl TreeTerm {
    pub fn leaf(s: impl Into<Symbol>) -> Self {
        TreeTerm::Leaf(s.into())
    }

    pub fn amp(inner: TreeTerm) -> Self {
        TreeTerm::Amp(Box::new(inner))
    }

    /// Concatenation of `parts` in normal form.
    pub fn seq(parts: impl IntoIterator<Item = TreeTerm>) -> Self {
        let mut flat = Vec::new();
        for p in parts {
            match p {
                TreeTerm::Eps => {}
                TreeTerm::Concat(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        match flat.len() {
            0 => TreeTerm::Eps,
            1 => flat.pop().expect("one part"),
            _ => TreeTerm::Concat(flat),
        }
    }

    pub fn concat(a: TreeTerm, b: TreeTerm) -> Self {
        TreeTerm::seq([a, b])
    }

    /// `&(p1 · … · pn)`, printed as `(p1,…,pn)`.
    pub fn tuple(parts: impl IntoIterator<Item = TreeTerm>) -> Self {
        TreeTerm::amp(TreeTerm::seq(parts))
    }

    /// A tuple of leaves.
    pub fn flat(names: &[&str]) -> Self {
        TreeTerm::tuple(names.iter().map(|n| TreeTerm::leaf(*n)))
    }

    /// Re-establishes the normal form of a term built by hand.
    pub fn normalize(&self) -> TreeTerm {
        match self {
            TreeTerm::Eps | TreeTerm::Leaf(_) => self.clone(),
            TreeTerm::Concat(parts) => TreeTerm::seq(parts.iter().map(TreeTerm::normalize)),
            TreeTerm::Amp(inner) => TreeTerm::amp(inner.normalize()),
        }
    }

    /// The `·`-factors of a term: none for ε, the parts of a concatenation,
    /// or the term itself.
    pub fn factors(&self) -> &[TreeTerm] {
        match self {
            TreeTerm::Eps => &[],
            TreeTerm::Concat(parts) => parts,
            other => std::slice::from_ref(other),
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, TreeTerm::Leaf(_))
    }

    /// Treepoid elements are the terms of arity at most one.
    pub fn is_token(&self) -> bool {
        !matches!(self, TreeTerm::Concat(_))
    }

    /// `|r|`.
    pub fn length(&self) -> usize {
        match self {
            TreeTerm::Eps => 0,
            TreeTerm::Leaf(_) => 1,
            TreeTerm::Concat(parts) => parts.iter().map(TreeTerm::length).sum(),
            TreeTerm::Amp(inner) => inner.length().max(1),
        }
    }

    /// `‖r‖`.
    pub fn depth(&self) -> usize {
        match self {
            TreeTerm::Eps => 0,
            TreeTerm::Leaf(_) => 1,
            TreeTerm::Concat(parts) => parts.iter().map(TreeTerm::depth).max().unwrap_or(0),
            TreeTerm::Amp(inner) => inner.depth() + 1,
        }
    }

    pub fn ary(&self) -> usize {
        match self {
            TreeTerm::Eps => 0,
            TreeTerm::Leaf(_) | TreeTerm::Amp(_) => 1,
            TreeTerm::Concat(parts) => parts.len(),
        }
    }

    /// Arity under one unwrapping of `&`; leaves and ε have tree-arity 0.
    pub fn tary(&self) -> Result<usize, TreeError> {
        match self {
            TreeTerm::Eps | TreeTerm::Leaf(_) => Ok(0),
            TreeTerm::Amp(inner) => Ok(inner.ary()),
            TreeTerm::Concat(_) => Err(TreeError::TaryOnNonToken(self.clone())),
        }
    }

    /// Leaf symbols from left to right.
    pub fn leaves(&self) -> Vec<&Symbol> {
        let mut out = Vec::new();
        self.collect_leaves(&mut out);
        out
    }

    fn collect_leaves<'a>(&'a self, out: &mut Vec<&'a Symbol>) {
        match self {
            TreeTerm::Eps => {}
            TreeTerm::Leaf(s) => out.push(s),
            TreeTerm::Concat(parts) => parts.iter().for_each(|p| p.collect_leaves(out)),
            TreeTerm::Amp(inner) => inner.collect_leaves(out),
        }
    }

    /// Relabels leaves left to right through `f`.
    pub fn map_leaves(&self, f: &mut impl FnMut(&Symbol) -> Symbol) -> TreeTerm {
        match self {
            TreeTerm::Eps => TreeTerm::Eps,
            TreeTerm::Leaf(s) => TreeTerm::Leaf(f(s)),
            TreeTerm::Concat(parts) => {
                TreeTerm::Concat(parts.iter().map(|p| p.map_leaves(f)).collect())
            }
            TreeTerm::Amp(inner) => TreeTerm::amp(inner.map_leaves(f)),
        }
    }

    /// True when some subterm is `&(ε)`.
    pub fn has_empty_tuple(&self) -> bool {
        match self {
            TreeTerm::Eps | TreeTerm::Leaf(_) => false,
            TreeTerm::Concat(parts) => parts.iter().any(TreeTerm::has_empty_tuple),
            TreeTerm::Amp(inner) => matches!(**inner, TreeTerm::Eps) || inner.has_empty_tuple(),
        }
    }
}

impl fmt::Display for TreeTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeTerm::Eps => f.write_str("eps"),
            TreeTerm::Leaf(s) => write!(f, "{s}"),
            TreeTerm::Concat(parts) => {
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        f.write_str("·")?;
                    }
                    write!(f, "{p}")?;
                }
                Ok(())
            }
            TreeTerm::Amp(inner) => {
                f.write_str("(")?;
                for (i, p) in inner.factors().iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{p}")?;
                }
                f.write_str(")")
            }
        }
    }
}
