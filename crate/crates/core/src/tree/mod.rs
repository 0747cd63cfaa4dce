//! Tree tokens: terms over `·`, `&`, `ε`, their metrics, flattening,
//! correspondences, scatterings, t-classes and t-maps.

mod algebra;
mod tclass;
mod term;

use thiserror::Error;

use crate::symbol::Symbol;

pub use algebra::{
    check_images, connect, corr, flatten, flatten_class, is_universal, one_to, same_flattening,
    scatter_by, scatter_flat, scatter_star, tmorph_apply, universal_of, Correspondence,
};
pub use tclass::{
    base_of, extend_tree_assignment, mk_tclass, mk_tmap, tclass_coproduct, tdelete, tforget, tmeet,
    tmerge, TreeClass, TreeMap,
};
pub use term::TreeTerm;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("{0} is not a token")]
    NotAToken(TreeTerm),
    #[error("tree-arity of non-token {0}")]
    TaryOnNonToken(TreeTerm),
    #[error("image of {0} is not a treepoid element")]
    ImageNotTreepoid(Symbol),
    #[error("image of {0} is empty")]
    EmptyImage(Symbol),
    #[error("image of {0} is a core symbol")]
    ImageInCore(Symbol),
    #[error("no image assigned to {0}")]
    Unassigned(Symbol),
    #[error("not a correspondence from a universal token")]
    NotACorrespondence,
    #[error("undeclared symbol {0}")]
    ForeignSymbol(Symbol),
    #[error("symbol {0} is in both base and core")]
    AlphabetOverlap(Symbol),
    #[error("{0} is not a treepoid element")]
    NotATreepoidElement(TreeTerm),
    #[error("heap term {0} is not sent into the target heap")]
    HeapViolation(TreeTerm),
    #[error("classes have different cores")]
    CoreMismatch,
    #[error("map is not defined on {0}")]
    NotTotal(Symbol),
}
