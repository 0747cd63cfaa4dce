//! Finite token classes and tree-token classes with their categorical
//! structure, operator suite, structured-object encodings and reification.

pub mod class;
pub mod heap;
pub mod limit;
pub mod ops;
pub mod oracle;
pub mod reify;
pub mod rep;
pub mod structure;
pub mod subobject;
pub mod symbol;
pub mod token;
pub mod tree;
pub mod verdict;

pub use class::{
    compose, extend_with_core, hom_enumerate, hom_enumerate_bounded, identity, inverse, is_iso,
    mk_class, mk_map, mk_map_bounded, ClassError, HomSet, TokenClass, TokenMap,
};
pub use heap::{heap_query, Heap, HeapQuery, QueryAnswer, DEFAULT_BOUND};
pub use limit::{limit, Diagram, Limit};
pub use structure::{
    constant_class, coproduct, exponent, product, Constant, Coproduct, Exponential, Product,
};
pub use subobject::{
    abstract_stuff, is_subclass, pullback_inclusion_check, subclass_via_pullbacks, AbstractKind,
};
pub use symbol::{atoms, Marker, MarkerKind, Symbol, SymbolMap};
pub use token::{tok, Alphabet, Token};
pub use verdict::{Verdict, Witness};
