//! Dimension of posets whose cover graphs have treewidth at most 2.
//!
//! The crate builds series-parallel supergraphs of treewidth-2 cover graphs,
//! turns them into s-t decompositions, partitions the incomparable pairs by
//! the shape of their least common bag, and produces a realizer of at most 12
//! linear extensions. An exact dimension search is provided for checking.

mod bits;

pub mod decomp;
pub mod dimension;
pub mod generators;
pub mod graph;
pub mod io;
pub mod poset;
pub mod realizer;
pub mod sp;

pub use decomp::{DecompError, NodeId, STDecomposition, Side};
pub use dimension::{contains_standard_example, dimension_exact, DimensionError, DimensionOptions};
pub use generators::{Family, GenError, GenSpec};
pub use graph::{Graph, GraphError, Vertex};
pub use poset::{AlternatingCycle, Element, IncPair, LinearExtension, Poset, PosetError};
pub use realizer::{
    classify_pair, metamorphic_check, partition_inc_pairs, realize_tw2, signature_census,
    ClassifiedInstance, PairClass, RealizeError, Realizer,
};
pub use sp::{
    augment_with_fresh_terminals, embed_into_sp, has_treewidth_at_most_2, Embedding, SpTree,
};
