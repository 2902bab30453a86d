//! Taxa, pairs, partitions, chains of flats and equidistant trees.

mod chain;
mod dissimilarity;
mod partition;
mod taxa;
mod ultrametric;

pub use chain::{chain_count, enumerate_chains, Chains, MergeChain, MergeStep, ENUMERATION_CAP};
pub use dissimilarity::DissimilarityMap;
pub use partition::Partition;
pub use taxa::{linear_index, pair_count, pair_index, PairIndex, TaxonSet};
pub use ultrametric::{
    is_ultrametric, tree_from_ultrametric, EquidistantTree, TreeNode, Ultrametric,
};
