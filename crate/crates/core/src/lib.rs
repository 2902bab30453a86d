//! Least-squares equidistant tree reconstruction.
//!
//! Given dissimilarities `d(i, j)` between `n` taxa, find the ultrametric
//! `x` minimizing `Σ (d(i,j) - x(i,j))²`. Every ultrametric lies in the cone
//! of some maximal chain of the partition lattice, and the optimum is the
//! orthogonal projection of `d` onto one of the chains whose level averages
//! come out nondecreasing. The crate provides:
//!
//! - [`upgma()`]: average linkage, which projects onto one such chain;
//! - [`search::extended_upgma`]: walks the cone graph from the UPGMA chain;
//! - [`search::exact_search`]: the exact optimum via a dynamic program over
//!   the partition lattice, checked against [`search::brute_force_optimum`];
//! - [`fan`]: projection-cone sets, the comb witness and sampling censuses;
//! - [`io`]: PHYLIP/CSV matrices, Newick output and JSON reports.
//!
//! All solvers are generic over [`Scalar`], so results can be certified in
//! exact rational arithmetic ([`num::BigRational`]).

// Symmetric matrix code reads better with explicit indices.
#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod fan;
pub mod io;
pub mod model;
pub mod projection;
pub mod scalar;
pub mod search;
pub mod upgma;

pub use error::{Error, Result};
pub use model::{
    enumerate_chains, tree_from_ultrametric, DissimilarityMap, EquidistantTree, MergeChain,
    Partition, TaxonSet, Ultrametric,
};
pub use num::BigRational;
pub use projection::{
    in_projection_cone, project_cone, project_subspace, squared_error, ProjectionOutcome,
};
pub use scalar::Scalar;
pub use upgma::{certify_upgma_projection, upgma, UpgmaTrace};
