//! Solvers beyond plain UPGMA and the brute-force oracle.

mod brute;
mod exact;
mod extended;
mod graph;
mod neighbors;

pub use brute::{brute_force_optimum, brute_force_optimum_in, BRUTE_FORCE_CAP};
pub use exact::{exact_search, exact_search_in, ExactOutcome, ExactStats, EXACT_CAP};
pub use extended::{extended_upgma, extended_upgma_in, ExtendedOutcome};
pub use graph::{cone_graph, ConeGraph};
pub use neighbors::chain_neighbors;
