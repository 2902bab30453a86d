use std::collections::{HashSet, VecDeque};

use super::neighbors::chain_neighbors;
use crate::model::{DissimilarityMap, MergeChain};
use crate::projection::{in_projection_cone_in, project_subspace_in, ProjectionOutcome};
use crate::scalar::Scalar;
use crate::upgma::upgma_in;
use crate::Result;

#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedOutcome<T = f64> {
    /// Lowest-error subspace projection among the visited chains.
    pub best: ProjectionOutcome<T>,
    /// Size of the UPGMA chain's component of the cone graph.
    pub visited: usize,
    pub upgma: ProjectionOutcome<T>,
}

/// Extended UPGMA: breadth-first search over the component of the cone
/// graph that contains the UPGMA chain, keeping the best projection.
pub fn extended_upgma(d: &DissimilarityMap) -> Result<ExtendedOutcome> {
    extended_upgma_in::<f64>(d)
}

pub fn extended_upgma_in<T: Scalar>(d: &DissimilarityMap) -> Result<ExtendedOutcome<T>> {
    let start = upgma_in::<T>(d)?.result;
    let mut best = start.clone();
    let mut visited: HashSet<MergeChain> = HashSet::from([start.chain.clone()]);
    let mut active = VecDeque::from([start.chain.clone()]);
    while let Some(chain) = active.pop_front() {
        for nb in chain_neighbors(&chain) {
            if visited.contains(&nb) || !in_projection_cone_in::<T>(d, &nb, false)? {
                continue;
            }
            let proj = project_subspace_in::<T>(d, &nb)?;
            if proj.squared_error < best.squared_error {
                best = proj;
            }
            visited.insert(nb.clone());
            active.push_back(nb);
        }
    }
    Ok(ExtendedOutcome {
        best,
        visited: visited.len(),
        upgma: start,
    })
}
