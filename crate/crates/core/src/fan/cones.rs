use std::collections::BTreeSet;

use crate::model::{enumerate_chains, pair_count, pair_index, DissimilarityMap, MergeChain};
use crate::projection::in_projection_cone;
use crate::{Error, Result};

/// The projection cones containing a data vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeSet {
    pub data: DissimilarityMap,
    /// Chains `F` with `d ∈ P_F`, sorted.
    pub chains: Vec<MergeChain>,
    /// Topologies of `chains`, taxa written `1..=n`.
    pub topologies: BTreeSet<String>,
}

impl ConeSet {
    pub fn len(&self) -> usize {
        self.chains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chains.is_empty()
    }

    pub fn contains(&self, chain: &MergeChain) -> bool {
        self.chains.binary_search(chain).is_ok()
    }
}

/// All chains whose projection cone contains `d`, by exhaustive enumeration.
///
/// With `strict`, every level average must exceed the previous one by more
/// than the tolerance, which selects cones containing `d` in their interior.
pub fn projection_cone_set(d: &DissimilarityMap, strict: bool) -> Result<ConeSet> {
    let mut chains = Vec::new();
    for chain in enumerate_chains(d.n())? {
        if in_projection_cone(d, &chain, strict)? {
            chains.push(chain);
        }
    }
    chains.sort();
    let topologies = chains.iter().map(MergeChain::topology).collect();
    Ok(ConeSet {
        data: d.clone(),
        chains,
        topologies,
    })
}

/// Data with `d(0, j) = a` and every other entry `b`.
///
/// For `a < b` it lies in the interior of the projection cone of each of the
/// `(n-1)!` caterpillars that grow from taxon 0, whose level averages are
/// `a, (a+b)/2, (a+2b)/3, …`.
pub fn comb_witness(n: usize, a: f64, b: f64) -> Result<DissimilarityMap> {
    if a.partial_cmp(&b) != Some(std::cmp::Ordering::Less) {
        return Err(Error::InvalidWitness { a, b });
    }
    if n < 2 {
        return Err(Error::InvalidTaxa(format!("need at least 2 taxa, got {n}")));
    }
    let mut values = vec![b; pair_count(n)];
    for j in 1..n {
        values[pair_index(0, j, n)] = a;
    }
    DissimilarityMap::from_pairs(values)
}
