//! Precomputed level sets of every chain, for fast repeated membership tests.

use crate::model::{enumerate_chains, MergeChain};
use crate::Result;

/// How a data vector sits relative to one projection cone.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Membership {
    /// Every average is below the next by more than the tolerance.
    Interior,
    /// Nondecreasing, but some consecutive averages are within tolerance.
    Boundary,
    Outside,
}

pub(crate) struct ChainTable {
    pub chains: Vec<MergeChain>,
    /// Per chain, per level, linear pair indices.
    levels: Vec<Vec<Vec<usize>>>,
    /// Per chain, index into `topologies`.
    pub topology_of: Vec<usize>,
    pub topologies: Vec<String>,
}

impl ChainTable {
    pub fn new(n: usize) -> Result<Self> {
        let mut chains: Vec<MergeChain> = enumerate_chains(n)?.collect();
        chains.sort();
        let levels = chains.iter().map(MergeChain::level_sets).collect();
        let names: Vec<String> = chains.iter().map(MergeChain::topology).collect();
        let mut topologies = names.clone();
        topologies.sort();
        topologies.dedup();
        let topology_of = names
            .iter()
            .map(|t| topologies.binary_search(t).unwrap())
            .collect();
        Ok(Self {
            chains,
            levels,
            topology_of,
            topologies,
        })
    }

    pub fn len(&self) -> usize {
        self.chains.len()
    }

    pub fn classify(&self, c: usize, values: &[f64], tol: f64) -> Membership {
        let mut prev: Option<f64> = None;
        let mut boundary = false;
        for set in &self.levels[c] {
            let avg = set.iter().map(|&p| values[p]).sum::<f64>() / set.len() as f64;
            if let Some(p) = prev {
                if p - avg > tol {
                    return Membership::Outside;
                }
                if avg - p <= tol {
                    boundary = true;
                }
            }
            prev = Some(avg);
        }
        if boundary {
            Membership::Boundary
        } else {
            Membership::Interior
        }
    }

    /// Unit normals of the distinct hyperplanes `avg_k = avg_{k+1}` bounding
    /// the projection cones, in pair coordinates.
    pub fn hyperplanes(&self, dim: usize) -> Vec<Vec<f64>> {
        let mut out: Vec<Vec<f64>> = Vec::new();
        for chain in &self.levels {
            for w in chain.windows(2) {
                let mut a = vec![0.0; dim];
                for &p in &w[0] {
                    a[p] += 1.0 / w[0].len() as f64;
                }
                for &p in &w[1] {
                    a[p] -= 1.0 / w[1].len() as f64;
                }
                let norm = a.iter().map(|x| x * x).sum::<f64>().sqrt();
                a.iter_mut().for_each(|x| *x /= norm);
                let lead = a.iter().copied().find(|x| x.abs() > 1e-12).unwrap_or(1.0);
                if lead < 0.0 {
                    a.iter_mut().for_each(|x| *x = -*x);
                }
                let seen = out
                    .iter()
                    .any(|b| b.iter().zip(&a).all(|(x, y)| (x - y).abs() < 1e-12));
                if !seen {
                    out.push(a);
                }
            }
        }
        out
    }

    /// Index of the chain equal to `chain`.
    pub fn index_of(&self, chain: &MergeChain) -> usize {
        self.chains
            .binary_search(chain)
            .expect("enumeration covers every chain")
    }
}
