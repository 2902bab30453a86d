use std::collections::HashMap;

use super::neighbors::chain_neighbors;
use crate::model::{enumerate_chains, DissimilarityMap, MergeChain};
use crate::projection::in_projection_cone;
use crate::Result;

/// The graph on chains whose projection cone contains the data, with edges
/// between chains that differ in one flat.
#[derive(Debug, Clone, PartialEq)]
pub struct ConeGraph {
    pub vertices: Vec<MergeChain>,
    /// Index pairs `(u, v)` with `u < v`.
    pub edges: Vec<(usize, usize)>,
    /// Component label per vertex, numbered in order of first vertex.
    pub component: Vec<usize>,
}

impl ConeGraph {
    pub fn component_count(&self) -> usize {
        self.component.iter().max().map_or(0, |m| m + 1)
    }

    /// Vertex indices grouped by component.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut groups = vec![Vec::new(); self.component_count()];
        for (v, &c) in self.component.iter().enumerate() {
            groups[c].push(v);
        }
        groups
    }

    /// Component sizes, largest first.
    pub fn component_sizes(&self) -> Vec<usize> {
        let mut sizes: Vec<usize> = self.components().iter().map(Vec::len).collect();
        sizes.sort_unstable_by(|a, b| b.cmp(a));
        sizes
    }

    pub fn index_of(&self, chain: &MergeChain) -> Option<usize> {
        self.vertices.iter().position(|c| c == chain)
    }
}

/// Builds the full cone graph by enumerating every chain.
pub fn cone_graph(d: &DissimilarityMap) -> Result<ConeGraph> {
    let mut vertices = Vec::new();
    for chain in enumerate_chains(d.n())? {
        if in_projection_cone(d, &chain, false)? {
            vertices.push(chain);
        }
    }
    let index: HashMap<&MergeChain, usize> =
        vertices.iter().enumerate().map(|(i, c)| (c, i)).collect();
    let mut adjacency = vec![Vec::new(); vertices.len()];
    let mut edges = Vec::new();
    for (u, chain) in vertices.iter().enumerate() {
        for nb in chain_neighbors(chain) {
            if let Some(&v) = index.get(&nb) {
                adjacency[u].push(v);
                if u < v {
                    edges.push((u, v));
                }
            }
        }
    }
    let mut component = vec![usize::MAX; vertices.len()];
    let mut next = 0;
    for start in 0..vertices.len() {
        if component[start] != usize::MAX {
            continue;
        }
        let mut stack = vec![start];
        component[start] = next;
        while let Some(u) = stack.pop() {
            for &v in &adjacency[u] {
                if component[v] == usize::MAX {
                    component[v] = next;
                    stack.push(v);
                }
            }
        }
        next += 1;
    }
    Ok(ConeGraph {
        vertices,
        edges,
        component,
    })
}
