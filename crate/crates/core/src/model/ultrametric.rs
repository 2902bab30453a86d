use super::chain::{join_sorted, MergeChain};
use super::taxa::{linear_index, pair_count};
use crate::scalar::RELATIVE_TOLERANCE;
use crate::{Error, Result};

/// A point of the closed cone `C_F`: one value per level set, nondecreasing.
#[derive(Debug, Clone, PartialEq)]
pub struct Ultrametric {
    chain: MergeChain,
    levels: Vec<f64>,
}

impl Ultrametric {
    /// Checks that `levels` has one entry per merge and is nondecreasing,
    /// up to the relative floating-point tolerance.
    pub fn new(chain: MergeChain, levels: Vec<f64>) -> Result<Self> {
        let steps = chain.n() - 1;
        if levels.len() != steps {
            return Err(Error::DimensionMismatch {
                expected: steps,
                found: levels.len(),
            });
        }
        if let Some(k) = levels.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(k));
        }
        let scale = levels.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let tol = RELATIVE_TOLERANCE * scale;
        for (k, w) in levels.windows(2).enumerate() {
            if w[0] - w[1] > tol {
                return Err(Error::NotUltrametric {
                    step: k + 1,
                    prev: w[0],
                    next: w[1],
                });
            }
        }
        Ok(Self { chain, levels })
    }

    pub fn chain(&self) -> &MergeChain {
        &self.chain
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    /// The pair-indexed vector `x(i, j)`.
    pub fn expand(&self) -> Vec<f64> {
        let n = self.chain.n();
        let mut x = vec![0.0; pair_count(n)];
        for (step, &v) in self.chain.steps().iter().zip(&self.levels) {
            for (a, b) in step.cross_pairs() {
                let (i, j) = if a < b { (a, b) } else { (b, a) };
                x[linear_index(i, j, n)] = v;
            }
        }
        x
    }
}

/// Checks the three-point condition: every triple attains its maximum twice.
pub fn is_ultrametric(x: &[f64], n: usize, tol: f64) -> bool {
    let at = |i: usize, j: usize| x[linear_index(i, j, n)];
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let mut t = [at(i, j), at(i, k), at(j, k)];
                t.sort_by(|a, b| a.partial_cmp(b).unwrap());
                if t[2] - t[1] > tol {
                    return false;
                }
            }
        }
    }
    true
}

#[derive(Debug, Clone, PartialEq)]
pub struct TreeNode {
    pub height: f64,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
    /// Taxon index for leaves.
    pub taxon: Option<usize>,
}

/// A rooted equidistant tree. Nodes `0..n` are the leaves, in taxon order.
#[derive(Debug, Clone, PartialEq)]
pub struct EquidistantTree {
    nodes: Vec<TreeNode>,
    root: usize,
    n: usize,
}

impl EquidistantTree {
    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn leaf_count(&self) -> usize {
        self.n
    }

    /// `w(e)` for the edge above `node`; zero at the root.
    pub fn edge_weight(&self, node: usize) -> f64 {
        match self.nodes[node].parent {
            Some(p) => self.nodes[p].height - self.nodes[node].height,
            None => 0.0,
        }
    }

    /// Path length from a leaf to the root.
    pub fn root_distance(&self, leaf: usize) -> f64 {
        let mut total = 0.0;
        let mut v = leaf;
        while let Some(p) = self.nodes[v].parent {
            total += self.edge_weight(v);
            v = p;
        }
        total
    }

    fn ancestors(&self, leaf: usize) -> Vec<usize> {
        let mut path = vec![leaf];
        let mut v = leaf;
        while let Some(p) = self.nodes[v].parent {
            path.push(p);
            v = p;
        }
        path
    }

    /// Sum of edge weights on the path between two leaves.
    pub fn leaf_distance(&self, a: usize, b: usize) -> f64 {
        if a == b {
            return 0.0;
        }
        let pa = self.ancestors(a);
        let pb = self.ancestors(b);
        let lca = *pa.iter().find(|v| pb.contains(v)).expect("connected tree");
        let up = |path: &[usize]| -> f64 {
            path.iter()
                .take_while(|&&v| v != lca)
                .map(|&v| self.edge_weight(v))
                .sum()
        };
        up(&pa) + up(&pb)
    }

    /// Pairwise leaf distances in row-major pair order.
    pub fn pairwise_distances(&self) -> Vec<f64> {
        let n = self.n;
        let mut out = Vec::with_capacity(pair_count(n));
        for i in 0..n {
            for j in i + 1..n {
                out.push(self.leaf_distance(i, j));
            }
        }
        out
    }

    /// Canonical topology string of the subtree under `node`.
    pub fn subtree_topology(&self, node: usize, labels: &[String]) -> String {
        let v = &self.nodes[node];
        match v.taxon {
            Some(t) => labels[t].clone(),
            None => {
                let mut parts: Vec<String> = v
                    .children
                    .iter()
                    .map(|&c| self.subtree_topology(c, labels))
                    .collect();
                if parts.len() == 2 {
                    let b = parts.pop().unwrap();
                    let a = parts.pop().unwrap();
                    return join_sorted(a, b);
                }
                parts.sort();
                format!("({})", parts.join(","))
            }
        }
    }
}

/// Builds the equidistant tree of an ultrametric: the node created by merge
/// `k` sits at height `v_k / 2`, so `x(i, j) = 2 · height(lca(i, j))`.
pub fn tree_from_ultrametric(x: &Ultrametric) -> EquidistantTree {
    let chain = x.chain();
    let n = chain.n();
    let mut nodes: Vec<TreeNode> = (0..n)
        .map(|i| TreeNode {
            height: 0.0,
            parent: None,
            children: Vec::new(),
            taxon: Some(i),
        })
        .collect();
    // current subtree root for each block representative
    let mut top: Vec<usize> = (0..n).collect();
    for (step, &v) in chain.steps().iter().zip(x.levels()) {
        let (a, b) = step.key();
        let id = nodes.len();
        let (ca, cb) = (top[a], top[b]);
        nodes.push(TreeNode {
            height: v / 2.0,
            parent: None,
            children: vec![ca, cb],
            taxon: None,
        });
        nodes[ca].parent = Some(id);
        nodes[cb].parent = Some(id);
        top[a] = id;
    }
    let root = nodes.len() - 1;
    EquidistantTree { nodes, root, n }
}
