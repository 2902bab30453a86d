//! Maximal chains of flats of the complete graph, stored as merge sequences.
//!
//! A chain starts at the all-singletons partition and merges two blocks per
//! step until one block remains. The pairs joined at step `k` form the level
//! set `L_k`; a fitted ultrametric is constant on every level set.

use std::collections::BTreeMap;

use super::partition::Partition;
use super::taxa::{linear_index, pair_count};
use crate::{Error, Result};

/// Largest taxon count accepted by [`enumerate_chains`] (1,587,600 chains at 8).
pub const ENUMERATION_CAP: usize = 8;

/// One merge: the two blocks joined, each sorted, `left[0] < right[0]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MergeStep {
    left: Vec<usize>,
    right: Vec<usize>,
}

impl MergeStep {
    pub fn left(&self) -> &[usize] {
        &self.left
    }

    pub fn right(&self) -> &[usize] {
        &self.right
    }

    /// Canonical representatives: the minimum of each block, smaller first.
    pub fn key(&self) -> (usize, usize) {
        (self.left[0], self.right[0])
    }

    /// `|L_k|` for this step.
    pub fn pair_count(&self) -> usize {
        self.left.len() * self.right.len()
    }

    /// Iterates the cross pairs `(a, b)` with `a` in `left`, `b` in `right`.
    pub fn cross_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.left
            .iter()
            .flat_map(move |&a| self.right.iter().map(move |&b| (a, b)))
    }

    pub fn merged(&self) -> Vec<usize> {
        let mut m = [self.left.as_slice(), self.right.as_slice()].concat();
        m.sort_unstable();
        m
    }
}

/// A maximal chain `F_0 ⊂ F_1 ⊂ … ⊂ F_{n-1}` as `n - 1` block merges.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MergeChain {
    n: usize,
    steps: Vec<MergeStep>,
}

impl MergeChain {
    /// Builds a chain from `n - 1` merges, each naming one member of each block.
    pub fn from_merges(n: usize, merges: &[(usize, usize)]) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidChain(format!(
                "need at least 2 taxa, got {n}"
            )));
        }
        if merges.len() != n - 1 {
            return Err(Error::InvalidChain(format!(
                "expected {} merges, got {}",
                n - 1,
                merges.len()
            )));
        }
        let mut owner: Vec<usize> = (0..n).collect();
        let mut members: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
        let mut steps = Vec::with_capacity(n - 1);
        for (k, &(a, b)) in merges.iter().enumerate() {
            if a >= n || b >= n {
                return Err(Error::InvalidChain(format!(
                    "step {k}: taxon out of range 0..{n}"
                )));
            }
            let (ra, rb) = (owner[a], owner[b]);
            if ra == rb {
                return Err(Error::InvalidChain(format!(
                    "step {k}: {a} and {b} are already in the same block"
                )));
            }
            steps.push(join(&mut owner, &mut members, ra, rb));
        }
        Ok(Self { n, steps })
    }

    /// Builds from a merge sequence already known to be valid.
    pub(crate) fn from_merges_unchecked(n: usize, merges: &[(usize, usize)]) -> Self {
        let mut owner: Vec<usize> = (0..n).collect();
        let mut members: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
        let steps = merges
            .iter()
            .map(|&(a, b)| {
                let (ra, rb) = (owner[a], owner[b]);
                join(&mut owner, &mut members, ra, rb)
            })
            .collect();
        Self { n, steps }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn steps(&self) -> &[MergeStep] {
        &self.steps
    }

    /// The canonical encoding used for hashing and deduplication.
    pub fn key(&self) -> Vec<(usize, usize)> {
        self.steps.iter().map(MergeStep::key).collect()
    }

    /// The same chain with taxon `i` renamed to `perm[i]`.
    pub fn relabeled(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n);
        let merges: Vec<(usize, usize)> = self
            .steps
            .iter()
            .map(|s| (perm[s.left[0]], perm[s.right[0]]))
            .collect();
        Self::from_merges_unchecked(self.n, &merges)
    }

    /// Partition after the first `k` merges.
    pub fn partition_after(&self, k: usize) -> Partition {
        assert!(k < self.n);
        let mut blocks: Vec<Vec<usize>> = (0..self.n).map(|i| vec![i]).collect();
        for step in &self.steps[..k] {
            let (a, b) = step.key();
            let ia = blocks.iter().position(|bl| bl[0] == a).unwrap();
            let ib = blocks.iter().position(|bl| bl[0] == b).unwrap();
            let moved = std::mem::take(&mut blocks[ib]);
            blocks[ia].extend(moved);
            blocks[ia].sort_unstable();
            blocks.remove(ib);
        }
        Partition::from_canonical(blocks)
    }

    /// The flats as partitions `F_0, …, F_{n-1}`.
    pub fn partitions(&self) -> Vec<Partition> {
        (0..self.n).map(|k| self.partition_after(k)).collect()
    }

    /// Level sets `L_1 … L_{n-1}` as sorted linear pair indices.
    pub fn level_sets(&self) -> Vec<Vec<usize>> {
        self.steps
            .iter()
            .map(|s| {
                let mut set: Vec<usize> = s
                    .cross_pairs()
                    .map(|(a, b)| {
                        if a < b {
                            linear_index(a, b, self.n)
                        } else {
                            linear_index(b, a, self.n)
                        }
                    })
                    .collect();
                set.sort_unstable();
                set
            })
            .collect()
    }

    /// For each linear pair index, the 0-based step that joins the pair.
    pub fn level_of_pairs(&self) -> Vec<usize> {
        let mut level = vec![usize::MAX; pair_count(self.n)];
        for (k, set) in self.level_sets().into_iter().enumerate() {
            for p in set {
                level[p] = k;
            }
        }
        level
    }

    /// Rooted topology with taxa labelled `1..=n`.
    pub fn topology(&self) -> String {
        let labels: Vec<String> = (1..=self.n).map(|i| i.to_string()).collect();
        self.topology_with(&labels)
    }

    /// Rooted binary topology obtained by forgetting the merge order.
    ///
    /// Children are ordered lexicographically by their own canonical string, so
    /// every ranking of the same tree prints identically.
    pub fn topology_with(&self, labels: &[String]) -> String {
        assert_eq!(labels.len(), self.n);
        let mut subtree: BTreeMap<usize, String> =
            (0..self.n).map(|i| (i, labels[i].clone())).collect();
        for step in &self.steps {
            let (a, b) = step.key();
            let sa = subtree.remove(&a).unwrap();
            let sb = subtree.remove(&b).unwrap();
            subtree.insert(a, join_sorted(sa, sb));
        }
        subtree.remove(&0).unwrap()
    }
}

fn join(owner: &mut [usize], members: &mut [Vec<usize>], ra: usize, rb: usize) -> MergeStep {
    let mut a = members[ra].clone();
    let mut b = members[rb].clone();
    a.sort_unstable();
    b.sort_unstable();
    let step = if a[0] < b[0] {
        MergeStep { left: a, right: b }
    } else {
        MergeStep { left: b, right: a }
    };
    let (keep, drop) = if members[ra].len() >= members[rb].len() {
        (ra, rb)
    } else {
        (rb, ra)
    };
    let moved = std::mem::take(&mut members[drop]);
    for &x in &moved {
        owner[x] = keep;
    }
    members[keep].extend(moved);
    step
}

pub(crate) fn join_sorted(a: String, b: String) -> String {
    if a <= b {
        format!("({a},{b})")
    } else {
        format!("({b},{a})")
    }
}

/// `n! (n-1)! / 2^(n-1)`, the number of maximal chains of the partition lattice.
pub fn chain_count(n: usize) -> u128 {
    // product over k = 2..=n of C(k, 2)
    (2..=n as u128).map(|k| k * (k - 1) / 2).product()
}

/// Streams every maximal chain of the partition lattice on `n` taxa exactly once.
///
/// Order is deterministic: depth-first, block pairs tried in lexicographic
/// order of position in the canonical partition.
pub fn enumerate_chains(n: usize) -> Result<Chains> {
    if n < 2 {
        return Err(Error::InvalidChain(format!(
            "need at least 2 taxa, got {n}"
        )));
    }
    if n > ENUMERATION_CAP {
        return Err(Error::Capacity {
            what: "chain enumeration",
            n,
            cap: ENUMERATION_CAP,
        });
    }
    Ok(Chains {
        n,
        stack: vec![Frame {
            blocks: (0..n).map(|i| vec![i]).collect(),
            next: 0,
        }],
        merges: Vec::with_capacity(n - 1),
    })
}

struct Frame {
    blocks: Vec<Vec<usize>>,
    next: usize,
}

/// Iterator returned by [`enumerate_chains`].
pub struct Chains {
    n: usize,
    stack: Vec<Frame>,
    merges: Vec<(usize, usize)>,
}

impl Iterator for Chains {
    type Item = MergeChain;

    fn next(&mut self) -> Option<MergeChain> {
        while let Some(frame) = self.stack.last_mut() {
            let k = frame.blocks.len();
            if frame.next >= k * (k - 1) / 2 {
                self.stack.pop();
                if !self.stack.is_empty() {
                    self.merges.pop();
                }
                continue;
            }
            let (i, j) = unrank_pair(frame.next, k);
            frame.next += 1;
            self.merges.push((frame.blocks[i][0], frame.blocks[j][0]));
            if k == 2 {
                let chain = MergeChain::from_merges_unchecked(self.n, &self.merges);
                self.merges.pop();
                return Some(chain);
            }
            let mut blocks = frame.blocks.clone();
            let moved = blocks.remove(j);
            blocks[i].extend(moved);
            blocks[i].sort_unstable();
            self.stack.push(Frame { blocks, next: 0 });
        }
        None
    }
}

/// Inverse of the row-major pair order over `k` items.
fn unrank_pair(mut r: usize, k: usize) -> (usize, usize) {
    let mut i = 0;
    while r >= k - 1 - i {
        r -= k - 1 - i;
        i += 1;
    }
    (i, i + 1 + r)
}
