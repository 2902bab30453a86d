//! Exact least-squares search on the Hasse diagram of the partition lattice.
//!
//! Partitions are processed rank by rank. Each edge `e = (F, F')` gets the
//! mean `x(e)` of `d` over the pairs joined by the merge and the cost
//!
//! ```text
//! ℓ(e) = w(e) + min { ℓ(f) : f enters F, x(f) ≤ x(e) },   w(e) = Σ (x(e) - d(i,j))²
//! ```
//!
//! An edge with no feasible predecessor is pruned along with every chain
//! through it. The answer is read back through per-edge back pointers from
//! the cheapest edge entering the one-block partition.
//!
//! Incoming labels of a partition are kept sorted by `x`, with a prefix
//! minimum of `ℓ`, so each predecessor query is a binary search. Within a
//! rank, partitions are expanded in parallel; results are merged in a fixed
//! order so output does not depend on the thread count.

use std::cmp::Ordering;

use rayon::prelude::*;

use crate::model::{pair_index, DissimilarityMap, MergeChain};
use crate::projection::{project_subspace_in, tolerance_for, ProjectionOutcome};
use crate::scalar::{le_tol, Scalar};
use crate::{Error, Result};

/// Largest taxon count for [`exact_search`] (Bell(12) = 4,213,597 partitions).
pub const EXACT_CAP: usize = 12;

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ExactStats {
    /// Partitions reached by at least one feasible edge, including the bottom.
    pub partitions: u64,
    /// Edges whose label was computed.
    pub edges: u64,
    /// Edges with no feasible predecessor.
    pub pruned: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExactOutcome<T = f64> {
    pub best: ProjectionOutcome<T>,
    /// `ℓ` of the winning edge; equals `best.squared_error` up to rounding.
    pub path_cost: T,
    pub stats: ExactStats,
}

struct Label<T> {
    x: T,
    ell: T,
    id: u32,
}

struct Node<T> {
    key: u64,
    /// Sorted by `x`, then by source key.
    labels: Vec<Label<T>>,
    /// `prefix[i]`: index of the smallest `ℓ` among `labels[..=i]`, first wins.
    prefix: Vec<u32>,
    bottom: bool,
}

struct Pending<T> {
    target: u64,
    source: u64,
    x: T,
    ell: T,
    back: u32,
    merge: (u8, u8),
}

#[derive(Clone, Copy)]
struct ArenaEdge {
    back: u32,
    a: u8,
    b: u8,
}

/// Block bitmasks of an encoded partition, ordered by minimum element.
/// The key stores each element's block index in 4 bits.
fn decode(key: u64, n: usize) -> Vec<u32> {
    let mut masks: Vec<u32> = Vec::new();
    for e in 0..n {
        let b = ((key >> (4 * e)) & 0xF) as usize;
        if b == masks.len() {
            masks.push(0);
        }
        masks[b] |= 1 << e;
    }
    masks
}

fn encode(masks: &[u32]) -> u64 {
    let mut key = 0u64;
    for (b, &m) in masks.iter().enumerate() {
        let mut bits = m;
        while bits != 0 {
            let e = bits.trailing_zeros();
            key |= (b as u64) << (4 * e);
            bits &= bits - 1;
        }
    }
    key
}

fn bits(mut m: u32) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let e = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(e)
        }
    })
}

/// Exact optimum in floating point.
pub fn exact_search(d: &DissimilarityMap) -> Result<ProjectionOutcome> {
    Ok(exact_search_in::<f64>(d)?.best)
}

pub fn exact_search_in<T: Scalar>(d: &DissimilarityMap) -> Result<ExactOutcome<T>> {
    let n = d.n();
    if n > EXACT_CAP {
        return Err(Error::Capacity {
            what: "exact search",
            n,
            cap: EXACT_CAP,
        });
    }
    let tol = tolerance_for::<T>(d);
    let values: Vec<T> = d.values().iter().map(|&v| T::from_f64(v)).collect();
    let mut pidx = vec![0usize; n * n];
    for a in 0..n {
        for b in 0..n {
            if a != b {
                pidx[a * n + b] = pair_index(a, b, n);
            }
        }
    }

    let mut stats = ExactStats::default();
    let mut arena: Vec<ArenaEdge> = Vec::new();
    let mut rank: Vec<Node<T>> = vec![Node {
        key: encode(&(0..n).map(|e| 1u32 << e).collect::<Vec<_>>()),
        labels: Vec::new(),
        prefix: Vec::new(),
        bottom: true,
    }];
    stats.partitions = 1;

    for _ in 0..n - 1 {
        let expanded: Vec<(Vec<Pending<T>>, u64)> = rank
            .par_iter()
            .map(|node| expand(node, n, &values, &pidx, &tol))
            .collect();
        let mut pending: Vec<Pending<T>> = Vec::new();
        for (p, pruned) in expanded {
            stats.edges += p.len() as u64 + pruned;
            stats.pruned += pruned;
            pending.extend(p);
        }
        drop(rank);
        pending.par_sort_unstable_by(|p, q| {
            p.target
                .cmp(&q.target)
                .then_with(|| p.x.partial_cmp(&q.x).unwrap_or(Ordering::Equal))
                .then_with(|| p.source.cmp(&q.source))
        });
        rank = group(pending, &mut arena);
        stats.partitions += rank.len() as u64;
    }

    let top = rank
        .first()
        .ok_or_else(|| Error::Degenerate("no feasible chain survived".into()))?;
    let best = &top.labels[*top.prefix.last().expect("labels") as usize];
    let mut merges = Vec::with_capacity(n - 1);
    let mut id = best.id;
    while id != NONE {
        let e = arena[id as usize];
        merges.push((e.a as usize, e.b as usize));
        id = e.back;
    }
    merges.reverse();
    let chain = MergeChain::from_merges(n, &merges)?;
    let outcome = project_subspace_in::<T>(d, &chain)?;
    debug_assert!(outcome.in_cone);
    Ok(ExactOutcome {
        best: outcome,
        path_cost: best.ell.clone(),
        stats,
    })
}

fn expand<T: Scalar>(
    node: &Node<T>,
    n: usize,
    values: &[T],
    pidx: &[usize],
    tol: &T,
) -> (Vec<Pending<T>>, u64) {
    let masks = decode(node.key, n);
    let k = masks.len();
    let mut out = Vec::with_capacity(k * (k - 1) / 2);
    let mut pruned = 0;
    for i in 0..k {
        for j in i + 1..k {
            let (ma, mb) = (masks[i], masks[j]);
            let cross = || {
                bits(ma).flat_map(move |a| bits(mb).map(move |b| values[pidx[a * n + b]].clone()))
            };
            let count = T::from_usize((ma.count_ones() * mb.count_ones()) as usize);
            let x = T::sum(cross()) / count;
            let (base, back) = if node.bottom {
                (T::zero(), NONE)
            } else {
                let pos = node.labels.partition_point(|f| le_tol(&f.x, &x, tol));
                if pos == 0 {
                    pruned += 1;
                    continue;
                }
                let h = &node.labels[node.prefix[pos - 1] as usize];
                (h.ell.clone(), h.id)
            };
            let w = T::sum(cross().map(|v| {
                let r = x.clone() - v;
                r.clone() * r
            }));
            let mut next = masks.clone();
            next[i] |= mb;
            next.remove(j);
            out.push(Pending {
                target: encode(&next),
                source: node.key,
                x,
                ell: base + w,
                back,
                merge: (ma.trailing_zeros() as u8, mb.trailing_zeros() as u8),
            });
        }
    }
    (out, pruned)
}

fn group<T: Scalar>(pending: Vec<Pending<T>>, arena: &mut Vec<ArenaEdge>) -> Vec<Node<T>> {
    let mut nodes: Vec<Node<T>> = Vec::new();
    for p in pending {
        if nodes.last().is_none_or(|node| node.key != p.target) {
            nodes.push(Node {
                key: p.target,
                labels: Vec::new(),
                prefix: Vec::new(),
                bottom: false,
            });
        }
        let node = nodes.last_mut().unwrap();
        let id = u32::try_from(arena.len()).expect("edge arena exceeds u32");
        arena.push(ArenaEdge {
            back: p.back,
            a: p.merge.0,
            b: p.merge.1,
        });
        let best = match node.prefix.last() {
            Some(&b) if node.labels[b as usize].ell <= p.ell => b,
            _ => node.labels.len() as u32,
        };
        node.labels.push(Label {
            x: p.x,
            ell: p.ell,
            id,
        });
        node.prefix.push(best);
    }
    nodes
}
