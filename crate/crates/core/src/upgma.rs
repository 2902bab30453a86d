//! Average-linkage clustering (UPGMA) and certification of its output as an
//! orthogonal projection onto its own cone.
//!
//! Block-pair averages are taken over the original entries `d(i, j)` of the
//! pairs between the two blocks. When several pairs attain the minimum
//! (within tolerance), the pair whose representatives `(min A, min B)` are
//! lexicographically least is merged.

use crate::model::{DissimilarityMap, MergeChain};
use crate::projection::{project_subspace_in, tolerance_for, ProjectionOutcome};
use crate::scalar::{le_tol, Scalar};
use crate::{Error, Result};

/// Largest taxon count for [`upgma_tie_chains`].
pub const TIE_ENUMERATION_CAP: usize = 6;

#[derive(Debug, Clone, PartialEq)]
pub struct UpgmaTrace<T = f64> {
    pub chain: MergeChain,
    /// The minimum block-pair average chosen at each iteration.
    pub minave_per_step: Vec<T>,
    pub result: ProjectionOutcome<T>,
}

struct Clusters<T> {
    /// Active slots, ordered by representative.
    active: Vec<usize>,
    size: Vec<usize>,
    /// `value[a][b]`: either the cross sum or the cross average between slots.
    value: Vec<Vec<T>>,
}

impl<T: Scalar> Clusters<T> {
    fn new(d: &DissimilarityMap) -> Self {
        let n = d.n();
        let mut value = vec![vec![T::zero(); n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let v = T::from_f64(d.get(i, j));
                value[i][j] = v.clone();
                value[j][i] = v;
            }
        }
        Self {
            active: (0..n).collect(),
            size: vec![1; n],
            value,
        }
    }

    /// Every active pair `(a, b)`, `a < b`, with its average, in representative order.
    fn candidates(&self, average: impl Fn(usize, usize) -> T) -> Vec<(usize, usize, T)> {
        let act = &self.active;
        let mut out = Vec::with_capacity(act.len() * (act.len() - 1) / 2);
        for p in 0..act.len() {
            for q in p + 1..act.len() {
                out.push((act[p], act[q], average(act[p], act[q])));
            }
        }
        out
    }
}

/// Smallest average, then the first candidate (in representative order) within `tol` of it.
fn pick<T: Scalar>(cands: Vec<(usize, usize, T)>, tol: &T) -> (usize, usize, T) {
    let min = cands
        .iter()
        .map(|c| &c.2)
        .fold(None::<&T>, |m, v| match m {
            Some(m) if m <= v => Some(m),
            _ => Some(v),
        })
        .expect("at least two clusters")
        .clone();
    cands
        .into_iter()
        .find(|c| le_tol(&c.2, &min, tol))
        .expect("minimum is a candidate")
}

/// Runs UPGMA in floating point.
pub fn upgma(d: &DissimilarityMap) -> Result<UpgmaTrace> {
    upgma_in::<f64>(d)
}

pub fn upgma_in<T: Scalar>(d: &DissimilarityMap) -> Result<UpgmaTrace<T>> {
    let n = d.n();
    if n < 2 {
        return Err(Error::Degenerate(format!("need at least 2 taxa, got {n}")));
    }
    let tol = tolerance_for::<T>(d);
    let mut cl = Clusters::<T>::new(d);
    let mut merges = Vec::with_capacity(n - 1);
    let mut minave = Vec::with_capacity(n - 1);
    while cl.active.len() > 1 {
        let size = &cl.size;
        let value = &cl.value;
        let cands: Vec<_> =
            cl.candidates(|a, b| value[a][b].clone() / T::from_usize(size[a] * size[b]));
        let (a, b, avg) = pick(cands, &tol);
        merges.push((a, b));
        minave.push(avg);
        // a < b; slot a survives and carries the cross sums of the union
        for &w in &cl.active {
            if w != a && w != b {
                let s = cl.value[a][w].clone() + cl.value[b][w].clone();
                cl.value[a][w] = s.clone();
                cl.value[w][a] = s;
            }
        }
        cl.size[a] += cl.size[b];
        cl.active.retain(|&w| w != b);
    }
    let chain = MergeChain::from_merges(n, &merges)?;
    Ok(trace_from(d, chain, minave, &tol))
}

fn trace_from<T: Scalar>(
    d: &DissimilarityMap,
    chain: MergeChain,
    minave: Vec<T>,
    tol: &T,
) -> UpgmaTrace<T> {
    let in_cone = minave.windows(2).all(|w| le_tol(&w[0], &w[1], tol));
    let squared_error = T::sum(chain.steps().iter().zip(&minave).flat_map(|(step, v)| {
        step.cross_pairs().map(move |(a, b)| {
            let r = T::from_f64(d.get(a, b)) - v.clone();
            r.clone() * r
        })
    }));
    UpgmaTrace {
        result: ProjectionOutcome {
            chain: chain.clone(),
            levels: minave.clone(),
            in_cone,
            squared_error,
        },
        chain,
        minave_per_step: minave,
    }
}

/// UPGMA using the recursive weighted-average update
/// `avg(s∪t, w) = (|s|·avg(s,w) + |t|·avg(t,w)) / (|s| + |t|)`
/// instead of summing original entries. Cross-check only.
pub fn upgma_weighted_update(d: &DissimilarityMap) -> Result<UpgmaTrace> {
    let n = d.n();
    let tol = tolerance_for::<f64>(d);
    let mut cl = Clusters::<f64>::new(d);
    let mut merges = Vec::with_capacity(n - 1);
    let mut minave = Vec::with_capacity(n - 1);
    while cl.active.len() > 1 {
        let value = &cl.value;
        let cands = cl.candidates(|a, b| value[a][b]);
        let (a, b, avg) = pick(cands, &tol);
        merges.push((a, b));
        minave.push(avg);
        let (sa, sb) = (cl.size[a] as f64, cl.size[b] as f64);
        for &w in &cl.active {
            if w != a && w != b {
                let v = (sa * cl.value[a][w] + sb * cl.value[b][w]) / (sa + sb);
                cl.value[a][w] = v;
                cl.value[w][a] = v;
            }
        }
        cl.size[a] += cl.size[b];
        cl.active.retain(|&w| w != b);
    }
    let chain = MergeChain::from_merges(n, &merges)?;
    Ok(trace_from(d, chain, minave, &tol))
}

/// True iff the trace's levels are the subspace projection of `d` onto its
/// chain and are nondecreasing. Exact for rationals; `1e-12` (relative to the
/// data scale) in floating point.
pub fn certify_upgma_projection<T: Scalar>(trace: &UpgmaTrace<T>, d: &DissimilarityMap) -> bool {
    let Ok(proj) = project_subspace_in::<T>(d, &trace.chain) else {
        return false;
    };
    if trace.result.chain != trace.chain || trace.result.levels != trace.minave_per_step {
        return false;
    }
    let slack = T::from_f64(if T::EXACT {
        0.0
    } else {
        1e-12 * d.max_abs().max(1.0)
    });
    let close = |a: &T, b: &T| (a.clone() - b.clone()).abs() <= slack;
    let same_levels = proj
        .levels
        .iter()
        .zip(&trace.result.levels)
        .all(|(a, b)| close(a, b));
    let err_slack = if T::EXACT {
        T::zero()
    } else {
        T::from_f64(1e-12 * proj.squared_error.to_f64().abs().max(1.0))
    };
    let same_error =
        (proj.squared_error.clone() - trace.result.squared_error.clone()).abs() <= err_slack;
    same_levels && same_error && proj.in_cone && trace.result.in_cone
}

/// Every chain UPGMA could return under some resolution of ties.
pub fn upgma_tie_chains(d: &DissimilarityMap) -> Result<Vec<MergeChain>> {
    let n = d.n();
    if n > TIE_ENUMERATION_CAP {
        return Err(Error::Capacity {
            what: "UPGMA tie enumeration",
            n,
            cap: TIE_ENUMERATION_CAP,
        });
    }
    let tol = tolerance_for::<f64>(d);
    let mut out = Vec::new();
    let mut merges = Vec::new();
    ties_rec(d, Clusters::<f64>::new(d), &tol, &mut merges, &mut out);
    out.sort();
    out.dedup();
    Ok(out)
}

fn ties_rec(
    d: &DissimilarityMap,
    cl: Clusters<f64>,
    tol: &f64,
    merges: &mut Vec<(usize, usize)>,
    out: &mut Vec<MergeChain>,
) {
    if cl.active.len() == 1 {
        out.push(MergeChain::from_merges_unchecked(d.n(), merges));
        return;
    }
    let cands = cl.candidates(|a, b| cl.value[a][b] / (cl.size[a] * cl.size[b]) as f64);
    let min = cands.iter().map(|c| c.2).fold(f64::INFINITY, f64::min);
    for &(a, b, avg) in &cands {
        if avg - min > *tol {
            continue;
        }
        let mut next = Clusters {
            active: cl.active.clone(),
            size: cl.size.clone(),
            value: cl.value.clone(),
        };
        for &w in &cl.active {
            if w != a && w != b {
                let s = next.value[a][w] + next.value[b][w];
                next.value[a][w] = s;
                next.value[w][a] = s;
            }
        }
        next.size[a] += next.size[b];
        next.active.retain(|&w| w != b);
        merges.push((a, b));
        ties_rec(d, next, tol, merges, out);
        merges.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::pair_count;
    use num::BigRational;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ex25() -> DissimilarityMap {
        DissimilarityMap::from_pairs(vec![1.0, 2.0, 20.0, 10.0, 28.0, 5.0]).unwrap()
    }

    #[test]
    fn example_data() {
        let t = upgma_in::<BigRational>(&ex25()).unwrap();
        assert_eq!(t.chain.key(), vec![(0, 1), (2, 3), (0, 2)]);
        let levels: Vec<f64> = t.minave_per_step.iter().map(Scalar::to_f64).collect();
        assert_eq!(levels, vec![1.0, 5.0, 15.0]);
        assert_eq!(t.result.squared_error, BigRational::from_usize(388));
        assert!(certify_upgma_projection(&t, &ex25()));
        let f = upgma(&ex25()).unwrap();
        assert!(certify_upgma_projection(&f, &ex25()));
        assert_eq!(f.result.squared_error, 388.0);
    }

    #[test]
    fn three_taxa() {
        let d = DissimilarityMap::from_pairs(vec![1.0, 4.0, 6.0]).unwrap();
        let t = upgma(&d).unwrap();
        assert_eq!(t.chain.key(), vec![(0, 1), (0, 2)]);
        assert_eq!(t.minave_per_step, vec![1.0, 5.0]);
        assert_eq!(t.result.squared_error, 2.0);
    }

    #[test]
    fn constant_data_takes_first_merges() {
        let d = DissimilarityMap::from_pairs(vec![0.1; 10]).unwrap();
        let t = upgma(&d).unwrap();
        assert_eq!(t.chain.key(), vec![(0, 1), (0, 2), (0, 3), (0, 4)]);
        for v in &t.minave_per_step {
            assert!((v - 0.1).abs() < 1e-15);
        }
        assert!(t.result.squared_error < 1e-28);
        assert_eq!(upgma_tie_chains(&d).unwrap().len(), 180);
    }

    #[test]
    fn two_taxa() {
        let d = DissimilarityMap::from_pairs(vec![5.0]).unwrap();
        let t = upgma(&d).unwrap();
        assert_eq!(t.minave_per_step, vec![5.0]);
        assert_eq!(t.result.squared_error, 0.0);
    }

    #[test]
    fn corrupted_trace_fails_certification() {
        let mut t = upgma(&ex25()).unwrap();
        t.minave_per_step.swap(1, 2);
        t.result.levels.swap(1, 2);
        t.result.in_cone = false;
        assert!(!certify_upgma_projection(&t, &ex25()));
    }

    #[test]
    fn random_traces_certify_and_are_monotone() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for trial in 0..1000 {
            let n = 4 + trial % 4;
            let d = DissimilarityMap::from_pairs(
                (0..pair_count(n))
                    .map(|_| rng.gen_range(-3.0..10.0))
                    .collect(),
            )
            .unwrap();
            let t = upgma(&d).unwrap();
            assert!(certify_upgma_projection(&t, &d));
            let tol = tolerance_for::<f64>(&d);
            assert!(t.minave_per_step.windows(2).all(|w| w[0] <= w[1] + tol));
            let w = upgma_weighted_update(&d).unwrap();
            assert_eq!(w.chain, t.chain);
            for (a, b) in w.minave_per_step.iter().zip(&t.minave_per_step) {
                assert!((a - b).abs() <= 1e-12 * d.max_abs());
            }
        }
    }

    #[test]
    fn rational_traces_certify_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..50 {
            let d = DissimilarityMap::from_pairs(
                (0..pair_count(5))
                    .map(|_| rng.gen_range(0..20) as f64)
                    .collect(),
            )
            .unwrap();
            let t = upgma_in::<BigRational>(&d).unwrap();
            assert!(certify_upgma_projection(&t, &d));
        }
    }

    #[test]
    fn tie_enumeration_contains_default_choice() {
        let d = DissimilarityMap::from_pairs(vec![1.0, 1.0, 3.0, 2.0, 3.0, 3.0]).unwrap();
        let chains = upgma_tie_chains(&d).unwrap();
        assert!(chains.contains(&upgma(&d).unwrap().chain));
        assert!(chains.len() > 1);
        let big = DissimilarityMap::from_pairs(vec![1.0; pair_count(7)]).unwrap();
        assert!(matches!(
            upgma_tie_chains(&big),
            Err(Error::Capacity { .. })
        ));
    }
}
