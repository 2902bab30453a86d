use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use super::table::{ChainTable, Membership};
use crate::model::{pair_index, MergeChain};

/// The ten `S_4`-orbits of six-cone cells at four taxa, one representative
/// each, with orbit sizes. Sizes sum to 166.
pub const ORBIT_TABLE: [([&str; 6], usize); 10] = [
    (
        [
            "(((1,2),3),4)",
            "(((1,2),4),3)",
            "(((1,3),2),4)",
            "(((1,3),4),2)",
            "(((1,4),2),3)",
            "(((1,4),3),2)",
        ],
        4,
    ),
    (
        [
            "(((1,2),3),4)",
            "(((1,2),4),3)",
            "(((1,3),2),4)",
            "(((1,3),4),2)",
            "(((1,4),2),3)",
            "((1,4),(2,3))",
        ],
        24,
    ),
    (
        [
            "(((1,2),3),4)",
            "(((1,2),4),3)",
            "(((1,3),2),4)",
            "(((1,4),2),3)",
            "((1,3),(2,4))",
            "((1,4),(2,3))",
        ],
        12,
    ),
    (
        [
            "(((1,2),3),4)",
            "(((1,2),4),3)",
            "(((1,3),2),4)",
            "(((1,4),3),2)",
            "(((2,4),1),3)",
            "((1,3),(2,4))",
        ],
        24,
    ),
    (
        [
            "(((1,2),3),4)",
            "(((1,2),4),3)",
            "(((1,3),2),4)",
            "(((2,3),4),1)",
            "(((2,4),3),1)",
            "((1,3),(2,4))",
        ],
        24,
    ),
    (
        [
            "(((1,2),3),4)",
            "(((1,2),4),3)",
            "(((1,3),2),4)",
            "(((2,4),1),3)",
            "((1,3),(2,4))",
            "((1,4),(2,3))",
        ],
        12,
    ),
    (
        [
            "(((1,2),3),4)",
            "(((1,3),2),4)",
            "(((1,4),2),3)",
            "(((2,4),1),3)",
            "((1,3),(2,4))",
            "((1,4),(2,3))",
        ],
        24,
    ),
    (
        [
            "(((1,2),3),4)",
            "(((1,3),2),4)",
            "(((2,4),1),3)",
            "(((3,4),1),2)",
            "((1,2),(3,4))",
            "((1,3),(2,4))",
        ],
        12,
    ),
    (
        [
            "(((1,2),3),4)",
            "(((1,3),2),4)",
            "(((2,4),1),3)",
            "(((3,4),2),1)",
            "((1,2),(3,4))",
            "((1,3),(2,4))",
        ],
        24,
    ),
    (
        [
            "(((1,2),3),4)",
            "(((1,3),2),4)",
            "(((2,4),3),1)",
            "(((3,4),2),1)",
            "((1,2),(3,4))",
            "((1,3),(2,4))",
        ],
        6,
    ),
];

/// Samples per PRNG substream. Fixed so results do not depend on the
/// number of worker threads.
const CHUNK: u64 = 1 << 14;

/// Comparison slack on unit-normalized samples.
const SAMPLE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CardinalityCount {
    pub cardinality: usize,
    /// Distinct cone sets of this size.
    pub distinct_sets: usize,
    /// Evaluations whose cone set has this size.
    pub samples: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrbitReport {
    pub representative: Vec<String>,
    pub orbit_size: usize,
    pub representative_hit: bool,
    /// Distinct observed six-sets lying in this orbit.
    pub cells_observed: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusReport {
    pub n: usize,
    pub samples: u64,
    pub seed: u64,
    /// Cone-set evaluations: every sample under each of the 24 relabelings.
    pub evaluations: u64,
    /// Evaluations within tolerance of a cone boundary, excluded from the counts.
    pub discarded: u64,
    /// Largest topology-level cone set observed.
    pub max_cardinality: usize,
    /// Largest chain-level cone set observed.
    pub max_chain_cardinality: usize,
    pub cardinality_counts: Vec<CardinalityCount>,
    pub chain_cardinality_counts: Vec<CardinalityCount>,
    /// Distinct topology sets observed, i.e. cells of the refinement.
    pub distinct_cells: usize,
    /// Distinct chain sets observed.
    pub distinct_chain_cells: usize,
    /// Distinct six-element topology sets.
    pub distinct_six_sets: usize,
    /// Distinct six-element chain sets.
    pub distinct_six_chain_sets: usize,
    pub orbits: Vec<OrbitReport>,
    /// Observed six-sets outside every tabulated orbit.
    pub unmatched_six_sets: usize,
}

#[derive(Default)]
struct Tally {
    discarded: u64,
    topology_sets: BTreeMap<u32, u64>,
    chain_sets: BTreeMap<u32, u64>,
}

impl Tally {
    fn record(&mut self, table: &ChainTable, v: &[f64]) {
        let (mut chains, mut topologies) = (0u32, 0u32);
        for c in 0..table.len() {
            match table.classify(c, v, SAMPLE_TOLERANCE) {
                Membership::Interior => {
                    chains |= 1 << c;
                    topologies |= 1 << table.topology_of[c];
                }
                Membership::Boundary => {
                    self.discarded += 1;
                    return;
                }
                Membership::Outside => {}
            }
        }
        *self.topology_sets.entry(topologies).or_default() += 1;
        *self.chain_sets.entry(chains).or_default() += 1;
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.discarded += other.discarded;
        for (k, v) in other.topology_sets {
            *self.topology_sets.entry(k).or_default() += v;
        }
        for (k, v) in other.chain_sets {
            *self.chain_sets.entry(k).or_default() += v;
        }
        self
    }
}

/// Samples the refinement of all projection cones at four taxa.
///
/// Samples live on the unit sphere of `R^6` modulo the all-ones line. Even
/// samples are uniform. Odd samples are Gaussian points projected onto the
/// intersection of a few random cone hyperplanes and pushed off by noise of
/// log-uniform size between `1e-7` and `1e-1`, which reaches the thin cells
/// that crowd around those intersections. Each sample is evaluated under all
/// 24 relabelings of the taxa. Evaluations within tolerance of a cone
/// boundary are discarded; the rest are classified by the set of topologies
/// whose projection cone contains them in the interior.
pub fn q4_census(samples: u64, seed: u64) -> CensusReport {
    let table = ChainTable::new(4).expect("four taxa are within every cap");
    let planes = table.hyperplanes(6);
    let relabelings: Vec<[usize; 6]> = permutations(4)
        .iter()
        .map(|perm| {
            let mut map = [0; 6];
            for i in 0..4 {
                for j in i + 1..4 {
                    map[pair_index(i, j, 4)] = pair_index(perm[i], perm[j], 4);
                }
            }
            map
        })
        .collect();
    let chunks = samples.div_ceil(CHUNK);
    let tally = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let count = CHUNK.min(samples - c * CHUNK);
            run_chunk(&table, &planes, &relabelings, seed, c, count)
        })
        .reduce(Tally::default, Tally::merge);
    summarize(&table, samples, seed, tally)
}

pub(super) fn gaussian(rng: &mut ChaCha8Rng, v: &mut [f64]) {
    for x in v.iter_mut() {
        *x = StandardNormal.sample(rng);
    }
}

/// Removes the component of `v` along the all-ones line and scales to unit
/// length. Returns false for a zero vector.
pub(super) fn normalize(v: &mut [f64]) -> bool {
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    v.iter_mut().for_each(|x| *x -= mean);
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 {
        return false;
    }
    v.iter_mut().for_each(|x| *x /= norm);
    true
}

/// A Gaussian point projected onto the intersection of up to four random
/// cone hyperplanes, then pushed off by noise of log-uniform size.
pub(super) fn focused(rng: &mut ChaCha8Rng, planes: &[Vec<f64>], v: &mut [f64]) {
    gaussian(rng, v);
    let m = rng.gen_range(1..=4);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(m);
    for _ in 0..m {
        let mut a = planes[rng.gen_range(0..planes.len())].clone();
        for b in &basis {
            let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
            a.iter_mut().zip(b).for_each(|(x, y)| *x -= dot * y);
        }
        let norm = a.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-9 {
            a.iter_mut().for_each(|x| *x /= norm);
            basis.push(a);
        }
    }
    for b in &basis {
        let dot: f64 = v.iter().zip(b).map(|(x, y)| x * y).sum();
        v.iter_mut().zip(b).for_each(|(x, y)| *x -= dot * y);
    }
    normalize(v);
    let scale = 10f64.powf(-rng.gen_range(1.0..7.0));
    for x in v.iter_mut() {
        let g: f64 = StandardNormal.sample(rng);
        *x += scale * g;
    }
}

fn run_chunk(
    table: &ChainTable,
    planes: &[Vec<f64>],
    relabelings: &[[usize; 6]],
    seed: u64,
    stream: u64,
    count: u64,
) -> Tally {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut tally = Tally::default();
    let mut v = [0.0f64; 6];
    let mut w = [0.0f64; 6];
    for i in 0..count {
        if i % 2 == 0 {
            gaussian(&mut rng, &mut v);
        } else {
            focused(&mut rng, planes, &mut v);
        }
        if !normalize(&mut v) {
            tally.discarded += relabelings.len() as u64;
            continue;
        }
        for map in relabelings {
            for (p, &q) in map.iter().enumerate() {
                w[q] = v[p];
            }
            tally.record(table, &w);
        }
    }
    tally
}

fn cardinalities(sets: &BTreeMap<u32, u64>) -> Vec<CardinalityCount> {
    let mut by_size: BTreeMap<usize, (usize, u64)> = BTreeMap::new();
    for (&mask, &count) in sets {
        let e = by_size.entry(mask.count_ones() as usize).or_default();
        e.0 += 1;
        e.1 += count;
    }
    by_size
        .into_iter()
        .map(|(cardinality, (distinct_sets, samples))| CardinalityCount {
            cardinality,
            distinct_sets,
            samples,
        })
        .collect()
}

/// For each permutation of the taxa, the induced map on topology indices.
fn topology_actions(table: &ChainTable) -> Vec<Vec<usize>> {
    permutations(4)
        .iter()
        .map(|perm| {
            let mut image = vec![0; table.topologies.len()];
            for (c, chain) in table.chains.iter().enumerate() {
                let moved: MergeChain = chain.relabeled(perm);
                image[table.topology_of[c]] = table.topology_of[table.index_of(&moved)];
            }
            image
        })
        .collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn apply(action: &[usize], mask: u32) -> u32 {
    let mut out = 0;
    for (t, &img) in action.iter().enumerate() {
        if mask & (1 << t) != 0 {
            out |= 1 << img;
        }
    }
    out
}

fn orbit_key(actions: &[Vec<usize>], mask: u32) -> u32 {
    actions.iter().map(|a| apply(a, mask)).min().unwrap()
}

fn summarize(table: &ChainTable, samples: u64, seed: u64, tally: Tally) -> CensusReport {
    let actions = topology_actions(table);
    let six: Vec<u32> = tally
        .topology_sets
        .keys()
        .copied()
        .filter(|m| m.count_ones() == 6)
        .collect();
    let mut orbits = Vec::new();
    let mut matched = 0;
    for (rep, size) in ORBIT_TABLE {
        let mask = rep.iter().fold(0u32, |m, t| {
            let i = table
                .topologies
                .binary_search_by(|x| x.as_str().cmp(t))
                .expect("tabulated topologies are canonical");
            m | 1 << i
        });
        let key = orbit_key(&actions, mask);
        let cells_observed = six
            .iter()
            .filter(|&&m| orbit_key(&actions, m) == key)
            .count();
        matched += cells_observed;
        orbits.push(OrbitReport {
            representative: rep.iter().map(|s| s.to_string()).collect(),
            orbit_size: size,
            representative_hit: tally.topology_sets.contains_key(&mask),
            cells_observed,
        });
    }
    let max_of = |sets: &BTreeMap<u32, u64>| {
        sets.keys()
            .map(|m| m.count_ones() as usize)
            .max()
            .unwrap_or(0)
    };
    CensusReport {
        n: 4,
        samples,
        seed,
        evaluations: samples * 24,
        discarded: tally.discarded,
        max_cardinality: max_of(&tally.topology_sets),
        max_chain_cardinality: max_of(&tally.chain_sets),
        cardinality_counts: cardinalities(&tally.topology_sets),
        chain_cardinality_counts: cardinalities(&tally.chain_sets),
        distinct_cells: tally.topology_sets.len(),
        distinct_chain_cells: tally.chain_sets.len(),
        distinct_six_sets: six.len(),
        distinct_six_chain_sets: tally
            .chain_sets
            .keys()
            .filter(|m| m.count_ones() == 6)
            .count(),
        orbits,
        unmatched_six_sets: six.len() - matched,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::{comb_witness, projection_cone_set};

    #[test]
    fn orbit_sizes_sum_to_166() {
        assert_eq!(ORBIT_TABLE.iter().map(|(_, s)| s).sum::<usize>(), 166);
    }

    #[test]
    fn tabulated_orbit_sizes_match_the_group_action() {
        let table = ChainTable::new(4).unwrap();
        let actions = topology_actions(&table);
        assert_eq!(actions.len(), 24);
        for (rep, size) in ORBIT_TABLE {
            let mask = rep.iter().fold(0u32, |m, t| {
                m | 1 << table.topologies.iter().position(|x| x == t).unwrap()
            });
            let mut orbit: Vec<u32> = actions.iter().map(|a| apply(a, mask)).collect();
            orbit.sort_unstable();
            orbit.dedup();
            assert_eq!(orbit.len(), size, "{rep:?}");
        }
    }

    #[test]
    fn classification_agrees_with_cone_sets() {
        let table = ChainTable::new(4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let v: Vec<f64> = (0..6).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let d = crate::DissimilarityMap::from_pairs(v.clone()).unwrap();
            let set = projection_cone_set(&d, true).unwrap();
            let fast: Vec<MergeChain> = (0..table.len())
                .filter(|&c| table.classify(c, &v, d.max_abs() * 1e-9) == Membership::Interior)
                .map(|c| table.chains[c].clone())
                .collect();
            assert_eq!(fast, set.chains);
        }
    }

    #[test]
    fn perturbed_witness_lands_in_first_orbit_row() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let base = comb_witness(4, 0.0, 1.0).unwrap();
        let expected: std::collections::BTreeSet<String> =
            ORBIT_TABLE[0].0.iter().map(|s| s.to_string()).collect();
        for _ in 0..50 {
            let v: Vec<f64> = base
                .values()
                .iter()
                .map(|x| x + rng.gen_range(-1e-6..1e-6))
                .collect();
            let d = crate::DissimilarityMap::from_pairs(v).unwrap();
            assert_eq!(projection_cone_set(&d, true).unwrap().topologies, expected);
        }
    }

    #[test]
    fn deterministic_and_thread_independent() {
        let a = q4_census(40_000, 11);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let b = pool.install(|| q4_census(40_000, 11));
        assert_eq!(a, b);
        assert_ne!(a, q4_census(40_000, 12));
        assert!(a.max_cardinality <= 6);
        assert_eq!(a.unmatched_six_sets, 0);
        let total: u64 = a.cardinality_counts.iter().map(|c| c.samples).sum();
        assert_eq!(total + a.discarded, 24 * 40_000);
    }
}
