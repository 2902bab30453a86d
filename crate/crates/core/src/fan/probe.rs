use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use super::census::{focused, gaussian, normalize};
use super::cones::comb_witness;
use super::table::{ChainTable, Membership};
use crate::model::pair_count;
use crate::{Error, Result};

/// Largest taxon count for [`conjecture_probe`] (2700 chains at 6).
pub const PROBE_CAP: usize = 6;

const CHUNK: u64 = 1 << 10;
const SAMPLE_TOLERANCE: f64 = 1e-9;
/// Attaining vectors kept per maximum.
const KEEP: usize = 3;

/// Evidence on how many projection cones can share a data vector.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeReport {
    pub n: usize,
    pub samples: u64,
    pub seed: u64,
    /// `(n-1)!`, the conjectured bound.
    pub bound: u64,
    /// Largest number of chains containing a sample in their interior.
    pub max_strict: usize,
    /// Largest number of chains containing a sample, boundaries included.
    pub max_nonstrict: usize,
    pub strict_attaining: Vec<Vec<f64>>,
    pub nonstrict_attaining: Vec<Vec<f64>>,
}

#[derive(Default)]
struct Best {
    strict: usize,
    nonstrict: usize,
    strict_at: Vec<Vec<f64>>,
    nonstrict_at: Vec<Vec<f64>>,
}

impl Best {
    fn offer(&mut self, table: &ChainTable, v: &[f64]) {
        let (mut strict, mut boundary) = (0, 0);
        for c in 0..table.len() {
            match table.classify(c, v, SAMPLE_TOLERANCE) {
                Membership::Interior => strict += 1,
                Membership::Boundary => boundary += 1,
                Membership::Outside => {}
            }
        }
        keep(&mut self.strict, &mut self.strict_at, strict, v);
        keep(
            &mut self.nonstrict,
            &mut self.nonstrict_at,
            strict + boundary,
            v,
        );
    }

    fn merge(mut self, other: Best) -> Best {
        for v in other.strict_at {
            keep(&mut self.strict, &mut self.strict_at, other.strict, &v);
        }
        for v in other.nonstrict_at {
            keep(
                &mut self.nonstrict,
                &mut self.nonstrict_at,
                other.nonstrict,
                &v,
            );
        }
        self
    }
}

fn keep(best: &mut usize, at: &mut Vec<Vec<f64>>, count: usize, v: &[f64]) {
    if count > *best || at.is_empty() {
        *best = count;
        at.clear();
    }
    if count == *best && at.len() < KEEP {
        at.push(v.to_vec());
    }
}

/// Searches for data lying in many projection cones at once.
///
/// Candidates are the comb witness, the constant vector, and `samples`
/// random vectors cycling through four kinds: uniform on the sphere, near
/// intersections of cone hyperplanes, perturbed comb witnesses, and
/// perturbed vectors with many tied entries. Only reports what it finds.
pub fn conjecture_probe(n: usize, samples: u64, seed: u64) -> Result<ProbeReport> {
    if n > PROBE_CAP {
        return Err(Error::Capacity {
            what: "conjecture probe",
            n,
            cap: PROBE_CAP,
        });
    }
    let table = ChainTable::new(n)?;
    let dim = pair_count(n);
    let planes = table.hyperplanes(dim);
    let witness = comb_witness(n, 0.0, 1.0)?.values().to_vec();

    let mut best = Best::default();
    let mut w = witness.clone();
    normalize(&mut w);
    best.offer(&table, &w);
    best.offer(&table, &vec![0.0; dim]);

    let chunks: Vec<Best> = (0..samples.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let mut local = Best::default();
            let mut v = vec![0.0; dim];
            for i in 0..CHUNK.min(samples - c * CHUNK) {
                match i % 4 {
                    0 => gaussian(&mut rng, &mut v),
                    1 => focused(&mut rng, &planes, &mut v),
                    2 => {
                        let scale = 10f64.powf(-rng.gen_range(1.0..7.0));
                        for (x, &base) in v.iter_mut().zip(&witness) {
                            let g: f64 = StandardNormal.sample(&mut rng);
                            *x = base + scale * g;
                        }
                    }
                    _ => {
                        let scale = 10f64.powf(-rng.gen_range(1.0..7.0));
                        for x in v.iter_mut() {
                            let g: f64 = StandardNormal.sample(&mut rng);
                            *x = rng.gen_range(0..3) as f64 + scale * g;
                        }
                    }
                }
                if normalize(&mut v) {
                    local.offer(&table, &v);
                }
            }
            local
        })
        .collect();
    for c in chunks {
        best = best.merge(c);
    }

    Ok(ProbeReport {
        n,
        samples,
        seed,
        bound: (1..n as u64).product(),
        max_strict: best.strict,
        max_nonstrict: best.nonstrict,
        strict_attaining: best.strict_at,
        nonstrict_attaining: best.nonstrict_at,
    })
}
