use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::newick::emit_newick;
use super::write_phylip;
use crate::fan::{comb_witness, projection_cone_set};
use crate::model::{chain_count, tree_from_ultrametric, DissimilarityMap, MergeChain};
use crate::projection::{project_subspace, ProjectionOutcome};
use crate::scalar::Scalar;
use crate::search::{brute_force_optimum_in, cone_graph, exact_search_in, extended_upgma_in};
use crate::upgma::{upgma, upgma_in};
use crate::{BigRational, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Upgma,
    Extended,
    Exact,
    Brute,
}

impl Method {
    pub const ALL: [Method; 4] = [
        Method::Upgma,
        Method::Extended,
        Method::Exact,
        Method::Brute,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Upgma => "upgma",
            Method::Extended => "extended",
            Method::Exact => "exact",
            Method::Brute => "brute",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Method::ALL
            .into_iter()
            .find(|m| m.as_str() == s)
            .ok_or_else(|| {
                format!("unknown method `{s}` (expected upgma, extended, exact or brute)")
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FitOptions {
    pub method: Method,
    /// Also list every projection cone containing the data.
    pub list_cones: bool,
    /// Run the solver in exact rational arithmetic.
    pub exact_rational: bool,
}

impl FitOptions {
    pub fn new(method: Method) -> Self {
        Self {
            method,
            list_cones: false,
            exact_rational: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputDigest {
    pub taxa: Vec<String>,
    pub n: usize,
    /// `sha256:` and the hex digest of the matrix written as square PHYLIP.
    pub checksum: String,
}

/// One merge of a chain, blocks given by taxon name.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepReport {
    pub left: Vec<String>,
    pub right: Vec<String>,
    pub level: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverStats {
    /// Chains whose projection was evaluated (extended and brute force).
    pub visited_chains: Option<u64>,
    /// Partitions reached by the exact search.
    pub partitions: Option<u64>,
    /// Edge labels computed by the exact search.
    pub dp_edges: Option<u64>,
    /// Edges the exact search discarded for lack of a feasible predecessor.
    pub pruned_edges: Option<u64>,
    pub wall_time_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConeListing {
    pub topology: String,
    pub chain: Vec<StepReport>,
    pub squared_error: f64,
    /// Component of the cone graph, numbered from 0.
    pub component: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub input: InputDigest,
    pub method: Method,
    pub chain: Vec<StepReport>,
    pub topology: String,
    pub newick: String,
    pub levels: Vec<f64>,
    pub squared_error: f64,
    /// Exact value such as `914/3`, with `--exact-rational`.
    pub squared_error_exact: Option<String>,
    pub upgma_squared_error: f64,
    /// `upgma_squared_error - squared_error`.
    pub improvement_over_upgma: f64,
    pub stats: SolverStats,
    pub cones: Option<Vec<ConeListing>>,
}

pub fn digest(d: &DissimilarityMap) -> InputDigest {
    let hash = Sha256::digest(write_phylip(d).as_bytes());
    let hex: String = hash.iter().map(|b| format!("{b:02x}")).collect();
    InputDigest {
        taxa: d.taxa().labels().to_vec(),
        n: d.n(),
        checksum: format!("sha256:{hex}"),
    }
}

fn steps(d: &DissimilarityMap, chain: &MergeChain, levels: &[f64]) -> Vec<StepReport> {
    let names = |block: &[usize]| {
        block
            .iter()
            .map(|&t| d.taxa().label(t).to_string())
            .collect()
    };
    chain
        .steps()
        .iter()
        .zip(levels)
        .map(|(s, &level)| StepReport {
            left: names(s.left()),
            right: names(s.right()),
            level,
        })
        .collect()
}

fn solve<T: Scalar>(
    d: &DissimilarityMap,
    method: Method,
) -> Result<(ProjectionOutcome<T>, SolverStats)> {
    let mut stats = SolverStats {
        visited_chains: None,
        partitions: None,
        dp_edges: None,
        pruned_edges: None,
        wall_time_ms: 0.0,
    };
    let outcome = match method {
        Method::Upgma => upgma_in::<T>(d)?.result,
        Method::Extended => {
            let out = extended_upgma_in::<T>(d)?;
            stats.visited_chains = Some(out.visited as u64);
            out.best
        }
        Method::Exact => {
            let out = exact_search_in::<T>(d)?;
            stats.partitions = Some(out.stats.partitions);
            stats.dp_edges = Some(out.stats.edges);
            stats.pruned_edges = Some(out.stats.pruned);
            out.best
        }
        Method::Brute => {
            let out = brute_force_optimum_in::<T>(d)?;
            stats.visited_chains = Some(chain_count(d.n()) as u64);
            out
        }
    };
    Ok((outcome, stats))
}

fn cone_listing(d: &DissimilarityMap) -> Result<Vec<ConeListing>> {
    let graph = cone_graph(d)?;
    let set = projection_cone_set(d, false)?;
    set.chains
        .iter()
        .map(|chain| {
            let p = project_subspace(d, chain)?;
            Ok(ConeListing {
                topology: chain.topology_with(d.taxa().labels()),
                chain: steps(d, chain, &p.levels),
                squared_error: p.squared_error,
                component: graph.component[graph.index_of(chain).expect("same cone set")],
            })
        })
        .collect()
}

/// Fits `d` with the chosen solver and assembles the report.
pub fn run_fit(d: &DissimilarityMap, options: &FitOptions) -> Result<RunReport> {
    let start = Instant::now();
    let (outcome, mut stats, exact) = if options.exact_rational {
        let (out, stats) = solve::<BigRational>(d, options.method)?;
        let exact = out.squared_error.render();
        (out.to_f64(), stats, Some(exact))
    } else {
        let (out, stats) = solve::<f64>(d, options.method)?;
        (out, stats, None)
    };
    stats.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;

    let cones = if options.list_cones {
        Some(cone_listing(d)?)
    } else {
        None
    };
    let x = outcome.ultrametric()?;
    let tree = tree_from_ultrametric(&x);
    let baseline = if options.method == Method::Upgma {
        outcome.squared_error
    } else {
        upgma(d)?.result.squared_error
    };
    let labels = d.taxa().labels();
    Ok(RunReport {
        input: digest(d),
        method: options.method,
        chain: steps(d, &outcome.chain, &outcome.levels),
        topology: outcome.chain.topology_with(labels),
        newick: emit_newick(&tree, labels),
        levels: outcome.levels.clone(),
        squared_error: outcome.squared_error,
        squared_error_exact: exact,
        upgma_squared_error: baseline,
        improvement_over_upgma: baseline - outcome.squared_error,
        stats,
        cones,
    })
}

/// Result of the `witness` subcommand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub n: usize,
    pub a: f64,
    pub b: f64,
    pub data: Vec<f64>,
    /// `(n-1)!`.
    pub bound: u64,
    /// Chains whose projection cone contains the data in its interior.
    pub strict_members: usize,
    pub nonstrict_members: usize,
    /// Strict members that are caterpillars grown from the first taxon.
    pub first_taxon_combs: usize,
    /// Topologies of the strict members.
    pub topologies: Vec<String>,
}

pub fn witness_report(n: usize, a: f64, b: f64) -> Result<WitnessReport> {
    let d = comb_witness(n, a, b)?;
    let strict = projection_cone_set(&d, true)?;
    let loose = projection_cone_set(&d, false)?;
    let first_taxon_combs = strict
        .chains
        .iter()
        .filter(|c| {
            c.steps()
                .iter()
                .all(|s| s.left()[0] == 0 && s.right().len() == 1)
        })
        .count();
    Ok(WitnessReport {
        n,
        a,
        b,
        data: d.values().to_vec(),
        bound: (1..n as u64).product(),
        strict_members: strict.len(),
        nonstrict_members: loose.len(),
        first_taxon_combs,
        topologies: strict.topologies.into_iter().collect(),
    })
}

impl RunReport {
    /// Checks the stated error against the Newick tree and the input.
    pub fn recompute_error(&self, d: &DissimilarityMap) -> Result<f64> {
        let tree = super::parse_newick(&self.newick)?;
        let x = tree.distances_for(d.taxa())?;
        if x.len() != d.values().len() {
            return Err(Error::DimensionMismatch {
                expected: d.values().len(),
                found: x.len(),
            });
        }
        Ok(f64::sum(
            d.values().iter().zip(&x).map(|(a, b)| (a - b) * (a - b)),
        ))
    }
}
