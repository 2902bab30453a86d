//! Average linkage on a four-taxon matrix, with the projection certificate
//! checked in exact arithmetic.

use ultrafit::io::{parse_distance_matrix, Format};
use ultrafit::upgma::upgma_in;
use ultrafit::{certify_upgma_projection, upgma, BigRational, Scalar};

const MATRIX: &str = include_str!("../data/four_taxa.phy");

fn main() -> ultrafit::Result<()> {
    let d = parse_distance_matrix(MATRIX, Format::Phylip)?;
    let trace = upgma(&d)?;
    println!("topology {}", trace.chain.topology_with(d.taxa().labels()));
    for (step, (level, minave)) in trace
        .chain
        .steps()
        .iter()
        .zip(trace.result.levels.iter().zip(&trace.minave_per_step))
    {
        println!(
            "  merge {:?} + {:?} at {level} (minave {minave})",
            step.left(),
            step.right()
        );
    }
    println!("squared error {}", trace.result.squared_error);

    let exact = upgma_in::<BigRational>(&d)?;
    println!(
        "exact squared error {}, projection certified: {}",
        exact.result.squared_error.render(),
        certify_upgma_projection(&exact, &d)
    );
    Ok(())
}
