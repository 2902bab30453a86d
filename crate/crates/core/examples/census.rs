//! Samples the refinement of projection cones at four taxa and checks the
//! observed six-cone cells against the table of ten orbits.
//!
//! Usage: cargo run --release --example census [samples] [seed]

use ultrafit::fan::q4_census;

fn main() {
    let mut args = std::env::args().skip(1);
    let samples = args
        .next()
        .map_or(1_000_000, |s| s.parse().expect("samples"));
    let seed = args.next().map_or(7, |s| s.parse().expect("seed"));

    let start = std::time::Instant::now();
    let report = q4_census(samples, seed);
    println!(
        "{} samples (seed {}), {} on a boundary, {:.2?}",
        report.samples,
        report.seed,
        report.discarded,
        start.elapsed()
    );
    println!("cone sets by size (topologies / chains):");
    for c in &report.cardinality_counts {
        println!(
            "  {}: {} sets, {} samples",
            c.cardinality, c.distinct_sets, c.samples
        );
    }
    for c in &report.chain_cardinality_counts {
        println!(
            "  chains {}: {} sets, {} samples",
            c.cardinality, c.distinct_sets, c.samples
        );
    }
    println!(
        "max size {} (chains {}), {} distinct six-sets, {} cells in total",
        report.max_cardinality,
        report.max_chain_cardinality,
        report.distinct_six_sets,
        report.distinct_cells
    );
    for o in &report.orbits {
        println!(
            "  {} hit={} observed {}/{}",
            o.representative.join(" "),
            o.representative_hit,
            o.cells_observed,
            o.orbit_size
        );
    }
}
