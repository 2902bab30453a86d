//! Extended UPGMA walks the cone graph from the UPGMA chain and keeps the
//! best projection it meets. On this matrix it improves on UPGMA.

use ultrafit::io::{parse_distance_matrix, Format};
use ultrafit::search::extended_upgma;

const MATRIX: &str = include_str!("../data/four_taxa.phy");

fn main() -> ultrafit::Result<()> {
    let d = parse_distance_matrix(MATRIX, Format::Phylip)?;
    let out = extended_upgma(&d)?;
    let labels = d.taxa().labels();
    println!(
        "upgma    {} error {}",
        out.upgma.chain.topology_with(labels),
        out.upgma.squared_error
    );
    println!(
        "extended {} error {} after visiting {} chains",
        out.best.chain.topology_with(labels),
        out.best.squared_error,
        out.visited
    );
    Ok(())
}
