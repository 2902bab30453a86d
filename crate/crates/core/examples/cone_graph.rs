//! The graph of projection cones containing a data vector need not be
//! connected, which is why extended UPGMA can miss the optimum.

use ultrafit::io::{parse_distance_matrix, Format};
use ultrafit::search::cone_graph;
use ultrafit::upgma;

const MATRIX: &str = include_str!("../data/disconnected.csv");

fn main() -> ultrafit::Result<()> {
    let d = parse_distance_matrix(MATRIX, Format::Csv)?;
    let graph = cone_graph(&d)?;
    let home = graph
        .index_of(&upgma(&d)?.chain)
        .expect("upgma chain is a vertex");
    println!(
        "{} cones, component sizes {:?}",
        graph.vertices.len(),
        graph.component_sizes()
    );
    for (v, chain) in graph.vertices.iter().enumerate() {
        let mark = if v == home { " (upgma)" } else { "" };
        println!(
            "  component {}: {}{mark}",
            graph.component[v],
            chain.topology_with(d.taxa().labels())
        );
    }
    Ok(())
}
