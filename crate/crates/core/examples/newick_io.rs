//! Reads a lower-triangular PHYLIP matrix, fits it exactly, and writes the
//! tree as Newick and the matrix back out as CSV.

use ultrafit::io::{
    parse_distance_matrix, parse_newick, run_fit, write_csv, FitOptions, Format, Method,
};

const MATRIX: &str = "5
human
chimp 2.1
gorilla 4.4 4.2
orang 8.9 9.1 8.7
gibbon 10.2 10.4 10.1 9.3
";

fn main() -> ultrafit::Result<()> {
    let d = parse_distance_matrix(MATRIX, Format::Phylip)?;
    let report = run_fit(&d, &FitOptions::new(Method::Exact))?;
    println!("{}", report.newick);
    println!("squared error {}", report.squared_error);

    let tree = parse_newick(&report.newick)?;
    let fitted = tree.distances_for(d.taxa())?;
    println!("fitted distances {fitted:?}");
    println!("recomputed error {}", report.recompute_error(&d)?);
    print!("{}", write_csv(&d));
    Ok(())
}
