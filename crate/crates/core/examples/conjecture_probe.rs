//! Looks for data vectors lying in more than `(n-1)!` projection cones.
//!
//! Usage: cargo run --release --example conjecture_probe [n] [samples] [seed]

use ultrafit::fan::conjecture_probe;

fn main() -> ultrafit::Result<()> {
    let mut args = std::env::args().skip(1);
    let n = args.next().map_or(5, |s| s.parse().expect("n"));
    let samples = args.next().map_or(100_000, |s| s.parse().expect("samples"));
    let seed = args.next().map_or(1, |s| s.parse().expect("seed"));

    let report = conjecture_probe(n, samples, seed)?;
    println!(
        "n = {n}: at most {} cones in the interior (bound {}), {} with boundaries",
        report.max_strict, report.bound, report.max_nonstrict
    );
    for v in &report.strict_attaining {
        let cells: Vec<String> = v.iter().map(|x| format!("{x:.4}")).collect();
        println!("  attained at ({})", cells.join(", "));
    }
    Ok(())
}
