//! Data lying in the interior of `(n-1)!` projection cones at once.
//!
//! Usage: cargo run --release --example comb_witness [max_n]

use ultrafit::fan::{comb_witness, projection_cone_set};

fn main() -> ultrafit::Result<()> {
    let max_n: usize = std::env::args().nth(1).map_or(6, |s| s.parse().expect("n"));
    for n in 3..=max_n {
        let d = comb_witness(n, 0.0, 1.0)?;
        let set = projection_cone_set(&d, true)?;
        let bound: usize = (1..n).product();
        println!("n = {n}: {} interior cones, (n-1)! = {bound}", set.len());
        if n == 4 {
            for t in &set.topologies {
                println!("  {t}");
            }
        }
    }
    Ok(())
}
