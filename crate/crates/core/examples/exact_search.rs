//! Exact least-squares fit by dynamic programming over the partition
//! lattice, compared with UPGMA and, where feasible, brute force.
//!
//! Usage: cargo run --release --example exact_search [n] [seed]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use ultrafit::model::pair_count;
use ultrafit::search::{brute_force_optimum, exact_search_in, BRUTE_FORCE_CAP};
use ultrafit::{upgma, DissimilarityMap};

fn main() -> ultrafit::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(9, |s| s.parse().expect("n"));
    let seed: u64 = args.next().map_or(1, |s| s.parse().expect("seed"));

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = DissimilarityMap::from_pairs(
        (0..pair_count(n))
            .map(|_| rng.gen_range(0.0..10.0))
            .collect(),
    )?;

    let start = std::time::Instant::now();
    let exact = exact_search_in::<f64>(&d)?;
    println!("n = {n}: exact search in {:.2?}", start.elapsed());
    println!(
        "  {} partitions, {} edges, {} pruned",
        exact.stats.partitions, exact.stats.edges, exact.stats.pruned
    );
    println!(
        "  optimum {} on {}",
        exact.best.squared_error,
        exact.best.chain.topology()
    );
    println!("  upgma   {}", upgma(&d)?.result.squared_error);
    if n <= BRUTE_FORCE_CAP {
        println!("  brute   {}", brute_force_optimum(&d)?.squared_error);
    }
    Ok(())
}
