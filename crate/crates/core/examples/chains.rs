//! Maximal chains of the partition lattice: counts, and the rooted
//! topologies they induce at four taxa.

use std::collections::BTreeMap;

use ultrafit::model::{chain_count, enumerate_chains};

fn main() -> ultrafit::Result<()> {
    for n in 2..=8 {
        println!("n = {n}: {} chains", chain_count(n));
    }
    let mut by_topology: BTreeMap<String, usize> = BTreeMap::new();
    for chain in enumerate_chains(4)? {
        *by_topology.entry(chain.topology()).or_default() += 1;
    }
    println!("{} topologies on four taxa:", by_topology.len());
    for (topology, rankings) in by_topology {
        println!(
            "  {topology}  ({rankings} ranking{})",
            if rankings > 1 { "s" } else { "" }
        );
    }
    Ok(())
}
