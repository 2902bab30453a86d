//! Projecting data onto one chain: level averages, cone membership, and
//! pooling when the averages are out of order.

use ultrafit::projection::{in_projection_cone, project_cone, project_subspace};
use ultrafit::{DissimilarityMap, MergeChain};

fn main() -> ultrafit::Result<()> {
    let d = DissimilarityMap::from_pairs(vec![1.0, 2.0, 20.0, 10.0, 28.0, 5.0])?;
    // merge c,d first, then a,b, then the two cherries
    let fork = MergeChain::from_merges(4, &[(2, 3), (0, 1), (0, 2)])?;
    let sub = project_subspace(&d, &fork)?;
    println!(
        "averages {:?}, in cone: {}",
        sub.levels,
        in_projection_cone(&d, &fork, false)?
    );
    let cone = project_cone(&d, &fork)?;
    println!("closed-cone levels {:?}", cone.levels);
    println!(
        "errors: subspace {}, cone {}",
        sub.squared_error, cone.squared_error
    );
    Ok(())
}
