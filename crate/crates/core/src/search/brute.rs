use crate::model::{enumerate_chains, DissimilarityMap};
use crate::projection::{project_cone_in, ProjectionOutcome};
use crate::scalar::Scalar;
use crate::{Error, Result};

/// Largest taxon count for [`brute_force_optimum`] (56,700 chains at 7).
pub const BRUTE_FORCE_CAP: usize = 7;

/// Global least-squares optimum by projecting onto the closed cone of every
/// maximal chain. The first chain attaining the minimum, in enumeration
/// order, is returned.
pub fn brute_force_optimum(d: &DissimilarityMap) -> Result<ProjectionOutcome> {
    brute_force_optimum_in::<f64>(d)
}

pub fn brute_force_optimum_in<T: Scalar>(d: &DissimilarityMap) -> Result<ProjectionOutcome<T>> {
    if d.n() > BRUTE_FORCE_CAP {
        return Err(Error::Capacity {
            what: "brute-force search",
            n: d.n(),
            cap: BRUTE_FORCE_CAP,
        });
    }
    let mut best: Option<ProjectionOutcome<T>> = None;
    for chain in enumerate_chains(d.n())? {
        let out = project_cone_in::<T>(d, &chain)?;
        if best
            .as_ref()
            .is_none_or(|b| out.squared_error < b.squared_error)
        {
            best = Some(out);
        }
    }
    Ok(best.expect("at least one chain"))
}
