//! The polyhedral fan of projection cones.
//!
//! A data vector `d` lies in the projection cone `P_F` of a chain when its
//! level averages along `F` are nondecreasing. The set `P_d` of such cones
//! locates `d` in the common refinement of all projection cones. This module
//! computes `P_d`, builds the comb data that lies in `(n-1)!` cones at once,
//! and samples the refinement at four taxa.

mod census;
mod cones;
mod probe;
mod table;

pub use census::{q4_census, CardinalityCount, CensusReport, OrbitReport, ORBIT_TABLE};
pub use cones::{comb_witness, projection_cone_set, ConeSet};
pub use probe::{conjecture_probe, ProbeReport, PROBE_CAP};
