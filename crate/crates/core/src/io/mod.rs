//! Reading and writing matrices, trees and reports.
//!
//! Matrices come in PHYLIP (square or lower-triangular) or CSV form. Trees
//! are written as Newick with branch lengths, results as JSON documents whose
//! schema lives in `schema/` at the crate root.

mod error;
mod matrix;
mod newick;
mod report;

pub use error::ParseError;
pub use matrix::{parse_distance_matrix, write_csv, write_phylip, Format};
pub use newick::{emit_newick, format_length, parse_newick, NewickTree};
pub use report::{
    digest, run_fit, witness_report, ConeListing, FitOptions, InputDigest, Method, RunReport,
    SolverStats, StepReport, WitnessReport,
};
