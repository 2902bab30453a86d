use thiserror::Error;

/// Errors from reading matrices and trees. Lines and columns are 1-based;
/// for CSV the column is the field number.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("empty input")]
    Empty,

    #[error("line {line}: need at least 2 taxa, got {n}")]
    TooFewTaxa { line: usize, n: usize },

    #[error("line {line}: expected {expected} entries, found {found}")]
    Dimension {
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("line {line}, column {column}: `{token}` is not a finite number")]
    NonNumeric {
        line: usize,
        column: usize,
        token: String,
    },

    #[error("line {line}, column {column}: d({a},{b}) = {forward} but d({b},{a}) = {backward}")]
    Asymmetry {
        line: usize,
        column: usize,
        a: String,
        b: String,
        forward: f64,
        backward: f64,
    },

    #[error("line {line}, column {column}: diagonal entry for `{name}` is {value}, expected 0")]
    Diagonal {
        line: usize,
        column: usize,
        name: String,
        value: f64,
    },

    #[error("line {line}: duplicate taxon name `{name}`")]
    DuplicateName { line: usize, name: String },

    #[error("line {line}: row is labelled `{found}` but the header says `{expected}`")]
    NameMismatch {
        line: usize,
        expected: String,
        found: String,
    },

    #[error("line {line}: {message}")]
    Csv { line: usize, message: String },

    #[error("newick, byte {position}: {message}")]
    Newick { position: usize, message: String },
}
