use std::collections::HashSet;

use crate::{Error, Result};

/// The labelled ground set of taxa. Internal indices are `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TaxonSet {
    labels: Vec<String>,
}

impl TaxonSet {
    pub fn new(labels: Vec<String>) -> Result<Self> {
        if labels.len() < 2 {
            return Err(Error::InvalidTaxa(format!(
                "need at least 2 taxa, got {}",
                labels.len()
            )));
        }
        let mut seen = HashSet::new();
        for label in &labels {
            if label.is_empty() {
                return Err(Error::InvalidTaxa("empty label".into()));
            }
            if !seen.insert(label.as_str()) {
                return Err(Error::InvalidTaxa(format!("duplicate label {label:?}")));
            }
        }
        Ok(Self { labels })
    }

    /// Taxa labelled `1..=n`.
    pub fn numbered(n: usize) -> Result<Self> {
        Self::new((1..=n).map(|i| i.to_string()).collect())
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }
}

/// Number of unordered pairs over `n` taxa.
#[inline]
pub const fn pair_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Row-major index of an unordered pair `(i, j)`, `i < j`:
/// `(0,1), (0,2), ..., (0,n-1), (1,2), ...`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairIndex {
    pub i: usize,
    pub j: usize,
}

impl PairIndex {
    /// Orders the two taxa; panics if they are equal.
    pub fn new(a: usize, b: usize) -> Self {
        assert_ne!(a, b, "a pair needs two distinct taxa");
        if a < b {
            Self { i: a, j: b }
        } else {
            Self { i: b, j: a }
        }
    }

    #[inline]
    pub fn linear(self, n: usize) -> usize {
        linear_index(self.i, self.j, n)
    }

    pub fn from_linear(k: usize, n: usize) -> Self {
        let mut i = 0;
        let mut start = 0;
        loop {
            let row = n - 1 - i;
            if k < start + row {
                return Self {
                    i,
                    j: i + 1 + (k - start),
                };
            }
            start += row;
            i += 1;
        }
    }
}

/// Linear index of `(i, j)` with `i < j` in row-major order.
#[inline]
pub fn linear_index(i: usize, j: usize, n: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// Linear index of an unordered pair given in either order.
#[inline]
pub fn pair_index(a: usize, b: usize, n: usize) -> usize {
    if a < b {
        linear_index(a, b, n)
    } else {
        linear_index(b, a, n)
    }
}
