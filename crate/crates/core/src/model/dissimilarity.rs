use super::taxa::{pair_count, pair_index, TaxonSet};
use crate::{Error, Result};

/// Input data `d(i, j)` stored over unordered pairs in row-major order.
///
/// Entries must be finite; sign is unrestricted.
#[derive(Debug, Clone, PartialEq)]
pub struct DissimilarityMap {
    taxa: TaxonSet,
    values: Vec<f64>,
}

impl DissimilarityMap {
    pub fn new(taxa: TaxonSet, values: Vec<f64>) -> Result<Self> {
        let expected = pair_count(taxa.len());
        if values.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: values.len(),
            });
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(k));
        }
        Ok(Self { taxa, values })
    }

    /// Builds a map on taxa labelled `1..=n`, inferring `n` from the vector length.
    pub fn from_pairs(values: Vec<f64>) -> Result<Self> {
        let len = values.len();
        let mut n = 2;
        while pair_count(n) < len {
            n += 1;
        }
        if pair_count(n) != len {
            return Err(Error::DimensionMismatch {
                expected: pair_count(n),
                found: len,
            });
        }
        Self::new(TaxonSet::numbered(n)?, values)
    }

    pub fn taxa(&self) -> &TaxonSet {
        &self.taxa
    }

    pub fn n(&self) -> usize {
        self.taxa.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// `d(a, b)` for distinct taxa in either order.
    #[inline]
    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.values[pair_index(a, b, self.n())]
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Adds `c` to every entry.
    pub fn shifted(&self, c: f64) -> Self {
        Self {
            taxa: self.taxa.clone(),
            values: self.values.iter().map(|v| v + c).collect(),
        }
    }

    /// Multiplies every entry by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        Self {
            taxa: self.taxa.clone(),
            values: self.values.iter().map(|v| v * s).collect(),
        }
    }

    /// Relabels taxa: taxon `i` of `self` becomes taxon `perm[i]` of the result.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let n = self.n();
        assert_eq!(perm.len(), n);
        let mut values = vec![0.0; self.values.len()];
        let mut labels = vec![String::new(); n];
        for i in 0..n {
            labels[perm[i]] = self.taxa.label(i).to_string();
            for j in i + 1..n {
                values[pair_index(perm[i], perm[j], n)] = self.get(i, j);
            }
        }
        Self {
            taxa: TaxonSet::new(labels).expect("permutation of valid labels"),
            values,
        }
    }

    /// Full symmetric matrix with zero diagonal.
    pub fn to_square(&self) -> Vec<Vec<f64>> {
        let n = self.n();
        let mut m = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let v = self.get(i, j);
                m[i][j] = v;
                m[j][i] = v;
            }
        }
        m
    }
}
