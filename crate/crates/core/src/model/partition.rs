use std::fmt;

use crate::{Error, Result};

/// A set partition of `0..n` in canonical form: each block sorted ascending,
/// blocks ordered by their minimum element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    /// Canonicalizes `blocks`, which must be non-empty, disjoint and cover `0..n`.
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n];
        let mut blocks: Vec<Vec<usize>> = blocks
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        for block in &blocks {
            if block.is_empty() {
                return Err(Error::MalformedPartition("empty block".into()));
            }
            for &x in block {
                if x >= n {
                    return Err(Error::MalformedPartition(format!(
                        "element {x} outside 0..{n}"
                    )));
                }
                if std::mem::replace(&mut seen[x], true) {
                    return Err(Error::MalformedPartition(format!(
                        "element {x} appears twice"
                    )));
                }
            }
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::MalformedPartition(format!(
                "element {missing} not covered"
            )));
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Ok(Self { blocks })
    }

    pub fn singletons(n: usize) -> Self {
        Self {
            blocks: (0..n).map(|i| vec![i]).collect(),
        }
    }

    pub(crate) fn from_canonical(blocks: Vec<Vec<usize>>) -> Self {
        debug_assert!(blocks.windows(2).all(|w| w[0][0] < w[1][0]));
        Self { blocks }
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Number of elements of the ground set.
    pub fn ground_size(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    /// Index of the block containing `x`.
    pub fn block_of(&self, x: usize) -> Option<usize> {
        self.blocks.iter().position(|b| b.binary_search(&x).is_ok())
    }

    /// Merges the blocks at positions `a` and `b`.
    pub fn merge(&self, a: usize, b: usize) -> Self {
        assert_ne!(a, b);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let mut blocks = self.blocks.clone();
        let removed = blocks.remove(hi);
        blocks[lo].extend(removed);
        blocks[lo].sort_unstable();
        Self { blocks }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, b) in self.blocks.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{{")?;
            for (m, x) in b.iter().enumerate() {
                if m > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", x + 1)?;
            }
            write!(f, "}}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order() {
        let p = Partition::new(3, vec![vec![2], vec![1, 0]]).unwrap();
        assert_eq!(p.blocks(), &[vec![0, 1], vec![2]]);
        let s = Partition::new(3, vec![vec![0], vec![1], vec![2]]).unwrap();
        assert_eq!(s, Partition::singletons(3));
    }

    #[test]
    fn order_independent() {
        let a = Partition::new(4, vec![vec![0, 2], vec![1, 3]]).unwrap();
        let b = Partition::new(4, vec![vec![1, 3], vec![2, 0]]).unwrap();
        assert_eq!(a, b);
        let again = Partition::new(4, a.blocks().to_vec()).unwrap();
        assert_eq!(again, a);
    }

    #[test]
    fn malformed() {
        assert!(matches!(
            Partition::new(3, vec![vec![0, 1], vec![1, 2]]),
            Err(Error::MalformedPartition(_))
        ));
        assert!(matches!(
            Partition::new(3, vec![vec![0, 1]]),
            Err(Error::MalformedPartition(_))
        ));
        assert!(matches!(
            Partition::new(2, vec![vec![0], vec![]]),
            Err(Error::MalformedPartition(_))
        ));
        assert!(Partition::new(2, vec![vec![0, 5]]).is_err());
    }

    #[test]
    fn merge_keeps_canonical_form() {
        let p = Partition::singletons(4).merge(3, 1);
        assert_eq!(p.blocks(), &[vec![0], vec![1, 3], vec![2]]);
        assert_eq!(p.to_string(), "{{1},{2,4},{3}}");
        assert_eq!(p.block_of(3), Some(1));
    }
}
