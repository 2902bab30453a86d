use crate::model::MergeChain;

/// Chains that differ from `chain` in exactly one interior flat.
///
/// For consecutive steps `j, j+1`: if they merge four distinct blocks the
/// only alternative is the swapped order; if the second step absorbs the
/// block formed by the first (three blocks `A, B, C`), the alternatives
/// start by merging `A, C` or `B, C` instead.
pub fn chain_neighbors(chain: &MergeChain) -> Vec<MergeChain> {
    let n = chain.n();
    let keys = chain.key();
    let mut out = Vec::new();
    for j in 0..keys.len().saturating_sub(1) {
        let (a, b) = keys[j];
        let (c, e) = keys[j + 1];
        let mut alternatives: Vec<[(usize, usize); 2]> = Vec::new();
        if c != a && e != a {
            alternatives.push([(c, e), (a, b)]);
        } else {
            let other = if c == a { e } else { c };
            alternatives.push([(a, other), (a, b)]);
            alternatives.push([(b, other), (b, a)]);
        }
        for [first, second] in alternatives {
            let mut merges = keys.clone();
            merges[j] = first;
            merges[j + 1] = second;
            let nb = MergeChain::from_merges(n, &merges).expect("valid replacement");
            if nb != *chain && !out.contains(&nb) {
                out.push(nb);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::enumerate_chains;

    fn chain(n: usize, merges: &[(usize, usize)]) -> MergeChain {
        MergeChain::from_merges(n, merges).unwrap()
    }

    #[test]
    fn fork_has_three_neighbors() {
        let fork = chain(4, &[(0, 1), (2, 3), (0, 2)]);
        let mut got = chain_neighbors(&fork);
        got.sort();
        let mut want = vec![
            chain(4, &[(2, 3), (0, 1), (0, 2)]),
            chain(4, &[(0, 1), (0, 2), (0, 3)]),
            chain(4, &[(0, 1), (0, 3), (0, 2)]),
        ];
        want.sort();
        assert_eq!(got, want);
    }

    #[test]
    fn three_taxa_neighbors() {
        let c = chain(3, &[(0, 1), (0, 2)]);
        let mut got = chain_neighbors(&c);
        got.sort();
        assert_eq!(
            got,
            vec![chain(3, &[(0, 2), (0, 1)]), chain(3, &[(1, 2), (0, 1)])]
        );
        assert!(chain_neighbors(&chain(2, &[(0, 1)])).is_empty());
    }

    #[test]
    fn neighbors_differ_in_one_flat_and_are_symmetric() {
        for n in 3..=5 {
            for c in enumerate_chains(n).unwrap() {
                let flats = c.partitions();
                let nbs = chain_neighbors(&c);
                for nb in &nbs {
                    let other = nb.partitions();
                    let differing = flats.iter().zip(&other).filter(|(x, y)| x != y).count();
                    assert_eq!(differing, 1);
                    assert!(chain_neighbors(nb).contains(&c));
                }
            }
        }
    }

    /// Neighbors by brute force: all chains whose flats differ in exactly one position.
    #[test]
    fn matches_exhaustive_definition() {
        for n in 3..=5 {
            let all: Vec<_> = enumerate_chains(n)
                .unwrap()
                .map(|c| (c.partitions(), c))
                .collect();
            for (flats, c) in &all {
                let mut want: Vec<MergeChain> = all
                    .iter()
                    .filter(|(f, _)| f.iter().zip(flats).filter(|(x, y)| x != y).count() == 1)
                    .map(|(_, o)| o.clone())
                    .collect();
                want.sort();
                let mut got = chain_neighbors(c);
                got.sort();
                assert_eq!(got, want);
            }
        }
    }
}
