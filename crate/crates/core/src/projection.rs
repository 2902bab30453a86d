//! Orthogonal projection of data onto chain subspaces and cones.
//!
//! The subspace `L_F` of a chain is spanned by the normalized indicator
//! vectors of its level sets, so the projection replaces every entry of a
//! level set by the level average. The projection lands in the cone `C_F`
//! exactly when these averages are nondecreasing, which is also the
//! membership test for the projection cone `P_F`.

use crate::model::{DissimilarityMap, MergeChain, Ultrametric};
use crate::scalar::{le_tol, lt_tol, Scalar};
use crate::{Error, Result};

/// Result of projecting data onto a chain's subspace or closed cone.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionOutcome<T = f64> {
    pub chain: MergeChain,
    /// One value per merge step.
    pub levels: Vec<T>,
    /// Whether the subspace projection is monotone, i.e. `d ∈ P_F`.
    pub in_cone: bool,
    pub squared_error: T,
}

impl<T: Scalar> ProjectionOutcome<T> {
    pub fn to_f64(&self) -> ProjectionOutcome<f64> {
        ProjectionOutcome {
            chain: self.chain.clone(),
            levels: self.levels.iter().map(Scalar::to_f64).collect(),
            in_cone: self.in_cone,
            squared_error: self.squared_error.to_f64(),
        }
    }

    /// The fitted point as an [`Ultrametric`].
    pub fn ultrametric(&self) -> Result<Ultrametric> {
        Ultrametric::new(
            self.chain.clone(),
            self.levels.iter().map(Scalar::to_f64).collect(),
        )
    }
}

fn check_size(d: &DissimilarityMap, chain: &MergeChain) -> Result<()> {
    if d.n() != chain.n() {
        return Err(Error::DimensionMismatch {
            expected: d.n(),
            found: chain.n(),
        });
    }
    Ok(())
}

/// Comparison slack for `d` under backend `T`.
pub fn tolerance_for<T: Scalar>(d: &DissimilarityMap) -> T {
    T::tolerance(d.max_abs())
}

/// Mean of `d` over each level set of `chain`.
pub fn level_averages<T: Scalar>(d: &DissimilarityMap, chain: &MergeChain) -> Result<Vec<T>> {
    check_size(d, chain)?;
    Ok(chain
        .steps()
        .iter()
        .map(|step| {
            let sum = T::sum(step.cross_pairs().map(|(a, b)| T::from_f64(d.get(a, b))));
            sum / T::from_usize(step.pair_count())
        })
        .collect())
}

fn residual<T: Scalar>(d: &DissimilarityMap, chain: &MergeChain, levels: &[T]) -> T {
    T::sum(chain.steps().iter().zip(levels).flat_map(|(step, v)| {
        step.cross_pairs().map(move |(a, b)| {
            let r = T::from_f64(d.get(a, b)) - v.clone();
            r.clone() * r
        })
    }))
}

fn is_monotone<T: Scalar>(levels: &[T], tol: &T, strict: bool) -> bool {
    levels.windows(2).all(|w| {
        if strict {
            lt_tol(&w[0], &w[1], tol)
        } else {
            le_tol(&w[0], &w[1], tol)
        }
    })
}

/// Orthogonal projection onto the linear span `L_F` of the chain's cone.
pub fn project_subspace(d: &DissimilarityMap, chain: &MergeChain) -> Result<ProjectionOutcome> {
    project_subspace_in::<f64>(d, chain)
}

pub fn project_subspace_in<T: Scalar>(
    d: &DissimilarityMap,
    chain: &MergeChain,
) -> Result<ProjectionOutcome<T>> {
    let levels = level_averages::<T>(d, chain)?;
    let tol = tolerance_for::<T>(d);
    let in_cone = is_monotone(&levels, &tol, false);
    let squared_error = residual(d, chain, &levels);
    Ok(ProjectionOutcome {
        chain: chain.clone(),
        levels,
        in_cone,
        squared_error,
    })
}

/// Membership of `d` in the projection cone `P_F`: the `n - 2` level-average
/// inequalities, strict or not.
pub fn in_projection_cone(d: &DissimilarityMap, chain: &MergeChain, strict: bool) -> Result<bool> {
    in_projection_cone_in::<f64>(d, chain, strict)
}

pub fn in_projection_cone_in<T: Scalar>(
    d: &DissimilarityMap,
    chain: &MergeChain,
    strict: bool,
) -> Result<bool> {
    let levels = level_averages::<T>(d, chain)?;
    Ok(is_monotone(&levels, &tolerance_for::<T>(d), strict))
}

/// Nearest point of the closed cone `C_F`: weighted isotonic regression of
/// the level averages, weights `|L_k|`.
///
/// `in_cone` still reports whether the subspace projection was monotone
/// (no pooling happened).
pub fn project_cone(d: &DissimilarityMap, chain: &MergeChain) -> Result<ProjectionOutcome> {
    project_cone_in::<f64>(d, chain)
}

pub fn project_cone_in<T: Scalar>(
    d: &DissimilarityMap,
    chain: &MergeChain,
) -> Result<ProjectionOutcome<T>> {
    let averages = level_averages::<T>(d, chain)?;
    let tol = tolerance_for::<T>(d);
    let in_cone = is_monotone(&averages, &tol, false);
    let levels = if in_cone {
        averages
    } else {
        let weights: Vec<usize> = chain.steps().iter().map(|s| s.pair_count()).collect();
        pava(&averages, &weights)
    };
    let squared_error = residual(d, chain, &levels);
    Ok(ProjectionOutcome {
        chain: chain.clone(),
        levels,
        in_cone,
        squared_error,
    })
}

/// Pool-adjacent-violators: the nondecreasing sequence minimizing
/// `Σ w_k (y_k - v_k)²`.
pub fn pava<T: Scalar>(values: &[T], weights: &[usize]) -> Vec<T> {
    assert_eq!(values.len(), weights.len());
    // (weighted sum, total weight, run length)
    let mut runs: Vec<(T, usize, usize)> = Vec::with_capacity(values.len());
    for (v, &w) in values.iter().zip(weights) {
        runs.push((v.clone() * T::from_usize(w), w, 1));
        while runs.len() > 1 {
            let last = &runs[runs.len() - 1];
            let prev = &runs[runs.len() - 2];
            let mean_last = last.0.clone() / T::from_usize(last.1);
            let mean_prev = prev.0.clone() / T::from_usize(prev.1);
            if mean_prev <= mean_last {
                break;
            }
            let (s, w, c) = runs.pop().unwrap();
            let top = runs.last_mut().unwrap();
            top.0 = top.0.clone() + s;
            top.1 += w;
            top.2 += c;
        }
    }
    let mut out = Vec::with_capacity(values.len());
    for (s, w, c) in runs {
        let mean = s / T::from_usize(w);
        out.extend(std::iter::repeat_n(mean, c));
    }
    out
}

/// `Σ (d(i,j) - x(i,j))²`.
pub fn squared_error(d: &DissimilarityMap, x: &Ultrametric) -> Result<f64> {
    check_size(d, x.chain())?;
    Ok(residual(d, x.chain(), x.levels()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{enumerate_chains, pair_count};
    use num::BigRational;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn ex25(eps: f64) -> DissimilarityMap {
        DissimilarityMap::from_pairs(vec![1.0, 2.0, 20.0, 10.0, 28.0 + eps, 5.0]).unwrap()
    }

    fn chain(n: usize, merges: &[(usize, usize)]) -> MergeChain {
        MergeChain::from_merges(n, merges).unwrap()
    }

    fn rat(num: i64, den: i64) -> BigRational {
        BigRational::new(num.into(), den.into())
    }

    fn random_map(rng: &mut ChaCha8Rng, n: usize) -> DissimilarityMap {
        DissimilarityMap::from_pairs(
            (0..pair_count(n))
                .map(|_| rng.gen_range(0.0..10.0))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn fork_projection_of_example_data() {
        let fork = chain(4, &[(0, 1), (2, 3), (0, 2)]);
        let out = project_subspace_in::<BigRational>(&ex25(0.0), &fork).unwrap();
        assert_eq!(out.levels, vec![rat(1, 1), rat(5, 1), rat(15, 1)]);
        assert_eq!(out.squared_error, rat(388, 1));
        assert!(out.in_cone);
    }

    #[test]
    fn comb_projection_of_example_data() {
        let comb = chain(4, &[(0, 1), (0, 2), (0, 3)]);
        let out = project_subspace_in::<BigRational>(&ex25(0.0), &comb).unwrap();
        assert_eq!(out.levels, vec![rat(1, 1), rat(6, 1), rat(53, 3)]);
        assert_eq!(out.squared_error, rat(914, 3));
        let f = project_subspace(&ex25(0.0), &comb).unwrap();
        assert!((f.squared_error - 914.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn subspace_fixes_its_own_points() {
        let c = chain(4, &[(0, 1), (0, 2), (0, 3)]);
        let x = Ultrametric::new(c.clone(), vec![1.0, 2.0, 4.0]).unwrap();
        let d = DissimilarityMap::from_pairs(x.expand()).unwrap();
        let out = project_subspace(&d, &c).unwrap();
        assert_eq!(out.levels, vec![1.0, 2.0, 4.0]);
        assert_eq!(out.squared_error, 0.0);
    }

    #[test]
    fn cone_membership_examples() {
        let d = DissimilarityMap::from_pairs(vec![1.0, 2.0, 3.0, 2.0, 7.0, 3.0]).unwrap();
        let c = chain(4, &[(0, 1), (0, 2), (0, 3)]);
        assert_eq!(
            level_averages::<BigRational>(&d, &c).unwrap(),
            vec![rat(1, 1), rat(2, 1), rat(13, 3)]
        );
        assert!(in_projection_cone(&d, &c, false).unwrap());
        assert!(in_projection_cone(&d, &c, true).unwrap());

        // merge {3,4}, then {1,3,4}: averages d34 = 5, (d13 + d14)/2 = 11,
        // (d12 + d23 + d24)/3 = 13
        let c2 = chain(4, &[(2, 3), (0, 2), (0, 1)]);
        let avg = level_averages::<BigRational>(&ex25(0.0), &c2).unwrap();
        assert_eq!(avg, vec![rat(5, 1), rat(11, 1), rat(13, 1)]);
        assert!(in_projection_cone(&ex25(0.0), &c2, false).unwrap());

        let flat = DissimilarityMap::from_pairs(vec![2.5; 10]).unwrap();
        for c in enumerate_chains(5).unwrap() {
            assert!(in_projection_cone(&flat, &c, false).unwrap());
            assert!(!in_projection_cone(&flat, &c, true).unwrap());
        }
    }

    #[test]
    fn size_mismatch() {
        let c = chain(3, &[(0, 1), (0, 2)]);
        assert!(matches!(
            project_subspace(&ex25(0.0), &c),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(in_projection_cone(&ex25(0.0), &c, false).is_err());
        assert!(project_cone(&ex25(0.0), &c).is_err());
    }

    #[test]
    fn cone_projection_pools_violators() {
        let d = DissimilarityMap::from_pairs(vec![4.0, 1.0, 1.0]).unwrap();
        let c = chain(3, &[(0, 1), (0, 2)]);
        let out = project_cone(&d, &c).unwrap();
        assert_eq!(out.levels, vec![2.0, 2.0]);
        assert_eq!(out.squared_error, 6.0);
        assert!(!out.in_cone);

        // the pooled objective 1·(4-v)² + 2·(1-v)² + const, minimized on a dense grid
        let best = (0..=40_000)
            .map(|k| -10.0 + k as f64 * 5e-4)
            .min_by(|a, b| {
                let f = |v: f64| (4.0 - v).powi(2) + 2.0 * (1.0 - v).powi(2);
                f(*a).partial_cmp(&f(*b)).unwrap()
            })
            .unwrap();
        assert!((best - 2.0).abs() < 1e-3);
    }

    #[test]
    fn pava_matches_hand_cases() {
        assert_eq!(pava(&[1.0, 3.0, 2.0], &[1, 1, 1]), vec![1.0, 2.5, 2.5]);
        assert_eq!(pava(&[3.0, 2.0, 1.0], &[1, 1, 1]), vec![2.0, 2.0, 2.0]);
        assert_eq!(pava(&[4.0, 1.0], &[1, 3]), vec![1.75, 1.75]);
        assert_eq!(pava::<f64>(&[], &[]), Vec::<f64>::new());
    }

    #[test]
    fn cone_equals_subspace_when_monotone() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let d = random_map(&mut rng, 5);
            for c in enumerate_chains(5).unwrap().step_by(11) {
                let sub = project_subspace(&d, &c).unwrap();
                let cone = project_cone(&d, &c).unwrap();
                if sub.in_cone {
                    assert_eq!(sub, cone);
                }
                assert!(cone.squared_error >= sub.squared_error - 1e-12);
            }
        }
    }

    #[test]
    fn residual_is_orthogonal_to_level_indicators() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 3..=7 {
            let d = random_map(&mut rng, n);
            for c in enumerate_chains(n).unwrap().step_by(97) {
                let out = project_subspace(&d, &c).unwrap();
                let x = out.ultrametric_unchecked();
                let r: Vec<f64> = d.values().iter().zip(&x).map(|(a, b)| a - b).collect();
                for set in c.level_sets() {
                    let dot: f64 = set.iter().map(|&p| r[p]).sum();
                    assert!(dot.abs() <= 1e-10, "dot {dot}");
                }
                // Pythagoras
                let nd: f64 = d.values().iter().map(|v| v * v).sum();
                let nx: f64 = x.iter().map(|v| v * v).sum();
                assert!((nd - nx - out.squared_error).abs() <= 1e-9 * nd);
                // idempotence
                let dx = DissimilarityMap::from_pairs(x.clone()).unwrap();
                let again = project_subspace(&dx, &c).unwrap();
                for (a, b) in again.levels.iter().zip(&out.levels) {
                    assert!((a - b).abs() <= 1e-12);
                }
            }
        }
    }

    #[test]
    fn cone_projection_beats_random_monotone_levels() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for n in 3..=5 {
            let d = random_map(&mut rng, n);
            for c in enumerate_chains(n).unwrap().step_by(13) {
                let best = project_cone(&d, &c).unwrap().squared_error;
                for _ in 0..1000 {
                    let mut levels: Vec<f64> =
                        (0..n - 1).map(|_| rng.gen_range(-1.0..11.0)).collect();
                    levels.sort_by(|a, b| a.partial_cmp(b).unwrap());
                    let x = Ultrametric::new(c.clone(), levels).unwrap();
                    assert!(best <= squared_error(&d, &x).unwrap() + 1e-12);
                }
            }
        }
    }

    #[test]
    fn membership_agrees_with_projection_flag() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for n in 3..=5 {
            for _ in 0..20 {
                let d = random_map(&mut rng, n);
                for c in enumerate_chains(n).unwrap() {
                    assert_eq!(
                        in_projection_cone(&d, &c, false).unwrap(),
                        project_subspace(&d, &c).unwrap().in_cone
                    );
                }
            }
        }
    }

    #[test]
    fn translation_shifts_levels() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let d = random_map(&mut rng, 5);
        let shifted = d.shifted(3.25);
        for c in enumerate_chains(5).unwrap() {
            let a = project_subspace(&d, &c).unwrap();
            let b = project_subspace(&shifted, &c).unwrap();
            for (x, y) in a.levels.iter().zip(&b.levels) {
                assert!((y - x - 3.25).abs() < 1e-12);
            }
            assert!((a.squared_error - b.squared_error).abs() < 1e-9);
            assert_eq!(a.in_cone, b.in_cone);
        }
    }

    #[test]
    fn squared_error_examples() {
        let fork = chain(4, &[(0, 1), (2, 3), (0, 2)]);
        // residuals on the top level at eps = 1: -13.25, 4.75, -5.25, 13.75
        for (eps, want) in [(0.0, 388.0), (1.0, 414.75)] {
            let x = Ultrametric::new(fork.clone(), vec![1.0, 5.0, 15.0 + eps / 4.0]).unwrap();
            assert!((squared_error(&ex25(eps), &x).unwrap() - want).abs() < 1e-12);
        }
        let x = Ultrametric::new(fork, vec![1.0, 2.0, 3.0]).unwrap();
        let d = DissimilarityMap::from_pairs(x.expand()).unwrap();
        assert_eq!(squared_error(&d, &x).unwrap(), 0.0);
    }

    impl ProjectionOutcome<f64> {
        fn ultrametric_unchecked(&self) -> Vec<f64> {
            let n = self.chain.n();
            let mut x = vec![0.0; pair_count(n)];
            for (set, v) in self.chain.level_sets().iter().zip(&self.levels) {
                for &p in set {
                    x[p] = *v;
                }
            }
            x
        }
    }
}
