//! Minimal orbit strata of the encoded varieties.
//!
//! Points are grouped by their support: the set of variables that do not
//! vanish.  The trinomial relations force the vector of block monomial values
//! `(T_0^{l_0}(x), ..., T_r^{l_r}(x))` to equal `(f(a_0), ..., f(a_r))` for a
//! single linear form `f` on the plane, evaluated on pairwise independent
//! vectors `a_i`.  Consequently either no block monomial vanishes (`f` generic),
//! exactly one vanishes (`a_i` spans the kernel of `f`), or all vanish
//! (`f = 0`).  The minimal supports realized on the variety determine the
//! local class groups and with them the Picard and Gorenstein indices.

use crate::coxring::RingData;
use crate::intlin::{GroupElem, IntMatrix};

/// Which block monomials are nonzero at a point.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MonomialPattern {
    pub nonzero: Vec<bool>,
}

impl MonomialPattern {
    /// Indices of blocks with nonvanishing monomial.
    pub fn nonzero_blocks(&self) -> Vec<usize> {
        (0..self.nonzero.len())
            .filter(|&i| self.nonzero[i])
            .collect()
    }
}

/// A support: the sorted flat indices of the nonvanishing variables, block
/// variables first and free variables after them.
pub type Support = Vec<usize>;

/// All vanishing patterns of block monomials that occur on a variety with the
/// given number of blocks: none vanishing, exactly one, or all.
pub fn admissible_patterns(num_blocks: usize) -> Vec<MonomialPattern> {
    if num_blocks == 0 {
        return vec![MonomialPattern { nonzero: vec![] }];
    }
    let mut patterns = vec![
        MonomialPattern {
            nonzero: vec![false; num_blocks],
        },
        MonomialPattern {
            nonzero: vec![true; num_blocks],
        },
    ];
    for i in 0..num_blocks {
        let mut nonzero = vec![true; num_blocks];
        nonzero[i] = false;
        patterns.push(MonomialPattern { nonzero });
    }
    patterns
}

/// Flat index ranges of each block.
fn block_offsets(data: &RingData) -> Vec<usize> {
    let mut offsets = Vec::with_capacity(data.blocks.len() + 1);
    let mut acc = 0;
    for b in &data.blocks {
        offsets.push(acc);
        acc += b.len();
    }
    offsets.push(acc);
    offsets
}

/// The inclusion-minimal supports of points on the encoded variety.
///
/// Without relations every variable alone is the support of a fixed point.
/// With relations, a pattern with exactly one vanishing monomial is realized
/// on the minimal stratum where precisely the other blocks' variables survive;
/// the all-vanishing pattern is realized with a single surviving variable,
/// which must be a free variable or belong to a block of size at least two.
pub fn minimal_supports(data: &RingData) -> Vec<Support> {
    let n = data.n_total();
    let mut candidates: Vec<Support> = Vec::new();
    if !data.has_relations() {
        return (0..data.var_count()).map(|j| vec![j]).collect();
    }
    let offsets = block_offsets(data);
    for pattern in admissible_patterns(data.blocks.len()) {
        if pattern.nonzero.iter().any(|&b| b) {
            let support: Support = pattern
                .nonzero_blocks()
                .into_iter()
                .flat_map(|i| offsets[i]..offsets[i + 1])
                .collect();
            candidates.push(support);
        } else {
            for (i, b) in data.blocks.iter().enumerate() {
                if b.len() >= 2 {
                    for j in offsets[i]..offsets[i + 1] {
                        candidates.push(vec![j]);
                    }
                }
            }
            for k in 0..data.m() {
                candidates.push(vec![n + k]);
            }
        }
    }
    retain_minimal(candidates)
}

/// The degrees of the variables in a support.
pub fn weight_set(data: &RingData, support: &[usize]) -> Vec<GroupElem> {
    let weights = data.weight_list();
    support.iter().map(|&j| weights[j].clone()).collect()
}

/// Oracle for [`minimal_supports`]: enumerates every subset of variables and
/// keeps the inclusion-minimal ones that are realizable as a point support.
///
/// Realizability is decided by exact linear algebra instead of the case split
/// above: with `a_i = (1, i)`, a subset is realizable when some linear form
/// vanishes exactly on the blocks whose monomial dies, i.e. the kernel of the
/// matrix of vanishing `a_i` rows contains a vector avoiding the remaining
/// `a_i`.  Exponential in the variable count; intended for small inputs.
pub fn brute_force_supports(data: &RingData) -> Vec<Support> {
    let total = data.var_count();
    assert!(total <= 20, "brute-force support search is exponential");
    let offsets = block_offsets(data);
    let num_blocks = data.blocks.len();
    let mut realizable: Vec<Support> = Vec::new();
    for mask in 1u32..(1 << total) {
        let support: Support = (0..total).filter(|j| mask & (1 << j) != 0).collect();
        // A block monomial is nonzero exactly when the whole block survives.
        let vanishing: Vec<usize> = (0..num_blocks)
            .filter(|&i| (offsets[i]..offsets[i + 1]).any(|j| mask & (1 << j) == 0))
            .collect();
        if pattern_realizable(num_blocks, &vanishing) {
            realizable.push(support);
        }
    }
    retain_minimal(realizable)
}

/// Whether a linear form on the plane can vanish exactly on `{a_i : i in
/// vanishing}` with `a_i = (1, i)`.
fn pattern_realizable(num_blocks: usize, vanishing: &[usize]) -> bool {
    if num_blocks == 0 || vanishing.len() == num_blocks {
        // The zero form vanishes everywhere.
        return true;
    }
    if vanishing.is_empty() {
        // A generic form misses all of the finitely many lines spanned by the
        // a_i.
        return true;
    }
    let rows: Vec<Vec<i64>> = vanishing.iter().map(|&i| vec![1, i as i64]).collect();
    let kernel = IntMatrix::from_rows(&rows).kernel_basis();
    match kernel.len() {
        0 => false,
        1 => {
            let f = &kernel[0];
            (0..num_blocks)
                .filter(|i| !vanishing.contains(i))
                .all(|i| f[0] + f[1] * i as i64 != 0)
        }
        _ => true,
    }
}

/// Keeps the inclusion-minimal supports, deduplicated and sorted.
fn retain_minimal(mut candidates: Vec<Support>) -> Vec<Support> {
    candidates.sort();
    candidates.dedup();
    let minimal: Vec<Support> = candidates
        .iter()
        .filter(|s| {
            !candidates
                .iter()
                .any(|t| t.len() < s.len() && t.iter().all(|j| s.contains(j)))
        })
        .cloned()
        .collect();
    minimal
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxring::BlockData;
    use crate::intlin::AbGroup;

    #[test]
    fn patterns_count_and_shape() {
        assert_eq!(admissible_patterns(0).len(), 1);
        let p = admissible_patterns(3);
        assert_eq!(p.len(), 5);
        assert!(p.iter().any(|x| x.nonzero == vec![false, false, false]));
        assert!(p.iter().any(|x| x.nonzero == vec![true, true, true]));
        assert!(p.iter().any(|x| x.nonzero == vec![true, false, true]));
        // Two or more vanishing monomials (but not all) never occur.
        assert!(p.iter().all(|x| {
            let dead = x.nonzero.iter().filter(|&&b| !b).count();
            dead == 0 || dead == 1 || dead == 3
        }));
    }

    #[test]
    fn toric_supports_are_singletons() {
        let k = AbGroup::free(1);
        let p2 = RingData {
            group: k.clone(),
            blocks: vec![],
            free_weights: vec![k.elem(&[1], &[]); 3],
        };
        let expected = vec![vec![0], vec![1], vec![2]];
        assert_eq!(minimal_supports(&p2), expected);
        assert_eq!(brute_force_supports(&p2), expected);
    }

    #[test]
    fn singleton_blocks_with_free_variable() {
        // Three singleton blocks and one free variable: the minimal supports
        // are the pairs of surviving blocks plus the free singleton.
        let k = AbGroup::new(1, vec![2, 2]);
        let x = RingData {
            group: k.clone(),
            blocks: vec![
                BlockData {
                    exponents: vec![2],
                    weights: vec![k.elem(&[1], &[1, 0])],
                },
                BlockData {
                    exponents: vec![2],
                    weights: vec![k.elem(&[1], &[1, 1])],
                },
                BlockData {
                    exponents: vec![2],
                    weights: vec![k.elem(&[1], &[0, 1])],
                },
            ],
            free_weights: vec![k.elem(&[1], &[0, 0])],
        };
        let expected = vec![vec![0, 1], vec![0, 2], vec![1, 2], vec![3]];
        assert_eq!(minimal_supports(&x), expected);
        assert_eq!(brute_force_supports(&x), expected);
    }

    #[test]
    fn big_block_contributes_variable_singletons() {
        // Block of size two plus two singleton blocks: a single variable of
        // the big block survives on the all-vanishing stratum, and dropping
        // the big block leaves the two tails.
        let k = AbGroup::new(1, vec![2]);
        let x = RingData {
            group: k.clone(),
            blocks: vec![
                BlockData {
                    exponents: vec![1, 3],
                    weights: vec![k.elem(&[1], &[0]), k.elem(&[1], &[0])],
                },
                BlockData {
                    exponents: vec![4],
                    weights: vec![k.elem(&[1], &[1])],
                },
                BlockData {
                    exponents: vec![2],
                    weights: vec![k.elem(&[2], &[1])],
                },
            ],
            free_weights: vec![],
        };
        let expected = vec![vec![0], vec![1], vec![2, 3]];
        assert_eq!(minimal_supports(&x), expected);
        assert_eq!(brute_force_supports(&x), expected);
        assert_eq!(
            weight_set(&x, &[2, 3]),
            vec![k.elem(&[1], &[1]), k.elem(&[2], &[1])]
        );
    }

    #[test]
    fn two_big_blocks_drop_the_pair_supports() {
        // Blocks of sizes 2, 2, 1, 1: every support containing a whole big
        // block is dominated by that block's variable singletons.
        let k = AbGroup::new(1, vec![2]);
        let w = |f: i64, t: i64| k.elem(&[f], &[t]);
        let x = RingData {
            group: k.clone(),
            blocks: vec![
                BlockData {
                    exponents: vec![1, 1],
                    weights: vec![w(1, 1), w(1, 1)],
                },
                BlockData {
                    exponents: vec![1, 1],
                    weights: vec![w(1, 0), w(1, 0)],
                },
                BlockData {
                    exponents: vec![2],
                    weights: vec![w(1, 1)],
                },
                BlockData {
                    exponents: vec![2],
                    weights: vec![w(1, 0)],
                },
            ],
            free_weights: vec![],
        };
        let expected: Vec<Support> = vec![vec![0], vec![1], vec![2], vec![3]];
        assert_eq!(minimal_supports(&x), expected);
        assert_eq!(brute_force_supports(&x), expected);
    }
}
