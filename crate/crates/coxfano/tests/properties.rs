//! Randomized properties of the exact algebra and the classification
//! invariants, checked with proptest.

use proptest::collection::vec;
use proptest::prelude::*;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use coxfano::bounds::{prime_count_below, XiConvention};
use coxfano::coxring::{BlockData, RingData};
use coxfano::enumerate::enumerate_torsion_groups;
use coxfano::fixtures::all_fixtures;
use coxfano::intlin::{
    cokernel, row_hermite_form, smith_normal_form, torsion_automorphisms, AbGroup, BigMatrix,
    GroupElem, IntMatrix, Subgroup,
};
use coxfano::invariants::{compute_all, rational_string};
use num_rational::BigRational;

/// Random matrices with small shapes and entries.
fn small_matrix(max_dim: usize, bound: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| vec(vec(-bound..=bound, c..=c), r..=r))
}

/// Invariant factor chains like `[2, 4, 12]`: ascending divisibility, all >= 2.
fn torsion_chain() -> impl Strategy<Value = Vec<i64>> {
    vec(2i64..=5, 0..=3).prop_map(|multipliers| {
        let mut chain = Vec::new();
        let mut current = 1i64;
        for m in multipliers {
            current *= m;
            chain.push(current);
        }
        chain
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn smith_form_satisfies_its_contract(entries in small_matrix(5, 30)) {
        let m = IntMatrix::from_rows(&entries);
        let snf = smith_normal_form(&m);
        let product = snf.u.matmul(&BigMatrix::from_int(&m)).matmul(&snf.v);
        prop_assert_eq!(product, BigMatrix::from_int(&snf.d));
        prop_assert_eq!(snf.u.det().abs(), BigInt::one());
        prop_assert_eq!(snf.v.det().abs(), BigInt::one());
        let diag = snf.diagonal();
        for i in 0..diag.len() {
            prop_assert!(diag[i] >= 0);
            if i + 1 < diag.len() && diag[i] != 0 {
                prop_assert_eq!(diag[i + 1] % diag[i], 0);
            }
            if diag[i] == 0 && i + 1 < diag.len() {
                prop_assert_eq!(diag[i + 1], 0);
            }
        }
        prop_assert_eq!(snf.rank, diag.iter().filter(|&&d| d != 0).count());
    }

    #[test]
    fn hermite_form_is_idempotent_and_spans_the_rows(entries in small_matrix(4, 12)) {
        let m = IntMatrix::from_rows(&entries);
        let h = row_hermite_form(&m);
        prop_assert_eq!(row_hermite_form(&h), h.clone());
        // Every original row lies in the lattice spanned by the Hermite rows.
        let basis_t = h.transpose();
        for row in &entries {
            prop_assert!(basis_t.solve(row).is_some());
        }
    }

    #[test]
    fn solve_solutions_reproduce_the_image(
        entries in small_matrix(4, 9),
        x in vec(-9i64..=9, 4),
    ) {
        let m = IntMatrix::from_rows(&entries);
        let x = &x[..m.cols()];
        let b = m.apply(x);
        let y = m.solve(&b);
        prop_assert!(y.is_some(), "a known solution exists");
        prop_assert_eq!(m.apply(&y.unwrap()), b);
    }

    #[test]
    fn kernel_vectors_annihilate(entries in small_matrix(4, 9)) {
        let m = IntMatrix::from_rows(&entries);
        for k in m.kernel_basis() {
            prop_assert!(m.apply(&k).iter().all(|&v| v == 0));
        }
    }

    #[test]
    fn cokernel_order_matches_the_determinant(entries in small_matrix(4, 9)) {
        let m = IntMatrix::from_rows(&entries);
        if m.rows() != m.cols() {
            return Ok(());
        }
        let det = BigMatrix::from_int(&m).det();
        if det.is_zero() {
            return Ok(());
        }
        let g = cokernel(&m);
        prop_assert_eq!(g.free_rank(), 0);
        prop_assert_eq!(BigInt::from(g.torsion_order()), det.abs());
    }

    #[test]
    fn quotient_map_is_a_homomorphism_killing_the_subgroup(
        torsion in torsion_chain(),
        free_rank in 0usize..=1,
        seeds in vec(0i64..1000, 6),
    ) {
        let group = AbGroup::new(free_rank, torsion);
        let pick = |seed: i64, spread: i64| -> GroupElem {
            let free: Vec<i64> = (0..group.free_rank()).map(|i| (seed + i as i64) % spread - 2).collect();
            let res: Vec<i64> = group
                .torsion()
                .iter()
                .enumerate()
                .map(|(i, &t)| (seed * (i as i64 + 3)) % t)
                .collect();
            group.elem(&free, &res)
        };
        let gens: Vec<GroupElem> = seeds[..2].iter().map(|&s| pick(s, 5)).collect();
        let sub = Subgroup::span(&group, &gens);
        let q = sub.quotient();
        for g in &gens {
            prop_assert!(q.map(g).is_zero(), "generators must map to zero");
        }
        let a = pick(seeds[2], 7);
        let b = pick(seeds[3], 7);
        let sum_then_map = q.map(&group.add(&a, &b));
        let map_then_sum = q.group().add(&q.map(&a), &q.map(&b));
        prop_assert_eq!(sum_then_map, map_then_sum);
        // Mapping a negation gives the negated image.
        let c = pick(seeds[4], 7);
        prop_assert_eq!(q.map(&group.neg(&c)), q.group().neg(&q.map(&c)));
    }

    #[test]
    fn group_arithmetic_satisfies_the_abelian_axioms(
        torsion in torsion_chain(),
        seeds in vec(-20i64..=20, 3),
    ) {
        let group = AbGroup::new(1, torsion);
        let elems: Vec<GroupElem> = seeds
            .iter()
            .map(|&s| {
                let res: Vec<i64> = group.torsion().iter().map(|&t| (s.rem_euclid(t)) % t).collect();
                group.elem(&[s], &res)
            })
            .collect();
        let (a, b, c) = (&elems[0], &elems[1], &elems[2]);
        prop_assert_eq!(group.add(a, b), group.add(b, a));
        prop_assert_eq!(
            group.add(&group.add(a, b), c),
            group.add(a, &group.add(b, c))
        );
        prop_assert!(group.add(a, &group.neg(a)).is_zero());
        prop_assert_eq!(group.add(a, &group.zero()), a.clone());
    }

    #[test]
    fn automorphisms_preserve_group_structure(
        torsion in torsion_chain(),
        aut_seed in 0usize..40,
        pair in vec(0i64..100, 2),
    ) {
        let group = AbGroup::new(0, torsion);
        if group.torsion_order() > 40 {
            return Ok(());
        }
        let auts = torsion_automorphisms(&group);
        prop_assert!(!auts.is_empty(), "identity is always present");
        let aut = &auts[aut_seed % auts.len()];
        let residues = |seed: i64| -> Vec<i64> {
            group.torsion().iter().enumerate().map(|(i, &t)| (seed * (i as i64 + 2)) % t).collect()
        };
        let a = residues(pair[0]);
        let b = residues(pair[1]);
        // Additivity.
        let ea = group.elem(&[], &a);
        let eb = group.elem(&[], &b);
        let sum = group.add(&ea, &eb);
        let lhs = aut.apply(&group, sum.torsion());
        let ga = group.elem(&[], &aut.apply(&group, &a));
        let gb = group.elem(&[], &aut.apply(&group, &b));
        let rhs = group.add(&ga, &gb);
        prop_assert_eq!(lhs, rhs.torsion().to_vec());
        // Bijectivity on all elements.
        let mut images: Vec<Vec<i64>> = group
            .all_elements()
            .map(|e| aut.apply(&group, e.torsion()))
            .collect();
        let total = images.len();
        images.sort();
        images.dedup();
        prop_assert_eq!(images.len(), total);
    }

    #[test]
    fn torsion_group_enumeration_stays_inside_the_index(mu in 1i64..=24) {
        let groups = enumerate_torsion_groups(mu);
        let mut seen = std::collections::BTreeSet::new();
        for g in &groups {
            prop_assert_eq!(g.free_rank(), 0);
            prop_assert_eq!(mu % g.torsion_order(), 0, "group order divides the index");
            let t = g.torsion();
            for i in 0..t.len() {
                prop_assert!(t[i] >= 2);
                if i + 1 < t.len() {
                    prop_assert_eq!(t[i + 1] % t[i], 0);
                }
            }
            prop_assert!(seen.insert(t.to_vec()), "no duplicate groups");
        }
        prop_assert!(groups.iter().any(|g| g.torsion().is_empty()), "trivial group is listed");
        prop_assert_eq!(enumerate_torsion_groups(mu), groups, "deterministic order");
    }

    #[test]
    fn prime_counts_match_a_naive_sieve(x in 0i64..2000) {
        let naive = |limit: i64, inclusive: bool| -> usize {
            (2..=if inclusive { limit } else { limit - 1 })
                .filter(|&n| (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0))
                .count()
        };
        prop_assert_eq!(
            prime_count_below(x, XiConvention::StrictlyBelow),
            naive(x, false)
        );
        prop_assert_eq!(
            prime_count_below(x, XiConvention::Inclusive),
            naive(x, true)
        );
    }

    #[test]
    fn rational_strings_parse_back(p in -1000i64..=1000, q in 1i64..=1000) {
        let r = BigRational::new(BigInt::from(p), BigInt::from(q));
        let s = rational_string(&r);
        let parsed = match s.split_once('/') {
            Some((num, den)) => BigRational::new(
                num.parse::<i64>().unwrap().into(),
                den.parse::<i64>().unwrap().into(),
            ),
            None => BigRational::from(BigInt::from(s.parse::<i64>().unwrap())),
        };
        prop_assert_eq!(parsed, r);
    }

    #[test]
    fn group_normalization_is_invariant_factor_form(moduli in vec(1i64..=12, 0..=4)) {
        let g = AbGroup::from_moduli(0, &moduli);
        let t = g.torsion();
        for i in 0..t.len() {
            prop_assert!(t[i] >= 2);
            if i + 1 < t.len() {
                prop_assert_eq!(t[i + 1] % t[i], 0);
            }
        }
        let product: i64 = moduli.iter().product();
        prop_assert_eq!(g.torsion_order(), product.max(1));
    }

    #[test]
    fn invariants_are_stable_under_class_group_automorphisms(
        fixture_idx in 0usize..17,
        aut_seed in 0usize..64,
    ) {
        let fixtures = all_fixtures();
        let f = &fixtures[fixture_idx % fixtures.len()];
        let group = f.data.group.clone();
        if group.torsion_order() > 60 {
            return Ok(());
        }
        let auts = torsion_automorphisms(&group);
        let aut = &auts[aut_seed % auts.len()];
        let twist = |w: &GroupElem| -> GroupElem {
            group.elem(w.free(), &aut.apply(&group, w.torsion()))
        };
        let twisted = RingData {
            group: group.clone(),
            blocks: f
                .data
                .blocks
                .iter()
                .map(|b| BlockData {
                    exponents: b.exponents.clone(),
                    weights: b.weights.iter().map(&twist).collect(),
                })
                .collect(),
            free_weights: f.data.free_weights.iter().map(&twist).collect(),
        };
        prop_assert!(twisted.validate().is_valid());
        // Same variety, same invariants, same canonical form.
        let original = compute_all(&f.data);
        let moved = compute_all(&twisted);
        prop_assert_eq!(original.picard_index, moved.picard_index);
        prop_assert_eq!(original.self_intersection, moved.self_intersection);
        prop_assert_eq!(original.gorenstein_index, moved.gorenstein_index);
        prop_assert_eq!(f.data.canonical_form(), twisted.canonical_form());
    }
}
