use crossratio::hypergraph::{canonical_form, column_sums, is_isomorphic, Edge, Hypergraph};
use crossratio::reduce::{matching_count, permanent};
use crossratio::solver::{cross_ratio, ProjectivePoint};
use crossratio_algebra::{Field, PrimeField, RationalField};
use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn four_subsets(n: usize) -> Vec<Edge> {
    (0..n).combinations(4).map(|c| [c[0], c[1], c[2], c[3]]).collect()
}

/// Hypergraph on 4..=9 vertices with 1..=6 distinct edges, plus a vertex
/// permutation and an edge order to apply to it.
fn graph_and_shuffle() -> impl Strategy<Value = (Hypergraph, Vec<usize>, Vec<Edge>)> {
    (4usize..=9)
        .prop_flat_map(|n| {
            let all = four_subsets(n);
            let k = all.len().min(6);
            (Just(n), prop::sample::subsequence(all, 1..=k))
        })
        .prop_flat_map(|(n, edges)| {
            let perm = Just((0..n).collect::<Vec<_>>()).prop_shuffle();
            let order = Just(edges.clone()).prop_shuffle();
            (Just(n), Just(edges), perm, order)
        })
        .prop_map(|(n, edges, perm, order)| {
            let h = Hypergraph::new(n, edges).unwrap();
            let shuffled = order.iter().map(|e| e.map(|v| perm[v])).collect();
            (h, perm, shuffled)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn canonical_key_ignores_labels_and_edge_order((h, perm, shuffled) in graph_and_shuffle()) {
        let g = Hypergraph::new(h.n_vertices(), shuffled).unwrap();
        prop_assert_eq!(canonical_form(&h), canonical_form(&g));
        prop_assert_eq!(canonical_form(&h), canonical_form(&h.relabel(&perm)));
        prop_assert!(is_isomorphic(&h, &g));
        prop_assert_eq!(column_sums(&h), column_sums(&g));
    }

    #[test]
    fn canonical_key_is_idempotent((h, _perm, _shuffled) in graph_and_shuffle()) {
        let key = canonical_form(&h);
        prop_assert_eq!(canonical_form(&key.to_hypergraph()), key.clone());
        prop_assert_eq!(key.to_string().parse::<crossratio::hypergraph::CanonicalKey>().unwrap(), key);
    }

    #[test]
    fn matrix_text_round_trips((h, _perm, _shuffled) in graph_and_shuffle()) {
        let m = h.biadjacency();
        let back = crossratio::hypergraph::BiadjacencyMatrix::parse(&m.to_text()).unwrap();
        prop_assert_eq!(back.to_hypergraph().unwrap(), h);
    }

    #[test]
    fn permanent_matches_assignment_count(rows in prop::collection::vec(0u32..32, 5)) {
        let brute = (0..5)
            .permutations(5)
            .filter(|p| (0..5).all(|r| rows[r] >> p[r] & 1 == 1))
            .count() as u64;
        prop_assert_eq!(permanent(&rows, 5), brute);
    }

    /// The deletion set is a set.
    #[test]
    fn matching_count_is_symmetric_in_deletion_order(
        (h, _perm, _shuffled) in graph_and_shuffle(),
        del in Just((0..9).collect::<Vec<usize>>()).prop_shuffle(),
    ) {
        let n = h.n_vertices();
        let d: Vec<usize> = del.into_iter().filter(|&v| v < n).take(3).collect();
        let mut rev = d.clone();
        rev.reverse();
        prop_assert_eq!(matching_count(&h, &d), matching_count(&h, &rev));
    }

    #[test]
    fn mobius_invariance_over_rationals(
        zs in prop::collection::btree_set(-40i64..40, 4),
        order in Just((0..4).collect::<Vec<usize>>()).prop_shuffle(),
        (a, b, c, d) in (-9i64..9, -9i64..9, -9i64..9, -9i64..9),
    ) {
        prop_assume!(a * d - b * c != 0);
        let f = RationalField;
        let q = |v: i64| BigRational::from_integer(BigInt::from(v));
        let zs: Vec<i64> = zs.into_iter().collect();
        let pts: Vec<ProjectivePoint<BigRational>> =
            order.iter().map(|&i| ProjectivePoint::Finite(q(zs[i]))).collect();
        let moved: Vec<ProjectivePoint<BigRational>> = order
            .iter()
            .map(|&i| {
                let z = q(zs[i]);
                let den = q(c) * &z + q(d);
                if den == q(0) {
                    ProjectivePoint::Infinity
                } else {
                    ProjectivePoint::Finite((q(a) * &z + q(b)) / den)
                }
            })
            .collect();
        let before = cross_ratio(&f, [&pts[0], &pts[1], &pts[2], &pts[3]]).unwrap();
        let after = cross_ratio(&f, [&moved[0], &moved[1], &moved[2], &moved[3]]).unwrap();
        prop_assert_eq!(before, after);
    }

    #[test]
    fn mobius_invariance_over_a_prime_field(
        zs in prop::collection::btree_set(0u64..1_000_003, 4),
        (a, b, c, d) in (0u64..1_000_003, 0u64..1_000_003, 0u64..1_000_003, 0u64..1_000_003),
    ) {
        let f = PrimeField::new(1_000_003);
        let det = f.sub(&f.mul(&a, &d), &f.mul(&b, &c));
        prop_assume!(!f.is_zero(&det));
        let pts: Vec<ProjectivePoint<u64>> = zs.iter().map(|&z| ProjectivePoint::Finite(z)).collect();
        let moved: Vec<ProjectivePoint<u64>> = zs
            .iter()
            .map(|z| {
                let den = f.add(&f.mul(&c, z), &d);
                match f.div(&f.add(&f.mul(&a, z), &b), &den) {
                    Some(w) => ProjectivePoint::Finite(w),
                    None => ProjectivePoint::Infinity,
                }
            })
            .collect();
        prop_assert_eq!(
            cross_ratio(&f, [&pts[0], &pts[1], &pts[2], &pts[3]]).unwrap(),
            cross_ratio(&f, [&moved[0], &moved[1], &moved[2], &moved[3]]).unwrap()
        );
    }
}
