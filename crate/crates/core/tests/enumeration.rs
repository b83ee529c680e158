use crossratio::hypergraph::{canonical_form, column_sums, enumerate_classes, Hypergraph};
use itertools::Itertools;
use std::collections::BTreeSet;

#[test]
fn eight_five_and_seven_four() {
    let t = std::time::Instant::now();
    assert_eq!(enumerate_classes(8, 5).unwrap().len(), 484);
    assert_eq!(enumerate_classes(7, 4).unwrap().len(), 29);
    eprintln!("enumeration took {:?}", t.elapsed());
}

/// Orbit count by brute force: canonicalize every labeled edge set with a
/// minimum over all vertex permutations, independent of the enumerator.
fn brute_classes(n: usize, k: usize) -> usize {
    let all: Vec<[usize; 4]> = (0..n).combinations(4).map(|c| [c[0], c[1], c[2], c[3]]).collect();
    let perms: Vec<Vec<usize>> = (0..n).permutations(n).collect();
    let mut seen = BTreeSet::new();
    for set in all.iter().copied().combinations(k) {
        let h = Hypergraph::new(n, set).unwrap();
        if !h.is_valid_for_degree() {
            continue;
        }
        let min = perms
            .iter()
            .map(|p| h.relabel(p).edges().to_vec())
            .min()
            .unwrap();
        seen.insert(min);
    }
    seen.len()
}

#[test]
fn enumerator_matches_brute_force_orbits() {
    for (n, k) in [(5, 2), (6, 2), (6, 3), (7, 2), (7, 3)] {
        assert_eq!(enumerate_classes(n, k).unwrap().len(), brute_classes(n, k), "({n},{k})");
    }
}

#[test]
fn keys_are_distinct_and_sorted() {
    let classes = enumerate_classes(8, 5).unwrap();
    let keys: Vec<_> = classes.iter().map(canonical_form).collect();
    assert!(keys.windows(2).all(|w| w[0] < w[1]));
    let total: usize = classes.iter().map(|h| column_sums(h).0.iter().sum::<usize>()).sum();
    assert_eq!(total, 484 * 20);
}
