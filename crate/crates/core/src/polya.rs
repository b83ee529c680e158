//! Counting isomorphism classes of (n+1)-uniform hypergraphs with the cycle
//! index of the symmetric group acting on (n+1)-subsets.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// A cycle type: parts in nonincreasing order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition(Vec<usize>);

impl Partition {
    /// Sorts the parts; zero parts are dropped.
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    /// `counts[j]` = number of parts equal to `j`.
    pub fn multiplicities(&self) -> BTreeMap<usize, usize> {
        let mut m = BTreeMap::new();
        for &p in &self.0 {
            *m.entry(p).or_insert(0) += 1;
        }
        m
    }
}

impl fmt::Display for Partition {
    /// Exponential notation, e.g. `1^30 2^20`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.multiplicities();
        let mut first = true;
        for (j, c) in m {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            write!(f, "{j}^{c}")?;
        }
        Ok(())
    }
}

/// All partitions of `p`, in reverse lexicographic order starting from `(p)`.
pub fn partitions(p: usize) -> Vec<Partition> {
    fn go(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            cur.push(part);
            go(rest - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(p, p, &mut Vec::new(), &mut out);
    out
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    (0..k).fold(BigUint::one(), |acc, i| acc * (n - i) / (i + 1))
}

/// Conjugacy classes of `S_p`: each cycle type with the number of permutations
/// having it, `p! / prod(j^m_j * m_j!)`.
pub fn cycle_types(p: usize) -> Vec<(Partition, BigUint)> {
    let pf = factorial(p);
    partitions(p)
        .into_iter()
        .map(|pt| {
            let denom = pt
                .multiplicities()
                .iter()
                .fold(BigUint::one(), |acc, (&j, &m)| {
                    acc * BigUint::from(j).pow(m as u32) * factorial(m)
                });
            let size = &pf / denom;
            (pt, size)
        })
        .collect()
}

/// A permutation of `0..p` with the given cycle type, cycles on consecutive points.
pub fn representative(pt: &Partition) -> Vec<usize> {
    let mut perm = Vec::with_capacity(pt.total());
    let mut start = 0;
    for &len in pt.parts() {
        for i in 0..len {
            perm.push(start + (i + 1) % len);
        }
        start += len;
    }
    perm
}

/// Cycle type of a permutation of type `pt` acting on the `k`-subsets of
/// `0..p`, found by tracing the orbit of every subset.
pub fn induced_cycle_type(pt: &Partition, k: usize) -> Partition {
    let p = pt.total();
    assert!(k <= p && p <= 64, "need k <= p <= 64");
    let perm = representative(pt);
    let image = |s: u64| {
        let mut t = 0u64;
        let mut rest = s;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            t |= 1 << perm[v];
            rest &= rest - 1;
        }
        t
    };
    let subsets = k_subsets(p, k);
    let index: HashMap<u64, usize> = subsets.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let mut seen = vec![false; subsets.len()];
    let mut lengths = Vec::new();
    for i in 0..subsets.len() {
        if seen[i] {
            continue;
        }
        let mut len = 0;
        let mut s = subsets[i];
        loop {
            seen[index[&s]] = true;
            len += 1;
            s = image(s);
            if s == subsets[i] {
                break;
            }
        }
        lengths.push(len);
    }
    Partition::new(lengths)
}

/// Bitmasks of all `k`-subsets of `0..p`, ascending.
pub fn k_subsets(p: usize, k: usize) -> Vec<u64> {
    let mut out = Vec::new();
    if k > p {
        return out;
    }
    if k == 0 {
        return vec![0];
    }
    // Gosper's hack
    let mut s: u64 = (1u64 << k) - 1;
    let limit = if p == 64 { u64::MAX } else { (1u64 << p) - 1 };
    while s <= limit {
        out.push(s);
        let c = s & s.wrapping_neg();
        let r = s + c;
        if r == 0 {
            break;
        }
        s = (((r ^ s) >> 2) / c) | r;
        if s > limit {
            break;
        }
    }
    out
}

/// Cycle index of `S_p` acting on `k`-subsets: induced cycle type mapped to
/// its exact coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleIndex {
    pub terms: BTreeMap<Partition, BigRational>,
}

impl CycleIndex {
    pub fn of_induced(p: usize, k: usize) -> Self {
        let pf = BigInt::from(factorial(p));
        let mut terms: BTreeMap<Partition, BigRational> = BTreeMap::new();
        for (pt, size) in cycle_types(p) {
            let induced = induced_cycle_type(&pt, k);
            let c = BigRational::new(BigInt::from(size), pf.clone());
            *terms.entry(induced).or_insert_with(BigRational::zero) += c;
        }
        Self { terms }
    }

    pub fn coefficient_sum(&self) -> BigRational {
        self.terms.values().fold(BigRational::zero(), |a, c| a + c)
    }

    /// `Z(1 + x)`: every `x_j` replaced by `1 + x^j`, as exact coefficients.
    pub fn substitute_one_plus_x(&self) -> Vec<BigRational> {
        let mut total: Vec<BigRational> = Vec::new();
        for (pt, c) in &self.terms {
            let mut poly = vec![BigInt::one()];
            for &j in pt.parts() {
                let mut next = vec![BigInt::zero(); poly.len() + j];
                for (i, a) in poly.iter().enumerate() {
                    next[i] += a;
                    next[i + j] += a;
                }
                poly = next;
            }
            if total.len() < poly.len() {
                total.resize(poly.len(), BigRational::zero());
            }
            for (i, a) in poly.into_iter().enumerate() {
                total[i] += c * BigRational::from_integer(a);
            }
        }
        total
    }
}

/// Coefficients `s_{p,0}, s_{p,1}, ...` counting `n`-plexes of order `p`
/// (isomorphism classes of `(n+1)`-uniform hypergraphs on `p` vertices) by
/// number of edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountingPolynomial {
    pub coefficients: Vec<BigUint>,
}

impl CountingPolynomial {
    /// Zero beyond the last coefficient.
    pub fn coefficient(&self, k: usize) -> BigUint {
        self.coefficients.get(k).cloned().unwrap_or_default()
    }

    /// Value at `x = 1`: the number of `n`-plexes of order `p`.
    pub fn total(&self) -> BigUint {
        self.coefficients.iter().sum()
    }
}

/// `s_p^n(x) = Z(S_p^{(n+1)}, 1 + x)`. Orders too small to hold an edge give
/// the constant polynomial 1.
pub fn counting_polynomial(p: usize, n: usize) -> CountingPolynomial {
    let k = n + 1;
    if p < k {
        return CountingPolynomial {
            coefficients: vec![BigUint::one()],
        };
    }
    let coeffs = CycleIndex::of_induced(p, k).substitute_one_plus_x();
    let coefficients = coeffs
        .into_iter()
        .map(|c| {
            assert!(c.is_integer(), "cycle index gave a non-integral count {c}");
            c.to_integer()
                .to_biguint()
                .expect("orbit counts are nonnegative")
        })
        .collect();
    CountingPolynomial { coefficients }
}

/// Classes with `k` edges on exactly `p` vertices and none isolated:
/// `s_{p,k}^n - s_{p-1,k}^n`.
pub fn count_no_isolated(p: usize, k: usize, n: usize) -> BigUint {
    assert!(p >= 1);
    let with = counting_polynomial(p, n).coefficient(k);
    let without = counting_polynomial(p - 1, n).coefficient(k);
    with - without
}

/// Convenience for small counts.
pub fn count_no_isolated_u64(p: usize, k: usize, n: usize) -> u64 {
    count_no_isolated(p, k, n)
        .to_u64()
        .expect("count fits in u64")
}

#[cfg(test)]
mod tests {
    use super::*;
    use itertools::Itertools;
    use std::collections::BTreeSet;

    fn sizes(p: usize) -> BTreeMap<Vec<usize>, u64> {
        cycle_types(p)
            .into_iter()
            .map(|(pt, s)| (pt.parts().to_vec(), s.to_u64().unwrap()))
            .collect()
    }

    #[test]
    fn small_symmetric_groups() {
        let s3 = sizes(3);
        assert_eq!(s3[&vec![3]], 2);
        assert_eq!(s3[&vec![2, 1]], 3);
        assert_eq!(s3[&vec![1, 1, 1]], 1);
        let s4 = sizes(4);
        assert_eq!(s4[&vec![1, 1, 1, 1]], 1);
        assert_eq!(s4[&vec![2, 1, 1]], 6);
        assert_eq!(s4[&vec![2, 2]], 3);
        assert_eq!(s4[&vec![3, 1]], 8);
        assert_eq!(s4[&vec![4]], 6);
        let s8 = sizes(8);
        assert_eq!(s8.len(), 22);
        assert_eq!(s8.values().sum::<u64>(), 40320);
        for p in 1..=12 {
            let total: BigUint = cycle_types(p).into_iter().map(|(_, s)| s).sum();
            assert_eq!(total, factorial(p));
        }
    }

    #[test]
    fn representative_has_requested_type() {
        for pt in partitions(7) {
            let perm = representative(&pt);
            let mut seen = [false; 7];
            let mut lens = Vec::new();
            for i in 0..7 {
                if seen[i] {
                    continue;
                }
                let (mut j, mut len) = (i, 0);
                while !seen[j] {
                    seen[j] = true;
                    j = perm[j];
                    len += 1;
                }
                lens.push(len);
            }
            assert_eq!(Partition::new(lens), pt);
        }
    }

    #[test]
    fn induced_examples() {
        let id = Partition::new(vec![1; 8]);
        assert_eq!(induced_cycle_type(&id, 4), Partition::new(vec![1; 70]));
        let swap = Partition::new(vec![2, 1, 1, 1, 1, 1, 1]);
        let t = induced_cycle_type(&swap, 4);
        let m = t.multiplicities();
        assert_eq!((m[&1], m[&2]), (30, 20));
        let cyc = induced_cycle_type(&Partition::new(vec![8]), 4);
        assert_eq!(cyc.total(), 70);
        assert!(cyc.parts().iter().all(|&l| 8 % l == 0));
    }

    #[test]
    fn subsets_enumerated() {
        assert_eq!(k_subsets(8, 4).len(), 70);
        assert_eq!(k_subsets(5, 0), vec![0]);
        assert!(k_subsets(3, 4).is_empty());
        assert!(k_subsets(8, 4).iter().all(|s| s.count_ones() == 4));
    }

    #[test]
    fn cycle_index_sums_to_one() {
        for (p, k) in [(4, 2), (6, 3), (8, 4), (9, 4)] {
            assert_eq!(CycleIndex::of_induced(p, k).coefficient_sum(), BigRational::one());
        }
    }

    /// Orbits of `k`-uniform edge sets on `p` labeled vertices under `S_p`,
    /// by minimal image over all permutations.
    fn brute_orbits(p: usize, k: usize) -> Vec<usize> {
        let subsets: Vec<Vec<usize>> = (0..p).combinations(k).collect();
        let m = subsets.len();
        let index: HashMap<Vec<usize>, usize> =
            subsets.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        let perms: Vec<Vec<usize>> = (0..p)
            .permutations(p)
            .map(|perm| {
                subsets
                    .iter()
                    .map(|s| {
                        let mut t: Vec<usize> = s.iter().map(|&v| perm[v]).collect();
                        t.sort_unstable();
                        index[&t]
                    })
                    .collect()
            })
            .collect();
        let mut seen = BTreeSet::new();
        for set in 0u64..(1 << m) {
            let min = perms
                .iter()
                .map(|act| (0..m).filter(|&i| set >> i & 1 == 1).fold(0u64, |a, i| a | 1 << act[i]))
                .min()
                .unwrap();
            seen.insert(min);
        }
        let mut by_size = vec![0; m + 1];
        for s in seen {
            by_size[s.count_ones() as usize] += 1;
        }
        by_size
    }

    #[test]
    fn matches_brute_force_orbit_counts() {
        for (p, n) in [(3, 1), (4, 1), (5, 1), (4, 2), (5, 2), (5, 3), (6, 3)] {
            let expected: Vec<BigUint> = brute_orbits(p, n + 1).into_iter().map(BigUint::from).collect();
            assert_eq!(counting_polynomial(p, n).coefficients, expected, "p={p} n={n}");
        }
        let graphs3: Vec<u32> = vec![1, 1, 1, 1];
        assert_eq!(
            counting_polynomial(3, 1).coefficients,
            graphs3.into_iter().map(BigUint::from).collect::<Vec<_>>()
        );
    }

    #[test]
    fn shape_of_counting_polynomial() {
        let s = counting_polynomial(8, 3);
        assert_eq!(s.coefficients.len(), 71);
        assert_eq!(s.coefficient(0), BigUint::one());
        assert_eq!(s.coefficient(70), BigUint::one());
        assert_eq!(counting_polynomial(3, 3).coefficients, vec![BigUint::one()]);
    }

    #[test]
    fn single_edge_on_four_vertices() {
        assert_eq!(count_no_isolated_u64(4, 1, 3), 1);
    }
}
