//! Factorization of squarefree polynomials over `GF(p)`, p odd (Cantor-Zassenhaus).

use num_bigint::BigUint;
use num_traits::One;
use rand::Rng;

use crate::field::{Field, PrimeField};
use crate::upoly::UPoly;

fn bits_of(n: &BigUint) -> Vec<bool> {
    (0..n.bits()).map(|i| n.bit(i)).collect()
}

/// Splits a monic squarefree polynomial into `(product, d)` pairs where each
/// product collects all irreducible factors of degree `d`.
pub fn distinct_degree(f: &UPoly<u64>, field: &PrimeField) -> Vec<(UPoly<u64>, usize)> {
    let p_bits = bits_of(&BigUint::from(field.modulus()));
    let x = UPoly::x(field);
    let mut rest = f.monic(field);
    let mut out = Vec::new();
    let mut h = x.clone();
    let mut d = 1;
    while rest.degree().unwrap_or(0) >= 2 * d {
        h = h.pow_mod_bits(&p_bits, &rest, field);
        let g = h.sub(&x, field).gcd(&rest, field);
        if g.degree().unwrap_or(0) > 0 {
            rest = rest.div_exact(&g, field).expect("gcd divides").monic(field);
            h = h.rem(&rest, field);
            out.push((g, d));
        }
        d += 1;
    }
    if rest.degree().unwrap_or(0) > 0 {
        let deg = rest.degree().unwrap();
        out.push((rest, deg));
    }
    out
}

/// Splits a product of distinct irreducible factors all of degree `d`.
pub fn equal_degree<R: Rng + ?Sized>(
    f: &UPoly<u64>,
    d: usize,
    field: &PrimeField,
    rng: &mut R,
) -> Vec<UPoly<u64>> {
    let n = f.degree().expect("nonzero");
    if n == d {
        return vec![f.monic(field)];
    }
    let q = BigUint::from(field.modulus()).pow(d as u32);
    let e = bits_of(&((q - BigUint::one()) >> 1));
    loop {
        let r = UPoly::from_coeffs((0..n).map(|_| field.random(rng)).collect(), field);
        if r.degree().unwrap_or(0) == 0 {
            continue;
        }
        let w = r.pow_mod_bits(&e, f, field).sub(&UPoly::one(field), field);
        let u = w.gcd(f, field);
        let du = u.degree().unwrap_or(0);
        if du > 0 && du < n {
            let v = f.div_exact(&u, field).expect("gcd divides").monic(field);
            let mut out = equal_degree(&u, d, field, rng);
            out.extend(equal_degree(&v, d, field, rng));
            return out;
        }
    }
}

/// Monic irreducible factors of a squarefree polynomial, sorted by degree then
/// coefficients.
pub fn factor_squarefree<R: Rng + ?Sized>(
    f: &UPoly<u64>,
    field: &PrimeField,
    rng: &mut R,
) -> Vec<UPoly<u64>> {
    let mut out: Vec<UPoly<u64>> = distinct_degree(f, field)
        .into_iter()
        .flat_map(|(g, d)| equal_degree(&g, d, field, rng))
        .collect();
    out.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.coeffs().cmp(b.coeffs())));
    out
}
