//! Elimination of one variable from two bivariate polynomials.
//!
//! A bivariate polynomial is handled as `Vec<UPoly>`: index `i` is the
//! coefficient of `x^i`, itself a polynomial in `y`.

use crate::field::Field;
use crate::upoly::UPoly;

pub type BiPoly<E> = Vec<UPoly<E>>;

fn trim<E: Clone + PartialEq>(p: &mut BiPoly<E>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

/// Degree in `x`; `None` for zero.
pub fn x_degree<E: Clone + PartialEq>(p: &BiPoly<E>) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

/// Determinant of a square matrix over `F[y]` by fraction-free Bareiss elimination.
pub fn det_bareiss<F: Field>(mut m: Vec<Vec<UPoly<F::Elem>>>, f: &F) -> UPoly<F::Elem> {
    let n = m.len();
    if n == 0 {
        return UPoly::one(f);
    }
    let mut negate = false;
    let mut prev = UPoly::one(f);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    negate = !negate;
                }
                None => return UPoly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[k][k].mul(&m[i][j], f).sub(&m[i][k].mul(&m[k][j], f), f);
                m[i][j] = num
                    .div_exact(&prev, f)
                    .expect("Bareiss step divides exactly");
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        d.neg(f)
    } else {
        d
    }
}

/// `Res_x(a, b)` as a polynomial in `y`, from the Sylvester matrix built on the
/// actual `x`-degrees of `a` and `b`.
pub fn resultant_x<F: Field>(a: &BiPoly<F::Elem>, b: &BiPoly<F::Elem>, f: &F) -> UPoly<F::Elem> {
    let (Some(da), Some(db)) = (x_degree(a), x_degree(b)) else {
        return UPoly::zero();
    };
    if da == 0 {
        return a[0].pow(db, f);
    }
    if db == 0 {
        return b[0].pow(da, f);
    }
    let size = da + db;
    let mut m = vec![vec![UPoly::zero(); size]; size];
    for i in 0..db {
        for k in 0..=da {
            m[i][i + (da - k)] = a[k].clone();
        }
    }
    for i in 0..da {
        for k in 0..=db {
            m[db + i][i + (db - k)] = b[k].clone();
        }
    }
    det_bareiss(m, f)
}

/// Monic gcd of the `y`-coefficients.
pub fn content<F: Field>(p: &BiPoly<F::Elem>, f: &F) -> UPoly<F::Elem> {
    p.iter().fold(UPoly::zero(), |g, c| g.gcd(c, f))
}

pub fn primitive_part<F: Field>(p: &BiPoly<F::Elem>, f: &F) -> BiPoly<F::Elem> {
    let c = content(p, f);
    if c.is_zero() {
        return Vec::new();
    }
    let mut out: BiPoly<F::Elem> = p
        .iter()
        .map(|a| a.div_exact(&c, f).expect("content divides"))
        .collect();
    trim(&mut out);
    out
}

/// Pseudo-remainder of `a` by `b` in `F[y][x]`.
fn pseudo_rem<F: Field>(a: &BiPoly<F::Elem>, b: &BiPoly<F::Elem>, f: &F) -> BiPoly<F::Elem> {
    let db = x_degree(b).expect("nonzero divisor");
    let lcb = b[db].clone();
    let mut r = a.clone();
    trim(&mut r);
    while let Some(dr) = x_degree(&r) {
        if dr < db {
            break;
        }
        let lcr = r[dr].clone();
        let shift = dr - db;
        for c in r.iter_mut() {
            *c = c.mul(&lcb, f);
        }
        for (k, bc) in b.iter().enumerate() {
            r[k + shift] = r[k + shift].sub(&lcr.mul(bc, f), f);
        }
        trim(&mut r);
    }
    r
}

/// Greatest common divisor in `F[x, y]`, normalized so that the leading
/// `x`-coefficient is monic in `y`. `gcd(0, 0) = 0`.
pub fn gcd_bivariate<F: Field>(a: &BiPoly<F::Elem>, b: &BiPoly<F::Elem>, f: &F) -> BiPoly<F::Elem> {
    let mut a = a.clone();
    let mut b = b.clone();
    trim(&mut a);
    trim(&mut b);
    if a.is_empty() {
        return normalize(b, f);
    }
    if b.is_empty() {
        return normalize(a, f);
    }
    let cont = content(&a, f).gcd(&content(&b, f), f);
    let mut p = primitive_part(&a, f);
    let mut q = primitive_part(&b, f);
    if x_degree(&p) < x_degree(&q) {
        std::mem::swap(&mut p, &mut q);
    }
    while x_degree(&q).is_some_and(|d| d > 0) {
        let r = pseudo_rem(&p, &q, f);
        p = q;
        q = primitive_part(&r, f);
    }
    let prim = if q.is_empty() { p } else { vec![UPoly::one(f)] };
    let g: BiPoly<F::Elem> = prim.iter().map(|c| c.mul(&cont, f)).collect();
    normalize(g, f)
}

fn normalize<F: Field>(mut p: BiPoly<F::Elem>, f: &F) -> BiPoly<F::Elem> {
    trim(&mut p);
    let Some(d) = x_degree(&p) else {
        return p;
    };
    let lc = p[d].lc().expect("nonzero").clone();
    let inv = f.inv(&lc).expect("nonzero");
    p.iter().map(|c| c.scale(&inv, f)).collect()
}
