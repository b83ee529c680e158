//! Dense univariate polynomials over a [`Field`].

use std::fmt;

use crate::field::Field;

/// Coefficients in ascending order; the zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UPoly<E> {
    coeffs: Vec<E>,
}

impl<E: Clone + PartialEq> UPoly<E> {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn from_coeffs<F: Field<Elem = E>>(coeffs: Vec<E>, f: &F) -> Self {
        let mut p = Self { coeffs };
        p.trim(f);
        p
    }

    pub fn constant<F: Field<Elem = E>>(c: E, f: &F) -> Self {
        Self::from_coeffs(vec![c], f)
    }

    pub fn one<F: Field<Elem = E>>(f: &F) -> Self {
        Self::constant(f.one(), f)
    }

    /// `c * x^k`.
    pub fn monomial<F: Field<Elem = E>>(c: E, k: usize, f: &F) -> Self {
        let mut coeffs = vec![f.zero(); k];
        coeffs.push(c);
        Self::from_coeffs(coeffs, f)
    }

    /// The polynomial `x`.
    pub fn x<F: Field<Elem = E>>(f: &F) -> Self {
        Self::monomial(f.one(), 1, f)
    }

    fn trim<F: Field<Elem = E>>(&mut self, f: &F) {
        while self.coeffs.last().is_some_and(|c| f.is_zero(c)) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[E] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<E> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn lc(&self) -> Option<&E> {
        self.coeffs.last()
    }

    pub fn coeff<F: Field<Elem = E>>(&self, k: usize, f: &F) -> E {
        self.coeffs.get(k).cloned().unwrap_or_else(|| f.zero())
    }

    pub fn add<F: Field<Elem = E>>(&self, other: &Self, f: &F) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| f.add(&self.coeff(i, f), &other.coeff(i, f)))
            .collect();
        Self::from_coeffs(coeffs, f)
    }

    pub fn sub<F: Field<Elem = E>>(&self, other: &Self, f: &F) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| f.sub(&self.coeff(i, f), &other.coeff(i, f)))
            .collect();
        Self::from_coeffs(coeffs, f)
    }

    pub fn neg<F: Field<Elem = E>>(&self, f: &F) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| f.neg(c)).collect(),
        }
    }

    pub fn scale<F: Field<Elem = E>>(&self, c: &E, f: &F) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| f.mul(a, c)).collect(), f)
    }

    pub fn mul<F: Field<Elem = E>>(&self, other: &Self, f: &F) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(&out[i + j], &f.mul(a, b));
            }
        }
        Self::from_coeffs(out, f)
    }

    pub fn pow<F: Field<Elem = E>>(&self, e: usize, f: &F) -> Self {
        let mut acc = Self::one(f);
        for _ in 0..e {
            acc = acc.mul(self, f);
        }
        acc
    }

    /// Quotient and remainder. Panics on division by zero.
    pub fn div_rem<F: Field<Elem = E>>(&self, divisor: &Self, f: &F) -> (Self, Self) {
        let dlc = divisor.lc().expect("division by the zero polynomial");
        let dlc_inv = f.inv(dlc).expect("leading coefficient is nonzero");
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![f.zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = f.mul(&rem[k + dd], &dlc_inv);
            if f.is_zero(&c) {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] = f.sub(&rem[k + j], &f.mul(&c, d));
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::from_coeffs(quot, f), Self::from_coeffs(rem, f))
    }

    pub fn rem<F: Field<Elem = E>>(&self, divisor: &Self, f: &F) -> Self {
        self.div_rem(divisor, f).1
    }

    /// Exact quotient; `None` if `divisor` does not divide `self`.
    pub fn div_exact<F: Field<Elem = E>>(&self, divisor: &Self, f: &F) -> Option<Self> {
        let (q, r) = self.div_rem(divisor, f);
        r.is_zero().then_some(q)
    }

    pub fn monic<F: Field<Elem = E>>(&self, f: &F) -> Self {
        match self.lc() {
            None => Self::zero(),
            Some(lc) => self.scale(&f.inv(lc).expect("nonzero"), f),
        }
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd<F: Field<Elem = E>>(&self, other: &Self, f: &F) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b, f);
            a = b;
            b = r;
        }
        a.monic(f)
    }

    /// `(g, s, t)` with `s*self + t*other = g`, `g` monic (or zero).
    pub fn ext_gcd<F: Field<Elem = E>>(&self, other: &Self, f: &F) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(f), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one(f));
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1, f);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1, f), f);
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1, f), f);
            t0 = std::mem::replace(&mut t1, t);
        }
        match r0.lc() {
            None => (r0, s0, t0),
            Some(lc) => {
                let inv = f.inv(lc).expect("nonzero");
                (r0.scale(&inv, f), s0.scale(&inv, f), t0.scale(&inv, f))
            }
        }
    }

    pub fn derivative<F: Field<Elem = E>>(&self, f: &F) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| f.mul(c, &f.from_i64(i as i64)))
            .collect();
        Self::from_coeffs(coeffs, f)
    }

    /// Monic product of the distinct irreducible factors.
    ///
    /// Valid in characteristic zero or when the characteristic exceeds the degree.
    pub fn squarefree_part<F: Field<Elem = E>>(&self, f: &F) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic(f);
        }
        let g = self.gcd(&self.derivative(f), f);
        self.div_exact(&g, f).expect("gcd divides").monic(f)
    }

    pub fn eval<F: Field<Elem = E>>(&self, x: &E, f: &F) -> E {
        self.coeffs
            .iter()
            .rev()
            .fold(f.zero(), |acc, c| f.add(&f.mul(&acc, x), c))
    }

    /// `self^e mod modulus` for a possibly huge exponent given as little-endian bits.
    pub fn pow_mod_bits<F: Field<Elem = E>>(&self, bits: &[bool], modulus: &Self, f: &F) -> Self {
        let mut acc = Self::one(f).rem(modulus, f);
        let mut base = self.rem(modulus, f);
        for &bit in bits {
            if bit {
                acc = acc.mul(&base, f).rem(modulus, f);
            }
            base = base.mul(&base, f).rem(modulus, f);
        }
        acc
    }

    pub fn display<'a>(&'a self, var: &'a str) -> UPolyDisplay<'a, E> {
        UPolyDisplay { poly: self, var }
    }
}

pub struct UPolyDisplay<'a, E> {
    poly: &'a UPoly<E>,
    var: &'a str,
}

impl<E: fmt::Display> fmt::Display for UPolyDisplay<'_, E> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.coeffs.is_empty() {
            return write!(out, "0");
        }
        let mut first = true;
        for (k, c) in self.poly.coeffs.iter().enumerate().rev() {
            let s = c.to_string();
            if s == "0" {
                continue;
            }
            if !first {
                write!(out, " + ")?;
            }
            first = false;
            match k {
                0 => write!(out, "{s}")?,
                1 => write!(out, "({s})*{}", self.var)?,
                _ => write!(out, "({s})*{}^{k}", self.var)?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, RationalField};

    fn q(coeffs: &[i64]) -> UPoly<num_rational::BigRational> {
        let f = RationalField;
        UPoly::from_coeffs(coeffs.iter().map(|&c| f.from_i64(c)).collect(), &f)
    }

    #[test]
    fn div_rem_reconstructs() {
        let f = RationalField;
        let a = q(&[1, 2, 3, 4, 5]);
        let b = q(&[2, 0, 1]);
        let (qq, r) = a.div_rem(&b, &f);
        assert_eq!(qq.mul(&b, &f).add(&r, &f), a);
        assert!(r.degree().unwrap() < 2);
    }

    #[test]
    fn gcd_of_products() {
        let f = RationalField;
        // (x-1)(x-2) and (x-1)(x+3)
        let a = q(&[2, -3, 1]);
        let b = q(&[-3, 2, 1]);
        assert_eq!(a.gcd(&b, &f), q(&[-1, 1]));
        let (g, s, t) = a.ext_gcd(&b, &f);
        assert_eq!(s.mul(&a, &f).add(&t.mul(&b, &f), &f), g);
    }

    #[test]
    fn squarefree_part_drops_multiplicity() {
        let f = RationalField;
        // (x-1)^3 (x+2)
        let p = q(&[-1, 1]).pow(3, &f).mul(&q(&[2, 1]), &f);
        assert_eq!(p.squarefree_part(&f), q(&[-1, 1]).mul(&q(&[2, 1]), &f));
    }

    #[test]
    fn eval_horner() {
        let f = PrimeField::new(97);
        let p = UPoly::from_coeffs(vec![3, 0, 2], &f);
        assert_eq!(p.eval(&5, &f), (3 + 2 * 25));
    }

    #[test]
    fn zero_is_trimmed() {
        let f = PrimeField::new(7);
        let p = UPoly::from_coeffs(vec![1, 0, 7 % 7], &f);
        assert_eq!(p.degree(), Some(0));
        assert!(p.sub(&p, &f).is_zero());
    }
}
