//! Arithmetic in `F[t]/(m)` for a squarefree modulus `m`.
//!
//! The ring is a product of fields, one per irreducible factor of `m`. Instead
//! of factoring `m` up front, every zero test and inversion either succeeds
//! uniformly or reports a [`Split`]: a proper factor of `m` on which the
//! element vanishes. Callers restart on both halves. This is dynamic
//! evaluation in the sense of Della Dora, Dicrescenzo and Duval.

use crate::field::Field;
use crate::mpoly::Algebra;
use crate::upoly::UPoly;

/// A proper monic factor of the current modulus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Split<E>(pub UPoly<E>);

/// An element that is either zero on every factor or invertible on every factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Uniform<E> {
    Zero,
    Unit { inverse: UPoly<E> },
}

#[derive(Clone, Debug)]
pub struct Quotient<F: Field> {
    field: F,
    modulus: UPoly<F::Elem>,
}

impl<F: Field> Quotient<F> {
    /// `modulus` must be monic, squarefree and of positive degree.
    pub fn new(field: F, modulus: UPoly<F::Elem>) -> Self {
        assert!(modulus.degree().is_some_and(|d| d > 0), "modulus must have positive degree");
        assert!(field.is_one(modulus.lc().unwrap()), "modulus must be monic");
        Self { field, modulus }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn modulus(&self) -> &UPoly<F::Elem> {
        &self.modulus
    }

    /// Number of geometric points of the ring: the degree of the modulus.
    pub fn degree(&self) -> usize {
        self.modulus.degree().unwrap()
    }

    pub fn reduce(&self, a: &UPoly<F::Elem>) -> UPoly<F::Elem> {
        a.rem(&self.modulus, &self.field)
    }

    /// The class of `t`.
    pub fn generator(&self) -> UPoly<F::Elem> {
        self.reduce(&UPoly::x(&self.field))
    }

    pub fn sub(&self, a: &UPoly<F::Elem>, b: &UPoly<F::Elem>) -> UPoly<F::Elem> {
        a.sub(b, &self.field)
    }

    pub fn neg(&self, a: &UPoly<F::Elem>) -> UPoly<F::Elem> {
        a.neg(&self.field)
    }

    pub fn classify(&self, a: &UPoly<F::Elem>) -> Result<Uniform<F::Elem>, Split<F::Elem>> {
        let a = self.reduce(a);
        if a.is_zero() {
            return Ok(Uniform::Zero);
        }
        let (g, s, _) = a.ext_gcd(&self.modulus, &self.field);
        if g.degree() == Some(0) {
            Ok(Uniform::Unit {
                inverse: self.reduce(&s),
            })
        } else {
            Err(Split(g))
        }
    }

    pub fn is_zero(&self, a: &UPoly<F::Elem>) -> Result<bool, Split<F::Elem>> {
        self.classify(a).map(|u| matches!(u, Uniform::Zero))
    }

    /// `Ok(None)` when `a` is zero on every factor.
    pub fn inv(&self, a: &UPoly<F::Elem>) -> Result<Option<UPoly<F::Elem>>, Split<F::Elem>> {
        Ok(match self.classify(a)? {
            Uniform::Zero => None,
            Uniform::Unit { inverse } => Some(inverse),
        })
    }

    /// The two complementary moduli produced by a split.
    pub fn split_moduli(&self, split: &Split<F::Elem>) -> (UPoly<F::Elem>, UPoly<F::Elem>) {
        let g = split.0.monic(&self.field);
        let h = self
            .modulus
            .div_exact(&g, &self.field)
            .expect("split factor divides the modulus");
        (g, h.monic(&self.field))
    }

    // Polynomials over the quotient ring, coefficients ascending.

    /// Drops leading coefficients that are zero on every factor.
    pub fn poly_trim(&self, p: &[UPoly<F::Elem>]) -> Result<Vec<UPoly<F::Elem>>, Split<F::Elem>> {
        let mut out: Vec<_> = p.iter().map(|c| self.reduce(c)).collect();
        while let Some(lc) = out.last() {
            match self.classify(lc)? {
                Uniform::Zero => {
                    out.pop();
                }
                Uniform::Unit { .. } => break,
            }
        }
        Ok(out)
    }

    fn poly_monic(&self, p: Vec<UPoly<F::Elem>>) -> Result<Vec<UPoly<F::Elem>>, Split<F::Elem>> {
        let Some(lc) = p.last() else {
            return Ok(p);
        };
        let inv = self.inv(lc)?.expect("trimmed polynomial has a unit leading coefficient");
        Ok(p.iter().map(|c| self.mul(c, &inv)).collect())
    }

    /// Remainder by a trimmed divisor whose leading coefficient is a unit.
    fn poly_rem(
        &self,
        a: &[UPoly<F::Elem>],
        b: &[UPoly<F::Elem>],
    ) -> Result<Vec<UPoly<F::Elem>>, Split<F::Elem>> {
        let db = b.len() - 1;
        let lc_inv = self.inv(&b[db])?.expect("unit leading coefficient");
        let mut r = self.poly_trim(a)?;
        while r.len() > db {
            let dr = r.len() - 1;
            let c = self.mul(&r[dr], &lc_inv);
            for (k, bk) in b.iter().enumerate() {
                let idx = dr - db + k;
                r[idx] = self.reduce(&r[idx].sub(&self.mul(&c, bk), &self.field));
            }
            r.pop();
            r = self.poly_trim(&r)?;
        }
        Ok(r)
    }

    /// Monic gcd over the quotient ring; splits when a leading coefficient is
    /// a zero divisor.
    pub fn poly_gcd(
        &self,
        a: &[UPoly<F::Elem>],
        b: &[UPoly<F::Elem>],
    ) -> Result<Vec<UPoly<F::Elem>>, Split<F::Elem>> {
        let mut a = self.poly_trim(a)?;
        let mut b = self.poly_trim(b)?;
        while !b.is_empty() {
            let r = self.poly_rem(&a, &b)?;
            a = b;
            b = r;
        }
        self.poly_monic(a)
    }

    pub fn poly_derivative(&self, p: &[UPoly<F::Elem>]) -> Vec<UPoly<F::Elem>> {
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c.scale(&self.field.from_i64(i as i64), &self.field))
            .collect()
    }

    /// Exact division by a monic divisor.
    fn poly_div_monic(
        &self,
        a: &[UPoly<F::Elem>],
        b: &[UPoly<F::Elem>],
    ) -> Result<Vec<UPoly<F::Elem>>, Split<F::Elem>> {
        let mut r = self.poly_trim(a)?;
        let db = b.len() - 1;
        if r.len() <= db {
            return Ok(Vec::new());
        }
        let mut q = vec![UPoly::zero(); r.len() - db];
        for k in (0..q.len()).rev() {
            let c = r[k + db].clone();
            for (j, bj) in b.iter().enumerate() {
                r[k + j] = self.reduce(&r[k + j].sub(&self.mul(&c, bj), &self.field));
            }
            q[k] = c;
        }
        Ok(q)
    }

    /// Monic squarefree part of a polynomial over the quotient ring.
    pub fn poly_squarefree(&self, p: &[UPoly<F::Elem>]) -> Result<Vec<UPoly<F::Elem>>, Split<F::Elem>> {
        let p = self.poly_monic(self.poly_trim(p)?)?;
        if p.len() <= 2 {
            return Ok(p);
        }
        let g = self.poly_gcd(&p, &self.poly_derivative(&p))?;
        let q = self.poly_div_monic(&p, &g)?;
        self.poly_monic(self.poly_trim(&q)?)
    }
}

impl<F: Field> Algebra<F> for Quotient<F> {
    type Elem = UPoly<F::Elem>;

    fn embed(&self, c: &F::Elem) -> UPoly<F::Elem> {
        UPoly::constant(c.clone(), &self.field)
    }

    fn add(&self, a: &UPoly<F::Elem>, b: &UPoly<F::Elem>) -> UPoly<F::Elem> {
        a.add(b, &self.field)
    }

    fn mul(&self, a: &UPoly<F::Elem>, b: &UPoly<F::Elem>) -> UPoly<F::Elem> {
        self.reduce(&a.mul(b, &self.field))
    }

    fn zero(&self) -> UPoly<F::Elem> {
        UPoly::zero()
    }

    fn one(&self) -> UPoly<F::Elem> {
        UPoly::one(&self.field)
    }
}

/// Runs `eval` on `F[t]/(modulus)`, restarting on both halves whenever it
/// reports a split. Returns one `(modulus, value)` per final piece; the piece
/// moduli multiply to the input modulus.
pub fn evaluate_with_splitting<F, T, X>(
    field: &F,
    modulus: UPoly<F::Elem>,
    mut eval: impl FnMut(&Quotient<F>) -> Result<T, SplitOr<F::Elem, X>>,
) -> Result<Vec<(UPoly<F::Elem>, T)>, X>
where
    F: Field,
{
    let mut out = Vec::new();
    let mut work = vec![modulus];
    while let Some(m) = work.pop() {
        let ring = Quotient::new(field.clone(), m.clone());
        match eval(&ring) {
            Ok(v) => out.push((m, v)),
            Err(SplitOr::Split(s)) => {
                let (a, b) = ring.split_moduli(&s);
                work.push(b);
                work.push(a);
            }
            Err(SplitOr::Other(e)) => return Err(e),
        }
    }
    Ok(out)
}

/// Either a modulus split or a caller-defined failure.
#[derive(Clone, Debug)]
pub enum SplitOr<E, X> {
    Split(Split<E>),
    Other(X),
}

impl<E, X> From<Split<E>> for SplitOr<E, X> {
    fn from(s: Split<E>) -> Self {
        SplitOr::Split(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::RationalField;
    use num_rational::BigRational;

    fn up(c: &[i64]) -> UPoly<BigRational> {
        UPoly::from_coeffs(c.iter().map(|&x| RationalField.from_i64(x)).collect(), &RationalField)
    }

    #[test]
    fn zero_divisor_splits_modulus() {
        // m = (t - 1)(t - 2); the element t - 1 is zero on one factor only
        let ring = Quotient::new(RationalField, up(&[2, -3, 1]));
        let err = ring.classify(&up(&[-1, 1])).unwrap_err();
        let (a, b) = ring.split_moduli(&err);
        assert_eq!(a, up(&[-1, 1]));
        assert_eq!(b, up(&[-2, 1]));
        assert!(matches!(ring.classify(&up(&[5, 1])), Ok(Uniform::Unit { .. })));
        assert_eq!(ring.classify(&up(&[2, -3, 1])), Ok(Uniform::Zero));
    }

    #[test]
    fn inverse_multiplies_to_one() {
        let ring = Quotient::new(RationalField, up(&[-2, 0, 1]));
        let a = up(&[3, 1]);
        let inv = ring.inv(&a).unwrap().unwrap();
        assert_eq!(ring.mul(&a, &inv), up(&[1]));
    }

    #[test]
    fn splitting_driver_counts_roots_where_predicate_holds() {
        // m = t (t - 1)(t - 2)(t - 3): count the roots where t - 2 is invertible
        let m = up(&[0, 1]).mul(&up(&[-1, 1]), &RationalField).mul(&up(&[-2, 1]), &RationalField).mul(&up(&[-3, 1]), &RationalField);
        let pieces = evaluate_with_splitting::<_, bool, ()>(&RationalField, m, |ring| {
            Ok(ring.inv(&up(&[-2, 1]))?.is_some())
        })
        .unwrap();
        let good: usize = pieces
            .iter()
            .filter(|(_, ok)| *ok)
            .map(|(m, _)| m.degree().unwrap())
            .sum();
        assert_eq!(good, 3);
    }

    #[test]
    fn gcd_over_quotient_ring() {
        // K = Q[t]/(t^2 - 2); gcd(x^2 - 2, x - t) = x - t
        let ring = Quotient::new(RationalField, up(&[-2, 0, 1]));
        let t = ring.generator();
        let a = vec![up(&[-2]), up(&[]), up(&[1])];
        let b = vec![ring.neg(&t), up(&[1])];
        let g = ring.poly_gcd(&a, &b).unwrap();
        assert_eq!(g, vec![ring.neg(&t), up(&[1])]);
        let sq = ring
            .poly_squarefree(&[ring.mul(&t, &t), t.scale(&RationalField.from_i64(-2), &RationalField), up(&[1])])
            .unwrap();
        // (x - t)^2 -> x - t
        assert_eq!(sq, vec![ring.neg(&t), up(&[1])]);
    }
}
