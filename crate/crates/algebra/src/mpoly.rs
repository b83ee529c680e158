//! Sparse multivariate polynomials with exact coefficients.
//!
//! Terms are kept in a `BTreeMap` keyed by exponent vectors, so the map order is
//! lexicographic with variable 0 most significant and the last entry is the
//! lex-leading term.

use std::collections::BTreeMap;
use std::fmt;

use crate::field::Field;
use crate::upoly::UPoly;

pub type Monomial = Vec<u16>;

/// A commutative algebra over `F` that polynomials can be evaluated into.
pub trait Algebra<F: Field> {
    type Elem: Clone;

    fn embed(&self, c: &F::Elem) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
}

impl<F: Field> Algebra<F> for F {
    type Elem = F::Elem;

    fn embed(&self, c: &F::Elem) -> F::Elem {
        c.clone()
    }

    fn add(&self, a: &F::Elem, b: &F::Elem) -> F::Elem {
        Field::add(self, a, b)
    }

    fn mul(&self, a: &F::Elem, b: &F::Elem) -> F::Elem {
        Field::mul(self, a, b)
    }

    fn zero(&self) -> F::Elem {
        Field::zero(self)
    }

    fn one(&self) -> F::Elem {
        Field::one(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MPoly<E> {
    nvars: usize,
    terms: BTreeMap<Monomial, E>,
}

impl<E: Clone + PartialEq> MPoly<E> {
    pub fn zero(nvars: usize) -> Self {
        Self {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant<F: Field<Elem = E>>(c: E, nvars: usize, f: &F) -> Self {
        let mut p = Self::zero(nvars);
        if !f.is_zero(&c) {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn var<F: Field<Elem = E>>(i: usize, nvars: usize, f: &F) -> Self {
        assert!(i < nvars, "variable {i} out of range");
        let mut m = vec![0; nvars];
        m[i] = 1;
        let mut p = Self::zero(nvars);
        p.terms.insert(m, f.one());
        p
    }

    /// Builds a polynomial from `(monomial, coefficient)` pairs, combining duplicates.
    pub fn from_terms<F: Field<Elem = E>>(
        nvars: usize,
        terms: impl IntoIterator<Item = (Monomial, E)>,
        f: &F,
    ) -> Self {
        let mut p = Self::zero(nvars);
        for (m, c) in terms {
            assert_eq!(m.len(), nvars, "monomial arity mismatch");
            p.add_term(m, c, f);
        }
        p
    }

    fn add_term<F: Field<Elem = E>>(&mut self, m: Monomial, c: E, f: &F) {
        if f.is_zero(&c) {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let s = f.add(existing, &c);
                if f.is_zero(&s) {
                    self.terms.remove(&m);
                } else {
                    *existing = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &E)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.iter().all(|&e| e == 0))
    }

    /// The value of a constant polynomial; `None` if some variable occurs.
    pub fn as_constant<F: Field<Elem = E>>(&self, f: &F) -> Option<E> {
        if !self.is_constant() {
            return None;
        }
        Some(self.terms.values().next().cloned().unwrap_or_else(|| f.zero()))
    }

    pub fn degree_in(&self, var: usize) -> usize {
        self.terms.keys().map(|m| m[var] as usize).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> usize {
        self.terms
            .keys()
            .map(|m| m.iter().map(|&e| e as usize).sum())
            .max()
            .unwrap_or(0)
    }

    pub fn occurs(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m[var] > 0)
    }

    /// Indices of the variables that occur, ascending.
    pub fn vars(&self) -> Vec<usize> {
        (0..self.nvars).filter(|&v| self.occurs(v)).collect()
    }

    pub fn lead_term(&self) -> Option<(&Monomial, &E)> {
        self.terms.iter().next_back()
    }

    pub fn add<F: Field<Elem = E>>(&self, other: &Self, f: &F) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone(), f);
        }
        out
    }

    pub fn sub<F: Field<Elem = E>>(&self, other: &Self, f: &F) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), f.neg(c), f);
        }
        out
    }

    pub fn neg<F: Field<Elem = E>>(&self, f: &F) -> Self {
        Self {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), f.neg(c))).collect(),
        }
    }

    pub fn scale<F: Field<Elem = E>>(&self, s: &E, f: &F) -> Self {
        if f.is_zero(s) {
            return Self::zero(self.nvars);
        }
        Self {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), f.mul(c, s)))
                .collect(),
        }
    }

    pub fn mul<F: Field<Elem = E>>(&self, other: &Self, f: &F) -> Self {
        let mut out = Self::zero(self.nvars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.iter().zip(mb).map(|(a, b)| a + b).collect();
                out.add_term(m, f.mul(ca, cb), f);
            }
        }
        out
    }

    pub fn pow<F: Field<Elem = E>>(&self, e: usize, f: &F) -> Self {
        let mut acc = Self::constant(f.one(), self.nvars, f);
        for _ in 0..e {
            acc = acc.mul(self, f);
        }
        acc
    }

    /// Coefficients of `self` viewed as a polynomial in `var`; index `k` holds
    /// the coefficient of `var^k`, which no longer involves `var`.
    pub fn coeffs_in(&self, var: usize) -> Vec<Self> {
        let d = self.degree_in(var);
        let mut out = vec![Self::zero(self.nvars); d + 1];
        if self.is_zero() {
            return out;
        }
        for (m, c) in &self.terms {
            let k = m[var] as usize;
            let mut mm = m.clone();
            mm[var] = 0;
            out[k].terms.insert(mm, c.clone());
        }
        out
    }

    /// Substitutes `var = num / den` and clears denominators:
    /// returns `sum_k c_k * num^k * den^(d-k)` where `d = degree_in(var)`.
    pub fn substitute<F: Field<Elem = E>>(&self, var: usize, num: &Self, den: &Self, f: &F) -> Self {
        let cs = self.coeffs_in(var);
        let d = cs.len() - 1;
        let mut num_pows = vec![Self::constant(f.one(), self.nvars, f)];
        let mut den_pows = vec![Self::constant(f.one(), self.nvars, f)];
        for k in 1..=d {
            num_pows.push(num_pows[k - 1].mul(num, f));
            den_pows.push(den_pows[k - 1].mul(den, f));
        }
        let mut out = Self::zero(self.nvars);
        for (k, c) in cs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            out = out.add(&c.mul(&num_pows[k], f).mul(&den_pows[d - k], f), f);
        }
        out
    }

    /// Substitutes a constant for `var`.
    pub fn substitute_value<F: Field<Elem = E>>(&self, var: usize, value: &E, f: &F) -> Self {
        let one = Self::constant(f.one(), self.nvars, f);
        self.substitute(var, &Self::constant(value.clone(), self.nvars, f), &one, f)
    }

    /// Exact division; `None` when `divisor` does not divide `self`.
    pub fn div_exact<F: Field<Elem = E>>(&self, divisor: &Self, f: &F) -> Option<Self> {
        let (dm, dc) = divisor.lead_term()?;
        let dc_inv = f.inv(dc).expect("nonzero leading coefficient");
        let mut rem = self.clone();
        let mut quot = Self::zero(self.nvars);
        while let Some((rm, rc)) = rem.lead_term() {
            if rm.iter().zip(dm).any(|(a, b)| a < b) {
                return None;
            }
            let qm: Monomial = rm.iter().zip(dm).map(|(a, b)| a - b).collect();
            let qc = f.mul(rc, &dc_inv);
            let t = Self::from_terms(self.nvars, [(qm.clone(), qc.clone())], f);
            rem = rem.sub(&t.mul(divisor, f), f);
            quot.add_term(qm, qc, f);
        }
        Some(quot)
    }

    /// Divides out `factor` as many times as it divides `self`.
    pub fn remove_factor<F: Field<Elem = E>>(&self, factor: &Self, f: &F) -> Self {
        if factor.is_constant() || self.is_zero() {
            return self.clone();
        }
        let mut cur = self.clone();
        while let Some(q) = cur.div_exact(factor, f) {
            cur = q;
        }
        cur
    }

    /// Makes the lex-leading coefficient one.
    pub fn monic<F: Field<Elem = E>>(&self, f: &F) -> Self {
        match self.lead_term() {
            None => self.clone(),
            Some((_, c)) => self.scale(&f.inv(c).expect("nonzero"), f),
        }
    }

    /// Evaluates into an algebra; `point[v]` is the value of variable `v`.
    /// Variables that do not occur may be given as `None`.
    pub fn eval<F, A>(&self, point: &[Option<A::Elem>], alg: &A) -> A::Elem
    where
        F: Field<Elem = E>,
        A: Algebra<F>,
    {
        let mut acc = alg.zero();
        for (m, c) in &self.terms {
            let mut t = alg.embed(c);
            for (v, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let x = point[v]
                    .as_ref()
                    .unwrap_or_else(|| panic!("no value for variable {v}"));
                for _ in 0..e {
                    t = alg.mul(&t, x);
                }
            }
            acc = alg.add(&acc, &t);
        }
        acc
    }

    /// Converts a polynomial in at most the single variable `var`.
    pub fn to_upoly<F: Field<Elem = E>>(&self, var: usize, f: &F) -> Option<UPoly<E>> {
        let mut coeffs = vec![f.zero(); self.degree_in(var) + 1];
        for (m, c) in &self.terms {
            if m.iter().enumerate().any(|(v, &e)| v != var && e > 0) {
                return None;
            }
            coeffs[m[var] as usize] = c.clone();
        }
        Some(UPoly::from_coeffs(coeffs, f))
    }

    pub fn from_upoly<F: Field<Elem = E>>(p: &UPoly<E>, var: usize, nvars: usize, f: &F) -> Self {
        let terms = p.coeffs().iter().enumerate().map(|(k, c)| {
            let mut m = vec![0; nvars];
            m[var] = k as u16;
            (m, c.clone())
        });
        Self::from_terms(nvars, terms, f)
    }

    /// Views a polynomial in the two variables `x`, `y` as a polynomial in `x`
    /// whose coefficients are univariate in `y`. `None` if another variable occurs.
    pub fn to_bivariate<F: Field<Elem = E>>(&self, x: usize, y: usize, f: &F) -> Option<Vec<UPoly<E>>> {
        self.coeffs_in(x)
            .iter()
            .map(|c| c.to_upoly(y, f))
            .collect()
    }

    pub fn from_bivariate<F: Field<Elem = E>>(
        coeffs: &[UPoly<E>],
        x: usize,
        y: usize,
        nvars: usize,
        f: &F,
    ) -> Self {
        let mut terms = Vec::new();
        for (i, cy) in coeffs.iter().enumerate() {
            for (j, c) in cy.coeffs().iter().enumerate() {
                let mut m = vec![0; nvars];
                m[x] += i as u16;
                m[y] += j as u16;
                terms.push((m, c.clone()));
            }
        }
        Self::from_terms(nvars, terms, f)
    }

    /// Renders with variable names supplied by `name`.
    pub fn display<'a>(&'a self, name: &'a dyn Fn(usize) -> String) -> MPolyDisplay<'a, E> {
        MPolyDisplay { poly: self, name }
    }
}

pub struct MPolyDisplay<'a, E> {
    poly: &'a MPoly<E>,
    name: &'a dyn Fn(usize) -> String,
}

impl<E: fmt::Display> fmt::Display for MPolyDisplay<'_, E> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.terms.is_empty() {
            return write!(out, "0");
        }
        for (i, (m, c)) in self.poly.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(out, " + ")?;
            }
            let mono: Vec<String> = m
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(v, &e)| {
                    if e == 1 {
                        (self.name)(v)
                    } else {
                        format!("{}^{e}", (self.name)(v))
                    }
                })
                .collect();
            if mono.is_empty() {
                write!(out, "({c})")?;
            } else {
                write!(out, "({c})*{}", mono.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, RationalField};
    use num_rational::BigRational;

    type Q = MPoly<BigRational>;

    fn v(i: usize) -> Q {
        Q::var(i, 3, &RationalField)
    }

    fn c(x: i64) -> Q {
        Q::constant(RationalField.from_i64(x), 3, &RationalField)
    }

    #[test]
    fn coefficient_split_and_degrees() {
        let f = RationalField;
        // x0^2 x1 + 3 x0 - x2
        let p = v(0).pow(2, &f).mul(&v(1), &f).add(&c(3).mul(&v(0), &f), &f).sub(&v(2), &f);
        assert_eq!(p.degree_in(0), 2);
        assert_eq!(p.total_degree(), 3);
        let cs = p.coeffs_in(0);
        assert_eq!(cs.len(), 3);
        assert_eq!(cs[0], v(2).neg(&f));
        assert_eq!(cs[1], c(3));
        assert_eq!(cs[2], v(1));
        assert_eq!(p.vars(), vec![0, 1, 2]);
    }

    #[test]
    fn substitution_clears_denominators() {
        let f = RationalField;
        // x0^2 + x1 with x0 = x2 / (x1 + 1)  ->  x2^2 + x1 (x1 + 1)^2
        let p = v(0).pow(2, &f).add(&v(1), &f);
        let den = v(1).add(&c(1), &f);
        let s = p.substitute(0, &v(2), &den, &f);
        let expect = v(2).pow(2, &f).add(&v(1).mul(&den.pow(2, &f), &f), &f);
        assert_eq!(s, expect);
    }

    #[test]
    fn exact_division() {
        let f = RationalField;
        let a = v(0).add(&v(1), &f);
        let b = v(0).sub(&c(2), &f).mul(&v(2), &f);
        let prod = a.mul(&b, &f);
        assert_eq!(prod.div_exact(&a, &f), Some(b.clone()));
        assert_eq!(prod.div_exact(&b, &f), Some(a.clone()));
        assert_eq!(prod.add(&c(1), &f).div_exact(&a, &f), None);
        assert_eq!(prod.mul(&a, &f).remove_factor(&a, &f), b);
    }

    #[test]
    fn eval_in_base_field() {
        let f = PrimeField::new(101);
        let p = MPoly::var(0, 2, &f)
            .mul(&MPoly::var(1, 2, &f), &f)
            .add(&MPoly::constant(5, 2, &f), &f);
        assert_eq!(p.eval(&[Some(3), Some(4)], &f), 17);
    }

    #[test]
    fn bivariate_round_trip() {
        let f = RationalField;
        let p = v(0).pow(2, &f).mul(&v(2), &f).add(&v(2).pow(3, &f), &f).add(&c(7), &f);
        let bi = p.to_bivariate(0, 2, &f).unwrap();
        assert_eq!(Q::from_bivariate(&bi, 0, 2, 3, &f), p);
        assert!(v(1).to_bivariate(0, 2, &f).is_none());
    }
}
