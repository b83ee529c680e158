//! Cross-ratios, parameter draws and the gauge-fixed polynomial system.

use std::fmt;

use crossratio_algebra::{Field, MPoly};
use rand::Rng;

use super::SolverError;
use crate::hypergraph::{Edge, Hypergraph};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProjectivePoint<E> {
    Infinity,
    Finite(E),
}

/// `(z3 - z1)(z4 - z2) / ((z3 - z2)(z4 - z1))`. A point at infinity occurs in
/// one numerator and one denominator factor; both are dropped.
pub fn cross_ratio<F: Field>(
    f: &F,
    z: [&ProjectivePoint<F::Elem>; 4],
) -> Result<F::Elem, SolverError> {
    for i in 0..4 {
        for j in i + 1..4 {
            if z[i] == z[j] {
                return Err(SolverError::CoincidentPoints);
            }
        }
    }
    // factor (i, j) means z_i - z_j; None when either side is infinite
    let diff = |i: usize, j: usize| match (z[i], z[j]) {
        (ProjectivePoint::Finite(a), ProjectivePoint::Finite(b)) => Some(f.sub(a, b)),
        _ => None,
    };
    let num = [diff(2, 0), diff(3, 1)];
    let den = [diff(2, 1), diff(3, 0)];
    let prod = |fs: [Option<F::Elem>; 2]| fs.into_iter().flatten().fold(f.one(), |acc, x| f.mul(&acc, &x));
    let d = prod(den);
    f.div(&prod(num), &d).ok_or(SolverError::CoincidentPoints)
}

/// Generic target values `a_1..a_m`, one per edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParameterDraw<E> {
    pub a: Vec<E>,
    pub seed: u64,
}

impl<E: Clone + PartialEq> ParameterDraw<E> {
    /// Uniform over the field minus `{0, 1}`, pairwise distinct.
    pub fn random<F: Field<Elem = E>, R: Rng + ?Sized>(f: &F, m: usize, seed: u64, rng: &mut R) -> Self {
        let mut a: Vec<E> = Vec::with_capacity(m);
        while a.len() < m {
            let x = f.random(rng);
            if f.is_zero(&x) || f.is_one(&x) || a.contains(&x) {
                continue;
            }
            a.push(x);
        }
        Self { a, seed }
    }

    /// Fixed values, checked against the draw invariants.
    pub fn fixed<F: Field<Elem = E>>(f: &F, a: Vec<E>) -> Result<Self, SolverError> {
        for (i, x) in a.iter().enumerate() {
            if f.is_zero(x) || f.is_one(x) || a[..i].contains(x) {
                return Err(SolverError::BadParameters);
            }
        }
        Ok(Self { a, seed: 0 })
    }
}

/// Gauge-fixed equations: vertex 0 at infinity, vertex 1 at 0, vertex 2 at 1.
///
/// Polynomials have one variable per vertex (variable `v` is `p_{v+1}`) plus
/// one spare variable used by the solver; the gauge vertices never occur.
#[derive(Clone, Debug)]
pub struct CrossRatioSystem<F: Field> {
    pub field: F,
    pub n_vertices: usize,
    /// Edge tuples in the order used to build the equations.
    pub edges: Vec<Edge>,
    pub draw: ParameterDraw<F::Elem>,
    pub equations: Vec<MPoly<F::Elem>>,
    pub degeneracy: Vec<MPoly<F::Elem>>,
}

impl<F: Field> CrossRatioSystem<F> {
    pub fn nvars(&self) -> usize {
        self.n_vertices + 1
    }

    /// Variables `3..n`.
    pub fn unknowns(&self) -> Vec<usize> {
        (3..self.n_vertices).collect()
    }

    pub fn var_name(&self) -> impl Fn(usize) -> String + '_ {
        move |v| {
            if v < self.n_vertices {
                format!("p{}", v + 1)
            } else {
                "s".to_string()
            }
        }
    }

    /// Every equation has degree at most one in each variable.
    pub fn is_multilinear(&self) -> bool {
        self.equations
            .iter()
            .all(|e| (0..self.nvars()).all(|v| e.degree_in(v) <= 1))
    }
}

impl<F: Field> fmt::Display for CrossRatioSystem<F> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = self.var_name();
        writeln!(out, "gauge p1 = inf, p2 = 0, p3 = 1 over {}", self.field.describe())?;
        for (i, (e, eq)) in self.edges.iter().zip(&self.equations).enumerate() {
            let tuple: Vec<String> = e.iter().map(|v| (v + 1).to_string()).collect();
            writeln!(
                out,
                "e{} ({}) a{} = {}: {} = 0",
                i + 1,
                tuple.join(","),
                i + 1,
                self.draw.a[i],
                eq.display(&name)
            )?;
        }
        Ok(())
    }
}

enum Slot<E> {
    Infinity,
    Poly(MPoly<E>),
}

/// Builds the system for `h` with its edges in ascending vertex order; `h`
/// should already have its vertices ordered by nonincreasing degree.
pub fn gauge_and_build<F: Field>(
    h: &Hypergraph,
    draw: ParameterDraw<F::Elem>,
    f: &F,
) -> Result<CrossRatioSystem<F>, SolverError> {
    gauge_and_build_tuples(h.n_vertices(), h.edges().to_vec(), draw, f)
}

/// As [`gauge_and_build`], with each edge read in the given tuple order.
pub fn gauge_and_build_tuples<F: Field>(
    n_vertices: usize,
    edges: Vec<Edge>,
    draw: ParameterDraw<F::Elem>,
    f: &F,
) -> Result<CrossRatioSystem<F>, SolverError> {
    if n_vertices < 4 || edges.len() + 3 != n_vertices {
        return Err(SolverError::NotSquare {
            vertices: n_vertices,
            edges: edges.len(),
        });
    }
    if draw.a.len() != edges.len() {
        return Err(SolverError::BadParameters);
    }
    let nvars = n_vertices + 1;
    let slot = |v: usize| match v {
        0 => Slot::Infinity,
        1 => Slot::Poly(MPoly::zero(nvars)),
        2 => Slot::Poly(MPoly::constant(f.one(), nvars, f)),
        _ => Slot::Poly(MPoly::var(v, nvars, f)),
    };
    let mut equations = Vec::with_capacity(edges.len());
    for (e, a) in edges.iter().zip(&draw.a) {
        let z: Vec<Slot<F::Elem>> = e.iter().map(|&v| slot(v)).collect();
        let diff = |i: usize, j: usize| match (&z[i], &z[j]) {
            (Slot::Poly(x), Slot::Poly(y)) => Some(x.sub(y, f)),
            _ => None,
        };
        let one = MPoly::constant(f.one(), nvars, f);
        let prod = |fs: [Option<MPoly<F::Elem>>; 2]| fs.into_iter().flatten().fold(one.clone(), |acc, x| acc.mul(&x, f));
        let num = prod([diff(2, 0), diff(3, 1)]);
        let den = prod([diff(2, 1), diff(3, 0)]);
        equations.push(num.sub(&den.scale(a, f), f));
    }
    let mut degeneracy = Vec::new();
    let one = MPoly::constant(f.one(), nvars, f);
    for i in 3..n_vertices {
        let pi = MPoly::var(i, nvars, f);
        degeneracy.push(pi.clone());
        degeneracy.push(pi.sub(&one, f));
        for j in 3..i {
            degeneracy.push(pi.sub(&MPoly::var(j, nvars, f), f));
        }
    }
    Ok(CrossRatioSystem {
        field: f.clone(),
        n_vertices,
        edges,
        draw,
        equations,
        degeneracy,
    })
}
