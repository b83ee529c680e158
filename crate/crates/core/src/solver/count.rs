//! Counting verified solutions of a triangularized system.
//!
//! Each leaf's eliminant is made squarefree and the solutions over its roots
//! are handled together in `F[t]/(m)`: `t` stands for a root, back-substitution
//! computes every unknown as a polynomial in `t`, and the original equations
//! and degeneracy conditions are checked there. A test that holds on some
//! roots but not others splits `m` and both halves are redone. A piece of
//! degree `k` that passes contributes `k` solutions.

use crossratio_algebra::{evaluate_with_splitting, Algebra, Quotient, SplitOr, UPoly, Uniform};
use rand::Rng;

use super::chain::{ChainLeaf, LeafEnd, TriangularChain};
use super::system::CrossRatioSystem;
use super::{SolveField, Unlucky};

/// Verified solutions over the roots of `modulus`: `values[v]` is the value of
/// variable `v` as a polynomial in the root `t` (unset for gauge vertices).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionPiece<E> {
    pub modulus: UPoly<E>,
    pub values: Vec<Option<UPoly<E>>>,
    pub leaf: usize,
}

impl<E: Clone + PartialEq> SolutionPiece<E> {
    pub fn count(&self) -> usize {
        self.modulus.degree().unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PreimageCount<E> {
    pub count: usize,
    pub pieces: Vec<SolutionPiece<E>>,
}

enum Piece<E> {
    Valid(Vec<Option<UPoly<E>>>),
    Invalid,
}

type Step<E, T> = Result<T, SplitOr<E, Unlucky>>;

/// Total number of verified, nondegenerate solutions over all leaves.
/// Fails with an unlucky draw when a probe leaf has solutions or when a root
/// does not determine the remaining unknown uniquely.
pub fn count_preimages<F: SolveField, R: Rng + ?Sized>(
    chain: &TriangularChain<F::Elem>,
    sys: &CrossRatioSystem<F>,
    rng: &mut R,
) -> Result<PreimageCount<F::Elem>, Unlucky> {
    let f = &sys.field;
    let mut pieces = Vec::new();
    for (li, leaf) in chain.leaves.iter().enumerate() {
        let moduli: Vec<UPoly<F::Elem>> = match &leaf.end {
            LeafEnd::Inconsistent { .. } => continue,
            LeafEnd::Point => vec![UPoly::x(f)],
            LeafEnd::Univariate { eliminant, .. } | LeafEnd::Bivariate { eliminant, .. } => {
                let sq = eliminant.squarefree_part(f);
                if sq.degree().unwrap_or(0) == 0 {
                    continue;
                }
                f.irreducible_moduli(&sq.monic(f), rng)
            }
        };
        let mut leaf_count = 0;
        for m in moduli {
            let results = evaluate_with_splitting(f, m, |ring| solve_piece(leaf, sys, ring))?;
            for (modulus, piece) in results {
                if let Piece::Valid(values) = piece {
                    leaf_count += modulus.degree().unwrap_or(0);
                    pieces.push(SolutionPiece {
                        modulus,
                        values,
                        leaf: li,
                    });
                }
            }
        }
        if leaf.probe && leaf_count > 0 {
            return Err(Unlucky::NonFinite);
        }
    }
    let count = pieces.iter().map(SolutionPiece::count).sum();
    Ok(PreimageCount { count, pieces })
}

fn solve_piece<F: SolveField>(
    leaf: &ChainLeaf<F::Elem>,
    sys: &CrossRatioSystem<F>,
    ring: &Quotient<F>,
) -> Step<F::Elem, Piece<F::Elem>> {
    let mut vals: Vec<Option<UPoly<F::Elem>>> = vec![None; sys.nvars()];
    match &leaf.end {
        LeafEnd::Inconsistent { .. } => return Ok(Piece::Invalid),
        LeafEnd::Point => {}
        LeafEnd::Univariate { var, .. } => vals[*var] = Some(ring.generator()),
        LeafEnd::Bivariate { x, y, equations, .. } => {
            vals[*y] = Some(ring.generator());
            // gcd in x of every equation at this y
            let mut g: Vec<UPoly<F::Elem>> = Vec::new();
            for e in equations {
                let cs: Vec<UPoly<F::Elem>> = e.coeffs_in(*x).iter().map(|c| c.eval(&vals, ring)).collect();
                g = ring.poly_gcd(&g, &cs)?;
            }
            let g = ring.poly_squarefree(&g)?;
            match g.len() {
                // every equation vanishes identically: x is free
                0 => return Err(SplitOr::Other(Unlucky::NonFinite)),
                1 => return Ok(Piece::Invalid),
                2 => vals[*x] = Some(ring.neg(&g[0])),
                _ => return Err(SplitOr::Other(Unlucky::NotInjective)),
            }
        }
    }
    for s in leaf.substitutions.iter().rev() {
        let num = s.num.eval(&vals, ring);
        let den = s.den.eval(&vals, ring);
        match ring.classify(&den)? {
            // covered by the branch on den = 0
            Uniform::Zero => return Ok(Piece::Invalid),
            Uniform::Unit { inverse } => vals[s.var] = Some(ring.mul(&num, &inverse)),
        }
    }
    for e in &sys.equations {
        if !ring.is_zero(&e.eval(&vals, ring))? {
            return Ok(Piece::Invalid);
        }
    }
    for d in &sys.degeneracy {
        if ring.is_zero(&d.eval(&vals, ring))? {
            return Ok(Piece::Invalid);
        }
    }
    vals.truncate(sys.n_vertices);
    Ok(Piece::Valid(vals))
}
