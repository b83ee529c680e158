//! Exact computation of cross-ratio degrees.
//!
//! Pipeline per trial: draw generic targets, build the gauge-fixed system,
//! triangularize, count verified solutions. Several independent trials must
//! agree.

mod chain;
mod count;
mod system;

use std::fmt;
use std::str::FromStr;

use crossratio_algebra::factor::factor_squarefree;
use crossratio_algebra::{Field, PrimeField, RationalField, UPoly};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub use chain::{triangularize, ChainLeaf, Failure, LeafEnd, Substitution, SubstitutionKind, TriangularChain};
pub use count::{count_preimages, PreimageCount, SolutionPiece};
pub use system::{
    cross_ratio, gauge_and_build, gauge_and_build_tuples, CrossRatioSystem, ParameterDraw, ProjectivePoint,
};

use crate::hypergraph::{Edge, Hypergraph};

pub const DEFAULT_TRIALS: usize = 5;
/// Fresh draws per trial before giving up.
pub const MAX_REDRAWS: usize = 8;
/// Bit size of the random primes used by the prime backend.
pub const PRIME_BITS: u32 = 62;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolverError {
    #[error("cross-ratio of coincident points")]
    CoincidentPoints,
    #[error("parameters must avoid 0 and 1, be pairwise distinct, and match the edge count")]
    BadParameters,
    #[error("{vertices} vertices need {} edges, got {edges}", vertices.saturating_sub(3))]
    NotSquare { vertices: usize, edges: usize },
    #[error("hypergraph has an isolated vertex")]
    IsolatedVertex,
    #[error("{unknowns} unknowns remain with no equation linear in any of them")]
    TooManyNonlinear { unknowns: usize },
    #[error("elimination tree exceeded its frame limit")]
    FrameLimit,
    #[error("at least 3 trials are required, got {0}")]
    TooFewTrials(usize),
    #[error("no generic draw found after {0} attempts (last: {1})")]
    RetriesExhausted(usize, Unlucky),
}

/// A draw that hit a proper closed condition; the caller redraws.
#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
pub enum Unlucky {
    #[error("a probe found a positive-dimensional solution set")]
    NonFinite,
    #[error("the projection used to separate solutions was not injective")]
    NotInjective,
    #[error("every resultant vanished")]
    ResultantVanished,
}

/// Field-specific pieces of the pipeline.
pub trait SolveField: Field {
    /// Moduli whose product is the monic squarefree `f`; each is handled as
    /// one algebra `F[t]/(m)`.
    fn irreducible_moduli<R: Rng + ?Sized>(&self, f: &UPoly<Self::Elem>, rng: &mut R) -> Vec<UPoly<Self::Elem>>;

    /// A random element for auxiliary choices (probes, shears), kept small
    /// where coefficient size matters.
    fn small_random<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;
}

impl SolveField for PrimeField {
    fn irreducible_moduli<R: Rng + ?Sized>(&self, f: &UPoly<u64>, rng: &mut R) -> Vec<UPoly<u64>> {
        factor_squarefree(f, self, rng)
    }

    fn small_random<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        self.random(rng)
    }
}

impl SolveField for RationalField {
    /// No factorization: zero tests split the modulus as needed.
    fn irreducible_moduli<R: Rng + ?Sized>(
        &self,
        f: &UPoly<BigRational>,
        _rng: &mut R,
    ) -> Vec<UPoly<BigRational>> {
        vec![f.clone()]
    }

    fn small_random<R: Rng + ?Sized>(&self, rng: &mut R) -> BigRational {
        let v: i64 = rng.gen_range(-(1 << 12)..=(1 << 12));
        BigRational::from_integer(BigInt::from(v))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Backend {
    /// A fresh random 62-bit prime field per trial.
    #[default]
    Prime,
    /// Exact rational arithmetic.
    Rational,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Prime => "prime",
            Backend::Rational => "rational",
        })
    }
}

impl FromStr for Backend {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "prime" => Ok(Backend::Prime),
            "rational" => Ok(Backend::Rational),
            other => Err(format!("unknown field {other:?} (expected prime or rational)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TrialRecord {
    pub seed: u64,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeResult {
    pub degree: usize,
    pub provenance: String,
    /// Trials of the deciding round.
    pub trials: Vec<TrialRecord>,
    pub consensus: bool,
    /// Trials of an earlier, disagreeing round.
    pub discarded: Vec<TrialRecord>,
    /// Draws rejected as unlucky across all trials.
    pub redraws: usize,
}

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Everything one trial produced, for inspection.
pub struct Solved<F: Field> {
    pub system: CrossRatioSystem<F>,
    pub chain: TriangularChain<F::Elem>,
    pub preimages: PreimageCount<F::Elem>,
}

/// One pass of the pipeline with a fixed draw.
pub fn solve_with<F: SolveField, R: Rng + ?Sized>(
    h: &Hypergraph,
    draw: ParameterDraw<F::Elem>,
    field: &F,
    rng: &mut R,
) -> Result<Solved<F>, Failure> {
    solve_tuples(h.n_vertices(), h.edges().to_vec(), draw, field, rng)
}

/// As [`solve_with`], with each edge read in the given tuple order.
pub fn solve_tuples<F: SolveField, R: Rng + ?Sized>(
    n_vertices: usize,
    edges: Vec<Edge>,
    draw: ParameterDraw<F::Elem>,
    field: &F,
    rng: &mut R,
) -> Result<Solved<F>, Failure> {
    let system = gauge_and_build_tuples(n_vertices, edges, draw, field).map_err(Failure::Hard)?;
    let chain = triangularize(&system, rng)?;
    let preimages = count_preimages(&chain, &system, rng).map_err(Failure::Unlucky)?;
    Ok(Solved {
        system,
        chain,
        preimages,
    })
}

fn check_input(h: &Hypergraph) -> Result<(), SolverError> {
    if h.n_vertices() < 4 || h.n_edges() + 3 != h.n_vertices() {
        return Err(SolverError::NotSquare {
            vertices: h.n_vertices(),
            edges: h.n_edges(),
        });
    }
    if !h.is_valid_for_degree() {
        return Err(SolverError::IsolatedVertex);
    }
    Ok(())
}

fn trial_in<F: SolveField>(
    n_vertices: usize,
    edges: &[Edge],
    field: &F,
    seed: u64,
    rng: &mut ChaCha8Rng,
) -> Result<usize, Failure> {
    let draw = ParameterDraw::random(field, edges.len(), seed, rng);
    solve_tuples(n_vertices, edges.to_vec(), draw, field, rng).map(|s| s.preimages.count)
}

fn run_trial(h: &Hypergraph, seed: u64, backend: Backend) -> Result<(usize, usize), SolverError> {
    trial_tuples(h.n_vertices(), h.edges(), seed, backend)
}

/// One trial on edge tuples taken as given (vertex 0 is gauged to infinity,
/// 1 to 0, 2 to 1), with redraws. Returns the count and the number of redraws.
pub fn trial_tuples(
    n_vertices: usize,
    edges: &[Edge],
    seed: u64,
    backend: Backend,
) -> Result<(usize, usize), SolverError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut last = Unlucky::NonFinite;
    for attempt in 0..MAX_REDRAWS {
        let outcome = match backend {
            Backend::Prime => {
                let field = PrimeField::random(PRIME_BITS, &mut rng);
                trial_in(n_vertices, edges, &field, seed, &mut rng)
            }
            Backend::Rational => trial_in(n_vertices, edges, &RationalField, seed, &mut rng),
        };
        match outcome {
            Ok(count) => return Ok((count, attempt)),
            Err(Failure::Unlucky(u)) => last = u,
            Err(Failure::Hard(e)) => return Err(e),
        }
    }
    Err(SolverError::RetriesExhausted(MAX_REDRAWS, last))
}

fn run_round(
    h: &Hypergraph,
    trials: usize,
    seed: u64,
    round: u64,
    backend: Backend,
) -> Result<(Vec<TrialRecord>, usize), SolverError> {
    let mut records = Vec::with_capacity(trials);
    let mut redraws = 0;
    for i in 0..trials as u64 {
        let s = mix64(seed ^ mix64(round << 32 | i));
        let (count, r) = run_trial(h, s, backend)?;
        redraws += r;
        records.push(TrialRecord { seed: s, count });
    }
    Ok((records, redraws))
}

/// `d_T` by independent trials. On disagreement the round is repeated once
/// with twice as many trials; if that still disagrees the maximum is reported
/// with `consensus = false`.
pub fn cross_ratio_degree(
    h: &Hypergraph,
    trials: usize,
    seed: u64,
    backend: Backend,
) -> Result<DegreeResult, SolverError> {
    check_input(h)?;
    if trials < 3 {
        return Err(SolverError::TooFewTrials(trials));
    }
    let g = h.degree_ordered();
    let agree = |t: &[TrialRecord]| t.windows(2).all(|w| w[0].count == w[1].count);
    let (first, mut redraws) = run_round(&g, trials, seed, 0, backend)?;
    let (trials_out, discarded) = if agree(&first) {
        (first, Vec::new())
    } else {
        let (second, r) = run_round(&g, 2 * trials, seed, 1, backend)?;
        redraws += r;
        (second, first)
    };
    let consensus = agree(&trials_out);
    let degree = trials_out.iter().map(|t| t.count).max().unwrap_or(0);
    Ok(DegreeResult {
        degree,
        provenance: crate::reduce::TAG_SOLVER.to_string(),
        trials: trials_out,
        consensus,
        discarded,
        redraws,
    })
}

/// Plain-text dump of the system and elimination tree of one trial.
pub fn dump_chain(h: &Hypergraph, seed: u64, backend: Backend) -> Result<String, SolverError> {
    check_input(h)?;
    let g = h.degree_ordered();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    fn render<F: SolveField>(
        g: &Hypergraph,
        field: &F,
        seed: u64,
        rng: &mut ChaCha8Rng,
    ) -> Result<String, Failure> {
        let draw = ParameterDraw::random(field, g.n_edges(), seed, rng);
        let s = solve_with(g, draw, field, rng)?;
        Ok(format!("{}{}count {}\n", s.system, s.chain, s.preimages.count))
    }
    let mut last = Unlucky::NonFinite;
    for _ in 0..MAX_REDRAWS {
        let out = match backend {
            Backend::Prime => {
                let field = PrimeField::random(PRIME_BITS, &mut rng);
                render(&g, &field, seed, &mut rng)
            }
            Backend::Rational => render(&g, &RationalField, seed, &mut rng),
        };
        match out {
            Ok(s) => return Ok(s),
            Err(Failure::Unlucky(u)) => last = u,
            Err(Failure::Hard(e)) => return Err(e),
        }
    }
    Err(SolverError::RetriesExhausted(MAX_REDRAWS, last))
}
