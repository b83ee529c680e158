//! Triangularization: linear elimination with side branches, then a
//! univariate eliminant per leaf.
//!
//! A frame is a set of equations plus the substitutions made so far. Solving a
//! linear equation `c1 x + c0 = 0` for `x` is only valid where `c1 != 0`; when
//! `c1` is not a constant, the frame forks and a branch frame takes the locus
//! `c1 = c0 = 0`. Frames whose solution set would be positive-dimensional are
//! cut by fixing a variable at random and marked as probes: they can only
//! contain solutions when the draw is not generic.

use std::collections::BTreeSet;
use std::fmt;

use crossratio_algebra::resultant::{gcd_bivariate, resultant_x};
use crossratio_algebra::{Field, MPoly, UPoly};
use rand::Rng;

use super::{SolveField, SolverError, Unlucky};
use super::system::CrossRatioSystem;

/// Hard cap on frames per system; far above anything an 8-vertex system needs.
const MAX_FRAMES: usize = 20_000;

/// `var = num / den`, where `num` and `den` involve only variables solved later.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Substitution<E> {
    pub var: usize,
    pub num: MPoly<E>,
    pub den: MPoly<E>,
    pub kind: SubstitutionKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubstitutionKind {
    /// Solved from a linear equation.
    Linear,
    /// A free variable fixed at random.
    Probe,
    /// `y = s - lambda x`, introducing the spare variable `s`.
    Shear,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LeafEnd<E> {
    /// A nonzero constant was derived: no solutions.
    Inconsistent { residual: MPoly<E> },
    /// Every unknown was substituted.
    Point,
    /// One unknown left, constrained by `eliminant`.
    Univariate { var: usize, eliminant: UPoly<E> },
    /// Two unknowns left; `eliminant` constrains `y`, and `x` is recovered
    /// from the common root of `equations` once `y` is fixed.
    Bivariate {
        x: usize,
        y: usize,
        eliminant: UPoly<E>,
        equations: Vec<MPoly<E>>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainLeaf<E> {
    pub substitutions: Vec<Substitution<E>>,
    pub end: LeafEnd<E>,
    pub probe: bool,
    /// Number of branch forks on the path from the main frame.
    pub depth: usize,
}

impl<E: Clone + PartialEq> ChainLeaf<E> {
    pub fn eliminant(&self) -> Option<(usize, &UPoly<E>)> {
        match &self.end {
            LeafEnd::Univariate { var, eliminant } => Some((*var, eliminant)),
            LeafEnd::Bivariate { y, eliminant, .. } => Some((*y, eliminant)),
            _ => None,
        }
    }
}

/// All leaves of the elimination tree; `leaves[0]` ends the main chain.
#[derive(Clone, Debug)]
pub struct TriangularChain<E> {
    pub leaves: Vec<ChainLeaf<E>>,
    pub n_vertices: usize,
}

impl<E: Clone + PartialEq> TriangularChain<E> {
    pub fn main(&self) -> &ChainLeaf<E> {
        &self.leaves[0]
    }

    pub fn branches(&self) -> &[ChainLeaf<E>] {
        &self.leaves[1..]
    }

    fn name(&self) -> impl Fn(usize) -> String + '_ {
        move |v| {
            if v < self.n_vertices {
                format!("p{}", v + 1)
            } else {
                "s".to_string()
            }
        }
    }
}

impl<E: Clone + PartialEq + fmt::Display> fmt::Display for TriangularChain<E> {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = self.name();
        for (i, leaf) in self.leaves.iter().enumerate() {
            let label = if i == 0 { "main".to_string() } else { format!("branch {i}") };
            let probe = if leaf.probe { " (probe)" } else { "" };
            writeln!(out, "{label}{probe}, depth {}", leaf.depth)?;
            for s in &leaf.substitutions {
                let tag = match s.kind {
                    SubstitutionKind::Linear => "solve",
                    SubstitutionKind::Probe => "probe",
                    SubstitutionKind::Shear => "shear",
                };
                writeln!(
                    out,
                    "  {tag} {} = ({}) / ({})",
                    name(s.var),
                    s.num.display(&name),
                    s.den.display(&name)
                )?;
            }
            match &leaf.end {
                LeafEnd::Inconsistent { residual } => {
                    writeln!(out, "  inconsistent: {} = 0", residual.display(&name))?
                }
                LeafEnd::Point => writeln!(out, "  point")?,
                LeafEnd::Univariate { var, eliminant } => {
                    writeln!(out, "  eliminant {}", eliminant.display(&name(*var)))?
                }
                LeafEnd::Bivariate {
                    x, y, eliminant, equations,
                } => {
                    writeln!(out, "  eliminant {}", eliminant.display(&name(*y)))?;
                    for e in equations {
                        writeln!(out, "  recover {} from {} = 0", name(*x), e.display(&name))?;
                    }
                }
            }
        }
        Ok(())
    }
}

struct Frame<E> {
    eqs: Vec<MPoly<E>>,
    subs: Vec<Substitution<E>>,
    unknowns: BTreeSet<usize>,
    probe: bool,
    depth: usize,
}

/// Eliminates variables until every leaf is univariate (or settled).
pub fn triangularize<F: SolveField, R: Rng + ?Sized>(
    sys: &CrossRatioSystem<F>,
    rng: &mut R,
) -> Result<TriangularChain<F::Elem>, Failure> {
    let f = &sys.field;
    let start = Frame {
        eqs: sys.equations.clone(),
        subs: Vec::new(),
        unknowns: sys.unknowns().into_iter().collect(),
        probe: false,
        depth: 0,
    };
    let mut pending = vec![start];
    let mut leaves = Vec::new();
    let mut frames = 0;
    // depth-first, main chain first
    while let Some(frame) = pending.pop() {
        frames += 1;
        if frames > MAX_FRAMES {
            return Err(Failure::Hard(SolverError::FrameLimit));
        }
        let mut spawned = Vec::new();
        let leaf = run_frame(frame, sys, f, rng, &mut spawned)?;
        leaves.push(leaf);
        // keep the first-spawned branch on top so output order is stable
        pending.extend(spawned.into_iter().rev());
    }
    Ok(TriangularChain {
        leaves,
        n_vertices: sys.n_vertices,
    })
}

/// Why a system could not be solved with this draw.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Failure {
    Unlucky(Unlucky),
    Hard(SolverError),
}

fn normalize<F: Field>(eqs: Vec<MPoly<F::Elem>>, f: &F) -> Vec<MPoly<F::Elem>> {
    let mut out: Vec<MPoly<F::Elem>> = Vec::with_capacity(eqs.len());
    for e in eqs {
        if e.is_zero() {
            continue;
        }
        let e = e.monic(f);
        if !out.contains(&e) {
            out.push(e);
        }
    }
    out
}

fn run_frame<F: SolveField, R: Rng + ?Sized>(
    mut fr: Frame<F::Elem>,
    sys: &CrossRatioSystem<F>,
    f: &F,
    rng: &mut R,
    spawned: &mut Vec<Frame<F::Elem>>,
) -> Result<ChainLeaf<F::Elem>, Failure> {
    let nvars = sys.nvars();
    loop {
        if let Some(c) = fr.eqs.iter().find(|e| e.is_constant() && !e.is_zero()) {
            return Ok(leaf(fr.subs, LeafEnd::Inconsistent { residual: c.clone() }, fr.probe, fr.depth));
        }
        fr.eqs = normalize(std::mem::take(&mut fr.eqs), f);
        if fr.unknowns.is_empty() {
            return Ok(leaf(fr.subs, LeafEnd::Point, fr.probe, fr.depth));
        }

        // a variable in no equation is free: fix it
        let free = fr
            .unknowns
            .iter()
            .copied()
            .find(|&v| fr.eqs.iter().all(|e| !e.occurs(v)));
        let probe_var = free.or_else(|| {
            (fr.eqs.len() < fr.unknowns.len()).then(|| *fr.unknowns.iter().next_back().unwrap())
        });
        if let Some(v) = probe_var {
            let value = f.small_random(rng);
            let num = MPoly::constant(value.clone(), nvars, f);
            let one = MPoly::constant(f.one(), nvars, f);
            fr.eqs = fr.eqs.iter().map(|e| e.substitute_value(v, &value, f)).collect();
            fr.subs.push(Substitution {
                var: v,
                num,
                den: one,
                kind: SubstitutionKind::Probe,
            });
            fr.unknowns.remove(&v);
            fr.probe = true;
            continue;
        }

        if let Some((i, v)) = constant_pivot(&fr, f) {
            eliminate(&mut fr, i, v, f);
            continue;
        }

        if let Some((i, v)) = general_pivot(&fr) {
            let cs = fr.eqs[i].coeffs_in(v);
            let mut branch_eqs: Vec<MPoly<F::Elem>> = fr
                .eqs
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, e)| e.clone())
                .collect();
            branch_eqs.push(cs[1].clone());
            branch_eqs.push(cs[0].clone());
            spawned.push(Frame {
                eqs: branch_eqs,
                subs: fr.subs.clone(),
                unknowns: fr.unknowns.clone(),
                probe: fr.probe,
                depth: fr.depth + 1,
            });
            eliminate(&mut fr, i, v, f);
            continue;
        }

        return match fr.unknowns.len() {
            1 => {
                let v = *fr.unknowns.iter().next().unwrap();
                let eliminant = fr
                    .eqs
                    .iter()
                    .map(|e| e.to_upoly(v, f).expect("only one unknown remains"))
                    .fold(UPoly::zero(), |g, p| g.gcd(&p, f));
                Ok(leaf(fr.subs, LeafEnd::Univariate { var: v, eliminant }, fr.probe, fr.depth))
            }
            2 => match bivariate(fr, sys, f, rng, spawned)? {
                Next::Leaf(l) => Ok(l),
                Next::Continue(next) => {
                    fr = next;
                    continue;
                }
            },
            k => Err(Failure::Hard(SolverError::TooManyNonlinear { unknowns: k })),
        };
    }
}

fn leaf<E>(substitutions: Vec<Substitution<E>>, end: LeafEnd<E>, probe: bool, depth: usize) -> ChainLeaf<E> {
    ChainLeaf {
        substitutions,
        end,
        probe,
        depth,
    }
}

/// Number of other equations of total degree above one that contain `v`.
fn nonlinear_occurrences<E: Clone + PartialEq>(eqs: &[MPoly<E>], skip: usize, v: usize) -> usize {
    eqs.iter()
        .enumerate()
        .filter(|&(j, e)| j != skip && e.total_degree() > 1 && e.occurs(v))
        .count()
}

/// An equation of degree one in some unknown whose coefficient is a nonzero
/// constant. Prefers the unknown occurring in the fewest other nonlinear
/// equations (so substitution raises no degree there), then the lowest index;
/// the first such equation is used.
fn constant_pivot<F: Field>(fr: &Frame<F::Elem>, f: &F) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), (usize, usize))> = None;
    for &v in &fr.unknowns {
        let Some(i) = fr.eqs.iter().position(|e| {
            e.degree_in(v) == 1 && e.coeffs_in(v)[1].as_constant(f).is_some()
        }) else {
            continue;
        };
        let key = (nonlinear_occurrences(&fr.eqs, i, v), v);
        if best.as_ref().is_none_or(|(k, _)| key < *k) {
            best = Some((key, (i, v)));
        }
    }
    best.map(|(_, p)| p)
}

/// An equation of degree one in some unknown, with the simplest coefficient.
fn general_pivot<E: Clone + PartialEq>(fr: &Frame<E>) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize, usize, usize), (usize, usize))> = None;
    for &v in &fr.unknowns {
        for (i, e) in fr.eqs.iter().enumerate() {
            if e.degree_in(v) != 1 {
                continue;
            }
            let c1 = &e.coeffs_in(v)[1];
            let key = (c1.total_degree(), c1.num_terms(), nonlinear_occurrences(&fr.eqs, i, v), v);
            if best.as_ref().is_none_or(|(k, _)| key < *k) {
                best = Some((key, (i, v)));
            }
        }
    }
    best.map(|(_, p)| p)
}

/// Solves equation `i` for `v` and substitutes into the rest.
fn eliminate<F: Field>(fr: &mut Frame<F::Elem>, i: usize, v: usize, f: &F) {
    let pivot = fr.eqs.remove(i);
    let cs = pivot.coeffs_in(v);
    let num = cs[0].neg(f);
    let den = cs[1].clone();
    fr.eqs = fr
        .eqs
        .iter()
        .map(|e| {
            if !e.occurs(v) {
                return e.clone();
            }
            e.substitute(v, &num, &den, f).remove_factor(&den, f)
        })
        .collect();
    fr.subs.push(Substitution {
        var: v,
        num,
        den,
        kind: SubstitutionKind::Linear,
    });
    fr.unknowns.remove(&v);
}

fn bivariate<F: SolveField, R: Rng + ?Sized>(
    mut fr: Frame<F::Elem>,
    sys: &CrossRatioSystem<F>,
    f: &F,
    rng: &mut R,
    spawned: &mut Vec<Frame<F::Elem>>,
) -> Result<Next<F::Elem>, Failure> {
    let nvars = sys.nvars();
    let mut it = fr.unknowns.iter().copied();
    let (x, y) = (it.next().unwrap(), it.next().unwrap());
    let s = sys.n_vertices;
    if fr.unknowns.contains(&s) {
        // already sheared once on this path; cannot happen for square systems
        return Err(Failure::Hard(SolverError::TooManyNonlinear { unknowns: 2 }));
    }

    // y = s - lambda x separates solutions sharing a y-coordinate
    let lambda = loop {
        let l = f.small_random(rng);
        if !f.is_zero(&l) {
            break l;
        }
    };
    let shear = MPoly::var(s, nvars, f).sub(&MPoly::var(x, nvars, f).scale(&lambda, f), f);
    let one = MPoly::constant(f.one(), nvars, f);
    let eqs: Vec<MPoly<F::Elem>> = fr
        .eqs
        .iter()
        .map(|e| e.substitute(y, &shear, &one, f))
        .collect();
    fr.subs.push(Substitution {
        var: y,
        num: shear,
        den: one,
        kind: SubstitutionKind::Shear,
    });
    let mut eqs = normalize(eqs, f);
    let bi = |e: &MPoly<F::Elem>| e.to_bivariate(x, s, f).expect("only x and s remain");

    // split off a curve shared by every equation
    let common = eqs.iter().fold(Vec::new(), |g, e| gcd_bivariate(&g, &bi(e), f));
    let common = MPoly::from_bivariate(&common, x, s, nvars, f);
    if common.total_degree() > 0 {
        spawned.push(Frame {
            eqs: vec![common.clone()],
            subs: fr.subs.clone(),
            unknowns: [x, s].into_iter().collect(),
            probe: true,
            depth: fr.depth + 1,
        });
        eqs = eqs
            .iter()
            .map(|e| e.div_exact(&common, f).expect("common factor divides"))
            .collect();
        eqs = normalize(eqs, f);
        if let Some(c) = eqs.iter().find(|e| e.is_constant()) {
            return Ok(Next::Leaf(leaf(
                fr.subs,
                LeafEnd::Inconsistent { residual: c.clone() },
                fr.probe,
                fr.depth,
            )));
        }
    }

    let (with_x, only_s): (Vec<_>, Vec<_>) = eqs.iter().cloned().partition(|e| e.occurs(x));
    let mut eliminant = only_s
        .iter()
        .map(|e| e.to_upoly(s, f).expect("only s remains"))
        .fold(UPoly::zero(), |g, p| g.gcd(&p, f));
    if with_x.len() >= 2 {
        let mut by_degree = with_x.clone();
        by_degree.sort_by_key(|e| (e.degree_in(x), e.num_terms()));
        let first = bi(&by_degree[0]);
        let mut res = UPoly::zero();
        for attempt in 0..4 {
            // the second polynomial is another equation, then random combinations
            let other = if attempt == 0 {
                by_degree[1].clone()
            } else {
                by_degree[1..].iter().fold(MPoly::zero(nvars), |acc, e| {
                    acc.add(&e.scale(&f.small_random(rng), f), f)
                })
            };
            res = resultant_x(&first, &bi(&other), f);
            if !res.is_zero() {
                break;
            }
        }
        if res.is_zero() {
            return Err(Failure::Unlucky(Unlucky::ResultantVanished));
        }
        eliminant = eliminant.gcd(&res, f);
    } else if only_s.is_empty() {
        // a single curve: hand back to the frame loop, which probes it
        fr.eqs = eqs;
        fr.unknowns = [x, s].into_iter().collect();
        return Ok(Next::Continue(fr));
    }
    Ok(Next::Leaf(leaf(
        fr.subs,
        LeafEnd::Bivariate {
            x,
            y: s,
            eliminant,
            equations: eqs,
        },
        fr.probe,
        fr.depth,
    )))
}

enum Next<E> {
    Leaf(ChainLeaf<E>),
    Continue(Frame<E>),
}
