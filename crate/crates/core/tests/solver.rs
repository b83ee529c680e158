use crossratio::hypergraph::{enumerate_classes, Hypergraph};
use crossratio::solver::{
    cross_ratio, cross_ratio_degree, gauge_and_build, gauge_and_build_tuples, solve_with, trial_tuples, Backend,
    LeafEnd, ParameterDraw, ProjectivePoint, SolverError, SubstitutionKind,
};
use crossratio_algebra::{Field, MPoly, RationalField, UPoly};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Q = BigRational;

fn q(v: i64) -> Q {
    BigRational::from_integer(BigInt::from(v))
}

fn worked() -> Hypergraph {
    Hypergraph::from_one_based(8, &[[1, 2, 3, 4], [1, 2, 6, 7], [1, 3, 7, 8], [1, 2, 5, 8], [3, 4, 5, 6]]).unwrap()
}

fn degree_zero() -> Hypergraph {
    Hypergraph::from_one_based(8, &[[1, 2, 3, 4], [1, 2, 3, 5], [1, 2, 4, 5], [3, 6, 7, 8], [4, 6, 7, 8]]).unwrap()
}

fn fin(v: i64) -> ProjectivePoint<Q> {
    ProjectivePoint::Finite(q(v))
}

#[test]
fn cross_ratio_with_infinity() {
    let f = RationalField;
    let inf = ProjectivePoint::Infinity;
    assert_eq!(cross_ratio(&f, [&inf, &fin(0), &fin(1), &fin(7)]), Ok(q(7)));
    // CR(inf, 0, p6, p7) = p7 / p6
    assert_eq!(
        cross_ratio(&f, [&inf, &fin(0), &fin(4), &fin(10)]),
        Ok(BigRational::new(10.into(), 4.into()))
    );
    // CR(inf, 1, p7, p8) = (p8 - 1) / (p7 - 1)
    assert_eq!(
        cross_ratio(&f, [&inf, &fin(1), &fin(5), &fin(9)]),
        Ok(BigRational::new(8.into(), 4.into()))
    );
    assert_eq!(
        cross_ratio(&f, [&fin(2), &fin(0), &fin(2), &fin(9)]),
        Err(SolverError::CoincidentPoints)
    );
    // all finite: (3-0)(4-1)/((3-1)(4-0)) = 9/8
    assert_eq!(
        cross_ratio(&f, [&fin(0), &fin(1), &fin(3), &fin(4)]),
        Ok(BigRational::new(9.into(), 8.into()))
    );
}

fn draw(values: &[i64]) -> ParameterDraw<Q> {
    ParameterDraw::fixed(&RationalField, values.iter().map(|&v| q(v)).collect()).unwrap()
}

#[test]
fn gauge_equations_of_worked_example() {
    let f = RationalField;
    let a = [2, 3, 5, 7, 11];
    let sys = gauge_and_build(&worked(), draw(&a), &f).unwrap();
    let p = |i: usize| MPoly::var(i - 1, 9, &f);
    let c = |v: i64| MPoly::constant(q(v), 9, &f);
    // edge {1,2,3,4}: p4 = a1
    assert_eq!(sys.equations[0], p(4).sub(&c(2), &f));
    // edge {3,4,5,6}: (p5 - 1)(p6 - p4) - a5 (p6 - 1)(p5 - p4)
    let expected = p(5)
        .sub(&c(1), &f)
        .mul(&p(6).sub(&p(4), &f), &f)
        .sub(&p(6).sub(&c(1), &f).mul(&p(5).sub(&p(4), &f), &f).scale(&q(11), &f), &f);
    assert_eq!(sys.equations[4], expected);
    assert_eq!(sys.edges[4], [2, 3, 4, 5]);
    assert!(sys.is_multilinear());
    // p4..p8: 5 values avoiding 0 and 1, 10 pairwise differences
    assert_eq!(sys.degeneracy.len(), 5 * 2 + 10);
}

#[test]
fn edge_without_gauge_vertices_is_full_quadratic() {
    let f = RationalField;
    let edges = vec![[0, 1, 2, 3], [0, 1, 4, 5], [0, 2, 6, 7], [1, 2, 3, 7], [3, 4, 5, 6]];
    let sys = gauge_and_build_tuples(8, edges, draw(&[2, 3, 5, 7, 11]), &f).unwrap();
    let e = &sys.equations[4];
    assert_eq!(e.total_degree(), 2);
    for v in 0..9 {
        assert_eq!(e.degree_in(v), usize::from((3..7).contains(&v)), "variable {v}");
    }
}

#[test]
fn every_class_gives_a_multilinear_system() {
    let f = RationalField;
    for h in enumerate_classes(8, 5).unwrap() {
        let sys = gauge_and_build(&h.degree_ordered(), draw(&[2, 3, 5, 7, 11]), &f).unwrap();
        assert!(sys.is_multilinear());
        assert_eq!(sys.equations.len(), 5);
    }
}

#[test]
fn worked_example_chain() {
    let f = RationalField;
    let a = [2, 3, 5, 7, 11];
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let solved = solve_with(&worked(), draw(&a), &f, &mut rng).unwrap();
    let main = solved.chain.main();
    assert!(!main.probe);
    match &main.end {
        LeafEnd::Univariate { var, eliminant } => {
            assert_eq!(*var, 5, "eliminant should be in p6");
            assert_eq!(eliminant.degree(), Some(2));
            assert_eq!(eliminant.squarefree_part(&f).degree(), Some(2));
        }
        other => panic!("unexpected end {other:?}"),
    }
    let mut solved_vars: Vec<usize> = main.substitutions.iter().map(|s| s.var).collect();
    solved_vars.sort_unstable();
    assert_eq!(solved_vars, vec![3, 4, 6, 7]);
    assert!(main
        .substitutions
        .iter()
        .all(|s| s.kind == SubstitutionKind::Linear && s.den.is_constant()));
    // edges are stored sorted, so a2..a4 belong to {1,2,5,8}, {1,2,6,7}, {1,3,7,8}:
    // p5 = (a4 (a3 p6 - 1) + 1) / a2, checked at a sample p6
    let r = q(13);
    let mut point: Vec<Option<Q>> = vec![None; 9];
    point[5] = Some(r.clone());
    for s in main.substitutions.iter().rev() {
        let v = s.num.eval::<RationalField, _>(&point, &f) / s.den.eval::<RationalField, _>(&point, &f);
        point[s.var] = Some(v);
    }
    let lhs = point[4].clone().unwrap();
    let rhs = ((q(a[2]) * &r - q(1)) * q(a[3]) + q(1)) / q(a[1]);
    assert_eq!(lhs, rhs);
    assert_eq!(solved.preimages.count, 2);
    assert!(solved.chain.branches().is_empty());
}

#[test]
fn worked_example_degree_two() {
    for backend in [Backend::Prime, Backend::Rational] {
        let r = cross_ratio_degree(&worked(), 5, 42, backend).unwrap();
        assert_eq!(r.degree, 2, "{backend}");
        assert!(r.consensus);
        assert_eq!(r.trials.len(), 5);
    }
}

#[test]
fn degree_zero_example_is_inconsistent_generically() {
    let f = RationalField;
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let solved = solve_with(&degree_zero(), draw(&[2, 3, 5, 7, 11]), &f, &mut rng).unwrap();
    match &solved.chain.main().end {
        LeafEnd::Inconsistent { residual } => assert!(residual.is_constant() && !residual.is_zero()),
        other => panic!("expected inconsistency, got {other:?}"),
    }
    assert_eq!(solved.preimages.count, 0);
    // with a2 = a1 a3 the first three equations are compatible
    let special = solve_with(&degree_zero(), draw(&[2, 6, 3, 5, 7]), &f, &mut rng);
    match special {
        Ok(s) => assert!(!matches!(s.chain.main().end, LeafEnd::Inconsistent { .. })),
        Err(_) => {} // positive-dimensional fiber, reported as an unlucky draw
    }
    for backend in [Backend::Prime, Backend::Rational] {
        assert_eq!(cross_ratio_degree(&degree_zero(), 5, 9, backend).unwrap().degree, 0);
    }
}

/// Pick a configuration, take its cross-ratios as the target, and check that
/// the solver recovers it and that every recovered point maps to the target.
#[test]
fn forward_check_on_worked_example() {
    let f = RationalField;
    let h = worked();
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut checked = 0;
    while checked < 10 {
        let mut pts: Vec<i64> = Vec::new();
        while pts.len() < 5 {
            let v = rng.gen_range(-50..50);
            if v != 0 && v != 1 && !pts.contains(&v) {
                pts.push(v);
            }
        }
        let config: Vec<ProjectivePoint<Q>> = [ProjectivePoint::Infinity, fin(0), fin(1)]
            .into_iter()
            .chain(pts.iter().map(|&v| fin(v)))
            .collect();
        let a: Vec<Q> = h
            .edges()
            .iter()
            .map(|e| cross_ratio(&f, [&config[e[0]], &config[e[1]], &config[e[2]], &config[e[3]]]).unwrap())
            .collect();
        let Ok(d) = ParameterDraw::fixed(&f, a.clone()) else { continue };
        let solved = solve_with(&h, d, &f, &mut rng).unwrap();
        assert_eq!(solved.preimages.count, 2);
        let r = q(pts[2]); // p6
        let mut found = false;
        for piece in &solved.preimages.pieces {
            if !piece.modulus.eval(&r, &f).is_zero() {
                continue;
            }
            let values: Vec<ProjectivePoint<Q>> = (0..8)
                .map(|v| match &piece.values[v] {
                    None => config[v].clone(),
                    Some(p) => ProjectivePoint::Finite(p.eval(&r, &f)),
                })
                .collect();
            assert_eq!(values, config);
            let back: Vec<Q> = h
                .edges()
                .iter()
                .map(|e| cross_ratio(&f, [&values[e[0]], &values[e[1]], &values[e[2]], &values[e[3]]]).unwrap())
                .collect();
            assert_eq!(back, a);
            found = true;
        }
        assert!(found, "configuration not recovered");
        // the other root, when rational, also maps to the target
        for piece in &solved.preimages.pieces {
            let quotient = piece.modulus.div_exact(&UPoly::from_coeffs(vec![-r.clone(), q(1)], &f), &f);
            if let Some(other) = quotient.filter(|o| o.degree() == Some(1)) {
                let s = f.neg(&other.coeffs()[0]);
                let values: Vec<ProjectivePoint<Q>> = (0..8)
                    .map(|v| match &piece.values[v] {
                        None => config[v].clone(),
                        Some(p) => ProjectivePoint::Finite(p.eval(&s, &f)),
                    })
                    .collect();
                let back: Vec<Q> = h
                    .edges()
                    .iter()
                    .map(|e| cross_ratio(&f, [&values[e[0]], &values[e[1]], &values[e[2]], &values[e[3]]]).unwrap())
                    .collect();
                assert_eq!(back, a);
            }
        }
        checked += 1;
    }
}

fn sample_classes(count: usize, seed: u64) -> Vec<Hypergraph> {
    let mut classes = enumerate_classes(8, 5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    classes.shuffle(&mut rng);
    // make sure the rare high-degree profile is represented
    let mut out: Vec<Hypergraph> = classes
        .iter()
        .filter(|h| h.degrees().iter().filter(|&&d| d == 3).count() == 4 && h.degrees().iter().all(|&d| d >= 2))
        .take(count / 2)
        .cloned()
        .collect();
    out.extend(classes.into_iter().take(count - out.len()));
    out
}

#[test]
fn within_edge_order_does_not_change_degree() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for h in sample_classes(20, 1) {
        let g = h.degree_ordered();
        let expected = cross_ratio_degree(&h, 3, 2, Backend::Prime).unwrap().degree;
        let tuples: Vec<[usize; 4]> = g
            .edges()
            .iter()
            .map(|e| {
                let mut t = *e;
                t.shuffle(&mut rng);
                t
            })
            .collect();
        let (count, _) = trial_tuples(8, &tuples, rng.gen(), Backend::Prime).unwrap();
        assert_eq!(count, expected, "{tuples:?}");
    }
}

#[test]
fn relabeling_does_not_change_degree() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for h in sample_classes(20, 2) {
        let expected = cross_ratio_degree(&h, 3, 3, Backend::Prime).unwrap().degree;
        let mut perm: Vec<usize> = (0..8).collect();
        perm.shuffle(&mut rng);
        let g = h.relabel(&perm);
        assert_eq!(cross_ratio_degree(&g, 3, 4, Backend::Prime).unwrap().degree, expected);
    }
}

#[test]
fn seven_four_classes_have_degree_at_most_two() {
    let degrees: Vec<usize> = enumerate_classes(7, 4)
        .unwrap()
        .iter()
        .map(|h| cross_ratio_degree(h, 3, 11, Backend::Prime).unwrap().degree)
        .collect();
    assert_eq!(degrees.iter().max(), Some(&2));
}

#[test]
fn rejects_bad_input() {
    assert_eq!(cross_ratio_degree(&worked(), 2, 0, Backend::Prime), Err(SolverError::TooFewTrials(2)));
    let small = Hypergraph::from_one_based(8, &[[1, 2, 3, 4], [5, 6, 7, 8]]).unwrap();
    assert!(matches!(
        cross_ratio_degree(&small, 3, 0, Backend::Prime),
        Err(SolverError::NotSquare { .. })
    ));
    let isolated = Hypergraph::from_one_based(6, &[[1, 2, 3, 4], [1, 2, 3, 5], [1, 2, 4, 5]]).unwrap();
    assert_eq!(
        cross_ratio_degree(&isolated, 3, 0, Backend::Prime),
        Err(SolverError::IsolatedVertex)
    );
    let f = RationalField;
    assert_eq!(
        ParameterDraw::fixed(&f, vec![q(2), q(2)]),
        Err(SolverError::BadParameters)
    );
    assert_eq!(ParameterDraw::fixed(&f, vec![q(1)]), Err(SolverError::BadParameters));
}

#[test]
fn random_draws_avoid_zero_one_and_repeats() {
    let f = RationalField;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..50 {
        let d = ParameterDraw::random(&f, 5, 0, &mut rng);
        for (i, x) in d.a.iter().enumerate() {
            assert!(!f.is_zero(x) && !f.is_one(x));
            assert!(!d.a[..i].contains(x));
        }
    }
}
