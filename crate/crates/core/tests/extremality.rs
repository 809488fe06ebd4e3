mod common;

use common::*;
use extremal_core::enumeration::enumerate_l1;
use extremal_core::extremality::{
    decide, decide_with, l1_rule, perturbation_oracle, rank_test, unit_row_rule, verify_witness,
    DecideOptions, Method,
};
use extremal_core::polytope::sign_vectors;
use extremal_core::rational::{int, rat};
use extremal_core::{Error, LinearOperator, Matrix, NormedSpace, Vector};
use num_traits::Zero;
use rand::Rng;

/// Signed permutation matrices of size n.
fn signed_permutations(n: usize) -> Vec<Matrix> {
    let mut perms = vec![vec![]];
    for _ in 0..n {
        perms = perms
            .into_iter()
            .flat_map(|p: Vec<usize>| {
                (0..n)
                    .filter(|i| !p.contains(i))
                    .map(|i| {
                        let mut q = p.clone();
                        q.push(i);
                        q
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    let mut out = Vec::new();
    for p in perms {
        for s in sign_vectors(n) {
            let mut m = Matrix::zeros(n, n);
            for (row, &col) in p.iter().enumerate() {
                m.set(row, col, s[row].clone());
            }
            out.push(m);
        }
    }
    out
}

/// The 12 linear isometries of the hexagon: powers of an order-6 map cycling
/// its vertices, with and without the reflection `(x, y) -> (-x, y)`.
fn hexagon_isometries() -> Vec<Matrix> {
    let r = Matrix::new(2, 2, vec![rat(1, 2), rat(-3, 4), int(1), rat(1, 2)]).unwrap();
    let f = Matrix::new(2, 2, vec![int(-1), int(0), int(0), int(1)]).unwrap();
    let mut out = vec![Matrix::identity(2)];
    for _ in 0..5 {
        let last = out.last().unwrap().clone();
        out.push(r.mul(&last).unwrap());
    }
    let reflected: Vec<Matrix> = out.iter().map(|m| f.mul(m).unwrap()).collect();
    out.extend(reflected);
    out
}

fn isometries(space: &NormedSpace) -> Vec<Matrix> {
    if space.ball() == Some(hexagon_ball()) {
        hexagon_isometries()
    } else {
        signed_permutations(space.dim())
    }
}

#[test]
fn isometry_candidates_preserve_balls() {
    for space in [NormedSpace::l1(3), NormedSpace::linf(2), hexagon()] {
        let ext = space.extreme_points().unwrap().all();
        for q in isometries(&space) {
            for v in &ext {
                assert!(
                    space.is_extreme_point(&q.apply(v).unwrap()).unwrap(),
                    "{q} {v}"
                );
            }
        }
    }
    assert_eq!(hexagon_isometries().len(), 12);
}

fn random_norm_one(
    rng: &mut rand_chacha::ChaCha8Rng,
    x: &NormedSpace,
    y: &NormedSpace,
) -> Option<LinearOperator> {
    let t =
        LinearOperator::new(random_matrix(rng, y.dim(), x.dim()), x.clone(), y.clone()).unwrap();
    let n = t.op_norm().unwrap().value;
    (!n.is_zero()).then(|| t.with_matrix(t.matrix().scale(&n.recip())).unwrap())
}

#[test]
fn verdicts_are_isometry_invariant() {
    let mut rng = rng(11);
    let pairs = [
        (NormedSpace::l1(2), hexagon()),
        (hexagon(), NormedSpace::linf(2)),
        (NormedSpace::linf(2), NormedSpace::l1(2)),
        (hexagon(), hexagon()),
    ];
    for (x, y) in &pairs {
        let mut cases: Vec<LinearOperator> = (0..6)
            .filter_map(|_| random_norm_one(&mut rng, x, y))
            .collect();
        if x.is_l1() {
            cases.extend(enumerate_l1(x, y).unwrap().operators.into_iter().take(6));
        }
        for t in cases {
            let base = decide(&t).unwrap().decision;
            let (px, qy) = (isometries(x), isometries(y));
            for _ in 0..4 {
                let p = &px[rng.gen_range(0..px.len())];
                let q = &qy[rng.gen_range(0..qy.len())];
                let moved = t
                    .with_matrix(q.mul(&t.matrix().mul(p).unwrap()).unwrap())
                    .unwrap();
                assert_eq!(decide(&moved).unwrap().decision, base, "{t} under {p}, {q}");
            }
        }
    }
}

#[test]
fn l1_rule_agrees_with_oracle_on_random_operators() {
    let mut rng = rng(12);
    for y in [
        NormedSpace::l1(2),
        NormedSpace::linf(2),
        hexagon(),
        NormedSpace::polytopal(skew_ball()),
    ] {
        let x = NormedSpace::l1(2);
        for _ in 0..25 {
            // Columns drawn from vertices and scaled random points.
            let verts = y.ball().unwrap().all_vertices();
            let cols: Vec<Vector> = (0..2)
                .map(|_| {
                    if rng.gen_bool(0.6) {
                        verts[rng.gen_range(0..verts.len())].clone()
                    } else {
                        let v = random_nonzero_vector(&mut rng, y.dim());
                        v.scale(&y.norm(&v).unwrap().value.recip())
                    }
                })
                .collect();
            let t = LinearOperator::new(Matrix::from_columns(&cols).unwrap(), x.clone(), y.clone())
                .unwrap();
            let a = l1_rule(&t).unwrap();
            let b = perturbation_oracle(&t).unwrap();
            assert_eq!(a.decision, b.decision, "{t}");
            for w in [a.witness, b.witness].into_iter().flatten() {
                verify_witness(&t, &w).unwrap();
            }
        }
    }
}

#[test]
fn cross_check_records_agreeing_methods() {
    let t =
        LinearOperator::new(Matrix::identity(2), NormedSpace::l1(2), NormedSpace::l1(2)).unwrap();
    let v = decide_with(&t, DecideOptions { cross_check: true }).unwrap();
    assert!(v.is_extreme());
    assert_eq!(v.method, Method::L1Rule);
    assert!(v.cross_checked.contains(&Method::PerturbationOracle));
    assert_eq!(v.oracle_lps, 8);
}

#[test]
fn rank_test_on_full_and_deficient_spans() {
    let id =
        LinearOperator::new(Matrix::identity(2), NormedSpace::l1(2), NormedSpace::l2(2)).unwrap();
    let v = rank_test(&id).unwrap();
    assert!(v.is_extreme());
    assert_eq!(v.evidence.span_rank, 2);
    // Attains only at ±(1, 1): span rank 1, so not extreme.
    let m = Matrix::new(2, 2, vec![rat(1, 2), rat(1, 2), int(0), int(0)]).unwrap();
    let t = LinearOperator::new(m, NormedSpace::linf(2), NormedSpace::l2(2)).unwrap();
    let v = rank_test(&t).unwrap();
    assert!(!v.is_extreme());
    assert_eq!(v.evidence.attaining, vec![Vector::from_ints(&[1, 1])]);
    verify_witness(&t, v.witness.as_ref().unwrap()).unwrap();
    let linf = LinearOperator::new(
        Matrix::identity(2),
        NormedSpace::linf(2),
        NormedSpace::linf(2),
    )
    .unwrap();
    assert!(matches!(
        rank_test(&linf),
        Err(Error::RuleNotApplicable { .. })
    ));
}

#[test]
fn unit_row_rule_examples() {
    let rows = [
        Vector::new(vec![rat(3, 5), rat(4, 5)]),
        Vector::new(vec![rat(-5, 13), rat(12, 13)]),
    ];
    let t = LinearOperator::new(
        Matrix::from_rows(&rows).unwrap(),
        NormedSpace::l2(2),
        NormedSpace::linf(2),
    )
    .unwrap();
    assert!(unit_row_rule(&t).unwrap().is_extreme());
    let rows = [
        Vector::new(vec![rat(3, 5), rat(4, 5)]),
        Vector::new(vec![rat(1, 2), int(0)]),
    ];
    let t = LinearOperator::new(
        Matrix::from_rows(&rows).unwrap(),
        NormedSpace::l2(2),
        NormedSpace::linf(2),
    )
    .unwrap();
    let v = unit_row_rule(&t).unwrap();
    assert!(!v.is_extreme());
    verify_witness(&t, v.witness.as_ref().unwrap()).unwrap();
}

#[test]
fn preconditions() {
    let half = LinearOperator::new(
        Matrix::identity(2).scale(&rat(1, 2)),
        NormedSpace::l1(2),
        NormedSpace::l1(2),
    )
    .unwrap();
    assert!(matches!(
        decide(&half),
        Err(Error::NotContractionBoundary { above: false, .. })
    ));
    let l2 =
        LinearOperator::new(Matrix::identity(2), NormedSpace::l2(2), NormedSpace::l2(2)).unwrap();
    assert!(matches!(decide(&l2), Err(Error::UnsupportedPair { .. })));
    let t = LinearOperator::new(
        Matrix::identity(2),
        NormedSpace::linf(2),
        NormedSpace::linf(2),
    )
    .unwrap();
    assert!(matches!(l1_rule(&t), Err(Error::RuleNotApplicable { .. })));
    assert!(verify_witness(&t, &Matrix::zeros(2, 2)).is_err());
    assert!(verify_witness(&t, &Matrix::identity(2)).is_err());
}
