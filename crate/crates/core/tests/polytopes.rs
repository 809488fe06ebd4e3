mod common;

use std::collections::BTreeSet;

use common::{hexagon_ball, skew_ball};
use extremal_core::linalg::{rank, solve_linear, LinearSolution};
use extremal_core::polytope::SymmetricPolytope;
use extremal_core::rational::{int, rat};
use extremal_core::{Matrix, Vector};
use num_traits::{One, Signed};

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Facet representatives by brute force: every d-subset of vertices whose
/// affine hyperplane `f·x = 1` is unique and supports the whole ball.
fn brute_force_facets(vertices: &[Vector], dim: usize) -> BTreeSet<Vector> {
    let mut out = BTreeSet::new();
    for subset in subsets(vertices.len(), dim) {
        let rows: Vec<Vector> = subset.iter().map(|&i| vertices[i].clone()).collect();
        let a = Matrix::from_rows(&rows).unwrap();
        let ones = Vector::new(vec![int(1); dim]);
        let LinearSolution::Unique(f) = solve_linear(&a, &ones).unwrap() else {
            continue;
        };
        if vertices.iter().all(|v| f.dot(v).abs() <= int(1)) {
            let tight: Vec<Vector> = vertices
                .iter()
                .filter(|v| f.dot(v).is_one())
                .cloned()
                .collect();
            if rank(&tight).unwrap() == dim {
                out.insert(f.pair_representative());
            }
        }
    }
    out
}

#[test]
fn hexagon_facets_match_brute_force() {
    let ball = hexagon_ball();
    let expected: BTreeSet<Vector> = [
        Vector::new(vec![int(1), rat(1, 2)]),
        Vector::new(vec![int(0), int(1)]),
        Vector::new(vec![int(1), rat(-1, 2)]),
    ]
    .into_iter()
    .collect();
    assert_eq!(brute_force_facets(&ball.all_vertices(), 2), expected);
    assert_eq!(
        ball.facets().iter().cloned().collect::<BTreeSet<_>>(),
        expected
    );
    assert_eq!(ball.vertex_pair_count(), 3);
}

#[test]
fn facets_match_brute_force_in_three_dimensions() {
    for ball in [
        SymmetricPolytope::cube(3),
        SymmetricPolytope::cross_polytope(3),
        skew_ball(),
    ] {
        let oracle = brute_force_facets(&ball.all_vertices(), 3);
        assert_eq!(
            ball.facets().iter().cloned().collect::<BTreeSet<_>>(),
            oracle
        );
    }
}

#[test]
fn known_face_counts() {
    assert_eq!(SymmetricPolytope::cube(3).vertex_pair_count(), 4);
    assert_eq!(SymmetricPolytope::cube(3).facets().len(), 3);
    assert_eq!(SymmetricPolytope::cross_polytope(4).facets().len(), 8);
    assert_eq!(SymmetricPolytope::cube(4).vertex_pair_count(), 8);
    // skew ball: 4 vertex pairs in dimension 3
    assert_eq!(skew_ball().vertex_pair_count(), 4);
}

#[test]
fn redundant_points_are_dropped() {
    let pts = [
        Vector::from_ints(&[1, 0]),
        Vector::from_ints(&[0, 1]),
        Vector::new(vec![rat(1, 2), rat(1, 2)]),
        Vector::new(vec![rat(1, 3), int(0)]),
    ];
    let ball = SymmetricPolytope::from_vertices(2, &pts).unwrap();
    assert_eq!(ball, SymmetricPolytope::cross_polytope(2));
}

#[test]
fn roundtrips_and_polarity() {
    for ball in [
        SymmetricPolytope::cube(2),
        SymmetricPolytope::cube(3),
        SymmetricPolytope::cross_polytope(2),
        SymmetricPolytope::cross_polytope(3),
        SymmetricPolytope::cross_polytope(4),
        hexagon_ball(),
        skew_ball(),
    ] {
        let d = ball.dim();
        assert_eq!(
            SymmetricPolytope::from_facets(d, ball.facets()).unwrap(),
            ball
        );
        assert_eq!(
            SymmetricPolytope::from_vertices(d, ball.vertices()).unwrap(),
            ball
        );
        let polar = ball.polar();
        assert_eq!(polar.vertices(), ball.facets());
        assert_eq!(polar.polar(), ball);
        for v in ball.all_vertices() {
            assert!(ball.is_vertex(&v));
            assert_eq!(ball.gauge(&v).unwrap(), int(1));
            assert!(!ball.is_vertex(&v.scale(&rat(1, 2))));
        }
    }
    assert_eq!(
        SymmetricPolytope::cross_polytope(3).polar(),
        SymmetricPolytope::cube(3)
    );
}

#[test]
fn degenerate_inputs_are_rejected() {
    let flat = [Vector::from_ints(&[1, 0, 0]), Vector::from_ints(&[0, 1, 0])];
    assert!(SymmetricPolytope::from_vertices(3, &flat).is_err());
    assert!(SymmetricPolytope::from_vertices(2, &[Vector::from_ints(&[0, 0])]).is_err());
    let unbounded = [Vector::from_ints(&[1, 0])];
    assert!(SymmetricPolytope::from_facets(2, &unbounded).is_err());
}
