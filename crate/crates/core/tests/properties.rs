mod common;

use common::{hexagon, polytopal_spaces};
use extremal_core::extremality::{decide_with, DecideOptions};
use extremal_core::lp::{solve, verify, LinearProgram};
use extremal_core::polytope::SymmetricPolytope;
use extremal_core::rational::{format_rational, int, parse_rational, rat};
use extremal_core::{LinearOperator, Matrix, NormedSpace, Rational, Vector};
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-30i64..=30, 1i64..=12).prop_map(|(p, q)| rat(p, q))
}

fn vector(dim: usize) -> impl Strategy<Value = Vector> {
    prop::collection::vec(rational(), dim).prop_map(Vector::new)
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(rational(), rows * cols)
        .prop_map(move |d| Matrix::new(rows, cols, d).unwrap())
}

fn determinant(m: &[Vec<Rational>]) -> Rational {
    // Leibniz expansion; only used on matrices up to 4x4.
    let n = m.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = Rational::zero();
    permutations(&mut perm, 0, &mut |p| {
        let mut inversions = 0;
        for i in 0..n {
            for j in i + 1..n {
                if p[i] > p[j] {
                    inversions += 1;
                }
            }
        }
        let mut term: Rational = (0..n).map(|i| m[i][p[i]].clone()).product();
        if inversions % 2 == 1 {
            term = -term;
        }
        total += term;
    });
    total
}

fn permutations(p: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == p.len() {
        f(p);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permutations(p, k + 1, f);
        p.swap(k, i);
    }
}

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

/// Largest k with a nonzero k x k minor.
fn rank_by_minors(m: &Matrix) -> usize {
    for k in (1..=m.rows().min(m.cols())).rev() {
        for rows in subsets(m.rows(), k) {
            for cols in subsets(m.cols(), k) {
                let minor: Vec<Vec<Rational>> = rows
                    .iter()
                    .map(|&r| cols.iter().map(|&c| m.get(r, c).clone()).collect())
                    .collect();
                if !determinant(&minor).is_zero() {
                    return k;
                }
            }
        }
    }
    0
}

/// Matrix with entries mostly in {-1, 0, 1} so that rank deficiency is common.
fn sparse_matrix() -> impl Strategy<Value = Matrix> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop_oneof![3 => -1i64..=1, 1 => -3i64..=3], r * c)
            .prop_map(move |d| Matrix::new(r, c, d.into_iter().map(int).collect()).unwrap())
    })
}

fn polytopal_space() -> impl Strategy<Value = NormedSpace> {
    let spaces: Vec<NormedSpace> = polytopal_spaces().into_iter().map(|(_, s)| s).collect();
    prop::sample::select(spaces)
}

fn small_lp() -> impl Strategy<Value = LinearProgram> {
    (1usize..=3, 1usize..=5).prop_flat_map(|(vars, rows)| {
        (
            prop::collection::vec(-3i64..=3, vars),
            prop::collection::vec((prop::collection::vec(-3i64..=3, vars), -2i64..=4), rows),
        )
            .prop_map(|(c, rows)| {
                let mut lp = LinearProgram::new(Vector::from_ints(&c));
                for (a, b) in rows {
                    lp.add_le(Vector::from_ints(&a), int(b));
                }
                lp
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn rank_matches_minor_oracle(m in sparse_matrix()) {
        prop_assert_eq!(extremal_core::linalg::matrix_rank(&m), rank_by_minors(&m));
        prop_assert_eq!(extremal_core::linalg::matrix_rank(&m.transpose()), rank_by_minors(&m));
    }

    #[test]
    fn rational_format_roundtrip(q in (-10_000i64..=10_000, 1i64..=1000).prop_map(|(p, q)| rat(p, q))) {
        prop_assert_eq!(parse_rational(&format_rational(&q)).unwrap(), q);
    }

    #[test]
    fn norm_axioms(space in polytopal_space(), seed in vector(4), other in vector(4), lambda in rational()) {
        let n = space.dim();
        let x = Vector::new(seed[..n].to_vec());
        let y = Vector::new(other[..n].to_vec());
        let nx = space.norm(&x).unwrap().value;
        prop_assert_eq!(nx.is_zero(), x.is_zero());
        prop_assert!(!nx.is_negative());
        prop_assert_eq!(space.norm(&x.scale(&lambda)).unwrap().value, lambda.abs() * &nx);
        prop_assert!(space.norm(&x.add(&y)).unwrap().value <= nx + space.norm(&y).unwrap().value);
    }

    #[test]
    fn facet_norm_equals_gauge_lp(space in polytopal_space(), seed in vector(4)) {
        let x = Vector::new(seed[..space.dim()].to_vec());
        prop_assert_eq!(space.norm(&x).unwrap().value, space.gauge_norm_vrep(&x).unwrap());
    }

    #[test]
    fn lp_certificates_verify(lp in small_lp()) {
        let r = solve(&lp).unwrap();
        prop_assert!(verify(&lp, &r).is_ok(), "{:?}", verify(&lp, &r));
    }

    #[test]
    fn lp_row_order_is_irrelevant(lp in small_lp(), shift in 0usize..5) {
        let r = solve(&lp).unwrap();
        let mut rotated = lp.clone();
        let k = shift % rotated.constraints.len();
        rotated.constraints.rotate_left(k);
        rotated.constraints.reverse();
        let s = solve(&rotated).unwrap();
        prop_assert_eq!(r.status, s.status);
        prop_assert_eq!(r.optimum, s.optimum);
    }

    #[test]
    fn adjoint_preserves_norm(m in matrix(2, 3)) {
        for (x, y) in [
            (NormedSpace::l1(3), NormedSpace::linf(2)),
            (NormedSpace::linf(3), NormedSpace::l1(2)),
            (NormedSpace::l2(3), NormedSpace::linf(2)),
            (NormedSpace::linf(3), hexagon()),
        ] {
            let t = LinearOperator::new(m.clone(), x, y).unwrap();
            prop_assert_eq!(t.op_norm().unwrap(), t.adjoint().op_norm().unwrap());
        }
    }

    #[test]
    fn vertex_facet_roundtrip(points in prop::collection::vec(vector(3), 3..7)) {
        if let Ok(ball) = SymmetricPolytope::from_vertices(3, &points) {
            let back = SymmetricPolytope::from_facets(3, ball.facets()).unwrap();
            prop_assert_eq!(&back, &ball);
            prop_assert_eq!(&ball.polar().polar(), &ball);
            for p in &points {
                prop_assert!(ball.contains(p).unwrap());
            }
            for v in ball.vertices() {
                prop_assert_eq!(ball.gauge(v).unwrap(), int(1));
                prop_assert!(ball.facets().iter().filter(|f| f.dot(v).abs() == int(1)).count() >= 3);
            }
        }
    }

    #[test]
    fn methods_agree_on_norm_one_operators(m in matrix(2, 2), pick in 0usize..4) {
        let pairs = [
            (NormedSpace::l1(2), NormedSpace::l1(2)),
            (NormedSpace::l1(2), hexagon()),
            (NormedSpace::linf(2), NormedSpace::l1(2)),
            (hexagon(), NormedSpace::linf(2)),
        ];
        let (x, y) = pairs[pick].clone();
        let t = LinearOperator::new(m, x, y).unwrap();
        let norm = t.op_norm().unwrap().value;
        prop_assume!(!norm.is_zero());
        let t = t.with_matrix(t.matrix().scale(&norm.recip())).unwrap();
        // Cross-checking runs every applicable method and errors on disagreement.
        let v = decide_with(&t, DecideOptions { cross_check: true }).unwrap();
        if let Some(d) = &v.witness {
            prop_assert!(extremal_core::extremality::verify_witness(&t, d).is_ok());
        }
    }
}
