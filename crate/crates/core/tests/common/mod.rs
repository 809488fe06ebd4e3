//! Fixtures and random generators shared by the integration tests.
#![allow(dead_code)]

use extremal_core::rational::{int, rat};
use extremal_core::{Matrix, NormedSpace, Rational, SymmetricPolytope, Vector};
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Ball with vertices ±(1,0), ±(1/2,1), ±(-1/2,1).
pub fn hexagon_ball() -> SymmetricPolytope {
    let v = [
        Vector::new(vec![int(1), int(0)]),
        Vector::new(vec![rat(1, 2), int(1)]),
        Vector::new(vec![rat(-1, 2), int(1)]),
    ];
    SymmetricPolytope::from_vertices(2, &v).unwrap()
}

pub fn hexagon() -> NormedSpace {
    NormedSpace::polytopal(hexagon_ball())
}

/// A 3-dimensional ball with vertices ±e_i and ±(1/2,1/2,1/2).
pub fn skew_ball() -> SymmetricPolytope {
    let v = [
        Vector::from_ints(&[1, 0, 0]),
        Vector::from_ints(&[0, 1, 0]),
        Vector::from_ints(&[0, 0, 1]),
        Vector::new(vec![rat(1, 2), rat(1, 2), rat(1, 2)]),
    ];
    SymmetricPolytope::from_vertices(3, &v).unwrap()
}

pub fn polytopal_spaces() -> Vec<(String, NormedSpace)> {
    vec![
        ("l1:2".into(), NormedSpace::l1(2)),
        ("l1:3".into(), NormedSpace::l1(3)),
        ("linf:2".into(), NormedSpace::linf(2)),
        ("linf:3".into(), NormedSpace::linf(3)),
        ("hexagon".into(), hexagon()),
        (
            "hexagon polar".into(),
            NormedSpace::polytopal(hexagon_ball().polar()),
        ),
        ("skew".into(), NormedSpace::polytopal(skew_ball())),
    ]
}

pub fn random_rational(rng: &mut ChaCha8Rng, max_num: i64, max_den: i64) -> Rational {
    rat(
        rng.gen_range(-max_num..=max_num),
        rng.gen_range(1..=max_den),
    )
}

pub fn random_vector(rng: &mut ChaCha8Rng, dim: usize) -> Vector {
    Vector::new((0..dim).map(|_| random_rational(rng, 9, 6)).collect())
}

pub fn random_nonzero_vector(rng: &mut ChaCha8Rng, dim: usize) -> Vector {
    loop {
        let v = random_vector(rng, dim);
        if !v.is_zero() {
            return v;
        }
    }
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Matrix {
    let data = (0..rows * cols)
        .map(|_| random_rational(rng, 5, 4))
        .collect();
    Matrix::new(rows, cols, data).unwrap()
}

/// Rational point of the Euclidean unit sphere by inverse stereographic
/// projection of a random rational point, with shuffled coordinates and
/// random signs.
pub fn pythagorean_unit(rng: &mut ChaCha8Rng, dim: usize) -> Vector {
    let t: Vec<Rational> = (0..dim - 1).map(|_| random_rational(rng, 7, 5)).collect();
    let s: Rational = t.iter().map(|x| x * x).sum();
    let denom = &s + Rational::one();
    let mut coords: Vec<Rational> = t.iter().map(|x| int(2) * x / &denom).collect();
    coords.push((&s - Rational::one()) / &denom);
    coords.shuffle(rng);
    for c in coords.iter_mut() {
        if rng.gen_bool(0.5) {
            *c = -c.clone();
        }
    }
    Vector::new(coords)
}

/// A rational in `[0, 1)`.
pub fn shrink_factor(rng: &mut ChaCha8Rng) -> Rational {
    let den = rng.gen_range(2..=7i64);
    rat(rng.gen_range(0..den), den)
}

pub fn is_zero(q: &Rational) -> bool {
    q.is_zero()
}
