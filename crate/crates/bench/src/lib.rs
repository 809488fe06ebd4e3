//! Shared fixtures for the criterion benchmarks.

use extremal_core::rational::rat;
use extremal_core::{NormedSpace, SymmetricPolytope, Vector};

/// The hexagon with vertices ±(1, 0), ±(1/2, 1), ±(-1/2, 1).
pub fn hexagon() -> NormedSpace {
    NormedSpace::polytopal(
        SymmetricPolytope::from_vertices(
            2,
            &[
                Vector::from_ints(&[1, 0]),
                Vector::new(vec![rat(1, 2), rat(1, 1)]),
                Vector::new(vec![rat(-1, 2), rat(1, 1)]),
            ],
        )
        .expect("hexagon is full-dimensional"),
    )
}
