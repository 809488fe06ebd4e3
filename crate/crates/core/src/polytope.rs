//! Origin-symmetric full-dimensional polytopes, held in both vertex and facet
//! form.
//!
//! Both lists store one canonical representative per `±` pair (the
//! lexicographically larger of `v` and `-v`) and are sorted lexicographically.
//! A facet functional `f` stands for the pair of inequalities `-1 <= f·x <= 1`.

use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use crate::dd::symmetric_vertices;
use crate::error::{Error, Result};
use crate::linalg::{rank, Vector};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymmetricPolytope {
    dim: usize,
    vertices: Vec<Vector>,
    facets: Vec<Vector>,
}

fn canonical(points: impl IntoIterator<Item = Vector>) -> Vec<Vector> {
    points
        .into_iter()
        .map(|p| p.pair_representative())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

fn check_dims(points: &[Vector], dim: usize) -> Result<()> {
    match points.iter().find(|p| p.dim() != dim) {
        Some(p) => Err(Error::DimensionMismatch {
            expected: dim,
            found: p.dim(),
        }),
        None => Ok(()),
    }
}

fn full_rank(points: &[Vector], dim: usize) -> Result<()> {
    let r = rank(points)?;
    if r < dim {
        return Err(Error::NotFullDimensional { dim, rank: r });
    }
    Ok(())
}

/// Keeps the `candidates` at which the `dual` functionals tight there have
/// full rank, i.e. the vertices (or facets) among them.
fn tight_rank_filter(candidates: &[Vector], dual: &[Vector], dim: usize) -> Result<Vec<Vector>> {
    let mut kept = Vec::new();
    for c in candidates {
        let tight: Vec<Vector> = dual
            .iter()
            .filter(|d| d.dot(c).abs().is_one())
            .cloned()
            .collect();
        if rank(&tight)? == dim {
            kept.push(c.clone());
        }
    }
    Ok(canonical(kept))
}

/// Facet functional representatives of `conv(±points)`.
pub fn to_facets(points: &[Vector], dim: usize) -> Result<Vec<Vector>> {
    check_dims(points, dim)?;
    full_rank(points, dim)?;
    symmetric_vertices(points, dim)
}

/// Vertex representatives of `{x : |f·x| <= 1}`.
pub fn to_vertices(facets: &[Vector], dim: usize) -> Result<Vec<Vector>> {
    check_dims(facets, dim)?;
    full_rank(facets, dim)?;
    symmetric_vertices(facets, dim)
}

impl SymmetricPolytope {
    /// Convex hull of `points ∪ -points`. Duplicates and non-extreme points are
    /// dropped.
    pub fn from_vertices(dim: usize, points: &[Vector]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::NotFullDimensional { dim, rank: 0 });
        }
        let facets = to_facets(points, dim)?;
        let vertices = tight_rank_filter(&canonical(points.iter().cloned()), &facets, dim)?;
        Ok(SymmetricPolytope {
            dim,
            vertices,
            facets,
        })
    }

    /// The polytope `{x : |f·x| <= 1}`. Redundant functionals are dropped.
    pub fn from_facets(dim: usize, functionals: &[Vector]) -> Result<Self> {
        if functionals.is_empty() {
            return Err(Error::NotFullDimensional { dim, rank: 0 });
        }
        let vertices = to_vertices(functionals, dim)?;
        let facets = tight_rank_filter(&canonical(functionals.iter().cloned()), &vertices, dim)?;
        Ok(SymmetricPolytope {
            dim,
            vertices,
            facets,
        })
    }

    /// The l1 unit ball: vertices `±e_i`, facets all sign vectors.
    pub fn cross_polytope(dim: usize) -> Self {
        SymmetricPolytope {
            dim,
            vertices: canonical((0..dim).map(|i| Vector::unit(dim, i))),
            facets: canonical(sign_vectors(dim)),
        }
    }

    /// The l∞ unit ball: vertices all sign vectors, facets `±e_i`.
    pub fn cube(dim: usize) -> Self {
        Self::cross_polytope(dim).polar()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// One representative per ± pair.
    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    /// One representative per ± pair.
    pub fn facets(&self) -> &[Vector] {
        &self.facets
    }

    pub fn all_vertices(&self) -> Vec<Vector> {
        self.vertices
            .iter()
            .flat_map(|v| [v.clone(), v.neg()])
            .collect()
    }

    pub fn vertex_pair_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_vertex(&self, x: &Vector) -> bool {
        x.dim() == self.dim
            && self
                .vertices
                .binary_search(&x.pair_representative())
                .is_ok()
    }

    /// Gauge of `x`: the largest `|f·x|` over facets.
    pub fn gauge(&self, x: &Vector) -> Result<Rational> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.dim(),
            });
        }
        Ok(self
            .facets
            .iter()
            .map(|f| f.dot(x).abs())
            .max()
            .unwrap_or_else(Rational::zero))
    }

    pub fn contains(&self, x: &Vector) -> Result<bool> {
        Ok(self.gauge(x)? <= Rational::one())
    }

    /// The polar body, whose vertices are this polytope's facets and vice versa.
    pub fn polar(&self) -> Self {
        SymmetricPolytope {
            dim: self.dim,
            vertices: self.facets.clone(),
            facets: self.vertices.clone(),
        }
    }
}

/// All `±1` vectors of length `dim` (2^dim of them).
pub fn sign_vectors(dim: usize) -> Vec<Vector> {
    (0..1u64 << dim)
        .map(|mask| {
            Vector::new(
                (0..dim)
                    .map(|i| {
                        if mask >> i & 1 == 1 {
                            -Rational::one()
                        } else {
                            Rational::one()
                        }
                    })
                    .collect(),
            )
        })
        .collect()
}
