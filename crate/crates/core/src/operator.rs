//! Linear operators between normed spaces: operator norm, norm attainment on
//! extreme points, adjoints.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{rank, squared_l2_norm, Matrix, Vector};
use crate::rational::{rational_sqrt, Rational};
use crate::space::{NormValue, NormedSpace, SpaceKind};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearOperator {
    matrix: Matrix,
    domain: NormedSpace,
    codomain: NormedSpace,
}

/// Extreme points of the domain ball at which the operator attains its norm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormAttainment {
    pub operator_norm: NormValue,
    /// One representative per ± pair.
    pub attaining: Vec<Vector>,
    /// False when the attaining points of an l2 domain could not be normalized
    /// over the rationals; the listed vectors are then positive multiples of
    /// the true unit vectors.
    pub normalized: bool,
    pub span_rank: usize,
}

impl LinearOperator {
    pub fn new(matrix: Matrix, domain: NormedSpace, codomain: NormedSpace) -> Result<Self> {
        if matrix.cols() != domain.dim() {
            return Err(Error::DimensionMismatch {
                expected: domain.dim(),
                found: matrix.cols(),
            });
        }
        if matrix.rows() != codomain.dim() {
            return Err(Error::DimensionMismatch {
                expected: codomain.dim(),
                found: matrix.rows(),
            });
        }
        Ok(LinearOperator {
            matrix,
            domain,
            codomain,
        })
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn domain(&self) -> &NormedSpace {
        &self.domain
    }

    pub fn codomain(&self) -> &NormedSpace {
        &self.codomain
    }

    pub fn with_matrix(&self, matrix: Matrix) -> Result<Self> {
        Self::new(matrix, self.domain.clone(), self.codomain.clone())
    }

    pub fn apply(&self, x: &Vector) -> Result<Vector> {
        self.matrix.apply(x)
    }

    fn unsupported(&self) -> Error {
        Error::UnsupportedPair {
            domain: self.domain.to_string(),
            codomain: self.codomain.to_string(),
        }
    }

    /// True for the l2 → l∞ pair, the only smooth domain handled.
    pub fn is_l2_to_linf(&self) -> bool {
        matches!(self.domain.kind(), SpaceKind::L2) && self.codomain.is_linf()
    }

    pub fn op_norm(&self) -> Result<NormValue> {
        Ok(self.attainment()?.operator_norm)
    }

    pub fn attainment(&self) -> Result<NormAttainment> {
        if self.domain.is_polyhedral() {
            return self.attainment_on_extremes();
        }
        if self.is_l2_to_linf() {
            return self.attainment_l2_rows();
        }
        Err(self.unsupported())
    }

    fn attainment_on_extremes(&self) -> Result<NormAttainment> {
        let extremes = self.domain.extreme_points()?;
        let mut best: Option<NormValue> = None;
        let mut attaining: Vec<Vector> = Vec::new();
        for v in &extremes.representatives {
            let n = self.codomain.norm(&self.matrix.apply(v)?)?;
            match &best {
                Some(b) if n.value < b.value => {}
                Some(b) if n.value == b.value => attaining.push(v.clone()),
                _ => {
                    best = Some(n);
                    attaining = vec![v.clone()];
                }
            }
        }
        let operator_norm = best.ok_or_else(|| self.unsupported())?;
        let span_rank = rank(&attaining)?;
        Ok(NormAttainment {
            operator_norm,
            attaining,
            normalized: true,
            span_rank,
        })
    }

    /// `‖T‖² = max_i ‖r_i‖²` over rows; the norm is attained at `±r_i/‖r_i‖`
    /// for the maximal rows.
    fn attainment_l2_rows(&self) -> Result<NormAttainment> {
        let rows = self.matrix.row_vectors();
        let squares: Vec<Rational> = rows.iter().map(|r| squared_l2_norm(r)).collect();
        let max = squares.iter().max().cloned().unwrap_or_else(Rational::zero);
        let n = self.domain.dim();
        if max.is_zero() {
            // M_T is the whole sphere; report a basis of it.
            return Ok(NormAttainment {
                operator_norm: NormValue {
                    value: max,
                    squared: true,
                },
                attaining: (0..n).map(|i| Vector::unit(n, i)).collect(),
                normalized: true,
                span_rank: n,
            });
        }
        let root = rational_sqrt(&max);
        let set: BTreeSet<Vector> = rows
            .iter()
            .zip(&squares)
            .filter(|(_, s)| **s == max)
            .map(|(r, _)| match &root {
                Some(root) => r.scale(&root.recip()).pair_representative(),
                None => r.pair_representative(),
            })
            .collect();
        let attaining: Vec<Vector> = set.into_iter().collect();
        let span_rank = rank(&attaining)?;
        Ok(NormAttainment {
            operator_norm: NormValue {
                value: max,
                squared: true,
            },
            attaining,
            normalized: root.is_some(),
            span_rank,
        })
    }

    /// Transposed matrix between the dual spaces.
    pub fn adjoint(&self) -> LinearOperator {
        LinearOperator {
            matrix: self.matrix.transpose(),
            domain: self.codomain.dual(),
            codomain: self.domain.dual(),
        }
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &LinearOperator) -> Result<LinearOperator> {
        if inner.codomain != self.domain {
            return Err(Error::Precondition(format!(
                "cannot compose: inner codomain {} differs from outer domain {}",
                inner.codomain, self.domain
            )));
        }
        Ok(LinearOperator {
            matrix: self.matrix.mul(&inner.matrix)?,
            domain: inner.domain.clone(),
            codomain: self.codomain.clone(),
        })
    }

    pub fn neg(&self) -> LinearOperator {
        LinearOperator {
            matrix: self.matrix.neg(),
            domain: self.domain.clone(),
            codomain: self.codomain.clone(),
        }
    }

    /// First domain extreme point whose image is not an extreme point of the
    /// codomain ball, with that image.
    pub fn extreme_image_violation(&self) -> Result<Option<(Vector, Vector)>> {
        for v in self.domain.extreme_points()?.representatives {
            let image = self.matrix.apply(&v)?;
            if !self.codomain.is_extreme_point(&image)? {
                return Ok(Some((v, image)));
            }
        }
        Ok(None)
    }
}

impl fmt::Display for LinearOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} : {} -> {}", self.matrix, self.domain, self.codomain)
    }
}
