//! Exact vectors, matrices, and elimination-based rank / solve.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Deref, Index};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{bit_size, format_rational, int, Rational};

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Vector(Vec<Rational>);

impl Vector {
    pub fn new(entries: Vec<Rational>) -> Self {
        Vector(entries)
    }

    pub fn from_ints(entries: &[i64]) -> Self {
        Vector(entries.iter().map(|&v| int(v)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        Vector(vec![Rational::zero(); dim])
    }

    pub fn unit(dim: usize, index: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.0[index] = Rational::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_entries(self) -> Vec<Rational> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn dot(&self, other: &Vector) -> Rational {
        debug_assert_eq!(self.dim(), other.dim());
        self.0
            .iter()
            .zip(&other.0)
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn neg(&self) -> Vector {
        Vector(self.0.iter().map(|q| -q).collect())
    }

    pub fn scale(&self, factor: &Rational) -> Vector {
        Vector(self.0.iter().map(|q| q * factor).collect())
    }

    pub fn add(&self, other: &Vector) -> Vector {
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        Vector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// The lexicographically larger of `self` and `-self`.
    pub fn pair_representative(&self) -> Vector {
        let neg = self.neg();
        if neg.lex_cmp(self) == Ordering::Greater {
            neg
        } else {
            self.clone()
        }
    }

    pub fn lex_cmp(&self, other: &Vector) -> Ordering {
        self.0.cmp(&other.0)
    }

    /// True when `self = c * other` for some nonzero rational `c`.
    pub fn is_parallel_to(&self, other: &Vector) -> bool {
        if self.dim() != other.dim() || self.is_zero() || other.is_zero() {
            return false;
        }
        let Some(k) = other.0.iter().position(|q| !q.is_zero()) else {
            return false;
        };
        let c = &self.0[k] / &other.0[k];
        self.0.iter().zip(&other.0).all(|(a, b)| *a == &c * b)
    }
}

impl Deref for Vector {
    type Target = [Rational];
    fn deref(&self) -> &[Rational] {
        &self.0
    }
}

impl From<Vec<Rational>> for Vector {
    fn from(entries: Vec<Rational>) -> Self {
        Vector(entries)
    }
}

impl PartialOrd for Vector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Vector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.lex_cmp(other)
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, q) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", format_rational(q))?;
        }
        write!(f, ")")
    }
}

/// Dense row-major matrix.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: &[Vector]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vector::dim);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.dim() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: r.dim(),
                });
            }
            data.extend(r.iter().cloned());
        }
        Ok(Matrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn from_columns(cols: &[Vector]) -> Result<Self> {
        Ok(Self::from_rows(cols)?.transpose())
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        let vs: Vec<Vector> = rows.iter().map(|r| Vector::from_ints(r)).collect();
        Self::from_rows(&vs).expect("ragged integer rows")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: Rational) {
        self.data[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> Vector {
        Vector::new(self.data[r * self.cols..(r + 1) * self.cols].to_vec())
    }

    pub fn column(&self, c: usize) -> Vector {
        Vector::new((0..self.rows).map(|r| self.get(r, c).clone()).collect())
    }

    pub fn row_vectors(&self) -> Vec<Vector> {
        (0..self.rows).map(|r| self.row(r)).collect()
    }

    pub fn column_vectors(&self) -> Vec<Vector> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut data = Vec::with_capacity(self.data.len());
        for c in 0..self.cols {
            for r in 0..self.rows {
                data.push(self.get(r, c).clone());
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn apply(&self, x: &Vector) -> Result<Vector> {
        if x.dim() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: x.dim(),
            });
        }
        Ok(Vector::new(
            (0..self.rows)
                .map(|r| {
                    self.data[r * self.cols..(r + 1) * self.cols]
                        .iter()
                        .zip(x.iter())
                        .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
                })
                .collect(),
        ))
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = &out.data[idx] + a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    fn zip_with(&self, other: &Matrix, f: impl Fn(&Rational, &Rational) -> Rational) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, factor: &Rational) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|q| q * factor).collect(),
        }
    }

    pub fn neg(&self) -> Matrix {
        self.scale(&-Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Row-major entries as a vector, the coordinate order used for operator
    /// balls.
    pub fn flatten(&self) -> Vector {
        Vector::new(self.data.clone())
    }

    pub fn from_flat(rows: usize, cols: usize, flat: &Vector) -> Result<Matrix> {
        Matrix::new(rows, cols, flat.entries().to_vec())
    }

    pub fn lex_cmp(&self, other: &Matrix) -> Ordering {
        (self.rows, self.cols)
            .cmp(&(other.rows, other.cols))
            .then_with(|| self.data.cmp(&other.data))
    }

    /// The lexicographically larger of `self` and `-self`.
    pub fn pair_representative(&self) -> Matrix {
        let neg = self.neg();
        if neg.lex_cmp(self) == Ordering::Greater {
            neg
        } else {
            self.clone()
        }
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Rational;
    fn index(&self, (r, c): (usize, usize)) -> &Rational {
        self.get(r, c)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", format_rational(self.get(r, c)))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Reduced row echelon form computed in place. Returns the pivot columns.
///
/// Pivot choice: among the nonzero candidates in the current column, the one
/// with the smallest bit size, ties broken by lowest row index.
fn row_reduce(rows: &mut [Vec<Rational>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..ncols {
        if next == rows.len() {
            break;
        }
        let Some(best) = (next..rows.len())
            .filter(|&r| !rows[r][col].is_zero())
            .min_by_key(|&r| (bit_size(&rows[r][col]), r))
        else {
            continue;
        };
        rows.swap(next, best);
        let inv = rows[next][col].recip();
        for q in rows[next].iter_mut() {
            *q *= &inv;
        }
        let pivot_row = rows[next].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == next || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (q, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *q -= &factor * p;
                }
            }
        }
        pivots.push(col);
        next += 1;
    }
    pivots
}

fn common_dim(vectors: &[Vector]) -> Result<usize> {
    let Some(first) = vectors.first() else {
        return Ok(0);
    };
    for v in vectors {
        if v.dim() != first.dim() {
            return Err(Error::DimensionMismatch {
                expected: first.dim(),
                found: v.dim(),
            });
        }
    }
    Ok(first.dim())
}

/// Dimension of the linear span of `vectors`.
pub fn rank(vectors: &[Vector]) -> Result<usize> {
    let dim = common_dim(vectors)?;
    let mut rows: Vec<Vec<Rational>> = vectors.iter().map(|v| v.to_vec()).collect();
    Ok(row_reduce(&mut rows, dim).len())
}

pub fn matrix_rank(m: &Matrix) -> usize {
    let mut rows: Vec<Vec<Rational>> = m
        .row_vectors()
        .into_iter()
        .map(Vector::into_entries)
        .collect();
    row_reduce(&mut rows, m.cols()).len()
}

/// Indices of a maximal linearly independent subsequence, chosen greedily in
/// input order.
pub fn independent_subset(vectors: &[Vector]) -> Result<Vec<usize>> {
    common_dim(vectors)?;
    let mut chosen: Vec<usize> = Vec::new();
    let mut basis: Vec<Vector> = Vec::new();
    for (i, v) in vectors.iter().enumerate() {
        basis.push(v.clone());
        if rank(&basis)? == basis.len() {
            chosen.push(i);
        } else {
            basis.pop();
        }
    }
    Ok(chosen)
}

/// Basis of `{x : a·x = 0 for every row a}`.
pub fn null_space(rows: &[Vector], dim: usize) -> Result<Vec<Vector>> {
    for r in rows {
        if r.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: r.dim(),
            });
        }
    }
    let mut m: Vec<Vec<Rational>> = rows.iter().map(|v| v.to_vec()).collect();
    let pivots = row_reduce(&mut m, dim);
    let free: Vec<usize> = (0..dim).filter(|c| !pivots.contains(c)).collect();
    Ok(free
        .iter()
        .map(|&f| {
            let mut x = Vector::zeros(dim).into_entries();
            x[f] = Rational::one();
            for (r, &p) in pivots.iter().enumerate() {
                x[p] = -m[r][f].clone();
            }
            Vector::new(x)
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinearSolution {
    Unique(Vector),
    /// One particular solution; free variables set to zero.
    Underdetermined(Vector),
    Inconsistent,
}

impl LinearSolution {
    pub fn vector(&self) -> Option<&Vector> {
        match self {
            LinearSolution::Unique(v) | LinearSolution::Underdetermined(v) => Some(v),
            LinearSolution::Inconsistent => None,
        }
    }
}

/// Solves `a · x = b` exactly.
pub fn solve_linear(a: &Matrix, b: &Vector) -> Result<LinearSolution> {
    if a.rows() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            found: b.dim(),
        });
    }
    let n = a.cols();
    let mut aug: Vec<Vec<Rational>> = (0..a.rows())
        .map(|r| {
            let mut row = a.row(r).into_entries();
            row.push(b[r].clone());
            row
        })
        .collect();
    let pivots = row_reduce(&mut aug, n + 1);
    if pivots.last() == Some(&n) {
        return Ok(LinearSolution::Inconsistent);
    }
    let mut x = vec![Rational::zero(); n];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = aug[r][n].clone();
    }
    let x = Vector::new(x);
    Ok(if pivots.len() == n {
        LinearSolution::Unique(x)
    } else {
        LinearSolution::Underdetermined(x)
    })
}

/// Inverse of a square matrix, `None` when singular.
pub fn inverse(a: &Matrix) -> Option<Matrix> {
    let n = a.rows();
    if a.cols() != n {
        return None;
    }
    let mut aug: Vec<Vec<Rational>> = (0..n)
        .map(|r| {
            let mut row = a.row(r).into_entries();
            row.extend(Vector::unit(n, r).into_entries());
            row
        })
        .collect();
    let pivots = row_reduce(&mut aug, n);
    if pivots.len() < n {
        return None;
    }
    let data = aug
        .into_iter()
        .flat_map(|row| row.into_iter().skip(n))
        .collect();
    Matrix::new(n, n, data).ok()
}

/// Sum of absolute values.
pub fn l1_norm(v: &[Rational]) -> Rational {
    v.iter().fold(Rational::zero(), |acc, q| acc + q.abs())
}

pub fn linf_norm(v: &[Rational]) -> Rational {
    v.iter()
        .map(Signed::abs)
        .max()
        .unwrap_or_else(Rational::zero)
}

pub fn squared_l2_norm(v: &[Rational]) -> Rational {
    v.iter().fold(Rational::zero(), |acc, q| acc + q * q)
}
