//! Double description vertex enumeration for bounded origin-symmetric polytopes
//! `{x : |a·x| <= 1 for every functional a}`.
//!
//! The polytope is homogenized to the cone `{(t, x) : t ± a·x >= 0, t >= 0}`
//! and rays are kept as primitive integer vectors. Constraints are inserted in
//! lexicographic order of the (normalized) functionals; adjacency of ray pairs
//! uses the combinatorial test on zero sets.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{inverse, rank, Matrix, Vector};
use crate::rational::{common_denominator, Rational};

type IntVec = Vec<BigInt>;

#[derive(Clone, Debug, PartialEq, Eq)]
struct ZeroSet(Vec<u64>);

impl ZeroSet {
    fn new(len: usize) -> Self {
        ZeroSet(vec![0; len.div_ceil(64)])
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn intersection(&self, other: &ZeroSet) -> ZeroSet {
        ZeroSet(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn is_subset_of(&self, other: &ZeroSet) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }

    fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
}

struct Ray {
    coords: IntVec,
    zeros: ZeroSet,
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter()
        .zip(b)
        .fold(BigInt::zero(), |acc, (x, y)| acc + x * y)
}

fn primitive(mut v: IntVec) -> IntVec {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x /= &g;
        }
    }
    v
}

fn to_integer_row(q: &[Rational]) -> IntVec {
    let den = common_denominator(q);
    primitive(
        q.iter()
            .map(|x| (x * Rational::from_integer(den.clone())).to_integer())
            .collect(),
    )
}

/// Homogenized inequality rows `(1, -a)` and `(1, a)` for every functional,
/// deduplicated and lexicographically sorted, preceded by `t >= 0`.
fn homogenized_rows(functionals: &[Vector], dim: usize) -> Vec<IntVec> {
    let mut rows: BTreeSet<Vec<Rational>> = BTreeSet::new();
    for a in functionals {
        if a.is_zero() {
            continue;
        }
        for sign in [-1i64, 1] {
            let s = Rational::from_integer(BigInt::from(sign));
            let mut row = vec![Rational::one()];
            row.extend(a.iter().map(|q| q * &s));
            rows.insert(row);
        }
    }
    let mut out = Vec::with_capacity(rows.len() + 1);
    let mut nonneg = vec![BigInt::zero(); dim + 1];
    nonneg[0] = BigInt::one();
    out.push(nonneg);
    out.extend(rows.iter().map(|r| to_integer_row(r)));
    out
}

/// Vertices of `{x : |a·x| <= 1}` as pair representatives in canonical order.
///
/// The functionals must span the space, otherwise the set is unbounded.
pub fn symmetric_vertices(functionals: &[Vector], dim: usize) -> Result<Vec<Vector>> {
    let r = rank(functionals)?;
    if functionals.iter().any(|f| f.dim() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: functionals
                .iter()
                .find(|f| f.dim() != dim)
                .map_or(0, Vector::dim),
        });
    }
    if r < dim {
        return Err(Error::NotFullDimensional { dim, rank: r });
    }
    let rows = homogenized_rows(functionals, dim);
    let rays = double_description(&rows, dim + 1)?;
    let mut reps: BTreeSet<Vector> = BTreeSet::new();
    for ray in rays {
        let t = Rational::from_integer(ray[0].clone());
        if !t.is_positive() {
            return Err(Error::Verification(
                "double description produced an unbounded ray".into(),
            ));
        }
        let x = Vector::new(
            ray[1..]
                .iter()
                .map(|c| Rational::from_integer(c.clone()) / &t)
                .collect(),
        );
        reps.insert(x.pair_representative());
    }
    Ok(reps.into_iter().collect())
}

fn initial_rows(rows: &[IntVec], d: usize) -> Result<Vec<usize>> {
    let mut chosen: Vec<usize> = Vec::with_capacity(d);
    let mut basis: Vec<Vector> = Vec::with_capacity(d);
    for (i, row) in rows.iter().enumerate() {
        basis.push(Vector::new(
            row.iter()
                .map(|c| Rational::from_integer(c.clone()))
                .collect(),
        ));
        if rank(&basis)? == basis.len() {
            chosen.push(i);
            if chosen.len() == d {
                return Ok(chosen);
            }
        } else {
            basis.pop();
        }
    }
    Err(Error::NotFullDimensional {
        dim: d - 1,
        rank: chosen.len().saturating_sub(1),
    })
}

/// Extreme rays of the pointed cone `{y : row·y >= 0 for every row}`.
fn double_description(rows: &[IntVec], d: usize) -> Result<Vec<IntVec>> {
    let initial = initial_rows(rows, d)?;
    let basis = Matrix::from_rows(
        &initial
            .iter()
            .map(|&i| {
                Vector::new(
                    rows[i]
                        .iter()
                        .map(|c| Rational::from_integer(c.clone()))
                        .collect(),
                )
            })
            .collect::<Vec<_>>(),
    )?;
    let inv =
        inverse(&basis).ok_or_else(|| Error::Verification("singular initial basis".into()))?;

    let mut rays: Vec<Ray> = (0..d)
        .map(|k| {
            let coords = to_integer_row(inv.column(k).entries());
            let mut zeros = ZeroSet::new(rows.len());
            for (j, &i) in initial.iter().enumerate() {
                if j != k {
                    zeros.insert(i);
                }
            }
            Ray { coords, zeros }
        })
        .collect();

    let mut processed: Vec<bool> = vec![false; rows.len()];
    for &i in &initial {
        processed[i] = true;
    }

    for (idx, row) in rows.iter().enumerate() {
        if processed[idx] {
            continue;
        }
        processed[idx] = true;
        let values: Vec<BigInt> = rays.iter().map(|r| dot(row, &r.coords)).collect();
        let positive: Vec<usize> = (0..rays.len())
            .filter(|&k| values[k].is_positive())
            .collect();
        let negative: Vec<usize> = (0..rays.len())
            .filter(|&k| values[k].is_negative())
            .collect();
        if negative.is_empty() {
            for (k, ray) in rays.iter_mut().enumerate() {
                if values[k].is_zero() {
                    ray.zeros.insert(idx);
                }
            }
            continue;
        }

        let mut created: Vec<Ray> = Vec::new();
        for &p in &positive {
            for &q in &negative {
                let common = rays[p].zeros.intersection(&rays[q].zeros);
                if common.len() + 2 < d {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(k, r)| k == p || k == q || !common.is_subset_of(&r.zeros));
                if !adjacent {
                    continue;
                }
                let vp = &values[p];
                let vq = -&values[q];
                let coords: IntVec = rays[q]
                    .coords
                    .iter()
                    .zip(&rays[p].coords)
                    .map(|(cq, cp)| vp * cq + &vq * cp)
                    .collect();
                let mut zeros = common;
                zeros.insert(idx);
                created.push(Ray {
                    coords: primitive(coords),
                    zeros,
                });
            }
        }

        let mut next: Vec<Ray> = Vec::with_capacity(rays.len() + created.len());
        for (k, mut ray) in rays.into_iter().enumerate() {
            if values[k].is_negative() {
                continue;
            }
            if values[k].is_zero() {
                ray.zeros.insert(idx);
            }
            next.push(ray);
        }
        next.extend(created);
        rays = next;
    }
    Ok(rays.into_iter().map(|r| r.coords).collect())
}
