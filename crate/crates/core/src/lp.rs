//! Dense two-phase simplex over exact rationals.
//!
//! Problems have the form `maximize c·x subject to a_i·x <= b_i` with free
//! variables. Internally every free variable is split into a difference of two
//! nonnegative ones, a slack is added per row, and rows with `b_i < 0` are
//! negated and given an artificial variable. Entering and leaving variables are
//! chosen by Bland's rule, so the method terminates on degenerate problems.
//!
//! Every result carries a certificate that [`verify`] checks by substitution
//! alone: a dual vector for optimal problems, a Farkas vector for infeasible
//! ones, and a feasible point plus improving ray for unbounded ones.

use std::sync::atomic::{AtomicU64, Ordering};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub coefficients: Vector,
    pub bound: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearProgram {
    pub num_vars: usize,
    /// Maximized.
    pub objective: Vector,
    pub constraints: Vec<Constraint>,
}

impl LinearProgram {
    pub fn new(objective: Vector) -> Self {
        LinearProgram {
            num_vars: objective.dim(),
            objective,
            constraints: Vec::new(),
        }
    }

    /// Adds `coefficients · x <= bound`.
    pub fn add_le(&mut self, coefficients: Vector, bound: Rational) -> &mut Self {
        self.constraints.push(Constraint {
            coefficients,
            bound,
        });
        self
    }

    /// Adds `coefficients · x = value` as a pair of inequalities.
    pub fn add_eq(&mut self, coefficients: Vector, value: Rational) -> &mut Self {
        let neg = coefficients.neg();
        self.add_le(coefficients, value.clone());
        self.add_le(neg, -value)
    }

    fn validate(&self) -> Result<()> {
        if self.objective.dim() != self.num_vars {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars,
                found: self.objective.dim(),
            });
        }
        for c in &self.constraints {
            if c.coefficients.dim() != self.num_vars {
                return Err(Error::DimensionMismatch {
                    expected: self.num_vars,
                    found: c.coefficients.dim(),
                });
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Unbounded,
    Infeasible,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpResult {
    pub status: LpStatus,
    pub optimum: Option<Rational>,
    /// Optimal point, or a feasible point when unbounded.
    pub primal_point: Option<Vector>,
    /// One nonnegative multiplier per constraint: a dual optimum when optimal,
    /// a Farkas witness when infeasible, empty when unbounded.
    pub dual_certificate: Vec<Rational>,
    /// Improving direction when unbounded.
    pub ray: Option<Vector>,
}

struct Tableau {
    /// Constraint rows; the last entry of each row is the right-hand side.
    rows: Vec<Vec<Rational>>,
    /// Reduced-cost row `c_B B^-1 M - c`; last entry is the objective value.
    objective: Vec<Rational>,
    basis: Vec<usize>,
    num_vars: usize,
    num_rows: usize,
    /// Column of the variable that starts basic in each row; those columns
    /// hold `B^-1` throughout.
    initial_basic: Vec<usize>,
    row_sign: Vec<bool>,
    first_artificial: usize,
    width: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Tableau {
        let n = lp.num_vars;
        let m = lp.constraints.len();
        let row_sign: Vec<bool> = lp
            .constraints
            .iter()
            .map(|c| !c.bound.is_negative())
            .collect();
        let num_artificial = row_sign.iter().filter(|s| !**s).count();
        let first_artificial = 2 * n + m;
        let width = first_artificial + num_artificial;
        let mut rows = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut next_artificial = first_artificial;
        for (i, c) in lp.constraints.iter().enumerate() {
            let sign = if row_sign[i] {
                Rational::one()
            } else {
                -Rational::one()
            };
            let mut row = vec![Rational::zero(); width + 1];
            for (j, a) in c.coefficients.iter().enumerate() {
                row[j] = a * &sign;
                row[n + j] = -(a * &sign);
            }
            row[2 * n + i] = sign.clone();
            row[width] = &c.bound * &sign;
            if row_sign[i] {
                basis.push(2 * n + i);
            } else {
                row[next_artificial] = Rational::one();
                basis.push(next_artificial);
                next_artificial += 1;
            }
            rows.push(row);
        }
        Tableau {
            rows,
            objective: vec![Rational::zero(); width + 1],
            initial_basic: basis.clone(),
            basis,
            num_vars: n,
            num_rows: m,
            row_sign,
            first_artificial,
            width,
        }
    }

    fn is_artificial(&self, col: usize) -> bool {
        col >= self.first_artificial && col < self.width
    }

    fn set_costs(&mut self, costs: &[Rational]) {
        let mut z: Vec<Rational> = costs.iter().map(|c| -c).collect();
        z.push(Rational::zero());
        for (r, &b) in self.basis.iter().enumerate() {
            let cb = &costs[b];
            if cb.is_zero() {
                continue;
            }
            for (zj, t) in z.iter_mut().zip(&self.rows[r]) {
                if !t.is_zero() {
                    *zj += cb * t;
                }
            }
        }
        self.objective = z;
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let inv = self.rows[row][col].recip();
        for q in self.rows[row].iter_mut() {
            if !q.is_zero() {
                *q *= &inv;
            }
        }
        let pivot_row = std::mem::take(&mut self.rows[row]);
        let eliminate = |target: &mut Vec<Rational>| {
            let factor = target[col].clone();
            if factor.is_zero() {
                return;
            }
            for (t, p) in target.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *t -= &factor * p;
                }
            }
        };
        for (r, target) in self.rows.iter_mut().enumerate() {
            if r != row {
                eliminate(target);
            }
        }
        eliminate(&mut self.objective);
        self.rows[row] = pivot_row;
        self.basis[row] = col;
    }

    /// Runs simplex iterations until optimal or an unbounded column is found.
    fn iterate(&mut self, allow_artificial: bool) -> Option<usize> {
        loop {
            let entering = (0..self.width).find(|&j| {
                (allow_artificial || !self.is_artificial(j)) && self.objective[j].is_negative()
            });
            let col = entering?;
            let rhs = self.width;
            let mut best: Option<(usize, Rational)> = None;
            for r in 0..self.num_rows {
                let a = &self.rows[r][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rows[r][rhs] / a;
                let better = match &best {
                    None => true,
                    Some((br, bratio)) => {
                        ratio < *bratio || (ratio == *bratio && self.basis[r] < self.basis[*br])
                    }
                };
                if better {
                    best = Some((r, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, col),
                None => return Some(col),
            }
        }
    }

    /// `λ = diag(sign) · c_B B^-1` for the costs currently loaded.
    fn duals(&self, costs: &[Rational]) -> Vec<Rational> {
        (0..self.num_rows)
            .map(|i| {
                let col = self.initial_basic[i];
                let y = self
                    .basis
                    .iter()
                    .enumerate()
                    .fold(Rational::zero(), |acc, (r, &b)| {
                        acc + &costs[b] * &self.rows[r][col]
                    });
                if self.row_sign[i] {
                    y
                } else {
                    -y
                }
            })
            .collect()
    }

    fn column_values(&self) -> Vec<Rational> {
        let mut values = vec![Rational::zero(); self.width];
        for (r, &b) in self.basis.iter().enumerate() {
            values[b] = self.rows[r][self.width].clone();
        }
        values
    }

    fn primal(&self) -> Vector {
        let values = self.column_values();
        let n = self.num_vars;
        Vector::new((0..n).map(|j| &values[j] - &values[n + j]).collect())
    }

    fn ray(&self, col: usize) -> Vector {
        let mut direction = vec![Rational::zero(); self.width];
        direction[col] = Rational::one();
        for (r, &b) in self.basis.iter().enumerate() {
            direction[b] = -self.rows[r][col].clone();
        }
        let n = self.num_vars;
        Vector::new((0..n).map(|j| &direction[j] - &direction[n + j]).collect())
    }
}

/// Solves `lp` exactly.
pub fn solve(lp: &LinearProgram) -> Result<LpResult> {
    lp.validate()?;
    let mut t = Tableau::build(lp);
    let n = lp.num_vars;

    if t.first_artificial < t.width {
        let mut phase_one = vec![Rational::zero(); t.width];
        for c in phase_one.iter_mut().skip(t.first_artificial) {
            *c = -Rational::one();
        }
        t.set_costs(&phase_one);
        t.iterate(true);
        let value = t.objective[t.width].clone();
        if value.is_negative() {
            return Ok(LpResult {
                status: LpStatus::Infeasible,
                optimum: None,
                primal_point: None,
                dual_certificate: t.duals(&phase_one),
                ray: None,
            });
        }
        for r in 0..t.num_rows {
            if !t.is_artificial(t.basis[r]) {
                continue;
            }
            if let Some(col) = (0..t.first_artificial).find(|&j| !t.rows[r][j].is_zero()) {
                t.pivot(r, col);
            }
        }
    }

    let mut costs = vec![Rational::zero(); t.width];
    for (j, c) in lp.objective.iter().enumerate() {
        costs[j] = c.clone();
        costs[n + j] = -c;
    }
    t.set_costs(&costs);
    if let Some(col) = t.iterate(false) {
        return Ok(LpResult {
            status: LpStatus::Unbounded,
            optimum: None,
            primal_point: Some(t.primal()),
            dual_certificate: Vec::new(),
            ray: Some(t.ray(col)),
        });
    }
    Ok(LpResult {
        status: LpStatus::Optimal,
        optimum: Some(t.objective[t.width].clone()),
        primal_point: Some(t.primal()),
        dual_certificate: t.duals(&costs),
        ray: None,
    })
}

fn combination(lp: &LinearProgram, lambda: &[Rational]) -> Vector {
    let mut acc = Vector::zeros(lp.num_vars);
    for (c, l) in lp.constraints.iter().zip(lambda) {
        if !l.is_zero() {
            acc = acc.add(&c.coefficients.scale(l));
        }
    }
    acc
}

fn weighted_bound(lp: &LinearProgram, lambda: &[Rational]) -> Rational {
    lp.constraints
        .iter()
        .zip(lambda)
        .fold(Rational::zero(), |acc, (c, l)| acc + &c.bound * l)
}

/// Checks the certificate in `result` against `lp` by direct substitution.
pub fn verify(lp: &LinearProgram, result: &LpResult) -> std::result::Result<(), String> {
    let feasible = |x: &Vector| {
        lp.constraints
            .iter()
            .all(|c| c.coefficients.dot(x) <= c.bound)
    };
    match result.status {
        LpStatus::Optimal => {
            let x = result
                .primal_point
                .as_ref()
                .ok_or("optimal without a point")?;
            let opt = result.optimum.as_ref().ok_or("optimal without a value")?;
            if !feasible(x) {
                return Err("primal point violates a constraint".into());
            }
            if &lp.objective.dot(x) != opt {
                return Err("objective at primal point differs from optimum".into());
            }
            let lambda = &result.dual_certificate;
            if lambda.len() != lp.constraints.len() || lambda.iter().any(Signed::is_negative) {
                return Err("dual multipliers missing or negative".into());
            }
            if combination(lp, lambda) != lp.objective {
                return Err("dual multipliers do not reproduce the objective".into());
            }
            if &weighted_bound(lp, lambda) != opt {
                return Err("duality gap is nonzero".into());
            }
            Ok(())
        }
        LpStatus::Infeasible => {
            let lambda = &result.dual_certificate;
            if lambda.len() != lp.constraints.len() || lambda.iter().any(Signed::is_negative) {
                return Err("Farkas multipliers missing or negative".into());
            }
            if !combination(lp, lambda).is_zero() {
                return Err("Farkas combination is not zero".into());
            }
            if !weighted_bound(lp, lambda).is_negative() {
                return Err("Farkas bound is not negative".into());
            }
            Ok(())
        }
        LpStatus::Unbounded => {
            let x = result
                .primal_point
                .as_ref()
                .ok_or("unbounded without a point")?;
            let ray = result.ray.as_ref().ok_or("unbounded without a ray")?;
            if !feasible(x) {
                return Err("unbounded point is infeasible".into());
            }
            if lp
                .constraints
                .iter()
                .any(|c| c.coefficients.dot(ray).is_positive())
            {
                return Err("ray leaves the feasible region".into());
            }
            if !lp.objective.dot(ray).is_positive() {
                return Err("ray does not improve the objective".into());
            }
            Ok(())
        }
    }
}

static VERIFIED_SOLVES: AtomicU64 = AtomicU64::new(0);

/// Solves and verifies, turning a bad certificate into an error.
pub fn solve_verified(lp: &LinearProgram) -> Result<LpResult> {
    let result = solve(lp)?;
    verify(lp, &result).map_err(Error::Verification)?;
    VERIFIED_SOLVES.fetch_add(1, Ordering::Relaxed);
    Ok(result)
}

/// Number of solves in this process whose certificates passed `verify`.
pub fn verified_solve_count() -> u64 {
    VERIFIED_SOLVES.load(Ordering::Relaxed)
}
