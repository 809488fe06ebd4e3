//! Finite-dimensional normed spaces: named l_p (p ∈ {1, 2, ∞}) or polytopal.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::{l1_norm, linf_norm, squared_l2_norm, Vector};
use crate::lp::{solve_verified, LinearProgram, LpStatus};
use crate::polytope::{sign_vectors, SymmetricPolytope};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SpaceKind {
    L1,
    L2,
    LInf,
    Polytopal(SymmetricPolytope),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NormedSpace {
    dim: usize,
    kind: SpaceKind,
}

/// An exact norm value. For l2 codomains `value` holds the squared norm and
/// `squared` is set; all comparisons then happen between squares.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NormValue {
    pub value: Rational,
    pub squared: bool,
}

impl NormValue {
    pub fn plain(value: Rational) -> Self {
        NormValue {
            value,
            squared: false,
        }
    }

    pub fn is_one(&self) -> bool {
        self.value.is_one()
    }
}

impl fmt::Display for NormValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.squared {
            write!(f, "{} (squared)", self.value)
        } else {
            write!(f, "{}", self.value)
        }
    }
}

/// Extreme points of a unit ball with finitely many of them, one
/// representative per ± pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtremeSet {
    pub representatives: Vec<Vector>,
}

impl ExtremeSet {
    pub fn pair_count(&self) -> usize {
        self.representatives.len()
    }

    pub fn all(&self) -> Vec<Vector> {
        self.representatives
            .iter()
            .flat_map(|v| [v.clone(), v.neg()])
            .collect()
    }
}

impl NormedSpace {
    pub fn l1(dim: usize) -> Self {
        NormedSpace {
            dim,
            kind: SpaceKind::L1,
        }
    }

    pub fn l2(dim: usize) -> Self {
        NormedSpace {
            dim,
            kind: SpaceKind::L2,
        }
    }

    pub fn linf(dim: usize) -> Self {
        NormedSpace {
            dim,
            kind: SpaceKind::LInf,
        }
    }

    pub fn polytopal(ball: SymmetricPolytope) -> Self {
        NormedSpace {
            dim: ball.dim(),
            kind: SpaceKind::Polytopal(ball),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> &SpaceKind {
        &self.kind
    }

    pub fn is_strictly_convex(&self) -> bool {
        matches!(self.kind, SpaceKind::L2)
    }

    /// Unit ball as a polytope, for every kind except l2.
    pub fn ball(&self) -> Option<SymmetricPolytope> {
        match &self.kind {
            SpaceKind::L1 => Some(SymmetricPolytope::cross_polytope(self.dim)),
            SpaceKind::LInf => Some(SymmetricPolytope::cube(self.dim)),
            SpaceKind::Polytopal(p) => Some(p.clone()),
            SpaceKind::L2 => None,
        }
    }

    /// True when the unit ball is a polytope (l1, l∞, or polytopal).
    pub fn is_polyhedral(&self) -> bool {
        !self.is_strictly_convex()
    }

    /// True for l1 and for polytopal spaces whose ball is the cross-polytope.
    pub fn is_l1(&self) -> bool {
        match &self.kind {
            SpaceKind::L1 => true,
            SpaceKind::Polytopal(p) => *p == SymmetricPolytope::cross_polytope(self.dim),
            _ => false,
        }
    }

    pub fn is_linf(&self) -> bool {
        match &self.kind {
            SpaceKind::LInf => true,
            SpaceKind::Polytopal(p) => *p == SymmetricPolytope::cube(self.dim),
            _ => false,
        }
    }

    fn check_dim(&self, x: &Vector) -> Result<()> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.dim(),
            });
        }
        Ok(())
    }

    pub fn norm(&self, x: &Vector) -> Result<NormValue> {
        self.check_dim(x)?;
        Ok(match &self.kind {
            SpaceKind::L1 => NormValue::plain(l1_norm(x)),
            SpaceKind::LInf => NormValue::plain(linf_norm(x)),
            SpaceKind::L2 => NormValue {
                value: squared_l2_norm(x),
                squared: true,
            },
            SpaceKind::Polytopal(p) => NormValue::plain(p.gauge(x)?),
        })
    }

    pub fn extreme_points(&self) -> Result<ExtremeSet> {
        let representatives = match &self.kind {
            SpaceKind::L2 => return Err(Error::InfiniteExtremeSet(self.to_string())),
            SpaceKind::LInf => {
                let mut reps: Vec<Vector> = sign_vectors(self.dim)
                    .into_iter()
                    .filter(|s| s[0].is_positive())
                    .collect();
                reps.sort();
                reps
            }
            _ => self.ball().expect("polyhedral").vertices().to_vec(),
        };
        Ok(ExtremeSet { representatives })
    }

    /// Membership in the extreme set of the unit ball. For l2 this is the
    /// unit sphere.
    pub fn is_extreme_point(&self, x: &Vector) -> Result<bool> {
        self.check_dim(x)?;
        Ok(match &self.kind {
            SpaceKind::L2 => squared_l2_norm(x).is_one(),
            SpaceKind::L1 => x.iter().filter(|q| !q.is_zero()).count() == 1 && l1_norm(x).is_one(),
            SpaceKind::LInf => x.iter().all(|q| q.abs().is_one()),
            SpaceKind::Polytopal(p) => p.is_vertex(x),
        })
    }

    /// The dual space: polar ball for polytopal spaces, l1 ↔ l∞, l2 ↔ l2.
    pub fn dual(&self) -> NormedSpace {
        let kind = match &self.kind {
            SpaceKind::L1 => SpaceKind::LInf,
            SpaceKind::LInf => SpaceKind::L1,
            SpaceKind::L2 => SpaceKind::L2,
            SpaceKind::Polytopal(p) => SpaceKind::Polytopal(p.polar()),
        };
        NormedSpace {
            dim: self.dim,
            kind,
        }
    }

    /// Independent route to the norm of a polytopal space: the Minkowski gauge
    /// `min Σ|λ_i|` over representations `x = Σ λ_i v_i` in the vertex
    /// representatives, solved as a linear program.
    pub fn gauge_norm_vrep(&self, x: &Vector) -> Result<Rational> {
        self.check_dim(x)?;
        let ball = self.ball().ok_or_else(|| Error::RuleNotApplicable {
            rule: "gauge_norm_vrep",
            reason: format!("{self} is not polytopal"),
        })?;
        let verts = ball.vertices();
        let k = verts.len();
        // Variables: λ_1..λ_k, u_1..u_k with u_i >= |λ_i|; maximize -Σu.
        let mut objective = vec![Rational::zero(); 2 * k];
        for c in objective.iter_mut().skip(k) {
            *c = -Rational::one();
        }
        let mut lp = LinearProgram::new(Vector::new(objective));
        for i in 0..k {
            let mut up = Vector::zeros(2 * k).into_entries();
            up[i] = Rational::one();
            up[k + i] = -Rational::one();
            lp.add_le(Vector::new(up), Rational::zero());
            let mut down = Vector::zeros(2 * k).into_entries();
            down[i] = -Rational::one();
            down[k + i] = -Rational::one();
            lp.add_le(Vector::new(down), Rational::zero());
        }
        for coord in 0..self.dim {
            let mut row = Vector::zeros(2 * k).into_entries();
            for (i, v) in verts.iter().enumerate() {
                row[i] = v[coord].clone();
            }
            lp.add_eq(Vector::new(row), x[coord].clone());
        }
        let result = solve_verified(&lp)?;
        match (result.status, result.optimum) {
            (LpStatus::Optimal, Some(opt)) => Ok(-opt),
            _ => Err(Error::Verification(
                "gauge program is always feasible and bounded".into(),
            )),
        }
    }
}

impl fmt::Display for NormedSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            SpaceKind::L1 => write!(f, "l1:{}", self.dim),
            SpaceKind::L2 => write!(f, "l2:{}", self.dim),
            SpaceKind::LInf => write!(f, "linf:{}", self.dim),
            SpaceKind::Polytopal(p) => write!(
                f,
                "polytopal:{} ({} vertex pairs)",
                self.dim,
                p.vertex_pair_count()
            ),
        }
    }
}
