//! Deciding whether a norm-one operator is an extreme point of the unit ball
//! of `L(X, Y)`.
//!
//! Four procedures are available:
//!
//! * [`l1_rule`]: domain l1ⁿ. Extreme iff every `±e_i` attains the norm and
//!   every column `T e_i` is an extreme point of the codomain ball.
//! * [`rank_test`]: polyhedral domain, l2 codomain. Extreme iff the extreme
//!   points where the norm is attained span the domain.
//! * [`unit_row_rule`]: l2 → l∞. Extreme iff every row has Euclidean norm 1,
//!   decided through the l1 rule on the adjoint.
//! * [`perturbation_oracle`]: both spaces polyhedral. Extreme iff the
//!   polytope `{D : ‖T + D‖ <= 1, ‖T − D‖ <= 1}` is `{0}`, decided by
//!   maximizing each entry of `D` with the exact LP solver.
//!
//! Every `NotExtreme` verdict carries a nonzero witness `D` that has been
//! re-checked with `op_norm`, so `T` is the midpoint of the distinct
//! contractions `T + D` and `T − D`.

use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};

use num_traits::{One, Signed};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{null_space, Matrix, Vector};
use crate::lp::{solve_verified, LinearProgram, LpStatus};
use crate::operator::{LinearOperator, NormAttainment};
use crate::polytope::SymmetricPolytope;
use crate::rational::{int, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Decision {
    Extreme,
    NotExtreme,
}

impl Decision {
    pub fn as_str(self) -> &'static str {
        match self {
            Decision::Extreme => "extreme",
            Decision::NotExtreme => "not_extreme",
        }
    }
}

impl fmt::Display for Decision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    RankTest,
    L1Rule,
    UnitRowRule,
    PerturbationOracle,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::RankTest => "rank_test",
            Method::L1Rule => "l1_rule",
            Method::UnitRowRule => "unit_row_rule",
            Method::PerturbationOracle => "perturbation_oracle",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtremalityVerdict {
    pub decision: Decision,
    pub method: Method,
    /// Nonzero `D` with `‖T ± D‖ <= 1`, present exactly when not extreme.
    pub witness: Option<Matrix>,
    pub evidence: NormAttainment,
    /// Further methods that ran and agreed.
    pub cross_checked: Vec<Method>,
    /// Coordinate LPs solved by the perturbation oracle; all `2mn` of them
    /// for an extreme verdict.
    pub oracle_lps: usize,
}

impl ExtremalityVerdict {
    pub fn is_extreme(&self) -> bool {
        self.decision == Decision::Extreme
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DecideOptions {
    /// Run every applicable method and fail on disagreement. Otherwise only
    /// the most specific method runs.
    pub cross_check: bool,
}

/// Attainment data after checking `‖T‖ = 1` exactly.
pub fn require_norm_one(t: &LinearOperator) -> Result<NormAttainment> {
    let evidence = t.attainment()?;
    let norm = &evidence.operator_norm;
    if !norm.is_one() {
        return Err(Error::NotContractionBoundary {
            norm: norm.value.to_string(),
            squared: norm.squared,
            above: norm.value > Rational::one(),
        });
    }
    Ok(evidence)
}

/// Checks that `d` is nonzero and `‖T ± D‖ <= 1`.
pub fn verify_witness(t: &LinearOperator, d: &Matrix) -> Result<()> {
    if d.is_zero() {
        return Err(Error::Verification("witness perturbation is zero".into()));
    }
    for candidate in [t.matrix().add(d), t.matrix().sub(d)] {
        let n = t.with_matrix(candidate)?.op_norm()?;
        if n.value > Rational::one() {
            return Err(Error::Verification(format!(
                "witness perturbation {d} leaves the unit ball (norm {n})"
            )));
        }
    }
    Ok(())
}

fn not_applicable(rule: &'static str, t: &LinearOperator, what: &str) -> Error {
    Error::RuleNotApplicable {
        rule,
        reason: format!("{what}; got {} -> {}", t.domain(), t.codomain()),
    }
}

fn verdict(
    t: &LinearOperator,
    method: Method,
    evidence: NormAttainment,
    witness: Option<Matrix>,
    oracle_lps: usize,
) -> Result<ExtremalityVerdict> {
    if let Some(d) = &witness {
        verify_witness(t, d)?;
    }
    Ok(ExtremalityVerdict {
        decision: if witness.is_some() {
            Decision::NotExtreme
        } else {
            Decision::Extreme
        },
        method,
        witness,
        evidence,
        cross_checked: Vec::new(),
        oracle_lps,
    })
}

/// Linear system `|center_k ± g_k · z| <= 1` for every row `(g_k, center_k)`,
/// the set of two-sided perturbations `z` that stay inside a polytope ball.
///
/// The four inequalities per row reduce to `|g_k · z| <= 1 − |center_k|`,
/// which is what gets emitted.
fn perturbation_program(rows: &[(Vector, Rational)], vars: usize) -> LinearProgram {
    let mut lp = LinearProgram::new(Vector::zeros(vars));
    for (g, center) in rows {
        if g.is_zero() {
            continue;
        }
        let slack = Rational::one() - center.abs();
        lp.add_le(g.clone(), slack.clone());
        lp.add_le(g.neg(), slack);
    }
    lp
}

/// Maximizes `±z_k` for each coordinate over the perturbation system. Returns
/// the first nonzero maximizer in coordinate order and the number of LPs run.
fn nonzero_perturbation(lp: &LinearProgram) -> Result<(Option<Vector>, usize)> {
    let vars = lp.num_vars;
    let solved = AtomicUsize::new(0);
    let found = (0..2 * vars)
        .into_par_iter()
        .map(|task| -> Result<Option<Vector>> {
            let mut program = lp.clone();
            let mut objective = Vector::zeros(vars).into_entries();
            objective[task / 2] = if task % 2 == 0 { int(1) } else { int(-1) };
            program.objective = Vector::new(objective);
            let result = solve_verified(&program)?;
            solved.fetch_add(1, AtomicOrdering::Relaxed);
            match (result.status, result.optimum) {
                (LpStatus::Optimal, Some(opt)) if opt.is_positive() => Ok(result.primal_point),
                (LpStatus::Optimal, Some(_)) => Ok(None),
                (status, _) => Err(Error::Verification(format!(
                    "perturbation program is a bounded nonempty polytope, solver reported {status:?}"
                ))),
            }
        })
        .find_map_first(|r| match r {
            Ok(None) => None,
            other => Some(other),
        });
    let solved = solved.into_inner();
    match found {
        Some(Ok(point)) => Ok((point, solved)),
        Some(Err(e)) => Err(e),
        None => Ok((None, solved)),
    }
}

/// Nonzero `d` with `y ± d` inside the ball, when `y` is not a vertex.
fn segment_direction(ball: &SymmetricPolytope, y: &Vector) -> Result<Option<Vector>> {
    let rows: Vec<(Vector, Rational)> = ball
        .facets()
        .iter()
        .map(|f| (f.clone(), f.dot(y)))
        .collect();
    Ok(nonzero_perturbation(&perturbation_program(&rows, ball.dim()))?.0)
}

fn column_witness(t: &LinearOperator, col: usize, direction: &Vector) -> Matrix {
    let mut d = Matrix::zeros(t.matrix().rows(), t.matrix().cols());
    for (r, q) in direction.iter().enumerate() {
        d.set(r, col, q.clone());
    }
    d
}

/// Extremality for l1ⁿ domains.
pub fn l1_rule(t: &LinearOperator) -> Result<ExtremalityVerdict> {
    if !t.domain().is_l1() {
        return Err(not_applicable("l1_rule", t, "domain must be l1"));
    }
    let evidence = require_norm_one(t)?;
    let codomain = t.codomain();
    for col in 0..t.domain().dim() {
        let image = t.matrix().column(col);
        let n = codomain.norm(&image)?;
        if n.value < Rational::one() {
            // Room to move the column in any unit direction.
            let (unit, room) = if n.squared {
                (
                    Vector::unit(codomain.dim(), 0),
                    (Rational::one() - &n.value) / int(2),
                )
            } else {
                let ball = codomain.ball().expect("polyhedral codomain");
                (ball.vertices()[0].clone(), Rational::one() - &n.value)
            };
            let d = column_witness(t, col, &unit.scale(&room));
            return verdict(t, Method::L1Rule, evidence, Some(d), 0);
        }
        if !codomain.is_extreme_point(&image)? {
            let ball = codomain
                .ball()
                .ok_or_else(|| Error::Verification("unit-norm l2 point not extreme".into()))?;
            let dir = segment_direction(&ball, &image)?.ok_or_else(|| {
                Error::Verification(format!("non-vertex {image} admits no segment"))
            })?;
            let d = column_witness(t, col, &dir);
            return verdict(t, Method::L1Rule, evidence, Some(d), 0);
        }
    }
    verdict(t, Method::L1Rule, evidence, None, 0)
}

/// Extremality for polyhedral domains into l2.
pub fn rank_test(t: &LinearOperator) -> Result<ExtremalityVerdict> {
    if !t.domain().is_polyhedral() || !t.codomain().is_strictly_convex() {
        return Err(not_applicable(
            "rank_test",
            t,
            "needs a polyhedral domain and an l2 codomain",
        ));
    }
    let evidence = require_norm_one(t)?;
    let n = t.domain().dim();
    if evidence.span_rank == n {
        return verdict(t, Method::RankTest, evidence, None, 0);
    }
    // A functional vanishing on the attaining points; D = ε w φᵀ leaves the
    // attaining images fixed and moves the others by at most ε|φ(v)|.
    let phi = null_space(&evidence.attaining, n)?
        .into_iter()
        .next()
        .ok_or_else(|| Error::Verification("rank deficit without a null vector".into()))?;
    let w = Vector::unit(t.codomain().dim(), 0);
    let extremes = t.domain().extreme_points()?.representatives;
    let mut eps = Rational::one();
    let fits = |eps: &Rational| -> Result<bool> {
        for v in &extremes {
            let image = t.apply(v)?;
            let shift = w.scale(&(eps * phi.dot(v)));
            for moved in [image.add(&shift), image.sub(&shift)] {
                if t.codomain().norm(&moved)?.value > Rational::one() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    };
    while !fits(&eps)? {
        eps /= int(2);
    }
    let d = Matrix::from_columns(
        &(0..n)
            .map(|j| w.scale(&(&eps * &phi[j])))
            .collect::<Vec<_>>(),
    )?;
    verdict(t, Method::RankTest, evidence, Some(d), 0)
}

/// Extremality for l2ⁿ → l∞ᵐ via the adjoint l1ᵐ → l2ⁿ.
pub fn unit_row_rule(t: &LinearOperator) -> Result<ExtremalityVerdict> {
    if !t.is_l2_to_linf() {
        return Err(not_applicable("unit_row_rule", t, "needs l2 -> linf"));
    }
    let evidence = require_norm_one(t)?;
    let dual = l1_rule(&t.adjoint())?;
    let witness = dual.witness.map(|d| d.transpose());
    verdict(t, Method::UnitRowRule, evidence, witness, 0)
}

/// Extremality between polyhedral spaces by exact LPs over the perturbation
/// polytope.
pub fn perturbation_oracle(t: &LinearOperator) -> Result<ExtremalityVerdict> {
    if !t.domain().is_polyhedral() || !t.codomain().is_polyhedral() {
        return Err(not_applicable(
            "perturbation_oracle",
            t,
            "needs polyhedral domain and codomain",
        ));
    }
    let evidence = require_norm_one(t)?;
    let (m, n) = (t.matrix().rows(), t.matrix().cols());
    let extremes = t.domain().extreme_points()?.representatives;
    let facets = t.codomain().ball().expect("polyhedral").facets().to_vec();
    let mut rows = Vec::with_capacity(extremes.len() * facets.len());
    for v in &extremes {
        let image = t.apply(v)?;
        for f in &facets {
            let mut g = Vec::with_capacity(m * n);
            for fi in f.iter() {
                for vj in v.iter() {
                    g.push(fi * vj);
                }
            }
            rows.push((Vector::new(g), f.dot(&image)));
        }
    }
    let lp = perturbation_program(&rows, m * n);
    let (point, lps) = nonzero_perturbation(&lp)?;
    let witness = point.map(|p| Matrix::from_flat(m, n, &p)).transpose()?;
    verdict(t, Method::PerturbationOracle, evidence, witness, lps)
}

fn applicable_methods(t: &LinearOperator) -> Vec<Method> {
    let d = t.domain();
    let c = t.codomain();
    let mut methods = Vec::new();
    if d.is_l1() {
        methods.push(Method::L1Rule);
    }
    if d.is_polyhedral() && c.is_strictly_convex() {
        methods.push(Method::RankTest);
    }
    if t.is_l2_to_linf() {
        methods.push(Method::UnitRowRule);
    }
    if d.is_polyhedral() && c.is_polyhedral() {
        methods.push(Method::PerturbationOracle);
    }
    methods
}

pub fn run_method(t: &LinearOperator, method: Method) -> Result<ExtremalityVerdict> {
    match method {
        Method::L1Rule => l1_rule(t),
        Method::RankTest => rank_test(t),
        Method::UnitRowRule => unit_row_rule(t),
        Method::PerturbationOracle => perturbation_oracle(t),
    }
}

/// Decides extremality with the most specific applicable method, optionally
/// running every other applicable method as a cross-check.
pub fn decide_with(t: &LinearOperator, options: DecideOptions) -> Result<ExtremalityVerdict> {
    let methods = applicable_methods(t);
    let Some(&primary) = methods.first() else {
        return Err(Error::UnsupportedPair {
            domain: t.domain().to_string(),
            codomain: t.codomain().to_string(),
        });
    };
    let mut result = run_method(t, primary)?;
    if options.cross_check {
        for &other in &methods[1..] {
            let check = run_method(t, other)?;
            if check.decision != result.decision {
                return Err(Error::RuleDisagreement {
                    operator: t.to_string(),
                    first: primary.as_str(),
                    first_decision: result.decision.as_str(),
                    second: other.as_str(),
                    second_decision: check.decision.as_str(),
                });
            }
            result.oracle_lps += check.oracle_lps;
            result.cross_checked.push(other);
        }
    }
    Ok(result)
}

pub fn decide(t: &LinearOperator) -> Result<ExtremalityVerdict> {
    decide_with(t, DecideOptions::default())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AuditStatus {
    Passed,
    Failed,
    NotApplicable,
    /// The attaining set is larger than `2n` points, which the second clause
    /// does not address.
    NotCovered,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditCheck {
    pub name: &'static str,
    pub status: AuditStatus,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AuditReport {
    pub checks: Vec<AuditCheck>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != AuditStatus::Failed)
    }
}

/// Audits the necessary conditions satisfied by every extreme contraction
/// with a polyhedral domain of dimension `n`:
///
/// 1. the attaining extreme points span the domain;
/// 2. when exactly `n` pairs attain the norm, their images are extreme points
///    of the codomain ball.
pub fn audit_attainment(t: &LinearOperator, verdict: &ExtremalityVerdict) -> Result<AuditReport> {
    if !verdict.is_extreme() {
        return Err(Error::Precondition(
            "audit runs only on extreme verdicts".into(),
        ));
    }
    if !t.domain().is_polyhedral() {
        return Ok(AuditReport {
            checks: vec![AuditCheck {
                name: "span",
                status: AuditStatus::NotApplicable,
                detail: format!("domain {} is not polyhedral", t.domain()),
            }],
        });
    }
    let n = t.domain().dim();
    let att = t.attainment()?;
    let mut checks = vec![AuditCheck {
        name: "span",
        status: if att.span_rank == n {
            AuditStatus::Passed
        } else {
            AuditStatus::Failed
        },
        detail: format!("span rank {} of dimension {n}", att.span_rank),
    }];
    let images = if att.attaining.len() == n {
        let mut bad = Vec::new();
        for v in &att.attaining {
            let image = t.apply(v)?;
            if !t.codomain().is_extreme_point(&image)? {
                bad.push(format!("{v} -> {image}"));
            }
        }
        AuditCheck {
            name: "extreme_images",
            status: if bad.is_empty() {
                AuditStatus::Passed
            } else {
                AuditStatus::Failed
            },
            detail: if bad.is_empty() {
                format!("all {n} attaining pairs map to extreme points")
            } else {
                format!("non-extreme images: {}", bad.join(", "))
            },
        }
    } else {
        AuditCheck {
            name: "extreme_images",
            status: AuditStatus::NotCovered,
            detail: format!("{} attaining pairs, more than {n}", att.attaining.len()),
        }
    };
    checks.push(images);
    Ok(AuditReport { checks })
}
