//! Enumeration of extreme contractions between small polyhedral spaces, the
//! Lindenstrauss–Perles property check, and composition closure.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::dd::symmetric_vertices;
use crate::error::{Error, Result};
use crate::extremality::{decide, perturbation_oracle, ExtremalityVerdict};
use crate::linalg::{independent_subset, inverse, rank, Matrix, Vector};
use crate::lp::{solve_verified, LinearProgram, LpStatus};
use crate::operator::LinearOperator;
use crate::rational::{int, rat, Rational};
use crate::space::{NormedSpace, SpaceKind};

/// Default cap on `m·n` for operator-ball vertex enumeration.
pub const DEFAULT_MAX_VARIABLES: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnumerationMethod {
    OperatorBallVertices,
    L1Direct,
}

impl EnumerationMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            EnumerationMethod::OperatorBallVertices => "operator_ball_vertices",
            EnumerationMethod::L1Direct => "l1_direct",
        }
    }
}

#[derive(Clone, Debug)]
pub struct ExtremeContractionSet {
    pub domain: NormedSpace,
    pub codomain: NormedSpace,
    /// Canonically ordered, closed under negation.
    pub operators: Vec<LinearOperator>,
    pub method: EnumerationMethod,
}

impl ExtremeContractionSet {
    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn matrices(&self) -> Vec<Matrix> {
        self.operators.iter().map(|t| t.matrix().clone()).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationOptions {
    pub max_variables: usize,
    /// Re-decide every enumerated operator and fail if one is not extreme.
    pub cross_validate: bool,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        EnumerationOptions {
            max_variables: DEFAULT_MAX_VARIABLES,
            cross_validate: true,
        }
    }
}

/// Orders pairs `{T, -T}` by their representative (the lexicographically
/// larger matrix), representative first.
pub fn canonical_order(a: &Matrix, b: &Matrix) -> Ordering {
    let ra = a.pair_representative();
    let rb = b.pair_representative();
    ra.lex_cmp(&rb).then_with(|| (a != &ra).cmp(&(b != &rb)))
}

fn sort_operators(ops: &mut [LinearOperator]) {
    ops.sort_by(|a, b| canonical_order(a.matrix(), b.matrix()));
}

fn unsupported(x: &NormedSpace, y: &NormedSpace) -> Error {
    Error::UnsupportedPair {
        domain: x.to_string(),
        codomain: y.to_string(),
    }
}

/// All `(2p)ⁿ` operators sending each `e_i` to an extreme point of a
/// polyhedral codomain with `p` vertex pairs.
pub fn enumerate_l1(domain: &NormedSpace, codomain: &NormedSpace) -> Result<ExtremeContractionSet> {
    if !domain.is_l1() {
        return Err(Error::RuleNotApplicable {
            rule: "enumerate_l1",
            reason: format!("domain {domain} is not l1"),
        });
    }
    if codomain.is_strictly_convex() {
        return Err(Error::InfiniteExtremeSet(format!(
            "L({domain}, {codomain}) (extreme contraction set)"
        )));
    }
    let targets = codomain.extreme_points()?.all();
    let n = domain.dim();
    let total = targets.len().pow(n as u32);
    let mut operators = Vec::with_capacity(total);
    for index in 0..total {
        let mut k = index;
        let columns: Vec<Vector> = (0..n)
            .map(|_| {
                let c = targets[k % targets.len()].clone();
                k /= targets.len();
                c
            })
            .collect();
        operators.push(LinearOperator::new(
            Matrix::from_columns(&columns)?,
            domain.clone(),
            codomain.clone(),
        )?);
    }
    sort_operators(&mut operators);
    Ok(ExtremeContractionSet {
        domain: domain.clone(),
        codomain: codomain.clone(),
        operators,
        method: EnumerationMethod::L1Direct,
    })
}

/// Facet functionals of the operator ball in row-major coordinates: `f ⊗ v`
/// for every domain extreme representative `v` and codomain facet `f`.
pub fn operator_ball_functionals(
    domain: &NormedSpace,
    codomain: &NormedSpace,
) -> Result<Vec<Vector>> {
    let (Some(_), Some(ball)) = (domain.ball(), codomain.ball()) else {
        return Err(unsupported(domain, codomain));
    };
    let extremes = domain.extreme_points()?.representatives;
    let mut out = Vec::with_capacity(extremes.len() * ball.facets().len());
    for v in &extremes {
        for f in ball.facets() {
            let mut g = Vec::with_capacity(f.dim() * v.dim());
            for fi in f.iter() {
                for vj in v.iter() {
                    g.push(fi * vj);
                }
            }
            out.push(Vector::new(g));
        }
    }
    Ok(out)
}

/// Vertices of the unit ball of `L(X, Y)` for polyhedral `X`, `Y`, by double
/// description in `m·n` variables.
pub fn enumerate_operator_ball(
    domain: &NormedSpace,
    codomain: &NormedSpace,
    options: EnumerationOptions,
) -> Result<ExtremeContractionSet> {
    if domain.is_strictly_convex() {
        return Err(Error::InfiniteExtremeSet(format!(
            "the operator ball of L({domain}, {codomain})"
        )));
    }
    let (m, n) = (codomain.dim(), domain.dim());
    if m * n > options.max_variables {
        return Err(Error::SizeCap {
            size: m * n,
            cap: options.max_variables,
        });
    }
    let functionals = operator_ball_functionals(domain, codomain)?;
    let reps = symmetric_vertices(&functionals, m * n)?;
    let mut operators = Vec::with_capacity(2 * reps.len());
    for r in reps {
        let t = LinearOperator::new(
            Matrix::from_flat(m, n, &r)?,
            domain.clone(),
            codomain.clone(),
        )?;
        operators.push(t.neg());
        operators.push(t);
    }
    sort_operators(&mut operators);
    if options.cross_validate {
        let failures: Vec<String> = operators
            .par_iter()
            .filter_map(|t| match decide(t) {
                Ok(v) if v.is_extreme() => None,
                Ok(_) => Some(format!("{t} enumerated but not extreme")),
                Err(e) => Some(format!("{t}: {e}")),
            })
            .collect();
        if let Some(first) = failures.first() {
            return Err(Error::Verification(first.clone()));
        }
    }
    Ok(ExtremeContractionSet {
        domain: domain.clone(),
        codomain: codomain.clone(),
        operators,
        method: EnumerationMethod::OperatorBallVertices,
    })
}

/// Enumerates with the direct l1 rule when it applies, otherwise by operator
/// ball vertices.
pub fn enumerate(
    domain: &NormedSpace,
    codomain: &NormedSpace,
    options: EnumerationOptions,
) -> Result<ExtremeContractionSet> {
    if domain.is_l1() {
        enumerate_l1(domain, codomain)
    } else {
        enumerate_operator_ball(domain, codomain, options)
    }
}

/// An extreme contraction that maps some extreme point outside `E_Y`.
#[derive(Clone, Debug)]
pub struct ForwardViolation {
    pub operator: LinearOperator,
    pub point: Vector,
    pub image: Vector,
}

/// A norm-one operator with `T(E_X) ⊆ E_Y` that is not extreme.
#[derive(Clone, Debug)]
pub struct BackwardViolation {
    pub operator: LinearOperator,
    pub verdict: ExtremalityVerdict,
}

#[derive(Clone, Debug)]
pub struct LpPropertyReport {
    pub domain: NormedSpace,
    pub codomain: NormedSpace,
    /// True only when both directions were checked completely and no
    /// violation was found.
    pub holds: bool,
    /// False when a direction was skipped or cut short.
    pub complete: bool,
    pub forward_violations: Vec<ForwardViolation>,
    pub backward_violations: Vec<BackwardViolation>,
    pub extreme_contractions: Option<usize>,
    pub backward_candidates: usize,
    pub notes: Vec<String>,
}

impl LpPropertyReport {
    pub fn fails(&self) -> bool {
        !self.forward_violations.is_empty() || !self.backward_violations.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LpPropertyOptions {
    pub max_variables: usize,
    /// Skip the forward direction (full vertex enumeration) and search only
    /// for backward violations.
    pub backward_only: bool,
    /// Stop at the first violation found.
    pub stop_at_first: bool,
    /// When the forward direction is skipped, probe this many operator-ball
    /// vertices found by LP with random objectives.
    pub forward_samples: usize,
    pub seed: u64,
}

impl Default for LpPropertyOptions {
    fn default() -> Self {
        LpPropertyOptions {
            max_variables: DEFAULT_MAX_VARIABLES,
            backward_only: false,
            stop_at_first: false,
            forward_samples: 0,
            seed: 0,
        }
    }
}

/// Operators fixed by choosing images in `E_Y` for the first `n` linearly
/// independent extreme representatives of `X`, extended linearly, kept when
/// every extreme point of `X` lands in `E_Y`. Only the representative of each
/// `±T` pair is returned.
pub fn backward_candidates(
    domain: &NormedSpace,
    codomain: &NormedSpace,
) -> Result<Vec<LinearOperator>> {
    let reps = domain.extreme_points()?.representatives;
    let basis_idx = independent_subset(&reps)?;
    let n = domain.dim();
    if basis_idx.len() != n {
        return Err(Error::NotFullDimensional {
            dim: n,
            rank: basis_idx.len(),
        });
    }
    let basis: Vec<Vector> = basis_idx.iter().map(|&i| reps[i].clone()).collect();
    let basis_inv = inverse(&Matrix::from_columns(&basis)?)
        .ok_or_else(|| Error::Verification("independent basis is singular".into()))?;
    let targets = codomain.extreme_points()?.all();
    let total = targets.len().pow(n as u32);
    let candidates: Vec<Option<LinearOperator>> = (0..total)
        .into_par_iter()
        .map(|index| -> Result<Option<LinearOperator>> {
            let mut k = index;
            let images: Vec<Vector> = (0..n)
                .map(|_| {
                    let c = targets[k % targets.len()].clone();
                    k /= targets.len();
                    c
                })
                .collect();
            let matrix = Matrix::from_columns(&images)?.mul(&basis_inv)?;
            if matrix.pair_representative() != matrix {
                return Ok(None);
            }
            let t = LinearOperator::new(matrix, domain.clone(), codomain.clone())?;
            Ok(match t.extreme_image_violation()? {
                None => Some(t),
                Some(_) => None,
            })
        })
        .collect::<Result<_>>()?;
    let mut out: Vec<LinearOperator> = candidates.into_iter().flatten().collect();
    sort_operators(&mut out);
    Ok(out)
}

/// Vertices of the operator ball reached by maximizing random integer
/// objectives; each is confirmed extreme by the perturbation oracle.
pub fn sample_operator_ball_vertices(
    domain: &NormedSpace,
    codomain: &NormedSpace,
    samples: usize,
    seed: u64,
) -> Result<Vec<LinearOperator>> {
    let (m, n) = (codomain.dim(), domain.dim());
    let functionals = operator_ball_functionals(domain, codomain)?;
    let mut base = LinearProgram::new(Vector::zeros(m * n));
    for g in &functionals {
        base.add_le(g.clone(), Rational::one());
        base.add_le(g.neg(), Rational::one());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let objectives: Vec<Vector> = (0..samples)
        .map(|_| Vector::new((0..m * n).map(|_| int(rng.gen_range(-20..=20))).collect()))
        .collect();
    let found: Vec<Option<LinearOperator>> = objectives
        .into_par_iter()
        .map(|objective| -> Result<Option<LinearOperator>> {
            let mut lp = base.clone();
            lp.objective = objective;
            let r = solve_verified(&lp)?;
            let (LpStatus::Optimal, Some(x)) = (r.status, r.primal_point) else {
                return Err(Error::Verification("operator ball LP not optimal".into()));
            };
            let tight: Vec<Vector> = functionals
                .iter()
                .filter(|g| g.dot(&x).abs().is_one())
                .cloned()
                .collect();
            if rank(&tight)? < m * n {
                return Ok(None);
            }
            let t = LinearOperator::new(
                Matrix::from_flat(m, n, &x)?,
                domain.clone(),
                codomain.clone(),
            )?;
            Ok(Some(t))
        })
        .collect::<Result<_>>()?;
    let mut ops: Vec<LinearOperator> = found.into_iter().flatten().collect();
    sort_operators(&mut ops);
    ops.dedup_by(|a, b| a.matrix() == b.matrix());
    for t in &ops {
        if !perturbation_oracle(t)?.is_extreme() {
            return Err(Error::Verification(format!(
                "sampled vertex {t} is not extreme"
            )));
        }
    }
    Ok(ops)
}

/// Rational point on the unit sphere of l2ⁿ not parallel to a coordinate axis.
fn off_axis_unit_vector(n: usize) -> Vector {
    let mut x = Vector::zeros(n).into_entries();
    x[0] = rat(3, 5);
    x[1] = rat(4, 5);
    Vector::new(x)
}

fn strictly_convex_domain_report(
    domain: &NormedSpace,
    codomain: &NormedSpace,
) -> Result<LpPropertyReport> {
    let n = domain.dim();
    if !codomain.is_linf() || n < 2 {
        return Err(unsupported(domain, codomain));
    }
    // Every row equal to e_1: unit rows, so extreme, yet not injective.
    let m = codomain.dim();
    let rows: Vec<Vector> = (0..m).map(|_| Vector::unit(n, 0)).collect();
    let t = LinearOperator::new(Matrix::from_rows(&rows)?, domain.clone(), codomain.clone())?;
    let verdict = decide(&t)?;
    if !verdict.is_extreme() {
        return Err(Error::Verification(format!("{t} expected extreme")));
    }
    let point = off_axis_unit_vector(n);
    let image = t.apply(&point)?;
    if codomain.is_extreme_point(&image)? || !domain.is_extreme_point(&point)? {
        return Err(Error::Verification(
            "strictly convex witness did not verify".into(),
        ));
    }
    Ok(LpPropertyReport {
        domain: domain.clone(),
        codomain: codomain.clone(),
        holds: false,
        complete: true,
        forward_violations: vec![ForwardViolation {
            operator: t,
            point,
            image,
        }],
        backward_violations: Vec::new(),
        extreme_contractions: None,
        backward_candidates: 0,
        notes: vec![
            "domain is strictly convex: every unit vector is extreme, but the codomain ball has finitely many extreme points".into(),
        ],
    })
}

/// Checks whether norm-one operators `X → Y` are extreme exactly when they
/// send `E_X` into `E_Y`.
pub fn check_lp_property(
    domain: &NormedSpace,
    codomain: &NormedSpace,
    options: LpPropertyOptions,
) -> Result<LpPropertyReport> {
    if matches!(domain.kind(), SpaceKind::L2) {
        return strictly_convex_domain_report(domain, codomain);
    }
    if !codomain.is_polyhedral() {
        return Err(unsupported(domain, codomain));
    }
    let mut notes = Vec::new();
    let mut forward_violations = Vec::new();
    let mut extreme_contractions = None;
    let mut complete = true;

    if options.backward_only {
        complete = false;
        notes.push("forward direction skipped".into());
        if options.forward_samples > 0 {
            let sampled = sample_operator_ball_vertices(
                domain,
                codomain,
                options.forward_samples,
                options.seed,
            )?;
            notes.push(format!(
                "forward direction probed on {} distinct sampled vertices",
                sampled.len()
            ));
            for t in sampled {
                if let Some((point, image)) = t.extreme_image_violation()? {
                    forward_violations.push(ForwardViolation {
                        operator: t,
                        point,
                        image,
                    });
                    if options.stop_at_first {
                        break;
                    }
                }
            }
        }
    } else {
        let set = enumerate(
            domain,
            codomain,
            EnumerationOptions {
                max_variables: options.max_variables,
                cross_validate: false,
            },
        )?;
        extreme_contractions = Some(set.len());
        notes.push(format!(
            "forward direction over {} extreme contractions ({})",
            set.len(),
            set.method.as_str()
        ));
        for t in set.operators {
            if let Some((point, image)) = t.extreme_image_violation()? {
                forward_violations.push(ForwardViolation {
                    operator: t,
                    point,
                    image,
                });
                if options.stop_at_first {
                    complete = false;
                    break;
                }
            }
        }
    }

    let mut backward_violations = Vec::new();
    let candidates = backward_candidates(domain, codomain)?;
    let backward_candidates = candidates.len();
    let decided = |t: &LinearOperator| -> Result<Option<BackwardViolation>> {
        let verdict = decide(t)?;
        Ok((!verdict.is_extreme()).then(|| BackwardViolation {
            operator: t.clone(),
            verdict,
        }))
    };
    if options.stop_at_first && !forward_violations.is_empty() {
        complete = false;
    } else if options.stop_at_first {
        if let Some(found) = candidates
            .par_iter()
            .map(decided)
            .find_map_first(|r| r.transpose())
        {
            backward_violations.push(found?);
            complete = false;
        }
    } else {
        let results: Vec<Option<BackwardViolation>> =
            candidates.par_iter().map(decided).collect::<Result<_>>()?;
        backward_violations.extend(results.into_iter().flatten());
    }
    notes.push(format!(
        "backward direction over {backward_candidates} candidate pairs ±T"
    ));

    let holds = complete && forward_violations.is_empty() && backward_violations.is_empty();
    Ok(LpPropertyReport {
        domain: domain.clone(),
        codomain: codomain.clone(),
        holds,
        complete,
        forward_violations,
        backward_violations,
        extreme_contractions,
        backward_candidates,
        notes,
    })
}

#[derive(Clone, Debug)]
pub struct CompositionFailure {
    pub outer: usize,
    pub inner: usize,
    pub reason: String,
}

#[derive(Clone, Debug)]
pub struct ClosureReport {
    pub pairs_tested: usize,
    pub failures: Vec<CompositionFailure>,
    /// Every member maps extreme points to extreme points.
    pub maps_extremes_to_extremes: bool,
}

impl ClosureReport {
    pub fn closed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Closure under composition and preservation of extreme points are
    /// equivalent for a complete set on a finite-dimensional space.
    pub fn consistent(&self) -> bool {
        self.closed() == self.maps_extremes_to_extremes
    }
}

/// Decides every ordered composition `T_i ∘ T_j` of a complete extreme
/// contraction set on a single space.
pub fn composition_closure(set: &ExtremeContractionSet) -> Result<ClosureReport> {
    if set.domain != set.codomain {
        return Err(Error::Precondition(format!(
            "composition closure needs X = Y, got {} and {}",
            set.domain, set.codomain
        )));
    }
    let k = set.operators.len();
    let failures: Vec<Option<CompositionFailure>> = (0..k * k)
        .into_par_iter()
        .map(|idx| -> Result<Option<CompositionFailure>> {
            let (outer, inner) = (idx / k, idx % k);
            let c = set.operators[outer].compose(&set.operators[inner])?;
            let reason = match decide(&c) {
                Ok(v) if v.is_extreme() => return Ok(None),
                Ok(_) => "composition is not extreme".to_string(),
                Err(e @ Error::NotContractionBoundary { .. }) => e.to_string(),
                Err(e) => return Err(e),
            };
            Ok(Some(CompositionFailure {
                outer,
                inner,
                reason,
            }))
        })
        .collect::<Result<_>>()?;
    let mut maps_extremes_to_extremes = true;
    for t in &set.operators {
        if t.extreme_image_violation()?.is_some() {
            maps_extremes_to_extremes = false;
            break;
        }
    }
    Ok(ClosureReport {
        pairs_tested: k * k,
        failures: failures.into_iter().flatten().collect(),
        maps_extremes_to_extremes,
    })
}

impl fmt::Display for ExtremeContractionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} extreme contractions in L({}, {}) via {}",
            self.operators.len(),
            self.domain,
            self.codomain,
            self.method.as_str()
        )
    }
}
