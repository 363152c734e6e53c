//! Critical-point search for J: direct descent and ascent, Newton refinement,
//! the numerical mountain pass, and a dense-grid Newton census.

mod descent;
mod mountain_pass;
mod multistart;
mod oracle;
mod pipeline;

use serde::Serialize;
use thiserror::Error;

use crate::difference::symmetric_eigenvalues;
use crate::energy::{energy_at, gradient_at, hessian_at, residual_at, EnergyError, ProblemSpec};
use crate::sequence_space::{norm_2, norm_inf, InteriorVector};

pub use descent::{local_descent, refine};
pub use mountain_pass::{find_far_endpoint, mountain_pass, MountainPassResult, MountainPassTrace, Variant};
pub use multistart::{multistart, start_points};
pub use oracle::{grid_census, grid_step, ORACLE_MAX_DIM, ORACLE_NODE_BUDGET, ORACLE_STEP};
pub use pipeline::{solve_auto, AutoSolution, MountainPassRun, Strategy};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SolverConfig {
    pub tol_grad: f64,
    pub max_iter: usize,
    pub starts: usize,
    pub box_radius: f64,
    pub seed: u64,
    pub path_points: usize,
    pub mp_step: f64,
    pub dedup_tol: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tol_grad: 1e-10,
            max_iter: 10_000,
            starts: 200,
            box_radius: 10.0,
            seed: 42,
            path_points: 41,
            mp_step: 0.1,
            dedup_tol: 1e-6,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), SolverError> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(SolverError::InvalidConfig(format!("{name} must be a positive finite number, got {v}")))
            }
        };
        positive("tol_grad", self.tol_grad)?;
        positive("box_radius", self.box_radius)?;
        positive("mp_step", self.mp_step)?;
        positive("dedup_tol", self.dedup_tol)?;
        if self.max_iter == 0 || self.starts == 0 {
            return Err(SolverError::InvalidConfig("max_iter and starts must be positive".into()));
        }
        if self.path_points < 3 {
            return Err(SolverError::InvalidConfig(format!("path_points must be at least 3, got {}", self.path_points)));
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolverError {
    #[error(transparent)]
    Energy(#[from] EnergyError),
    #[error("no convergence after {iterations} iterations; best gradient norm {grad_norm_inf:e}")]
    NonConvergence { iterations: usize, grad_norm_inf: f64, best: Vec<f64> },
    #[error("iterate norm {norm:e} left the divergence radius; the chosen sense fights the growth of J")]
    Divergence { norm: f64 },
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
    #[error("mountain pass: path maximum {path_max} does not exceed the endpoint level {endpoint_max}")]
    EndpointCondition { path_max: f64, endpoint_max: f64 },
    #[error("mountain pass stagnated at level {value} after {sweeps} sweeps")]
    Stagnation { sweeps: usize, value: f64 },
    #[error("no far endpoint found below J(θ) - 1 along {tried} directions")]
    NoFarEndpoint { tried: usize },
    #[error("grid census is limited to N <= {max}, got N = {got}")]
    OracleDimension { max: usize, got: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Minimize,
    Maximize,
}

impl Sense {
    pub fn name(self) -> &'static str {
        match self {
            Sense::Minimize => "minimize",
            Sense::Maximize => "maximize",
        }
    }

    /// `+1` for minimisation, `-1` for maximisation.
    pub fn sign(self) -> f64 {
        match self {
            Sense::Minimize => 1.0,
            Sense::Maximize => -1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Minimum,
    Maximum,
    Saddle,
    Degenerate,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Minimum => "minimum",
            Kind::Maximum => "maximum",
            Kind::Saddle => "saddle",
            Kind::Degenerate => "degenerate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Origin {
    Descent,
    Ascent,
    MountainPass,
    Newton,
    Oracle,
}

impl Origin {
    pub fn name(self) -> &'static str {
        match self {
            Origin::Descent => "descent",
            Origin::Ascent => "ascent",
            Origin::MountainPass => "mountain-pass",
            Origin::Newton => "newton",
            Origin::Oracle => "oracle",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[allow(non_snake_case)]
pub struct CriticalPoint {
    pub x: InteriorVector,
    pub J: f64,
    pub grad_norm_inf: f64,
    pub residual_norm_inf: f64,
    pub kind: Kind,
    pub origin: Origin,
    /// The Hessian behind `kind` is only almost-everywhere valid.
    pub approximate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolutionSet {
    pub fingerprint: Option<String>,
    pub points: Vec<CriticalPoint>,
    pub diagnostics: Vec<String>,
}

/// Eigenvalues with magnitude below this count as zero.
pub const EIGEN_TOL: f64 = 1e-8;

/// Hessian inertia: minimum, maximum, saddle, or degenerate when some
/// eigenvalue is within [`EIGEN_TOL`] of zero.
pub fn classify(prob: &ProblemSpec, x: &InteriorVector) -> Result<Kind, SolverError> {
    classify_at(prob, x.as_slice())
}

pub(crate) fn classify_at(prob: &ProblemSpec, x: &[f64]) -> Result<Kind, SolverError> {
    let h = hessian_at(prob, x)?;
    let eig = symmetric_eigenvalues(&h).map_err(EnergyError::from)?;
    Ok(kind_from_eigenvalues(&eig))
}

fn kind_from_eigenvalues(eig: &[f64]) -> Kind {
    if eig.iter().any(|v| v.abs() < EIGEN_TOL) {
        Kind::Degenerate
    } else if eig.iter().all(|&v| v > 0.0) {
        Kind::Minimum
    } else if eig.iter().all(|&v| v < 0.0) {
        Kind::Maximum
    } else {
        Kind::Saddle
    }
}

/// Evaluates J, gradient, residual and Hessian inertia at `x`.
pub fn evaluate_point(prob: &ProblemSpec, x: Vec<f64>, origin: Origin) -> Result<CriticalPoint, SolverError> {
    let x = InteriorVector::new(x).map_err(|_| EnergyError::NonFinite("point"))?;
    let j = energy_at(prob, x.as_slice())?;
    let g = gradient_at(prob, x.as_slice())?;
    let r = residual_at(prob, &x)?;
    let kind = classify_at(prob, x.as_slice())?;
    Ok(CriticalPoint {
        J: j,
        grad_norm_inf: norm_inf(&g),
        residual_norm_inf: norm_inf(&r),
        kind,
        origin,
        approximate: prob.f().is_kinked(),
        x,
    })
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    let d: Vec<f64> = a.iter().zip(b).map(|(p, q)| p - q).collect();
    norm_2(&d)
}

fn lex(a: &[f64], b: &[f64]) -> std::cmp::Ordering {
    for (p, q) in a.iter().zip(b) {
        match p.total_cmp(q) {
            std::cmp::Ordering::Equal => continue,
            other => return other,
        }
    }
    a.len().cmp(&b.len())
}

/// Greedy clustering: candidates are visited by increasing gradient norm
/// (ties by lexicographic x) and kept unless `same` matches a kept point.
/// The survivors are sorted by J, ties by lexicographic x.
pub fn dedup_by(
    mut points: Vec<CriticalPoint>,
    same: impl Fn(&CriticalPoint, &CriticalPoint) -> bool,
) -> Vec<CriticalPoint> {
    points.sort_by(|a, b| {
        a.grad_norm_inf.total_cmp(&b.grad_norm_inf).then_with(|| lex(a.x.as_slice(), b.x.as_slice()))
    });
    let mut kept: Vec<CriticalPoint> = Vec::new();
    for p in points {
        if !kept.iter().any(|k| same(k, &p)) {
            kept.push(p);
        }
    }
    kept.sort_by(|a, b| a.J.total_cmp(&b.J).then_with(|| lex(a.x.as_slice(), b.x.as_slice())));
    kept
}

/// Merges points within 2-norm distance `tol`.
pub fn dedup(points: Vec<CriticalPoint>, tol: f64) -> SolutionSet {
    SolutionSet {
        fingerprint: None,
        points: dedup_by(points, |a, b| distance(a.x.as_slice(), b.x.as_slice()) <= tol),
        diagnostics: Vec::new(),
    }
}

/// Relative radius within which a nearly singular point may absorb neighbours.
pub const DEGENERATE_MERGE_RADIUS: f64 = 1e-3;
/// Smallest Hessian eigenvalue magnitude, relative to `1 + max |H_ij|`, below
/// which a point counts as nearly singular for merging.
const NEAR_SINGULAR: f64 = 1e-4;

fn nearly_singular(prob: &ProblemSpec, x: &[f64]) -> bool {
    let Ok(h) = hessian_at(prob, x) else { return false };
    let scale = 1.0 + h.amax();
    symmetric_eigenvalues(&h).is_ok_and(|eig| eig.iter().any(|v| v.abs() <= NEAR_SINGULAR * scale))
}

/// Identity test used when assembling solver output. Besides plain proximity,
/// two nearby points at the same level are the same when one of them is
/// nearly singular: a flat critical point is only located to roughly the cube
/// root of machine precision, and Newton runs scatter along its valley.
pub(crate) fn same_point(prob: &ProblemSpec, cfg: &SolverConfig, a: &CriticalPoint, b: &CriticalPoint) -> bool {
    let (xa, xb) = (a.x.as_slice(), b.x.as_slice());
    let d = distance(xa, xb);
    if d <= cfg.dedup_tol {
        return true;
    }
    let scale = 1.0 + norm_2(xa).max(norm_2(xb));
    if d > DEGENERATE_MERGE_RADIUS * scale {
        return false;
    }
    if (a.J - b.J).abs() > 1e-10 * (1.0 + a.J.abs().max(b.J.abs())) {
        return false;
    }
    a.kind == Kind::Degenerate || b.kind == Kind::Degenerate || nearly_singular(prob, xa) || nearly_singular(prob, xb)
}

/// Deduplicates with [`same_point`] and stamps the problem fingerprint.
pub(crate) fn assemble(
    prob: &ProblemSpec,
    cfg: &SolverConfig,
    points: Vec<CriticalPoint>,
    diagnostics: Vec<String>,
) -> SolutionSet {
    SolutionSet {
        fingerprint: Some(prob.fingerprint()),
        points: dedup_by(points, |a, b| same_point(prob, cfg, a, b)),
        diagnostics,
    }
}
