use serde::Serialize;

use super::{
    assemble, find_far_endpoint, mountain_pass, multistart, MountainPassResult, Sense, SolutionSet, SolverConfig,
    SolverError, Variant,
};
use crate::energy::ProblemSpec;
use crate::hypothesis::{Theorem, TheoremReport};
use crate::sequence_space::InteriorVector;

/// What `solve_auto` runs, derived from a [`TheoremReport`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Strategy {
    pub senses: Vec<Sense>,
    pub mountain_pass: Vec<Variant>,
}

impl Strategy {
    /// Minimise under coercivity, maximise under anti-coercivity, both when
    /// the evidence picks neither (or, inconsistently, both). A mountain pass
    /// runs for each two-solutions result that applies.
    pub fn from_report(report: &TheoremReport) -> Self {
        let coercive = report.has(Theorem::ExistenceCoercive);
        let anticoercive = report.has(Theorem::ExistenceAnticoercive);
        let senses = match (coercive, anticoercive) {
            (true, false) => vec![Sense::Minimize],
            (false, true) => vec![Sense::Maximize],
            _ => vec![Sense::Minimize, Sense::Maximize],
        };
        let mut mountain_pass = Vec::new();
        if report.has(Theorem::TwoSolutionsTheorem1) {
            mountain_pass.push(Variant::InfMax);
        }
        if report.has(Theorem::TwoSolutionsTheorem2) {
            mountain_pass.push(Variant::SupMin);
        }
        Self { senses, mountain_pass }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MountainPassRun {
    pub variant: Variant,
    pub x_a: InteriorVector,
    pub x_b: InteriorVector,
    pub result: MountainPassResult,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AutoSolution {
    pub strategy: Strategy,
    pub set: SolutionSet,
    pub mountain_pass: Vec<MountainPassRun>,
}

fn run_mountain_pass(prob: &ProblemSpec, variant: Variant, cfg: &SolverConfig) -> Result<MountainPassRun, SolverError> {
    let x_a = InteriorVector::zeros(prob.interior_len()).expect("N >= 2");
    let x_b = find_far_endpoint(prob, variant, cfg)?;
    let result = mountain_pass(prob, &x_a, &x_b, variant, cfg)?;
    Ok(MountainPassRun { variant, x_a, x_b, result })
}

/// Multistart in the senses chosen by the report, plus a mountain pass from θ
/// for each applicable two-solutions result. Mountain-pass failures are
/// recorded as diagnostics rather than errors.
pub fn solve_auto(prob: &ProblemSpec, report: &TheoremReport, cfg: &SolverConfig) -> Result<AutoSolution, SolverError> {
    cfg.validate()?;
    let strategy = Strategy::from_report(report);
    let mut points = Vec::new();
    let mut diagnostics = Vec::new();
    for &sense in &strategy.senses {
        let set = multistart(prob, sense, cfg)?;
        points.extend(set.points);
        diagnostics.extend(set.diagnostics);
    }
    let mut runs = Vec::new();
    for &variant in &strategy.mountain_pass {
        match run_mountain_pass(prob, variant, cfg) {
            Ok(run) => {
                points.push(run.result.point.clone());
                runs.push(run);
            }
            Err(e) => diagnostics.push(format!("{} mountain pass: {e}", variant.name())),
        }
    }
    Ok(AutoSolution { strategy, set: assemble(prob, cfg, points, diagnostics), mountain_pass: runs })
}
