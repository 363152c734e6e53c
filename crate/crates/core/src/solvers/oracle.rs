//! Dense-grid Newton census: Newton from every node of a uniform grid over
//! the box. Slow and exhaustive; serves as the reference for small N.

use rayon::prelude::*;

use super::descent::newton_refine;
use super::{assemble, evaluate_point, Origin, SolutionSet, SolverConfig, SolverError};
use crate::energy::ProblemSpec;

pub const ORACLE_STEP: f64 = 0.05;
pub const ORACLE_MAX_DIM: usize = 4;
/// Largest number of grid nodes; beyond it the step is coarsened.
pub const ORACLE_NODE_BUDGET: usize = 250_000;
const NEWTON_BUDGET: usize = 200;

/// Grid step for a census of dimension `len`: `ORACLE_STEP`, coarsened if
/// needed so that the node count stays within `ORACLE_NODE_BUDGET`.
pub fn grid_step(len: usize, box_radius: f64) -> f64 {
    let per_axis = (ORACLE_NODE_BUDGET as f64).powf(1.0 / len as f64).floor().max(2.0);
    let fine = (2.0 * box_radius / ORACLE_STEP).round() + 1.0;
    if fine <= per_axis {
        ORACLE_STEP
    } else {
        2.0 * box_radius / (per_axis - 1.0)
    }
}

/// Runs Newton from every node of the grid `{−R + i·step}^N` and collects the
/// distinct converged points. Nodes where Newton fails are counted in the
/// diagnostics.
pub fn grid_census(prob: &ProblemSpec, cfg: &SolverConfig, step: f64) -> Result<SolutionSet, SolverError> {
    cfg.validate()?;
    let len = prob.interior_len();
    if len > ORACLE_MAX_DIM {
        return Err(SolverError::OracleDimension { max: ORACLE_MAX_DIM, got: len });
    }
    if !(step > 0.0) || !step.is_finite() {
        return Err(SolverError::InvalidConfig(format!("grid step must be positive, got {step}")));
    }
    let r = cfg.box_radius;
    let per_axis = (2.0 * r / step + 1e-9).floor() as usize + 1;
    let total = per_axis.pow(len as u32);
    let node = |mut idx: usize| -> Vec<f64> {
        let mut x = vec![0.0; len];
        for v in x.iter_mut() {
            *v = -r + (idx % per_axis) as f64 * step;
            idx /= per_axis;
        }
        x
    };
    let found: Vec<Option<Vec<f64>>> = (0..total)
        .into_par_iter()
        .map(|i| newton_refine(prob, node(i), cfg, NEWTON_BUDGET).ok())
        .collect();
    let failed = found.iter().filter(|f| f.is_none()).count();
    // collapse exact repeats before the more expensive evaluation
    let mut xs: Vec<Vec<f64>> = found.into_iter().flatten().collect();
    xs.sort_by(|a, b| {
        a.iter().zip(b).map(|(p, q)| p.total_cmp(q)).find(|o| o.is_ne()).unwrap_or(std::cmp::Ordering::Equal)
    });
    xs.dedup();
    let points = xs
        .into_par_iter()
        .map(|x| evaluate_point(prob, x, Origin::Oracle))
        .collect::<Result<Vec<_>, _>>()?;
    let mut diagnostics = vec![format!("grid of {total} nodes, step {step}")];
    if failed > 0 {
        diagnostics.push(format!("newton failed from {failed} nodes"));
    }
    Ok(assemble(prob, cfg, points, diagnostics))
}
