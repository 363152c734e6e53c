use nalgebra::{Cholesky, DMatrix, DVector};

use super::{evaluate_point, CriticalPoint, Origin, Sense, SolverConfig, SolverError};
use crate::energy::{energy_at, gradient_at, hessian_at, ProblemSpec};
use crate::sequence_space::{norm_2, norm_inf, InteriorVector};

/// Gradient level at which the line-search phase hands over to Newton.
const HANDOFF_GRAD: f64 = 1e-4;
const ARMIJO_C: f64 = 1e-4;
const MIN_STEP: f64 = 1e-16;
const REGULARIZATION: f64 = 1e-8;
const POLISH_ITERS: usize = 200;

fn axpy(x: &[f64], t: f64, d: &[f64]) -> Vec<f64> {
    x.iter().zip(d).map(|(a, b)| a + t * b).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| p * q).sum()
}

/// Direction for `φ = s·J`: Newton when `s·H` is positive definite,
/// otherwise steepest descent on φ.
fn phase_one_direction(h: &DMatrix<f64>, g: &[f64], s: f64) -> (Vec<f64>, bool) {
    let sh = h * s;
    if let Some(chol) = Cholesky::new(sh) {
        let rhs = DVector::from_iterator(g.len(), g.iter().map(|v| -s * v));
        let d = chol.solve(&rhs);
        if d.iter().all(|v| v.is_finite()) {
            return (d.iter().copied().collect(), true);
        }
    }
    (g.iter().map(|v| -s * v).collect(), false)
}

/// Solves `H d = −g`, shifting by `δI` (δ = 1e-8, growing tenfold) when the
/// system is singular.
fn newton_direction(h: &DMatrix<f64>, g: &[f64]) -> Option<Vec<f64>> {
    let rhs = DVector::from_iterator(g.len(), g.iter().map(|v| -v));
    let scale = h.amax().max(1.0);
    let mut delta = 0.0;
    for _ in 0..12 {
        let mut m = h.clone();
        for i in 0..g.len() {
            m[(i, i)] += delta;
        }
        if let Some(d) = m.lu().solve(&rhs) {
            if d.iter().all(|v| v.is_finite()) {
                return Some(d.iter().copied().collect());
            }
        }
        delta = if delta == 0.0 { REGULARIZATION * scale } else { delta * 10.0 };
    }
    None
}

fn merit(g: &[f64]) -> f64 {
    0.5 * dot(g, g)
}

/// Newton iteration on ∇J = 0 with backtracking on `½‖∇J‖²`. Once the
/// gradient is at tolerance, keeps iterating while the merit still drops, so
/// flat critical points are located as sharply as rounding allows.
pub(crate) fn newton_refine(
    prob: &ProblemSpec,
    x0: Vec<f64>,
    cfg: &SolverConfig,
    budget: usize,
) -> Result<Vec<f64>, SolverError> {
    let mut x = x0;
    let mut g = gradient_at(prob, &x)?;
    let mut polish = 0;
    for iter in 0..budget {
        let gn = norm_inf(&g);
        let converged = gn <= cfg.tol_grad;
        if gn == 0.0 || (converged && polish >= POLISH_ITERS) {
            return Ok(x);
        }
        if converged {
            polish += 1;
        }
        let m0 = merit(&g);
        let h = hessian_at(prob, &x)?;
        let step = newton_direction(&h, &g).and_then(|d| {
            let mut t = 1.0;
            while t >= 1e-12 {
                let xn = axpy(&x, t, &d);
                if let Ok(gn) = gradient_at(prob, &xn) {
                    let m = merit(&gn);
                    let ok = if converged { m < m0 } else { m <= (1.0 - ARMIJO_C * t) * m0 };
                    if ok {
                        return Some((xn, gn));
                    }
                }
                t *= 0.5;
            }
            None
        });
        match step {
            Some((xn, gn)) => {
                x = xn;
                g = gn;
            }
            None if converged => return Ok(x),
            None => {
                return Err(SolverError::NonConvergence { iterations: iter, grad_norm_inf: gn, best: x });
            }
        }
    }
    let gn = norm_inf(&g);
    if gn <= cfg.tol_grad {
        Ok(x)
    } else {
        Err(SolverError::NonConvergence { iterations: budget, grad_norm_inf: gn, best: x })
    }
}

/// Direct method: line-search descent (or ascent) on J until the gradient
/// drops below 1e-4, then Newton refinement to `tol_grad`.
pub fn local_descent(
    prob: &ProblemSpec,
    x0: &InteriorVector,
    sense: Sense,
    cfg: &SolverConfig,
) -> Result<CriticalPoint, SolverError> {
    cfg.validate()?;
    let s = sense.sign();
    let limit = 1e6 * cfg.box_radius;
    let mut x = x0.as_slice().to_vec();
    let mut phi = s * energy_at(prob, &x)?;
    let mut iter = 0;
    while iter < cfg.max_iter {
        let g = gradient_at(prob, &x)?;
        if norm_inf(&g) < HANDOFF_GRAD {
            break;
        }
        iter += 1;
        let h = hessian_at(prob, &x)?;
        let (mut d, mut newton) = phase_one_direction(&h, &g, s);
        let mut accepted = None;
        loop {
            let slope = s * dot(&g, &d);
            let mut t = 1.0;
            while t >= MIN_STEP {
                let xn = axpy(&x, t, &d);
                if let Ok(j) = energy_at(prob, &xn) {
                    if s * j <= phi + ARMIJO_C * t * slope {
                        accepted = Some((xn, s * j));
                        break;
                    }
                }
                t *= 0.5;
            }
            if accepted.is_some() || !newton {
                break;
            }
            d = g.iter().map(|v| -s * v).collect();
            newton = false;
        }
        match accepted {
            Some((xn, p)) => {
                x = xn;
                phi = p;
            }
            // no decrease at any step length: rounding level, let Newton decide
            None => break,
        }
        let norm = norm_2(&x);
        if norm > limit {
            return Err(SolverError::Divergence { norm });
        }
    }
    let x = newton_refine(prob, x, cfg, cfg.max_iter.saturating_sub(iter).max(1))?;
    let norm = norm_2(&x);
    if norm > limit {
        return Err(SolverError::Divergence { norm });
    }
    let origin = match sense {
        Sense::Minimize => Origin::Descent,
        Sense::Maximize => Origin::Ascent,
    };
    evaluate_point(prob, x, origin)
}

/// Newton refinement from an arbitrary point.
pub fn refine(prob: &ProblemSpec, x0: &InteriorVector, cfg: &SolverConfig) -> Result<CriticalPoint, SolverError> {
    cfg.validate()?;
    let x = newton_refine(prob, x0.as_slice().to_vec(), cfg, cfg.max_iter)?;
    evaluate_point(prob, x, Origin::Newton)
}
