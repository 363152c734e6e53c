//! Path-deformation mountain pass: the highest node of a polygonal path is
//! pushed downhill perpendicular to the path until it sits on a critical
//! point, then polished by Newton.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::descent::newton_refine;
use super::{evaluate_point, CriticalPoint, Origin, SolverConfig, SolverError};
use crate::energy::{energy_at, gradient_at, ProblemSpec};
use crate::sequence_space::{norm_2, norm_inf, InteriorVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Variant {
    /// `inf` over paths of the path maximum of J.
    #[serde(rename = "inf-max")]
    InfMax,
    /// `sup` over paths of the path minimum of J, run as inf-max on −J.
    #[serde(rename = "sup-min")]
    SupMin,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::InfMax => "inf-max",
            Variant::SupMin => "sup-min",
        }
    }
}

/// Sweep history, in units of the deformed objective: J for inf-max, −J
/// for sup-min.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MountainPassTrace {
    pub variant: Variant,
    pub endpoint_max: f64,
    pub initial_max: f64,
    pub final_max: f64,
    /// Highest node value at the start of every sweep; never increases.
    pub history: Vec<f64>,
    pub sweeps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MountainPassResult {
    pub point: CriticalPoint,
    pub trace: MountainPassTrace,
}

/// Relative size of the perpendicular gradient below which the top node is
/// handed to Newton.
const HANDOFF_REL: f64 = 1e-6;
const STAGNATION_WINDOW: usize = 100;
const STAGNATION_DROP: f64 = 1e-14;

fn lerp(a: &[f64], b: &[f64], t: f64) -> Vec<f64> {
    a.iter().zip(b).map(|(p, q)| p + t * (q - p)).collect()
}

fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(p, q)| p - q).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(p, q)| p * q).sum()
}

fn top(values: &[f64]) -> usize {
    let mut best = 1;
    for i in 2..values.len() - 1 {
        if values[i] > values[best] {
            best = i;
        }
    }
    best
}

/// Nodes equally spaced in arclength along the current polyline.
fn respace(nodes: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut cum = vec![0.0];
    for w in nodes.windows(2) {
        let last = *cum.last().expect("non-empty");
        cum.push(last + norm_2(&sub(&w[1], &w[0])));
    }
    let total = *cum.last().expect("non-empty");
    let m = nodes.len();
    let mut out = Vec::with_capacity(m);
    out.push(nodes[0].clone());
    let mut seg = 0;
    for i in 1..m - 1 {
        let s = total * i as f64 / (m - 1) as f64;
        while seg + 1 < m - 1 && cum[seg + 1] < s {
            seg += 1;
        }
        let len = cum[seg + 1] - cum[seg];
        let t = if len > 0.0 { (s - cum[seg]) / len } else { 0.0 };
        out.push(lerp(&nodes[seg], &nodes[seg + 1], t));
    }
    out.push(nodes[m - 1].clone());
    out
}

fn golden_max(prob: &ProblemSpec, a: &[f64], b: &[f64]) -> Result<(Vec<f64>, f64), SolverError> {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let (mut lo, mut hi) = (0.0, 1.0);
    let mut t1 = hi - r * (hi - lo);
    let mut t2 = lo + r * (hi - lo);
    let mut f1 = energy_at(prob, &lerp(a, b, t1))?;
    let mut f2 = energy_at(prob, &lerp(a, b, t2))?;
    for _ in 0..80 {
        if f1 < f2 {
            lo = t1;
            t1 = t2;
            f1 = f2;
            t2 = lo + r * (hi - lo);
            f2 = energy_at(prob, &lerp(a, b, t2))?;
        } else {
            hi = t2;
            t2 = t1;
            f2 = f1;
            t1 = hi - r * (hi - lo);
            f1 = energy_at(prob, &lerp(a, b, t1))?;
        }
    }
    let t = 0.5 * (lo + hi);
    let x = lerp(a, b, t);
    let v = energy_at(prob, &x)?;
    Ok((x, v))
}

/// Deforms the straight path from `x_a` to `x_b` and returns the critical
/// point at the mountain-pass level. `SupMin` runs the same algorithm on −J.
pub fn mountain_pass(
    prob: &ProblemSpec,
    x_a: &InteriorVector,
    x_b: &InteriorVector,
    variant: Variant,
    cfg: &SolverConfig,
) -> Result<MountainPassResult, SolverError> {
    cfg.validate()?;
    let negated;
    let work = match variant {
        Variant::InfMax => prob,
        Variant::SupMin => {
            negated = prob.negated();
            &negated
        }
    };
    let (x, trace) = deform(work, x_a.as_slice(), x_b.as_slice(), variant, cfg)?;
    let x = newton_refine(work, x, cfg, cfg.max_iter)?;
    let level = energy_at(work, &x)?;
    if level <= trace.endpoint_max {
        return Err(SolverError::EndpointCondition { path_max: level, endpoint_max: trace.endpoint_max });
    }
    let point = evaluate_point(prob, x, Origin::MountainPass)?;
    Ok(MountainPassResult { point, trace })
}

fn deform(
    prob: &ProblemSpec,
    a: &[f64],
    b: &[f64],
    variant: Variant,
    cfg: &SolverConfig,
) -> Result<(Vec<f64>, MountainPassTrace), SolverError> {
    let m = cfg.path_points;
    let mut nodes: Vec<Vec<f64>> = (0..m).map(|i| lerp(a, b, i as f64 / (m - 1) as f64)).collect();
    let mut values = nodes.iter().map(|x| energy_at(prob, x)).collect::<Result<Vec<_>, _>>()?;
    let endpoint_max = values[0].max(values[m - 1]);
    let initial_max = values[top(&values)];
    let mut history: Vec<f64> = Vec::new();

    for sweep in 0..cfg.max_iter {
        let i = top(&values);
        let level = values[i];
        if level <= endpoint_max {
            return Err(SolverError::EndpointCondition { path_max: level, endpoint_max });
        }
        if let Some(&last) = history.last() {
            assert!(level <= last, "path maximum increased from {last} to {level}");
        }
        history.push(level);
        if sweep >= STAGNATION_WINDOW && history[sweep - STAGNATION_WINDOW] - level < STAGNATION_DROP {
            return Err(SolverError::Stagnation { sweeps: sweep, value: level });
        }

        let g = gradient_at(prob, &nodes[i])?;
        let gn = norm_inf(&g);
        let trace = |sweeps| MountainPassTrace {
            variant,
            endpoint_max,
            initial_max,
            final_max: level,
            history: history.clone(),
            sweeps,
        };
        if gn <= cfg.tol_grad {
            return Ok((nodes[i].clone(), trace(sweep + 1)));
        }
        let tangent = sub(&nodes[i + 1], &nodes[i - 1]);
        let tn = dot(&tangent, &tangent);
        let along = if tn > 0.0 { dot(&g, &tangent) / tn } else { 0.0 };
        let perp: Vec<f64> = g.iter().zip(&tangent).map(|(gi, ti)| gi - along * ti).collect();
        let pn = norm_inf(&perp);
        let moved = if pn <= HANDOFF_REL * (1.0 + gn) {
            None
        } else {
            let spacing = norm_2(&sub(&nodes[i], &nodes[i - 1])).min(norm_2(&sub(&nodes[i + 1], &nodes[i])));
            let mut t = cfg.mp_step.min(spacing / norm_2(&perp).max(f64::MIN_POSITIVE));
            let mut found = None;
            for _ in 0..60 {
                let xn: Vec<f64> = nodes[i].iter().zip(&perp).map(|(x, p)| x - t * p).collect();
                if let Ok(v) = energy_at(prob, &xn) {
                    if v < level {
                        found = Some((xn, v));
                        break;
                    }
                }
                t *= 0.5;
            }
            found
        };
        let Some((xn, v)) = moved else {
            // the top node is on the ridge: maximise along its two segments
            let (l, lv) = golden_max(prob, &nodes[i - 1], &nodes[i])?;
            let (r, rv) = golden_max(prob, &nodes[i], &nodes[i + 1])?;
            let best = if rv > lv { r } else { l };
            return Ok((best, trace(sweep + 1)));
        };
        nodes[i] = xn;
        values[i] = v;

        let candidate = respace(&nodes);
        let cvalues = candidate.iter().map(|x| energy_at(prob, x)).collect::<Result<Vec<_>, _>>();
        if let Ok(cv) = cvalues {
            if cv[top(&cv)] <= values[top(&values)] {
                nodes = candidate;
                values = cv;
            }
        }
    }
    let i = top(&values);
    Err(SolverError::NonConvergence {
        iterations: cfg.max_iter,
        grad_norm_inf: norm_inf(&gradient_at(prob, &nodes[i])?),
        best: nodes[i].clone(),
    })
}

/// Searches seeded random directions `d`, doubling `r`, for a point with
/// `s·J(r d) < s·J(θ) − 1` where `s = +1` for inf-max and `−1` for sup-min.
pub fn find_far_endpoint(prob: &ProblemSpec, variant: Variant, cfg: &SolverConfig) -> Result<InteriorVector, SolverError> {
    cfg.validate()?;
    let s = match variant {
        Variant::InfMax => 1.0,
        Variant::SupMin => -1.0,
    };
    let len = prob.interior_len();
    let base = s * energy_at(prob, &vec![0.0; len])?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x6d70_5f65_6e64);
    const DIRECTIONS: usize = 64;
    for _ in 0..DIRECTIONS {
        let mut d: Vec<f64> = (0..len).map(|_| rng.random_range(-1.0..=1.0)).collect();
        let dn = norm_2(&d);
        if dn == 0.0 {
            continue;
        }
        d.iter_mut().for_each(|v| *v /= dn);
        let mut r = 1.0;
        while r <= 1e6 * cfg.box_radius {
            let x: Vec<f64> = d.iter().map(|v| r * v).collect();
            if let Ok(j) = energy_at(prob, &x) {
                if s * j < base - 1.0 {
                    return Ok(InteriorVector::new(x).expect("finite"));
                }
            }
            r *= 2.0;
        }
    }
    Err(SolverError::NoFarEndpoint { tried: DIRECTIONS })
}
