//! Screening of the growth-condition catalog and the theorem applicability
//! report.
//!
//! Asymptotic conditions cannot be decided by finite sampling. A condition
//! that survives every sample is reported as `consistent`, never as proven.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::difference::{embedding_constants, DifferenceError};
use crate::energy::ProblemSpec;
use crate::expr::NonlinearityError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HypothesisError {
    #[error("unknown condition '{0}'")]
    UnknownCondition(String),
    #[error("{condition}: {message}")]
    Parameter { condition: ConditionId, message: String },
    #[error(transparent)]
    Nonlinearity(#[from] NonlinearityError),
    #[error(transparent)]
    Difference(#[from] DifferenceError),
}

macro_rules! conditions {
    ($($variant:ident => $name:literal),* $(,)?) => {
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub enum ConditionId { $($variant),* }

        impl ConditionId {
            pub const ALL: &'static [ConditionId] = &[$(ConditionId::$variant),*];

            pub fn name(self) -> &'static str {
                match self { $(ConditionId::$variant => $name),* }
            }
        }

        impl FromStr for ConditionId {
            type Err = HypothesisError;

            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $($name => Ok(ConditionId::$variant),)*
                    _ => Err(HypothesisError::UnknownCondition(s.to_string())),
                }
            }
        }
    };
}

conditions! {
    A1 => "A1", A2_1 => "A2.1", A2_2 => "A2.2", A3_1 => "A3.1", A3_2 => "A3.2",
    B1 => "B1", B2_1 => "B2.1", B2_2 => "B2.2", B3_1 => "B3.1", B3_2 => "B3.2",
    C1 => "C1", C2 => "C2", C3 => "C3", C4 => "C4",
    D1 => "D1", D2 => "D2", D3 => "D3", D4 => "D4",
    E1 => "E1", E2 => "E2", E3 => "E3", E4 => "E4",
    F1 => "F1", F2 => "F2", F3 => "F3", F4 => "F4",
}

impl fmt::Display for ConditionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for ConditionId {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

/// What the condition promises about J.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Category {
    Coercive,
    Anticoercive,
}

pub const DEFAULT_SAMPLE_MAX: f64 = 1e3;
pub const DEFAULT_SAMPLES: usize = 512;
/// Smallest magnitude on the screening grid.
pub const GRID_FLOOR: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConditionParams {
    pub alpha: f64,
    pub q: Option<f64>,
    #[serde(rename = "M")]
    pub m: f64,
    pub sample_max: f64,
    pub samples: usize,
}

impl ConditionParams {
    pub fn new(alpha: f64) -> Self {
        Self { alpha, q: None, m: 0.0, sample_max: DEFAULT_SAMPLE_MAX, samples: DEFAULT_SAMPLES }
    }

    pub fn with_q(mut self, q: f64) -> Self {
        self.q = Some(q);
        self
    }

    pub fn with_m(mut self, m: f64) -> Self {
        self.m = m;
        self
    }

    pub fn with_sample_max(mut self, sample_max: f64) -> Self {
        self.sample_max = sample_max;
        self
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Thresholds {
    /// `½ λ min p`
    pub t_low: f64,
    /// `½ 4ⁿ max p`
    pub t_high: f64,
    pub lambda: f64,
}

pub fn thresholds(prob: &ProblemSpec) -> Result<Thresholds, HypothesisError> {
    let bounds = embedding_constants(prob.interior_len(), prob.order())?;
    Ok(Thresholds {
        t_low: 0.5 * bounds.lambda_min * prob.p_min(),
        t_high: 0.5 * bounds.upper_bound * prob.p_max(),
        lambda: bounds.lambda_min,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Consistent,
    Violated,
    Inapplicable,
}

/// A violating sample. `value` is `F(k, u)`, or `u f(k, u)` for sign conditions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Witness {
    pub k: usize,
    pub u: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    pub condition: ConditionId,
    pub params: ConditionParams,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub note: String,
    /// The A/B condition actually sampled, for the limit conditions C–F.
    pub reduces_to: Option<ConditionId>,
    pub category: Category,
}

impl ConditionReport {
    /// The condition whose inequality was sampled.
    pub fn effective(&self) -> ConditionId {
        self.reduces_to.unwrap_or(self.condition)
    }
}

#[derive(Clone, Copy, PartialEq)]
enum Test {
    /// `u f(k,u) ≤ 0`
    SignNonPositive,
    /// `u f(k,u) ≥ 0`
    SignNonNegative,
    /// `F(k,u) ≤ α|u|^q` (or `<` when strict)
    Upper,
    /// `F(k,u) ≥ α|u|^q` (or `>` when strict)
    Lower,
}

struct Plan {
    target: ConditionId,
    test: Test,
    alpha: f64,
    q: f64,
    strict: bool,
    threshold: f64,
    category: Category,
    note: String,
}

fn param_error(condition: ConditionId, message: impl Into<String>) -> HypothesisError {
    HypothesisError::Parameter { condition, message: message.into() }
}

fn require_q(cond: ConditionId, params: &ConditionParams, range: &str, ok: impl Fn(f64) -> bool) -> Result<f64, HypothesisError> {
    match params.q {
        Some(q) if q.is_finite() && ok(q) => Ok(q),
        Some(q) => Err(param_error(cond, format!("q must satisfy {range}, got {q}"))),
        None => Err(param_error(cond, format!("q is required ({range})"))),
    }
}

fn forbid_q(cond: ConditionId, params: &ConditionParams) -> Result<(), HypothesisError> {
    match params.q {
        Some(q) if q != 2.0 => Err(param_error(cond, format!("q is fixed at 2 for this condition, got {q}"))),
        _ => Ok(()),
    }
}

enum Outcome {
    Plan(Plan),
    Inapplicable { target: Option<ConditionId>, category: Category, note: String },
}

fn plan(cond: ConditionId, params: &ConditionParams, th: &Thresholds) -> Result<Outcome, HypothesisError> {
    use ConditionId::*;
    let a = params.alpha;
    if !a.is_finite() {
        return Err(param_error(cond, "alpha must be finite"));
    }
    if !(params.m >= 0.0) || !params.m.is_finite() {
        return Err(param_error(cond, "M must be a finite nonnegative number"));
    }
    if params.samples == 0 {
        return Err(param_error(cond, "samples must be positive"));
    }
    let inapplicable = |target, category, note: String| Ok(Outcome::Inapplicable { target, category, note });
    let low = |alpha: f64| alpha < th.t_low;
    let high = |alpha: f64| alpha > th.t_high;
    let mk = |target, test, alpha: f64, q, strict, category, note: String| {
        let threshold = if matches!(test, Test::SignNonPositive | Test::SignNonNegative) { alpha.max(params.m) } else { params.m };
        Ok(Outcome::Plan(Plan { target, test, alpha, q, strict, threshold, category, note }))
    };

    match cond {
        A1 | B1 => {
            forbid_q(cond, params)?;
            if !(a > 0.0) {
                return Err(param_error(cond, "alpha must be positive"));
            }
            // the coercivity bound ½λ min p ‖x‖² − m needs min p > 0, and dually
            if cond == A1 && !(th.t_low > 0.0) {
                return inapplicable(None, Category::Coercive, "requires min p > 0".into());
            }
            if cond == B1 && !(th.t_high < 0.0) {
                return inapplicable(None, Category::Anticoercive, "requires max p < 0".into());
            }
            let (test, cat, text) = if cond == A1 {
                (Test::SignNonPositive, Category::Coercive, "x f(k,x) <= 0")
            } else {
                (Test::SignNonNegative, Category::Anticoercive, "x f(k,x) >= 0")
            };
            mk(cond, test, a, 2.0, false, cat, format!("{text} for |x| > {}", a.max(params.m)))
        }
        A2_1 | B3_1 => {
            forbid_q(cond, params)?;
            if !low(a) {
                return inapplicable(None, Category::Coercive, format!("alpha must be below t_low = {}", th.t_low));
            }
            mk(cond, Test::Upper, a, 2.0, false, Category::Coercive, "F(k,u) <= alpha u^2".into())
        }
        A2_2 => {
            let q = require_q(cond, params, "1 <= q < 2", |q| (1.0..2.0).contains(&q))?;
            if !(th.t_low > 0.0) {
                return inapplicable(None, Category::Coercive, "requires min p > 0".into());
            }
            mk(cond, Test::Upper, a, q, false, Category::Coercive, "F(k,u) <= alpha |u|^q".into())
        }
        A3_1 | B2_1 => {
            forbid_q(cond, params)?;
            if !high(a) {
                return inapplicable(None, Category::Anticoercive, format!("alpha must exceed t_high = {}", th.t_high));
            }
            mk(cond, Test::Lower, a, 2.0, false, Category::Anticoercive, "F(k,u) >= alpha u^2".into())
        }
        A3_2 => {
            let q = require_q(cond, params, "q > 2", |q| q > 2.0)?;
            if !(a > 0.0) {
                return Err(param_error(cond, "alpha must be positive"));
            }
            mk(cond, Test::Lower, a, q, false, Category::Anticoercive, "F(k,u) >= alpha |u|^q".into())
        }
        B2_2 => {
            let q = require_q(cond, params, "1 <= q < 2", |q| (1.0..2.0).contains(&q))?;
            if !(th.t_high < 0.0) {
                return inapplicable(None, Category::Anticoercive, "requires max p < 0".into());
            }
            mk(cond, Test::Lower, a, q, false, Category::Anticoercive, "F(k,u) >= alpha |u|^q".into())
        }
        B3_2 => {
            let q = require_q(cond, params, "q > 2", |q| q > 2.0)?;
            if !(a < 0.0) {
                return Err(param_error(cond, "alpha must be negative"));
            }
            mk(cond, Test::Upper, a, q, false, Category::Coercive, "F(k,u) <= alpha |u|^q".into())
        }
        C1 | C2 | C3 | C4 => {
            forbid_q(cond, params)?;
            if !high(a) {
                return inapplicable(Some(A3_1), Category::Anticoercive, format!("alpha must exceed t_high = {}", th.t_high));
            }
            let (alpha, strict) = match cond {
                C2 => (a / 2.0, false),
                C3 => (a, false),
                _ => (a, true),
            };
            if !high(alpha) {
                return inapplicable(
                    Some(A3_1),
                    Category::Anticoercive,
                    format!("reduced alpha' = alpha/2 = {alpha} does not exceed t_high = {}", th.t_high),
                );
            }
            mk(A3_1, Test::Lower, alpha, 2.0, strict, Category::Anticoercive, format!("sampled as A3.1 with alpha' = {alpha}"))
        }
        D1 | D2 | D3 | D4 => {
            let q = require_q(cond, params, "q > 2", |q| q > 2.0)?;
            if !(a > 0.0) {
                return Err(param_error(cond, "alpha must be positive"));
            }
            let (alpha, strict) = match cond {
                D2 => (a / 2.0, false),
                D3 => (a, false),
                _ => (a, true),
            };
            mk(A3_2, Test::Lower, alpha, q, strict, Category::Anticoercive, format!("sampled as A3.2 with alpha' = {alpha}"))
        }
        E1 | E2 | E3 | E4 => {
            forbid_q(cond, params)?;
            if !low(a) {
                return inapplicable(Some(B3_1), Category::Coercive, format!("alpha must be below t_low = {}", th.t_low));
            }
            let (alpha, strict) = match cond {
                E2 => (0.5 * (a + th.t_low), false),
                E3 => (a, false),
                _ => (a, true),
            };
            mk(B3_1, Test::Upper, alpha, 2.0, strict, Category::Coercive, format!("sampled as B3.1 with alpha' = {alpha}"))
        }
        F1 | F2 | F3 | F4 => {
            let q = require_q(cond, params, "q > 2", |q| q > 2.0)?;
            if !(a < 0.0) {
                return Err(param_error(cond, "alpha must be negative"));
            }
            let (alpha, strict) = match cond {
                F2 => (a / 2.0, false),
                F3 => (a, false),
                _ => (a, true),
            };
            mk(B3_2, Test::Upper, alpha, q, strict, Category::Coercive, format!("sampled as B3.2 with alpha' = {alpha}"))
        }
    }
}

/// Magnitudes `lo (hi/lo)^(i/samples)` for `i = 1..=samples`.
pub fn screening_grid(lo: f64, hi: f64, samples: usize) -> Vec<f64> {
    let ratio = (hi / lo).ln();
    (1..=samples)
        .map(|i| if i == samples { hi } else { lo * (ratio * i as f64 / samples as f64).exp() })
        .collect()
}

fn slack(rhs: f64) -> f64 {
    1e-10 + 1e-12 * rhs.abs()
}

fn holds(test: Test, strict: bool, lhs: f64, rhs: f64) -> bool {
    match (test, strict) {
        (Test::SignNonPositive, _) => lhs <= slack(0.0),
        (Test::SignNonNegative, _) => lhs >= -slack(0.0),
        (Test::Upper, true) => lhs < rhs,
        (Test::Upper, false) => lhs <= rhs + slack(rhs),
        (Test::Lower, true) => lhs > rhs,
        (Test::Lower, false) => lhs >= rhs - slack(rhs),
    }
}

fn first_violation(prob: &ProblemSpec, plan: &Plan, grid: &[f64]) -> Result<Option<Witness>, HypothesisError> {
    let f = prob.f();
    let per_k: Vec<Result<Option<Witness>, HypothesisError>> = (1..=prob.interior_len())
        .into_par_iter()
        .map(|k| {
            for sign in [1.0, -1.0] {
                let us: Vec<f64> = grid.iter().map(|m| sign * m).collect();
                let lhs: Vec<f64> = match plan.test {
                    Test::SignNonPositive | Test::SignNonNegative => us
                        .iter()
                        .map(|&u| Ok(u * f.value(k, u)?))
                        .collect::<Result<_, NonlinearityError>>()?,
                    Test::Upper | Test::Lower => f.antiderivative_sweep(k, &us)?,
                };
                for (&u, &l) in us.iter().zip(&lhs) {
                    let rhs = plan.alpha * u.abs().powf(plan.q);
                    if !holds(plan.test, plan.strict, l, rhs) {
                        return Ok(Some(Witness { k, u, value: l }));
                    }
                }
            }
            Ok(None)
        })
        .collect();
    for r in per_k {
        if let Some(w) = r? {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// Samples the condition on a log-spaced grid of `samples` magnitudes per
/// sign, `max(threshold, 1e-3) < |u| ≤ sample_max`, at every k.
pub fn screen_condition(
    prob: &ProblemSpec,
    cond: ConditionId,
    params: ConditionParams,
) -> Result<ConditionReport, HypothesisError> {
    let th = thresholds(prob)?;
    screen_with(prob, cond, params, &th)
}

fn screen_with(
    prob: &ProblemSpec,
    cond: ConditionId,
    params: ConditionParams,
    th: &Thresholds,
) -> Result<ConditionReport, HypothesisError> {
    let plan = match plan(cond, &params, th)? {
        Outcome::Plan(p) => p,
        Outcome::Inapplicable { target, category, note } => {
            return Ok(ConditionReport {
                condition: cond,
                params,
                verdict: Verdict::Inapplicable,
                witness: None,
                note,
                reduces_to: target.filter(|&t| t != cond),
                category,
            })
        }
    };
    let lo = plan.threshold.max(GRID_FLOOR);
    if !(params.sample_max > lo) || !params.sample_max.is_finite() {
        return Err(param_error(cond, format!("sample_max must be finite and exceed {lo}")));
    }
    let grid = screening_grid(lo, params.sample_max, params.samples);
    let witness = first_violation(prob, &plan, &grid)?;
    let verdict = if witness.is_some() { Verdict::Violated } else { Verdict::Consistent };
    let note = match witness {
        Some(w) => format!("{}; fails at k={}, u={}", plan.note, w.k, w.u),
        None => format!("{}; no violation on {} samples per sign in ({lo}, {}]", plan.note, params.samples, params.sample_max),
    };
    Ok(ConditionReport {
        condition: cond,
        params,
        verdict,
        witness,
        note,
        reduces_to: Some(plan.target).filter(|&t| t != cond),
        category: plan.category,
    })
}

/// Estimate of `lim_{u→0} f(k,u)/u` at one k.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlopeEstimate {
    pub k: usize,
    pub estimate: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZeroSlope {
    /// False when `f(k,0) ≠ 0` for some k.
    pub applicable: bool,
    pub per_k: Vec<SlopeEstimate>,
    pub note: String,
}

impl ZeroSlope {
    pub fn max(&self) -> Option<f64> {
        self.usable().map(|v| v.iter().copied().fold(f64::NEG_INFINITY, f64::max))
    }

    pub fn min(&self) -> Option<f64> {
        self.usable().map(|v| v.iter().copied().fold(f64::INFINITY, f64::min))
    }

    fn usable(&self) -> Option<Vec<f64>> {
        if !self.applicable || self.per_k.iter().any(|s| !s.converged) {
            return None;
        }
        Some(self.per_k.iter().map(|s| s.estimate).collect())
    }
}

/// Agreement tolerance for slope estimates, also used when comparing with c.
pub const SLOPE_TOL: f64 = 1e-6;

/// Symmetric averages of `f(k,±u)/(±u)` at `u = 10^-j`, `j = 3..8`. The last
/// value is the estimate; it counts as converged when it agrees with the
/// previous one and the one-sided ratios agree with each other.
pub fn zero_limit_slope(prob: &ProblemSpec) -> Result<ZeroSlope, HypothesisError> {
    let f = prob.f();
    let len = prob.interior_len();
    for k in 1..=len {
        let v = f.value(k, 0.0).map_err(NonlinearityError::from)?;
        if v != 0.0 {
            return Ok(ZeroSlope {
                applicable: false,
                per_k: Vec::new(),
                note: format!("f({k},0) = {v} is nonzero, the limit of f/u at 0 does not exist"),
            });
        }
    }
    let mut per_k = Vec::with_capacity(len);
    for k in 1..=len {
        let mut prev = f64::NAN;
        let mut est = SlopeEstimate { k, estimate: f64::NAN, converged: false };
        for j in 3..=8 {
            let u = 10f64.powi(-j);
            let right = f.value(k, u).map_err(NonlinearityError::from)? / u;
            let left = f.value(k, -u).map_err(NonlinearityError::from)? / -u;
            let s = 0.5 * (left + right);
            let tol = SLOPE_TOL * s.abs().max(1.0);
            est = SlopeEstimate { k, estimate: s, converged: (s - prev).abs() <= tol && (left - right).abs() <= tol };
            prev = s;
        }
        per_k.push(est);
    }
    let note = if per_k.iter().all(|s| s.converged) {
        "estimates stabilised".to_string()
    } else {
        "some estimates did not stabilise (kink or oscillation at 0)".to_string()
    };
    Ok(ZeroSlope { applicable: true, per_k, note })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Theorem {
    #[serde(rename = "existence-coercive")]
    ExistenceCoercive,
    #[serde(rename = "existence-anticoercive")]
    ExistenceAnticoercive,
    #[serde(rename = "two-solutions-theorem-1")]
    TwoSolutionsTheorem1,
    #[serde(rename = "two-solutions-theorem-2")]
    TwoSolutionsTheorem2,
}

impl Theorem {
    pub fn name(self) -> &'static str {
        match self {
            Theorem::ExistenceCoercive => "existence-coercive",
            Theorem::ExistenceAnticoercive => "existence-anticoercive",
            Theorem::TwoSolutionsTheorem1 => "two-solutions-theorem-1",
            Theorem::TwoSolutionsTheorem2 => "two-solutions-theorem-2",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremReport {
    pub thresholds: Thresholds,
    pub coercive_evidence: Vec<ConditionReport>,
    pub anticoercive_evidence: Vec<ConditionReport>,
    pub zero_slope: ZeroSlope,
    pub c: Option<f64>,
    pub applicable: Vec<Theorem>,
    pub notes: Vec<String>,
}

impl TheoremReport {
    pub fn has(&self, t: Theorem) -> bool {
        self.applicable.contains(&t)
    }
}

const THEOREM_1_SET: &[ConditionId] = &[ConditionId::A3_1, ConditionId::A3_2, ConditionId::B2_1, ConditionId::B2_2];
const THEOREM_2_SET: &[ConditionId] = &[ConditionId::B3_1, ConditionId::B3_2, ConditionId::A2_1, ConditionId::A2_2];

/// Screens every claim and decides which existence and multiplicity results
/// the evidence supports.
pub fn applicability(
    prob: &ProblemSpec,
    claims: &[(ConditionId, ConditionParams)],
    c: Option<f64>,
) -> Result<TheoremReport, HypothesisError> {
    let th = thresholds(prob)?;
    let mut coercive = Vec::new();
    let mut anticoercive = Vec::new();
    for &(cond, params) in claims {
        let report = screen_with(prob, cond, params, &th)?;
        match report.category {
            Category::Coercive => coercive.push(report),
            Category::Anticoercive => anticoercive.push(report),
        }
    }
    let zero_slope = zero_limit_slope(prob)?;
    let consistent = |reports: &[ConditionReport], set: Option<&[ConditionId]>| {
        reports
            .iter()
            .any(|r| r.verdict == Verdict::Consistent && set.is_none_or(|s| s.contains(&r.effective())))
    };

    let mut applicable = Vec::new();
    let mut notes = Vec::new();
    if consistent(&coercive, None) {
        applicable.push(Theorem::ExistenceCoercive);
    }
    if consistent(&anticoercive, None) {
        applicable.push(Theorem::ExistenceAnticoercive);
    }
    let bound_1 = th.lambda * prob.p_min();
    let bound_2 = 4f64.powi(prob.order() as i32) * prob.p_max();
    match c {
        None => notes.push("no c given; two-solution theorems not assessed".into()),
        Some(c) => {
            let tol = SLOPE_TOL * c.abs().max(1.0);
            if consistent(&anticoercive, Some(THEOREM_1_SET)) {
                match zero_slope.max() {
                    Some(m) if m <= c + tol && c < bound_1 => applicable.push(Theorem::TwoSolutionsTheorem1),
                    Some(m) => notes.push(format!(
                        "two-solutions-theorem-1 needs max slope {m} <= c = {c} < lambda min p = {bound_1}"
                    )),
                    None => notes.push("two-solutions-theorem-1 needs a converged slope at 0".into()),
                }
            }
            if consistent(&coercive, Some(THEOREM_2_SET)) {
                match zero_slope.min() {
                    Some(m) if m >= c - tol && c > bound_2 => applicable.push(Theorem::TwoSolutionsTheorem2),
                    Some(m) => notes.push(format!(
                        "two-solutions-theorem-2 needs min slope {m} >= c = {c} > 4^n max p = {bound_2}"
                    )),
                    None => notes.push("two-solutions-theorem-2 needs a converged slope at 0".into()),
                }
            }
        }
    }
    Ok(TheoremReport {
        thresholds: th,
        coercive_evidence: coercive,
        anticoercive_evidence: anticoercive,
        zero_slope,
        c,
        applicable,
        notes,
    })
}
