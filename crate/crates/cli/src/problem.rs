//! Problem files: JSON documents holding `n`, `N`, `p`, `f`, optional claims
//! and threshold `c`, and optional solver overrides.

use serde::Deserialize;
use thiserror::Error;
use varbvp_core::energy::{ProblemError, ProblemSpec};
use varbvp_core::expr::Nonlinearity;
use varbvp_core::hypothesis::{ConditionId, ConditionParams};
use varbvp_core::solvers::SolverConfig;

#[derive(Debug, Error)]
pub enum ProblemFileError {
    #[error("line {line}, column {column}: {message}")]
    Json { line: usize, column: usize, message: String },
    #[error("field '{field}': {message}")]
    Field { field: String, message: String },
}

impl ProblemFileError {
    fn field(field: impl Into<String>, message: impl ToString) -> Self {
        ProblemFileError::Field { field: field.into(), message: message.to_string() }
    }
}

impl From<serde_json::Error> for ProblemFileError {
    fn from(e: serde_json::Error) -> Self {
        let text = e.to_string();
        // serde_json appends " at line L column C"; the position is reported separately
        let message = match text.rfind(" at line ") {
            Some(i) => text[..i].to_string(),
            None => text,
        };
        ProblemFileError::Json { line: e.line(), column: e.column(), message }
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawClaim {
    condition: String,
    alpha: f64,
    #[serde(default)]
    q: Option<f64>,
    #[serde(default, rename = "M")]
    m: Option<f64>,
    #[serde(default)]
    sample_max: Option<f64>,
    #[serde(default)]
    samples: Option<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    n: usize,
    #[serde(rename = "N")]
    len: usize,
    p: Vec<f64>,
    f: String,
    #[serde(default)]
    description: Option<String>,
    #[serde(default)]
    claims: Vec<RawClaim>,
    #[serde(default)]
    c: Option<f64>,
    #[serde(default)]
    tol_grad: Option<f64>,
    #[serde(default)]
    max_iter: Option<usize>,
    #[serde(default)]
    starts: Option<usize>,
    #[serde(default)]
    box_radius: Option<f64>,
    #[serde(default)]
    seed: Option<u64>,
    #[serde(default)]
    path_points: Option<usize>,
    #[serde(default)]
    mp_step: Option<f64>,
    #[serde(default)]
    dedup_tol: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct ProblemFile {
    pub spec: ProblemSpec,
    pub claims: Vec<(ConditionId, ConditionParams)>,
    pub c: Option<f64>,
    /// Defaults with the file's overrides applied.
    pub config: SolverConfig,
}

pub fn parse_problem_file(bytes: &[u8]) -> Result<ProblemFile, ProblemFileError> {
    let raw: RawProblem = serde_json::from_slice(bytes)?;
    if raw.n < 1 {
        return Err(ProblemFileError::field("n", "n >= 1 required"));
    }
    if raw.len < 2 {
        return Err(ProblemFileError::field("N", format!("N >= 2 required, got {}", raw.len)));
    }
    let f = Nonlinearity::parse(&raw.f).map_err(|e| ProblemFileError::field("f", e))?;
    let spec = ProblemSpec::new(raw.n, raw.len, raw.p, f, raw.description).map_err(|e| match e {
        ProblemError::TooShort(_) => ProblemFileError::field("N", e),
        ProblemError::ZeroOrder => ProblemFileError::field("n", e),
        ProblemError::CoefficientLength { .. } | ProblemError::NonFiniteCoefficient { .. } => {
            ProblemFileError::field("p", e)
        }
    })?;

    let mut claims = Vec::with_capacity(raw.claims.len());
    for (i, c) in raw.claims.into_iter().enumerate() {
        let id: ConditionId =
            c.condition.parse().map_err(|e| ProblemFileError::field(format!("claims[{i}].condition"), e))?;
        let mut params = ConditionParams::new(c.alpha);
        if let Some(q) = c.q {
            params = params.with_q(q);
        }
        if let Some(m) = c.m {
            params = params.with_m(m);
        }
        if let Some(s) = c.sample_max {
            params = params.with_sample_max(s);
        }
        if let Some(s) = c.samples {
            params = params.with_samples(s);
        }
        claims.push((id, params));
    }
    if let Some(c) = raw.c {
        if !c.is_finite() {
            return Err(ProblemFileError::field("c", "must be finite"));
        }
    }

    let mut config = SolverConfig::default();
    macro_rules! apply {
        ($($name:ident),*) => { $(if let Some(v) = raw.$name { config.$name = v; })* };
    }
    apply!(tol_grad, max_iter, starts, box_radius, seed, path_points, mp_step, dedup_tol);
    Ok(ProblemFile { spec, claims, c: raw.c, config })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn err(text: &str) -> String {
        parse_problem_file(text.as_bytes()).unwrap_err().to_string()
    }

    #[test]
    fn minimal_file() {
        let pf = parse_problem_file(br#"{"n":1,"N":2,"p":[1,1,1],"f":"x^3"}"#).unwrap();
        assert_eq!((pf.spec.order(), pf.spec.interior_len()), (1, 2));
        assert!(pf.claims.is_empty() && pf.c.is_none());
        assert_eq!(pf.config, SolverConfig::default());
    }

    #[test]
    fn rejected_files() {
        assert!(err(r#"{"n":1,"N":2,"p":[1,1],"f":"x"}"#).contains("N+n=3"));
        assert!(err(r#"{"n":1,"N":1,"p":[1,1],"f":"x"}"#).contains("N >= 2"));
        assert!(err(r#"{"n":1,"N":2,"p":[1,1,1],"f":"x^"}"#).starts_with("field 'f'"));
        let e = err("{\"n\":1,\n\"N\":2,\n\"p\":[1,1,1]\n\"f\":\"x\"}");
        assert!(e.starts_with("line 4"), "{e}");
        assert!(err(r#"{"n":1,"N":2,"p":[1,1,1],"f":"x","stars":5}"#).contains("unknown field"));
        let e = err(r#"{"n":1,"N":2,"p":[1,1,1],"f":"x","claims":[{"condition":"Z9","alpha":1}]}"#);
        assert!(e.contains("claims[0].condition"));
    }

    #[test]
    fn claims_and_overrides() {
        let pf = parse_problem_file(
            br#"{"n":1,"N":2,"p":[1,1,1],"f":"x^3","c":0,"starts":7,"box_radius":3,
                "claims":[{"condition":"A3.2","alpha":0.2,"q":4,"M":0}]}"#,
        )
        .unwrap();
        assert_eq!(pf.claims, vec![(ConditionId::A3_2, ConditionParams::new(0.2).with_q(4.0))]);
        assert_eq!(pf.c, Some(0.0));
        assert_eq!((pf.config.starts, pf.config.box_radius, pf.config.seed), (7, 3.0, 42));
    }
}
