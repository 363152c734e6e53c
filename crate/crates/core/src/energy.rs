//! The action functional J, its derivatives, and the equation residual.
//!
//! With `A = Dᵀ diag(p) D`:
//!
//! * `J(x) = ½ xᵀAx − Σ_{k=1}^{N} F(k, x(k))`
//! * `∇J(x) = Ax − f(·, x)`
//! * `∇²J(x) = A − diag(∂f/∂x(·, x))`
//!
//! The residual is evaluated through the telescoped difference operator so
//! that `∇J = (−1)ⁿ r` is a genuine cross-check between two code paths.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::difference::{build_operator_matrix, weighted_divergence, weighted_gram, DifferenceError, DifferenceMatrix};
use crate::expr::{EvalError, Nonlinearity, NonlinearityError};
use crate::format::format_g17;
use crate::sequence_space::{norm_inf, InteriorVector};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ProblemError {
    #[error("N must be at least 2, got {0}")]
    TooShort(usize),
    #[error("n must be at least 1")]
    ZeroOrder,
    #[error("p must have N+n={expected} entries, got {got}")]
    CoefficientLength { expected: usize, got: usize },
    #[error("p({index}) is not finite")]
    NonFiniteCoefficient { index: isize },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EnergyError {
    #[error("point has {got} entries, problem has N={expected}")]
    Dimension { expected: usize, got: usize },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Nonlinearity(#[from] NonlinearityError),
    #[error(transparent)]
    Difference(#[from] DifferenceError),
    #[error("{0} is not finite at the given point")]
    NonFinite(&'static str),
}

/// A complete problem instance. Immutable once built.
#[derive(Debug, Clone)]
pub struct ProblemSpec {
    order: usize,
    interior_len: usize,
    p: Vec<f64>,
    f: Nonlinearity,
    description: Option<String>,
    operator: DifferenceMatrix,
    gram: DMatrix<f64>,
}

impl ProblemSpec {
    /// `p` lists `p(1-n), ..., p(N)`.
    pub fn new(
        order: usize,
        interior_len: usize,
        p: Vec<f64>,
        f: Nonlinearity,
        description: Option<String>,
    ) -> Result<Self, ProblemError> {
        if interior_len < 2 {
            return Err(ProblemError::TooShort(interior_len));
        }
        if order < 1 {
            return Err(ProblemError::ZeroOrder);
        }
        if p.len() != interior_len + order {
            return Err(ProblemError::CoefficientLength { expected: interior_len + order, got: p.len() });
        }
        if let Some(i) = p.iter().position(|v| !v.is_finite()) {
            return Err(ProblemError::NonFiniteCoefficient { index: i as isize + 1 - order as isize });
        }
        let operator = build_operator_matrix(interior_len, order).expect("dimensions validated");
        let gram = weighted_gram(&operator, &p).expect("length validated");
        Ok(Self { order, interior_len, p, f, description, operator, gram })
    }

    /// The order parameter n.
    pub fn order(&self) -> usize {
        self.order
    }

    /// The interior length N.
    pub fn interior_len(&self) -> usize {
        self.interior_len
    }

    pub fn p(&self) -> &[f64] {
        &self.p
    }

    pub fn f(&self) -> &Nonlinearity {
        &self.f
    }

    pub fn description(&self) -> Option<&str> {
        self.description.as_deref()
    }

    pub fn operator(&self) -> &DifferenceMatrix {
        &self.operator
    }

    /// `A = Dᵀ diag(p) D`.
    pub fn gram(&self) -> &DMatrix<f64> {
        &self.gram
    }

    pub fn p_min(&self) -> f64 {
        self.p.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn p_max(&self) -> f64 {
        self.p.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// The instance `(−p, −f)`, whose energy is `−J`.
    pub fn negated(&self) -> Self {
        let p = self.p.iter().map(|v| -v).collect();
        Self::new(self.order, self.interior_len, p, self.f.negated(), self.description.clone())
            .expect("negation preserves validity")
    }

    /// Canonical JSON of the mathematical content: sorted keys, 17 significant
    /// digits, the expression in canonical print form.
    pub fn canonical_json(&self) -> String {
        let p: Vec<String> = self.p.iter().map(|&v| format_g17(v)).collect();
        let f = self.f.expr().to_string();
        let mut quoted = String::with_capacity(f.len() + 2);
        quoted.push('"');
        for c in f.chars() {
            match c {
                '"' => quoted.push_str("\\\""),
                '\\' => quoted.push_str("\\\\"),
                c => quoted.push(c),
            }
        }
        quoted.push('"');
        format!("{{\"N\":{},\"f\":{},\"n\":{},\"p\":[{}]}}", self.interior_len, quoted, self.order, p.join(","))
    }

    /// Hex SHA-256 of [`Self::canonical_json`].
    pub fn fingerprint(&self) -> String {
        hex::encode(Sha256::digest(self.canonical_json().as_bytes()))
    }

    fn check(&self, x: &[f64]) -> Result<(), EnergyError> {
        if x.len() != self.interior_len {
            return Err(EnergyError::Dimension { expected: self.interior_len, got: x.len() });
        }
        Ok(())
    }
}

fn quadratic(prob: &ProblemSpec, x: &[f64]) -> f64 {
    let a = &prob.gram;
    let n = x.len();
    let mut s = 0.0;
    for j in 0..n {
        let mut row = 0.0;
        for i in 0..n {
            row += a[(i, j)] * x[i];
        }
        s += row * x[j];
    }
    0.5 * s
}

pub(crate) fn energy_at(prob: &ProblemSpec, x: &[f64]) -> Result<f64, EnergyError> {
    prob.check(x)?;
    let mut big_f = 0.0;
    for (i, &v) in x.iter().enumerate() {
        big_f += prob.f.antiderivative(i + 1, v)?;
    }
    let j = quadratic(prob, x) - big_f;
    if !j.is_finite() {
        return Err(EnergyError::NonFinite("J"));
    }
    Ok(j)
}

pub(crate) fn gradient_at(prob: &ProblemSpec, x: &[f64]) -> Result<Vec<f64>, EnergyError> {
    prob.check(x)?;
    let ax = &prob.gram * DVector::from_column_slice(x);
    let mut g = Vec::with_capacity(x.len());
    for (i, &v) in x.iter().enumerate() {
        g.push(ax[i] - prob.f.value(i + 1, v)?);
    }
    if g.iter().any(|v| !v.is_finite()) {
        return Err(EnergyError::NonFinite("gradient"));
    }
    Ok(g)
}

pub(crate) fn hessian_at(prob: &ProblemSpec, x: &[f64]) -> Result<DMatrix<f64>, EnergyError> {
    prob.check(x)?;
    let mut h = prob.gram.clone();
    for (i, &v) in x.iter().enumerate() {
        h[(i, i)] -= prob.f.slope(i + 1, v)?;
    }
    if h.iter().any(|v| !v.is_finite()) {
        return Err(EnergyError::NonFinite("hessian"));
    }
    Ok(h)
}

pub(crate) fn residual_at(prob: &ProblemSpec, x: &InteriorVector) -> Result<Vec<f64>, EnergyError> {
    prob.check(x.as_slice())?;
    let mut r = weighted_divergence(x, &prob.p, prob.order)?;
    let sign = if prob.order % 2 == 0 { -1.0 } else { 1.0 };
    for (i, ri) in r.iter_mut().enumerate() {
        *ri += sign * prob.f.value(i + 1, x.at(i + 1))?;
    }
    if r.iter().any(|v| !v.is_finite()) {
        return Err(EnergyError::NonFinite("residual"));
    }
    Ok(r)
}

fn to_vector(v: Vec<f64>, what: &'static str) -> Result<InteriorVector, EnergyError> {
    InteriorVector::new(v).map_err(|_| EnergyError::NonFinite(what))
}

/// `J(x)`.
#[allow(non_snake_case)]
pub fn energy_J(prob: &ProblemSpec, x: &InteriorVector) -> Result<f64, EnergyError> {
    energy_at(prob, x.as_slice())
}

/// `Ax − (f(1, x(1)), ..., f(N, x(N)))`.
pub fn gradient(prob: &ProblemSpec, x: &InteriorVector) -> Result<InteriorVector, EnergyError> {
    to_vector(gradient_at(prob, x.as_slice())?, "gradient")
}

/// Second derivative of J; `approximate` when f has a kink in x.
#[derive(Debug, Clone, PartialEq)]
pub struct Hessian {
    pub matrix: DMatrix<f64>,
    pub approximate: bool,
}

pub fn hessian(prob: &ProblemSpec, x: &InteriorVector) -> Result<Hessian, EnergyError> {
    Ok(Hessian { matrix: hessian_at(prob, x.as_slice())?, approximate: prob.f.is_kinked() })
}

/// `Δⁿ(p(k−n)Δⁿx(k−n)) + (−1)ⁿ⁺¹ f(k, x(k))` for `k ∈ Z[1, N]`.
pub fn residual(prob: &ProblemSpec, x: &InteriorVector) -> Result<InteriorVector, EnergyError> {
    to_vector(residual_at(prob, x)?, "residual")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[allow(non_snake_case)]
pub struct EnergyReport {
    pub J: f64,
    pub grad: InteriorVector,
    pub grad_norm_inf: f64,
    pub residual_norm_inf: f64,
}

pub fn energy_report(prob: &ProblemSpec, x: &InteriorVector) -> Result<EnergyReport, EnergyError> {
    let j = energy_J(prob, x)?;
    let grad = gradient(prob, x)?;
    let r = residual_at(prob, x)?;
    Ok(EnergyReport {
        J: j,
        grad_norm_inf: grad.max_abs(),
        grad,
        residual_norm_inf: norm_inf(&r),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::difference::embedding_constants;
    use proptest::prelude::*;

    fn prob(n: usize, len: usize, p: Vec<f64>, f: &str) -> ProblemSpec {
        ProblemSpec::new(n, len, p, Nonlinearity::parse(f).unwrap(), None).unwrap()
    }

    fn iv(v: &[f64]) -> InteriorVector {
        InteriorVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn rejects_invalid_problems() {
        let f = Nonlinearity::parse("x").unwrap();
        assert_eq!(ProblemSpec::new(1, 1, vec![1.0; 2], f.clone(), None).unwrap_err(), ProblemError::TooShort(1));
        assert_eq!(ProblemSpec::new(0, 2, vec![1.0; 2], f.clone(), None).unwrap_err(), ProblemError::ZeroOrder);
        assert_eq!(
            ProblemSpec::new(1, 2, vec![1.0; 2], f.clone(), None).unwrap_err(),
            ProblemError::CoefficientLength { expected: 3, got: 2 }
        );
        assert_eq!(
            ProblemSpec::new(2, 2, vec![1.0, f64::NAN, 1.0, 1.0], f, None).unwrap_err(),
            ProblemError::NonFiniteCoefficient { index: 0 }
        );
    }

    #[test]
    fn energy_examples() {
        let zero = prob(1, 2, vec![1.0; 3], "0");
        assert_eq!(energy_J(&zero, &iv(&[1.0, 1.0])).unwrap(), 1.0);
        let cubic = prob(1, 2, vec![1.0; 3], "x^3");
        // ½·2 − 2·(1/4)
        assert!((energy_J(&cubic, &iv(&[1.0, 1.0])).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(energy_J(&cubic, &iv(&[0.0, 0.0])).unwrap(), 0.0);
        let s = 3f64.sqrt();
        assert!((energy_J(&cubic, &iv(&[s, -s])).unwrap() - 4.5).abs() < 1e-13);
    }

    #[test]
    fn gradient_examples() {
        let zero = prob(1, 2, vec![1.0; 3], "0");
        assert_eq!(gradient(&zero, &iv(&[1.0, 1.0])).unwrap().as_slice(), &[1.0, 1.0]);
        let cubic = prob(1, 2, vec![1.0; 3], "x^3");
        assert_eq!(gradient(&cubic, &iv(&[1.0, 1.0])).unwrap().as_slice(), &[0.0, 0.0]);
    }

    #[test]
    fn hessian_examples() {
        let cubic = prob(1, 2, vec![1.0; 3], "x^3");
        let h = hessian(&cubic, &iv(&[0.0, 0.0])).unwrap();
        assert_eq!(h.matrix, DMatrix::from_row_slice(2, 2, &[2.0, -1.0, -1.0, 2.0]));
        assert!(!h.approximate);
        let h = hessian(&cubic, &iv(&[1.0, 1.0])).unwrap();
        assert_eq!(h.matrix, DMatrix::from_row_slice(2, 2, &[-1.0, -1.0, -1.0, -1.0]));
        let zero = prob(1, 2, vec![1.0; 3], "0");
        assert_eq!(&hessian(&zero, &iv(&[3.0, -7.0])).unwrap().matrix, zero.gram());
        let kinked = prob(1, 2, vec![1.0; 3], "abs(x)*x");
        assert!(hessian(&kinked, &iv(&[1.0, 1.0])).unwrap().approximate);
    }

    #[test]
    fn residual_examples() {
        let cubic = prob(1, 2, vec![1.0; 3], "x^3");
        assert_eq!(residual(&cubic, &iv(&[1.0, 1.0])).unwrap().as_slice(), &[0.0, 0.0]);
        assert_eq!(residual(&cubic, &iv(&[0.0, 0.0])).unwrap().as_slice(), &[0.0, 0.0]);
        let zero = prob(1, 2, vec![1.0; 3], "0");
        assert_eq!(residual(&zero, &iv(&[1.0, 1.0])).unwrap().as_slice(), &[-1.0, -1.0]);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let cubic = prob(1, 2, vec![1.0; 3], "x^3");
        assert!(matches!(energy_J(&cubic, &iv(&[1.0, 1.0, 1.0])), Err(EnergyError::Dimension { .. })));
    }

    #[test]
    fn report_collects_norms() {
        let zero = prob(1, 2, vec![1.0; 3], "0");
        let r = energy_report(&zero, &iv(&[1.0, 1.0])).unwrap();
        assert_eq!((r.J, r.grad_norm_inf, r.residual_norm_inf), (1.0, 1.0, 1.0));
    }

    #[test]
    fn fingerprint_depends_on_content_only() {
        let a = prob(1, 2, vec![1.0; 3], "x^3");
        let b = ProblemSpec::new(1, 2, vec![1.0; 3], Nonlinearity::parse("x ^ 3").unwrap(), Some("same".into())).unwrap();
        let c = prob(1, 2, vec![1.0, 1.0, 2.0], "x^3");
        assert_eq!(a.fingerprint(), b.fingerprint());
        assert_ne!(a.fingerprint(), c.fingerprint());
        assert_eq!(a.canonical_json(), "{\"N\":2,\"f\":\"x^3\",\"n\":1,\"p\":[1,1,1]}");
        assert_eq!(a.fingerprint().len(), 64);
    }

    #[test]
    fn negation_flips_energy() {
        let a = prob(2, 3, vec![1.0, -0.5, 2.0, 0.25, 1.5], "sin(x) + k*x^2");
        let x = iv(&[0.3, -1.2, 0.8]);
        let j = energy_J(&a, &x).unwrap();
        assert!((energy_J(&a.negated(), &x).unwrap() + j).abs() < 1e-13);
    }

    const SMOOTH: &[&str] = &["x^3 - k*x", "sin(x)*k", "exp(x/4) - 1", "tanh(x) + x^2/k", "0"];

    fn instance() -> impl Strategy<Value = (ProblemSpec, Vec<f64>)> {
        (1usize..=3, 2usize..=8, 0..SMOOTH.len()).prop_flat_map(|(n, len, fi)| {
            (
                prop::collection::vec(-2.0..2.0_f64, len + n),
                prop::collection::vec(-1.5..1.5_f64, len),
            )
                .prop_map(move |(p, x)| (prob(n, len, p, SMOOTH[fi]), x))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn gradient_is_signed_residual((pr, x) in instance()) {
            let x = iv(&x);
            let g = gradient(&pr, &x).unwrap();
            let r = residual(&pr, &x).unwrap();
            let sign = if pr.order() % 2 == 0 { 1.0 } else { -1.0 };
            let scale = g.max_abs().max(r.max_abs()).max(1e-300);
            for (gi, ri) in g.as_slice().iter().zip(r.as_slice()) {
                prop_assert!((gi - sign * ri).abs() <= 1e-12 * scale, "{} vs {}", gi, ri);
            }
        }

        #[test]
        fn gradient_matches_central_differences((pr, x) in instance()) {
            let h = 1e-6;
            let g = gradient_at(&pr, &x).unwrap();
            let scale = norm_inf(&g).max(1.0);
            for i in 0..x.len() {
                let (mut xp, mut xm) = (x.clone(), x.clone());
                xp[i] += h;
                xm[i] -= h;
                let fd = (energy_at(&pr, &xp).unwrap() - energy_at(&pr, &xm).unwrap()) / (2.0 * h);
                prop_assert!((fd - g[i]).abs() <= 1e-6 * scale, "component {}: {} vs {}", i, fd, g[i]);
            }
        }

        #[test]
        fn hessian_matches_forward_differences((pr, x) in instance()) {
            let h = 1e-7;
            let hm = hessian_at(&pr, &x).unwrap();
            let g0 = gradient_at(&pr, &x).unwrap();
            for j in 0..x.len() {
                let mut xp = x.clone();
                xp[j] += h;
                let g1 = gradient_at(&pr, &xp).unwrap();
                for i in 0..x.len() {
                    let fd = (g1[i] - g0[i]) / h;
                    prop_assert!((fd - hm[(i, j)]).abs() <= 1e-5, "({}, {}): {} vs {}", i, j, fd, hm[(i, j)]);
                }
            }
            prop_assert_eq!(hm.clone(), hm.transpose());
        }

        #[test]
        fn coercivity_estimate_for_zero_nonlinearity(
            (n, len, p, x) in (1usize..=3, 2usize..=10).prop_flat_map(|(n, len)| (
                Just(n), Just(len),
                prop::collection::vec(0.1..3.0_f64, len + n),
                prop::collection::vec(-10.0..10.0_f64, len),
            ))
        ) {
            let pr = prob(n, len, p, "0");
            let lambda = embedding_constants(len, n).unwrap().lambda_min;
            let x = iv(&x);
            let j = energy_J(&pr, &x).unwrap();
            let bound = 0.5 * lambda * pr.p_min() * x.norm().powi(2);
            prop_assert!(j >= bound * (1.0 - 1e-10) - 1e-12, "{} < {}", j, bound);
        }
    }
}
