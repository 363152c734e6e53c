//! Adaptive Simpson quadrature.

use thiserror::Error;

use super::EvalError;

/// Recursion depth at which a subinterval is declared non-convergent.
pub const MAX_DEPTH: u32 = 40;
const MAX_EVALS: usize = 20_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadratureError {
    #[error("adaptive Simpson did not converge on [{a}, {b}] within depth {MAX_DEPTH}")]
    NonConvergence { a: f64, b: f64 },
    #[error("adaptive Simpson exhausted its budget of {MAX_EVALS} integrand evaluations")]
    Budget,
    #[error(transparent)]
    Eval(#[from] EvalError),
}

struct Ctx<F> {
    f: F,
    evals: usize,
}

impl<F: Fn(f64) -> Result<f64, EvalError>> Ctx<F> {
    fn eval(&mut self, t: f64) -> Result<f64, QuadratureError> {
        self.evals += 1;
        if self.evals > MAX_EVALS {
            return Err(QuadratureError::Budget);
        }
        Ok((self.f)(t)?)
    }

    #[allow(clippy::too_many_arguments)]
    fn step(
        &mut self,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> Result<f64, QuadratureError> {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let flm = self.eval(lm)?;
        let frm = self.eval(rm)?;
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        // below this the estimate is dominated by rounding, not truncation
        let floor = 64.0 * f64::EPSILON * (left.abs() + right.abs());
        // likewise once the nodes are only a few hundred ulps apart
        let narrow = b - a <= 1024.0 * f64::EPSILON * a.abs().max(b.abs());
        if delta.abs() <= 15.0 * tol || delta.abs() <= floor || narrow {
            return Ok(left + right + delta / 15.0);
        }
        if depth >= MAX_DEPTH {
            return Err(QuadratureError::NonConvergence { a, b });
        }
        let l = self.step(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1)?;
        let r = self.step(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1)?;
        Ok(l + r)
    }
}

/// Signed integral of `f` over `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson<F>(f: F, a: f64, b: f64, tol: f64) -> Result<f64, QuadratureError>
where
    F: Fn(f64) -> Result<f64, EvalError>,
{
    if a == b {
        return Ok(0.0);
    }
    if b < a {
        return adaptive_simpson(f, b, a, tol).map(|v| -v);
    }
    let mut ctx = Ctx { f, evals: 0 };
    let fa = ctx.eval(a)?;
    let fb = ctx.eval(b)?;
    let m = 0.5 * (a + b);
    let fm = ctx.eval(m)?;
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    ctx.step(a, b, fa, fm, fb, whole, tol, 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ok(g: impl Fn(f64) -> f64) -> impl Fn(f64) -> Result<f64, EvalError> {
        move |t| Ok(g(t))
    }

    #[test]
    fn exponential() {
        let v = adaptive_simpson(ok(f64::exp), 0.0, 1.0, 1e-10).unwrap();
        assert!((v - (std::f64::consts::E - 1.0)).abs() < 1e-10);
    }

    #[test]
    fn reversed_bounds_flip_sign() {
        let fwd = adaptive_simpson(ok(f64::sin), 0.0, 2.0, 1e-12).unwrap();
        let back = adaptive_simpson(ok(f64::sin), 2.0, 0.0, 1e-12).unwrap();
        assert_eq!(fwd, -back);
        assert!((fwd - (1.0 - 2f64.cos())).abs() < 1e-12);
    }

    #[test]
    fn cubic_is_exact() {
        let v = adaptive_simpson(ok(|t| t * t * t - t), -1.0, 3.0, 1e-12).unwrap();
        assert!((v - 16.0).abs() < 1e-12);
    }

    #[test]
    fn large_magnitudes_terminate() {
        // values around 2e4 put the rounding floor above the absolute tolerance
        let v = adaptive_simpson(ok(f64::exp), 0.0, 10.0, 1e-13).unwrap();
        assert!((v - (10f64.exp() - 1.0)).abs() < 1e-8);
    }

    #[test]
    fn oscillation_far_from_origin_terminates() {
        // the zero of sin near 700 makes the local integrals vanish
        let (a, b) = (513.0, 700.2679000549922);
        let v = adaptive_simpson(ok(f64::sin), a, b, 1e-10).unwrap();
        assert!((v - (a.cos() - b.cos())).abs() < 1e-8);
    }

    #[test]
    fn singular_integrand_reports_non_convergence() {
        let err = adaptive_simpson(ok(|t: f64| 1.0 / t.abs().sqrt().max(1e-300).powi(3)), 0.0, 1.0, 1e-10);
        assert!(err.is_err());
    }

    #[test]
    fn evaluation_errors_propagate() {
        let f = |t: f64| if t > 0.5 { Err(EvalError::NonFinite { k: 1, x: t, value: f64::INFINITY }) } else { Ok(t) };
        assert!(matches!(adaptive_simpson(f, 0.0, 1.0, 1e-10), Err(QuadratureError::Eval(_))));
    }
}
