//! The nonlinearity `f(k, x)`: expression trees, parsing, symbolic
//! x-derivative and the antiderivative `F(k, s) = ∫₀ˢ f(k, t) dt`.

mod diff;
mod parse;
pub mod quadrature;

use std::fmt;

use thiserror::Error;

pub use diff::{diff_x, simplify};
pub use parse::{parse_expression, ParseError};
pub use quadrature::QuadratureError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("non-finite value {value} at k={k}, x={x}")]
    NonFinite { k: i64, x: f64, value: f64 },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NonlinearityError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Func {
    Sin,
    Cos,
    Exp,
    Tanh,
    Abs,
    /// Only produced by differentiating `abs`; not part of the input language.
    Sign,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Exp => "exp",
            Func::Tanh => "tanh",
            Func::Abs => "abs",
            Func::Sign => "sign",
        }
    }

    pub(crate) fn from_input_name(name: &str) -> Option<Func> {
        match name {
            "sin" => Some(Func::Sin),
            "cos" => Some(Func::Cos),
            "exp" => Some(Func::Exp),
            "tanh" => Some(Func::Tanh),
            "abs" => Some(Func::Abs),
            _ => None,
        }
    }

    pub fn apply(self, v: f64) -> f64 {
        match self {
            Func::Sin => v.sin(),
            Func::Cos => v.cos(),
            Func::Exp => v.exp(),
            Func::Tanh => v.tanh(),
            Func::Abs => v.abs(),
            Func::Sign => {
                if v > 0.0 {
                    1.0
                } else if v < 0.0 {
                    -1.0
                } else {
                    0.0
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    K,
    X,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Call(Func, Box<Expr>),
}

impl Expr {
    /// Evaluates at integer `k` and real `x`; non-finite results are errors.
    pub fn eval(&self, k: i64, x: f64) -> Result<f64, EvalError> {
        let value = self.eval_raw(k as f64, x);
        if value.is_finite() {
            Ok(value)
        } else {
            Err(EvalError::NonFinite { k, x, value })
        }
    }

    fn eval_raw(&self, k: f64, x: f64) -> f64 {
        match self {
            Expr::Num(c) => *c,
            Expr::K => k,
            Expr::X => x,
            Expr::Neg(a) => -a.eval_raw(k, x),
            Expr::Add(a, b) => a.eval_raw(k, x) + b.eval_raw(k, x),
            Expr::Sub(a, b) => a.eval_raw(k, x) - b.eval_raw(k, x),
            Expr::Mul(a, b) => a.eval_raw(k, x) * b.eval_raw(k, x),
            Expr::Div(a, b) => a.eval_raw(k, x) / b.eval_raw(k, x),
            Expr::Pow(a, e) => powu(a.eval_raw(k, x), *e),
            Expr::Call(f, a) => f.apply(a.eval_raw(k, x)),
        }
    }

    pub fn contains_x(&self) -> bool {
        match self {
            Expr::X => true,
            Expr::Num(_) | Expr::K => false,
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Call(_, a) => a.contains_x(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.contains_x() || b.contains_x()
            }
        }
    }

    pub fn contains_k(&self) -> bool {
        match self {
            Expr::K => true,
            Expr::Num(_) | Expr::X => false,
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Call(_, a) => a.contains_k(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.contains_k() || b.contains_k()
            }
        }
    }

    /// Polynomial in x: x never occurs inside a function call or a divisor.
    pub fn is_polynomial_in_x(&self) -> bool {
        match self {
            Expr::Num(_) | Expr::K | Expr::X => true,
            Expr::Neg(a) | Expr::Pow(a, _) => a.is_polynomial_in_x(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                a.is_polynomial_in_x() && b.is_polynomial_in_x()
            }
            Expr::Div(a, b) => a.is_polynomial_in_x() && !b.contains_x(),
            Expr::Call(_, a) => !a.contains_x(),
        }
    }

    /// True when some `abs` (or `sign`) is applied to an x-dependent argument.
    pub fn has_kink_in_x(&self) -> bool {
        match self {
            Expr::Num(_) | Expr::K | Expr::X => false,
            Expr::Call(Func::Abs | Func::Sign, a) => a.contains_x() || a.has_kink_in_x(),
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Call(_, a) => a.has_kink_in_x(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.has_kink_in_x() || b.has_kink_in_x()
            }
        }
    }

    /// Coefficients `c_0, c_1, ...` of the polynomial in x obtained by fixing k,
    /// or `None` when the tree is not polynomial in x.
    pub fn poly_coeffs(&self, k: i64) -> Option<Vec<f64>> {
        let kf = k as f64;
        match self {
            Expr::Num(c) => Some(vec![*c]),
            Expr::K => Some(vec![kf]),
            Expr::X => Some(vec![0.0, 1.0]),
            Expr::Neg(a) => Some(a.poly_coeffs(k)?.into_iter().map(|c| -c).collect()),
            Expr::Add(a, b) => Some(poly_combine(&a.poly_coeffs(k)?, &b.poly_coeffs(k)?, 1.0)),
            Expr::Sub(a, b) => Some(poly_combine(&a.poly_coeffs(k)?, &b.poly_coeffs(k)?, -1.0)),
            Expr::Mul(a, b) => Some(poly_mul(&a.poly_coeffs(k)?, &b.poly_coeffs(k)?)),
            Expr::Div(a, b) => {
                if b.contains_x() {
                    return None;
                }
                let d = b.eval_raw(kf, 0.0);
                Some(a.poly_coeffs(k)?.into_iter().map(|c| c / d).collect())
            }
            Expr::Pow(a, e) => {
                let base = a.poly_coeffs(k)?;
                let mut acc = vec![1.0];
                for _ in 0..*e {
                    acc = poly_mul(&acc, &base);
                }
                Some(acc)
            }
            Expr::Call(_, a) => {
                if a.contains_x() {
                    None
                } else {
                    Some(vec![self.eval_raw(kf, 0.0)])
                }
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Neg(_) => 3,
            Expr::Pow(..) => 4,
            Expr::Num(_) | Expr::K | Expr::X | Expr::Call(..) => 5,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min_precedence: u8) -> fmt::Result {
        if self.precedence() < min_precedence {
            write!(f, "(")?;
            self.write_at(f, 0)?;
            return write!(f, ")");
        }
        match self {
            Expr::Num(c) => write!(f, "{c}"),
            Expr::K => write!(f, "k"),
            Expr::X => write!(f, "x"),
            Expr::Neg(a) => {
                write!(f, "-")?;
                a.write_at(f, 4)
            }
            Expr::Add(a, b) => {
                a.write_at(f, 1)?;
                write!(f, " + ")?;
                b.write_at(f, 2)
            }
            Expr::Sub(a, b) => {
                a.write_at(f, 1)?;
                write!(f, " - ")?;
                b.write_at(f, 2)
            }
            Expr::Mul(a, b) => {
                a.write_at(f, 2)?;
                write!(f, "*")?;
                b.write_at(f, 3)
            }
            Expr::Div(a, b) => {
                a.write_at(f, 2)?;
                write!(f, "/")?;
                b.write_at(f, 3)
            }
            Expr::Pow(a, e) => {
                a.write_at(f, 5)?;
                write!(f, "^{e}")
            }
            Expr::Call(func, a) => {
                write!(f, "{}(", func.name())?;
                a.write_at(f, 0)?;
                write!(f, ")")
            }
        }
    }
}

/// Canonical text: minimal parentheses, `+`/`-` spaced, everything else tight.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_at(f, 0)
    }
}

fn powu(base: f64, e: u32) -> f64 {
    if e <= i32::MAX as u32 {
        base.powi(e as i32)
    } else {
        base.powf(e as f64)
    }
}

fn poly_combine(a: &[f64], b: &[f64], sign: f64) -> Vec<f64> {
    let mut out = vec![0.0; a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] += sign * c;
    }
    out
}

fn poly_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Absolute accuracy target for antiderivatives evaluated by quadrature.
pub const ANTIDERIVATIVE_TOL: f64 = 1e-10;
// Quadrature runs tighter than the target so finite differences of F stay clean.
const QUADRATURE_TOL: f64 = 1e-13;

/// A parsed nonlinearity together with its x-derivative.
#[derive(Debug, Clone, PartialEq)]
pub struct Nonlinearity {
    expr: Expr,
    derivative: Expr,
    polynomial: bool,
    kinked: bool,
}

impl Nonlinearity {
    pub fn new(expr: Expr) -> Self {
        let derivative = diff_x(&expr);
        let polynomial = expr.is_polynomial_in_x();
        let kinked = expr.has_kink_in_x();
        Self { expr, derivative, polynomial, kinked }
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        Ok(Self::new(parse_expression(text)?))
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn derivative(&self) -> &Expr {
        &self.derivative
    }

    pub fn is_polynomial(&self) -> bool {
        self.polynomial
    }

    /// Whether `abs` wraps an x-dependent argument, making `∂f/∂x` a.e. only.
    pub fn is_kinked(&self) -> bool {
        self.kinked
    }

    /// The negated nonlinearity `-f`.
    pub fn negated(&self) -> Self {
        Self::new(Expr::Neg(Box::new(self.expr.clone())))
    }

    pub fn value(&self, k: usize, x: f64) -> Result<f64, EvalError> {
        self.expr.eval(k as i64, x)
    }

    pub fn slope(&self, k: usize, x: f64) -> Result<f64, EvalError> {
        self.derivative.eval(k as i64, x)
    }

    /// `F(k, s)`: exact for polynomials, adaptive Simpson otherwise.
    pub fn antiderivative(&self, k: usize, s: f64) -> Result<f64, NonlinearityError> {
        if s == 0.0 {
            return Ok(0.0);
        }
        if self.polynomial {
            return self.poly_antiderivative(k, s);
        }
        let f = |t: f64| self.value(k, t);
        Ok(quadrature::adaptive_simpson(f, 0.0, s, QUADRATURE_TOL)?)
    }

    /// `F(k, s_i)` for magnitudes sorted ascending and all of one sign,
    /// integrating piece by piece so the whole range is swept once.
    pub fn antiderivative_sweep(&self, k: usize, points: &[f64]) -> Result<Vec<f64>, NonlinearityError> {
        if self.polynomial {
            return points.iter().map(|&s| self.poly_antiderivative(k, s)).collect();
        }
        let f = |t: f64| self.value(k, t);
        let mut out = Vec::with_capacity(points.len());
        let mut acc = 0.0;
        let mut prev: f64 = 0.0;
        for &s in points {
            debug_assert!(s.abs() >= prev.abs() && s * prev >= 0.0, "sweep points must move away from 0");
            acc += quadrature::adaptive_simpson(f, prev, s, QUADRATURE_TOL)?;
            out.push(acc);
            prev = s;
        }
        Ok(out)
    }

    fn poly_antiderivative(&self, k: usize, s: f64) -> Result<f64, NonlinearityError> {
        let coeffs = self.expr.poly_coeffs(k as i64).expect("polynomial flag checked");
        // Horner on Σ c_i s^(i+1)/(i+1)
        let mut acc = 0.0;
        for (i, c) in coeffs.iter().enumerate().rev() {
            acc = acc * s + c / (i + 1) as f64;
        }
        let value = acc * s;
        if value.is_finite() {
            Ok(value)
        } else {
            Err(EvalError::NonFinite { k: k as i64, x: s, value }.into())
        }
    }
}

/// `F(k, s)` for an arbitrary expression.
pub fn antiderivative(e: &Expr, k: usize, s: f64) -> Result<f64, NonlinearityError> {
    Nonlinearity::new(e.clone()).antiderivative(k, s)
}
