//! Symbolic ∂/∂x and a small algebraic simplifier.

use super::{Expr, Func};

fn b(e: Expr) -> Box<Expr> {
    Box::new(e)
}

/// Literal value of `e` if it is a number or a negated number.
fn as_const(e: &Expr) -> Option<f64> {
    match e {
        Expr::Num(c) => Some(*c),
        Expr::Neg(a) => match a.as_ref() {
            Expr::Num(c) => Some(-c),
            _ => None,
        },
        _ => None,
    }
}

/// Numbers are kept non-negative; a negative constant becomes `Neg(Num)`.
fn num(c: f64) -> Expr {
    if c < 0.0 {
        Expr::Neg(b(Expr::Num(-c)))
    } else {
        Expr::Num(c + 0.0)
    }
}

fn is(e: &Expr, v: f64) -> bool {
    as_const(e) == Some(v)
}

/// Symbolic derivative with respect to x, simplified.
///
/// `d/dx abs(u) = sign(u) u'` with `sign(0) = 0`.
pub fn diff_x(e: &Expr) -> Expr {
    simplify(&raw_diff(e))
}

fn raw_diff(e: &Expr) -> Expr {
    if !e.contains_x() {
        return Expr::Num(0.0);
    }
    match e {
        Expr::Num(_) | Expr::K => Expr::Num(0.0),
        Expr::X => Expr::Num(1.0),
        Expr::Neg(a) => Expr::Neg(b(raw_diff(a))),
        Expr::Add(a, c) => Expr::Add(b(raw_diff(a)), b(raw_diff(c))),
        Expr::Sub(a, c) => Expr::Sub(b(raw_diff(a)), b(raw_diff(c))),
        Expr::Mul(a, c) => Expr::Add(
            b(Expr::Mul(b(raw_diff(a)), c.clone())),
            b(Expr::Mul(a.clone(), b(raw_diff(c)))),
        ),
        Expr::Div(a, c) => {
            if c.contains_x() {
                // quotient rule; unreachable for parsed input
                Expr::Div(
                    b(Expr::Sub(
                        b(Expr::Mul(b(raw_diff(a)), c.clone())),
                        b(Expr::Mul(a.clone(), b(raw_diff(c)))),
                    )),
                    b(Expr::Pow(c.clone(), 2)),
                )
            } else {
                Expr::Div(b(raw_diff(a)), c.clone())
            }
        }
        Expr::Pow(_, 0) => Expr::Num(0.0),
        Expr::Pow(a, n) => Expr::Mul(
            b(Expr::Mul(b(Expr::Num(*n as f64)), b(Expr::Pow(a.clone(), n - 1)))),
            b(raw_diff(a)),
        ),
        Expr::Call(f, a) => {
            let outer = match f {
                Func::Sin => Expr::Call(Func::Cos, a.clone()),
                Func::Cos => Expr::Neg(b(Expr::Call(Func::Sin, a.clone()))),
                Func::Exp => Expr::Call(Func::Exp, a.clone()),
                Func::Tanh => Expr::Sub(
                    b(Expr::Num(1.0)),
                    b(Expr::Pow(b(Expr::Call(Func::Tanh, a.clone())), 2)),
                ),
                Func::Abs => Expr::Call(Func::Sign, a.clone()),
                Func::Sign => return Expr::Num(0.0),
            };
            match outer {
                // keep the sign in front: -sin(u)*u' rather than (-sin(u))*u'
                Expr::Neg(inner) => Expr::Neg(b(Expr::Mul(inner, b(raw_diff(a))))),
                other => Expr::Mul(b(other), b(raw_diff(a))),
            }
        }
    }
}

/// Bottom-up simplification: identities for 0 and 1, constant folding, and
/// sign normalisation. Never changes the value of the expression.
pub fn simplify(e: &Expr) -> Expr {
    match e {
        Expr::Num(_) | Expr::K | Expr::X => e.clone(),
        Expr::Neg(a) => {
            let a = simplify(a);
            if let Some(c) = as_const(&a) {
                return num(-c);
            }
            match a {
                Expr::Neg(inner) => *inner,
                other => Expr::Neg(b(other)),
            }
        }
        Expr::Add(l, r) => {
            let (l, r) = (simplify(l), simplify(r));
            match (as_const(&l), as_const(&r)) {
                (Some(x), Some(y)) => num(x + y),
                (Some(x), _) if x == 0.0 => r,
                (_, Some(y)) if y == 0.0 => l,
                _ => match r {
                    Expr::Neg(inner) => Expr::Sub(b(l), inner),
                    r => Expr::Add(b(l), b(r)),
                },
            }
        }
        Expr::Sub(l, r) => {
            let (l, r) = (simplify(l), simplify(r));
            match (as_const(&l), as_const(&r)) {
                (Some(x), Some(y)) => num(x - y),
                (Some(x), _) if x == 0.0 => simplify(&Expr::Neg(b(r))),
                (_, Some(y)) if y == 0.0 => l,
                _ => match r {
                    Expr::Neg(inner) => Expr::Add(b(l), inner),
                    r => Expr::Sub(b(l), b(r)),
                },
            }
        }
        Expr::Mul(l, r) => {
            let (l, r) = (simplify(l), simplify(r));
            if is(&l, 0.0) || is(&r, 0.0) {
                return Expr::Num(0.0);
            }
            if let (Some(x), Some(y)) = (as_const(&l), as_const(&r)) {
                return num(x * y);
            }
            if is(&l, 1.0) {
                return r;
            }
            if is(&r, 1.0) {
                return l;
            }
            if is(&l, -1.0) {
                return simplify(&Expr::Neg(b(r)));
            }
            if is(&r, -1.0) {
                return simplify(&Expr::Neg(b(l)));
            }
            // pull signs out of products
            match (l, r) {
                (Expr::Neg(a), Expr::Neg(c)) => simplify(&Expr::Mul(a, c)),
                (Expr::Neg(a), c) => Expr::Neg(b(Expr::Mul(a, b(c)))),
                (a, Expr::Neg(c)) => Expr::Neg(b(Expr::Mul(b(a), c))),
                // constant coefficients gather on the left: c1*(c2*u) -> (c1 c2)*u
                (Expr::Num(x), Expr::Mul(inner_l, inner_r)) if matches!(*inner_l, Expr::Num(_)) => {
                    let y = as_const(&inner_l).unwrap_or(1.0);
                    simplify(&Expr::Mul(b(num(x * y)), inner_r))
                }
                (a, c) => Expr::Mul(b(a), b(c)),
            }
        }
        Expr::Div(l, r) => {
            let (l, r) = (simplify(l), simplify(r));
            if is(&l, 0.0) {
                return Expr::Num(0.0);
            }
            if is(&r, 1.0) {
                return l;
            }
            match (as_const(&l), as_const(&r)) {
                (Some(x), Some(y)) if y != 0.0 => num(x / y),
                _ => match l {
                    Expr::Neg(a) => Expr::Neg(b(Expr::Div(a, b(r)))),
                    l => Expr::Div(b(l), b(r)),
                },
            }
        }
        Expr::Pow(a, n) => {
            let a = simplify(a);
            match (*n, as_const(&a)) {
                (0, _) => Expr::Num(1.0),
                (1, _) => a,
                (n, Some(c)) => num(c.powi(n as i32)),
                (n, None) => Expr::Pow(b(a), n),
            }
        }
        Expr::Call(f, a) => {
            let a = simplify(a);
            match as_const(&a) {
                Some(c) => num(f.apply(c)),
                None => Expr::Call(*f, b(a)),
            }
        }
    }
}
