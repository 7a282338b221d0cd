//! Independent reference values for the jet engine: symbolic
//! differentiation of expression trees, and central finite differences.

use num_traits::{One, Zero};
use weil_core::rational::{frac, int};
use weil_core::{Elementary, Expr, JetError, Rational};

fn constant(e: &Expr) -> Option<&Rational> {
    match e {
        Expr::Const(q) => Some(q),
        _ => None,
    }
}

fn sum(a: Expr, b: Expr) -> Expr {
    match (constant(&a), constant(&b)) {
        (Some(x), Some(y)) => Expr::Const(x + y),
        (Some(x), _) if x.is_zero() => b,
        (_, Some(y)) if y.is_zero() => a,
        _ => a.add(b),
    }
}

fn product(a: Expr, b: Expr) -> Expr {
    match (constant(&a), constant(&b)) {
        (Some(x), Some(y)) => Expr::Const(x * y),
        (Some(x), _) if x.is_zero() => Expr::Const(Rational::zero()),
        (_, Some(y)) if y.is_zero() => Expr::Const(Rational::zero()),
        (Some(x), _) if x.is_one() => b,
        (_, Some(y)) if y.is_one() => a,
        _ => a.mul(b),
    }
}

fn negate(a: Expr) -> Expr {
    match a {
        Expr::Const(q) => Expr::Const(-q),
        Expr::Neg(inner) => *inner,
        other => Expr::Neg(Box::new(other)),
    }
}

/// `∂e/∂u_var`, simplified only by constant folding and the units of `+`, `*`.
pub fn derivative(e: &Expr, var: usize) -> Expr {
    match e {
        Expr::Var(i) => Expr::Const(if *i == var { Rational::one() } else { Rational::zero() }),
        Expr::Const(_) => Expr::Const(Rational::zero()),
        Expr::Add(a, b) => sum(derivative(a, var), derivative(b, var)),
        Expr::Mul(a, b) => sum(product(derivative(a, var), (**b).clone()), product((**a).clone(), derivative(b, var))),
        Expr::Neg(a) => negate(derivative(a, var)),
        Expr::Pow(a, n) => match n {
            0 => Expr::Const(Rational::zero()),
            1 => derivative(a, var),
            _ => product(product(Expr::Const(int(i64::from(*n))), (**a).clone().pow(n - 1)), derivative(a, var)),
        },
        Expr::Apply(g, a) => {
            let inner = derivative(a, var);
            if constant(&inner).is_some_and(Zero::is_zero) {
                return Expr::Const(Rational::zero());
            }
            let a = (**a).clone();
            let outer = match g {
                Elementary::Exp => Expr::apply(Elementary::Exp, a),
                Elementary::Log => Expr::apply(Elementary::Recip, a),
                Elementary::Sin => Expr::apply(Elementary::Cos, a),
                Elementary::Cos => negate(Expr::apply(Elementary::Sin, a)),
                Elementary::Sqrt => product(Expr::Const(frac(1, 2)), Expr::apply(Elementary::Pow(frac(-1, 2)), a)),
                Elementary::Pow(r) => {
                    let lowered = r - Rational::one();
                    let power = if lowered.is_zero() {
                        Expr::Const(Rational::one())
                    } else {
                        Expr::apply(Elementary::Pow(lowered), a)
                    };
                    product(Expr::Const(r.clone()), power)
                }
                Elementary::Recip => negate(Expr::apply(Elementary::Recip, a).pow(2)),
            };
            product(outer, inner)
        }
    }
}

/// `f^(j)(x0) / j!` for `j = 0..=order`, in floating point.
pub fn taylor_f64(f: &Expr, x0: f64, order: usize) -> Result<Vec<f64>, JetError> {
    let mut out = Vec::with_capacity(order + 1);
    let mut d = f.clone();
    let mut factorial = 1.0;
    for j in 0..=order {
        if j > 0 {
            factorial *= j as f64;
            d = derivative(&d, 0);
        }
        out.push(d.eval_f64(&[x0])? / factorial);
    }
    Ok(out)
}

/// As [`taylor_f64`], evaluated exactly.
pub fn taylor_exact(f: &Expr, x0: &Rational, order: usize) -> Result<Vec<Rational>, JetError> {
    let mut out = Vec::with_capacity(order + 1);
    let mut d = f.clone();
    let mut factorial = Rational::one();
    for j in 0..=order {
        if j > 0 {
            factorial *= int(j as i64);
            d = derivative(&d, 0);
        }
        out.push(d.eval_exact(std::slice::from_ref(x0))? / &factorial);
    }
    Ok(out)
}

/// `(f(x0 + h) - f(x0 - h)) / 2h`.
pub fn central_difference(f: &Expr, x0: f64, h: f64) -> Result<f64, JetError> {
    Ok((f.eval_f64(&[x0 + h])? - f.eval_f64(&[x0 - h])?) / (2.0 * h))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(text: &str) -> Expr {
        Expr::parse(text).unwrap()
    }

    #[test]
    fn derivatives_of_polynomials() {
        let d = derivative(&e("u0^3 + 2*u0*u1"), 0);
        assert_eq!(d.eval_exact(&[int(2), int(5)]).unwrap(), int(12 + 10));
        let d = derivative(&e("u0^3 + 2*u0*u1"), 1);
        assert_eq!(d.eval_exact(&[int(2), int(5)]).unwrap(), int(4));
    }

    #[test]
    fn known_series() {
        let exp = taylor_exact(&e("exp(u0)"), &int(0), 4).unwrap();
        assert_eq!(exp, [int(1), int(1), frac(1, 2), frac(1, 6), frac(1, 24)]);
        let log = taylor_exact(&e("log(1 + u0)"), &int(0), 4).unwrap();
        assert_eq!(log, [int(0), int(1), frac(-1, 2), frac(1, 3), frac(-1, 4)]);
        let sqrt = taylor_exact(&e("sqrt(u0)"), &int(4), 2).unwrap();
        assert_eq!(sqrt, [int(2), frac(1, 4), frac(-1, 64)]);
    }

    #[test]
    fn difference_quotient_of_square() {
        let d = central_difference(&e("u0^2"), 3.0, 1e-3).unwrap();
        assert!((d - 6.0).abs() < 1e-9);
    }
}
