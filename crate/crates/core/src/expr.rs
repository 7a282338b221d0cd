//! Expression trees standing in for smooth maps `R^m -> R`.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use core::fmt;

use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::JetError;
use crate::parse::{Ast, ParseError, ParseErrorKind, Parser, Pos};
use crate::rational::{to_compact_string, to_f64, Rational};
use crate::scalar::Scalar;

/// Elementary functions applied through their Taylor series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Elementary {
    Exp,
    Log,
    Sin,
    Cos,
    Sqrt,
    /// `t ↦ t^r` for a rational exponent that is not a non-negative integer.
    Pow(Rational),
    /// `t ↦ 1/t`.
    Recip,
}

impl fmt::Display for Elementary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Elementary::Exp => f.write_str("exp"),
            Elementary::Log => f.write_str("log"),
            Elementary::Sin => f.write_str("sin"),
            Elementary::Cos => f.write_str("cos"),
            Elementary::Sqrt => f.write_str("sqrt"),
            Elementary::Pow(r) => write!(f, "pow(·, {})", to_compact_string(r)),
            Elementary::Recip => f.write_str("recip"),
        }
    }
}

impl Elementary {
    fn apply_f64(&self, t: f64) -> Result<f64, JetError> {
        let v = <f64 as Scalar>::series(self, &t, 1)?;
        Ok(v[0])
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Var(usize),
    Const(Rational),
    Add(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Pow(Box<Expr>, u32),
    Apply(Elementary, Box<Expr>),
}

impl Expr {
    pub fn var(i: usize) -> Expr {
        Expr::Var(i)
    }

    pub fn constant(q: Rational) -> Expr {
        Expr::Const(q)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(self, other: Expr) -> Expr {
        Expr::Add(Box::new(self), Box::new(other))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(self, other: Expr) -> Expr {
        Expr::Add(Box::new(self), Box::new(Expr::Neg(Box::new(other))))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(self, other: Expr) -> Expr {
        Expr::Mul(Box::new(self), Box::new(other))
    }

    pub fn pow(self, e: u32) -> Expr {
        Expr::Pow(Box::new(self), e)
    }

    pub fn apply(g: Elementary, arg: Expr) -> Expr {
        Expr::Apply(g, Box::new(arg))
    }

    /// Parses the smooth-map grammar: variables `u0, u1, ...`, `+ - * / ^`,
    /// rational or decimal literals, and `exp log sin cos sqrt` plus
    /// `pow(e, r)` for rational `r`.
    pub fn parse(text: &str) -> Result<Expr, ParseError> {
        let mut p = Parser::new(text)?;
        let ast = p.expr()?;
        p.expect_eof()?;
        lower(&ast)
    }

    /// One more than the largest variable index used (0 for constants).
    pub fn arity(&self) -> usize {
        match self {
            Expr::Var(i) => i + 1,
            Expr::Const(_) => 0,
            Expr::Add(a, b) | Expr::Mul(a, b) => a.arity().max(b.arity()),
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Apply(_, a) => a.arity(),
        }
    }

    /// `true` when no elementary function occurs.
    pub fn is_polynomial(&self) -> bool {
        match self {
            Expr::Var(_) | Expr::Const(_) => true,
            Expr::Add(a, b) | Expr::Mul(a, b) => a.is_polynomial() && b.is_polynomial(),
            Expr::Neg(a) | Expr::Pow(a, _) => a.is_polynomial(),
            Expr::Apply(..) => false,
        }
    }

    /// Replaces `u_i` by `args[i]`: the composite `self ∘ args`.
    pub fn substitute(&self, args: &[Expr]) -> Expr {
        match self {
            Expr::Var(i) => args[*i].clone(),
            Expr::Const(q) => Expr::Const(q.clone()),
            Expr::Add(a, b) => Expr::Add(Box::new(a.substitute(args)), Box::new(b.substitute(args))),
            Expr::Mul(a, b) => Expr::Mul(Box::new(a.substitute(args)), Box::new(b.substitute(args))),
            Expr::Neg(a) => Expr::Neg(Box::new(a.substitute(args))),
            Expr::Pow(a, e) => Expr::Pow(Box::new(a.substitute(args)), *e),
            Expr::Apply(g, a) => Expr::Apply(g.clone(), Box::new(a.substitute(args))),
        }
    }

    /// Classical evaluation in floating point.
    pub fn eval_f64(&self, x: &[f64]) -> Result<f64, JetError> {
        self.check_arity(x.len())?;
        self.eval_f64_inner(x)
    }

    fn eval_f64_inner(&self, x: &[f64]) -> Result<f64, JetError> {
        Ok(match self {
            Expr::Var(i) => x[*i],
            Expr::Const(q) => to_f64(q),
            Expr::Add(a, b) => a.eval_f64_inner(x)? + b.eval_f64_inner(x)?,
            Expr::Mul(a, b) => a.eval_f64_inner(x)? * b.eval_f64_inner(x)?,
            Expr::Neg(a) => -a.eval_f64_inner(x)?,
            Expr::Pow(a, e) => libm::pow(a.eval_f64_inner(x)?, f64::from(*e)),
            Expr::Apply(g, a) => g.apply_f64(a.eval_f64_inner(x)?)?,
        })
    }

    /// Classical exact evaluation; elementary functions only where the value
    /// is rational.
    pub fn eval_exact(&self, x: &[Rational]) -> Result<Rational, JetError> {
        self.check_arity(x.len())?;
        self.eval_exact_inner(x)
    }

    fn eval_exact_inner(&self, x: &[Rational]) -> Result<Rational, JetError> {
        Ok(match self {
            Expr::Var(i) => x[*i].clone(),
            Expr::Const(q) => q.clone(),
            Expr::Add(a, b) => a.eval_exact_inner(x)? + b.eval_exact_inner(x)?,
            Expr::Mul(a, b) => a.eval_exact_inner(x)? * b.eval_exact_inner(x)?,
            Expr::Neg(a) => -a.eval_exact_inner(x)?,
            Expr::Pow(a, e) => num_traits::pow(a.eval_exact_inner(x)?, *e as usize),
            Expr::Apply(g, a) => {
                let t = a.eval_exact_inner(x)?;
                <Rational as Scalar>::series(g, &t, 1)?.swap_remove(0)
            }
        })
    }

    pub(crate) fn check_arity(&self, found: usize) -> Result<(), JetError> {
        let expected = self.arity();
        if found < expected {
            return Err(JetError::Arity { expected, found });
        }
        Ok(())
    }
}

fn invalid(pos: Pos, msg: String) -> ParseError {
    ParseError::new(pos, ParseErrorKind::Invalid(msg))
}

fn lower(ast: &Ast) -> Result<Expr, ParseError> {
    if let Some(q) = ast.constant_value() {
        return Ok(Expr::Const(q));
    }
    Ok(match ast {
        Ast::Num(q, _) => Expr::Const(q.clone()),
        Ast::Ident(name, pos) => {
            let index = name
                .strip_prefix('u')
                .filter(|d| !d.is_empty() && d.chars().all(|c| c.is_ascii_digit()))
                .and_then(|d| d.parse::<usize>().ok())
                .ok_or_else(|| ParseError::new(*pos, ParseErrorKind::UndeclaredVariable(name.clone())))?;
            Expr::Var(index)
        }
        Ast::Neg(a) => Expr::Neg(Box::new(lower(a)?)),
        Ast::Add(a, b) => lower(a)?.add(lower(b)?),
        Ast::Sub(a, b) => lower(a)?.sub(lower(b)?),
        Ast::Mul(a, b) => lower(a)?.mul(lower(b)?),
        Ast::Div(a, b, pos) => match b.constant_value() {
            Some(d) if d.is_zero() => return Err(invalid(*pos, "division by zero".into())),
            Some(d) => lower(a)?.mul(Expr::Const(d.recip())),
            None => lower(a)?.mul(Expr::apply(Elementary::Recip, lower(b)?)),
        },
        Ast::Pow(a, b, pos) => {
            let r = b.constant_value().ok_or_else(|| invalid(*pos, "exponent must be a constant".into()))?;
            power(lower(a)?, r)
        }
        Ast::Call(name, args, pos) => {
            let unary = |g: Elementary| -> Result<Expr, ParseError> {
                match args.as_slice() {
                    [a] => Ok(Expr::apply(g, lower(a)?)),
                    _ => Err(invalid(*pos, format!("{name} takes one argument"))),
                }
            };
            match name.as_str() {
                "exp" => unary(Elementary::Exp)?,
                "log" => unary(Elementary::Log)?,
                "sin" => unary(Elementary::Sin)?,
                "cos" => unary(Elementary::Cos)?,
                "sqrt" => unary(Elementary::Sqrt)?,
                "pow" => match args.as_slice() {
                    [a, b] => {
                        let r =
                            b.constant_value().ok_or_else(|| invalid(b.pos(), "exponent must be a constant".into()))?;
                        power(lower(a)?, r)
                    }
                    _ => return Err(invalid(*pos, "pow takes two arguments".into())),
                },
                _ => return Err(invalid(*pos, format!("unknown function '{name}'"))),
            }
        }
    })
}

fn power(base: Expr, r: Rational) -> Expr {
    match r.to_u32() {
        Some(e) if r.is_integer() => base.pow(e),
        _ => Expr::apply(Elementary::Pow(r), base),
    }
}

fn write_const(f: &mut fmt::Formatter<'_>, q: &Rational) -> fmt::Result {
    if q.is_negative() || !q.is_integer() {
        write!(f, "({})", to_compact_string(q))
    } else {
        f.write_str(&to_compact_string(q))
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Var(i) => write!(f, "u{i}"),
            Expr::Const(q) => write_const(f, q),
            Expr::Add(a, b) => match b.as_ref() {
                Expr::Neg(c) => write!(f, "({a} - {c})"),
                _ => write!(f, "({a} + {b})"),
            },
            Expr::Mul(a, b) => match b.as_ref() {
                Expr::Apply(Elementary::Recip, c) => write!(f, "{a}/({c})"),
                Expr::Mul(..) => write!(f, "{a}*({b})"),
                _ => write!(f, "{a}*{b}"),
            },
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Pow(a, e) => match a.as_ref() {
                Expr::Var(_) => write!(f, "{a}^{e}"),
                _ => write!(f, "({a})^{e}"),
            },
            Expr::Apply(Elementary::Pow(r), a) => write!(f, "pow({a}, {})", to_compact_string(r)),
            Expr::Apply(Elementary::Recip, a) => write!(f, "1/({a})"),
            Expr::Apply(g, a) => write!(f, "{g}({a})"),
        }
    }
}
