//! Coefficient fields for algebra elements: exact rationals and `f64`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::{Debug, Write};
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::algebra::{Expansion, WeilAlgebra};
use crate::error::JetError;
use crate::expr::Elementary;
use crate::poly::format_terms;
use crate::rational::{exact_pow, int, to_compact_string, to_f64, Rational};

/// Scalars an [`Element`](crate::Element) can carry.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// `true` for exact arithmetic.
    const EXACT: bool;

    fn from_rational(q: &Rational) -> Self;

    fn to_f64(&self) -> f64;

    /// The algebra's structure constants in this scalar type.
    fn structure(alg: &WeilAlgebra) -> &[Expansion<Self>];

    /// The first `count` Taylor coefficients `g^(j)(a0) / j!` of `g` at `a0`.
    fn series(g: &Elementary, a0: &Self, count: usize) -> Result<Vec<Self>, JetError>;

    fn format_expansion<I: IntoIterator<Item = (String, Self)>>(terms: I) -> String;
}

fn factorials(count: usize) -> Vec<Rational> {
    let mut out = Vec::with_capacity(count);
    let mut f = Rational::one();
    for j in 0..count {
        if j > 0 {
            f *= int(j as i64);
        }
        out.push(f.clone());
    }
    out
}

/// `binom(r, j)` for rational `r`.
fn binomial(r: &Rational, j: usize) -> Rational {
    let mut out = Rational::one();
    for i in 0..j {
        out = out * (r - int(i as i64)) / int(i as i64 + 1);
    }
    out
}

fn domain(msg: String) -> JetError {
    JetError::Domain(msg)
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }

    fn to_f64(&self) -> f64 {
        to_f64(self)
    }

    fn structure(alg: &WeilAlgebra) -> &[Expansion<Self>] {
        alg.table_exact()
    }

    fn series(g: &Elementary, a0: &Self, count: usize) -> Result<Vec<Self>, JetError> {
        let fact = factorials(count);
        let at = to_compact_string(a0);
        let irrational = || JetError::Mode(format!("{g} at {at}"));
        match g {
            Elementary::Exp => {
                if !a0.is_zero() {
                    return Err(irrational());
                }
                Ok(fact.iter().map(Rational::recip).collect())
            }
            Elementary::Sin | Elementary::Cos => {
                if !a0.is_zero() {
                    return Err(irrational());
                }
                let shift = usize::from(matches!(g, Elementary::Cos));
                Ok((0..count)
                    .map(|j| match (j + shift) % 4 {
                        1 => fact[j].recip(),
                        3 => -fact[j].recip(),
                        _ => Rational::zero(),
                    })
                    .collect())
            }
            Elementary::Log => {
                if !a0.is_positive() {
                    return Err(domain(format!("log at {at}")));
                }
                if !a0.is_one() {
                    return Err(irrational());
                }
                Ok((0..count)
                    .map(|j| match j {
                        0 => Rational::zero(),
                        _ if j % 2 == 1 => int(j as i64).recip(),
                        _ => -int(j as i64).recip(),
                    })
                    .collect())
            }
            Elementary::Sqrt => Self::series(&Elementary::Pow(Rational::new(1.into(), 2.into())), a0, count),
            Elementary::Pow(r) => {
                check_pow_domain(r, a0.is_negative(), a0.is_zero(), count, &at)?;
                if a0.is_zero() {
                    // r is a non-negative integer here
                    return Ok((0..count)
                        .map(|j| if int(j as i64) == *r { Rational::one() } else { Rational::zero() })
                        .collect());
                }
                let head = exact_pow(a0, r).ok_or_else(irrational)?;
                let inv = a0.recip();
                let mut power = head;
                let mut out = Vec::with_capacity(count);
                for j in 0..count {
                    out.push(binomial(r, j) * &power);
                    power *= &inv;
                }
                Ok(out)
            }
            Elementary::Recip => {
                if a0.is_zero() {
                    return Err(domain("division by an element with zero base value".into()));
                }
                let inv = a0.recip();
                let mut term = inv.clone();
                let mut out = Vec::with_capacity(count);
                for _ in 0..count {
                    out.push(term.clone());
                    term = -(term * &inv);
                }
                Ok(out)
            }
        }
    }

    fn format_expansion<I: IntoIterator<Item = (String, Self)>>(terms: I) -> String {
        format_terms(terms)
    }
}

fn check_pow_domain(r: &Rational, negative: bool, zero: bool, count: usize, at: &str) -> Result<(), JetError> {
    let natural = r.is_integer() && !r.is_negative();
    if negative && !r.is_integer() {
        return Err(domain(format!("non-integer power of negative base {at}")));
    }
    if zero && !natural && !(count <= 1 && r.is_positive()) {
        return Err(domain(format!("power {} at base 0", to_compact_string(r))));
    }
    Ok(())
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_rational(q: &Rational) -> Self {
        to_f64(q)
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn structure(alg: &WeilAlgebra) -> &[Expansion<Self>] {
        alg.table_float()
    }

    fn series(g: &Elementary, a0: &Self, count: usize) -> Result<Vec<Self>, JetError> {
        let a0 = *a0;
        let fact: Vec<f64> = factorials(count).iter().map(to_f64).collect();
        let out = match g {
            Elementary::Exp => {
                let e = libm::exp(a0);
                fact.iter().map(|f| e / f).collect()
            }
            Elementary::Sin | Elementary::Cos => {
                let (s, c) = (libm::sin(a0), libm::cos(a0));
                let cycle = [s, c, -s, -c];
                let shift = usize::from(matches!(g, Elementary::Cos));
                (0..count).map(|j| cycle[(j + shift) % 4] / fact[j]).collect()
            }
            Elementary::Log => {
                if a0 <= 0.0 || a0.is_nan() {
                    return Err(domain(format!("log at {a0}")));
                }
                (0..count)
                    .map(|j| match j {
                        0 => libm::log(a0),
                        _ => {
                            let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
                            sign / (j as f64 * libm::pow(a0, j as f64))
                        }
                    })
                    .collect()
            }
            Elementary::Sqrt => return Self::series(&Elementary::Pow(Rational::new(1.into(), 2.into())), &a0, count),
            Elementary::Pow(r) => {
                check_pow_domain(r, a0 < 0.0, a0 == 0.0, count, &format!("{a0}"))?;
                let rf = to_f64(r);
                (0..count).map(|j| to_f64(&binomial(r, j)) * libm::pow(a0, rf - j as f64)).collect()
            }
            Elementary::Recip => {
                if a0 == 0.0 {
                    return Err(domain("division by an element with zero base value".into()));
                }
                let inv = 1.0 / a0;
                let mut term = inv;
                let mut out = Vec::with_capacity(count);
                for _ in 0..count {
                    out.push(term);
                    term = -term * inv;
                }
                out
            }
        };
        Ok(out)
    }

    fn format_expansion<I: IntoIterator<Item = (String, Self)>>(terms: I) -> String {
        let mut out = String::new();
        for (label, c) in terms {
            if c == 0.0 {
                continue;
            }
            if out.is_empty() {
                if c < 0.0 {
                    out.push('-');
                }
            } else {
                out.push_str(if c < 0.0 { " - " } else { " + " });
            }
            let abs = libm::fabs(c);
            if label == "1" {
                let _ = write!(out, "{abs}");
            } else {
                let _ = write!(out, "{abs}*{label}");
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    #[test]
    fn exact_series() {
        let exp = <Rational as Scalar>::series(&Elementary::Exp, &int(0), 4).unwrap();
        assert_eq!(exp, [int(1), int(1), frac(1, 2), frac(1, 6)]);
        let sqrt = <Rational as Scalar>::series(&Elementary::Sqrt, &int(4), 3).unwrap();
        assert_eq!(sqrt, [int(2), frac(1, 4), frac(-1, 64)]);
        let log = <Rational as Scalar>::series(&Elementary::Log, &int(1), 4).unwrap();
        assert_eq!(log, [int(0), int(1), frac(-1, 2), frac(1, 3)]);
    }

    #[test]
    fn exact_mode_refuses_irrational_values() {
        assert!(matches!(<Rational as Scalar>::series(&Elementary::Exp, &int(1), 2), Err(JetError::Mode(_))));
        assert!(matches!(<Rational as Scalar>::series(&Elementary::Sqrt, &int(2), 2), Err(JetError::Mode(_))));
        assert!(matches!(<Rational as Scalar>::series(&Elementary::Log, &int(0), 2), Err(JetError::Domain(_))));
    }

    #[test]
    fn float_series_match_closed_forms() {
        let sin = <f64 as Scalar>::series(&Elementary::Sin, &0.0, 6).unwrap();
        let expected = [0.0, 1.0, 0.0, -1.0 / 6.0, 0.0, 1.0 / 120.0];
        for (a, b) in sin.iter().zip(expected) {
            assert!((a - b).abs() < 1e-15);
        }
        let recip = <f64 as Scalar>::series(&Elementary::Recip, &2.0, 3).unwrap();
        assert_eq!(recip, [0.5, -0.25, 0.125]);
    }
}
