//! Multivariate polynomials with exact rational coefficients.

use alloc::collections::btree_map::Entry;
use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt::Write;

use num_traits::{One, Signed, Zero};

use crate::rational::{to_compact_string, Rational};

/// Exponent vector over an ordered list of variables.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        let mut e = vec![0; nvars];
        e[index] = 1;
        Monomial(e)
    }

    pub fn from_exponents(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        debug_assert_eq!(self.0.len(), other.0.len());
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self / x_i`, if `x_i` divides `self`.
    pub fn div_var(&self, index: usize) -> Option<Monomial> {
        if self.0[index] == 0 {
            return None;
        }
        let mut e = self.0.clone();
        e[index] -= 1;
        Some(Monomial(e))
    }

    /// Index of the first variable occurring in `self`.
    pub fn first_var(&self) -> Option<usize> {
        self.0.iter().position(|&e| e > 0)
    }

    /// Places this monomial inside a larger variable list, starting at `offset`.
    pub fn embed(&self, offset: usize, total: usize) -> Monomial {
        let mut e = vec![0; total];
        e[offset..offset + self.0.len()].copy_from_slice(&self.0);
        Monomial(e)
    }

    /// Concatenates exponent vectors (variables of `self` first).
    pub fn concat(&self, other: &Monomial) -> Monomial {
        let mut e = self.0.clone();
        e.extend_from_slice(&other.0);
        Monomial(e)
    }

    /// Graded lexicographic monomial order, first declared variable largest.
    pub fn grlex_cmp(&self, other: &Monomial) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }

    /// Order in which basis monomials are listed: ascending degree, and inside
    /// a degree the first variable's powers first (`x^2, x*y, y^2`).
    pub fn listing_cmp(&self, other: &Monomial) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| other.0.cmp(&self.0))
    }

    pub fn display(&self, names: &[String]) -> String {
        if self.is_one() {
            return "1".to_string();
        }
        let mut out = String::new();
        for (name, &e) in names.iter().zip(&self.0) {
            if e == 0 {
                continue;
            }
            if !out.is_empty() {
                out.push('*');
            }
            out.push_str(name);
            if e > 1 {
                let _ = write!(out, "^{e}");
            }
        }
        out
    }
}

/// Every monomial in `nvars` variables of total degree `< bound`, in listing order.
pub fn monomials_below(nvars: usize, bound: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    for d in 0..bound {
        let mut current = vec![0u32; nvars];
        push_degree(nvars, 0, d, &mut current, &mut out);
    }
    out
}

fn push_degree(nvars: usize, at: usize, remaining: u32, current: &mut Vec<u32>, out: &mut Vec<Monomial>) {
    if nvars == 0 {
        if remaining == 0 {
            out.push(Monomial(Vec::new()));
        }
        return;
    }
    if at == nvars - 1 {
        current[at] = remaining;
        out.push(Monomial(current.clone()));
        current[at] = 0;
        return;
    }
    for e in (0..=remaining).rev() {
        current[at] = e;
        push_degree(nvars, at + 1, remaining - e, current, out);
    }
    current[at] = 0;
}

/// A polynomial as a sparse map from monomials to non-zero coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Polynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, Rational>,
}

impl Polynomial {
    pub fn zero(nvars: usize) -> Self {
        Polynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(Monomial::one(nvars), c);
        p
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        Self::monomial(Monomial::var(nvars, index), Rational::one())
    }

    pub fn monomial(m: Monomial, c: Rational) -> Self {
        let mut p = Self::zero(m.nvars());
        p.add_term(m, c);
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        debug_assert_eq!(m.nvars(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn constant_term(&self) -> Rational {
        self.terms.get(&Monomial::one(self.nvars)).cloned().unwrap_or_else(Rational::zero)
    }

    /// Lowest total degree among the terms; `None` for the zero polynomial.
    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).min()
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &Rational) -> Polynomial {
        if k.is_zero() {
            return Polynomial::zero(self.nvars);
        }
        Polynomial { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect() }
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        let mut out = Polynomial::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut out = Polynomial::constant(self.nvars, Rational::one());
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Drops every term of total degree `>= bound`.
    pub fn truncate(&self, bound: u32) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self.terms.iter().filter(|(m, _)| m.degree() < bound).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// Multiplies by a monomial and truncates at `bound` in one pass.
    pub fn shifted_truncated(&self, m: &Monomial, bound: u32) -> Polynomial {
        Polynomial {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(t, _)| t.degree() + m.degree() < bound)
                .map(|(t, c)| (t.mul(m), c.clone()))
                .collect(),
        }
    }

    pub fn embed(&self, offset: usize, total: usize) -> Polynomial {
        Polynomial {
            nvars: total,
            terms: self.terms.iter().map(|(m, c)| (m.embed(offset, total), c.clone())).collect(),
        }
    }

    pub fn uses_var(&self, index: usize) -> bool {
        self.terms.keys().any(|m| m.exponents()[index] > 0)
    }

    pub fn display(&self, names: &[String]) -> String {
        let mut terms: Vec<(&Monomial, &Rational)> = self.terms.iter().collect();
        terms.sort_by(|a, b| a.0.listing_cmp(b.0));
        format_terms(terms.into_iter().map(|(m, c)| (m.display(names), c.clone())))
    }
}

/// Joins `(monomial label, coefficient)` pairs as `a + b*x - c*y`.
pub fn format_terms<I>(terms: I) -> String
where
    I: IntoIterator<Item = (String, Rational)>,
{
    let mut out = String::new();
    for (label, c) in terms {
        if c.is_zero() {
            continue;
        }
        let negative = c.is_negative();
        let abs = c.abs();
        if out.is_empty() {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        if label == "1" {
            out.push_str(&to_compact_string(&abs));
        } else if abs.is_one() {
            out.push_str(&label);
        } else {
            let _ = write!(out, "{}*{}", to_compact_string(&abs), label);
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
