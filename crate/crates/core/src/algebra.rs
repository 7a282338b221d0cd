//! Finite-dimensional Weil algebras `Q[X]/I` built from presentations, and
//! their elements.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use num_traits::{One, Zero};

use crate::error::AlgebraError;
use crate::linalg::Echelon;
use crate::parse::{parse_polynomial, ParseError};
use crate::poly::{monomials_below, Monomial, Polynomial};
use crate::presentation::Presentation;
use crate::rational::{to_f64, Rational};
use crate::scalar::Scalar;

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

/// Sparse expansion `Σ c_k e_k` of a product of two basis elements.
pub type Expansion<S> = Vec<(usize, S)>;

/// A Weil algebra `Q ⊕ m` with a monomial basis (the constant `1` first), a
/// structure-constant table and the augmentation `coefficient of 1`.
pub struct WeilAlgebra {
    id: u64,
    presentation: Presentation,
    basis: Vec<Monomial>,
    index: BTreeMap<Monomial, usize>,
    table: Vec<Expansion<Rational>>,
    table_f64: Vec<Expansion<f64>>,
    generators: Vec<Vec<Rational>>,
    nil_index: u32,
}

impl fmt::Debug for WeilAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WeilAlgebra")
            .field("id", &self.id)
            .field("presentation", &format!("{}", self.presentation))
            .field("dim", &self.dim())
            .finish()
    }
}

/// Output of the truncated quotient computation.
struct Quotient {
    basis: Vec<Monomial>,
    normal_forms: BTreeMap<Monomial, Expansion<Rational>>,
}

fn quotient(pres: &Presentation, closed: bool) -> Result<Quotient, AlgebraError> {
    let n = pres.nvars();
    let k = pres.nilpotency_bound();
    let listing = monomials_below(n, k);
    // columns in decreasing monomial order, so a row's pivot is its leading monomial
    let mut columns = listing.clone();
    columns.sort_by(|a, b| b.grlex_cmp(a));
    let column_of: BTreeMap<&Monomial, usize> = columns.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let width = columns.len();

    let to_row = |p: &Polynomial| {
        let mut row = vec![Rational::zero(); width];
        for (m, c) in p.terms() {
            row[column_of[m]] = c.clone();
        }
        row
    };

    let mut ideal = Echelon::empty(width);
    for g in pres.relations() {
        let Some(low) = g.min_degree() else { continue };
        if closed {
            ideal.insert(to_row(&g.truncate(k)));
            continue;
        }
        for m in listing.iter().take_while(|m| m.degree() + low < k) {
            let shifted = g.shifted_truncated(m, k);
            if !shifted.is_zero() {
                ideal.insert(to_row(&shifted));
            }
        }
    }

    let mut is_pivot = vec![false; width];
    for &p in ideal.pivots() {
        is_pivot[p] = true;
    }
    let basis: Vec<Monomial> = listing.iter().filter(|m| !is_pivot[column_of[m]]).cloned().collect();
    if basis.is_empty() {
        return Err(AlgebraError::DegenerateQuotient);
    }
    let basis_index: BTreeMap<&Monomial, usize> = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();

    let mut normal_forms = BTreeMap::new();
    for m in &basis {
        normal_forms.insert(m.clone(), vec![(basis_index[m], Rational::one())]);
    }
    for (row, &p) in ideal.basis().iter().zip(ideal.pivots()) {
        let mut nf: Expansion<Rational> = row
            .iter()
            .enumerate()
            .filter(|(j, c)| *j != p && !c.is_zero())
            .map(|(j, c)| (basis_index[&columns[j]], -c.clone()))
            .collect();
        nf.sort_by_key(|(i, _)| *i);
        normal_forms.insert(columns[p].clone(), nf);
    }
    Ok(Quotient { basis, normal_forms })
}

impl WeilAlgebra {
    /// Builds `Q[X]/I` by exact row reduction of the degree-truncated ideal and
    /// verifies every Weil-algebra invariant before returning.
    pub fn build(pres: Presentation) -> Result<Arc<WeilAlgebra>, AlgebraError> {
        let q = quotient(&pres, false)?;
        // m^k ⊆ I + m^(k+1) forces m^k ⊆ I in the local ring, so an honest bound
        // gives the same quotient one degree higher.
        let bumped = Presentation::from_parts_unchecked(
            pres.vars().to_vec(),
            pres.relations().to_vec(),
            pres.nilpotency_bound() + 1,
        );
        let check = quotient(&bumped, false)?;
        if check.basis.len() != q.basis.len() {
            return Err(AlgebraError::NotWeil(format!(
                "nilpotency bound {} is inconsistent with the relations",
                pres.nilpotency_bound()
            )));
        }
        let alg = Self::from_quotient(pres, q);
        alg.verify_invariants()?;
        Ok(Arc::new(alg))
    }

    pub fn parse(text: &str) -> Result<Arc<WeilAlgebra>, AlgebraError> {
        Self::build(Presentation::parse(text)?)
    }

    /// The algebra `Q` of the empty presentation; terminal in the category.
    pub fn real_line() -> Arc<WeilAlgebra> {
        Self::build(Presentation::real_line()).expect("the empty presentation is a Weil algebra")
    }

    /// Builds from relations already spanning the whole degree-truncated ideal.
    pub(crate) fn from_closed_ideal(pres: Presentation) -> Result<WeilAlgebra, AlgebraError> {
        let q = quotient(&pres, true)?;
        Ok(Self::from_quotient(pres, q))
    }

    fn from_quotient(pres: Presentation, q: Quotient) -> WeilAlgebra {
        let k = pres.nilpotency_bound();
        let dim = q.basis.len();
        let mut table = Vec::with_capacity(dim * dim);
        for a in &q.basis {
            for b in &q.basis {
                let m = a.mul(b);
                let entry = if m.degree() >= k { Vec::new() } else { q.normal_forms[&m].clone() };
                table.push(entry);
            }
        }
        let n = pres.nvars();
        let generators = (0..n)
            .map(|i| {
                let mut v = vec![Rational::zero(); dim];
                if k > 1 {
                    for (j, c) in &q.normal_forms[&Monomial::var(n, i)] {
                        v[*j] = c.clone();
                    }
                }
                v
            })
            .collect();
        Self::from_parts(pres, q.basis, table, generators)
    }

    /// Assembles an algebra from a precomputed basis and table. The caller
    /// guarantees these agree with what [`WeilAlgebra::build`] would produce.
    pub(crate) fn from_parts(
        presentation: Presentation,
        basis: Vec<Monomial>,
        table: Vec<Expansion<Rational>>,
        generators: Vec<Vec<Rational>>,
    ) -> WeilAlgebra {
        let index = basis.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
        let table_f64 = table.iter().map(|e| e.iter().map(|(k, c)| (*k, to_f64(c))).collect()).collect();
        let mut alg = WeilAlgebra {
            id: NEXT_ID.fetch_add(1, AtomicOrdering::Relaxed),
            presentation,
            basis,
            index,
            table,
            table_f64,
            generators,
            nil_index: 0,
        };
        alg.nil_index = alg.compute_nil_index();
        alg
    }

    /// Like [`WeilAlgebra::from_parts`] for a basis in arbitrary order; the
    /// basis is sorted into listing order and the table renumbered.
    pub(crate) fn from_unsorted_parts(
        presentation: Presentation,
        basis: Vec<Monomial>,
        table: Vec<Expansion<Rational>>,
        generators: Vec<Vec<Rational>>,
    ) -> WeilAlgebra {
        let d = basis.len();
        let mut order: Vec<usize> = (0..d).collect();
        order.sort_by(|&a, &b| basis[a].listing_cmp(&basis[b]));
        let mut pos = vec![0; d];
        for (new, &old) in order.iter().enumerate() {
            pos[old] = new;
        }
        let mut sorted_table = vec![Vec::new(); d * d];
        for i in 0..d {
            for j in 0..d {
                let mut e: Expansion<Rational> = table[i * d + j].iter().map(|(k, c)| (pos[*k], c.clone())).collect();
                e.sort_by_key(|(k, _)| *k);
                sorted_table[pos[i] * d + pos[j]] = e;
            }
        }
        let sorted_generators = generators
            .into_iter()
            .map(|g| {
                let mut v = vec![Rational::zero(); d];
                for (k, c) in g.into_iter().enumerate() {
                    v[pos[k]] = c;
                }
                v
            })
            .collect();
        let sorted_basis = order.iter().map(|&old| basis[old].clone()).collect();
        Self::from_parts(presentation, sorted_basis, sorted_table, sorted_generators)
    }

    fn compute_nil_index(&self) -> u32 {
        let dim = self.dim();
        let unit = |i: usize| {
            let mut v = vec![Rational::zero(); dim];
            v[i] = Rational::one();
            v
        };
        let mut power = Echelon::from_vectors(dim, (1..dim).map(unit));
        let mut p = 1;
        while !power.is_zero() {
            let mut next = Echelon::empty(dim);
            for v in power.basis() {
                for j in 1..dim {
                    next.insert(self.mul_coords(v, &unit(j)));
                }
            }
            power = next;
            p += 1;
        }
        p
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn vars(&self) -> &[String] {
        self.presentation.vars()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Monomial] {
        &self.basis
    }

    pub fn basis_index(&self, m: &Monomial) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn basis_labels(&self) -> Vec<String> {
        self.basis.iter().map(|m| m.display(self.vars())).collect()
    }

    /// Least `p` with `m^p = 0` for the maximal ideal `m`.
    pub fn nil_index(&self) -> u32 {
        self.nil_index
    }

    /// Expansion of `e_i · e_j`.
    pub fn product_of_basis(&self, i: usize, j: usize) -> &[(usize, Rational)] {
        &self.table[i * self.dim() + j]
    }

    pub(crate) fn table_exact(&self) -> &[Expansion<Rational>] {
        &self.table
    }

    pub(crate) fn table_float(&self) -> &[Expansion<f64>] {
        &self.table_f64
    }

    /// Normal form of the `i`-th generator.
    pub fn generator(self: &Arc<Self>, i: usize) -> Element {
        Element { algebra: self.clone(), coords: self.generators[i].clone() }
    }

    pub fn generator_coords(&self) -> &[Vec<Rational>] {
        &self.generators
    }

    /// Same algebra: the same object, or an identical presentation and basis
    /// (construction is deterministic, so the tables agree too).
    pub fn is_same(&self, other: &WeilAlgebra) -> bool {
        self.id == other.id || (self.presentation == other.presentation && self.basis == other.basis)
    }

    pub fn mul_coords<S: Scalar>(&self, a: &[S], b: &[S]) -> Vec<S> {
        let dim = self.dim();
        let table = S::structure(self);
        let mut out = vec![S::zero(); dim];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let xy = x.clone() * y.clone();
                for (k, c) in &table[i * dim + j] {
                    out[*k] = out[*k].clone() + xy.clone() * c.clone();
                }
            }
        }
        out
    }

    /// Coordinates of a polynomial in the generators.
    pub fn eval_polynomial(self: &Arc<Self>, p: &Polynomial) -> Result<Element, AlgebraError> {
        if p.nvars() != self.presentation.nvars() {
            return Err(AlgebraError::AlgebraMismatch);
        }
        let images: Vec<Element> = (0..p.nvars()).map(|i| self.generator(i)).collect();
        crate::hom::eval_polynomial_at(p, &images, self)
    }

    /// Parses a polynomial in this algebra's generators, e.g. `1 + 2*x*y`.
    pub fn parse_element(self: &Arc<Self>, text: &str) -> Result<Element, ParseError> {
        let p = parse_polynomial(text, self.vars())?;
        Ok(self.eval_polynomial(&p).expect("polynomial parsed over this algebra's variables"))
    }

    /// Exhaustive exact check of commutativity, associativity, unit,
    /// multiplicativity of the augmentation, and nilpotency of `m`.
    pub fn verify_invariants(&self) -> Result<(), AlgebraError> {
        let dim = self.dim();
        let fail = |msg: String| Err(AlgebraError::NotWeil(msg));
        for j in 0..dim {
            let unit = [(j, Rational::one())];
            if self.product_of_basis(0, j) != unit || self.product_of_basis(j, 0) != unit {
                return fail(format!("1 is not a unit for basis element {j}"));
            }
        }
        for i in 0..dim {
            for j in 0..dim {
                if self.product_of_basis(i, j) != self.product_of_basis(j, i) {
                    return fail(format!("basis elements {i} and {j} do not commute"));
                }
                if i > 0 && j > 0 && self.product_of_basis(i, j).iter().any(|(k, _)| *k == 0) {
                    return fail(format!("augmentation is not multiplicative on ({i}, {j})"));
                }
            }
        }
        for i in 0..dim {
            for j in 0..dim {
                let left = self.product_of_basis(i, j);
                for k in 0..dim {
                    let lhs = self.expand_times_basis(left, k);
                    let rhs = self.basis_times_expand(i, self.product_of_basis(j, k));
                    if lhs != rhs {
                        return fail(format!("associativity fails on ({i}, {j}, {k})"));
                    }
                }
            }
        }
        let mut power: Vec<Vec<Rational>> = (0..dim)
            .map(|i| {
                let mut v = vec![Rational::zero(); dim];
                v[i] = Rational::one();
                v
            })
            .collect();
        let bases = power.clone();
        for _ in 1..dim.max(1) {
            for (p, b) in power.iter_mut().zip(&bases) {
                *p = self.mul_coords(p, b);
            }
        }
        if dim > 1 && power.iter().skip(1).any(|p| p.iter().any(|c| !c.is_zero())) {
            return fail("a basis element of the maximal ideal is not nilpotent".into());
        }
        Ok(())
    }

    fn expand_times_basis(&self, left: &[(usize, Rational)], k: usize) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.dim()];
        for (l, c) in left {
            for (m, d) in self.product_of_basis(*l, k) {
                out[*m] += c * d;
            }
        }
        out
    }

    fn basis_times_expand(&self, i: usize, right: &[(usize, Rational)]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.dim()];
        for (l, c) in right {
            for (m, d) in self.product_of_basis(i, *l) {
                out[*m] += c * d;
            }
        }
        out
    }
}

/// An element `Σ c_i e_i` of a Weil algebra, with coefficients in `S`
/// (exact rationals by default).
#[derive(Clone)]
pub struct Element<S: Scalar = Rational> {
    algebra: Arc<WeilAlgebra>,
    coords: Vec<S>,
}

impl<S: Scalar> fmt::Debug for Element<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element({})", self.display())
    }
}

impl<S: Scalar> PartialEq for Element<S> {
    fn eq(&self, other: &Self) -> bool {
        self.algebra.is_same(&other.algebra) && self.coords == other.coords
    }
}

impl<S: Scalar> Element<S> {
    pub fn new(algebra: &Arc<WeilAlgebra>, coords: Vec<S>) -> Result<Self, AlgebraError> {
        if coords.len() != algebra.dim() {
            return Err(AlgebraError::AlgebraMismatch);
        }
        Ok(Element { algebra: algebra.clone(), coords })
    }

    pub(crate) fn from_coords(algebra: &Arc<WeilAlgebra>, coords: Vec<S>) -> Self {
        debug_assert_eq!(coords.len(), algebra.dim());
        Element { algebra: algebra.clone(), coords }
    }

    pub fn zero(algebra: &Arc<WeilAlgebra>) -> Self {
        Element { algebra: algebra.clone(), coords: vec![S::zero(); algebra.dim()] }
    }

    pub fn constant(algebra: &Arc<WeilAlgebra>, c: S) -> Self {
        let mut e = Self::zero(algebra);
        e.coords[0] = c;
        e
    }

    pub fn one(algebra: &Arc<WeilAlgebra>) -> Self {
        Self::constant(algebra, S::one())
    }

    pub fn basis_element(algebra: &Arc<WeilAlgebra>, i: usize) -> Self {
        let mut e = Self::zero(algebra);
        e.coords[i] = S::one();
        e
    }

    /// The `i`-th generator, converted to `S`.
    pub fn generator(algebra: &Arc<WeilAlgebra>, i: usize) -> Self {
        let coords = algebra.generators[i].iter().map(S::from_rational).collect();
        Element { algebra: algebra.clone(), coords }
    }

    pub fn algebra(&self) -> &Arc<WeilAlgebra> {
        &self.algebra
    }

    pub fn coords(&self) -> &[S] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<S> {
        self.coords
    }

    /// Coefficient of `1`: the image under the augmentation.
    pub fn augmentation(&self) -> S {
        self.coords[0].clone()
    }

    /// `self - aug(self)·1`.
    pub fn nilpotent_part(&self) -> Self {
        let mut e = self.clone();
        e.coords[0] = S::zero();
        e
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    fn check(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.algebra.is_same(&other.algebra) {
            Ok(())
        } else {
            Err(AlgebraError::AlgebraMismatch)
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        Ok(self.add_unchecked(&other.neg()))
    }

    pub fn mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.check(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn add_unchecked(&self, other: &Self) -> Self {
        let coords = self.coords.iter().zip(&other.coords).map(|(a, b)| a.clone() + b.clone()).collect();
        Element { algebra: self.algebra.clone(), coords }
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        Element { algebra: self.algebra.clone(), coords: self.algebra.mul_coords(&self.coords, &other.coords) }
    }

    pub fn neg(&self) -> Self {
        Element { algebra: self.algebra.clone(), coords: self.coords.iter().map(|c| -c.clone()).collect() }
    }

    pub fn scale(&self, k: &S) -> Self {
        Element { algebra: self.algebra.clone(), coords: self.coords.iter().map(|c| c.clone() * k.clone()).collect() }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(&self.algebra);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }

    /// Least `p >= 1` with `self^p = 0`, or `None` when the augmentation is
    /// nonzero (then no power vanishes).
    pub fn nilpotency_index(&self) -> Option<u32> {
        if !self.augmentation().is_zero() {
            return None;
        }
        let mut power = self.clone();
        let mut p = 1;
        while !power.is_zero() && p < self.algebra.nil_index() {
            power = power.mul_unchecked(self);
            p += 1;
        }
        Some(p)
    }

    pub fn display(&self) -> String {
        S::format_expansion(self.algebra.basis_labels().into_iter().zip(self.coords.iter().cloned()))
    }
}

impl Element<Rational> {
    /// Converts to floating point coordinates.
    pub fn to_f64(&self) -> Element<f64> {
        Element { algebra: self.algebra.clone(), coords: self.coords.iter().map(to_f64).collect() }
    }
}

impl<S: Scalar> fmt::Display for Element<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn alg(text: &str) -> Arc<WeilAlgebra> {
        WeilAlgebra::parse(text).unwrap()
    }

    #[test]
    fn dual_numbers() {
        let d = alg("x | x^2 ; nil 2");
        assert_eq!(d.basis_labels(), ["1", "x"]);
        let x = d.generator(0);
        assert!(x.mul(&x).unwrap().is_zero());
        assert_eq!(d.nil_index(), 2);
    }

    #[test]
    fn second_order() {
        let d2 = alg("x | x^3 ; nil 3");
        assert_eq!(d2.basis_labels(), ["1", "x", "x^2"]);
        let p = d2.parse_element("1 + x").unwrap();
        assert_eq!(p.mul(&p).unwrap().display(), "1 + 2*x + x^2");
        assert_eq!(d2.generator(0).nilpotency_index(), Some(3));
    }

    #[test]
    fn first_order_two_dim() {
        let d = alg("x,y | x^2, y^2, x*y ; nil 2");
        assert_eq!(d.basis_labels(), ["1", "x", "y"]);
        let (x, y) = (d.generator(0), d.generator(1));
        assert!(x.mul(&y).unwrap().is_zero());
        assert_eq!(x.add(&y).unwrap().nilpotency_index(), Some(2));
    }

    #[test]
    fn augmentation_examples() {
        let d = alg("x | x^2 ; nil 2");
        assert_eq!(d.parse_element("3 + 5*x").unwrap().augmentation(), int(3));
        let d2 = alg("x | x^3 ; nil 3");
        assert_eq!(d2.parse_element("x^2").unwrap().augmentation(), int(0));
        assert_eq!(Element::<Rational>::zero(&d2).augmentation(), int(0));
        assert_eq!(d.parse_element("1 + x").unwrap().nilpotency_index(), None);
    }

    #[test]
    fn linear_relation_eliminates_generator() {
        // y^2 leads x - y^2 in graded order, so y^2 rewrites to x
        let a = alg("x,y | x - y^2, y^3 ; nil 3");
        assert_eq!(a.basis_labels(), ["1", "x", "y"]);
        assert_eq!(a.parse_element("y^2").unwrap().display(), "x");
        assert!(a.parse_element("x*y").unwrap().is_zero());
    }

    #[test]
    fn inconsistent_bound_is_rejected() {
        let err = WeilAlgebra::parse("x | x^3 ; nil 2").unwrap_err();
        assert!(matches!(err, AlgebraError::NotWeil(_)));
        // a generous bound is fine
        assert_eq!(alg("x | x^3 ; nil 5").dim(), 3);
    }

    #[test]
    fn local_quotient_of_non_local_relation() {
        // x(1 - x) generates (x) in the local ring
        let a = alg("x | x - x^2 ; nil 1");
        assert_eq!(a.dim(), 1);
    }

    #[test]
    fn mismatched_algebras() {
        let a = alg("x | x^2 ; nil 2");
        let b = alg("x | x^3 ; nil 3");
        assert_eq!(a.generator(0).mul(&b.generator(0)), Err(AlgebraError::AlgebraMismatch));
    }
}
