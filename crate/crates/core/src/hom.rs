//! Homomorphisms of Weil algebras, stored as matrices against the bases.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::algebra::{Element, WeilAlgebra};
use crate::error::AlgebraError;
use crate::linalg::Matrix;
use crate::poly::{Monomial, Polynomial};
use crate::rational::Rational;
use crate::scalar::Scalar;

/// Evaluates `p` at `images` (one per variable of `p`) inside `dst`.
pub(crate) fn eval_polynomial_at(
    p: &Polynomial,
    images: &[Element],
    dst: &Arc<WeilAlgebra>,
) -> Result<Element, AlgebraError> {
    let mut powers = PowerCache::new(images, dst);
    let mut out = Element::zero(dst);
    for (m, c) in p.terms() {
        let value = powers.monomial(m);
        out = out.add_unchecked(&value.scale(c));
    }
    Ok(out)
}

/// Values of the monomials `ms` at `images` inside `dst`.
pub(crate) fn eval_monomials(ms: &[Monomial], images: &[Element], dst: &Arc<WeilAlgebra>) -> Vec<Element> {
    let mut powers = PowerCache::new(images, dst);
    ms.iter().map(|m| powers.monomial(m)).collect()
}

/// Lazily computed powers `images[i]^e`.
struct PowerCache<'a> {
    images: &'a [Element],
    dst: &'a Arc<WeilAlgebra>,
    powers: Vec<Vec<Element>>,
}

impl<'a> PowerCache<'a> {
    fn new(images: &'a [Element], dst: &'a Arc<WeilAlgebra>) -> Self {
        PowerCache { images, dst, powers: vec![Vec::new(); images.len()] }
    }

    fn power(&mut self, i: usize, e: u32) -> &Element {
        let table = &mut self.powers[i];
        if table.is_empty() {
            table.push(Element::one(self.dst));
        }
        while table.len() <= e as usize {
            let next = table.last().unwrap().mul_unchecked(&self.images[i]);
            table.push(next);
        }
        &table[e as usize]
    }

    fn monomial(&mut self, m: &Monomial) -> Element {
        let mut acc = Element::one(self.dst);
        for (i, &e) in m.exponents().iter().enumerate() {
            if e > 0 {
                let p = self.power(i, e).clone();
                acc = acc.mul_unchecked(&p);
            }
        }
        acc
    }
}

/// An algebra homomorphism `src -> dst` preserving maximal ideals. The matrix
/// is `dim dst × dim src`; column `j` is the image of basis element `j`.
#[derive(Clone, Debug)]
pub struct AlgebraHom {
    src: Arc<WeilAlgebra>,
    dst: Arc<WeilAlgebra>,
    matrix: Matrix,
}

impl PartialEq for AlgebraHom {
    fn eq(&self, other: &Self) -> bool {
        self.src.is_same(&other.src) && self.dst.is_same(&other.dst) && self.matrix == other.matrix
    }
}

impl AlgebraHom {
    /// The unique hom sending the `i`-th generator of `src` to `images[i]`.
    /// Fails when an image has nonzero augmentation or a relation of `src`
    /// is not sent to zero.
    pub fn from_generator_images(
        src: &Arc<WeilAlgebra>,
        dst: &Arc<WeilAlgebra>,
        images: &[Element],
    ) -> Result<Self, AlgebraError> {
        let vars = src.vars();
        if images.len() != vars.len() {
            return Err(AlgebraError::ImageCount { expected: vars.len(), found: images.len() });
        }
        for (name, image) in vars.iter().zip(images) {
            if !image.algebra().is_same(dst) {
                return Err(AlgebraError::AlgebraMismatch);
            }
            if !image.augmentation().is_zero() {
                return Err(AlgebraError::NotInMaximalIdeal(name.clone()));
            }
        }
        let mut cache = PowerCache::new(images, dst);
        for r in src.presentation().relations() {
            let mut value = Element::zero(dst);
            for (m, c) in r.terms() {
                value = value.add_unchecked(&cache.monomial(m).scale(c));
            }
            if !value.is_zero() {
                return Err(AlgebraError::RelationViolated(r.display(vars)));
            }
        }
        // monomials of degree >= the bound vanish in src; their images must too
        let k = src.presentation().nilpotency_bound();
        for (i, v) in vars.iter().enumerate() {
            if !cache.power(i, k).is_zero() {
                return Err(AlgebraError::RelationViolated(format!("{v}^{k}")));
            }
        }
        let columns: Vec<Vec<Rational>> = src.basis().iter().map(|m| cache.monomial(m).into_coords()).collect();
        let matrix = Matrix::from_columns(dst.dim(), &columns);
        Ok(AlgebraHom { src: src.clone(), dst: dst.clone(), matrix })
    }

    /// Wraps a matrix after checking every hom invariant.
    pub fn from_matrix(src: &Arc<WeilAlgebra>, dst: &Arc<WeilAlgebra>, matrix: Matrix) -> Result<Self, AlgebraError> {
        let hom = Self::from_matrix_unchecked(src, dst, matrix)?;
        hom.verify()?;
        Ok(hom)
    }

    pub(crate) fn from_matrix_unchecked(
        src: &Arc<WeilAlgebra>,
        dst: &Arc<WeilAlgebra>,
        matrix: Matrix,
    ) -> Result<Self, AlgebraError> {
        if matrix.rows() != dst.dim() || matrix.cols() != src.dim() {
            return Err(AlgebraError::DimensionMismatch {
                expected: dst.dim() * src.dim(),
                found: matrix.rows() * matrix.cols(),
            });
        }
        Ok(AlgebraHom { src: src.clone(), dst: dst.clone(), matrix })
    }

    pub fn identity(alg: &Arc<WeilAlgebra>) -> Self {
        AlgebraHom { src: alg.clone(), dst: alg.clone(), matrix: Matrix::identity(alg.dim()) }
    }

    /// The augmentation `W -> R`, the unique hom into the terminal algebra.
    pub fn augmentation(alg: &Arc<WeilAlgebra>, terminal: &Arc<WeilAlgebra>) -> Self {
        debug_assert_eq!(terminal.dim(), 1);
        let mut matrix = Matrix::zeros(1, alg.dim());
        matrix.set(0, 0, Rational::one());
        AlgebraHom { src: alg.clone(), dst: terminal.clone(), matrix }
    }

    /// The unit `R -> W`, sending everything to its base value times `1`.
    pub fn unit(terminal: &Arc<WeilAlgebra>, alg: &Arc<WeilAlgebra>) -> Self {
        debug_assert_eq!(terminal.dim(), 1);
        let mut matrix = Matrix::zeros(alg.dim(), 1);
        matrix.set(0, 0, Rational::one());
        AlgebraHom { src: terminal.clone(), dst: alg.clone(), matrix }
    }

    /// `1 ↦ 1`, `m ↦ 0`: the composite of augmentation and unit.
    pub fn constant(src: &Arc<WeilAlgebra>, dst: &Arc<WeilAlgebra>) -> Self {
        let mut matrix = Matrix::zeros(dst.dim(), src.dim());
        matrix.set(0, 0, Rational::one());
        AlgebraHom { src: src.clone(), dst: dst.clone(), matrix }
    }

    pub fn src(&self) -> &Arc<WeilAlgebra> {
        &self.src
    }

    pub fn dst(&self) -> &Arc<WeilAlgebra> {
        &self.dst
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &AlgebraHom) -> Result<AlgebraHom, AlgebraError> {
        if !first.dst.is_same(&self.src) {
            return Err(AlgebraError::AlgebraMismatch);
        }
        Ok(AlgebraHom { src: first.src.clone(), dst: self.dst.clone(), matrix: self.matrix.mul(&first.matrix) })
    }

    pub fn apply(&self, e: &Element) -> Result<Element, AlgebraError> {
        if !e.algebra().is_same(&self.src) {
            return Err(AlgebraError::AlgebraMismatch);
        }
        Ok(Element::from_coords(&self.dst, self.matrix.mul_vec(e.coords())))
    }

    /// Applies the hom to coordinates in any scalar type.
    pub fn apply_coords<S: Scalar>(&self, v: &[S]) -> Vec<S> {
        (0..self.matrix.rows())
            .map(|i| {
                self.matrix.row(i).iter().zip(v).fold(S::zero(), |acc, (a, x)| {
                    if a.is_zero() {
                        acc
                    } else {
                        acc + S::from_rational(a) * x.clone()
                    }
                })
            })
            .collect()
    }

    pub fn apply_scalar<S: Scalar>(&self, e: &Element<S>) -> Result<Element<S>, AlgebraError> {
        if !e.algebra().is_same(&self.src) {
            return Err(AlgebraError::AlgebraMismatch);
        }
        Ok(Element::from_coords(&self.dst, self.apply_coords(e.coords())))
    }

    /// Images of the generators of `src`.
    pub fn generator_images(&self) -> Vec<Element> {
        (0..self.src.vars().len()).map(|i| self.apply(&self.src.generator(i)).unwrap()).collect()
    }

    /// Exhaustive exact check: `1 ↦ 1`, multiplicative on all basis pairs,
    /// and compatible with augmentations.
    pub fn verify(&self) -> Result<(), AlgebraError> {
        let d = self.src.dim();
        let col = |j: usize| self.matrix.column(j);
        let one = col(0);
        if one[0] != Rational::one() || one[1..].iter().any(|c| !c.is_zero()) {
            return Err(AlgebraError::NotAHom("1 is not sent to 1".into()));
        }
        for j in 1..d {
            if !col(j)[0].is_zero() {
                return Err(AlgebraError::NotAHom(format!("basis element {j} leaves the maximal ideal")));
            }
        }
        for i in 0..d {
            for j in i..d {
                let mut product = vec![Rational::zero(); d];
                for (k, c) in self.src.product_of_basis(i, j) {
                    product[*k] = c.clone();
                }
                let lhs = self.matrix.mul_vec(&product);
                let rhs = self.dst.mul_coords(&col(i), &col(j));
                if lhs != rhs {
                    return Err(AlgebraError::NotAHom(format!("not multiplicative on basis pair ({i}, {j})")));
                }
            }
        }
        Ok(())
    }

    pub fn is_injective(&self) -> bool {
        self.matrix.is_injective()
    }

    pub fn is_bijective(&self) -> bool {
        self.src.dim() == self.dst.dim() && self.matrix.is_injective()
    }

    /// The inverse hom, when `self` is bijective.
    pub fn inverse(&self) -> Option<AlgebraHom> {
        if !self.is_bijective() {
            return None;
        }
        let inv = self.matrix.solve(&Matrix::identity(self.dst.dim()))?;
        Some(AlgebraHom { src: self.dst.clone(), dst: self.src.clone(), matrix: inv })
    }

    /// The unique `u` with `self ∘ u = h`, for injective `self`.
    pub fn factor(&self, h: &AlgebraHom) -> Result<AlgebraHom, AlgebraError> {
        if !h.dst.is_same(&self.dst) {
            return Err(AlgebraError::AlgebraMismatch);
        }
        let u = self.matrix.solve(&h.matrix).ok_or(AlgebraError::NoFactorization)?;
        Ok(AlgebraHom { src: h.src.clone(), dst: self.src.clone(), matrix: u })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(text: &str) -> Arc<WeilAlgebra> {
        WeilAlgebra::parse(text).unwrap()
    }

    #[test]
    fn squaring_map_from_second_order() {
        let d = alg("x | x^2 ; nil 2");
        let d2 = alg("x | x^3 ; nil 3");
        let x2 = d2.parse_element("x^2").unwrap();
        let h = AlgebraHom::from_generator_images(&d, &d2, &[x2]).unwrap();
        h.verify().unwrap();
        assert_eq!(h.apply(&d.parse_element("2 + 3*x").unwrap()).unwrap().display(), "2 + 3*x^2");
    }

    #[test]
    fn image_checks() {
        let d = alg("x | x^2 ; nil 2");
        let d2 = alg("x | x^3 ; nil 3");
        assert!(AlgebraHom::from_generator_images(&d, &d2, &[d2.generator(0)]).is_err());
        let err = AlgebraHom::from_generator_images(&d, &d2, &[d2.parse_element("1 + x").unwrap()]).unwrap_err();
        assert_eq!(err, AlgebraError::NotInMaximalIdeal("x".into()));
        let err = AlgebraHom::from_generator_images(&d, &d2, &[]).unwrap_err();
        assert_eq!(err, AlgebraError::ImageCount { expected: 1, found: 0 });
    }

    #[test]
    fn relation_violation_names_the_relation() {
        let d = alg("x | x^2 ; nil 2");
        let d2 = alg("x | x^3 ; nil 3");
        let err = AlgebraHom::from_generator_images(&d, &d2, &[d2.generator(0)]).unwrap_err();
        assert_eq!(err, AlgebraError::RelationViolated("x^2".into()));
    }

    #[test]
    fn projection_from_product_square() {
        let dd = alg("x,y | x^2, y^2 ; nil 3");
        let d = alg("x | x^2 ; nil 2");
        let h = AlgebraHom::from_generator_images(&dd, &d, &[Element::zero(&d), d.generator(0)]).unwrap();
        h.verify().unwrap();
        let id = AlgebraHom::identity(&d);
        assert_eq!(id.compose(&h).unwrap(), h);
        let r = WeilAlgebra::real_line();
        let aug = AlgebraHom::augmentation(&d, &r);
        assert_eq!(aug.compose(&h).unwrap(), AlgebraHom::augmentation(&dd, &r));
    }

    #[test]
    fn factor_through_injection() {
        let d = alg("x | x^2 ; nil 2");
        let d2 = alg("x | x^3 ; nil 3");
        let sq = AlgebraHom::from_generator_images(&d, &d2, &[d2.parse_element("x^2").unwrap()]).unwrap();
        let h = AlgebraHom::from_generator_images(&d, &d2, &[d2.parse_element("3*x^2").unwrap()]).unwrap();
        let u = sq.factor(&h).unwrap();
        assert_eq!(u.apply(&d.generator(0)).unwrap(), d.parse_element("3*x").unwrap());
        let bad = AlgebraHom::identity(&d2);
        assert_eq!(sq.factor(&bad), Err(AlgebraError::NoFactorization));
    }
}
