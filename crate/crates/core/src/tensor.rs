//! The tensor product `W1 ⊗∞ W2` of Weil algebras.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::algebra::{Element, Expansion, WeilAlgebra};
use crate::error::AlgebraError;
use crate::hom::AlgebraHom;
use crate::presentation::{juxtapose_names, Presentation};
use crate::rational::Rational;

/// `W1 ⊗∞ W2` with its two unit-tensor injections.
#[derive(Clone, Debug)]
pub struct TensorProduct {
    pub algebra: Arc<WeilAlgebra>,
    pub inj1: AlgebraHom,
    pub inj2: AlgebraHom,
}

/// Presentation of the tensor product: generators juxtaposed (renaming
/// collisions on the right), both relation lists, bound `k1 + k2 - 1`.
pub fn tensor_presentation(p1: &Presentation, p2: &Presentation) -> Presentation {
    let n1 = p1.nvars();
    let total = n1 + p2.nvars();
    let vars = juxtapose_names(p1.vars(), p2.vars());
    let relations = p1
        .relations()
        .iter()
        .map(|r| r.embed(0, total))
        .chain(p2.relations().iter().map(|r| r.embed(n1, total)))
        .collect();
    Presentation::from_parts_unchecked(vars, relations, p1.nilpotency_bound() + p2.nilpotency_bound() - 1)
}

/// Builds `W1 ⊗∞ W2` directly: the basis is the set of products of basis
/// monomials and the structure constants are products of the two tables.
pub fn tensor_infinity(w1: &Arc<WeilAlgebra>, w2: &Arc<WeilAlgebra>) -> TensorProduct {
    let (d1, d2) = (w1.dim(), w2.dim());
    let d = d1 * d2;
    let pres = tensor_presentation(w1.presentation(), w2.presentation());
    let basis = w1.basis().iter().flat_map(|a| w2.basis().iter().map(move |b| a.concat(b))).collect();

    let mut table: Vec<Expansion<Rational>> = Vec::with_capacity(d * d);
    for i1 in 0..d1 {
        for i2 in 0..d2 {
            for j1 in 0..d1 {
                for j2 in 0..d2 {
                    let mut e = Vec::new();
                    for (k1, c1) in w1.product_of_basis(i1, j1) {
                        for (k2, c2) in w2.product_of_basis(i2, j2) {
                            e.push((k1 * d2 + k2, c1 * c2));
                        }
                    }
                    table.push(e);
                }
            }
        }
    }
    // table is indexed by (i1 d2 + i2) * d + (j1 d2 + j2), matching the loop order
    let embed = |v: &[Rational], left: bool| {
        let mut out = vec![Rational::zero(); d];
        for (k, c) in v.iter().enumerate() {
            let at = if left { k * d2 } else { k };
            out[at] = c.clone();
        }
        out
    };
    let generators = w1
        .generator_coords()
        .iter()
        .map(|g| embed(g, true))
        .chain(w2.generator_coords().iter().map(|g| embed(g, false)))
        .collect();
    let algebra = Arc::new(WeilAlgebra::from_unsorted_parts(pres, basis, table, generators));
    let n1 = w1.vars().len();
    let inj1 =
        AlgebraHom::from_generator_images(w1, &algebra, &(0..n1).map(|i| algebra.generator(i)).collect::<Vec<_>>())
            .expect("unit-tensor injection is a hom");
    let n2 = w2.vars().len();
    let inj2 = AlgebraHom::from_generator_images(
        w2,
        &algebra,
        &(0..n2).map(|i| algebra.generator(n1 + i)).collect::<Vec<_>>(),
    )
    .expect("unit-tensor injection is a hom");
    TensorProduct { algebra, inj1, inj2 }
}

/// `f ⊗ g : src1 ⊗ src2 -> dst1 ⊗ dst2`, given the two tensor products.
pub fn tensor_homs(
    f: &AlgebraHom,
    g: &AlgebraHom,
    src: &TensorProduct,
    dst: &TensorProduct,
) -> Result<AlgebraHom, AlgebraError> {
    if !src.inj1.src().is_same(f.src())
        || !src.inj2.src().is_same(g.src())
        || !dst.inj1.src().is_same(f.dst())
        || !dst.inj2.src().is_same(g.dst())
    {
        return Err(AlgebraError::AlgebraMismatch);
    }
    let mut images: Vec<Element> = Vec::new();
    for x in f.generator_images() {
        images.push(dst.inj1.apply(&x)?);
    }
    for y in g.generator_images() {
        images.push(dst.inj2.apply(&y)?);
    }
    AlgebraHom::from_generator_images(&src.algebra, &dst.algebra, &images)
}

/// The comparison `(W1⊗W2)⊗W3 -> W1⊗(W2⊗W3)` sending each generator to
/// the generator in the same position.
pub fn associator(left: &Arc<WeilAlgebra>, right: &Arc<WeilAlgebra>) -> Result<AlgebraHom, AlgebraError> {
    let n = left.vars().len();
    if n != right.vars().len() {
        return Err(AlgebraError::ImageCount { expected: n, found: right.vars().len() });
    }
    let images: Vec<Element> = (0..n).map(|i| right.generator(i)).collect();
    AlgebraHom::from_generator_images(left, right, &images)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;
    use alloc::string::ToString;

    fn alg(text: &str) -> Arc<WeilAlgebra> {
        WeilAlgebra::parse(text).unwrap()
    }

    #[test]
    fn dual_squared_is_product_square() {
        let d = alg("x | x^2 ; nil 2");
        let t = tensor_infinity(&d, &d);
        assert_eq!(t.algebra.dim(), 4);
        assert_eq!(t.algebra.presentation().to_string(), "x,y | x^2, y^2 ; nil 3");
        assert_eq!(t.algebra.basis_labels(), ["1", "x", "y", "x*y"]);
        t.inj1.verify().unwrap();
        t.inj2.verify().unwrap();
    }

    #[test]
    fn direct_construction_matches_generic_build() {
        let family = [
            "| ; nil 1",
            "x | x^2 ; nil 2",
            "x | x^3 ; nil 3",
            "x,y | x^2, y^2, x*y ; nil 2",
            "x,y | x^2, y^2 ; nil 3",
        ];
        for a in family {
            for b in family {
                let (wa, wb) = (alg(a), alg(b));
                let t = tensor_infinity(&wa, &wb);
                let generic = WeilAlgebra::build(t.algebra.presentation().clone()).unwrap();
                assert_eq!(t.algebra.basis(), generic.basis(), "{a} ⊗ {b}");
                for i in 0..generic.dim() {
                    for j in 0..generic.dim() {
                        assert_eq!(t.algebra.product_of_basis(i, j), generic.product_of_basis(i, j));
                    }
                }
                assert_eq!(t.algebra.generator_coords(), generic.generator_coords());
                assert_eq!(t.algebra.dim(), wa.dim() * wb.dim());
            }
        }
    }

    #[test]
    fn unit_law() {
        let d2 = alg("x | x^3 ; nil 3");
        let r = WeilAlgebra::real_line();
        let t = tensor_infinity(&d2, &r);
        assert!(t.inj1.is_bijective());
        let t = tensor_infinity(&d2, &alg("x | x^2 ; nil 2"));
        assert_eq!(t.algebra.dim(), 6);
    }

    #[test]
    fn hom_tensor_is_kronecker() {
        let d = alg("x | x^2 ; nil 2");
        let d2 = alg("x | x^3 ; nil 3");
        let sq = AlgebraHom::from_generator_images(&d, &d2, &[d2.parse_element("x^2").unwrap()]).unwrap();
        let id = AlgebraHom::identity(&d);
        let src = tensor_infinity(&d, &d);
        let dst = tensor_infinity(&d2, &d);
        let h = tensor_homs(&sq, &id, &src, &dst).unwrap();
        h.verify().unwrap();
        // compare against the Kronecker product in the unsorted pair-index basis
        let kron = |a: &Matrix, b: &Matrix| {
            let mut m = Matrix::zeros(a.rows() * b.rows(), a.cols() * b.cols());
            for i in 0..a.rows() {
                for j in 0..a.cols() {
                    for k in 0..b.rows() {
                        for l in 0..b.cols() {
                            m.set(i * b.rows() + k, j * b.cols() + l, a.get(i, j) * b.get(k, l));
                        }
                    }
                }
            }
            m
        };
        let expected = kron(sq.matrix(), id.matrix());
        let index = |t: &TensorProduct, w1: &WeilAlgebra, w2: &WeilAlgebra, i: usize, j: usize| {
            t.algebra.basis_index(&w1.basis()[i].concat(&w2.basis()[j])).unwrap()
        };
        for i in 0..d2.dim() {
            for k in 0..d.dim() {
                for j in 0..d.dim() {
                    for l in 0..d.dim() {
                        let row = index(&dst, &d2, &d, i, k);
                        let col = index(&src, &d, &d, j, l);
                        assert_eq!(h.matrix().get(row, col), expected.get(i * d.dim() + k, j * d.dim() + l));
                    }
                }
            }
        }
    }

    #[test]
    fn associativity_comparison_is_bijective() {
        let d = alg("x | x^2 ; nil 2");
        let d2 = alg("x | x^3 ; nil 3");
        let left = tensor_infinity(&tensor_infinity(&d, &d2).algebra, &d);
        let right = tensor_infinity(&d, &tensor_infinity(&d2, &d).algebra);
        let a = associator(&left.algebra, &right.algebra).unwrap();
        a.verify().unwrap();
        assert!(a.is_bijective());
    }
}
