//! W-points of `R^n` and the prolongation of smooth maps given as
//! expression trees: truncated Taylor arithmetic in a Weil algebra.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::algebra::{Element, WeilAlgebra};
use crate::error::{AlgebraError, JetError};
use crate::expr::Expr;
use crate::hom::AlgebraHom;
use crate::linalg::Matrix;
use crate::rational::Rational;
use crate::scalar::Scalar;

/// A point of `R^n ⊗ W`: one algebra element per coordinate.
#[derive(Clone, Debug)]
pub struct WPoint<S: Scalar = Rational> {
    algebra: Arc<WeilAlgebra>,
    coords: Vec<Element<S>>,
}

impl<S: Scalar> PartialEq for WPoint<S> {
    fn eq(&self, other: &Self) -> bool {
        self.algebra.is_same(&other.algebra) && self.coords == other.coords
    }
}

impl<S: Scalar> WPoint<S> {
    pub fn new(algebra: &Arc<WeilAlgebra>, coords: Vec<Element<S>>) -> Result<Self, AlgebraError> {
        if coords.iter().any(|c| !c.algebra().is_same(algebra)) {
            return Err(AlgebraError::AlgebraMismatch);
        }
        Ok(WPoint { algebra: algebra.clone(), coords })
    }

    /// The W-constant point over `base`.
    pub fn constant(algebra: &Arc<WeilAlgebra>, base: &[S]) -> Self {
        WPoint {
            algebra: algebra.clone(),
            coords: base.iter().map(|b| Element::constant(algebra, b.clone())).collect(),
        }
    }

    /// Reads `n` consecutive blocks of `dim W` coordinates.
    pub fn from_flat(algebra: &Arc<WeilAlgebra>, flat: &[S]) -> Result<Self, AlgebraError> {
        let d = algebra.dim();
        if !flat.len().is_multiple_of(d) {
            return Err(AlgebraError::DimensionMismatch { expected: d * (flat.len() / d + 1), found: flat.len() });
        }
        let coords = flat.chunks(d).map(|c| Element::from_coords(algebra, c.to_vec())).collect();
        Ok(WPoint { algebra: algebra.clone(), coords })
    }

    pub fn algebra(&self) -> &Arc<WeilAlgebra> {
        &self.algebra
    }

    pub fn coords(&self) -> &[Element<S>] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// The projection to `R^n`: the augmentation of every coordinate.
    pub fn base(&self) -> Vec<S> {
        self.coords.iter().map(Element::augmentation).collect()
    }

    pub fn is_constant(&self) -> bool {
        self.coords.iter().all(|c| c.nilpotent_part().is_zero())
    }

    /// Coordinate-major flattening into `n · dim W` scalars.
    pub fn flatten(&self) -> Vec<S> {
        self.coords.iter().flat_map(|c| c.coords().iter().cloned()).collect()
    }

    /// Applies an algebra hom to every coordinate.
    pub fn map_hom(&self, h: &AlgebraHom) -> Result<WPoint<S>, AlgebraError> {
        let coords = self.coords.iter().map(|c| h.apply_scalar(c)).collect::<Result<_, _>>()?;
        Ok(WPoint { algebra: h.dst().clone(), coords })
    }

    /// Splits into `n` one-dimensional points.
    pub fn split(&self) -> Vec<WPoint<S>> {
        self.coords.iter().map(|c| WPoint { algebra: self.algebra.clone(), coords: vec![c.clone()] }).collect()
    }

    /// Concatenates points over the same algebra.
    pub fn join(algebra: &Arc<WeilAlgebra>, parts: &[WPoint<S>]) -> Result<WPoint<S>, AlgebraError> {
        let mut coords = Vec::new();
        for p in parts {
            if !p.algebra.is_same(algebra) {
                return Err(AlgebraError::AlgebraMismatch);
            }
            coords.extend(p.coords.iter().cloned());
        }
        Ok(WPoint { algebra: algebra.clone(), coords })
    }
}

impl WPoint<Rational> {
    pub fn to_f64(&self) -> WPoint<f64> {
        WPoint { algebra: self.algebra.clone(), coords: self.coords.iter().map(Element::to_f64).collect() }
    }
}

/// Assembles a W-point from its base point and the vector attached to each
/// non-unit basis monomial, named by its label (`"x"`, `"x*y"`, ...).
pub fn w_point<S: Scalar>(
    algebra: &Arc<WeilAlgebra>,
    base: &[S],
    infinitesimal: &[(&str, Vec<S>)],
) -> Result<WPoint<S>, AlgebraError> {
    let n = base.len();
    let d = algebra.dim();
    let labels = algebra.basis_labels();
    let mut flat: Vec<S> = vec![S::zero(); n * d];
    for (i, b) in base.iter().enumerate() {
        flat[i * d] = b.clone();
    }
    for (label, v) in infinitesimal {
        let j = labels
            .iter()
            .position(|l| l == label)
            .filter(|&j| j > 0)
            .ok_or_else(|| AlgebraError::UnknownBasisMonomial(String::from(*label)))?;
        if v.len() != n {
            return Err(AlgebraError::DimensionMismatch { expected: n, found: v.len() });
        }
        for (i, c) in v.iter().enumerate() {
            flat[i * d + j] = flat[i * d + j].clone() + c.clone();
        }
    }
    WPoint::from_flat(algebra, &flat)
}

/// Evaluates `f` at a W-point. Elementary functions act on `a0 + h` through
/// the finite Taylor sum `Σ_{j<ν} g^(j)(a0) h^j / j!`, `ν` the nilpotency
/// index of `h`.
pub fn eval_jet<S: Scalar>(f: &Expr, p: &WPoint<S>) -> Result<Element<S>, JetError> {
    f.check_arity(p.len())?;
    eval_inner(f, p)
}

fn eval_inner<S: Scalar>(f: &Expr, p: &WPoint<S>) -> Result<Element<S>, JetError> {
    let alg = &p.algebra;
    Ok(match f {
        Expr::Var(i) => p.coords[*i].clone(),
        Expr::Const(q) => Element::constant(alg, S::from_rational(q)),
        Expr::Add(a, b) => eval_inner(a, p)?.add_unchecked(&eval_inner(b, p)?),
        Expr::Mul(a, b) => eval_inner(a, p)?.mul_unchecked(&eval_inner(b, p)?),
        Expr::Neg(a) => eval_inner(a, p)?.neg(),
        Expr::Pow(a, e) => eval_inner(a, p)?.pow(*e),
        Expr::Apply(g, a) => {
            let a = eval_inner(a, p)?;
            let a0 = a.augmentation();
            let h = a.nilpotent_part();
            let nu = h.nilpotency_index().expect("nilpotent part has zero augmentation") as usize;
            let c = S::series(g, &a0, nu)?;
            let mut acc = Element::constant(alg, c[nu - 1].clone());
            for cj in c[..nu - 1].iter().rev() {
                acc = acc.mul_unchecked(&h).add_unchecked(&Element::constant(alg, cj.clone()));
            }
            acc
        }
    })
}

/// A map `R^m -> R^n` given by `n` expressions, prolonged to W-points.
#[derive(Clone, Debug)]
pub struct Prolonged {
    exprs: Vec<Expr>,
    algebra: Arc<WeilAlgebra>,
}

pub fn prolong_map(exprs: &[Expr], algebra: &Arc<WeilAlgebra>) -> Prolonged {
    Prolonged { exprs: exprs.to_vec(), algebra: algebra.clone() }
}

impl Prolonged {
    pub fn exprs(&self) -> &[Expr] {
        &self.exprs
    }

    pub fn algebra(&self) -> &Arc<WeilAlgebra> {
        &self.algebra
    }

    /// Number of inputs the expressions read.
    pub fn arity(&self) -> usize {
        self.exprs.iter().map(Expr::arity).max().unwrap_or(0)
    }

    pub fn apply<S: Scalar>(&self, p: &WPoint<S>) -> Result<WPoint<S>, JetError> {
        if !p.algebra.is_same(&self.algebra) {
            return Err(AlgebraError::AlgebraMismatch.into());
        }
        let coords = self.exprs.iter().map(|f| eval_jet(f, p)).collect::<Result<_, _>>()?;
        Ok(WPoint { algebra: self.algebra.clone(), coords })
    }
}

/// `R[X]/(X^{k+1})`, whose points at `x0 + x` carry derivatives up to order `k`.
pub fn truncated_line(k: usize) -> Arc<WeilAlgebra> {
    if k == 0 {
        return WeilAlgebra::real_line();
    }
    WeilAlgebra::parse(&format!("x | x^{} ; nil {}", k + 1, k + 1)).expect("truncated line is a Weil algebra")
}

/// `f^(j)(x0) / j!` for `j = 0..=k`.
pub fn taylor_coefficients<S: Scalar>(f: &Expr, x0: S, k: usize) -> Result<Vec<S>, JetError> {
    f.check_arity(1)?;
    let alg = truncated_line(k);
    let mut coords = vec![S::zero(); k + 1];
    coords[0] = x0;
    if k > 0 {
        coords[1] = S::one();
    }
    let p = WPoint::from_flat(&alg, &coords)?;
    Ok(eval_jet(f, &p)?.into_coords())
}

/// `R^n ⊗ W` as a linear space of dimension `n · dim W`, identified with
/// `(R ⊗ W)^n` coordinate by coordinate.
#[derive(Clone, Debug)]
pub struct ProlongationSpace {
    n: usize,
    algebra: Arc<WeilAlgebra>,
}

pub fn prolongation_space(n: usize, algebra: &Arc<WeilAlgebra>) -> ProlongationSpace {
    ProlongationSpace { n, algebra: algebra.clone() }
}

impl ProlongationSpace {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn algebra(&self) -> &Arc<WeilAlgebra> {
        &self.algebra
    }

    pub fn linear_dim(&self) -> usize {
        self.n * self.algebra.dim()
    }

    pub fn project<S: Scalar>(&self, p: &WPoint<S>) -> Vec<S> {
        p.base()
    }

    /// The projection to `R^n` as a matrix on flattened points.
    pub fn projection_matrix(&self) -> Matrix {
        AlgebraHom::augmentation(&self.algebra, &WeilAlgebra::real_line()).matrix().repeat_diagonal(self.n)
    }

    /// `id_{R^n} ⊗ h` on flattened points.
    pub fn induced(&self, h: &AlgebraHom) -> Matrix {
        h.matrix().repeat_diagonal(self.n)
    }

    /// The `i`-th vector of the standard basis of the flattened space.
    pub fn basis_point(&self, i: usize) -> WPoint<Rational> {
        let mut flat = vec![Rational::zero(); self.linear_dim()];
        flat[i] = Rational::from_integer(1.into());
        WPoint::from_flat(&self.algebra, &flat).expect("length is a multiple of dim W")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn alg(text: &str) -> Arc<WeilAlgebra> {
        WeilAlgebra::parse(text).unwrap()
    }

    fn e(text: &str) -> Expr {
        Expr::parse(text).unwrap()
    }

    #[test]
    fn w_point_constructor() {
        let d = alg("x | x^2 ; nil 2");
        let p = w_point(&d, &[int(3)], &[("x", vec![int(1)])]).unwrap();
        assert_eq!(p.coords()[0].display(), "3 + x");
        let c = w_point::<Rational>(&d, &[int(1), int(2)], &[]).unwrap();
        assert!(c.is_constant());
        assert_eq!(c.base(), [int(1), int(2)]);
        let d2 = alg("x | x^3 ; nil 3");
        let p = w_point(&d2, &[int(0)], &[("x", vec![int(1)]), ("x^2", vec![int(0)])]).unwrap();
        assert_eq!(p.coords()[0].display(), "x");
        assert!(matches!(w_point(&d2, &[int(0)], &[("y", vec![int(1)])]), Err(AlgebraError::UnknownBasisMonomial(_))));
        assert!(matches!(
            w_point(&d2, &[int(0)], &[("x", vec![int(1), int(2)])]),
            Err(AlgebraError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn polynomial_jets() {
        let d2 = alg("x | x^3 ; nil 3");
        let p = w_point(&d2, &[int(3)], &[("x", vec![int(1)])]).unwrap();
        assert_eq!(eval_jet(&e("u0^2"), &p).unwrap().display(), "9 + 6*x + x^2");
        assert_eq!(eval_jet(&e("u0"), &p).unwrap(), p.coords()[0]);
    }

    #[test]
    fn leibniz_rule_emerges() {
        let d = alg("x | x^2 ; nil 2");
        let p = w_point(&d, &[int(2), int(5)], &[("x", vec![int(7), int(-3)])]).unwrap();
        let out = prolong_map(&[e("u0*u1")], &d).apply(&p).unwrap();
        assert_eq!(out.coords()[0].coords(), [int(10), int(2 * -3 + 7 * 5)]);
    }

    #[test]
    fn exp_series_in_float_mode() {
        let w = alg("x | x^4 ; nil 4");
        let p = w_point(&w, &[0.0], &[("x", vec![1.0])]).unwrap();
        let out = eval_jet(&e("exp(u0)"), &p).unwrap();
        for (c, expected) in out.coords().iter().zip([1.0, 1.0, 0.5, 1.0 / 6.0]) {
            assert!((c - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn taylor_examples() {
        assert_eq!(taylor_coefficients(&e("u0^3"), int(1), 3).unwrap(), [int(1), int(3), int(3), int(1)]);
        assert_eq!(taylor_coefficients(&e("5"), int(2), 2).unwrap(), [int(5), int(0), int(0)]);
        let sin = taylor_coefficients(&e("sin(u0)"), 0.0, 5).unwrap();
        for (c, expected) in sin.iter().zip([0.0, 1.0, 0.0, -1.0 / 6.0, 0.0, 1.0 / 120.0]) {
            assert!((c - expected).abs() < 1e-12);
        }
        assert_eq!(taylor_coefficients(&e("sqrt(u0)"), int(4), 2).unwrap(), [int(2), frac(1, 4), frac(-1, 64)]);
        assert_eq!(taylor_coefficients(&e("1/u0"), int(2), 2).unwrap(), [frac(1, 2), frac(-1, 4), frac(1, 8)]);
    }

    #[test]
    fn jet_errors() {
        let d = alg("x | x^2 ; nil 2");
        let p = w_point(&d, &[int(0)], &[("x", vec![int(1)])]).unwrap();
        assert!(matches!(eval_jet(&e("log(u0)"), &p), Err(JetError::Domain(_))));
        assert!(matches!(eval_jet(&e("exp(u0 + 1)"), &p), Err(JetError::Mode(_))));
        assert!(matches!(eval_jet(&e("u0*u1"), &p), Err(JetError::Arity { expected: 2, found: 1 })));
        let pf = p.to_f64();
        assert!(matches!(eval_jet(&e("log(u0)"), &pf), Err(JetError::Domain(_))));
        assert!((eval_jet(&e("exp(u0 + 1)"), &pf).unwrap().coords()[1] - core::f64::consts::E).abs() < 1e-12);
    }

    #[test]
    fn pow_at_zero_base_on_constant_point() {
        let d = alg("x | x^2 ; nil 2");
        let p = WPoint::constant(&d, &[int(0)]);
        assert!(eval_jet(&e("sqrt(u0)"), &p).unwrap().is_zero());
        let q = w_point(&d, &[int(0)], &[("x", vec![int(1)])]).unwrap();
        assert!(matches!(eval_jet(&e("sqrt(u0)"), &q), Err(JetError::Domain(_))));
    }

    #[test]
    fn truncation_consistency() {
        let hi = truncated_line(4);
        let lo = truncated_line(3);
        let cut = AlgebraHom::from_generator_images(&hi, &lo, &[lo.generator(0)]).unwrap();
        let f = e("u0^4 - 3*u0^2 + u0/2 + 1");
        let p = w_point(&hi, &[frac(2, 3)], &[("x", vec![int(1)]), ("x^3", vec![int(5)])]).unwrap();
        let direct = eval_jet(&f, &p.map_hom(&cut).unwrap()).unwrap();
        assert_eq!(cut.apply(&eval_jet(&f, &p).unwrap()).unwrap(), direct);
    }

    #[test]
    fn prolongation_space_descriptor() {
        let d = alg("x | x^2 ; nil 2");
        let s = prolongation_space(2, &d);
        assert_eq!(s.linear_dim(), 4);
        assert_eq!(prolongation_space(3, &WeilAlgebra::real_line()).linear_dim(), 3);
        assert_eq!(prolongation_space(1, &alg("x,y | x^2, y^2, x*y ; nil 2")).linear_dim(), 3);
        let p = w_point(&d, &[int(1), int(2)], &[("x", vec![int(3), int(4)])]).unwrap();
        assert_eq!(p.flatten(), [int(1), int(3), int(2), int(4)]);
        assert_eq!(s.projection_matrix().mul_vec(&p.flatten()), s.project(&p));
        let parts = p.split();
        assert_eq!(WPoint::join(&d, &parts).unwrap(), p);
    }
}
