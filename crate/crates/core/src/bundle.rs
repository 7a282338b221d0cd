//! Relative prolongation `E ⊗_M W` for trivial bundles `R^n × R^b -> R^n`,
//! and model-level comparisons built on it.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::algebra::{Element, WeilAlgebra};
use crate::category::{
    check_fibered_assoc_with, fibered_pair, fibered_tensor, finite_limit, product_w, with_terminal, Diagram,
    FiberedTensor,
};
use crate::error::{AlgebraError, JetError};
use crate::expr::Expr;
use crate::hom::AlgebraHom;
use crate::jet::{prolong_map, WPoint};
use crate::linalg::{Echelon, Matrix};
use crate::rational::{frac, int, Rational};
use crate::scalar::Scalar;
use crate::tensor::{associator, tensor_homs, tensor_infinity, TensorProduct};

/// `π : R^n × R^b -> R^n`, the first projection.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrivialBundleModel {
    pub base_dim: usize,
    pub fiber_dim: usize,
}

impl TrivialBundleModel {
    pub fn new(base_dim: usize, fiber_dim: usize) -> Self {
        TrivialBundleModel { base_dim, fiber_dim }
    }
}

/// `E ⊗_M W` for a trivial bundle: a base point together with a W-point of
/// the fiber.
#[derive(Clone, Debug)]
pub struct FiberedProlongation {
    bundle: TrivialBundleModel,
    algebra: Arc<WeilAlgebra>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FiberedPoint<S: Scalar = Rational> {
    pub base: Vec<S>,
    pub fiber: WPoint<S>,
}

pub fn fibered_prolong(bundle: TrivialBundleModel, algebra: &Arc<WeilAlgebra>) -> FiberedProlongation {
    FiberedProlongation { bundle, algebra: algebra.clone() }
}

impl FiberedProlongation {
    pub fn bundle(&self) -> TrivialBundleModel {
        self.bundle
    }

    pub fn algebra(&self) -> &Arc<WeilAlgebra> {
        &self.algebra
    }

    pub fn total_dim(&self) -> usize {
        self.bundle.base_dim + self.bundle.fiber_dim * self.algebra.dim()
    }

    pub fn point<S: Scalar>(&self, base: Vec<S>, fiber: WPoint<S>) -> Result<FiberedPoint<S>, AlgebraError> {
        if base.len() != self.bundle.base_dim {
            return Err(AlgebraError::DimensionMismatch { expected: self.bundle.base_dim, found: base.len() });
        }
        if fiber.len() != self.bundle.fiber_dim {
            return Err(AlgebraError::DimensionMismatch { expected: self.bundle.fiber_dim, found: fiber.len() });
        }
        if !fiber.algebra().is_same(&self.algebra) {
            return Err(AlgebraError::AlgebraMismatch);
        }
        Ok(FiberedPoint { base, fiber })
    }

    /// Base coordinates first, then the flattened fiber.
    pub fn from_flat<S: Scalar>(&self, flat: &[S]) -> Result<FiberedPoint<S>, AlgebraError> {
        if flat.len() != self.total_dim() {
            return Err(AlgebraError::DimensionMismatch { expected: self.total_dim(), found: flat.len() });
        }
        let (base, fiber) = flat.split_at(self.bundle.base_dim);
        Ok(FiberedPoint { base: base.to_vec(), fiber: WPoint::from_flat(&self.algebra, fiber)? })
    }

    pub fn flatten<S: Scalar>(&self, p: &FiberedPoint<S>) -> Vec<S> {
        let mut out = p.base.clone();
        out.extend(p.fiber.flatten());
        out
    }

    pub fn project<S: Scalar>(&self, p: &FiberedPoint<S>) -> Vec<S> {
        p.base.clone()
    }

    /// The point of `(R^n × R^b) ⊗ W` with W-constant base coordinates.
    pub fn embed<S: Scalar>(&self, p: &FiberedPoint<S>) -> WPoint<S> {
        let base = WPoint::constant(&self.algebra, &p.base);
        WPoint::join(&self.algebra, &[base, p.fiber.clone()]).expect("same algebra")
    }

    /// The image of [`Self::embed`] inside the flattened `(R^n × R^b) ⊗ W`.
    pub fn carrier(&self) -> Echelon {
        let d = self.algebra.dim();
        let n = self.bundle.base_dim;
        let total = (n + self.bundle.fiber_dim) * d;
        let unit = |i: usize| {
            let mut v = vec![Rational::zero(); total];
            v[i] = Rational::one();
            v
        };
        Echelon::from_vectors(total, (0..n).map(|i| unit(i * d)).chain((n * d..total).map(unit)))
    }

    pub fn add<S: Scalar>(&self, p: &FiberedPoint<S>, q: &FiberedPoint<S>) -> Result<FiberedPoint<S>, AlgebraError> {
        if p.base != q.base {
            return Err(AlgebraError::BaseMismatch);
        }
        let fiber: Vec<S> = p.fiber.flatten().into_iter().zip(q.fiber.flatten()).map(|(a, b)| a + b).collect();
        Ok(FiberedPoint { base: p.base.clone(), fiber: WPoint::from_flat(&self.algebra, &fiber)? })
    }

    pub fn scale<S: Scalar>(&self, k: &S, p: &FiberedPoint<S>) -> FiberedPoint<S> {
        let fiber: Vec<S> = p.fiber.flatten().into_iter().map(|a| a * k.clone()).collect();
        FiberedPoint { base: p.base.clone(), fiber: WPoint::from_flat(&self.algebra, &fiber).expect("same length") }
    }
}

/// A bundle map over the identity of `R^n`: `(x, v) ↦ (x, F(x, v))`, with
/// `F` given by one expression per output fiber coordinate in the variables
/// `u0..u{n-1}` (base) and `u{n}..` (fiber).
#[derive(Clone, Debug)]
pub struct BundleMap {
    pub source: TrivialBundleModel,
    pub target: TrivialBundleModel,
    pub fiber_exprs: Vec<Expr>,
}

impl BundleMap {
    pub fn new(source: TrivialBundleModel, fiber_exprs: Vec<Expr>) -> Result<Self, JetError> {
        let arity = source.base_dim + source.fiber_dim;
        for f in &fiber_exprs {
            f.check_arity(arity)?;
        }
        let target = TrivialBundleModel::new(source.base_dim, fiber_exprs.len());
        Ok(BundleMap { source, target, fiber_exprs })
    }

    /// The projection onto the fiber coordinates listed in `keep`.
    pub fn fiber_projection(source: TrivialBundleModel, keep: &[usize]) -> Self {
        let exprs = keep.iter().map(|&i| Expr::var(source.base_dim + i)).collect();
        BundleMap { source, target: TrivialBundleModel::new(source.base_dim, keep.len()), fiber_exprs: exprs }
    }

    /// The prolonged map on `E ⊗_M W`.
    pub fn apply<S: Scalar>(
        &self,
        space: &FiberedProlongation,
        p: &FiberedPoint<S>,
    ) -> Result<FiberedPoint<S>, JetError> {
        let fiber = prolong_map(&self.fiber_exprs, space.algebra()).apply(&space.embed(p))?;
        Ok(FiberedPoint { base: p.base.clone(), fiber })
    }

    /// Matrix of the prolonged map on flattened points, read off basis
    /// points; meaningful when the map is linear.
    pub fn linear_matrix(&self, space: &FiberedProlongation) -> Result<Matrix, JetError> {
        let target = fibered_prolong(self.target, space.algebra());
        let columns = (0..space.total_dim())
            .map(|i| {
                let mut flat = vec![Rational::zero(); space.total_dim()];
                flat[i] = Rational::one();
                Ok(target.flatten(&self.apply(space, &space.from_flat(&flat)?)?))
            })
            .collect::<Result<Vec<_>, JetError>>()?;
        Ok(Matrix::from_columns(target.total_dim(), &columns))
    }
}

/// `{(p, q) : A p = B q}`, flattened as `p` then `q`.
fn fibered_product_space(a: &Matrix, b: &Matrix) -> Echelon {
    let neg_b = b.neg();
    let m = Matrix::hstack(a.rows(), &[a, &neg_b]);
    Echelon::from_vectors(a.cols() + b.cols(), m.kernel())
}

fn base_projection(space: &FiberedProlongation) -> Matrix {
    let n = space.bundle().base_dim;
    let mut m = Matrix::zeros(n, space.total_dim());
    for i in 0..n {
        m.set(i, i, Rational::one());
    }
    m
}

/// Outcome of comparing a prolonged product with the product of prolongations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductPreservationReport {
    pub prolonged_product_dim: usize,
    pub product_of_prolongations_dim: usize,
    pub comparison_bijective: bool,
}

impl ProductPreservationReport {
    pub fn passed(&self) -> bool {
        self.prolonged_product_dim == self.product_of_prolongations_dim && self.comparison_bijective
    }
}

/// `(E ×_M F) ⊗_M W` against `(E ⊗_M W) ×_M (F ⊗_M W)` for `E = R^n × R^{b1}`
/// and `F = R^n × R^{b2}`, compared through the prolonged projections.
pub fn check_product_preservation(
    n: usize,
    b1: usize,
    b2: usize,
    w: &Arc<WeilAlgebra>,
) -> Result<ProductPreservationReport, JetError> {
    let ef = TrivialBundleModel::new(n, b1 + b2);
    let prolonged = fibered_prolong(ef, w);
    let pe = fibered_prolong(TrivialBundleModel::new(n, b1), w);
    let pf = fibered_prolong(TrivialBundleModel::new(n, b2), w);
    let to_e = BundleMap::fiber_projection(ef, &(0..b1).collect::<Vec<_>>()).linear_matrix(&prolonged)?;
    let to_f = BundleMap::fiber_projection(ef, &(b1..b1 + b2).collect::<Vec<_>>()).linear_matrix(&prolonged)?;
    let comparison = Matrix::vstack(prolonged.total_dim(), &[&to_e, &to_f]);
    let target = fibered_product_space(&base_projection(&pe), &base_projection(&pf));
    Ok(ProductPreservationReport {
        prolonged_product_dim: prolonged.total_dim(),
        product_of_prolongations_dim: target.rank(),
        comparison_bijective: comparison.is_injective() && comparison.column_space() == target,
    })
}

/// `{p ∈ R^n ⊗ (W1 ⊗ W2) : (id ⊗ f) p = (id ⊗ g) p}` for the fibered pair.
fn model_carrier(n: usize, t: &TensorProduct) -> Echelon {
    let (f, g) = fibered_pair(t);
    let diff = f.matrix().sub(g.matrix()).repeat_diagonal(n);
    Echelon::from_vectors(n * t.algebra.dim(), diff.kernel())
}

/// `(R^n ⊗ W1) ⊗_{R^n} W2` as the equalizer subspace of `R^n ⊗ (W1 ⊗∞ W2)`.
#[derive(Clone, Debug)]
pub struct IteratedProlongationSpace {
    pub n: usize,
    pub fibered: FiberedTensor,
    pub carrier: Echelon,
}

pub fn iterated_prolongation(
    n: usize,
    w1: &Arc<WeilAlgebra>,
    w2: &Arc<WeilAlgebra>,
) -> Result<IteratedProlongationSpace, AlgebraError> {
    Ok(iterated_with(n, fibered_tensor(w1, w2)?))
}

/// As [`iterated_prolongation`], reusing a computed `W1 ⊗̃ W2`.
pub fn iterated_with(n: usize, fibered: FiberedTensor) -> IteratedProlongationSpace {
    let carrier = model_carrier(n, &fibered.tensor);
    IteratedProlongationSpace { n, fibered, carrier }
}

impl IteratedProlongationSpace {
    pub fn linear_dim(&self) -> usize {
        self.carrier.rank()
    }

    /// `id ⊗ ι : R^n ⊗ (W1 ⊗̃ W2) -> R^n ⊗ (W1 ⊗∞ W2)`.
    pub fn comparison(&self) -> Matrix {
        self.fibered.inclusion.matrix().repeat_diagonal(self.n)
    }

    pub fn report(&self) -> IteratedReport {
        let w1 = self.fibered.tensor.inj1.src();
        let w2 = self.fibered.tensor.inj2.src();
        let comparison = self.comparison();
        let trivial = fibered_prolong(TrivialBundleModel::new(self.n, self.n * (w1.dim() - 1)), w2);
        IteratedReport {
            n: self.n,
            carrier_dim: self.linear_dim(),
            expected_dim: self.n * self.fibered.algebra.dim(),
            trivial_bundle_dim: trivial.total_dim(),
            comparison_bijective: comparison.is_injective() && comparison.column_space() == self.carrier,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IteratedReport {
    pub n: usize,
    pub carrier_dim: usize,
    /// `n · dim(W1 ⊗̃ W2)`.
    pub expected_dim: usize,
    /// `n + n (dim W1 - 1) dim W2`: the total dimension of the same space
    /// viewed as the trivial bundle `R^n ⊗ W1 -> R^n` prolonged along `W2`.
    pub trivial_bundle_dim: usize,
    pub comparison_bijective: bool,
}

impl IteratedReport {
    pub fn passed(&self) -> bool {
        self.carrier_dim == self.expected_dim
            && self.trivial_bundle_dim == self.expected_dim
            && self.comparison_bijective
    }
}

/// Outcome of comparing `E ⊗_M W_D` with `E ×_M E` for `E = R^n ⊗ W`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EuclideanReport {
    pub n: usize,
    pub prolonged_dim: usize,
    pub fibered_product_dim: usize,
    /// `a + u + vε ↦ (a + u, a + v)` is a bijection onto `E ×_M E`.
    pub comparison_bijective: bool,
    /// For `W = W_D`: the chain through `W_{D(2)}` and its product
    /// decomposition is bijective and agrees with the direct comparison.
    pub chain: Option<bool>,
}

impl EuclideanReport {
    pub fn passed(&self) -> bool {
        self.prolonged_dim == self.fibered_product_dim && self.comparison_bijective && self.chain != Some(false)
    }
}

pub fn dual_numbers() -> Arc<WeilAlgebra> {
    WeilAlgebra::parse("x | x^2 ; nil 2").expect("valid presentation")
}

/// Coefficients of `ε^0` and `ε^1` on `W ⊗ W_D`, as two linear maps to `W`.
fn epsilon_parts(w: &Arc<WeilAlgebra>, t: &TensorProduct) -> (Matrix, Matrix) {
    let d = dual_numbers();
    let mut p0 = Matrix::zeros(w.dim(), t.algebra.dim());
    let mut p1 = Matrix::zeros(w.dim(), t.algebra.dim());
    for (i, m) in w.basis().iter().enumerate() {
        let at0 = t.algebra.basis_index(&m.concat(&d.basis()[0])).expect("product basis");
        let at1 = t.algebra.basis_index(&m.concat(&d.basis()[1])).expect("product basis");
        p0.set(i, at0, Rational::one());
        p1.set(i, at1, Rational::one());
    }
    (p0, p1)
}

pub fn euclidean_check(n: usize, w: &Arc<WeilAlgebra>) -> Result<EuclideanReport, AlgebraError> {
    let d = dual_numbers();
    let iterated = iterated_prolongation(n, w, &d)?;
    let t = &iterated.fibered.tensor;
    let (p0, p1) = epsilon_parts(w, t);
    let constant = AlgebraHom::constant(w, w);
    let second = constant.matrix().mul(&p0).add(&p1);
    let direct = Matrix::vstack(t.algebra.dim() * n, &[&p0.repeat_diagonal(n), &second.repeat_diagonal(n)]);

    let proj = AlgebraHom::augmentation(w, &WeilAlgebra::real_line()).matrix().repeat_diagonal(n);
    let target = fibered_product_space(&proj, &proj);
    let on_carrier = direct.mul(&iterated.carrier.basis_matrix());
    let comparison_bijective = on_carrier.is_injective() && on_carrier.column_space() == target;

    let chain = if w.is_same(&d) { Some(dual_chain(n, &iterated.fibered, &direct, &target)?) } else { None };
    Ok(EuclideanReport {
        n,
        prolonged_dim: iterated.linear_dim(),
        fibered_product_dim: target.rank(),
        comparison_bijective,
        chain,
    })
}

/// `W_D ⊗̃ W_D ≅ W_{D(2)} = W_D × W_D`, applied coordinatewise.
fn dual_chain(n: usize, fibered: &FiberedTensor, direct: &Matrix, target: &Echelon) -> Result<bool, AlgebraError> {
    let d = dual_numbers();
    let d2 = WeilAlgebra::parse("x,y | x^2, y^2, x*y ; nil 2")?;
    let t = &fibered.tensor.algebra;
    let c = AlgebraHom::from_generator_images(&d2, t, &[t.generator(0), t.parse_element("x*y")?])?;
    let c = fibered.inclusion.factor(&c)?;
    let inverse = match c.inverse() {
        Some(inv) => inv,
        None => return Ok(false),
    };
    let product = product_w(&d, &d);
    let to_product = AlgebraHom::from_generator_images(
        &d2,
        &product.algebra,
        &[product.algebra.generator(0), product.algebra.generator(1)],
    )?;
    let legs: Vec<Matrix> = ["0", "1"]
        .iter()
        .map(|id| {
            Ok(product.cone.leg(id).unwrap().compose(&to_product)?.compose(&inverse)?.matrix().repeat_diagonal(n))
        })
        .collect::<Result<_, AlgebraError>>()?;
    let chain = Matrix::vstack(fibered.algebra.dim() * n, &[&legs[0], &legs[1]]);
    let agrees = chain == direct.mul(&fibered.inclusion.matrix().repeat_diagonal(n));
    Ok(to_product.is_bijective() && chain.is_injective() && chain.column_space() == *target && agrees)
}

/// A deterministic grid of small rationals.
fn grid(len: usize, seed: usize) -> Vec<Rational> {
    let pool = [int(0), int(1), int(-1), frac(1, 2), int(2), frac(-3, 4), int(3), frac(5, 3)];
    (0..len).map(|i| pool[(i * 5 + seed * 3 + i * seed) % pool.len()].clone()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearStructureReport {
    pub n: usize,
    pub cases: usize,
    pub failures: usize,
}

impl LinearStructureReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// The linear structure of `R^n ⊗ W_D -> R^n`: fiberwise addition of
/// nilpotent parts and scaling. Checks, over a deterministic grid, that both
/// preserve the projection, that addition agrees with the route through
/// `R^n ⊗ W_{D(2)}` and the diagonal `W_{D(2)} -> W_D`, that scaling agrees
/// with `x ↦ λx`, and that prolonged linear maps `R^n -> R^2` commute with both.
pub fn linear_structure_check(n: usize) -> Result<LinearStructureReport, JetError> {
    let d = dual_numbers();
    let d2 = WeilAlgebra::parse("x,y | x^2, y^2, x*y ; nil 2")?;
    let diagonal = AlgebraHom::from_generator_images(&d2, &d, &[d.generator(0), d.generator(0)])?;

    let linear: Vec<Expr> = (0..2)
        .map(|row| {
            let coeffs = grid(n, row + 7);
            coeffs.iter().enumerate().fold(Expr::constant(Rational::zero()), |acc, (i, c)| {
                acc.add(Expr::constant(c.clone()).mul(Expr::var(i)))
            })
        })
        .collect();
    let map = prolong_map(&linear, &d);

    let mut cases = 0;
    let mut failures = 0;
    for seed in 0..6 {
        let base = grid(n, seed);
        let u = grid(n, seed + 11);
        let v = grid(n, seed + 23);
        let lambda = grid(1, seed + 3).swap_remove(0);
        let p = tangent_point(&d, &base, &u);
        let q = tangent_point(&d, &base, &v);
        let sum = tangent_add(&p, &q)?;
        let scaled = tangent_scale(&lambda, &p);

        let paired = WPoint::from_flat(
            &d2,
            &(0..n).flat_map(|i| [base[i].clone(), u[i].clone(), v[i].clone()]).collect::<Vec<_>>(),
        )?;
        let via_diagonal = paired.map_hom(&diagonal)?;
        let dilation = AlgebraHom::from_generator_images(&d, &d, &[d.generator(0).scale(&lambda)])?;

        let checks = [
            sum.base() == base && scaled.base() == base,
            via_diagonal == sum,
            p.map_hom(&dilation)? == scaled,
            map.apply(&sum)? == tangent_add(&map.apply(&p)?, &map.apply(&q)?)?,
            map.apply(&scaled)? == tangent_scale(&lambda, &map.apply(&p)?),
        ];
        cases += checks.len();
        failures += checks.iter().filter(|ok| !**ok).count();
    }
    Ok(LinearStructureReport { n, cases, failures })
}

fn tangent_point(d: &Arc<WeilAlgebra>, base: &[Rational], v: &[Rational]) -> WPoint {
    let flat: Vec<Rational> = base.iter().zip(v).flat_map(|(a, b)| [a.clone(), b.clone()]).collect();
    WPoint::from_flat(d, &flat).expect("two coordinates per point")
}

/// `(a + uε) + (a + vε) = a + (u + v)ε`.
pub fn tangent_add(p: &WPoint, q: &WPoint) -> Result<WPoint, AlgebraError> {
    if !p.algebra().is_same(q.algebra()) {
        return Err(AlgebraError::AlgebraMismatch);
    }
    if p.base() != q.base() {
        return Err(AlgebraError::BaseMismatch);
    }
    let coords = p.coords().iter().zip(q.coords()).map(|(a, b)| a.add_unchecked(&b.nilpotent_part())).collect();
    WPoint::new(p.algebra(), coords)
}

/// `λ(a + uε) = a + λuε`.
pub fn tangent_scale(lambda: &Rational, p: &WPoint) -> WPoint {
    let coords: Vec<Element> = p
        .coords()
        .iter()
        .map(|c| Element::constant(p.algebra(), c.augmentation()).add_unchecked(&c.nilpotent_part().scale(lambda)))
        .collect();
    WPoint::new(p.algebra(), coords).expect("same algebra")
}

/// Outcome of comparing `Lim((R^n ⊗ W) ⊗_{R^n} 𝔻)` with
/// `(R^n ⊗ W) ⊗_{R^n} Lim 𝔻` at model level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MicrolinearityReport {
    pub n: usize,
    pub limit_dim: usize,
    pub prolonged_limit_dim: usize,
    pub comparison_bijective: bool,
}

impl MicrolinearityReport {
    pub fn passed(&self) -> bool {
        self.limit_dim == self.prolonged_limit_dim && self.comparison_bijective
    }
}

/// The limit is taken over the diagram with a terminal node adjoined, so
/// that the base points of the fibered pieces are identified.
pub fn m_microlinearity_check(
    n: usize,
    w: &Arc<WeilAlgebra>,
    diagram: &Diagram,
) -> Result<MicrolinearityReport, AlgebraError> {
    let plus = with_terminal(diagram)?;
    let nodes = plus.nodes();
    let tensors: Vec<TensorProduct> = nodes.iter().map(|(_, v)| tensor_infinity(w, v)).collect();
    let sizes: Vec<usize> = tensors.iter().map(|t| n * t.algebra.dim()).collect();
    let offsets: Vec<usize> = sizes
        .iter()
        .scan(0, |acc, s| {
            let at = *acc;
            *acc += s;
            Some(at)
        })
        .collect();
    let total: usize = sizes.iter().sum();

    // each piece lies in its fibered carrier, and every edge is respected
    let mut constraints: Vec<Vec<Rational>> = Vec::new();
    for (i, t) in tensors.iter().enumerate() {
        let (f, g) = fibered_pair(t);
        let block = f.matrix().sub(g.matrix()).repeat_diagonal(n);
        for r in 0..block.rows() {
            let mut row = vec![Rational::zero(); total];
            row[offsets[i]..offsets[i] + sizes[i]].clone_from_slice(block.row(r));
            constraints.push(row);
        }
    }
    let index = |id: &str| nodes.iter().position(|(n, _)| n == id).expect("edge endpoints are nodes");
    let id_w = AlgebraHom::identity(w);
    for e in plus.edges() {
        let (s, t) = (index(&e.from), index(&e.to));
        let lifted = tensor_homs(&id_w, &e.hom, &tensors[s], &tensors[t])?.matrix().repeat_diagonal(n);
        for r in 0..lifted.rows() {
            let mut row = vec![Rational::zero(); total];
            row[offsets[s]..offsets[s] + sizes[s]].clone_from_slice(lifted.row(r));
            row[offsets[t] + r] -= Rational::one();
            constraints.push(row);
        }
    }
    let limit = Echelon::from_vectors(total, Matrix::from_rows(total, constraints).kernel());

    let lim = finite_limit(&plus)?;
    let outer = fibered_tensor(w, &lim.algebra)?;
    let blocks = nodes
        .iter()
        .zip(&tensors)
        .map(|((id, _), t)| {
            let leg = tensor_homs(&id_w, lim.cone.leg(id).unwrap(), &outer.tensor, t)?;
            Ok(leg.compose(&outer.inclusion)?.matrix().repeat_diagonal(n))
        })
        .collect::<Result<Vec<Matrix>, AlgebraError>>()?;
    let refs: Vec<&Matrix> = blocks.iter().collect();
    let comparison = Matrix::vstack(n * outer.algebra.dim(), &refs);
    Ok(MicrolinearityReport {
        n,
        limit_dim: limit.rank(),
        prolonged_limit_dim: n * outer.algebra.dim(),
        comparison_bijective: comparison.is_injective() && comparison.column_space() == limit,
    })
}

/// One step of the exponentiability chain and whether it held.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainStep {
    pub name: &'static str,
    pub dims: Vec<usize>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentiabilityReport {
    pub steps: Vec<ChainStep>,
}

impl ExponentiabilityReport {
    pub fn passed(&self) -> bool {
        self.steps.iter().all(|s| s.passed)
    }
}

/// `((R^n ⊗ W) ⊗_M W1) ⊗_M W2 = (R^n ⊗ W) ⊗_M (W1 ⊗∞ W2)`, replayed as:
/// iterate along `W1`, iterate along `W2`, reassociate the fibered tensor,
/// iterate along `W1 ⊗∞ W2`, and compare the two ends.
pub fn weil_exponentiability_check(
    n: usize,
    w: &Arc<WeilAlgebra>,
    w1: &Arc<WeilAlgebra>,
    w2: &Arc<WeilAlgebra>,
) -> Result<ExponentiabilityReport, AlgebraError> {
    let mut steps = Vec::new();
    let first = iterated_prolongation(n, w, w1)?;
    let r = first.report();
    steps.push(ChainStep { name: "iterate-w1", dims: vec![r.carrier_dim, r.expected_dim], passed: r.passed() });

    let a = first.fibered.algebra.clone();
    let second = iterated_prolongation(n, &a, w2)?;
    let r = second.report();
    steps.push(ChainStep { name: "iterate-w2", dims: vec![r.carrier_dim, r.expected_dim], passed: r.passed() });

    let assoc = check_fibered_assoc_with(&first.fibered, w2)?;
    steps.push(ChainStep { name: "reassociate", dims: vec![assoc.lhs_dim, assoc.rhs_dim], passed: assoc.passed() });

    let t12 = tensor_infinity(w1, w2);
    let direct = iterated_prolongation(n, w, &t12.algebra)?;
    let r = direct.report();
    steps.push(ChainStep { name: "iterate-w1w2", dims: vec![r.carrier_dim, r.expected_dim], passed: r.passed() });

    let lift = tensor_homs(
        &first.fibered.inclusion,
        &AlgebraHom::identity(w2),
        &second.fibered.tensor,
        &tensor_infinity(&first.fibered.tensor.algebra, w2),
    )?;
    let across = associator(lift.dst(), &direct.fibered.tensor.algebra)?.compose(&lift)?;
    let map = across.matrix().repeat_diagonal(n);
    let image = second.carrier.image(&map);
    steps.push(ChainStep {
        name: "endpoints",
        dims: vec![second.linear_dim(), direct.linear_dim()],
        passed: image.rank() == second.linear_dim() && image == direct.carrier,
    });
    Ok(ExponentiabilityReport { steps })
}
