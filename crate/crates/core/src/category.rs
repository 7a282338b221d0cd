//! Finite limits in the category of Weil algebras, and the fibered tensor
//! `W1 ⊗̃∞ W2`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::algebra::{Element, Expansion, WeilAlgebra};
use crate::error::AlgebraError;
use crate::hom::{eval_monomials, AlgebraHom};
use crate::linalg::{Echelon, Matrix};
use crate::poly::{monomials_below, Monomial, Polynomial};
use crate::presentation::{fresh_name, juxtapose_names, Presentation};
use crate::rational::Rational;
use crate::tensor::{associator, tensor_homs, tensor_infinity, TensorProduct};

/// The algebra `R`; every Weil algebra maps to it by its augmentation.
pub fn terminal() -> Arc<WeilAlgebra> {
    WeilAlgebra::real_line()
}

/// The five algebras used for quantified checks: `R`, `W_D`, `W_{D_2}`,
/// `W_{D(2)}` and `W_{D×D}`.
pub fn family() -> Vec<(&'static str, Arc<WeilAlgebra>)> {
    [
        ("R", "| ; nil 1"),
        ("W_D", "x | x^2 ; nil 2"),
        ("W_D2", "x | x^3 ; nil 3"),
        ("W_D(2)", "x,y | x^2, y^2, x*y ; nil 2"),
        ("W_DxD", "x,y | x^2, y^2 ; nil 3"),
    ]
    .into_iter()
    .map(|(name, text)| (name, WeilAlgebra::parse(text).expect("family presentations are valid")))
    .collect()
}

/// A subspace of an algebra containing `1` and closed under multiplication.
#[derive(Clone, Debug)]
pub struct Subalgebra {
    ambient: Arc<WeilAlgebra>,
    space: Echelon,
}

impl Subalgebra {
    /// Checks that `space` contains `1` and is closed under products.
    pub fn new(ambient: &Arc<WeilAlgebra>, space: Echelon) -> Result<Self, AlgebraError> {
        let sub = Self::new_unchecked(ambient, space)?;
        let basis = sub.space.basis();
        for (i, a) in basis.iter().enumerate() {
            for b in &basis[i..] {
                if !sub.space.contains(&ambient.mul_coords(a, b)) {
                    return Err(AlgebraError::NotSubalgebra("not closed under multiplication".into()));
                }
            }
        }
        Ok(sub)
    }

    /// Checks only that `1` lies in `space`.
    pub(crate) fn new_unchecked(ambient: &Arc<WeilAlgebra>, space: Echelon) -> Result<Self, AlgebraError> {
        if space.ambient_dim() != ambient.dim() {
            return Err(AlgebraError::DimensionMismatch { expected: ambient.dim(), found: space.ambient_dim() });
        }
        let mut one = vec![Rational::zero(); ambient.dim()];
        one[0] = Rational::one();
        if !space.contains(&one) {
            return Err(AlgebraError::NotSubalgebra("does not contain 1".into()));
        }
        Ok(Subalgebra { ambient: ambient.clone(), space })
    }

    pub fn ambient(&self) -> &Arc<WeilAlgebra> {
        &self.ambient
    }

    pub fn space(&self) -> &Echelon {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.rank()
    }

    /// Presents the subalgebra as a Weil algebra of its own, with the
    /// inclusion into the ambient algebra.
    ///
    /// Generators lift a basis of `m/m^2`; relations are all linear relations
    /// among their monomials below the nilpotency index `k`, together with the
    /// degree-`k` monomials that those relations do not already lead.
    pub fn to_algebra(&self) -> Result<(Arc<WeilAlgebra>, AlgebraHom), AlgebraError> {
        let amb = &self.ambient;
        let d = amb.dim();
        if self.space.rank() == d {
            return Ok((amb.clone(), AlgebraHom::identity(amb)));
        }
        let maximal: Vec<Vec<Rational>> = self
            .space
            .basis()
            .iter()
            .zip(self.space.pivots())
            .filter(|(_, &p)| p != 0)
            .map(|(v, _)| v.clone())
            .collect();

        let mut square = Echelon::empty(d);
        for (i, a) in maximal.iter().enumerate() {
            for b in &maximal[i..] {
                square.insert(amb.mul_coords(a, b));
            }
        }
        let mut spanned = square;
        let generators: Vec<Vec<Rational>> = maximal.iter().filter(|v| spanned.insert((*v).clone())).cloned().collect();

        let mut power = Echelon::from_vectors(d, maximal.iter().cloned());
        let mut k: u32 = 1;
        while !power.is_zero() {
            let mut next = Echelon::empty(d);
            for u in power.basis() {
                for v in &maximal {
                    next.insert(amb.mul_coords(u, v));
                }
            }
            power = next;
            k += 1;
        }

        let r = generators.len();
        let mut names: Vec<String> = Vec::with_capacity(r);
        for _ in 0..r {
            let name = fresh_name(&names);
            names.push(name);
        }
        let images: Vec<Element> = generators.iter().map(|g| Element::new(amb, g.clone())).collect::<Result<_, _>>()?;

        let mut monos = monomials_below(r, k);
        monos.sort_by(|a, b| a.grlex_cmp(b));
        let values = eval_monomials(&monos, &images, amb);
        let columns: Vec<Vec<Rational>> = values.into_iter().map(Element::into_coords).collect();
        let evaluation = Matrix::from_columns(d, &columns);

        let mut relations: Vec<(Monomial, Polynomial)> = Vec::new();
        for v in evaluation.kernel() {
            let mut p = Polynomial::zero(r);
            let mut lead: Option<&Monomial> = None;
            for (c, m) in v.iter().zip(&monos) {
                if !c.is_zero() {
                    p.add_term(m.clone(), c.clone());
                    lead = Some(m);
                }
            }
            let lead = lead.expect("kernel vectors are nonzero").clone();
            relations.push((lead, p));
        }
        for m in monomials_below(r, k + 1).into_iter().filter(|m| m.degree() == k) {
            let led = relations.iter().any(|(lead, _)| divides(lead, &m));
            if !led {
                relations.push((m.clone(), Polynomial::monomial(m, Rational::one())));
            }
        }
        relations.sort_by(|a, b| a.0.listing_cmp(&b.0));
        let pres = Presentation::new(names, relations.into_iter().map(|(_, p)| p).collect(), k)?;
        let algebra = Arc::new(WeilAlgebra::from_closed_ideal(pres)?);
        if algebra.dim() != self.dim() {
            return Err(AlgebraError::NotSubalgebra(format!(
                "presented dimension {} differs from subspace dimension {}",
                algebra.dim(),
                self.dim()
            )));
        }
        let inclusion = AlgebraHom::from_generator_images(&algebra, amb, &images)?;
        Ok((algebra, inclusion))
    }
}

fn divides(a: &Monomial, b: &Monomial) -> bool {
    a.exponents().iter().zip(b.exponents()).all(|(x, y)| x <= y)
}

/// Homs out of a common apex, one per diagram node.
#[derive(Clone, Debug)]
pub struct Cone {
    pub apex: Arc<WeilAlgebra>,
    pub legs: Vec<(String, AlgebraHom)>,
}

impl Cone {
    pub fn leg(&self, id: &str) -> Option<&AlgebraHom> {
        self.legs.iter().find(|(n, _)| n == id).map(|(_, h)| h)
    }

    /// Checks `edge ∘ leg(from) = leg(to)` for every edge.
    pub fn check_commutes(&self, diagram: &Diagram) -> Result<(), AlgebraError> {
        for (id, _) in &diagram.nodes {
            if self.leg(id).is_none() {
                return Err(AlgebraError::ConeNotCommuting(format!("missing leg for node '{id}'")));
            }
        }
        for e in &diagram.edges {
            let lhs = e.hom.compose(self.leg(&e.from).unwrap())?;
            if lhs.matrix() != self.leg(&e.to).unwrap().matrix() {
                return Err(AlgebraError::ConeNotCommuting(format!("edge {} -> {}", e.from, e.to)));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct Edge {
    pub from: String,
    pub to: String,
    pub hom: AlgebraHom,
}

/// A finite diagram of Weil algebras and homs.
#[derive(Clone, Debug, Default)]
pub struct Diagram {
    nodes: Vec<(String, Arc<WeilAlgebra>)>,
    edges: Vec<Edge>,
}

impl Diagram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_node(&mut self, id: &str, algebra: Arc<WeilAlgebra>) -> Result<(), AlgebraError> {
        if self.node(id).is_some() {
            return Err(AlgebraError::MalformedDiagram(format!("duplicate node '{id}'")));
        }
        self.nodes.push((id.to_string(), algebra));
        Ok(())
    }

    pub fn add_edge(&mut self, from: &str, to: &str, hom: AlgebraHom) -> Result<(), AlgebraError> {
        let missing = |id: &str| AlgebraError::MalformedDiagram(format!("unknown node '{id}'"));
        let src = self.node(from).ok_or_else(|| missing(from))?;
        let dst = self.node(to).ok_or_else(|| missing(to))?;
        if !src.is_same(hom.src()) || !dst.is_same(hom.dst()) {
            return Err(AlgebraError::MalformedDiagram(format!("edge {from} -> {to} does not match its nodes")));
        }
        self.edges.push(Edge { from: from.to_string(), to: to.to_string(), hom });
        Ok(())
    }

    pub fn node(&self, id: &str) -> Option<&Arc<WeilAlgebra>> {
        self.nodes.iter().find(|(n, _)| n == id).map(|(_, a)| a)
    }

    pub fn nodes(&self) -> &[(String, Arc<WeilAlgebra>)] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    fn index_of(&self, id: &str) -> usize {
        self.nodes.iter().position(|(n, _)| n == id).expect("edge endpoints are nodes")
    }
}

/// The product `W_1 × ... × W_n` in the category: `R·1 ⊕ m_1 ⊕ ... ⊕ m_n`
/// with `m_i · m_j = 0` for `i != j`.
#[derive(Clone, Debug)]
pub struct ProductW {
    pub algebra: Arc<WeilAlgebra>,
    pub projections: Vec<AlgebraHom>,
    /// `positions[i][j]`: index in the product of basis element `j >= 1` of factor `i`.
    positions: Vec<Vec<usize>>,
}

impl ProductW {
    /// The unique hom `C -> product` with the given projections.
    pub fn pair(&self, legs: &[AlgebraHom]) -> Result<AlgebraHom, AlgebraError> {
        if legs.len() != self.projections.len() {
            return Err(AlgebraError::ImageCount { expected: self.projections.len(), found: legs.len() });
        }
        let apex = match legs.first() {
            Some(h) => h.src().clone(),
            None => return Err(AlgebraError::MalformedDiagram("pairing needs at least one leg".into())),
        };
        let mut m = Matrix::zeros(self.algebra.dim(), apex.dim());
        for c in 0..apex.dim() {
            m.set(0, c, legs[0].matrix().get(0, c).clone());
        }
        for (i, (leg, proj)) in legs.iter().zip(&self.projections).enumerate() {
            if !leg.src().is_same(&apex) || !leg.dst().is_same(proj.dst()) {
                return Err(AlgebraError::AlgebraMismatch);
            }
            for (j, &row) in self.positions[i].iter().enumerate().skip(1) {
                for c in 0..apex.dim() {
                    m.set(row, c, leg.matrix().get(j, c).clone());
                }
            }
        }
        AlgebraHom::from_matrix_unchecked(&apex, &self.algebra, m)
    }
}

/// The product of finitely many Weil algebras, built directly. Its
/// presentation juxtaposes the factors' generators, keeps their relations,
/// adds every cross product of generators, and takes the largest bound.
pub fn product_many(factors: &[Arc<WeilAlgebra>]) -> ProductW {
    let mut vars: Vec<String> = Vec::new();
    let mut offsets = Vec::with_capacity(factors.len());
    for w in factors {
        offsets.push(vars.len());
        vars = juxtapose_names(&vars, w.vars());
    }
    let total = vars.len();
    let mut relations: Vec<Polynomial> = Vec::new();
    for (w, &off) in factors.iter().zip(&offsets) {
        relations.extend(w.presentation().relations().iter().map(|r| r.embed(off, total)));
    }
    for (i, (wi, &oi)) in factors.iter().zip(&offsets).enumerate() {
        for (wj, &oj) in factors.iter().zip(&offsets).skip(i + 1) {
            for a in 0..wi.vars().len() {
                for b in 0..wj.vars().len() {
                    let m = Monomial::var(total, oi + a).mul(&Monomial::var(total, oj + b));
                    relations.push(Polynomial::monomial(m, Rational::one()));
                }
            }
        }
    }
    let bound = factors.iter().map(|w| w.presentation().nilpotency_bound()).max().unwrap_or(1);
    let pres = Presentation::from_parts_unchecked(vars, relations, bound);

    let mut basis = vec![Monomial::one(total)];
    let mut positions = Vec::with_capacity(factors.len());
    for (w, &off) in factors.iter().zip(&offsets) {
        let mut pos = vec![0];
        for m in &w.basis()[1..] {
            pos.push(basis.len());
            basis.push(m.embed(off, total));
        }
        positions.push(pos);
    }
    let d = basis.len();
    let mut table: Vec<Expansion<Rational>> = vec![Vec::new(); d * d];
    for j in 0..d {
        table[j] = vec![(j, Rational::one())];
        table[j * d] = vec![(j, Rational::one())];
    }
    for (w, pos) in factors.iter().zip(&positions) {
        for a in 1..w.dim() {
            for b in 1..w.dim() {
                table[pos[a] * d + pos[b]] =
                    w.product_of_basis(a, b).iter().map(|(k, c)| (pos[*k], c.clone())).collect();
            }
        }
    }
    let mut generators = Vec::with_capacity(total);
    for (w, pos) in factors.iter().zip(&positions) {
        for g in w.generator_coords() {
            let mut v = vec![Rational::zero(); d];
            for (k, c) in g.iter().enumerate() {
                v[pos[k]] = c.clone();
            }
            generators.push(v);
        }
    }
    let unsorted = basis.clone();
    let algebra = Arc::new(WeilAlgebra::from_unsorted_parts(pres, basis, table, generators));
    let positions = positions
        .into_iter()
        .map(|pos| pos.into_iter().map(|p| algebra.basis_index(&unsorted[p]).unwrap()).collect())
        .collect();

    let projections = factors
        .iter()
        .zip(&offsets)
        .map(|(w, &off)| {
            let images: Vec<Element> = (0..total)
                .map(|v| if v >= off && v < off + w.vars().len() { w.generator(v - off) } else { Element::zero(w) })
                .collect();
            AlgebraHom::from_generator_images(&algebra, w, &images).expect("projection is a hom")
        })
        .collect();
    ProductW { algebra, projections, positions }
}

/// A limit algebra with its cone and its embedding into the ambient algebra
/// in which it was computed (the product of the nodes, or the source of an
/// equalized pair).
#[derive(Clone, Debug)]
pub struct LimitResult {
    pub algebra: Arc<WeilAlgebra>,
    pub cone: Cone,
    pub embedding: AlgebraHom,
    pub subalgebra: Subalgebra,
    product: Option<(ProductW, Vec<String>)>,
}

impl LimitResult {
    /// The unique hom from a commuting cone's apex into the limit.
    pub fn factor(&self, cone: &Cone) -> Result<AlgebraHom, AlgebraError> {
        let target = match &self.product {
            Some((product, ids)) => {
                let legs: Vec<AlgebraHom> = ids
                    .iter()
                    .map(|id| cone.leg(id).cloned().ok_or(AlgebraError::NoFactorization))
                    .collect::<Result<_, _>>()?;
                if legs.is_empty() {
                    return Ok(AlgebraHom::augmentation(&cone.apex, &self.algebra));
                }
                product.pair(&legs)?
            }
            None => cone.leg("src").cloned().ok_or(AlgebraError::NoFactorization)?,
        };
        let u = self.embedding.factor(&target)?;
        for (id, leg) in &self.cone.legs {
            if let Some(given) = cone.leg(id) {
                if leg.compose(&u)?.matrix() != given.matrix() {
                    return Err(AlgebraError::NoFactorization);
                }
            }
        }
        Ok(u)
    }

    /// Uniqueness of factorizations: the embedding has trivial kernel.
    pub fn factorization_is_unique(&self) -> bool {
        self.embedding.is_injective()
    }
}

/// The equalizer `{w : f(w) = g(w)}` of a parallel pair, with its inclusion.
pub fn equalizer(f: &AlgebraHom, g: &AlgebraHom) -> Result<LimitResult, AlgebraError> {
    if !f.src().is_same(g.src()) || !f.dst().is_same(g.dst()) {
        return Err(AlgebraError::AlgebraMismatch);
    }
    let src = f.src();
    let kernel = f.matrix().sub(g.matrix()).kernel();
    let sub = Subalgebra::new(src, Echelon::from_vectors(src.dim(), kernel))?;
    let (algebra, inclusion) = sub.to_algebra()?;
    let legs = vec![("src".to_string(), inclusion.clone()), ("dst".to_string(), f.compose(&inclusion)?)];
    Ok(LimitResult {
        algebra: algebra.clone(),
        cone: Cone { apex: algebra, legs },
        embedding: inclusion,
        subalgebra: sub,
        product: None,
    })
}

/// The binary product, as the limit of the discrete diagram `{"0": w1, "1": w2}`.
pub fn product_w(w1: &Arc<WeilAlgebra>, w2: &Arc<WeilAlgebra>) -> LimitResult {
    let product = product_many(&[w1.clone(), w2.clone()]);
    let algebra = product.algebra.clone();
    let legs =
        vec![("0".to_string(), product.projections[0].clone()), ("1".to_string(), product.projections[1].clone())];
    LimitResult {
        cone: Cone { apex: algebra.clone(), legs },
        embedding: AlgebraHom::identity(&algebra),
        subalgebra: Subalgebra { space: Echelon::full(algebra.dim()), ambient: algebra.clone() },
        algebra,
        product: Some((product, vec!["0".into(), "1".into()])),
    }
}

/// The limit of a finite diagram: the product of its nodes cut down by one
/// joint kernel of every edge constraint `h ∘ π_from = π_to`. The empty
/// diagram has limit `R`.
pub fn finite_limit(diagram: &Diagram) -> Result<LimitResult, AlgebraError> {
    let factors: Vec<Arc<WeilAlgebra>> = diagram.nodes.iter().map(|(_, a)| a.clone()).collect();
    let product = product_many(&factors);
    let p = &product.algebra;
    let blocks: Vec<Matrix> = diagram
        .edges
        .iter()
        .map(|e| {
            let from = &product.projections[diagram.index_of(&e.from)];
            let to = &product.projections[diagram.index_of(&e.to)];
            e.hom.matrix().mul(from.matrix()).sub(to.matrix())
        })
        .collect();
    let space = if blocks.is_empty() {
        Echelon::full(p.dim())
    } else {
        let refs: Vec<&Matrix> = blocks.iter().collect();
        Echelon::from_vectors(p.dim(), Matrix::vstack(p.dim(), &refs).kernel())
    };
    let sub = Subalgebra::new_unchecked(p, space)?;
    let (algebra, inclusion) = sub.to_algebra()?;
    let legs = diagram
        .nodes
        .iter()
        .zip(&product.projections)
        .map(|((id, _), proj)| Ok((id.clone(), proj.compose(&inclusion)?)))
        .collect::<Result<Vec<_>, AlgebraError>>()?;
    let ids = diagram.nodes.iter().map(|(id, _)| id.clone()).collect();
    Ok(LimitResult {
        algebra: algebra.clone(),
        cone: Cone { apex: algebra, legs },
        embedding: inclusion,
        subalgebra: sub,
        product: Some((product, ids)),
    })
}

/// The pair `W1 ⊗∞ W2 ⇉ W2` induced by `d ↦ (0, d)` and `d ↦ (0, 0)`.
pub fn fibered_pair(t: &TensorProduct) -> (AlgebraHom, AlgebraHom) {
    let w1 = t.inj1.src();
    let w2 = t.inj2.src();
    let images: Vec<Element> =
        (0..w1.vars().len()).map(|_| Element::zero(w2)).chain((0..w2.vars().len()).map(|i| w2.generator(i))).collect();
    let f = AlgebraHom::from_generator_images(&t.algebra, w2, &images).expect("induced by d ↦ (0, d)");
    let g = AlgebraHom::constant(&t.algebra, w2);
    (f, g)
}

/// The subspace `W1 ⊗̃∞ W2` of `W1 ⊗∞ W2`, without presenting it.
pub fn fibered_subspace(w1: &Arc<WeilAlgebra>, w2: &Arc<WeilAlgebra>) -> (TensorProduct, Echelon) {
    let t = tensor_infinity(w1, w2);
    let (f, g) = fibered_pair(&t);
    let space = Echelon::from_vectors(t.algebra.dim(), f.matrix().sub(g.matrix()).kernel());
    (t, space)
}

/// `W1 ⊗̃∞ W2` as an algebra, with its inclusion into `W1 ⊗∞ W2`.
#[derive(Clone, Debug)]
pub struct FiberedTensor {
    pub tensor: TensorProduct,
    pub algebra: Arc<WeilAlgebra>,
    pub inclusion: AlgebraHom,
    pub limit: LimitResult,
}

pub fn fibered_tensor(w1: &Arc<WeilAlgebra>, w2: &Arc<WeilAlgebra>) -> Result<FiberedTensor, AlgebraError> {
    let tensor = tensor_infinity(w1, w2);
    let (f, g) = fibered_pair(&tensor);
    let limit = equalizer(&f, &g)?;
    Ok(FiberedTensor { algebra: limit.algebra.clone(), inclusion: limit.embedding.clone(), tensor, limit })
}

/// `id_W ⊗̃ h : W ⊗̃ V -> W ⊗̃ V'`, the restriction of `id_W ⊗ h`.
pub fn fibered_map(src: &FiberedTensor, dst: &FiberedTensor, h: &AlgebraHom) -> Result<AlgebraHom, AlgebraError> {
    let id = AlgebraHom::identity(src.tensor.inj1.src());
    let lifted = tensor_homs(&id, h, &src.tensor, &dst.tensor)?;
    dst.inclusion.factor(&lifted.compose(&src.inclusion)?)
}

/// Outcome of comparing `(W1 ⊗̃ W2) ⊗̃ W3` with `W1 ⊗̃ (W2 ⊗∞ W3)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssocReport {
    pub lhs_dim: usize,
    pub rhs_dim: usize,
    /// Image of the left side equals the right side as subspaces.
    pub equal: bool,
    pub comparison_injective: bool,
}

impl AssocReport {
    pub fn passed(&self) -> bool {
        self.equal && self.comparison_injective
    }
}

pub fn check_fibered_assoc(
    w1: &Arc<WeilAlgebra>,
    w2: &Arc<WeilAlgebra>,
    w3: &Arc<WeilAlgebra>,
) -> Result<AssocReport, AlgebraError> {
    check_fibered_assoc_with(&fibered_tensor(w1, w2)?, w3)
}

/// As [`check_fibered_assoc`], reusing a computed `W1 ⊗̃ W2`.
pub fn check_fibered_assoc_with(f12: &FiberedTensor, w3: &Arc<WeilAlgebra>) -> Result<AssocReport, AlgebraError> {
    let w1 = f12.tensor.inj1.src();
    let w2 = f12.tensor.inj2.src();
    let (left_tensor, left) = fibered_subspace(&f12.algebra, w3);
    let t12_3 = tensor_infinity(&f12.tensor.algebra, w3);
    let lift = tensor_homs(&f12.inclusion, &AlgebraHom::identity(w3), &left_tensor, &t12_3)?;
    let t23 = tensor_infinity(w2, w3);
    let (right_tensor, right) = fibered_subspace(w1, &t23.algebra);
    let comparison = associator(&t12_3.algebra, &right_tensor.algebra)?.compose(&lift)?;
    let image = left.image(comparison.matrix());
    Ok(AssocReport {
        lhs_dim: left.rank(),
        rhs_dim: right.rank(),
        equal: image == right,
        comparison_injective: image.rank() == left.rank(),
    })
}

/// Outcome of comparing `Lim(W ⊗̃ 𝔻)` with `W ⊗̃ Lim 𝔻`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LimitCommutationReport {
    /// `dim Lim(W ⊗̃ 𝔻⁺)`, where `𝔻⁺` adjoins the terminal node.
    pub limit_of_fibered: usize,
    /// `dim W ⊗̃ Lim 𝔻`.
    pub fibered_of_limit: usize,
    /// `dim Lim(W ⊗̃ 𝔻)` without the terminal node.
    pub unaugmented: usize,
    pub comparison_bijective: bool,
}

/// `𝔻` with a terminal node `*` and an augmentation edge from every node.
pub fn with_terminal(diagram: &Diagram) -> Result<Diagram, AlgebraError> {
    let r = terminal();
    let mut out = diagram.clone();
    let star = "*";
    out.add_node(star, r.clone())?;
    for (id, alg) in &diagram.nodes {
        out.add_edge(id, star, AlgebraHom::augmentation(alg, &r))?;
    }
    Ok(out)
}

fn fibered_diagram(w: &Arc<WeilAlgebra>, diagram: &Diagram) -> Result<(Diagram, Vec<FiberedTensor>), AlgebraError> {
    let tensors: Vec<FiberedTensor> =
        diagram.nodes.iter().map(|(_, v)| fibered_tensor(w, v)).collect::<Result<_, _>>()?;
    let mut out = Diagram::new();
    for ((id, _), ft) in diagram.nodes.iter().zip(&tensors) {
        out.add_node(id, ft.algebra.clone())?;
    }
    for e in &diagram.edges {
        let s = &tensors[diagram.index_of(&e.from)];
        let t = &tensors[diagram.index_of(&e.to)];
        out.add_edge(&e.from, &e.to, fibered_map(s, t, &e.hom)?)?;
    }
    Ok((out, tensors))
}

/// Builds the canonical comparison `W ⊗̃ Lim 𝔻 -> Lim(W ⊗̃ 𝔻⁺)` from the
/// universal property and reports whether it is bijective.
pub fn check_limit_commutation(
    w: &Arc<WeilAlgebra>,
    diagram: &Diagram,
) -> Result<LimitCommutationReport, AlgebraError> {
    let plus = with_terminal(diagram)?;
    let (fibered_plus, tensors) = fibered_diagram(w, &plus)?;
    let lim_fibered = finite_limit(&fibered_plus)?;
    let (fibered_raw, _) = fibered_diagram(w, diagram)?;
    let unaugmented = finite_limit(&fibered_raw)?.algebra.dim();

    let lim = finite_limit(&plus)?;
    let outer = fibered_tensor(w, &lim.algebra)?;
    let legs = plus
        .nodes
        .iter()
        .zip(&tensors)
        .map(|((id, _), ft)| Ok((id.clone(), fibered_map(&outer, ft, lim.cone.leg(id).unwrap())?)))
        .collect::<Result<Vec<_>, AlgebraError>>()?;
    let cone = Cone { apex: outer.algebra.clone(), legs };
    cone.check_commutes(&fibered_plus)?;
    let comparison = lim_fibered.factor(&cone)?;
    Ok(LimitCommutationReport {
        limit_of_fibered: lim_fibered.algebra.dim(),
        fibered_of_limit: outer.algebra.dim(),
        unaugmented,
        comparison_bijective: comparison.is_bijective(),
    })
}

/// Outcome of comparing `Eq(f, g) ⊗∞ W` with `Eq(f ⊗ id, g ⊗ id)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeftExactReport {
    pub tensored_equalizer: usize,
    pub equalizer_of_tensored: usize,
    pub comparison_bijective: bool,
}

pub fn check_left_exact(f: &AlgebraHom, g: &AlgebraHom, w: &Arc<WeilAlgebra>) -> Result<LeftExactReport, AlgebraError> {
    let eq = equalizer(f, g)?;
    let id = AlgebraHom::identity(w);
    let ta = tensor_infinity(f.src(), w);
    let tb = tensor_infinity(f.dst(), w);
    let te = tensor_infinity(&eq.algebra, w);
    let fw = tensor_homs(f, &id, &ta, &tb)?;
    let gw = tensor_homs(g, &id, &ta, &tb)?;
    let target = Echelon::from_vectors(ta.algebra.dim(), fw.matrix().sub(gw.matrix()).kernel());
    let lift = tensor_homs(&eq.embedding, &id, &te, &ta)?;
    let image = lift.matrix().column_space();
    Ok(LeftExactReport {
        tensored_equalizer: te.algebra.dim(),
        equalizer_of_tensored: target.rank(),
        comparison_bijective: lift.is_injective() && image == target,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn alg(text: &str) -> Arc<WeilAlgebra> {
        WeilAlgebra::parse(text).unwrap()
    }

    fn parallel_pair() -> (Arc<WeilAlgebra>, Arc<WeilAlgebra>, AlgebraHom, AlgebraHom) {
        let dd = alg("x,y | x^2, y^2 ; nil 3");
        let d = alg("x | x^2 ; nil 2");
        let f = AlgebraHom::from_generator_images(&dd, &d, &[Element::zero(&d), d.generator(0)]).unwrap();
        let g = AlgebraHom::from_generator_images(&dd, &d, &[Element::zero(&d), Element::zero(&d)]).unwrap();
        (dd, d, f, g)
    }

    #[test]
    fn terminal_is_one_dimensional() {
        let r = terminal();
        assert_eq!(r.dim(), 1);
        let d = alg("x | x^2 ; nil 2");
        let aug = AlgebraHom::augmentation(&d, &r);
        aug.verify().unwrap();
        assert_eq!(AlgebraHom::augmentation(&r, &r), AlgebraHom::identity(&r));
    }

    #[test]
    fn parallel_pair_equalizer() {
        let (dd, _, f, g) = parallel_pair();
        let eq = equalizer(&f, &g).unwrap();
        assert_eq!(eq.algebra.dim(), 3);
        let labels: Vec<String> =
            eq.subalgebra.space().basis().iter().map(|v| Element::new(&dd, v.clone()).unwrap().display()).collect();
        assert_eq!(labels, ["1", "x", "x*y"]);
        assert_eq!(eq.algebra.presentation().to_string(), "x,y | x^2, x*y, y^2 ; nil 2");
        eq.embedding.verify().unwrap();
        assert_eq!(f.compose(&eq.embedding).unwrap(), g.compose(&eq.embedding).unwrap());
    }

    #[test]
    fn trivial_equalizers() {
        let d = alg("x | x^2 ; nil 2");
        let id = AlgebraHom::identity(&d);
        let eq = equalizer(&id, &id).unwrap();
        assert!(eq.embedding.is_bijective());
        let neg = AlgebraHom::from_generator_images(&d, &d, &[d.parse_element("-x").unwrap()]).unwrap();
        let eq = equalizer(&id, &neg).unwrap();
        assert_eq!(eq.algebra.dim(), 1);
    }

    #[test]
    fn products() {
        let d = alg("x | x^2 ; nil 2");
        let p = product_w(&d, &d);
        assert_eq!(p.algebra.dim(), 3);
        assert_eq!(p.algebra.presentation().to_string(), "x,y | x^2, y^2, x*y ; nil 2");
        let d2 = alg("x | x^3 ; nil 3");
        assert_eq!(product_w(&d2, &d).algebra.dim(), 4);
        let r = terminal();
        let pr = product_w(&d2, &r);
        assert_eq!(pr.algebra.presentation(), d2.presentation());
        for proj in &product_many(&[d2.clone(), d.clone(), d.clone()]).projections {
            proj.verify().unwrap();
        }
    }

    #[test]
    fn product_generic_build_agrees() {
        let fam = family();
        for (_, a) in &fam {
            for (_, b) in &fam {
                let p = product_many(&[a.clone(), b.clone()]);
                let generic = WeilAlgebra::build(p.algebra.presentation().clone()).unwrap();
                assert_eq!(generic.basis(), p.algebra.basis());
                assert_eq!(generic.dim(), a.dim() + b.dim() - 1);
                for i in 0..generic.dim() {
                    for j in 0..generic.dim() {
                        assert_eq!(generic.product_of_basis(i, j), p.algebra.product_of_basis(i, j));
                    }
                }
            }
        }
    }

    #[test]
    fn pairing_has_the_given_projections() {
        let d = alg("x | x^2 ; nil 2");
        let d2 = alg("x | x^3 ; nil 3");
        let dd = alg("x,y | x^2, y^2 ; nil 3");
        let p = product_many(&[d.clone(), d2.clone()]);
        let a = AlgebraHom::from_generator_images(&dd, &d, &[d.generator(0), Element::zero(&d)]).unwrap();
        let b = AlgebraHom::from_generator_images(
            &dd,
            &d2,
            &[d2.parse_element("x^2").unwrap(), d2.parse_element("x^2").unwrap()],
        )
        .unwrap();
        let u = p.pair(&[a.clone(), b.clone()]).unwrap();
        u.verify().unwrap();
        assert_eq!(p.projections[0].compose(&u).unwrap(), a);
        assert_eq!(p.projections[1].compose(&u).unwrap(), b);
    }

    #[test]
    fn limits_of_stock_diagrams() {
        let (dd, d, f, g) = parallel_pair();
        let mut single = Diagram::new();
        single.add_node("a", d.clone()).unwrap();
        let lim = finite_limit(&single).unwrap();
        assert!(lim.cone.leg("a").unwrap().is_bijective());
        assert_eq!(lim.cone.leg("a").unwrap().matrix(), &Matrix::identity(2));

        let mut discrete = Diagram::new();
        discrete.add_node("a", d.clone()).unwrap();
        discrete.add_node("b", d.clone()).unwrap();
        let lim = finite_limit(&discrete).unwrap();
        assert!(lim.algebra.is_same(&product_w(&d, &d).algebra));

        let mut pair = Diagram::new();
        pair.add_node("s", dd.clone()).unwrap();
        pair.add_node("t", d.clone()).unwrap();
        pair.add_edge("s", "t", f.clone()).unwrap();
        pair.add_edge("s", "t", g.clone()).unwrap();
        let lim = finite_limit(&pair).unwrap();
        let eq = equalizer(&f, &g).unwrap();
        assert_eq!(lim.algebra.dim(), 3);
        // same subspace of the source after projecting
        let via_limit = lim.cone.leg("s").unwrap().matrix().column_space();
        assert_eq!(via_limit, eq.subalgebra.space().clone());
        lim.cone.check_commutes(&pair).unwrap();
        assert_eq!(finite_limit(&Diagram::new()).unwrap().algebra.dim(), 1);
    }

    #[test]
    fn limit_is_independent_of_node_order() {
        let (dd, d, f, g) = parallel_pair();
        let mut a = Diagram::new();
        a.add_node("s", dd.clone()).unwrap();
        a.add_node("t", d.clone()).unwrap();
        a.add_edge("s", "t", f.clone()).unwrap();
        a.add_edge("s", "t", g.clone()).unwrap();
        let mut b = Diagram::new();
        b.add_node("t", d.clone()).unwrap();
        b.add_node("s", dd.clone()).unwrap();
        b.add_edge("s", "t", g).unwrap();
        b.add_edge("s", "t", f).unwrap();
        let la = finite_limit(&a).unwrap();
        let lb = finite_limit(&b).unwrap();
        let comparison = lb.factor(&la.cone).unwrap();
        assert!(comparison.is_bijective());
        comparison.verify().unwrap();
    }

    #[test]
    fn equalizer_universal_property() {
        let (dd, _, f, g) = parallel_pair();
        let d2 = alg("x,y | x^2, y^2, x*y ; nil 2");
        // (d1, d2) ↦ (d1, d1 d2)
        let h =
            AlgebraHom::from_generator_images(&d2, &dd, &[dd.generator(0), dd.parse_element("x*y").unwrap()]).unwrap();
        assert_eq!(f.compose(&h).unwrap(), g.compose(&h).unwrap());
        let eq = equalizer(&f, &g).unwrap();
        let cone =
            Cone { apex: d2.clone(), legs: vec![("src".into(), h.clone()), ("dst".into(), f.compose(&h).unwrap())] };
        let u = eq.factor(&cone).unwrap();
        assert!(u.is_bijective());
        assert!(eq.factorization_is_unique());
    }

    #[test]
    fn fibered_tensor_examples() {
        let d = alg("x | x^2 ; nil 2");
        let ft = fibered_tensor(&d, &d).unwrap();
        assert_eq!(ft.algebra.dim(), 3);
        let d2 = alg("x,y | x^2, y^2, x*y ; nil 2");
        let comparison =
            AlgebraHom::from_generator_images(&d2, &ft.algebra, &[ft.algebra.generator(0), ft.algebra.generator(1)])
                .unwrap();
        assert!(comparison.is_bijective());
        let r = terminal();
        for (_, w) in family() {
            assert!(fibered_tensor(&w, &r).unwrap().inclusion.is_bijective());
            assert_eq!(fibered_tensor(&r, &w).unwrap().algebra.dim(), 1);
        }
    }

    #[test]
    fn fibered_dimension_law() {
        for (_, a) in family() {
            for (_, b) in family() {
                let ft = fibered_tensor(&a, &b).unwrap();
                assert_eq!(ft.algebra.dim(), a.dim() * b.dim() - b.dim() + 1);
                ft.algebra.verify_invariants().unwrap();
                ft.inclusion.verify().unwrap();
                // the presentation is honest: the generic build agrees
                let rebuilt = WeilAlgebra::build(ft.algebra.presentation().clone()).unwrap();
                assert_eq!(rebuilt.dim(), ft.algebra.dim());
            }
        }
    }

    #[test]
    fn fibered_associativity_examples() {
        let d = alg("x | x^2 ; nil 2");
        let d2 = alg("x | x^3 ; nil 3");
        let report = check_fibered_assoc(&d, &d, &d).unwrap();
        assert!(report.passed());
        assert_eq!(report.lhs_dim, 5);
        assert!(check_fibered_assoc(&d, &d2, &d).unwrap().passed());
        let r = terminal();
        let report = check_fibered_assoc(&d2, &r, &r).unwrap();
        assert_eq!((report.lhs_dim, report.rhs_dim), (3, 3));
    }

    #[test]
    fn limit_commutation_on_parallel_pair() {
        let (dd, d, f, g) = parallel_pair();
        let mut pair = Diagram::new();
        pair.add_node("s", dd).unwrap();
        pair.add_node("t", d.clone()).unwrap();
        pair.add_edge("s", "t", f).unwrap();
        pair.add_edge("s", "t", g).unwrap();
        let report = check_limit_commutation(&d, &pair).unwrap();
        assert!(report.comparison_bijective, "{report:?}");
        assert_eq!(report.limit_of_fibered, report.fibered_of_limit);
    }

    #[test]
    fn left_exactness_on_parallel_pair() {
        let (_, _, f, g) = parallel_pair();
        for (_, w) in family() {
            let report = check_left_exact(&f, &g, &w).unwrap();
            assert!(report.comparison_bijective);
            assert_eq!(report.tensored_equalizer, 3 * w.dim());
        }
    }
}
