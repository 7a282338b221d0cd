use std::sync::Arc;

use proptest::prelude::*;
use weil_core::category::{fibered_subspace, product_many};
use weil_core::rational::frac;
use weil_core::tensor::tensor_homs;
use weil_core::{
    eval_jet, prolong_map, tensor_infinity, AlgebraHom, Element, Expr, Monomial, Polynomial, Presentation, Rational,
    WPoint, WeilAlgebra,
};

/// Monomial quotients `Q[x(,y)]/(relations + m^k)`, with `k <= 4`.
fn monomial_algebra() -> impl Strategy<Value = Arc<WeilAlgebra>> {
    (1usize..=2, 2u32..=4)
        .prop_flat_map(|(nvars, k)| {
            let candidates: Vec<Monomial> =
                weil_core::poly::monomials_below(nvars, k).into_iter().filter(|m| m.degree() >= 2).collect();
            let len = candidates.len();
            (Just((nvars, k, candidates)), proptest::collection::vec(any::<bool>(), len))
        })
        .prop_map(|((nvars, k, candidates), keep)| {
            let names = ["x", "y"][..nvars].iter().map(|s| s.to_string()).collect();
            let mut relations: Vec<Polynomial> = candidates
                .into_iter()
                .zip(keep)
                .filter(|(_, k)| *k)
                .map(|(m, _)| Polynomial::monomial(m, Rational::from_integer(1.into())))
                .collect();
            // the degree-k monomials make the bound consistent with the relations
            let top = weil_core::poly::monomials_below(nvars, k + 1).into_iter().filter(|m| m.degree() == k);
            relations.extend(top.map(|m| Polynomial::monomial(m, Rational::from_integer(1.into()))));
            WeilAlgebra::build(Presentation::new(names, relations, k).unwrap()).unwrap()
        })
}

fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(p, q)| frac(p, q))
}

fn nilpotent(w: Arc<WeilAlgebra>) -> impl Strategy<Value = Element> {
    let d = w.dim();
    proptest::collection::vec(small_rational(), d).prop_map(move |mut v| {
        v[0] = Rational::from_integer(0.into());
        Element::new(&w, v).unwrap()
    })
}

fn poly_expr(arity: usize) -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![(0..arity).prop_map(Expr::var), small_rational().prop_map(Expr::constant),];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.add(b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.mul(b)),
            (inner.clone(), 0u32..=2).prop_map(|(a, e)| a.pow(e)),
        ]
    })
}

fn point(w: Arc<WeilAlgebra>, n: usize) -> impl Strategy<Value = WPoint> {
    proptest::collection::vec(small_rational(), n * w.dim()).prop_map(move |flat| WPoint::from_flat(&w, &flat).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn relation_order_and_redundancy_do_not_matter(w in monomial_algebra(), seed in any::<u64>()) {
        let pres = w.presentation();
        let mut relations = pres.relations().to_vec();
        if !relations.is_empty() {
            let len = relations.len();
            relations.rotate_left((seed as usize) % len);
            let doubled = relations[0].add(&relations[0]);
            relations.push(doubled);
        }
        let other = WeilAlgebra::build(pres.with_relations(relations).unwrap()).unwrap();
        prop_assert_eq!(other.basis(), w.basis());
        for i in 0..w.dim() {
            for j in 0..w.dim() {
                prop_assert_eq!(other.product_of_basis(i, j), w.product_of_basis(i, j));
            }
        }
    }

    #[test]
    fn dimension_laws(a in monomial_algebra(), b in monomial_algebra()) {
        let t = tensor_infinity(&a, &b);
        prop_assert_eq!(t.algebra.dim(), a.dim() * b.dim());
        let (_, fib) = fibered_subspace(&a, &b);
        prop_assert_eq!(fib.rank(), a.dim() * b.dim() - b.dim() + 1);
        prop_assert_eq!(product_many(&[a.clone(), b.clone()]).algebra.dim(), a.dim() + b.dim() - 1);
        t.algebra.verify_invariants().unwrap();
    }

    #[test]
    fn generated_homs_are_valid_and_compose(
        (w, h) in monomial_algebra().prop_flat_map(|w| (Just(w.clone()), nilpotent(w))),
        (v, g) in monomial_algebra().prop_flat_map(|v| (Just(v.clone()), nilpotent(v))),
    ) {
        // x ↦ h from Q[x]/(x^4) is a hom whenever h^4 = 0, which holds for nil index <= 4
        let line = WeilAlgebra::parse("x | x^4 ; nil 4").unwrap();
        let f = AlgebraHom::from_generator_images(&line, &w, &[h]).unwrap();
        f.verify().unwrap();
        let to_line = AlgebraHom::from_generator_images(&v, &line, &vec![line.generator(0); v.vars().len()]);
        if let Ok(to_line) = to_line {
            to_line.verify().unwrap();
            let composite = f.compose(&to_line).unwrap();
            composite.verify().unwrap();
        }
        let k = AlgebraHom::from_generator_images(&line, &v, &[g]).unwrap();
        let src = tensor_infinity(&line, &line);
        let dst = tensor_infinity(&w, &v);
        let fk = tensor_homs(&f, &k, &src, &dst).unwrap();
        fk.verify().unwrap();
        // (f ⊗ k) ∘ (id ⊗ id) = f ⊗ k, and (id ⊗ id) is the identity
        let id = AlgebraHom::identity(&line);
        prop_assert_eq!(tensor_homs(&id, &id, &src, &src).unwrap(), AlgebraHom::identity(&src.algebra));
        let square = AlgebraHom::from_generator_images(&line, &line, &[line.parse_element("x^2").unwrap()]).unwrap();
        let left = tensor_homs(&f, &k, &src, &dst).unwrap().compose(&tensor_homs(&square, &id, &src, &src).unwrap()).unwrap();
        let right = tensor_homs(&f.compose(&square).unwrap(), &k, &src, &dst).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn prolongation_is_functorial(
        (w, p) in monomial_algebra().prop_flat_map(|w| (Just(w.clone()), point(w, 2))),
        f in proptest::collection::vec(poly_expr(2), 2),
        g in proptest::collection::vec(poly_expr(2), 2),
    ) {
        let identity = prolong_map(&[Expr::var(0), Expr::var(1)], &w);
        prop_assert_eq!(identity.apply(&p).unwrap(), p.clone());
        let composite: Vec<Expr> = f.iter().map(|e| e.substitute(&g)).collect();
        let lhs = prolong_map(&composite, &w).apply(&p).unwrap();
        let rhs = prolong_map(&f, &w).apply(&prolong_map(&g, &w).apply(&p).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        let paired: Vec<Expr> = f.iter().chain(&g).cloned().collect();
        let both = prolong_map(&paired, &w).apply(&p).unwrap();
        let (fp, gp) = (prolong_map(&f, &w).apply(&p).unwrap(), prolong_map(&g, &w).apply(&p).unwrap());
        prop_assert_eq!(&both.coords()[..2], fp.coords());
        prop_assert_eq!(&both.coords()[2..], gp.coords());
        // the base point follows classical evaluation
        for e in &f {
            prop_assert_eq!(eval_jet(e, &p).unwrap().augmentation(), e.eval_exact(&p.base()).unwrap());
        }
    }

    #[test]
    fn prolongation_is_natural(
        (w, p, h) in monomial_algebra().prop_flat_map(|w| (Just(w.clone()), point(w.clone(), 2), nilpotent(w))),
        f in poly_expr(2),
    ) {
        // the hom x ↦ h, y ↦ h^2 out of Q[x,y]/(x,y)^4
        let src = WeilAlgebra::parse("x,y | x^4, x^3*y, x^2*y^2, x*y^3, y^4 ; nil 4").unwrap();
        let phi = AlgebraHom::from_generator_images(&src, &w, &[h.clone(), h.pow(2)]).unwrap();
        let q = WPoint::from_flat(&src, &{
            let mut flat = vec![Rational::from_integer(0.into()); 2 * src.dim()];
            for (i, b) in p.base().into_iter().enumerate() {
                flat[i * src.dim()] = b;
                flat[i * src.dim() + 1 + i] = Rational::from_integer(1.into());
            }
            flat
        }).unwrap();
        let lhs = phi.apply(&eval_jet(&f, &q).unwrap()).unwrap();
        let rhs = eval_jet(&f, &q.map_hom(&phi).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
