//! Suites about the category of Weil algebras itself.

use serde_json::json;
use weil_core::category::{
    check_fibered_assoc_with, check_left_exact, check_limit_commutation, equalizer, family, fibered_tensor, Cone,
};
use weil_core::{AlgebraError, AlgebraHom, WeilAlgebra};

use super::{cite, dual, dual_pair, first_order_pair, parallel_pair, presentations, stock_diagrams, Check};
use crate::format::{hom_images, subspace_elements};

/// Cones `k : C -> W_{D×D}` with `f k = g k`: apexes of several shapes,
/// generators sent into the span of `x` and `x·y`.
fn generated_cones() -> Result<Vec<AlgebraHom>, AlgebraError> {
    let dd = dual_pair();
    let apexes = [
        "| ; nil 1",
        "x | x^2 ; nil 2",
        "x | x^3 ; nil 3",
        "x | x^4 ; nil 4",
        "x,y | x^2, y^2, x*y ; nil 2",
        "x,y | x^2, y^2 ; nil 3",
        "x,y,z | x^2, y^2, z^2 ; nil 4",
    ];
    let choices = ["x", "x*y", "x + x*y", "2*x - 3*x*y", "-x", "1/2*x*y"];
    let mut cones = Vec::new();
    for (a, text) in apexes.iter().enumerate() {
        let apex = WeilAlgebra::parse(text)?;
        for shift in 0..2 {
            let images = (0..apex.vars().len())
                .map(|i| dd.parse_element(choices[(a + shift * 3 + i) % choices.len()]))
                .collect::<Result<Vec<_>, _>>()?;
            cones.push(AlgebraHom::from_generator_images(&apex, &dd, &images)?);
            if apex.vars().is_empty() {
                break;
            }
        }
    }
    Ok(cones)
}

pub fn lemma_3_2() -> Vec<Check> {
    let (f, g) = parallel_pair();
    let dd = dual_pair();
    let d2 = first_order_pair();
    let witness = || presentations(&[&dd, &dual(), &d2]);
    let mut checks = Vec::new();

    let h = || AlgebraHom::from_generator_images(&d2, &dd, &[dd.generator(0), dd.parse_element("x*y")?]);
    checks.push(Check::run("equalizes", cite::EQUALIZER, witness, || -> Result<_, AlgebraError> {
        let h = h()?;
        Ok((f.compose(&h)? == g.compose(&h)?, json!({ "images": hom_images(&h) })))
    }));

    checks.push(Check::run("equalizer-is-image", cite::EQUALIZER, witness, || -> Result<_, AlgebraError> {
        let h = h()?;
        let eq = equalizer(&f, &g)?;
        let space = eq.subalgebra.space();
        let passed = eq.algebra.dim() == 3 && h.is_injective() && h.matrix().column_space() == *space;
        Ok((passed, json!({ "dims": [eq.algebra.dim(), d2.dim()], "basis": subspace_elements(&dd, space) })))
    }));

    checks.push(Check::run("universal-property", cite::EQUALIZER, witness, || -> Result<_, AlgebraError> {
        let eq = equalizer(&f, &g)?;
        let cones = generated_cones()?;
        let mut failures = Vec::new();
        for k in &cones {
            let cone =
                Cone { apex: k.src().clone(), legs: vec![("src".into(), k.clone()), ("dst".into(), f.compose(k)?)] };
            let ok = f.compose(k)? == g.compose(k)?
                && match eq.factor(&cone) {
                    Ok(u) => u.verify().is_ok() && eq.embedding.compose(&u)? == *k,
                    Err(_) => false,
                };
            if !ok {
                failures.push(json!({ "apex": k.src().presentation().to_string(), "images": hom_images(k) }));
            }
        }
        let unique = eq.factorization_is_unique();
        let passed = failures.is_empty() && unique && cones.len() >= 10;
        Ok((passed, json!({ "cones": cones.len(), "unique": unique, "failures": failures })))
    }));

    checks.push(Check::run("non-cones-rejected", cite::EQUALIZER, witness, || -> Result<_, AlgebraError> {
        let eq = equalizer(&f, &g)?;
        let d = dual();
        let mut rejected = 0;
        let candidates = ["y", "2*y - x*y", "y + 3*x*y"];
        for text in candidates {
            let k = AlgebraHom::from_generator_images(&d, &dd, &[dd.parse_element(text)?])?;
            let cone = Cone { apex: d.clone(), legs: vec![("src".into(), k.clone()), ("dst".into(), f.compose(&k)?)] };
            if f.compose(&k)? != g.compose(&k)? && eq.factor(&cone).is_err() {
                rejected += 1;
            }
        }
        Ok((rejected == candidates.len(), json!({ "rejected": rejected, "candidates": candidates.len() })))
    }));
    checks
}

pub fn prop_3_3() -> Vec<Check> {
    let d = dual();
    let d2 = first_order_pair();
    let witness = || presentations(&[&d, &d2]);
    vec![Check::run("fibered-dual-square", cite::DUAL_SQUARE, witness, || -> Result<_, AlgebraError> {
        let ft = fibered_tensor(&d, &d)?;
        let t = &ft.tensor.algebra;
        let c = AlgebraHom::from_generator_images(&d2, t, &[t.generator(0), t.parse_element("x*y")?])?;
        let comparison = ft.inclusion.factor(&c)?;
        let passed = ft.algebra.dim() == 3 && comparison.is_bijective();
        Ok((
            passed,
            json!({
                "dims": [ft.algebra.dim(), d2.dim()],
                "presentation": ft.algebra.presentation().to_string(),
                "basis": subspace_elements(t, ft.limit.subalgebra.space()),
                "comparison": hom_images(&c),
            }),
        ))
    })]
}

pub fn prop_4_6() -> Vec<Check> {
    let fam = family();
    let mut checks = Vec::new();
    for (n1, w1) in &fam {
        let witness = || presentations(&fam.iter().map(|(_, w)| w).collect::<Vec<_>>());
        checks.push(Check::run(format!("associativity/{n1}"), cite::ASSOCIATIVITY, witness, || -> Result<_, AlgebraError> {
            let mut dims = Vec::new();
            let mut failures = Vec::new();
            for (n2, w2) in &fam {
                let f12 = fibered_tensor(w1, w2)?;
                for (n3, w3) in &fam {
                    let r = check_fibered_assoc_with(&f12, w3)?;
                    dims.push(json!([n2, n3, r.lhs_dim, r.rhs_dim]));
                    if !r.passed() {
                        failures.push(json!({ "triple": [n1, n2, n3], "equal": r.equal, "injective": r.comparison_injective }));
                    }
                }
            }
            Ok((failures.is_empty(), json!({ "triples": dims.len(), "dims": dims, "failures": failures })))
        }));
    }
    checks
}

pub fn lemma_5_7() -> Vec<Check> {
    let mut checks = Vec::new();
    for (name, w) in family() {
        for (label, diagram) in stock_diagrams() {
            let witness = || {
                let nodes: Vec<_> =
                    diagram.nodes().iter().map(|(id, a)| json!([id, a.presentation().to_string()])).collect();
                json!({ "w": w.presentation().to_string(), "nodes": nodes })
            };
            checks.push(Check::run(format!("limit-commutation/{name}/{label}"), cite::LIMITS, witness, || {
                let r = check_limit_commutation(&w, &diagram)?;
                let passed = r.comparison_bijective && r.limit_of_fibered == r.fibered_of_limit;
                Ok::<_, AlgebraError>((
                    passed,
                    json!({
                        "dims": [r.limit_of_fibered, r.fibered_of_limit],
                        "without_terminal": r.unaugmented,
                    }),
                ))
            }));
        }
    }
    let (f, g) = parallel_pair();
    for (name, w) in family() {
        let witness = || presentations(&[&w]);
        checks.push(Check::run(format!("left-exact/{name}"), cite::LIMITS, witness, || {
            let r = check_left_exact(&f, &g, &w)?;
            Ok::<_, AlgebraError>((
                r.comparison_bijective,
                json!({ "dims": [r.tensored_equalizer, r.equalizer_of_tensored] }),
            ))
        }));
    }
    checks
}
