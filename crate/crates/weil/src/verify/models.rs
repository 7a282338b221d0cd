//! Suites about prolongations of the models `R^n`.

use serde_json::json;
use weil_core::bundle::{
    check_product_preservation, dual_numbers, euclidean_check, iterated_with, linear_structure_check,
    m_microlinearity_check, weil_exponentiability_check,
};
use weil_core::category::{family, fibered_tensor};
use weil_core::{AlgebraError, JetError};

use super::{cite, presentations, stock_diagrams, Check};

pub fn thm_3_1() -> Vec<Check> {
    let mut checks = Vec::new();
    for (name, w) in family() {
        let witness = || presentations(&[&w]);
        checks.push(Check::run(format!("products/{name}"), cite::PRODUCTS, witness, || -> Result<_, JetError> {
            let mut cases = Vec::new();
            let mut failures = Vec::new();
            for n in 0..=2 {
                for b1 in 0..=2 {
                    for b2 in 0..=2 {
                        let r = check_product_preservation(n, b1, b2, &w)?;
                        cases.push(json!([n, b1, b2, r.prolonged_product_dim, r.product_of_prolongations_dim]));
                        if !r.passed() {
                            failures.push(json!({ "n": n, "b1": b1, "b2": b2, "bijective": r.comparison_bijective }));
                        }
                    }
                }
            }
            Ok((failures.is_empty(), json!({ "cases": cases, "failures": failures })))
        }));
    }
    checks
}

pub fn thm_3_4() -> Vec<Check> {
    let fam = family();
    let mut checks = Vec::new();
    for (n1, w1) in &fam {
        for (n2, w2) in &fam {
            let witness = || presentations(&[w1, w2]);
            checks.push(Check::run(
                format!("iterated/{n1}/{n2}"),
                cite::ITERATED,
                witness,
                || -> Result<_, AlgebraError> {
                    let ft = fibered_tensor(w1, w2)?;
                    let mut dims = Vec::new();
                    let mut passed = true;
                    for n in 1..=3 {
                        let r = iterated_with(n, ft.clone()).report();
                        passed &= r.passed();
                        dims.push(json!({
                            "n": n,
                            "carrier": r.carrier_dim,
                            "expected": r.expected_dim,
                            "trivial_bundle": r.trivial_bundle_dim,
                            "bijective": r.comparison_bijective,
                        }));
                    }
                    Ok((passed, json!({ "fibered_dim": ft.algebra.dim(), "models": dims })))
                },
            ));
        }
    }
    checks
}

pub fn thm_4_7() -> Vec<Check> {
    let fam = family();
    let pick = |i: usize| &fam[i].1;
    // (W, W1, W2) by family index.
    let tuples = [(1, 1, 1), (1, 2, 1), (1, 1, 4), (2, 1, 3), (3, 4, 1), (4, 2, 2), (0, 4, 3), (4, 3, 4)];
    let mut checks = Vec::new();
    for (a, b, c) in tuples {
        for n in 1..=2 {
            let (w, w1, w2) = (pick(a), pick(b), pick(c));
            let name = format!("exponentiable/{}/{}/{}/n{n}", fam[a].0, fam[b].0, fam[c].0);
            let witness = || presentations(&[w, w1, w2]);
            checks.push(Check::run(name, cite::EXPONENTIABLE, witness, || -> Result<_, AlgebraError> {
                let r = weil_exponentiability_check(n, w, w1, w2)?;
                let steps: Vec<_> =
                    r.steps.iter().map(|s| json!({ "step": s.name, "dims": s.dims, "passed": s.passed })).collect();
                Ok((r.passed(), json!({ "steps": steps })))
            }));
        }
    }
    checks
}

pub fn thm_5_6() -> Vec<Check> {
    let mut checks = Vec::new();
    for n in 1..=2 {
        for (name, w) in family() {
            for (label, diagram) in stock_diagrams() {
                let witness = || presentations(&[&w]);
                checks.push(Check::run(format!("microlinear/n{n}/{name}/{label}"), cite::MICROLINEAR, witness, || {
                    let r = m_microlinearity_check(n, &w, &diagram)?;
                    Ok::<_, AlgebraError>((
                        r.passed(),
                        json!({ "dims": [r.limit_dim, r.prolonged_limit_dim], "bijective": r.comparison_bijective }),
                    ))
                }));
            }
        }
    }
    checks
}

pub fn thm_6_6() -> Vec<Check> {
    let d = dual_numbers();
    let mut checks = Vec::new();
    for n in 0..=4 {
        let witness = || presentations(&[&d]);
        checks.push(Check::run(format!("euclidean/n{n}"), cite::EUCLIDEAN, witness, || {
            let r = euclidean_check(n, &d)?;
            let passed = r.passed() && r.prolonged_dim == 3 * n && r.chain == Some(true);
            Ok::<_, AlgebraError>((
                passed,
                json!({ "dims": [r.prolonged_dim, r.fibered_product_dim], "bijective": r.comparison_bijective, "chain": r.chain }),
            ))
        }));
    }
    for (name, w) in family() {
        let witness = || presentations(&[&w]);
        checks.push(Check::run(format!("euclidean/{name}/n2"), cite::EUCLIDEAN, witness, || {
            let r = euclidean_check(2, &w)?;
            Ok::<_, AlgebraError>((
                r.passed(),
                json!({ "dims": [r.prolonged_dim, r.fibered_product_dim], "bijective": r.comparison_bijective }),
            ))
        }));
    }
    for n in 0..=4 {
        let witness = || presentations(&[&d]);
        checks.push(Check::run(format!("linear-structure/n{n}"), cite::LINEAR, witness, || {
            let r = linear_structure_check(n)?;
            Ok::<_, JetError>((r.passed(), json!({ "cases": r.cases, "failures": r.failures })))
        }));
    }
    checks
}
