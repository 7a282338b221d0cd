//! The jet engine against functor laws and independent derivative oracles.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use weil_core::category::family;
use weil_core::rational::{frac, int, to_fraction_string};
use weil_core::{
    eval_jet, prolong_map, taylor_coefficients, w_point, AlgebraError, AlgebraHom, Element, Expr, JetError, Rational,
    WPoint, WeilAlgebra,
};

use super::{cite, presentations, Check};
use crate::oracle::{central_difference, taylor_exact, taylor_f64};

const POINTS: usize = 100;
const TAYLOR_REL: f64 = 1e-10;
const DIFFERENCE_REL: f64 = 1e-6;
const STEP: f64 = 1e-5;
const TRUNCATED: &str = "u0^5 - 3*u0^2 + 2/3*u0 - 1";

fn rel_close(a: f64, b: f64, rel: f64) -> bool {
    a == b || (a - b).abs() <= rel * a.abs().max(b.abs())
}

fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    frac(rng.gen_range(-6..=6), rng.gen_range(1..=4))
}

fn random_point(rng: &mut ChaCha8Rng, alg: &Arc<WeilAlgebra>, n: usize) -> WPoint {
    let flat: Vec<Rational> = (0..n * alg.dim()).map(|_| random_rational(rng)).collect();
    WPoint::from_flat(alg, &flat).expect("length n · dim W")
}

/// A polynomial in `u0, u1` of total degree at most 4.
fn random_polynomial(rng: &mut ChaCha8Rng) -> Expr {
    let terms = rng.gen_range(1..=5);
    let mut e = Expr::constant(random_rational(rng));
    for _ in 0..terms {
        let a = rng.gen_range(0..=4u32);
        let b = rng.gen_range(0..=4 - a);
        let mut t = Expr::constant(random_rational(rng));
        if a > 0 {
            t = t.mul(Expr::var(0).pow(a));
        }
        if b > 0 {
            t = t.mul(Expr::var(1).pow(b));
        }
        e = e.add(t);
    }
    e
}

fn expr(text: &str) -> Expr {
    Expr::parse(text).expect("valid expression")
}

fn point_text(p: &WPoint) -> Value {
    Value::from(p.coords().iter().map(Element::display).collect::<Vec<_>>())
}

fn family_witness() -> Value {
    presentations(&family().iter().map(|(_, w)| w).collect::<Vec<_>>())
}

fn expr_witness(text: &str) -> impl FnOnce() -> Value + '_ {
    move || json!({ "expr": text })
}

fn examples() -> Vec<Check> {
    let mut checks = Vec::new();
    checks.push(Check::run(
        "example/cube-at-one",
        cite::DERIVATIVES,
        expr_witness("u0^3"),
        || -> Result<_, JetError> {
            let c = taylor_coefficients(&expr("u0^3"), int(1), 3)?;
            let passed = c == [int(1), int(3), int(3), int(1)];
            Ok((passed, json!({ "coefficients": c.iter().map(to_fraction_string).collect::<Vec<_>>() })))
        },
    ));
    checks.push(Check::run(
        "example/sin-at-zero",
        cite::DERIVATIVES,
        expr_witness("sin(u0)"),
        || -> Result<_, JetError> {
            let c = taylor_coefficients(&expr("sin(u0)"), 0.0, 5)?;
            let expected = [0.0, 1.0, 0.0, -1.0 / 6.0, 0.0, 1.0 / 120.0];
            let passed = c.iter().zip(expected).all(|(a, b)| (a - b).abs() <= 1e-12);
            Ok((passed, json!({ "coefficients": c })))
        },
    ));
    checks.push(Check::run(
        "example/exp-series",
        cite::DERIVATIVES,
        expr_witness("exp(u0)"),
        || -> Result<_, JetError> {
            let alg = WeilAlgebra::parse("x | x^4 ; nil 4")?;
            let p = w_point(&alg, &[0.0], &[("x", vec![1.0])])?;
            let v = eval_jet(&expr("exp(u0)"), &p)?;
            let expected = [1.0, 1.0, 0.5, 1.0 / 6.0];
            let passed = v.coords().iter().zip(expected).all(|(a, b)| (a - b).abs() <= 1e-12);
            Ok((passed, json!({ "coefficients": v.coords() })))
        },
    ));
    checks.push(Check::run("example/leibniz", cite::FUNCTOR, expr_witness("u0*u1"), || -> Result<_, JetError> {
        let d = WeilAlgebra::parse("x | x^2 ; nil 2")?;
        let (a, a1, b, b1) = (frac(3, 2), int(-2), int(5), frac(1, 3));
        let p = WPoint::from_flat(&d, &[a.clone(), a1.clone(), b.clone(), b1.clone()])?;
        let q = prolong_map(&[expr("u0*u1")], &d).apply(&p)?;
        let expected = [&a * &b, &a * &b1 + &a1 * &b];
        Ok((q.flatten() == expected, json!({ "image": point_text(&q) })))
    }));
    checks
}

/// Identity, composition, pairing and base point over one algebra.
fn functor_laws(name: &str, alg: &Arc<WeilAlgebra>, seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let witness = || presentations(&[alg]);
    Check::run(format!("functor/{name}"), cite::FUNCTOR, witness, || -> Result<_, JetError> {
        let identity = prolong_map(&[Expr::var(0), Expr::var(1)], alg);
        let mut failures = Vec::new();
        for i in 0..POINTS {
            let f = [random_polynomial(&mut rng), random_polynomial(&mut rng)];
            let g = [random_polynomial(&mut rng), random_polynomial(&mut rng)];
            let p = random_point(&mut rng, alg, 2);
            let pf = prolong_map(&f, alg);
            let pg = prolong_map(&g, alg);
            let fp = pf.apply(&p)?;

            let gf: Vec<Expr> = g.iter().map(|gi| gi.substitute(&f)).collect();
            let paired: Vec<Expr> = f.iter().chain(&g).cloned().collect();
            let joined: Vec<_> = fp.coords().iter().chain(pg.apply(&p)?.coords()).cloned().collect();
            let base: Vec<Rational> = f.iter().map(|fi| fi.eval_exact(&p.base())).collect::<Result<_, _>>()?;

            let laws = [
                ("identity", identity.apply(&p)? == p),
                ("composition", prolong_map(&gf, alg).apply(&p)? == pg.apply(&fp)?),
                ("pairing", prolong_map(&paired, alg).apply(&p)? == WPoint::new(alg, joined)?),
                ("base-point", fp.base() == base),
            ];
            for (law, held) in laws {
                if !held {
                    failures.push(json!({
                        "sample": i,
                        "law": law,
                        "f": f.iter().map(ToString::to_string).collect::<Vec<_>>(),
                        "g": g.iter().map(ToString::to_string).collect::<Vec<_>>(),
                        "point": point_text(&p),
                    }));
                }
            }
        }
        Ok((failures.is_empty(), json!({ "samples": POINTS, "failures": failures })))
    })
}

/// Generated homs between family algebras, by generator images.
fn test_homs() -> Result<Vec<(String, AlgebraHom)>, AlgebraError> {
    let fam = family();
    let by = |n: &str| fam.iter().find(|(k, _)| *k == n).map(|(_, w)| w.clone()).expect("family member");
    let specs: [(&str, &str, &[&str]); 7] = [
        ("W_D2", "W_D", &["x"]),
        ("W_D2", "W_DxD", &["x + y"]),
        ("W_DxD", "W_D(2)", &["x", "y"]),
        ("W_D(2)", "W_D", &["x", "2*x"]),
        ("W_D", "W_DxD", &["x*y"]),
        ("W_D", "W_D2", &["x^2"]),
        ("W_DxD", "W_D2", &["x^2", "-x^2"]),
    ];
    let mut homs = Vec::new();
    for (s, t, images) in specs {
        let (src, dst) = (by(s), by(t));
        let images = images.iter().map(|e| dst.parse_element(e)).collect::<Result<Vec<_>, _>>()?;
        homs.push((format!("{s}->{t}"), AlgebraHom::from_generator_images(&src, &dst, &images)?));
    }
    for (n, w) in &fam[1..] {
        let r = &fam[0].1;
        homs.push((format!("{n}->R"), AlgebraHom::augmentation(w, r)));
        homs.push((format!("R->{n}"), AlgebraHom::unit(r, w)));
    }
    Ok(homs)
}

fn naturality(seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Check::run("naturality", cite::FUNCTOR, family_witness, || -> Result<_, JetError> {
        let homs = test_homs()?;
        let mut failures = Vec::new();
        for (name, h) in &homs {
            for _ in 0..10 {
                let f = [random_polynomial(&mut rng), random_polynomial(&mut rng)];
                let p = random_point(&mut rng, h.src(), 2);
                let lhs = prolong_map(&f, h.dst()).apply(&p.map_hom(h)?)?;
                let rhs = prolong_map(&f, h.src()).apply(&p)?.map_hom(h)?;
                if lhs != rhs {
                    failures.push(json!({ "hom": name, "point": point_text(&p) }));
                }
            }
        }
        Ok((failures.is_empty(), json!({ "homs": homs.len(), "failures": failures })))
    })
}

/// Jets in `R[X]/(X^{k+1})` against the exact symbolic oracle, `k = 1..=6`.
fn truncation() -> Check {
    Check::run("truncation", cite::DERIVATIVES, expr_witness(TRUNCATED), || -> Result<_, JetError> {
        let f = expr(TRUNCATED);
        let x0 = frac(-2, 3);
        let full = taylor_exact(&f, &x0, 6)?;
        let mut failures = Vec::new();
        for k in 1..=6 {
            let c = taylor_coefficients(&f, x0.clone(), k)?;
            if c[..] != full[..=k] {
                failures.push(k);
            }
        }
        Ok((failures.is_empty(), json!({ "orders": 6, "failures": failures })))
    })
}

fn taylor_oracle() -> Vec<Check> {
    let mut checks = Vec::new();
    for text in ["exp(u0)", "sin(u0)", "log(1 + u0)"] {
        let f = expr(text);
        checks.push(Check::run(
            format!("taylor/{text}"),
            cite::DERIVATIVES,
            expr_witness(text),
            || -> Result<_, JetError> {
                let mut rows = Vec::new();
                let mut passed = true;
                for x0 in [-0.7, 0.0, 0.3, 1.5] {
                    let got = taylor_coefficients(&f, x0, 6)?;
                    let want = taylor_f64(&f, x0, 6)?;
                    let ok = got.iter().zip(&want).all(|(a, b)| rel_close(*a, *b, TAYLOR_REL));
                    passed &= ok;
                    rows.push(json!({ "x0": x0, "coefficients": got, "oracle": want, "passed": ok }));
                }
                let exact = taylor_coefficients(&f, int(0), 6)? == taylor_exact(&f, &int(0), 6)?;
                Ok((
                    passed && exact,
                    json!({ "order": 6, "rel_tol": TAYLOR_REL, "points": rows, "exact_at_zero": exact }),
                ))
            },
        ));
    }
    checks
}

fn finite_differences() -> Vec<Check> {
    let cases: [(&str, f64, f64); 9] = [
        ("exp(u0)", -1.0, 1.0),
        ("sin(u0)", -1.0, 1.0),
        ("cos(u0)", 0.2, 1.4),
        ("log(1 + u0)", -0.5, 2.0),
        ("sqrt(u0)", 0.5, 3.0),
        ("u0^3 - 2*u0", 1.0, 2.0),
        ("exp(sin(u0))", -1.0, 1.0),
        ("1/(1 + u0^2)", 0.3, 2.0),
        ("pow(u0, 5/2)", 0.5, 3.0),
    ];
    let mut checks = Vec::new();
    for (text, lo, hi) in cases {
        let f = expr(text);
        checks.push(Check::run(
            format!("difference/{text}"),
            cite::DERIVATIVES,
            expr_witness(text),
            || -> Result<_, JetError> {
                let mut rows = Vec::new();
                let mut passed = true;
                for i in 0..5 {
                    let x0 = lo + (hi - lo) * f64::from(i) / 4.0;
                    let jet = taylor_coefficients(&f, x0, 1)?[1];
                    let diff = central_difference(&f, x0, STEP)?;
                    let ok = rel_close(jet, diff, DIFFERENCE_REL);
                    passed &= ok;
                    rows.push(json!({ "x0": x0, "jet": jet, "difference": diff, "passed": ok }));
                }
                Ok((passed, json!({ "h": STEP, "rel_tol": DIFFERENCE_REL, "points": rows })))
            },
        ));
    }
    checks
}

pub fn jets(seed: u64) -> Vec<Check> {
    let mut checks = examples();
    for (i, (name, alg)) in family().iter().enumerate() {
        checks.push(functor_laws(name, alg, seed.wrapping_add(i as u64)));
    }
    checks.push(naturality(seed.wrapping_add(100)));
    checks.push(truncation());
    checks.extend(taylor_oracle());
    checks.extend(finite_differences());
    checks
}
