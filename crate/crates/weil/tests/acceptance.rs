//! One pass/fail line per acceptance criterion. Run with `--nocapture` to see them.

use std::process::Command;
use std::time::{Duration, Instant};

use serde_json::Value;
use weil::verify::{run_suite, SuiteReport};

struct Criterion {
    name: &'static str,
    passed: bool,
    note: String,
}

fn timed(suite: &str) -> (SuiteReport, Duration) {
    let start = Instant::now();
    let report = run_suite(suite, 0x5eed).expect("known suite");
    (report, start.elapsed())
}

fn checks<'a>(r: &'a SuiteReport, prefix: &'a str) -> impl Iterator<Item = &'a weil::verify::Check> + 'a {
    r.checks.iter().filter(move |c| c.name.starts_with(prefix))
}

fn dims(c: &weil::verify::Check) -> Option<(u64, u64)> {
    let d = c.details.get("dims")?.as_array()?;
    Some((d.first()?.as_u64()?, d.get(1)?.as_u64()?))
}

fn prop_3_3() -> Criterion {
    let (r, t) = timed("prop-3-3");
    let c = &r.checks[0];
    let passed = r.checks.len() == 1 && c.passed() && dims(c) == Some((3, 3)) && t < Duration::from_secs(1);
    Criterion { name: "prop-3-3 fibered square of W_D is W_D(2), dims (3,3), < 1 s", passed, note: format!("{t:?}") }
}

fn lemma_3_2() -> Criterion {
    let (r, t) = timed("lemma-3-2");
    let cones = checks(&r, "universal-property").next().and_then(|c| c.details["cones"].as_u64()).unwrap_or(0);
    let passed = r.passed() && cones >= 10 && t < Duration::from_secs(1);
    Criterion {
        name: "lemma-3-2 equalizer with unique factorization, >= 10 cones, < 1 s",
        passed,
        note: format!("{cones} cones, {t:?}"),
    }
}

fn prop_4_6() -> Criterion {
    let (r, t) = timed("prop-4-6");
    let triples: u64 = r.checks.iter().filter_map(|c| c.details["triples"].as_u64()).sum();
    let passed = r.passed() && triples == 125 && t < Duration::from_secs(60);
    Criterion {
        name: "prop-4-6 associativity on all 125 triples, < 60 s",
        passed,
        note: format!("{triples} triples, {t:?}"),
    }
}

fn thm_3_4() -> Criterion {
    let (r, t) = timed("thm-3-4");
    let models: usize = r.checks.iter().filter_map(|c| c.details["models"].as_array()).map(Vec::len).sum();
    let passed = r.passed() && r.checks.len() == 25 && models == 75 && t < Duration::from_secs(60);
    Criterion {
        name: "thm-3-4 iterated prolongation, n in 1..=3, 25 pairs, < 60 s",
        passed,
        note: format!("{models} cases, {t:?}"),
    }
}

fn lemma_5_7() -> Criterion {
    let (lemma, _) = timed("lemma-5-7");
    let (thm, _) = timed("thm-5-6");
    let limits = checks(&lemma, "limit-commutation/").count();
    let passed = lemma.passed() && thm.passed() && limits == 15;
    Criterion {
        name: "lemma-5-7 / thm-5-6 limits commute for 5 algebras x 3 diagrams",
        passed,
        note: format!("{limits} + {} checks", thm.checks.len()),
    }
}

fn thm_6_6() -> Criterion {
    let (r, _) = timed("thm-6-6");
    let euclid: Vec<_> =
        (0..=4).filter_map(|n| r.checks.iter().find(|c| c.name == format!("euclidean/n{n}"))).collect();
    let sized = euclid.iter().zip(0u64..).all(|(c, n)| c.passed() && dims(c) == Some((3 * n, 3 * n)));
    let linear = checks(&r, "linear-structure/").filter(|c| c.passed()).count();
    let passed = r.passed() && euclid.len() == 5 && sized && linear == 5;
    Criterion {
        name: "thm-6-6 euclidean law dims 3n for n in 0..=4 and linear structure",
        passed,
        note: format!("{linear} linear"),
    }
}

fn thm_3_1() -> Criterion {
    let (r, _) = timed("thm-3-1");
    let cases: usize = r.checks.iter().filter_map(|c| c.details["cases"].as_array()).map(Vec::len).sum();
    Criterion {
        name: "thm-3-1 fibered products preserved, n, b <= 2",
        passed: r.passed() && cases == 5 * 27,
        note: format!("{cases} cases"),
    }
}

fn jets() -> Criterion {
    let (r, _) = timed("jets");
    let functor = checks(&r, "functor/").filter(|c| c.passed() && c.details["samples"].as_u64() == Some(100)).count();
    let taylor = checks(&r, "taylor/").filter(|c| c.passed()).count();
    let difference = checks(&r, "difference/").filter(|c| c.passed()).count();

    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_weil")).args(["verify", "all", "--json"]).output().expect("binary runs");
    let t = start.elapsed();
    let all: Value = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    let suites = all.as_array().map_or(0, Vec::len);

    let passed = r.passed()
        && functor == 5
        && taylor == 3
        && difference == 9
        && out.status.code() == Some(0)
        && suites == 10
        && t < Duration::from_secs(300);
    Criterion {
        name: "jets functor laws x100, taylor rel 1e-10, differences rel 1e-6, verify all < 5 min",
        passed,
        note: format!("{functor} functor, {taylor} taylor, {difference} difference, verify all {t:?}"),
    }
}

#[test]
fn acceptance() {
    let results = [prop_3_3(), lemma_3_2(), prop_4_6(), thm_3_4(), lemma_5_7(), thm_6_6(), thm_3_1(), jets()];
    for c in &results {
        println!("{} {} ({})", if c.passed { "PASS" } else { "FAIL" }, c.name, c.note);
    }
    let failed: Vec<_> = results.iter().filter(|c| !c.passed).map(|c| c.name).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
