use std::collections::HashMap;

use weil::verify::{run_suite, CLAIMS, SUITES};

#[test]
fn every_claim_is_verified_by_exactly_one_suite() {
    let mut seen: HashMap<String, Vec<&str>> = HashMap::new();
    for suite in SUITES {
        let report = run_suite(suite, 1).unwrap();
        assert!(!report.checks.is_empty(), "{suite} has no checks");
        for check in &report.checks {
            assert!(!check.cite.is_empty(), "{suite}/{} has no citation", check.name);
            let suites = seen.entry(check.cite.clone()).or_default();
            if !suites.contains(&suite) {
                suites.push(suite);
            }
        }
    }
    for (suite, cite) in CLAIMS {
        assert_eq!(seen.get(cite).map(Vec::as_slice), Some(&[suite][..]), "claim {cite}");
    }
    assert_eq!(seen.len(), CLAIMS.len(), "checks cite labels outside the manifest");
}

#[test]
fn every_suite_appears_in_the_manifest() {
    for suite in SUITES {
        assert!(CLAIMS.iter().any(|(s, _)| *s == suite), "{suite}");
    }
}

#[test]
fn reports_are_deterministic_apart_from_timing() {
    let strip = |suite: &str| {
        let mut v = serde_json::to_value(run_suite(suite, 7).unwrap()).unwrap();
        v.as_object_mut().unwrap().remove("duration_ms");
        v
    };
    for suite in ["jets", "lemma-5-7", "thm-4-7"] {
        assert_eq!(strip(suite), strip(suite), "{suite}");
    }
}
