//! Named verification suites and their reports.

mod algebraic;
mod jets;
mod models;

use std::sync::Arc;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};
use weil_core::category::Diagram;
use weil_core::{AlgebraHom, Element, WeilAlgebra};

pub const SUITES: [&str; 10] =
    ["lemma-3-2", "prop-3-3", "thm-3-1", "thm-3-4", "prop-4-6", "thm-4-7", "lemma-5-7", "thm-5-6", "thm-6-6", "jets"];

/// Formula labels carried by checks, one per verified claim.
pub mod cite {
    pub const EQUALIZER: &str = "Eq(W_{d↦(0,d)}, W_{d↦(0,0)}) = W_{(d1,d2)↦(d1,d1·d2)}";
    pub const DUAL_SQUARE: &str = "W_D ⊗̃ W_D ≅ W_D(2)";
    pub const PRODUCTS: &str = "(E ×_M F) ⊗_M W ≅ (E ⊗_M W) ×_M (F ⊗_M W)";
    pub const ITERATED: &str = "(M ⊗ W1) ⊗_M W2 ≅ M ⊗ (W1 ⊗̃ W2)";
    pub const ASSOCIATIVITY: &str = "(W1 ⊗̃ W2) ⊗̃ W3 ≅ W1 ⊗̃ (W2 ⊗ W3)";
    pub const EXPONENTIABLE: &str = "((M ⊗ W) ⊗_M W1) ⊗_M W2 ≅ (M ⊗ W) ⊗_M (W1 ⊗̃ W2)";
    pub const LIMITS: &str = "Lim(W ⊗̃ 𝔻) ≅ W ⊗̃ Lim 𝔻";
    pub const MICROLINEAR: &str = "Lim((M ⊗ W) ⊗_M 𝔻) ≅ (M ⊗ W) ⊗_M Lim 𝔻";
    pub const EUCLIDEAN: &str = "E ⊗_M W_D ≅ E ×_M E";
    pub const LINEAR: &str = "M ⊗ W_D -> M is fiberwise linear";
    pub const FUNCTOR: &str = "f ↦ f ⊗ W is a functor, natural in W";
    pub const DERIVATIVES: &str = "f ⊗ R[X]/(X^{k+1}) at x0 + X = Σ f^(j)(x0)/j! X^j";
}

/// Every claim and the one suite that verifies it.
pub const CLAIMS: [(&str, &str); 12] = [
    ("lemma-3-2", cite::EQUALIZER),
    ("prop-3-3", cite::DUAL_SQUARE),
    ("thm-3-1", cite::PRODUCTS),
    ("thm-3-4", cite::ITERATED),
    ("prop-4-6", cite::ASSOCIATIVITY),
    ("thm-4-7", cite::EXPONENTIABLE),
    ("lemma-5-7", cite::LIMITS),
    ("thm-5-6", cite::MICROLINEAR),
    ("thm-6-6", cite::EUCLIDEAN),
    ("thm-6-6", cite::LINEAR),
    ("jets", cite::FUNCTOR),
    ("jets", cite::DERIVATIVES),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub cite: String,
    pub status: Status,
    pub details: Value,
}

impl Check {
    /// A check whose details gain a `witness` entry when it fails.
    pub fn new(
        name: impl Into<String>,
        cite: &str,
        passed: bool,
        details: Value,
        witness: impl FnOnce() -> Value,
    ) -> Self {
        let mut details = details;
        if !passed {
            match &mut details {
                Value::Object(map) => {
                    map.insert("witness".into(), witness());
                }
                other => *other = json!({ "details": other.clone(), "witness": witness() }),
            }
        }
        Check {
            name: name.into(),
            cite: cite.into(),
            status: if passed { Status::Pass } else { Status::Fail },
            details,
        }
    }

    /// Runs `body`; an error becomes a failed check carrying the message.
    pub fn run<E: std::fmt::Display>(
        name: impl Into<String>,
        cite: &str,
        witness: impl FnOnce() -> Value,
        body: impl FnOnce() -> Result<(bool, Value), E>,
    ) -> Self {
        match body() {
            Ok((passed, details)) => Check::new(name, cite, passed, details, witness),
            Err(e) => Check::new(name, cite, false, json!({ "error": e.to_string() }), witness),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<Check>,
    pub duration_ms: u64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum VerifyError {
    #[error("unknown suite '{0}' (known: {known})", known = SUITES.join(", "))]
    UnknownSuite(String),
}

/// Seed for sampled W-points: `WEIL_VERIFY_SEED` when set, else a fixed default.
pub fn seed_from_env() -> u64 {
    std::env::var("WEIL_VERIFY_SEED").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(0x5eed)
}

pub fn run_suite(name: &str, seed: u64) -> Result<SuiteReport, VerifyError> {
    let start = Instant::now();
    let checks = match name {
        "lemma-3-2" => algebraic::lemma_3_2(),
        "prop-3-3" => algebraic::prop_3_3(),
        "prop-4-6" => algebraic::prop_4_6(),
        "lemma-5-7" => algebraic::lemma_5_7(),
        "thm-3-1" => models::thm_3_1(),
        "thm-3-4" => models::thm_3_4(),
        "thm-4-7" => models::thm_4_7(),
        "thm-5-6" => models::thm_5_6(),
        "thm-6-6" => models::thm_6_6(),
        "jets" => jets::jets(seed),
        _ => return Err(VerifyError::UnknownSuite(name.into())),
    };
    Ok(SuiteReport { suite: name.into(), checks, duration_ms: start.elapsed().as_millis() as u64 })
}

pub(crate) fn dual() -> Arc<WeilAlgebra> {
    WeilAlgebra::parse("x | x^2 ; nil 2").expect("valid presentation")
}

pub(crate) fn dual_pair() -> Arc<WeilAlgebra> {
    WeilAlgebra::parse("x,y | x^2, y^2 ; nil 3").expect("valid presentation")
}

pub(crate) fn first_order_pair() -> Arc<WeilAlgebra> {
    WeilAlgebra::parse("x,y | x^2, y^2, x*y ; nil 2").expect("valid presentation")
}

/// The pair `W_{d↦(0,d)}, W_{d↦(0,0)} : W_{D×D} ⇉ W_D`.
pub(crate) fn parallel_pair() -> (AlgebraHom, AlgebraHom) {
    let (dd, d) = (dual_pair(), dual());
    let f = AlgebraHom::from_generator_images(&dd, &d, &[Element::zero(&d), d.generator(0)]).expect("hom");
    (f, AlgebraHom::constant(&dd, &d))
}

/// Single node, discrete pair, and the parallel pair above.
pub(crate) fn stock_diagrams() -> Vec<(&'static str, Diagram)> {
    let (f, g) = parallel_pair();
    let mut single = Diagram::new();
    single.add_node("a", dual_pair()).expect("fresh id");
    let mut discrete = Diagram::new();
    discrete.add_node("a", dual()).expect("fresh id");
    discrete.add_node("b", dual()).expect("fresh id");
    let mut pair = Diagram::new();
    pair.add_node("s", f.src().clone()).expect("fresh id");
    pair.add_node("t", f.dst().clone()).expect("fresh id");
    pair.add_edge("s", "t", f).expect("matching nodes");
    pair.add_edge("s", "t", g).expect("matching nodes");
    vec![("single", single), ("discrete", discrete), ("parallel-pair", pair)]
}

pub(crate) fn presentations(algebras: &[&Arc<WeilAlgebra>]) -> Value {
    Value::from(algebras.iter().map(|w| w.presentation().to_string()).collect::<Vec<_>>())
}
