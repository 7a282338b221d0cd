//! Command-line dispatch. Exit codes: 0 success, 1 a check failed,
//! 2 usage, parse or input error.

use std::ffi::OsString;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use weil_core::category::{equalizer, fibered_tensor, finite_limit, LimitResult};
use weil_core::rational::{parse_rational, to_compact_string, to_f64};
use weil_core::{
    eval_jet, tensor_infinity, AlgebraError, Element, Expr, JetError, ParseError, Scalar, WPoint, WeilAlgebra,
};

use crate::format::{describe, hom_images, parse_diagram, subspace_elements, AlgebraJson, FormatError};
use crate::verify::{run_suite, seed_from_env, SuiteReport, VerifyError, SUITES};

#[derive(Debug, Parser)]
#[command(name = "weil", version, about = "Weil algebras, their limits and prolongations of R^n")]
pub struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build an algebra from a presentation such as "x | x^2 ; nil 2".
    Parse { presentation: String },
    /// The tensor product of two algebras.
    Tensor { left: String, right: String },
    /// The fibered tensor product, as a subalgebra of the tensor product.
    FiberedTensor { left: String, right: String },
    /// The equalizer of two parallel edges in a diagram file.
    Equalizer { diagram: PathBuf },
    /// The limit of a finite diagram file.
    Limit { diagram: PathBuf },
    /// Evaluate the jet of an expression at a point of R^n ⊗ W.
    Jet {
        #[arg(long)]
        expr: String,
        #[arg(long)]
        algebra: String,
        /// Base point, comma separated, e.g. "1,1/2".
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        #[arg(long, value_enum, default_value_t = Mode::Exact)]
        mode: Mode,
    },
    /// Run a verification suite, or `all`.
    Verify { suite: String },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Mode {
    Exact,
    Float,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Input(String),
}

/// Text and JSON renderings of a successful command, with its exit status.
struct Output {
    text: String,
    json: Value,
    ok: bool,
}

impl Output {
    fn ok(text: String, json: Value) -> Self {
        Output { text, json, ok: true }
    }
}

pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(&cli.command) {
        Ok(out) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("serializable"));
            } else {
                println!("{}", out.text);
            }
            ExitCode::from(if out.ok { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn execute(command: &Command) -> Result<Output, CliError> {
    match command {
        Command::Parse { presentation } => {
            let w = WeilAlgebra::parse(presentation)?;
            Ok(Output::ok(describe(&w), json!(AlgebraJson::new(&w))))
        }
        Command::Tensor { left, right } => {
            let t = tensor_infinity(&WeilAlgebra::parse(left)?, &WeilAlgebra::parse(right)?);
            Ok(Output::ok(describe(&t.algebra), json!(AlgebraJson::new(&t.algebra))))
        }
        Command::FiberedTensor { left, right } => {
            let ft = fibered_tensor(&WeilAlgebra::parse(left)?, &WeilAlgebra::parse(right)?)?;
            let elements = subspace_elements(&ft.tensor.algebra, ft.limit.subalgebra.space());
            let text = format!(
                "{}\ninside {}: {}",
                describe(&ft.algebra),
                ft.tensor.algebra.presentation(),
                elements.join(", ")
            );
            let json = json!({
                "algebra": AlgebraJson::new(&ft.algebra),
                "tensor": ft.tensor.algebra.presentation().to_string(),
                "subspace": elements,
            });
            Ok(Output::ok(text, json))
        }
        Command::Equalizer { diagram } => {
            let d = parse_diagram(&read(diagram)?)?;
            let [e1, e2] = d.edges() else {
                return Err(CliError::Input("an equalizer diagram needs exactly two edges".into()));
            };
            if d.nodes().len() != 2 || e1.from != e2.from || e1.to != e2.to || e1.from == e1.to {
                return Err(CliError::Input("an equalizer diagram needs two nodes and two parallel edges".into()));
            }
            Ok(limit_output(&equalizer(&e1.hom, &e2.hom)?))
        }
        Command::Limit { diagram } => {
            let d = parse_diagram(&read(diagram)?)?;
            Ok(limit_output(&finite_limit(&d)?))
        }
        Command::Jet { expr, algebra, at, mode } => {
            let f = Expr::parse(expr)?;
            let w = WeilAlgebra::parse(algebra)?;
            let base = at
                .split(',')
                .map(|s| {
                    parse_rational(s.trim()).ok_or_else(|| CliError::Input(format!("not a rational number: '{s}'")))
                })
                .collect::<Result<Vec<_>, _>>()?;
            if f.arity() > base.len() {
                return Err(JetError::Arity { expected: f.arity(), found: base.len() }.into());
            }
            match mode {
                Mode::Exact => jet_output(&f, &w, base, to_compact_string),
                Mode::Float => jet_output(&f, &w, base.iter().map(to_f64).collect(), |v| v.to_string()),
            }
        }
        Command::Verify { suite } => verify(suite),
    }
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.clone(), source })
}

fn limit_output(lim: &LimitResult) -> Output {
    let ambient = lim.subalgebra.ambient();
    let elements = subspace_elements(ambient, lim.subalgebra.space());
    let legs: Vec<Value> = lim.cone.legs.iter().map(|(id, h)| json!({ "node": id, "images": hom_images(h) })).collect();
    let text = format!("{}\ninside {}: {}", describe(&lim.algebra), ambient.presentation(), elements.join(", "));
    let json = json!({
        "algebra": AlgebraJson::new(&lim.algebra),
        "ambient": ambient.presentation().to_string(),
        "subspace": elements,
        "legs": legs,
    });
    Output::ok(text, json)
}

/// Jet of `f` at the point whose coordinate `i` is `base[i] + x_i`, the
/// `i`-th generator, when `W` has one; otherwise the coordinate is constant.
fn jet_output<S: Scalar>(
    f: &Expr,
    w: &Arc<WeilAlgebra>,
    base: Vec<S>,
    show: impl Fn(&S) -> String,
) -> Result<Output, CliError> {
    let coords = base
        .into_iter()
        .enumerate()
        .map(|(i, b)| {
            let c = Element::constant(w, b);
            if i < w.vars().len() {
                let x: Vec<S> = w.generator(i).coords().iter().map(S::from_rational).collect();
                c.add(&Element::new(w, x)?)
            } else {
                Ok(c)
            }
        })
        .collect::<Result<Vec<_>, AlgebraError>>()?;
    let value = eval_jet(f, &WPoint::new(w, coords)?)?;
    let coefficients: Vec<String> = value.coords().iter().map(show).collect();
    let labels = w.basis_labels();
    let text = format!(
        "value: {}\ncoefficients: {}",
        value.display(),
        labels.iter().zip(&coefficients).map(|(l, c)| format!("{l}: {c}")).collect::<Vec<_>>().join(", ")
    );
    let json = json!({ "value": value.display(), "basis": labels, "coefficients": coefficients });
    Ok(Output::ok(text, json))
}

fn verify(suite: &str) -> Result<Output, CliError> {
    let seed = seed_from_env();
    let names: Vec<&str> = if suite == "all" { SUITES.to_vec() } else { vec![suite] };
    let reports = names.iter().map(|n| run_suite(n, seed)).collect::<Result<Vec<_>, _>>()?;
    let ok = reports.iter().all(SuiteReport::passed);
    let text = reports.iter().map(table).collect::<Vec<_>>().join("\n\n");
    let json = if suite == "all" { json!(reports) } else { json!(reports[0]) };
    Ok(Output { text, json, ok })
}

fn table(r: &SuiteReport) -> String {
    let width = r.checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    let mut lines = vec![format!("suite {} ({} ms)", r.suite, r.duration_ms)];
    for c in &r.checks {
        let status = if c.passed() { "pass" } else { "FAIL" };
        let mut line = format!("  {status}  {:width$}  {}", c.name, c.cite);
        if let Some(dims) = c.details.get("dims") {
            line.push_str(&format!("  dims {dims}"));
        }
        lines.push(line);
    }
    let passed = r.checks.iter().filter(|c| c.passed()).count();
    lines.push(format!("  {passed}/{} checks passed", r.checks.len()));
    lines.join("\n")
}
