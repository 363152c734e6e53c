//! The `varbvp` command line: spectrum, condition screening, solving,
//! verification and the grid census, all reported as JSON (or CSV).

pub mod output;
pub mod problem;

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;
use serde_json::{json, Map, Value};
use varbvp_core::difference::embedding_constants;
use varbvp_core::energy::ProblemSpec;
use varbvp_core::hypothesis::{applicability, thresholds, ConditionReport, HypothesisError, TheoremReport};
use varbvp_core::solvers::{
    evaluate_point, grid_census, grid_step, solve_auto, CriticalPoint, Origin, SolutionSet, SolverConfig,
    SolverError, ORACLE_MAX_DIM,
};

use crate::output::{cell, render_csv, render_json, write_atomic, SCHEMA_VERSION};
use crate::problem::{parse_problem_file, ProblemFile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Largest residual `verify` accepts.
pub const VERIFY_TOL: f64 = 1e-8;

#[derive(Parser)]
#[command(name = "varbvp", version, about = "Solver and verifier for discrete Dirichlet BVPs of order 2n")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print λ, λ_max, 4ⁿ and the thresholds t_low, t_high
    Spectrum(Common),
    /// Screen the claimed growth conditions and report applicable results
    Check(Common),
    /// Find critical points with the strategy chosen by the screening
    Solve(Common),
    /// Recompute J, gradient, residual and kind for points in a solution file
    Verify {
        #[command(flatten)]
        common: Common,
        /// Solution file, or `-` for standard input
        solutions: String,
    },
    /// Newton from every node of a dense grid (N <= 4)
    Oracle(Common),
}

#[derive(Args)]
struct Common {
    /// Problem file (JSON)
    problem: PathBuf,
    /// Emit tabular sections as CSV
    #[arg(long)]
    csv: bool,
    /// Gradient tolerance (tol_grad)
    #[arg(long)]
    tol: Option<f64>,
    /// Number of random starts
    #[arg(long)]
    starts: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Box radius for starts and the grid
    #[arg(long = "box")]
    box_radius: Option<f64>,
    /// Write the report to FILE instead of standard output
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Failure(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Failure(_) => EXIT_FAILURE,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Failure(m) => m,
        }
    }
}

impl From<HypothesisError> for CliError {
    fn from(e: HypothesisError) -> Self {
        match e {
            HypothesisError::Parameter { .. } | HypothesisError::UnknownCondition(_) => CliError::Usage(e.to_string()),
            _ => CliError::Failure(e.to_string()),
        }
    }
}

impl From<SolverError> for CliError {
    fn from(e: SolverError) -> Self {
        match e {
            SolverError::InvalidConfig(_) | SolverError::OracleDimension { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Failure(e.to_string()),
        }
    }
}

struct Report {
    text: String,
    code: i32,
}

struct Loaded {
    file: ProblemFile,
    config: SolverConfig,
    csv: bool,
}

impl Loaded {
    fn prob(&self) -> &ProblemSpec {
        &self.file.spec
    }
}

fn load(common: &Common) -> Result<Loaded, CliError> {
    let bytes = std::fs::read(&common.problem)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", common.problem.display())))?;
    let file =
        parse_problem_file(&bytes).map_err(|e| CliError::Usage(format!("{}: {e}", common.problem.display())))?;
    let mut config = file.config;
    if let Some(t) = common.tol {
        config.tol_grad = t;
    }
    if let Some(s) = common.starts {
        config.starts = s;
    }
    if let Some(s) = common.seed {
        config.seed = s;
    }
    if let Some(r) = common.box_radius {
        config.box_radius = r;
    }
    config.validate()?;
    Ok(Loaded { file, config, csv: common.csv })
}

fn header(prob: &ProblemSpec) -> Result<Map<String, Value>, CliError> {
    let th = thresholds(prob)?;
    let mut m = Map::new();
    m.insert("schema_version".into(), json!(SCHEMA_VERSION));
    m.insert("fingerprint".into(), json!(prob.fingerprint()));
    m.insert("lambda".into(), json!(th.lambda));
    Ok(m)
}

fn preamble(prob: &ProblemSpec) -> Vec<(&'static str, String)> {
    vec![("schema_version", SCHEMA_VERSION.to_string()), ("fingerprint", prob.fingerprint())]
}

fn solution_value(p: &CriticalPoint) -> Value {
    json!({
        "x": p.x.as_slice(),
        "J": p.J,
        "grad_norm": p.grad_norm_inf,
        "residual": p.residual_norm_inf,
        "kind": p.kind.name(),
        "origin": p.origin.name(),
        "approximate": p.approximate,
    })
}

fn solutions_csv(prob: &ProblemSpec, extra: Vec<(&'static str, String)>, solutions: &[Value]) -> String {
    let mut pre = preamble(prob);
    pre.extend(extra);
    let mut head: Vec<String> = ["J", "grad_norm", "residual", "kind", "origin"].map(String::from).to_vec();
    head.extend((1..=prob.interior_len()).map(|k| format!("x{k}")));
    let rows: Vec<Vec<String>> = solutions
        .iter()
        .map(|s| {
            let mut r: Vec<String> =
                ["J", "grad_norm", "residual", "kind", "origin"].iter().map(|k| cell(&s[*k])).collect();
            if let Some(xs) = s["x"].as_array() {
                r.extend(xs.iter().map(cell));
            }
            r
        })
        .collect();
    render_csv(&pre, &head, &rows)
}

fn spectrum(l: &Loaded) -> Result<Report, CliError> {
    let prob = l.prob();
    let b = embedding_constants(prob.interior_len(), prob.order())
        .map_err(|e| CliError::Failure(e.to_string()))?;
    let th = thresholds(prob)?;
    let mut m = header(prob)?;
    m.insert("lambda_max".into(), json!(b.lambda_max));
    m.insert("bound".into(), json!(b.upper_bound));
    m.insert("t_low".into(), json!(th.t_low));
    m.insert("t_high".into(), json!(th.t_high));
    let text = if l.csv {
        let rows: Vec<Vec<String>> =
            ["lambda", "lambda_max", "bound", "t_low", "t_high"].iter().map(|k| vec![k.to_string(), cell(&m[*k])]).collect();
        render_csv(&preamble(prob), &["quantity".into(), "value".into()], &rows)
    } else {
        render_json(&Value::Object(m))
    };
    Ok(Report { text, code: EXIT_OK })
}

fn screen(l: &Loaded) -> Result<TheoremReport, CliError> {
    Ok(applicability(l.prob(), &l.file.claims, l.file.c)?)
}

fn condition_row(r: &ConditionReport) -> Vec<String> {
    let w = r.witness;
    vec![
        r.condition.name().to_string(),
        cell(&json!(r.category)),
        cell(&json!(r.verdict)),
        cell(&json!(r.params.alpha)),
        r.params.q.map(|q| cell(&json!(q))).unwrap_or_default(),
        cell(&json!(r.params.m)),
        r.reduces_to.map(|c| c.name().to_string()).unwrap_or_default(),
        w.map(|w| w.k.to_string()).unwrap_or_default(),
        w.map(|w| cell(&json!(w.u))).unwrap_or_default(),
        w.map(|w| cell(&json!(w.value))).unwrap_or_default(),
        r.note.clone(),
    ]
}

fn applicable_names(report: &TheoremReport) -> Vec<&'static str> {
    report.applicable.iter().map(|t| t.name()).collect()
}

fn check(l: &Loaded) -> Result<Report, CliError> {
    let prob = l.prob();
    let report = screen(l)?;
    let text = if l.csv {
        let mut pre = preamble(prob);
        pre.push(("applicable", applicable_names(&report).join(";")));
        let head = ["condition", "category", "verdict", "alpha", "q", "M", "reduces_to", "witness_k", "witness_u", "witness_value", "note"]
            .map(String::from)
            .to_vec();
        let rows: Vec<Vec<String>> =
            report.coercive_evidence.iter().chain(&report.anticoercive_evidence).map(condition_row).collect();
        render_csv(&pre, &head, &rows)
    } else {
        let mut m = header(prob)?;
        let Value::Object(body) = serde_json::to_value(&report).map_err(|e| CliError::Failure(e.to_string()))? else {
            unreachable!("reports serialize to objects")
        };
        m.extend(body);
        render_json(&Value::Object(m))
    };
    Ok(Report { text, code: EXIT_OK })
}

fn set_value(prob: &ProblemSpec, set: &SolutionSet) -> Result<Map<String, Value>, CliError> {
    let mut m = header(prob)?;
    m.insert("solutions".into(), Value::Array(set.points.iter().map(solution_value).collect()));
    m.insert("diagnostics".into(), json!(set.diagnostics));
    Ok(m)
}

fn solve(l: &Loaded) -> Result<Report, CliError> {
    let prob = l.prob();
    let report = screen(l)?;
    let sol = solve_auto(prob, &report, &l.config)?;
    let mut m = set_value(prob, &sol.set)?;
    m.insert("applicable".into(), json!(applicable_names(&report)));
    m.insert("strategy".into(), json!(sol.strategy));
    let runs: Vec<Value> = sol
        .mountain_pass
        .iter()
        .map(|r| {
            let t = &r.result.trace;
            json!({
                "variant": r.variant.name(),
                "x_a": r.x_a.as_slice(),
                "x_b": r.x_b.as_slice(),
                "point": solution_value(&r.result.point),
                "endpoint_max": t.endpoint_max,
                "initial_max": t.initial_max,
                "final_max": t.final_max,
                "sweeps": t.sweeps,
            })
        })
        .collect();
    m.insert("mountain_pass".into(), Value::Array(runs));
    let failed_pass = sol.mountain_pass.len() < sol.strategy.mountain_pass.len();
    let code = if sol.set.points.is_empty() || failed_pass { EXIT_FAILURE } else { EXIT_OK };
    let text = if l.csv {
        let extra = sol
            .mountain_pass
            .iter()
            .map(|r| ("mountain_pass", format!("{} J={}", r.variant.name(), cell(&json!(r.result.point.J)))))
            .collect();
        solutions_csv(prob, extra, m["solutions"].as_array().expect("array"))
    } else {
        render_json(&Value::Object(m))
    };
    Ok(Report { text, code })
}

fn oracle(l: &Loaded) -> Result<Report, CliError> {
    let prob = l.prob();
    if prob.interior_len() > ORACLE_MAX_DIM {
        return Err(SolverError::OracleDimension { max: ORACLE_MAX_DIM, got: prob.interior_len() }.into());
    }
    let step = grid_step(prob.interior_len(), l.config.box_radius);
    let set = grid_census(prob, &l.config, step)?;
    let mut m = set_value(prob, &set)?;
    m.insert("step".into(), json!(step));
    let code = if set.points.is_empty() { EXIT_FAILURE } else { EXIT_OK };
    let text = if l.csv {
        solutions_csv(prob, vec![("step", cell(&json!(step)))], m["solutions"].as_array().expect("array"))
    } else {
        render_json(&Value::Object(m))
    };
    Ok(Report { text, code })
}

#[derive(Deserialize)]
struct SolutionsIn {
    #[serde(default)]
    fingerprint: Option<String>,
    solutions: Vec<SolutionIn>,
}

#[derive(Deserialize)]
struct SolutionIn {
    x: Vec<f64>,
    #[serde(default)]
    origin: Option<String>,
}

fn verify(l: &Loaded, source: &str, stdin: &mut dyn Read) -> Result<Report, CliError> {
    let prob = l.prob();
    let mut bytes = Vec::new();
    if source == "-" {
        stdin.read_to_end(&mut bytes).map_err(|e| CliError::Usage(format!("cannot read standard input: {e}")))?;
    } else {
        bytes = std::fs::read(source).map_err(|e| CliError::Usage(format!("cannot read {source}: {e}")))?;
    }
    let input: SolutionsIn =
        serde_json::from_slice(&bytes).map_err(|e| CliError::Usage(format!("{source}: {e}")))?;
    let mut warnings = Vec::new();
    if let Some(fp) = &input.fingerprint {
        if *fp != prob.fingerprint() {
            warnings.push("solution file fingerprint differs from the problem".to_string());
        }
    }
    let mut solutions = Vec::with_capacity(input.solutions.len());
    let mut worst: f64 = 0.0;
    for (i, s) in input.solutions.into_iter().enumerate() {
        if s.x.len() != prob.interior_len() {
            return Err(CliError::Usage(format!(
                "solutions[{i}].x has {} entries, problem has N={}",
                s.x.len(),
                prob.interior_len()
            )));
        }
        let p = evaluate_point(prob, s.x, Origin::Newton)
            .map_err(|e| CliError::Usage(format!("solutions[{i}]: {e}")))?;
        worst = worst.max(p.residual_norm_inf);
        let mut v = solution_value(&p);
        match s.origin {
            Some(o) => v["origin"] = json!(o),
            None => {
                v.as_object_mut().expect("object").remove("origin");
            }
        }
        solutions.push(v);
    }
    let ok = !solutions.is_empty() && worst <= VERIFY_TOL;
    let code = if ok { EXIT_OK } else { EXIT_FAILURE };
    let text = if l.csv {
        let extra = vec![("verified", ok.to_string()), ("max_residual", cell(&json!(worst)))];
        solutions_csv(prob, extra, &solutions)
    } else {
        let mut m = header(prob)?;
        m.insert("solutions".into(), Value::Array(solutions));
        m.insert("max_residual".into(), json!(worst));
        m.insert("verified".into(), json!(ok));
        m.insert("warnings".into(), json!(warnings));
        render_json(&Value::Object(m))
    };
    Ok(Report { text, code })
}

fn execute(cli: Cli, stdin: &mut dyn Read) -> Result<(Report, Option<PathBuf>), CliError> {
    let (common, report) = match &cli.command {
        Command::Spectrum(c) => (c, spectrum(&load(c)?)?),
        Command::Check(c) => (c, check(&load(c)?)?),
        Command::Solve(c) => (c, solve(&load(c)?)?),
        Command::Oracle(c) => (c, oracle(&load(c)?)?),
        Command::Verify { common, solutions } => (common, verify(&load(common)?, solutions, stdin)?),
    };
    Ok((report, common.out.clone()))
}

/// Runs the command line `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(target, "{e}");
            return code;
        }
    };
    match execute(cli, stdin) {
        Ok((report, out)) => {
            let written = match out {
                Some(path) => write_atomic(&path, &report.text),
                None => stdout.write_all(report.text.as_bytes()),
            };
            if let Err(e) = written {
                let _ = writeln!(stderr, "error: cannot write output: {e}");
                return EXIT_FAILURE;
            }
            report.code
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message());
            e.code()
        }
    }
}
