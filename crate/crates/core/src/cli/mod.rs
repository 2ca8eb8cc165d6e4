//! Command-line front end: argument parsing, dispatch and the JSON run report.
//!
//! Every subcommand produces a [`RunReport`]. With `--json` it is printed as
//! JSON, otherwise as text lines. Exit codes: 0 success, 1 verification
//! failure, 2 usage or parse error.

mod opexpr;

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value as Json};

use crate::acceptance::{self, algebroid_samples};
use crate::dynamics::{
    compile_numeric, conservation_report, example_system, newton_equivalence_check, rk4_integrate, ExampleSystem,
};
use crate::error::{Error, Result};
use crate::nambu::{AlgebroidSamples, FiStatus, FiStrategy, NambuStructure};
use crate::operator::{decompose_tensorial, extract_top_multivector, is_tensorial, GradedOperator, TestStrategy};
use crate::parse::{format_element, format_rational_function, parse_form, parse_function, parse_multivector};
use crate::symbolic::{Chart, RationalFunction};

pub use opexpr::parse_operator;

#[derive(Parser, Debug)]
#[command(name = "nambu", version, about = "Nambu-Poisson brackets, graded operators and their verification")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Common {
    /// Built-in system: kepler or calogero.
    #[arg(long, global = true)]
    pub system: Option<String>,
    /// Comma-separated coordinate names.
    #[arg(long, global = true)]
    pub chart: Option<String>,
    /// Comma-separated parameters, optionally bound: `m=1,k=2`.
    #[arg(long, global = true)]
    pub params: Option<String>,
    /// The Nambu multivector, e.g. `@x^@y^@z`.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub mv: Option<String>,
    /// Functions, or Hamiltonian names of the selected system. Write a leading minus as `(-x)`.
    #[arg(long, global = true, num_args = 1..)]
    pub fns: Vec<String>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true)]
    pub dt: Option<f64>,
    #[arg(long = "t-end", global = true)]
    pub t_end: Option<f64>,
    /// Comma-separated initial state.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub init: Option<String>,
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Nambu bracket of n functions.
    Bracket,
    /// Hamiltonian vector field of n − 1 functions.
    HamVf,
    /// Fundamental Identity by nested brackets and by L_X P.
    FiCheck,
    /// Anchor and Leibniz axioms of the cotangent n-Lie algebroid.
    AlgebroidCheck,
    /// Apply an operator expression to a form.
    OpEval {
        #[arg(long, allow_hyphen_values = true)]
        op: String,
        #[arg(long, allow_hyphen_values = true)]
        form: String,
    },
    /// Top multivector of an operator, or (A, Δ) of a tensorial one.
    Decompose {
        #[arg(long, allow_hyphen_values = true)]
        op: String,
        #[arg(long)]
        n: usize,
    },
    /// RK4 flow of the Hamiltonian field.
    Integrate,
    /// Acceptance criteria, or the per-system checks with --system.
    Verify {
        /// Run only these criteria.
        #[arg(long, num_args = 1..)]
        criterion: Vec<u8>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Passed,
    Failed,
    Error,
}

#[derive(Clone, Debug, Serialize)]
pub struct Verdict {
    pub name: String,
    pub status: Status,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Json>,
}

impl Verdict {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Verdict {
            name: name.into(),
            status: if passed { Status::Passed } else { Status::Failed },
            detail: detail.into(),
            witness: None,
        }
    }

    fn with_witness(mut self, w: Json) -> Self {
        self.witness = Some(w);
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Json,
    pub results: Vec<Json>,
    pub verdicts: Vec<Verdict>,
    pub seed: u64,
    pub elapsed_ms: f64,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(|v| v.status == Status::Passed)
    }

    pub fn exit_code(&self) -> u8 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.results {
            match (r.get("name").and_then(Json::as_str), r.get("value")) {
                (Some(name), Some(Json::String(v))) => out.push_str(&format!("{name} = {v}\n")),
                (Some(name), Some(v)) => out.push_str(&format!("{name} = {v}\n")),
                _ => out.push_str(&format!("{r}\n")),
            }
        }
        for v in &self.verdicts {
            let status = match v.status {
                Status::Passed => "PASS",
                Status::Failed => "FAIL",
                Status::Error => "ERROR",
            };
            out.push_str(&format!("{status}  {}: {}\n", v.name, v.detail));
            if let Some(w) = &v.witness {
                out.push_str(&format!("      witness {w}\n"));
            }
        }
        out
    }
}

fn result(name: &str, value: impl Into<Json>) -> Json {
    json!({ "name": name, "value": value.into() })
}

/// Chart, optional structure and numeric bindings assembled from the flags.
struct Context {
    chart: Arc<Chart>,
    system: Option<ExampleSystem>,
    structure: Option<NambuStructure>,
    bindings: BTreeMap<String, f64>,
}

impl Context {
    fn from_flags(c: &Common) -> Result<Self> {
        if let Some(name) = &c.system {
            if c.chart.is_some() || c.mv.is_some() {
                return Err(Error::InvalidArgument("--system excludes --chart and --mv".into()));
            }
            let sys = example_system(name)?;
            let mut bindings = sys.bindings.clone();
            if let Some(p) = &c.params {
                for (k, v) in parse_params(p)? {
                    if let Some(v) = v {
                        bindings.insert(k, v);
                    }
                }
            }
            return Ok(Context {
                chart: sys.chart().clone(),
                structure: Some(sys.structure.clone()),
                system: Some(sys),
                bindings,
            });
        }
        let coords: Vec<String> = c
            .chart
            .as_deref()
            .ok_or_else(|| Error::InvalidArgument("give --system or --chart".into()))?
            .split(',')
            .map(|s| s.trim().to_string())
            .filter(|s| !s.is_empty())
            .collect();
        let params = c.params.as_deref().map(parse_params).transpose()?.unwrap_or_default();
        let names: Vec<String> = params.iter().map(|(k, _)| k.clone()).collect();
        let chart = Arc::new(Chart::new(&coords, &names)?);
        let structure = c
            .mv
            .as_deref()
            .map(|t| NambuStructure::from_multivector(parse_multivector(t, &chart)?))
            .transpose()?;
        Ok(Context {
            chart,
            system: None,
            structure,
            bindings: params.into_iter().filter_map(|(k, v)| v.map(|v| (k, v))).collect(),
        })
    }

    fn structure(&self) -> Result<&NambuStructure> {
        self.structure
            .as_ref()
            .ok_or_else(|| Error::InvalidArgument("this command needs --system or --mv".into()))
    }

    fn function(&self, text: &str) -> Result<RationalFunction> {
        if let Some(sys) = &self.system {
            if let Some(i) = sys.hamiltonian_names.iter().position(|n| *n == text) {
                return Ok(sys.hamiltonians[i].clone());
            }
        }
        parse_function(text, &self.chart)
    }

    /// `--fns`, defaulting to the system Hamiltonians.
    fn functions(&self, fns: &[String]) -> Result<Vec<RationalFunction>> {
        if fns.is_empty() {
            if let Some(sys) = &self.system {
                return Ok(sys.hamiltonians.clone());
            }
            return Err(Error::InvalidArgument("--fns is required".into()));
        }
        fns.iter().map(|t| self.function(t)).collect()
    }

    fn fmt(&self, f: &RationalFunction) -> String {
        format_rational_function(f, &self.chart)
    }
}

fn parse_params(text: &str) -> Result<Vec<(String, Option<f64>)>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|item| match item.split_once('=') {
            Some((k, v)) => v
                .trim()
                .parse::<f64>()
                .map(|v| (k.trim().to_string(), Some(v)))
                .map_err(|_| Error::InvalidArgument(format!("bad parameter value `{item}`"))),
            None => Ok((item.to_string(), None)),
        })
        .collect()
}

fn parse_floats(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::InvalidArgument(format!("bad number `{s}` in --init")))
        })
        .collect()
}

/// Whether an error stems from the command line rather than from a computation.
pub fn is_usage_error(e: &Error) -> bool {
    matches!(
        e,
        Error::Syntax { .. }
            | Error::UnknownName(_)
            | Error::NotACoordinate(_)
            | Error::InvalidChart(_)
            | Error::InvalidArgument(_)
            | Error::UnboundParameter(_)
            | Error::VarianceMismatch { .. }
            | Error::DegreeMismatch(_)
            | Error::InhomogeneousSum(..)
    )
}

pub fn run(cli: &Cli) -> Result<RunReport> {
    let start = Instant::now();
    let c = &cli.common;
    let mut inputs = serde_json::to_value(c).expect("serializable flags");
    if let (Json::Object(map), Ok(Json::Object(extra))) = (&mut inputs, serde_json::to_value(&cli.command)) {
        for (k, v) in extra {
            map.insert("subcommand".into(), Json::String(k));
            if let Json::Object(args) = v {
                map.extend(args);
            }
        }
    } else if let Ok(Json::String(name)) = serde_json::to_value(&cli.command) {
        if let Json::Object(map) = &mut inputs {
            map.insert("subcommand".into(), Json::String(name));
        }
    }
    let (command, results, verdicts) = match &cli.command {
        Command::Bracket => ("bracket", bracket(c)?, Vec::new()),
        Command::HamVf => ("ham-vf", ham_vf(c)?, Vec::new()),
        Command::FiCheck => {
            let (r, v) = fi_check(c)?;
            ("fi-check", r, v)
        }
        Command::AlgebroidCheck => {
            let (r, v) = algebroid_check(c)?;
            ("algebroid-check", r, v)
        }
        Command::OpEval { op, form } => ("op-eval", op_eval(c, op, form)?, Vec::new()),
        Command::Decompose { op, n } => {
            let (r, v) = decompose(c, op, *n)?;
            ("decompose", r, v)
        }
        Command::Integrate => {
            let (r, v) = integrate(c)?;
            ("integrate", r, v)
        }
        Command::Verify { criterion } => {
            let (r, v) = verify(c, criterion)?;
            ("verify", r, v)
        }
    };
    Ok(RunReport {
        command: command.to_string(),
        inputs,
        results,
        verdicts,
        seed: c.seed,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

fn bracket(c: &Common) -> Result<Vec<Json>> {
    let ctx = Context::from_flags(c)?;
    let s = ctx.structure()?;
    let fs = ctx.functions(&c.fns)?;
    if fs.len() != s.order() {
        return Err(Error::InvalidArgument(format!(
            "an order-{} structure brackets {} functions, got {}",
            s.order(),
            s.order(),
            fs.len()
        )));
    }
    Ok(vec![result("bracket", ctx.fmt(&s.bracket(&fs)?))])
}

fn ham_vf(c: &Common) -> Result<Vec<Json>> {
    let ctx = Context::from_flags(c)?;
    let s = ctx.structure()?;
    let fs = ctx.functions(&c.fns)?;
    let x = s.hamiltonian_vf(&fs)?;
    let components: BTreeMap<String, String> = ctx
        .chart
        .coordinates()
        .iter()
        .enumerate()
        .map(|(i, name)| (name.clone(), ctx.fmt(&x.component(i))))
        .collect();
    Ok(vec![
        result("field", format_element(x.as_element())),
        json!({ "name": "components", "value": components }),
    ])
}

fn fi_check(c: &Common) -> Result<(Vec<Json>, Vec<Verdict>)> {
    let ctx = Context::from_flags(c)?;
    let mut s = ctx.structure()?.clone();
    let report = s.verify_fi(&FiStrategy::with_seed(c.seed))?;
    let results = vec![
        result("strategy", report.strategy.clone()),
        result("f_tuples", report.f_tuples),
        result("comparisons", report.comparisons),
    ];
    let witness_json = |w: &crate::nambu::FiWitness| {
        json!({
            "f": w.fs.iter().map(|f| ctx.fmt(f)).collect::<Vec<_>>(),
            "g": w.gs.iter().map(|f| ctx.fmt(f)).collect::<Vec<_>>(),
            "residual": ctx.fmt(&w.residual),
            "lie_residual": ctx.fmt(&w.lie_residual),
        })
    };
    let mut fi = Verdict::new(
        "fundamental identity",
        matches!(s.fi_status(), FiStatus::Passed { .. }),
        if report.passed {
            format!("{} comparisons, residual 0 by both routes", report.comparisons)
        } else {
            "nonzero residual".to_string()
        },
    );
    if let Some(w) = &report.witness {
        fi = fi.with_witness(witness_json(w));
    }
    let mut agree = Verdict::new(
        "bracket and Lie routes agree",
        report.routes_agree,
        format!("{} pairwise comparisons", report.comparisons),
    );
    if let Some(w) = &report.disagreement {
        agree = agree.with_witness(witness_json(w));
    }
    Ok((results, vec![fi, agree]))
}

fn algebroid_check(c: &Common) -> Result<(Vec<Json>, Vec<Verdict>)> {
    let ctx = Context::from_flags(c)?;
    let s = ctx.structure()?;
    let samples = match &ctx.system {
        Some(sys) => algebroid_samples(sys)?,
        None => {
            let mut samples = AlgebroidSamples::standard(&ctx.chart, &[]);
            if !c.fns.is_empty() {
                samples.functions = ctx.functions(&c.fns)?;
            }
            samples
        }
    };
    let r = s.algebroid_axioms_check(&samples)?;
    let results = vec![
        json!({ "name": "sections", "value": samples.sections.iter().map(format_element).collect::<Vec<_>>() }),
        result("sampled_tuples", r.sampled_tuples),
    ];
    let witness = |w: &crate::nambu::AxiomWitness| {
        json!({
            "sections": w.sections.iter().map(format_element).collect::<Vec<_>>(),
            "function": w.function.as_ref().map(|f| ctx.fmt(f)),
            "residual": format_element(&w.residual),
        })
    };
    let mut a1 = Verdict::new(
        "anchor identity q([[X, Y]]) = [q(X), q(Y)]",
        r.axiom1_failures.is_empty(),
        format!("{} of {} checks nonzero", r.axiom1_failures.len(), r.axiom1_checks),
    );
    if let Some(w) = r.axiom1_failures.first() {
        a1 = a1.with_witness(witness(w));
    }
    let mut a2 = Verdict::new(
        "Leibniz rule in the last slot",
        r.axiom2_failures.is_empty(),
        format!("{} of {} checks nonzero", r.axiom2_failures.len(), r.axiom2_checks),
    );
    if let Some(w) = r.axiom2_failures.first() {
        a2 = a2.with_witness(witness(w));
    }
    Ok((results, vec![a1, a2]))
}

fn op_eval(c: &Common, op: &str, form: &str) -> Result<Vec<Json>> {
    let ctx = Context::from_flags(c)?;
    let d = parse_operator(op, &ctx.chart)?;
    let w = parse_form(form, &ctx.chart)?;
    Ok(vec![
        result("operator", d.to_string()),
        result("degree", d.degree()),
        result("value", format_element(&d.apply(&w)?)),
    ])
}

fn decompose(c: &Common, op: &str, n: usize) -> Result<(Vec<Json>, Vec<Verdict>)> {
    let ctx = Context::from_flags(c)?;
    let d = parse_operator(op, &ctx.chart)?;
    if d.degree() != 1 - n as i32 {
        return Err(Error::DegreeMismatch(format!(
            "order {n} needs degree {}, the operator has degree {}",
            1 - n as i32,
            d.degree()
        )));
    }
    let strategy = TestStrategy::with_seed(c.seed);
    let mut results = vec![result("operator", d.to_string())];
    let mut verdicts = Vec::new();
    let tensorial = is_tensorial(&d, &strategy)?;
    let rest = if tensorial.passed() {
        verdicts.push(Verdict::new("tensorial", true, strategy.describe()));
        d.clone()
    } else {
        match extract_top_multivector(&d, n, &strategy) {
            Ok(p) => {
                results.push(result("top_multivector", format_element(&p)));
                verdicts.push(Verdict::new("top symbol is a multivector", true, format_element(&p)));
                d.sub(&GradedOperator::lie_with_degree(&p, n)?)?
            }
            Err(e @ Error::TopSymbolNotMultivector(_)) => {
                verdicts.push(Verdict::new("top symbol is a multivector", false, e.to_string()));
                return Ok((results, verdicts));
            }
            Err(e) => return Err(e),
        }
    };
    match decompose_tensorial(&rest, n, &strategy) {
        Ok(dec) => {
            results.push(result("A", format_element(&dec.a)));
            results.push(result("Delta", GradedOperator::insert_mixed(&dec.delta).to_string()));
            verdicts.push(Verdict::new("tensorial part reconstructs", true, "i_A + i_Δ matches on generators"));
        }
        Err(e) => verdicts.push(Verdict::new("tensorial part reconstructs", false, e.to_string())),
    }
    Ok((results, verdicts))
}

fn integrate(c: &Common) -> Result<(Vec<Json>, Vec<Verdict>)> {
    let ctx = Context::from_flags(c)?;
    let s = ctx.structure()?;
    let hamiltonians = ctx.functions(&c.fns)?;
    let x0 = match (&c.init, &ctx.system) {
        (Some(t), _) => parse_floats(t)?,
        (None, Some(sys)) => sys.initial_state.clone(),
        (None, None) => return Err(Error::InvalidArgument("--init is required without --system".into())),
    };
    let dt = c.dt.unwrap_or(1e-3);
    let t_end = c.t_end.unwrap_or(1.0);
    let guards = ctx.system.as_ref().map(|s| s.guards.clone()).unwrap_or_default();
    let field = compile_numeric(&s.hamiltonian_vf(&hamiltonians)?, &ctx.bindings)?;
    let traj = rk4_integrate(&field, &x0, t_end, dt, &guards)?;
    let report = conservation_report(&traj, &ctx.chart, &hamiltonians, &ctx.bindings)?;
    let names: Vec<String> = match &ctx.system {
        Some(sys) if c.fns.is_empty() => sys.hamiltonian_names.iter().map(|s| s.to_string()).collect(),
        _ => report.drifts.iter().map(|d| d.integral.clone()).collect(),
    };
    let stride = (traj.len() / 100).max(1);
    let samples: Vec<Json> = (0..traj.len())
        .filter(|i| i % stride == 0 || *i + 1 == traj.len())
        .map(|i| json!({ "t": traj.times[i], "x": traj.states[i] }))
        .collect();
    let t_last = traj.times.last().copied().unwrap_or(0.0);
    let x_last = traj.last().to_vec();
    let mut results = vec![
        result("steps", traj.len().saturating_sub(1)),
        result("t_final", t_last),
        json!({ "name": "final_state", "value": ctx.chart.coordinates().iter().cloned().zip(x_last).collect::<BTreeMap<_, _>>() }),
        json!({ "name": "trajectory", "value": samples }),
    ];
    let mut verdicts = vec![Verdict::new(
        "integration completed",
        traj.aborted.is_none(),
        traj.aborted.clone().unwrap_or_else(|| format!("{} RK4 steps of {dt}", traj.len().saturating_sub(1))),
    )];
    for (d, name) in report.drifts.iter().zip(&names) {
        results.push(json!({ "name": format!("drift {name}"), "value": d.max_relative_drift }));
    }
    if ctx.system.as_ref().is_some_and(|s| s.name == "calogero") {
        let newton = newton_equivalence_check(&traj, 1)?;
        results.push(result("newton_max_relative_error", newton.max_relative_error));
        verdicts.push(Verdict::new(
            "r'' = 4/r^3",
            newton.max_relative_error <= 1e-4,
            format!("max relative error {:.3e}", newton.max_relative_error),
        ));
    }
    Ok((results, verdicts))
}

fn verify(c: &Common, criteria: &[u8]) -> Result<(Vec<Json>, Vec<Verdict>)> {
    if let Some(name) = &c.system {
        let sys = example_system(name)?;
        let checks = acceptance::run_system(&sys, c.seed)?;
        let verdicts = checks
            .into_iter()
            .map(|ch| Verdict::new(ch.name, ch.passed, ch.detail))
            .collect();
        return Ok((vec![result("system", sys.name)], verdicts));
    }
    let ids: Vec<u8> = if criteria.is_empty() {
        acceptance::CRITERIA.iter().map(|c| c.0).collect()
    } else {
        criteria.to_vec()
    };
    let mut results = Vec::new();
    let mut verdicts = Vec::new();
    for id in ids {
        let r = acceptance::run_criterion(id, c.seed)?;
        let timing = match r.budget_ms {
            Some(b) => format!("{:.1} ms of {b:.0} ms", r.elapsed_ms),
            None => format!("{:.1} ms", r.elapsed_ms),
        };
        results.push(json!({
            "name": format!("criterion {id} time"),
            "value": timing,
            "checks": r.checks,
        }));
        let failed: Vec<String> = r.failed_checks().map(|ch| format!("{}: {}", ch.name, ch.detail)).collect();
        verdicts.push(Verdict::new(
            format!("criterion {id}: {}", r.title),
            r.passed,
            if failed.is_empty() {
                format!("{} checks, {:.1} ms", r.checks.len(), r.elapsed_ms)
            } else {
                failed.join("; ")
            },
        ));
    }
    Ok((results, verdicts))
}

/// Parses `args`, runs the command and prints the report.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(report) => {
            if cli.common.json {
                println!("{}", serde_json::to_string_pretty(&report).expect("serializable report"));
            } else {
                print!("{}", report.to_text());
            }
            ExitCode::from(report.exit_code())
        }
        Err(e) => {
            let code = if is_usage_error(&e) { 2 } else { 1 };
            if cli.common.json {
                let report = json!({
                    "command": format!("{:?}", cli.command),
                    "error": e.to_string(),
                    "exit_code": code,
                });
                println!("{report}");
            }
            eprintln!("error: {e}");
            ExitCode::from(code)
        }
    }
}
