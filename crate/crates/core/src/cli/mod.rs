//! The `toda` command line.

pub mod config;
pub mod expr;
pub mod output;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::PathBuf;
use std::time::Instant;

use clap::{CommandFactory, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::characters::{character_binomial, character_product, character_resolution, printed_two_site};
use crate::dynamics::{em_residual, hamiltonian_flow};
use crate::lax::PhasePoint;
use crate::matrix::{matrix_element, norm};
use crate::poly::{QSeries, RPoly};
use crate::quantum::{baxter_residual, bs_quantize, solve_states};
use crate::spectral::{build_spectral, fourier_coefficient, period_matrix};
use crate::suites::{run_suite, SuiteOptions, SuiteReport, SUITES};
use crate::TodaError;

use output::{RunManifest, Sink};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

const WORKERS_ENV: &str = "TODA_WORKERS";

#[derive(Debug, Parser)]
#[command(name = "toda", version, about = "Periodic Toda chain: spectral curves, flows and Baxter Q-functions")]
pub struct Cli {
    /// Flat key=value file; command-line flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Directory for JSON/CSV results and the run manifest.
    #[arg(long, global = true, default_value = "toda-out")]
    pub out: PathBuf,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Branch points, period matrix and actions of a spectral curve.
    Periods(PeriodsArgs),
    /// Integrate a Hamiltonian flow and record the trajectory.
    Evolve(EvolveArgs),
    /// Bohr–Sommerfeld estimate of a two-site level.
    QuantizeBs(QuantizeBsArgs),
    /// Exact two-site levels and their Baxter residuals.
    QuantizeExact(QuantizeExactArgs),
    /// Sample the Baxter function of one level on a grid.
    Qfunction(QfunctionArgs),
    /// Deformed matrix element between two levels.
    MatrixElement(MatrixElementArgs),
    /// Run identity suites and report residuals.
    VerifyIdentities(VerifyArgs),
    /// Graded character of the separated coordinate ring.
    Characters(CharactersArgs),
    /// Fourier coefficient of a symmetric function on the real torus.
    Fourier(FourierArgs),
}

#[derive(Debug, clap::Args, Serialize)]
pub struct PeriodsArgs {
    /// Coefficients of the monic t(λ), constant term first.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "-3,0,1")]
    pub t: Vec<f64>,
}

#[derive(Debug, clap::Args, Serialize)]
pub struct EvolveArgs {
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0.7,-0.7")]
    pub p: Vec<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0.2,-0.1")]
    pub q: Vec<f64>,
    /// Flow index l in 1..n−1.
    #[arg(long, default_value_t = 1)]
    pub flow: usize,
    #[arg(long, default_value_t = 1.0)]
    pub duration: f64,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
}

#[derive(Debug, clap::Args, Serialize)]
pub struct QuantizeBsArgs {
    #[arg(long, default_value_t = 1.0)]
    pub hbar: f64,
    #[arg(long, default_value_t = 0)]
    pub nj: usize,
    /// Also solve the exact level n_j.
    #[arg(long)]
    pub compare: bool,
}

#[derive(Debug, clap::Args, Serialize)]
pub struct QuantizeExactArgs {
    #[arg(long, default_value_t = 1.0)]
    pub hbar: f64,
    #[arg(long, default_value_t = 6)]
    pub levels: usize,
}

#[derive(Debug, clap::Args, Serialize)]
pub struct QfunctionArgs {
    #[arg(long, default_value_t = 1.0)]
    pub hbar: f64,
    #[arg(long, default_value_t = 0)]
    pub level: usize,
    /// Real grid `start:stop:step`.
    #[arg(long, allow_hyphen_values = true, default_value = "-5:5:0.1")]
    pub grid: String,
}

#[derive(Debug, clap::Args, Serialize)]
pub struct MatrixElementArgs {
    #[arg(long, default_value_t = 1.0)]
    pub hbar: f64,
    /// Two level indices `m,m'`.
    #[arg(long, value_delimiter = ',', default_value = "0,1")]
    pub levels: Vec<usize>,
    /// Coefficients in γ (constant first) or an expression in b1.
    #[arg(long, allow_hyphen_values = true, default_value = "0,1")]
    pub poly: String,
}

#[derive(Debug, clap::Args, Serialize)]
pub struct VerifyArgs {
    /// One of the suite names, or `all`.
    #[arg(long, default_value = "all")]
    pub suite: String,
    #[arg(long)]
    pub genus: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    pub hbar: Option<Vec<f64>>,
    #[arg(long)]
    pub levels: Option<usize>,
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long)]
    pub order: Option<usize>,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Extra copy of the JSON report.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, clap::Args, Serialize)]
pub struct CharactersArgs {
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value_t = 20)]
    pub order: usize,
}

#[derive(Debug, clap::Args, Serialize)]
pub struct FourierArgs {
    /// Coefficients of the monic t(λ), constant term first.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "-3,0,1")]
    pub t: Vec<f64>,
    /// Mode vector, one entry per cycle.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "1")]
    pub k: Vec<i64>,
    /// Coefficients in γ (genus 1) or an expression in b1..b_g.
    #[arg(long, allow_hyphen_values = true, default_value = "0,1")]
    pub f: String,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Periods(_) => "periods",
            Command::Evolve(_) => "evolve",
            Command::QuantizeBs(_) => "quantize-bs",
            Command::QuantizeExact(_) => "quantize-exact",
            Command::Qfunction(_) => "qfunction",
            Command::MatrixElement(_) => "matrix-element",
            Command::VerifyIdentities(_) => "verify-identities",
            Command::Characters(_) => "characters",
            Command::Fourier(_) => "fourier",
        }
    }

    fn params(&self) -> Value {
        let v = match self {
            Command::Periods(a) => serde_json::to_value(a),
            Command::Evolve(a) => serde_json::to_value(a),
            Command::QuantizeBs(a) => serde_json::to_value(a),
            Command::QuantizeExact(a) => serde_json::to_value(a),
            Command::Qfunction(a) => serde_json::to_value(a),
            Command::MatrixElement(a) => serde_json::to_value(a),
            Command::VerifyIdentities(a) => serde_json::to_value(a),
            Command::Characters(a) => serde_json::to_value(a),
            Command::Fourier(a) => serde_json::to_value(a),
        };
        v.unwrap_or(Value::Null)
    }
}

/// Failure of a command, mapped to an exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(String),
}

impl From<TodaError> for CliError {
    fn from(e: TodaError) -> Self {
        match e {
            TodaError::InvalidInput(m) => CliError::Usage(m),
            other => CliError::Runtime(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

type CliResult<T> = Result<T, CliError>;

/// What a command reports back for the manifest.
struct Outcome {
    pass: bool,
    summary: String,
    tolerances: BTreeMap<String, f64>,
    seeds: BTreeMap<String, u64>,
}

impl Outcome {
    fn ok(summary: String) -> Self {
        Outcome { pass: true, summary, tolerances: BTreeMap::new(), seeds: BTreeMap::new() }
    }
}

/// Parse, merge the config file, dispatch and return the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => return clap_exit(e),
    };
    let cli = match &cli.config {
        None => cli,
        Some(path) => match merge_config(&argv, cli.command.name(), path) {
            Ok(merged) => match Cli::try_parse_from(&merged) {
                Ok(c) => c,
                Err(e) => return clap_exit(e),
            },
            Err(msg) => {
                eprintln!("error: {msg}");
                return EXIT_USAGE;
            }
        },
    };
    if let Err(msg) = configure_workers() {
        eprintln!("error: {msg}");
        return EXIT_USAGE;
    }
    match execute(&cli) {
        Ok(true) => EXIT_PASS,
        Ok(false) => EXIT_FAIL,
        Err(CliError::Usage(m)) => {
            eprintln!("error: {m}");
            EXIT_USAGE
        }
        Err(CliError::Runtime(m)) => {
            eprintln!("error: {m}");
            EXIT_FAIL
        }
    }
}

fn clap_exit(e: clap::Error) -> i32 {
    let _ = e.print();
    match e.kind() {
        clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_PASS,
        _ => EXIT_USAGE,
    }
}

fn configure_workers() -> Result<(), String> {
    let Ok(v) = std::env::var(WORKERS_ENV) else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| format!("{WORKERS_ENV} must be a positive integer, got '{v}'"))?;
    // a pool already built in this process keeps its size
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Append config entries not already given on the command line.
fn merge_config(argv: &[OsString], sub: &str, path: &std::path::Path) -> Result<Vec<OsString>, String> {
    let entries = config::load_config(path).map_err(|e| format!("config {}: {e}", path.display()))?;
    let root = Cli::command();
    let subcmd = root.find_subcommand(sub).expect("parsed subcommand exists");
    let given = |key: &str| {
        let flag = format!("--{key}");
        argv.iter().any(|a| {
            let a = a.to_string_lossy();
            a == flag || a.starts_with(&format!("{flag}="))
        })
    };
    let mut out = argv.to_vec();
    for e in entries {
        if e.key == "config" {
            return Err(format!("config {}: line {}: nested config files are not supported", path.display(), e.line));
        }
        let arg = subcmd
            .get_arguments()
            .chain(root.get_arguments())
            .find(|a| a.get_long() == Some(e.key.as_str()))
            .ok_or_else(|| format!("config {}: line {}: unknown key '{}' for {sub}", path.display(), e.line, e.key))?;
        if given(&e.key) {
            continue;
        }
        if arg.get_action().takes_values() {
            out.push(format!("--{}={}", e.key, e.value).into());
        } else {
            match e.value.as_str() {
                "true" => out.push(format!("--{}", e.key).into()),
                "false" => {}
                v => {
                    return Err(format!("config {}: line {}: '{}' expects true or false, got '{v}'", path.display(), e.line, e.key))
                }
            }
        }
    }
    Ok(out)
}

fn execute(cli: &Cli) -> CliResult<bool> {
    let start = Instant::now();
    let name = cli.command.name();
    let mut sink = Sink::new(&cli.out, name)?;
    let outcome = match &cli.command {
        Command::Periods(a) => periods(a, &mut sink)?,
        Command::Evolve(a) => evolve(a, &mut sink)?,
        Command::QuantizeBs(a) => quantize_bs(a, &mut sink)?,
        Command::QuantizeExact(a) => quantize_exact(a, &mut sink)?,
        Command::Qfunction(a) => qfunction(a, &mut sink)?,
        Command::MatrixElement(a) => matrix_elem(a, &mut sink)?,
        Command::VerifyIdentities(a) => verify(a, &mut sink)?,
        Command::Characters(a) => characters(a, &mut sink)?,
        Command::Fourier(a) => fourier(a, &mut sink)?,
    };
    let mut params: BTreeMap<String, Value> = match cli.command.params() {
        Value::Object(m) => m.into_iter().collect(),
        _ => BTreeMap::new(),
    };
    params.insert("out".into(), json!(cli.out.display().to_string()));
    let mut versions = BTreeMap::new();
    versions.insert("toda-core".to_string(), env!("CARGO_PKG_VERSION").to_string());
    versions.insert("threads".to_string(), rayon::current_num_threads().to_string());
    let manifest = RunManifest {
        command: name.to_string(),
        params,
        tolerances: outcome.tolerances,
        seeds: outcome.seeds,
        versions,
        wall_clock_seconds: start.elapsed().as_secs_f64(),
        pass: outcome.pass,
        summary: outcome.summary.clone(),
        outputs: sink.outputs().to_vec(),
    };
    let mpath = sink.manifest(&manifest)?;
    sink.replay_config(&output::params_to_config(&manifest.params))?;
    println!("{}", outcome.summary);
    println!("results: {}  manifest: {}", cli.out.display(), mpath.display());
    Ok(outcome.pass)
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn periods(a: &PeriodsArgs, sink: &mut Sink) -> CliResult<Outcome> {
    let s = build_spectral(&RPoly::new(a.t.clone()))?;
    let per = period_matrix(&s)?;
    sink.json(&json!({
        "t": a.t,
        "genus": s.genus,
        "branch_points": s.branch,
        "raw_periods": per.raw,
        "frequency_matrix": per.a,
        "actions": per.actions,
        "normalization": per.normalization(),
    }))?;
    let mut text = format!("genus {}\nbranch points {:?}\nactions {:?}", s.genus, s.branch, per.actions);
    for (k, row) in per.a.iter().enumerate() {
        text.push_str(&format!("\nA[{k}] {row:?}"));
    }
    Ok(Outcome::ok(text))
}

fn evolve(a: &EvolveArgs, sink: &mut Sink) -> CliResult<Outcome> {
    let x = PhasePoint::new(a.p.clone(), a.q.clone())?;
    let n = x.n();
    let traj = hamiltonian_flow(&x, a.flow, a.duration, a.samples, a.tol)?;
    let mut header = vec!["tau".to_string()];
    header.extend((1..=n).map(|i| format!("p{i}")));
    header.extend((1..=n).map(|i| format!("q{i}")));
    header.extend((1..n).map(|j| format!("gamma{j}")));
    header.extend((0..=n).map(|k| format!("t_coeff{k}")));
    let rows: Vec<Vec<f64>> = (0..traj.times.len())
        .map(|i| {
            let mut r = vec![traj.times[i]];
            r.extend(&traj.points[i].p);
            r.extend(&traj.points[i].q);
            r.extend(&traj.sov[i].gamma);
            r.extend(&traj.t[i]);
            r
        })
        .collect();
    sink.csv(&header, &rows)?;
    let conservation = traj.conservation_error();
    let em = if a.samples >= 2 && a.duration != 0.0 { Some(em_residual(&traj, 2e-3, a.tol)?) } else { None };
    sink.json(&json!({
        "n": n,
        "flow": a.flow,
        "samples": traj.times.len(),
        "conservation_error": conservation,
        "em": em,
    }))?;
    let mut text = format!("n={n} flow {} tau in [0, {}]: conservation error {conservation:.3e}", a.flow, a.duration);
    if let Some(e) = &em {
        text.push_str(&format!(", em residual {:.3e} (order {:.2})", e.residual_h2, e.order));
    }
    Ok(Outcome::ok(text))
}

fn quantize_bs(a: &QuantizeBsArgs, sink: &mut Sink) -> CliResult<Outcome> {
    let bs = bs_quantize(a.hbar, a.nj)?;
    let exact = if a.compare { Some(solve_states(a.hbar, a.nj + 1)?[a.nj].energy) } else { None };
    sink.json(&json!({ "estimate": bs, "exact_energy": exact }))?;
    let mut text = format!("hbar={} n_j={}: E_BS = {:.12}, t2 = {:.12}", a.hbar, a.nj, bs.energy, bs.t2);
    if let Some(e) = exact {
        text.push_str(&format!(", E_exact = {e:.12}, difference {:.3e}", bs.energy - e));
    }
    Ok(Outcome::ok(text))
}

fn quantize_exact(a: &QuantizeExactArgs, sink: &mut Sink) -> CliResult<Outcome> {
    let qs = solve_states(a.hbar, a.levels)?;
    let mut rows = Vec::new();
    let mut text = format!("hbar={}", a.hbar);
    for q in &qs {
        let r = baxter_residual(q)?;
        rows.push(json!({
            "level": q.level,
            "energy": q.energy,
            "t2": q.t.coeff(0),
            "parity": q.parity,
            "baxter_residual": r,
        }));
        text.push_str(&format!("\n  level {:2}  E = {:.12}  t2 = {:+.12}  residual {r:.2e}", q.level, q.energy, q.t.coeff(0)));
    }
    sink.json(&json!({ "hbar": a.hbar, "levels": rows }))?;
    Ok(Outcome::ok(text))
}

/// `start:stop:step` to grid points, stop included when hit.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<f64> = s
        .split(':')
        .map(|t| t.trim().parse::<f64>().map_err(|_| format!("grid: not a number '{t}'")))
        .collect::<Result<_, _>>()?;
    let [a, b, h] = parts[..] else {
        return Err(format!("grid must be start:stop:step, got '{s}'"));
    };
    if !(h > 0.0) || !(b >= a) || !a.is_finite() || !b.is_finite() {
        return Err(format!("grid needs start <= stop and step > 0, got '{s}'"));
    }
    let n = ((b - a) / h + 1e-9).floor() as usize;
    if n > 10_000_000 {
        return Err("grid has too many points".into());
    }
    Ok((0..=n).map(|i| a + h * i as f64).collect())
}

fn qfunction(a: &QfunctionArgs, sink: &mut Sink) -> CliResult<Outcome> {
    let grid = parse_grid(&a.grid).map_err(usage)?;
    let qs = solve_states(a.hbar, a.level + 1)?;
    let q = &qs[a.level];
    let header: Vec<String> = ["gamma", "phi", "log_abs_q", "sign_q"].iter().map(|s| s.to_string()).collect();
    let rows: Vec<Vec<f64>> = grid
        .iter()
        .map(|&g| {
            let lq = q.log_q(num_complex::Complex64::new(g, 0.0))?;
            let sign = if lq.im.cos() < 0.0 { -1.0 } else { 1.0 };
            Ok(vec![g, q.phi_re(g), lq.re, sign])
        })
        .collect::<crate::Result<_>>()?;
    sink.csv(&header, &rows)?;
    let r = baxter_residual(q)?;
    sink.json(&json!({
        "hbar": a.hbar,
        "level": a.level,
        "energy": q.energy,
        "parity": q.parity,
        "t": q.t,
        "baxter_residual": r,
        "points": rows.len(),
    }))?;
    Ok(Outcome::ok(format!(
        "hbar={} level {}: E = {:.12}, Baxter residual {r:.2e}, {} grid points",
        a.hbar,
        a.level,
        q.energy,
        rows.len()
    )))
}

fn matrix_elem(a: &MatrixElementArgs, sink: &mut Sink) -> CliResult<Outcome> {
    let [m, mp] = a.levels[..] else {
        return Err(usage("--levels takes two indices m,m'"));
    };
    let f = expr::parse_symmetric(&a.poly, 1).map_err(|e| usage(format!("--poly: {e}")))?;
    let qs = solve_states(a.hbar, m.max(mp) + 1)?;
    let (qa, qb) = (&qs[m], &qs[mp]);
    let d = matrix_element(qa, qb, &f)?;
    let nn = (norm(qa)? * norm(qb)?).sqrt();
    let v = d.value();
    sink.json(&json!({
        "hbar": a.hbar,
        "levels": [m, mp],
        "value": [v.re, v.im],
        "normalized": [v.re / nn, v.im / nn],
        "scale": d.scale,
        "window_change": d.window_change,
    }))?;
    Ok(Outcome::ok(format!(
        "<{m}|F|{mp}> at hbar={}: {:.12e} {:+.12e}i (normalized {:.12e}), window change {:.1e}",
        a.hbar,
        v.re,
        v.im,
        v.norm() / nn,
        d.window_change
    )))
}

fn suite_table(r: &SuiteReport) -> String {
    let mut s = format!("suite {}: {}", r.suite, if r.pass() { "PASS" } else { "FAIL" });
    for row in &r.rows {
        let bound = match row.bound {
            crate::suites::Bound::Below => format!("< {:.1e}", row.tolerance),
            crate::suites::Bound::Above => format!(">= {:.1e}", row.tolerance),
            crate::suites::Bound::Between { upper } => format!("in [{}, {}]", row.tolerance, upper),
            crate::suites::Bound::Exact => "= 0".to_string(),
        };
        s.push_str(&format!(
            "\n  {:4}  {:32} {:>11.3e} {:12} {}",
            if row.pass { "ok" } else { "FAIL" },
            row.identity,
            row.residual,
            bound,
            row.inputs
        ));
    }
    s
}

fn verify(a: &VerifyArgs, sink: &mut Sink) -> CliResult<Outcome> {
    let names: Vec<&str> = if a.suite == "all" {
        SUITES.to_vec()
    } else if SUITES.contains(&a.suite.as_str()) {
        vec![a.suite.as_str()]
    } else {
        return Err(usage(format!("unknown suite '{}'; expected all or one of {}", a.suite, SUITES.join(", "))));
    };
    let opts = SuiteOptions {
        seed: a.seed,
        genus: a.genus,
        hbar: a.hbar.clone(),
        levels: a.levels,
        points: a.points,
        order: a.order,
    };
    let mut reports = Vec::new();
    for n in names {
        reports.push(run_suite(n, &opts)?);
    }
    let pass = reports.iter().all(SuiteReport::pass);
    let body = json!({ "pass": pass, "suites": reports });
    let p = sink.json(&body)?;
    if let Some(extra) = &a.report {
        std::fs::copy(&p, extra)?;
    }
    let mut tolerances = BTreeMap::new();
    for r in &reports {
        for row in &r.rows {
            tolerances.insert(format!("{}: {}", r.suite, row.identity), row.tolerance);
        }
    }
    let mut seeds = BTreeMap::new();
    seeds.insert("seed".to_string(), a.seed);
    let summary = reports.iter().map(suite_table).collect::<Vec<_>>().join("\n");
    Ok(Outcome { pass, summary, tolerances, seeds })
}

fn series_text(s: &QSeries, terms: usize) -> String {
    let mut parts = Vec::new();
    for (k, c) in s.coeffs().iter().enumerate().take(terms) {
        if num_traits::Zero::is_zero(c) {
            continue;
        }
        parts.push(match k {
            0 => c.to_string(),
            1 => format!("{c} q"),
            _ => format!("{c} q^{k}"),
        });
    }
    let tail = if s.order() + 1 > terms { " + …" } else { "" };
    format!("{}{tail}", parts.join(" + "))
}

fn characters(a: &CharactersArgs, sink: &mut Sink) -> CliResult<Outcome> {
    let p = character_product(a.n, a.order)?;
    let b = character_binomial(a.n, a.order)?;
    let r = character_resolution(a.n, a.order)?;
    let agree = p == b && p == r;
    let printed = (a.n == 2).then(|| printed_two_site(a.order) == p.chi);
    sink.json(&json!({
        "n": a.n,
        "order": a.order,
        "product": p,
        "binomial": b,
        "resolution": r,
        "forms_agree": agree,
        "admissible": p.is_admissible(),
        "equals_printed_two_site": printed,
    }))?;
    let mut text = format!("chi_{}(q) = {}\nproduct, binomial and resolution forms agree to q^{}: {}",
        a.n, series_text(&p.chi, 12), a.order, if agree { "yes" } else { "NO" });
    if let Some(eq) = printed {
        text.push_str(&format!("\nequals (1+q^2)/[2]!: {}", if eq { "yes" } else { "no" }));
    }
    let mut o = Outcome::ok(text);
    o.pass = agree;
    Ok(o)
}

fn fourier(a: &FourierArgs, sink: &mut Sink) -> CliResult<Outcome> {
    let s = build_spectral(&RPoly::new(a.t.clone()))?;
    if a.k.len() != s.genus {
        return Err(usage(format!("--k needs {} entries for genus {}", s.genus, s.genus)));
    }
    let f = expr::parse_symmetric(&a.f, s.genus).map_err(|e| usage(format!("--f: {e}")))?;
    let per = period_matrix(&s)?;
    let c = fourier_coefficient(&s, &per, &f, &a.k)?;
    sink.json(&json!({ "t": a.t, "k": a.k, "coefficient": [c.re, c.im], "abs": c.norm() }))?;
    Ok(Outcome::ok(format!("F_k for k = {:?}: {:.12e} {:+.12e}i", a.k, c.re, c.im)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_parsing() {
        assert_eq!(parse_grid("0:1:0.5").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_grid("-1:-1:1").unwrap(), vec![-1.0]);
        assert!(parse_grid("0:1").is_err());
        assert!(parse_grid("1:0:0.1").is_err());
        assert!(parse_grid("0:1:0").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn command_names_match_clap() {
        let root = Cli::command();
        for name in [
            "periods",
            "evolve",
            "quantize-bs",
            "quantize-exact",
            "qfunction",
            "matrix-element",
            "verify-identities",
            "characters",
            "fourier",
        ] {
            assert!(root.find_subcommand(name).is_some(), "{name}");
        }
    }
}
