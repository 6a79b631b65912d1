use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qutrit_inv::counting::{self, CountReport, QUARTIC_GRADINGS};
use qutrit_inv::lsl_qutrit::{build_algebra, c3_expansion_check, eval_c3, eval_c6, triality_residual, AlgebraCertificate};
use qutrit_inv::lu_invariants::eval_all;
use qutrit_inv::monotones::{run_trials, scalar_inequality_scan, Ensemble, Functional, ScanReport, TrialReport};
use qutrit_inv::qubit::{eval_q, q2_expansion, q4_expansion, q4tilde_expansion_check, QubitInvariants};
use qutrit_inv::states::{load_state, random_local_sl_with, random_state_with, trial_rng, BipartiteState, Physicality};
use qutrit_inv::tensors::{cyclic_identity_check, det_from_dtilde, qutrit, CyclicResiduals, DTILDE_DET_RATIO};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

const EXIT_INPUT: u8 = 2;
const EXIT_VIOLATION: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "qutrit-inv", version, about = "Polynomial invariants of two-qutrit and two-qubit mixed states")]
struct Cli {
    /// Master seed for every randomized suite
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Number of random trials (suite-specific default)
    #[arg(long, global = true)]
    trials: Option<u64>,
    /// Override the suite tolerance
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Worker threads (defaults to all cores)
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Write the JSON report to this path
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Print JSON on standard output instead of a table
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate every invariant of a state file
    Invariants { file: PathBuf },
    /// Tabulate invariant counts
    Count(CountArgs),
    /// Run an identity or property suite
    Verify {
        suite: Suite,
        /// Sampling ensemble for the monotone suite
        #[arg(long, value_enum, default_value = "haar")]
        ensemble: EnsembleArg,
    },
}

#[derive(Args, Debug)]
struct CountArgs {
    family: Family,
    /// Local dimension D
    #[arg(long, default_value_t = 3)]
    dim: u32,
    /// Largest degree
    #[arg(long)]
    max: Option<u32>,
    /// Multidegree in (r, rbar, R), e.g. 004
    #[arg(long)]
    pqs: Option<String>,
    /// Number of parties for pure-state counts
    #[arg(long, default_value_t = 4)]
    parties: usize,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Family {
    Lu,
    Lsl,
    Graded,
    Pure,
}

#[derive(Clone, Copy, Debug, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum Suite {
    Tensors,
    Algebra,
    Expansion,
    Monotone,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum EnsembleArg {
    Haar,
    Aligned,
}

impl From<EnsembleArg> for Ensemble {
    fn from(e: EnsembleArg) -> Self {
        match e {
            EnsembleArg::Haar => Ensemble::Haar,
            EnsembleArg::Aligned => Ensemble::Aligned,
        }
    }
}

enum Failure {
    Input(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Input(e.to_string())
    }
}

/// A finished run: the JSON body, a human-readable table and whether all checks passed.
struct Run {
    body: Value,
    table: String,
    passed: bool,
    trials: Option<u64>,
    tolerance: Option<f64>,
}

#[derive(Serialize)]
struct Envelope<'a> {
    command: &'a str,
    seed: u64,
    trials: Option<u64>,
    tolerance: Option<f64>,
    passed: bool,
    result: &'a Value,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_INPUT);
        }
    }
    let (name, result) = match &cli.command {
        Command::Invariants { file } => ("invariants", cmd_invariants(file)),
        Command::Count(args) => ("count", cmd_count(args)),
        Command::Verify { suite, ensemble } => ("verify", cmd_verify(*suite, (*ensemble).into(), &cli)),
    };
    let run = match result {
        Ok(run) => run,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_INPUT);
        }
    };
    let envelope = Envelope {
        command: name,
        seed: cli.seed,
        trials: run.trials,
        tolerance: run.tolerance,
        passed: run.passed,
        result: &run.body,
    };
    let text = serde_json::to_string_pretty(&envelope).expect("JSON values serialize") + "\n";
    if let Some(path) = &cli.out {
        if let Err(e) = std::fs::write(path, &text) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return ExitCode::from(EXIT_INPUT);
        }
    }
    if cli.json {
        print!("{text}");
    } else {
        print!("{}", run.table);
    }
    if run.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_VIOLATION)
    }
}

fn fmt_row(label: &str, value: impl std::fmt::Display) -> String {
    format!("{label:<24} {value}\n")
}

fn cmd_invariants(file: &Path) -> Result<Run, Failure> {
    let state = load_state(file)?;
    let diag = state.diagnostics();
    if !diag.physical {
        eprintln!(
            "warning: state is not physical (trace {:.6}, min eigenvalue {:.3e}); evaluating anyway",
            diag.trace, diag.min_eigenvalue
        );
    }
    let mut table = String::new();
    let body = match (state.dim_a(), state.dim_b()) {
        (3, 3) => qutrit_report(&state, &diag, &mut table)?,
        (2, 2) => qubit_report(&state, &diag, &mut table)?,
        (a, b) => return Err(Failure::Input(format!("no invariant set for a {a}x{b} system; use 3x3 or 2x2"))),
    };
    table += &fmt_row("physical", diag.physical);
    Ok(Run { body, table, passed: diag.physical, trials: None, tolerance: None })
}

fn monotone_values(state: &BipartiteState, fs: &[Functional]) -> Result<BTreeMap<&'static str, f64>, Failure> {
    fs.iter().map(|f| Ok((f.name(), f.eval(state.coords())?))).collect()
}

fn qutrit_report(state: &BipartiteState, diag: &Physicality, table: &mut String) -> Result<Value, Failure> {
    let lu = eval_all(state.coords())?;
    let (c3, c6) = (eval_c3(state.coords())?, eval_c6(state.coords())?);
    let mono = monotone_values(state, &[Functional::C3, Functional::C6])?;
    for (k, v) in &lu.values {
        *table += &fmt_row(k, format!("{v:.12e}"));
    }
    *table += &fmt_row("C3", format!("{c3:.12e}"));
    *table += &fmt_row("C6", format!("{c6:.12e}"));
    for (k, v) in &mono {
        *table += &fmt_row(k, format!("{v:.12e}"));
    }
    Ok(json!({
        "dims": [3, 3],
        "lu_invariants": lu.values,
        "c3": c3,
        "c6": c6,
        "monotones": mono,
        "diagnostics": diag,
    }))
}

fn qubit_report(state: &BipartiteState, diag: &Physicality, table: &mut String) -> Result<Value, Failure> {
    let q: QubitInvariants = eval_q(state.coords())?;
    let mono = monotone_values(state, &[Functional::Q2, Functional::Q4, Functional::Q4Tilde, Functional::Q6])?;
    for (k, v) in [("Q2", q.q2), ("Q4", q.q4), ("Q6", q.q6), ("Q8", q.q8), ("Q4~", q.q4_tilde), ("det rho", q.det_rho)] {
        *table += &fmt_row(k, format!("{v:.12e}"));
    }
    for (k, v) in &mono {
        *table += &fmt_row(k, format!("{v:.12e}"));
    }
    Ok(json!({
        "dims": [2, 2],
        "qubit_invariants": q,
        "monotones": mono,
        "diagnostics": diag,
    }))
}

fn parse_pqs(s: &str) -> Result<[u32; 3], Failure> {
    let digits: Vec<u32> = s.chars().filter_map(|ch| ch.to_digit(10)).collect();
    if digits.len() != 3 || s.chars().any(|ch| !ch.is_ascii_digit()) {
        return Err(Failure::Input(format!("--pqs expects three digits such as 004, got {s:?}")));
    }
    Ok([digits[0], digits[1], digits[2]])
}

fn cmd_count(args: &CountArgs) -> Result<Run, Failure> {
    let rows: Vec<(String, CountReport)> = match args.family {
        Family::Lu => {
            let max = args.max.unwrap_or(5);
            (0..=max).map(|n| Ok((n.to_string(), counting::count_lu_mixed(args.dim, n)?))).collect::<Result<_, Failure>>()?
        }
        Family::Lsl => {
            let max = args.max.unwrap_or(12);
            (0..=max).map(|n| Ok((n.to_string(), counting::count_lsl(args.dim, n)?))).collect::<Result<_, Failure>>()?
        }
        Family::Pure => {
            let max = args.max.unwrap_or(12);
            (0..=max)
                .map(|n| Ok((n.to_string(), counting::count_lu_pure(args.parties, args.dim, n)?)))
                .collect::<Result<_, Failure>>()?
        }
        Family::Graded => {
            let gradings = match &args.pqs {
                Some(s) => vec![parse_pqs(s)?],
                None => QUARTIC_GRADINGS.to_vec(),
            };
            gradings
                .into_iter()
                .map(|[p, q, s]| Ok((format!("{p}{q}{s}"), counting::count_graded_quartics(p, q, s)?)))
                .collect::<Result<_, Failure>>()?
        }
    };
    let key = if matches!(args.family, Family::Graded) { "pqs" } else { "degree" };
    let mut table = format!("{key:<8} {:>8}  method\n", "count");
    for (k, r) in &rows {
        let flag = if r.conjecture { "  CONJECTURE" } else { "" };
        table += &format!("{k:<8} {:>8}  {}{flag}\n", r.count, r.method);
    }
    let body = json!({
        "family": format!("{:?}", args.family).to_lowercase(),
        "dim": args.dim,
        "rows": rows.iter().map(|(k, r)| json!({ key: k, "count": r.count, "method": r.method, "conjecture": r.conjecture })).collect::<Vec<_>>(),
    });
    Ok(Run { body, table, passed: true, trials: None, tolerance: None })
}

fn cmd_verify(suite: Suite, ensemble: Ensemble, cli: &Cli) -> Result<Run, Failure> {
    match suite {
        Suite::Tensors => verify_tensors(cli),
        Suite::Algebra => verify_algebra(cli),
        Suite::Expansion => verify_expansion(cli),
        Suite::Monotone => verify_monotone(cli, ensemble),
    }
}

#[derive(Serialize)]
struct TensorCertificate {
    cyclic: CyclicResiduals,
    /// `max |d̃ r r r − (3/2) Det ϱ|` over random coordinate vectors.
    dtilde_det_residual: f64,
    worst_trial: u64,
}

fn verify_tensors(cli: &Cli) -> Result<Run, Failure> {
    let (trials, tol) = (cli.trials.unwrap_or(1000), cli.tol.unwrap_or(1e-12));
    let cyclic = cyclic_identity_check(qutrit())?;
    let residuals: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = trial_rng(cli.seed, i);
            let coords: [f64; 9] = std::array::from_fn(|_| rng.random_range(-1.0..1.0));
            let (cubic, det) = det_from_dtilde(&coords);
            (cubic - DTILDE_DET_RATIO * det).abs()
        })
        .collect();
    let (worst_trial, det_res) = worst(&residuals);
    let cert = TensorCertificate { cyclic, dtilde_det_residual: det_res, worst_trial };
    let passed = cert.cyclic.max() <= tol && det_res <= tol;
    let table = fmt_row("cyclic df", format!("{:.3e}", cert.cyclic.df))
        + &fmt_row("cyclic ff", format!("{:.3e}", cert.cyclic.ff))
        + &fmt_row("cyclic dd", format!("{:.3e}", cert.cyclic.dd))
        + &fmt_row("dtilde vs det", format!("{det_res:.3e} (trial {worst_trial})"))
        + &fmt_row("passed", passed);
    Ok(Run { body: serde_json::to_value(&cert)?, table, passed, trials: Some(trials), tolerance: Some(tol) })
}

fn worst(values: &[f64]) -> (u64, f64) {
    values
        .iter()
        .enumerate()
        .fold((0, 0.0), |(bi, bv), (i, &v)| if v > bv { (i as u64, v) } else { (bi, bv) })
}

#[derive(Serialize)]
struct AlgebraReport {
    certificate: AlgebraCertificate,
    triality_residual: f64,
    worst_trial: u64,
}

fn verify_algebra(cli: &Cli) -> Result<Run, Failure> {
    let (trials, tol) = (cli.trials.unwrap_or(100), cli.tol.unwrap_or(1e-12));
    let (_, certificate) = build_algebra();
    let residuals: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|i| triality_residual(&random_local_sl_with(3, &mut trial_rng(cli.seed, i))?))
        .collect::<Result<_, _>>()?;
    let (worst_trial, tri) = worst(&residuals);
    let passed = certificate.passes(tol) && tri <= tol;
    let table = fmt_row("span rank", certificate.span_rank)
        + &fmt_row("preservation", format!("{:.3e}", certificate.preservation_residual))
        + &fmt_row("commutators", format!("{:.3e}", certificate.commutator_residual))
        + &fmt_row("derivative F scale", format!("{:.12}", certificate.derivative_scale_f))
        + &fmt_row("derivative D scale", format!("{:.12}", certificate.derivative_scale_d))
        + &fmt_row("triality", format!("{tri:.3e} (trial {worst_trial})"))
        + &fmt_row("passed", passed);
    let report = AlgebraReport { certificate, triality_residual: tri, worst_trial };
    Ok(Run { body: serde_json::to_value(&report)?, table, passed, trials: Some(trials), tolerance: Some(tol) })
}

fn verify_expansion(cli: &Cli) -> Result<Run, Failure> {
    let (trials, tol) = (cli.trials.unwrap_or(1000), cli.tol.unwrap_or(1e-10));
    let rows: Vec<[f64; 4]> = (0..trials)
        .into_par_iter()
        .map(|i| -> qutrit_inv::Result<[f64; 4]> {
            let mut rng = trial_rng(cli.seed, i);
            let s3 = random_state_with(3, 3, &mut rng)?;
            let s2 = random_state_with(2, 2, &mut rng)?;
            let co = s2.coords();
            let q = eval_q(co)?;
            Ok([
                c3_expansion_check(&s3)?,
                (q.q2 - q2_expansion(co)?).abs(),
                (q.q4 - q4_expansion(co)?).abs(),
                q4tilde_expansion_check(co)?,
            ])
        })
        .collect::<Result<_, _>>()?;
    let names = ["c3", "q2", "q4", "q4_tilde"];
    let mut body = serde_json::Map::new();
    let mut table = String::new();
    let mut passed = true;
    for (k, name) in names.iter().enumerate() {
        let col: Vec<f64> = rows.iter().map(|r| r[k]).collect();
        let (trial, max) = worst(&col);
        passed &= max <= tol;
        body.insert(name.to_string(), json!({ "max_residual": max, "worst_trial": trial }));
        table += &fmt_row(&format!("{name} expansion"), format!("{max:.3e} (trial {trial})"));
    }
    table += &fmt_row("passed", passed);
    Ok(Run { body: Value::Object(body), table, passed, trials: Some(trials), tolerance: Some(tol) })
}

#[derive(Serialize)]
struct MonotoneReport {
    c3: TrialReport,
    c6: TrialReport,
    scan: ScanReport,
    /// Raw `|C₃|` on the aligned ensemble; must produce violations.
    control: TrialReport,
}

fn trial_row(r: &TrialReport) -> String {
    format!(
        "min margin {:.3e}, {} violations, {} skipped, ensemble {:?}",
        r.min_margin,
        r.violations.len(),
        r.skipped,
        r.ensemble
    )
}

fn verify_monotone(cli: &Cli, ensemble: Ensemble) -> Result<Run, Failure> {
    let (trials, tol) = (cli.trials.unwrap_or(10_000), cli.tol.unwrap_or(1e-9));
    let report = MonotoneReport {
        c3: run_trials(Functional::C3, ensemble, cli.seed, trials, tol)?,
        c6: run_trials(Functional::C6, ensemble, cli.seed, trials, tol)?,
        scan: scalar_inequality_scan(100, 100_000, cli.seed)?,
        control: run_trials(Functional::RawC3, Ensemble::Aligned, cli.seed, trials, tol)?,
    };
    let scan_ok = report.scan.passes(1e-12);
    let control_ok = !report.control.violations.is_empty();
    let passed = report.c3.passes() && report.c6.passes() && scan_ok && control_ok;
    let table = fmt_row(Functional::C3.name(), trial_row(&report.c3))
        + &fmt_row(Functional::C6.name(), trial_row(&report.c6))
        + &fmt_row(
            "scalar inequality",
            format!("max {:.3e}, boundary {:.3e}", report.scan.max_violation, report.scan.boundary_max_violation),
        )
        + &fmt_row("raw |C3| control", trial_row(&report.control))
        + &fmt_row("passed", passed);
    Ok(Run { body: serde_json::to_value(&report)?, table, passed, trials: Some(trials), tolerance: Some(tol) })
}
