use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use qlpair_core::canonical::{canonicalize, Transformation};
use qlpair_core::conditions::{check_theorem, ConditionReport, PencilMode, Verdict};
use qlpair_core::exact::FieldScalar;
use qlpair_core::reduction::reduce_to_dim4;
use qlpair_core::search;

use crate::error::{exit, CliError};
use crate::expr::{parse_scalar, Grammar};
use crate::format::{fmt_g12, fmt_matrix, scan_csv};
use crate::spec::{emit_pair, load_pair, LoadedPair};

/// Default seed of the reduction search.
pub const DEFAULT_SEED: u64 = 0;

const CALIBRATION_NOTE: &str =
    "# no rate of density is known; numeric thresholds used with these reports are pilot-calibrated";

#[derive(Debug, Parser)]
#[command(name = "qlpair", version, about = "Experiments with pairs of a quadratic and a linear form")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Pair file (JSON).
    pub file: PathBuf,
    /// Print one JSON object instead of the text report.
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Mode {
    Exact,
    Heuristic,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Canonical label of the pair with a witness transformation.
    Canonicalize {
        #[command(flatten)]
        common: Common,
    },
    /// Check the hypotheses of the density theorem and of the conjecture.
    Check {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "exact")]
        mode: Mode,
        /// Working precision of heuristic mode.
        #[arg(long)]
        digits: Option<u32>,
        /// Largest denominator accepted by heuristic mode.
        #[arg(long, default_value_t = 1_000_000)]
        max_denominator: u64,
    },
    /// Best primitive x for a target (a, b) in the max metric.
    Approximate {
        #[command(flatten)]
        common: Common,
        /// Target as `a,b`; rationals such as `1/3` are accepted.
        #[arg(long, allow_hyphen_values = true)]
        target: String,
        #[arg(long)]
        bound: i64,
        #[arg(long)]
        shards: Option<usize>,
    },
    /// Per-cell best errors on a grid of targets, written as CSV.
    Scan {
        #[command(flatten)]
        common: Common,
        /// `a_min,a_max,b_min,b_max`.
        #[arg(long, allow_hyphen_values = true)]
        rect: String,
        /// `na,nb`.
        #[arg(long)]
        grid: String,
        #[arg(long)]
        bound: i64,
        #[arg(long)]
        eps: f64,
        /// CSV destination; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        shards: Option<usize>,
    },
    /// Exact minimum of max(|Q(x)|, |L(x)|) over primitive x in a box.
    Gap {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        bound: i64,
        #[arg(long)]
        shards: Option<usize>,
    },
    /// Restrict to rational hyperplanes down to dimension 4.
    Reduce {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 3)]
        height: i64,
        #[arg(long, default_value_t = 1000)]
        attempts: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Write the final restricted pair to this file.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
}

type Out<'a> = &'a mut dyn Write;

/// Runs one invocation and returns the process exit code.
pub fn run<I, T>(args: I, out: Out, err: Out) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    exit::SUCCESS
                }
                _ => {
                    let _ = write!(err, "{e}");
                    exit::PARSE
                }
            };
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn read_pair(path: &Path) -> Result<LoadedPair, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))?;
    load_pair(&text)
}

fn parse_reals(s: &str, n: usize, what: &str) -> Result<Vec<f64>, CliError> {
    let g = Grammar { generator: None, degree: 1, allow_decimal: true };
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != n {
        return Err(CliError::Parse(format!("{what} needs {n} comma-separated numbers, got {s:?}")));
    }
    parts
        .iter()
        .map(|p| {
            let q: BigRational = parse_scalar(p.trim(), &g)?.remove(0);
            q.to_f64().ok_or_else(|| CliError::Parse(format!("{what}: {p:?} is out of range")))
        })
        .collect()
}

fn parse_grid(s: &str) -> Result<(usize, usize), CliError> {
    let bad = || CliError::Parse(format!("grid must be `na,nb` with positive integers, got {s:?}"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    let na: usize = a.trim().parse().map_err(|_| bad())?;
    let nb: usize = b.trim().parse().map_err(|_| bad())?;
    if na == 0 || nb == 0 {
        return Err(bad());
    }
    Ok((na, nb))
}

/// `QLPAIR_SHARDS` wins over `--shards`, which defaults to the available
/// parallelism.
fn resolve_shards(flag: Option<usize>) -> Result<usize, CliError> {
    if let Ok(v) = std::env::var("QLPAIR_SHARDS") {
        return v
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&k| k >= 1)
            .ok_or_else(|| CliError::Parse(format!("QLPAIR_SHARDS must be a positive integer, got {v:?}")));
    }
    match flag {
        Some(0) => Err(CliError::Parse("--shards must be at least 1".into())),
        Some(k) => Ok(k),
        None => Ok(search::available_shards()),
    }
}

fn header(out: Out, cmd: &str, seed: Option<u64>) -> std::io::Result<()> {
    match seed {
        Some(s) => writeln!(out, "# qlpair {cmd} | seed: {s}"),
        None => writeln!(out, "# qlpair {cmd} | seed: none (deterministic)"),
    }
}

fn json_line(out: Out, value: &impl Serialize) -> Result<(), CliError> {
    let s = serde_json::to_string_pretty(value).expect("report serializes");
    writeln!(out, "{s}")?;
    Ok(())
}

fn dispatch(cmd: Command, out: Out, err: Out) -> Result<i32, CliError> {
    match cmd {
        Command::Canonicalize { common } => cmd_canonicalize(&common, out),
        Command::Check { common, mode, digits, max_denominator } => {
            cmd_check(&common, mode, digits, max_denominator, out)
        }
        Command::Approximate { common, target, bound, shards } => {
            let t = parse_reals(&target, 2, "--target")?;
            cmd_approximate(&common, (t[0], t[1]), bound, resolve_shards(shards)?, out)
        }
        Command::Scan { common, rect, grid, bound, eps, out: csv, shards } => {
            let r = parse_reals(&rect, 4, "--rect")?;
            let g = parse_grid(&grid)?;
            cmd_scan(&common, (r[0], r[1], r[2], r[3]), g, bound, eps, csv.as_deref(), resolve_shards(shards)?, out, err)
        }
        Command::Gap { common, bound, shards } => cmd_gap(&common, bound, resolve_shards(shards)?, out),
        Command::Reduce { common, height, attempts, seed, emit } => {
            cmd_reduce(&common, height, attempts, seed, emit.as_deref(), out)
        }
    }
}

#[derive(Serialize)]
struct CanonicalJson {
    command: &'static str,
    label: String,
    kind: String,
    s: usize,
    dim: usize,
    exact: bool,
    g: Vec<Vec<f64>>,
    g_exact: Option<Vec<Vec<String>>>,
    lambda: f64,
    mu: f64,
    lambda_exact: Option<String>,
    mu_exact: Option<String>,
    det_g: f64,
    residual: f64,
}

fn cmd_canonicalize(c: &Common, out: Out) -> Result<i32, CliError> {
    let p = read_pair(&c.file)?.pair;
    let (label, w) = canonicalize(&p)?;
    let residual = match w.holds_exactly(&p, &label) {
        Some(true) => 0.0,
        _ => w.residual(&p, &label),
    };
    let (g_exact, lambda_exact, mu_exact) = match &w {
        Transformation::Exact { g, lambda, mu } => (
            Some(g.iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect()),
            Some(lambda.to_string()),
            Some(mu.to_string()),
        ),
        Transformation::Float { .. } => (None, None, None),
    };
    let report = CanonicalJson {
        command: "canonicalize",
        label: label.to_string(),
        kind: format!("{:?}", label.kind),
        s: label.s,
        dim: label.dim,
        exact: w.is_exact(),
        g: w.g_f64(),
        g_exact,
        lambda: w.lambda_f64(),
        mu: w.mu_f64(),
        lambda_exact,
        mu_exact,
        det_g: w.det_f64(),
        residual,
    };
    if c.json {
        json_line(out, &report)?;
        return Ok(exit::SUCCESS);
    }
    header(out, "canonicalize", None)?;
    writeln!(out, "{}", report.label)?;
    writeln!(out, "witness: {}", if report.exact { "exact" } else { "floating point" })?;
    match (&report.lambda_exact, &report.mu_exact) {
        (Some(l), Some(m)) => {
            writeln!(out, "lambda = {l}")?;
            writeln!(out, "mu = {m}")?;
        }
        _ => {
            writeln!(out, "lambda = {}", fmt_g12(report.lambda))?;
            writeln!(out, "mu = {}", fmt_g12(report.mu))?;
        }
    }
    writeln!(out, "g =")?;
    match &report.g_exact {
        Some(g) => write!(out, "{}", fmt_matrix(g))?,
        None => {
            let g: Vec<Vec<String>> = report.g.iter().map(|r| r.iter().map(|&x| fmt_g12(x)).collect()).collect();
            write!(out, "{}", fmt_matrix(&g))?
        }
    }
    writeln!(out, "det g = {}", fmt_g12(report.det_g))?;
    writeln!(out, "residual = {}", fmt_g12(report.residual))?;
    Ok(exit::SUCCESS)
}

#[derive(Serialize)]
struct WitnessJson {
    alpha: String,
    beta: String,
    rational_matrix: Vec<Vec<String>>,
    exact: bool,
    residual: f64,
}

#[derive(Serialize)]
struct IntervalJson {
    lo: Option<String>,
    hi: Option<String>,
    sign: i8,
}

#[derive(Serialize)]
struct CheckJson {
    command: &'static str,
    mode: &'static str,
    dim: usize,
    dim_ok: bool,
    q_nondegenerate: bool,
    restriction_signature: [usize; 3],
    restriction_indefinite: bool,
    pencil_irrational: bool,
    evidence_only: bool,
    pencil_witness: Option<WitnessJson>,
    conjecture_indefinite_pencil: bool,
    definite_interval: Option<IntervalJson>,
    verdict: String,
    fail_reasons: Vec<String>,
    warnings: Vec<String>,
}

fn verdict_name(v: &Verdict) -> &'static str {
    match v {
        Verdict::TheoremApplies => "TheoremApplies",
        Verdict::LikelyApplies => "LikelyApplies",
        Verdict::ConjectureOnly => "ConjectureOnly",
        Verdict::Fails(_) => "Fails",
    }
}

fn check_json(r: &ConditionReport, mode: Mode) -> CheckJson {
    let rs = r.restriction_signature;
    CheckJson {
        command: "check",
        mode: match mode {
            Mode::Exact => "exact",
            Mode::Heuristic => "heuristic",
        },
        dim: r.dim,
        dim_ok: r.dim_ok,
        q_nondegenerate: r.q_nondegenerate,
        restriction_signature: [rs.pos, rs.neg, rs.zero],
        restriction_indefinite: r.restriction_indefinite,
        pencil_irrational: r.pencil_irrational,
        evidence_only: r.evidence_only,
        pencil_witness: r.pencil_witness.as_ref().map(|w| WitnessJson {
            alpha: w.alpha.to_string(),
            beta: w.beta.to_string(),
            rational_matrix: w.rational_matrix.iter().map(|row| row.iter().map(|x| x.to_string()).collect()).collect(),
            exact: w.exact,
            residual: w.residual,
        }),
        conjecture_indefinite_pencil: r.conjecture_indefinite_pencil,
        definite_interval: r.definite_interval.as_ref().map(|iv| IntervalJson {
            lo: iv.lo.as_ref().map(|x| x.to_string()),
            hi: iv.hi.as_ref().map(|x| x.to_string()),
            sign: iv.sign,
        }),
        verdict: verdict_name(&r.verdict).to_string(),
        fail_reasons: match &r.verdict {
            Verdict::Fails(v) => v.iter().map(|f| format!("{f:?}")).collect(),
            _ => Vec::new(),
        },
        warnings: r.warnings.clone(),
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn cmd_check(c: &Common, mode: Mode, digits: Option<u32>, max_denominator: u64, out: Out) -> Result<i32, CliError> {
    let loaded = read_pair(&c.file)?;
    let pencil_mode = match mode {
        Mode::Exact => PencilMode::Exact,
        Mode::Heuristic => {
            let PencilMode::Heuristic { digits: d0, .. } = PencilMode::heuristic_default() else { unreachable!() };
            PencilMode::Heuristic { digits: digits.or(loaded.float_digits).unwrap_or(d0), max_denominator }
        }
    };
    let r = check_theorem(&loaded.pair, pencil_mode)?;
    let code = if r.verdict == Verdict::TheoremApplies { exit::SUCCESS } else { exit::HYPOTHESES };
    let j = check_json(&r, mode);
    if c.json {
        json_line(out, &j)?;
        return Ok(code);
    }
    header(out, "check", None)?;
    writeln!(out, "mode: {}", j.mode)?;
    writeln!(out, "dimension: {} ({})", j.dim, if j.dim_ok { "ok" } else { "below 4" })?;
    writeln!(out, "Q nondegenerate: {}", yes(j.q_nondegenerate))?;
    let [p, n, z] = j.restriction_signature;
    writeln!(out, "Q on {{L = 0}}: signature ({p}, {n}, {z}), indefinite: {}", yes(j.restriction_indefinite))?;
    writeln!(
        out,
        "aQ + bL^2 rational for some (a, b) != 0: {}{}",
        yes(!j.pencil_irrational),
        if j.evidence_only { " (heuristic evidence)" } else { "" }
    )?;
    if let Some(w) = &j.pencil_witness {
        writeln!(out, "pencil witness: a = {}, b = {}{}", w.alpha, w.beta, if w.exact { "" } else { " (heuristic)" })?;
        writeln!(out, "  a*Gram(Q) + b*Gram(L^2) =")?;
        write!(out, "{}", fmt_matrix(&w.rational_matrix))?;
        if !w.exact {
            writeln!(out, "  residual = {}", fmt_g12(w.residual))?;
        }
    }
    match &j.definite_interval {
        Some(iv) => writeln!(
            out,
            "definite members Q + bL^2: b in ({}, {}), {} definite",
            iv.lo.as_deref().unwrap_or("-inf"),
            iv.hi.as_deref().unwrap_or("+inf"),
            if iv.sign > 0 { "positive" } else { "negative" }
        )?,
        None => writeln!(out, "definite members Q + bL^2: none")?,
    }
    for w in &j.warnings {
        writeln!(out, "warning: {w}")?;
    }
    if j.fail_reasons.is_empty() {
        writeln!(out, "verdict: {}", j.verdict)?;
    } else {
        writeln!(out, "verdict: Fails ({})", j.fail_reasons.join(", "))?;
    }
    Ok(code)
}

#[derive(Serialize)]
struct ApproxJson<'a> {
    command: &'static str,
    target: (f64, f64),
    shards: usize,
    result: &'a search::SearchResult,
}

fn cmd_approximate(c: &Common, target: (f64, f64), bound: i64, shards: usize, out: Out) -> Result<i32, CliError> {
    let p = read_pair(&c.file)?.pair;
    let r = search::approximate(&p, target, bound, shards)?;
    if c.json {
        json_line(out, &ApproxJson { command: "approximate", target, shards, result: &r })?;
        return Ok(exit::SUCCESS);
    }
    header(out, "approximate", None)?;
    writeln!(out, "{CALIBRATION_NOTE}")?;
    writeln!(out, "target = ({}, {})", fmt_g12(target.0), fmt_g12(target.1))?;
    writeln!(out, "bound N = {bound}")?;
    writeln!(out, "best_x = {:?}", r.best_x)?;
    writeln!(out, "value = ({}, {})", fmt_g12(r.value.0), fmt_g12(r.value.1))?;
    writeln!(out, "error = {}", fmt_g12(r.error))?;
    writeln!(out, "evaluations = {}", r.evaluations)?;
    Ok(exit::SUCCESS)
}

#[derive(Serialize)]
struct ScanJson {
    command: &'static str,
    rect: (f64, f64, f64, f64),
    grid: (usize, usize),
    bound: i64,
    eps: f64,
    coverage: f64,
    worst_error: f64,
    evaluations: u64,
    csv: Option<String>,
    cells: Vec<CellJson>,
}

#[derive(Serialize)]
struct CellJson {
    a: f64,
    b: f64,
    error: f64,
    x: Vec<i64>,
}

#[allow(clippy::too_many_arguments)]
fn cmd_scan(
    c: &Common,
    rect: (f64, f64, f64, f64),
    grid: (usize, usize),
    bound: i64,
    eps: f64,
    csv_path: Option<&Path>,
    shards: usize,
    out: Out,
    err: Out,
) -> Result<i32, CliError> {
    let p = read_pair(&c.file)?.pair;
    let s = search::density_scan(&p, rect, grid, bound, eps, shards)?;
    let csv = scan_csv(&s, p.dim());
    if let Some(path) = csv_path {
        std::fs::write(path, &csv)?;
    }
    let worst = s.errors.iter().flatten().cloned().fold(0.0, f64::max);
    if c.json {
        let cells = (0..grid.0)
            .flat_map(|i| (0..grid.1).map(move |j| (i, j)))
            .map(|(i, j)| CellJson { a: s.cell_a[i], b: s.cell_b[j], error: s.errors[i][j], x: s.best_x[i][j].clone() })
            .collect();
        let j = ScanJson {
            command: "scan",
            rect,
            grid,
            bound,
            eps,
            coverage: s.coverage,
            worst_error: worst,
            evaluations: s.evaluations,
            csv: csv_path.map(|p| p.display().to_string()),
            cells,
        };
        json_line(out, &j)?;
        return Ok(exit::SUCCESS);
    }
    // without --out the CSV owns standard output and the summary goes to stderr
    let summary: Out = if csv_path.is_some() { out } else { err };
    header(summary, "scan", None)?;
    writeln!(summary, "{CALIBRATION_NOTE}")?;
    writeln!(summary, "bound N = {bound}, grid {}x{}, evaluations = {}", grid.0, grid.1, s.evaluations)?;
    writeln!(summary, "coverage at eps = {}: {}", fmt_g12(eps), fmt_g12(s.coverage))?;
    writeln!(summary, "worst cell error = {}", fmt_g12(worst))?;
    match csv_path {
        Some(path) => writeln!(summary, "csv written to {}", path.display())?,
        None => write!(out, "{csv}")?,
    }
    Ok(exit::SUCCESS)
}

#[derive(Serialize)]
struct GapJson {
    command: &'static str,
    bound: i64,
    min_distance: String,
    min_distance_f64: f64,
    rational: bool,
    argmin: Vec<i64>,
    q_value: String,
    l_value: String,
    evaluations: u64,
}

fn cmd_gap(c: &Common, bound: i64, shards: usize, out: Out) -> Result<i32, CliError> {
    let p = read_pair(&c.file)?.pair;
    let g = search::gap_certificate(&p, bound, shards)?;
    let j = GapJson {
        command: "gap",
        bound,
        min_distance: g.min_distance.to_string(),
        min_distance_f64: g.min_distance_f64(),
        rational: g.min_distance.is_rational().is_some(),
        argmin: g.argmin.clone(),
        q_value: g.q_value.to_string(),
        l_value: g.l_value.to_string(),
        evaluations: g.evaluations,
    };
    if c.json {
        json_line(out, &j)?;
        return Ok(exit::SUCCESS);
    }
    header(out, "gap", None)?;
    writeln!(out, "{CALIBRATION_NOTE}")?;
    writeln!(out, "bound N = {bound}")?;
    if j.rational {
        writeln!(out, "min_distance = {} (exact)", j.min_distance)?;
    } else {
        writeln!(out, "min_distance = {} (exact) ~ {}", j.min_distance, fmt_g12(j.min_distance_f64))?;
    }
    writeln!(out, "argmin = {:?}", j.argmin)?;
    writeln!(out, "Q(argmin) = {}, L(argmin) = {}", j.q_value, j.l_value)?;
    writeln!(out, "evaluations = {}", j.evaluations)?;
    Ok(exit::SUCCESS)
}

#[derive(Serialize)]
struct StepJson {
    ell: Vec<i64>,
    kernel_basis: Vec<Vec<String>>,
    dim: usize,
    label: Option<String>,
    verdict: String,
    phi: String,
    psi: Option<String>,
}

#[derive(Serialize)]
struct ReduceJson {
    command: &'static str,
    seed: u64,
    height: i64,
    attempts: usize,
    steps: Vec<StepJson>,
    final_dim: usize,
    emitted: Option<String>,
}

fn cmd_reduce(
    c: &Common,
    height: i64,
    attempts: usize,
    seed: u64,
    emit: Option<&Path>,
    out: Out,
) -> Result<i32, CliError> {
    let loaded = read_pair(&c.file)?;
    let steps = reduce_to_dim4(&loaded.pair, height, attempts, seed)?;
    let last = steps.last().map_or(&loaded.pair, |s| &s.restricted);
    if let Some(path) = emit {
        std::fs::write(path, emit_pair(last, loaded.float_digits)?)?;
    }
    let sj: Vec<StepJson> = steps
        .iter()
        .map(|s| StepJson {
            ell: s.ell.coeffs().to_vec(),
            kernel_basis: s.kernel_basis.iter().map(|v| v.iter().map(|x| x.to_string()).collect()).collect(),
            dim: s.restricted.dim(),
            label: s.type_label.map(|l| l.to_string()),
            verdict: verdict_name(&s.report.verdict).to_string(),
            phi: s.phi.to_string(),
            psi: s.psi.as_ref().map(FieldScalar::to_string),
        })
        .collect();
    let j = ReduceJson {
        command: "reduce",
        seed,
        height,
        attempts,
        steps: sj,
        final_dim: last.dim(),
        emitted: emit.map(|p| p.display().to_string()),
    };
    if c.json {
        json_line(out, &j)?;
        return Ok(exit::SUCCESS);
    }
    header(out, "reduce", Some(seed))?;
    writeln!(out, "height H = {height}, attempts = {attempts}")?;
    for (k, s) in j.steps.iter().enumerate() {
        writeln!(out, "step {}: ell = {:?}", k + 1, s.ell)?;
        writeln!(out, "  kernel basis:")?;
        write!(out, "{}", fmt_matrix(&s.kernel_basis))?;
        writeln!(out, "  restricted pair: d = {}, {}", s.dim, s.label.as_deref().unwrap_or("degenerate"))?;
        writeln!(out, "  phi = {}, psi = {}", s.phi, s.psi.as_deref().unwrap_or("undefined"))?;
        writeln!(out, "  verdict: {}", s.verdict)?;
    }
    writeln!(out, "final dimension: {}", j.final_dim)?;
    if let Some(e) = &j.emitted {
        writeln!(out, "restricted pair written to {e}")?;
    }
    Ok(exit::SUCCESS)
}
