use std::fs;
use std::path::Path;

use serde::Serialize;

use toeplitz_lab::circle_symbols::{
    winding_argument_principle, winding_logderivative, CircleGrid, LaurentSymbol, SymbolFile,
    DEFAULT_ZERO_TOL,
};
use toeplitz_lab::fock_pimsner::{
    build_fock, check_tensor_iso, check_toeplitz_relations, pv_generator_check,
    AutomorphismCorrespondence, RelationReport,
};
use toeplitz_lab::pseudoconvex::{
    axis_boundary_points, sample_boundary, strong_pseudoconvexity_check, DomainSpec, LeviReport,
    LeviVerdict, SkippedDirection, DEFAULT_LEVI_TOL,
};
use toeplitz_lab::ssh_bulk_edge::{
    bulk_edge_sweep, DeltaChoice, FourierSign, InvariantReport, RowStatus, SweepTemplate,
};
use toeplitz_lab::toeplitz_index::{verify_index_theorem, IndexConfig};
use toeplitz_lab::{Error, ErrorKind, C64};

use crate::output;
use crate::{Cli, Command, Format, SymbolSource};

pub const EXIT_OK: u8 = 0;
pub const EXIT_CONFIG: u8 = 1;
pub const EXIT_NUMERICAL: u8 = 2;
pub const EXIT_VIOLATION: u8 = 3;
pub const EXIT_PROPERTY: u8 = 4;

/// Largest number of masses accepted from `--m-range`.
const MAX_SWEEP_ROWS: usize = 10_000;

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_CONFIG,
            message: message.into(),
        }
    }

    pub fn numerical(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_NUMERICAL,
            message: message.into(),
        }
    }
}

fn kind_code(kind: ErrorKind) -> u8 {
    match kind {
        ErrorKind::InvalidInput => EXIT_CONFIG,
        ErrorKind::Numerical => EXIT_NUMERICAL,
        ErrorKind::TheoremViolation => EXIT_VIOLATION,
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        Self {
            code: kind_code(err.kind()),
            message: err.to_string(),
        }
    }
}

/// A rendered report and the exit code it implies.
struct Outcome {
    body: String,
    code: u8,
}

pub fn run(cli: &Cli) -> u8 {
    let result = match &cli.command {
        Command::Winding { source, grid } => winding(cli, source, *grid),
        Command::Index {
            source,
            n,
            grid,
            inject_fault,
        } => index(cli, source, *n, *grid, *inject_fault),
        Command::SshSweep {
            m,
            m_range,
            fiber_dim,
            lattice_length,
            delta,
            delta_fraction,
            nk,
            fourier_sign,
        } => ssh_sweep(
            cli,
            m.as_deref(),
            m_range.as_deref(),
            SweepTemplate {
                fiber_dim: *fiber_dim,
                lattice_length: *lattice_length,
                delta: match delta {
                    Some(d) => DeltaChoice::Absolute(*d),
                    None => DeltaChoice::FractionOfGap(*delta_fraction),
                },
                momentum_grid: *nk,
                fourier_sign: FourierSign::Plus,
            },
            *fourier_sign,
        ),
        Command::FockCheck {
            fiber_dim,
            levels,
            points,
            perm,
            k_max,
            trials,
            pv_levels,
        } => fock_check(
            cli,
            *fiber_dim,
            *levels,
            *points,
            perm.as_deref(),
            *k_max,
            *trials,
            *pv_levels,
        ),
        Command::Levi {
            domain_file,
            samples,
            no_axis,
        } => levi(cli, domain_file, *samples, !*no_axis),
    };
    let outcome = result.and_then(|o| output::emit(cli.out.as_deref(), &o.body).map(|_| o.code));
    match outcome {
        Ok(code) => code,
        Err(err) => {
            let line = serde_json::json!({ "error": err.message, "exit_code": err.code });
            eprintln!("{line}");
            err.code
        }
    }
}

fn tolerance(cli: &Cli, default: f64) -> Result<f64, CliError> {
    match cli.tol {
        None => Ok(default),
        Some(t) if t.is_finite() && t > 0.0 => Ok(t),
        Some(t) => Err(CliError::config(format!(
            "--tol must be positive and finite, got {t}"
        ))),
    }
}

fn reject_tol(cli: &Cli, command: &str) -> Result<(), CliError> {
    if cli.tol.is_some() {
        return Err(CliError::config(format!(
            "--tol has no effect on {command}"
        )));
    }
    Ok(())
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))
}

/// Parses `mode:re[:im],...`.
pub fn parse_inline_symbol(text: &str) -> Result<LaurentSymbol, CliError> {
    let mut modes = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let parts: Vec<&str> = item.split(':').collect();
        let bad = || {
            CliError::config(format!(
                "cannot parse symbol term {item:?}; expected mode:re[:im]"
            ))
        };
        if !(2..=3).contains(&parts.len()) {
            return Err(bad());
        }
        let mode: i64 = parts[0].trim().parse().map_err(|_| bad())?;
        let re: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let im: f64 = match parts.get(2) {
            Some(s) => s.trim().parse().map_err(|_| bad())?,
            None => 0.0,
        };
        modes.push((mode, C64::new(re, im)));
    }
    if modes.is_empty() {
        return Err(CliError::config("symbol has no terms"));
    }
    Ok(LaurentSymbol::from_modes(modes)?)
}

fn load_symbol(source: &SymbolSource) -> Result<LaurentSymbol, CliError> {
    match (&source.symbol_file, &source.symbol) {
        (Some(path), None) => {
            let file: SymbolFile = serde_json::from_str(&read_file(path)?)
                .map_err(|e| CliError::config(format!("invalid symbol file: {e}")))?;
            Ok(LaurentSymbol::try_from(file)?)
        }
        (None, Some(text)) => parse_inline_symbol(text),
        _ => Err(CliError::config(
            "give exactly one of --symbol-file, --symbol",
        )),
    }
}

#[derive(Serialize)]
struct WindingReport {
    symbol: String,
    winding_ap: i64,
    winding_logd: i64,
    grid: usize,
    zero_tol: f64,
    agreement: bool,
}

fn render<T: Serialize>(format: Format, value: &T) -> Result<String, CliError> {
    match format {
        Format::Json => output::json(value),
        Format::Csv => output::csv(std::slice::from_ref(value)),
    }
}

fn winding(cli: &Cli, source: &SymbolSource, grid: usize) -> Result<Outcome, CliError> {
    let symbol = load_symbol(source)?;
    let zero_tol = tolerance(cli, DEFAULT_ZERO_TOL)?;
    let circle = CircleGrid::new(grid)?;
    let winding_ap = winding_argument_principle(&symbol, &circle, zero_tol)?;
    let winding_logd = winding_logderivative(&symbol, &circle, zero_tol)?;
    let report = WindingReport {
        symbol: symbol.label(),
        winding_ap,
        winding_logd,
        grid,
        zero_tol,
        agreement: winding_ap == winding_logd,
    };
    Ok(Outcome {
        body: render(cli.format, &report)?,
        code: if report.agreement {
            EXIT_OK
        } else {
            EXIT_VIOLATION
        },
    })
}

fn index(
    cli: &Cli,
    source: &SymbolSource,
    n: usize,
    grid: usize,
    inject_fault: bool,
) -> Result<Outcome, CliError> {
    let symbol = load_symbol(source)?;
    let config = IndexConfig {
        n,
        tol: tolerance(cli, IndexConfig::default().tol)?,
        grid_size: grid,
        corrupt_truncation: inject_fault,
        ..IndexConfig::default()
    };
    match verify_index_theorem(&symbol, &config) {
        Ok(report) => Ok(Outcome {
            body: render(cli.format, &report)?,
            code: EXIT_OK,
        }),
        Err(Error::IndexTheoremViolation(report)) => {
            let err = Error::IndexTheoremViolation(report.clone());
            eprintln!(
                "{}",
                serde_json::json!({ "error": err.to_string(), "exit_code": EXIT_VIOLATION })
            );
            Ok(Outcome {
                body: render(cli.format, &*report)?,
                code: EXIT_VIOLATION,
            })
        }
        Err(e) => Err(e.into()),
    }
}

fn parse_f64_list(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| CliError::config(format!("cannot parse mass {s:?}")))
        })
        .collect()
}

/// Inclusive `start:stop:step`; values are `start + i·step`, rounded to 12
/// decimals so that decimal steps print cleanly.
pub fn parse_range(text: &str) -> Result<Vec<f64>, CliError> {
    let parts = parse_f64_list(&text.replace(':', ","))?;
    let [start, stop, step] = parts[..] else {
        return Err(CliError::config(format!(
            "range {text:?} must be start:stop:step"
        )));
    };
    if step.is_nan() || step <= 0.0 || stop < start {
        return Err(CliError::config("range needs step > 0 and stop >= start"));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    if count > MAX_SWEEP_ROWS {
        return Err(CliError::config(format!(
            "range has {count} values, limit {MAX_SWEEP_ROWS}"
        )));
    }
    Ok((0..count)
        .map(|i| {
            let v = start + i as f64 * step;
            let r = (v * 1e12).round() / 1e12;
            if r == 0.0 {
                0.0
            } else {
                r
            }
        })
        .collect())
}

#[derive(Serialize)]
struct SweepCsvRow {
    m: f64,
    gap: Option<f64>,
    chern_det: Option<i64>,
    chern_quadrature: Option<f64>,
    edge_trace: Option<i64>,
    #[serde(rename = "L")]
    lattice_length: usize,
    delta: Option<f64>,
    agreement: Option<bool>,
}

impl From<&InvariantReport> for SweepCsvRow {
    fn from(r: &InvariantReport) -> Self {
        Self {
            m: r.m,
            gap: r.gap,
            chern_det: r.chern_det,
            chern_quadrature: r.chern_quadrature,
            edge_trace: r.edge_trace,
            lattice_length: r.lattice_length,
            delta: r.delta,
            agreement: r.agreement,
        }
    }
}

/// Violation beats numerical trouble beats configuration trouble.
fn sweep_code(rows: &[InvariantReport]) -> u8 {
    if rows.iter().any(|r| r.agreement == Some(false)) {
        return EXIT_VIOLATION;
    }
    rows.iter()
        .filter(|r| r.status == RowStatus::Error)
        .map(|r| r.error_kind.map_or(EXIT_NUMERICAL, kind_code))
        .max_by_key(|&c| if c == EXIT_CONFIG { 0 } else { c })
        .unwrap_or(EXIT_OK)
}

fn ssh_sweep(
    cli: &Cli,
    m: Option<&str>,
    m_range: Option<&str>,
    mut template: SweepTemplate,
    fourier_sign: i64,
) -> Result<Outcome, CliError> {
    reject_tol(cli, "ssh-sweep")?;
    template.fourier_sign = FourierSign::from_int(fourier_sign)?;
    let masses = match (m, m_range) {
        (Some(list), None) => parse_f64_list(list)?,
        (None, Some(range)) => parse_range(range)?,
        _ => return Err(CliError::config("give exactly one of --m, --m-range")),
    };
    if masses.is_empty() {
        return Err(CliError::config("no masses given"));
    }
    let rows = bulk_edge_sweep(&masses, &template);
    for row in &rows {
        if let Some(w) = &row.warning {
            eprintln!("m={}: {w}", row.m);
        }
    }
    let body = match cli.format {
        Format::Json => output::json(&rows)?,
        Format::Csv => output::csv(&rows.iter().map(SweepCsvRow::from).collect::<Vec<_>>())?,
    };
    Ok(Outcome {
        body,
        code: sweep_code(&rows),
    })
}

fn parse_permutation(text: &str) -> Result<Vec<usize>, CliError> {
    text.split(',')
        .map(str::trim)
        .map(|s| {
            s.parse::<usize>()
                .map_err(|_| CliError::config(format!("cannot parse permutation entry {s:?}")))
        })
        .collect()
}

#[derive(Serialize)]
struct FockOutput {
    toeplitz_relations: RelationReport,
    tensor_iso: RelationReport,
    pv_generator: RelationReport,
    all_pass: bool,
}

#[derive(Serialize)]
struct FockCsvRow<'a> {
    suite: &'a str,
    check: &'a str,
    max_residual: f64,
    tolerance: f64,
    pass: bool,
}

#[allow(clippy::too_many_arguments)]
fn fock_check(
    cli: &Cli,
    fiber_dim: usize,
    levels: usize,
    points: Option<usize>,
    perm: Option<&str>,
    k_max: usize,
    trials: usize,
    pv_levels: usize,
) -> Result<Outcome, CliError> {
    reject_tol(cli, "fock-check")?;
    let corr = match perm {
        Some(text) => {
            let images = parse_permutation(text)?;
            if let Some(p) = points.filter(|&p| p != images.len()) {
                return Err(CliError::config(format!(
                    "permutation has {} entries but p = {p}",
                    images.len()
                )));
            }
            AutomorphismCorrespondence::from_one_based(&images)?
        }
        None => AutomorphismCorrespondence::cycle(points.unwrap_or(3))?,
    };
    if k_max == 0 {
        return Err(CliError::config("--k-max must be >= 1"));
    }
    let fock = build_fock(fiber_dim, levels)?;
    let toeplitz_relations = check_toeplitz_relations(&fock)?;
    let mut tensor_iso = RelationReport::default();
    for k in 1..=k_max {
        tensor_iso.extend(check_tensor_iso(&corr, k, trials, cli.seed)?);
    }
    let pv_generator = pv_generator_check(&corr, pv_levels)?;
    let all_pass =
        toeplitz_relations.all_pass() && tensor_iso.all_pass() && pv_generator.all_pass();
    let report = FockOutput {
        toeplitz_relations,
        tensor_iso,
        pv_generator,
        all_pass,
    };
    let body = match cli.format {
        Format::Json => output::json(&report)?,
        Format::Csv => {
            let suites = [
                ("toeplitz_relations", &report.toeplitz_relations),
                ("tensor_iso", &report.tensor_iso),
                ("pv_generator", &report.pv_generator),
            ];
            let rows: Vec<FockCsvRow> = suites
                .iter()
                .flat_map(|(suite, r)| {
                    r.checks.iter().map(move |c| FockCsvRow {
                        suite,
                        check: &c.check,
                        max_residual: c.max_residual,
                        tolerance: c.tolerance,
                        pass: c.pass,
                    })
                })
                .collect();
            output::csv(&rows)?
        }
    };
    Ok(Outcome {
        body,
        code: if all_pass { EXIT_OK } else { EXIT_VIOLATION },
    })
}

#[derive(Serialize)]
struct LeviOutput {
    #[serde(flatten)]
    report: LeviReport,
    axis_points: usize,
    random_points: usize,
    skipped_directions: Vec<SkippedDirection>,
    scope: &'static str,
}

#[derive(Serialize)]
struct LeviCsvRow {
    sample_count: usize,
    min_eigenvalue: f64,
    worst_point: String,
    tol: f64,
    verdict: LeviVerdict,
    skipped_directions: usize,
}

fn format_point(z: &[C64]) -> String {
    z.iter()
        .map(|c| format!("{}{:+}i", c.re, c.im))
        .collect::<Vec<_>>()
        .join(";")
}

fn levi(
    cli: &Cli,
    domain_file: &Path,
    samples: usize,
    with_axes: bool,
) -> Result<Outcome, CliError> {
    let domain: DomainSpec = serde_json::from_str(&read_file(domain_file)?)
        .map_err(|e| CliError::config(format!("invalid domain file: {e}")))?;
    let tol = tolerance(cli, DEFAULT_LEVI_TOL)?;
    let mut points = Vec::new();
    let mut skipped = Vec::new();
    let mut axis_points = 0;
    if with_axes {
        let axes = axis_boundary_points(&domain)?;
        axis_points = axes.points.len();
        points.extend(axes.points);
        skipped.extend(axes.skipped);
    }
    let random = sample_boundary(&domain, samples, cli.seed)?;
    let random_points = random.points.len();
    points.extend(random.points);
    skipped.extend(random.skipped);
    if points.is_empty() {
        return Err(CliError::config("no sampled ray reaches the boundary"));
    }
    let report = strong_pseudoconvexity_check(&domain, &points, tol)?;
    let code = if report.verdict == LeviVerdict::StronglyPseudoconvexOnSamples {
        EXIT_OK
    } else {
        EXIT_PROPERTY
    };
    let body = match cli.format {
        Format::Json => output::json(&LeviOutput {
            report,
            axis_points,
            random_points,
            skipped_directions: skipped,
            scope: "verdict holds on the sampled boundary points only",
        })?,
        Format::Csv => output::csv(&[LeviCsvRow {
            sample_count: report.sample_count,
            min_eigenvalue: report.min_eigenvalue,
            worst_point: format_point(&report.worst_point),
            tol: report.tol,
            verdict: report.verdict,
            skipped_directions: skipped.len(),
        }])?,
    };
    Ok(Outcome { body, code })
}
