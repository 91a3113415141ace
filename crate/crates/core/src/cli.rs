//! Config parsing, subcommand orchestration and deterministic CSV/JSON output.
//!
//! Config grammar, one `key = value` per line:
//!
//! ```text
//! # comment
//! qubits = 3
//! p = [3, 1, 1]
//! steps = 1024      # optional
//! cycles = 8        # optional, defaults to 2^qubits
//! format = csv      # optional, csv | json
//! ```
//!
//! Floats are written with 17 significant digits (`{:.16e}`), which
//! round-trips every `f64`.

use std::collections::HashMap;
use std::f64::consts::TAU;
use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde_json::Value;
use thiserror::Error;

use crate::circuits::{build_un, CircuitParams, CycleSpec, HierarchicalCircuit, DEFAULT_MAX_QUBITS};
use crate::error::Error;
use crate::holonomy::{
    commutator_identity_holds, gamma_analytic, gamma_from_sigma, holonomy_analytic,
    holonomy_analytic_exact, holonomy_numeric_circuit, holonomy_recursive_exact, holonomy_report,
    winding_number_analytic, winding_quadrature, HolonomyReport,
};
use crate::linalg::{cycle_decompose, eig_unitary, Permutation};
use crate::spectral::{
    eigenangle_n, eigenvector_n, is_bijective, itinerary, m_shift, principal_number, slope,
    sr_full, winding_sum, QuantumNumbers,
};
use crate::subsetsum::{
    adiabatic_time_scale, decode, solve_counted, spectral_gap, weights, Method, SubsetSumInstance,
};

pub const DEFAULT_STEPS: usize = 1024;
/// Tables with one row per eigenstate are refused beyond this many qubits.
pub const TABLE_MAX_QUBITS: usize = 20;
/// Longest itinerary emitted.
pub const ITINERARY_MAX_CYCLES: usize = 1 << 20;
/// Largest `N` for the subset-sum report, which solves every residue.
pub const SUBSET_SUM_MAX_QUBITS: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format {other:?} (expected csv or json)")),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Subcommand {
    Spectrum,
    Itinerary,
    Invariants,
    Holonomy,
    Winding,
    SubsetSum,
    Verify,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub params: CircuitParams,
    pub steps: usize,
    pub cycles: usize,
    pub format: Format,
    /// Numeric routes refuse circuits above this many qubits.
    pub max_qubits: usize,
}

/// Command-line values that take precedence over the config file.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub steps: Option<usize>,
    pub cycles: Option<usize>,
    pub format: Option<Format>,
    pub max_qubits: Option<usize>,
}

impl RunConfig {
    pub fn new(params: CircuitParams) -> Self {
        let cycles = 1usize.checked_shl(params.qubits() as u32).unwrap_or(usize::MAX);
        RunConfig {
            params,
            steps: DEFAULT_STEPS,
            cycles,
            format: Format::Csv,
            max_qubits: DEFAULT_MAX_QUBITS,
        }
    }

    pub fn apply(mut self, overrides: &Overrides) -> Result<Self, CliError> {
        if let Some(steps) = overrides.steps {
            if steps < 2 {
                return Err(CliError::Usage("--steps must be at least 2".into()));
            }
            self.steps = steps;
        }
        if let Some(cycles) = overrides.cycles {
            self.cycles = cycles;
        }
        if let Some(format) = overrides.format {
            self.format = format;
        }
        if let Some(cap) = overrides.max_qubits {
            self.max_qubits = cap;
        }
        Ok(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}: {reason}")]
pub struct ParseError {
    pub line: usize,
    pub reason: String,
}

fn perr(line: usize, reason: impl Into<String>) -> ParseError {
    ParseError { line, reason: reason.into() }
}

fn parse_int<T: FromStr>(line: usize, key: &str, text: &str) -> Result<T, ParseError> {
    text.trim()
        .parse()
        .map_err(|_| perr(line, format!("malformed integer {:?} for {key}", text.trim())))
}

fn parse_list(line: usize, text: &str) -> Result<Vec<i64>, ParseError> {
    let inner = text
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(|| perr(line, "p must be a bracketed list like [1, 3, 1]"))?;
    if inner.trim().is_empty() {
        return Err(perr(line, "empty p list"));
    }
    inner.split(',').map(|item| parse_int(line, "p", item)).collect()
}

/// Parses the line-oriented config format. Missing required keys are
/// reported at the last line of the input.
pub fn parse_config(text: &str) -> Result<RunConfig, ParseError> {
    let mut seen: HashMap<String, usize> = HashMap::new();
    let mut qubits: Option<(usize, usize)> = None;
    let mut p: Option<(Vec<i64>, usize)> = None;
    let mut steps = None;
    let mut cycles = None;
    let mut format = None;
    let mut last_line = 1;

    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| perr(line, format!("expected `key = value`, got {content:?}")))?;
        let (key, value) = (key.trim(), value.trim());
        if let Some(first) = seen.insert(key.to_string(), line) {
            return Err(perr(line, format!("duplicate key {key:?} (first set on line {first})")));
        }
        match key {
            "qubits" => {
                let n: usize = parse_int(line, key, value)?;
                if n == 0 {
                    return Err(perr(line, "qubits must be positive"));
                }
                qubits = Some((n, line));
            }
            "p" => p = Some((parse_list(line, value)?, line)),
            "steps" => {
                let s: usize = parse_int(line, key, value)?;
                if s < 2 {
                    return Err(perr(line, "steps must be at least 2"));
                }
                steps = Some(s);
            }
            "cycles" => cycles = Some(parse_int::<usize>(line, key, value)?),
            "format" => format = Some(value.parse::<Format>().map_err(|e| perr(line, e))?),
            other => return Err(perr(line, format!("unknown key {other:?}"))),
        }
    }

    let (n, qubits_line) = qubits.ok_or_else(|| perr(last_line, "missing key \"qubits\""))?;
    let (p, p_line) = p.ok_or_else(|| perr(last_line, "missing key \"p\""))?;
    if p.len() != n {
        return Err(perr(
            qubits_line.max(p_line),
            format!("length mismatch: p has {} entries but qubits = {n}", p.len()),
        ));
    }
    let params = CircuitParams::new(p).map_err(|e| perr(p_line, e.to_string()))?;
    let mut config = RunConfig::new(params);
    if let Some(s) = steps {
        config.steps = s;
    }
    if let Some(c) = cycles {
        config.cycles = c;
    }
    if let Some(f) = format {
        config.format = f;
    }
    Ok(config)
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Compute(#[from] Error),
    #[error("{0}")]
    Usage(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    /// `{"error": kind, "message": ..., "line": n?}`
    pub fn to_json(&self) -> String {
        let kind = match self {
            CliError::Parse(_) => "parse",
            CliError::Compute(_) => "compute",
            CliError::Usage(_) => "usage",
            CliError::Io(_) => "io",
        };
        let mut out = format!("{{\"error\":{},\"message\":{}", json_str(kind), json_str(&self.to_string()));
        if let CliError::Parse(e) = self {
            let _ = write!(out, ",\"line\":{}", e.line);
        }
        out.push('}');
        out
    }
}

/// Bytes produced by a subcommand; `success` is false when `verify` finds a failure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunOutput {
    pub bytes: Vec<u8>,
    pub success: bool,
}

impl RunOutput {
    fn ok(text: String) -> Self {
        RunOutput { bytes: text.into_bytes(), success: true }
    }
}

pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        // Avoid "-0.0000000000000000e0".
        return format!("{:.16e}", 0.0);
    }
    format!("{x:.16e}")
}

fn json_f64(x: f64) -> String {
    if x.is_finite() { fmt_f64(x) } else { "null".into() }
}

fn json_str(s: &str) -> String {
    serde_json::to_string(s).expect("strings serialize")
}

fn join<T: ToString>(items: &[T], sep: &str) -> String {
    items.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

fn json_array<T: ToString>(items: &[T]) -> String {
    format!("[{}]", join(items, ","))
}

/// Long-format rows shared by the non-tabular subcommands.
struct LongTable {
    rows: Vec<(String, String, String)>,
}

impl LongTable {
    fn new() -> Self {
        LongTable { rows: Vec::new() }
    }

    fn push(&mut self, section: &str, key: impl ToString, value: impl ToString) {
        self.rows.push((section.into(), key.to_string(), value.to_string()));
    }

    fn csv(&self) -> String {
        let mut out = String::from("section,key,value\n");
        for (s, k, v) in &self.rows {
            let _ = writeln!(out, "{s},{k},{v}");
        }
        out
    }

    fn json(&self) -> String {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|(s, k, v)| {
                format!("{{\"section\":{},\"key\":{},\"value\":{}}}", json_str(s), json_str(k), json_str(v))
            })
            .collect();
        format!("[{}]\n", rows.join(","))
    }

    fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.csv(),
            Format::Json => self.json(),
        }
    }
}

fn require_table_size(params: &CircuitParams) -> Result<(), CliError> {
    if params.qubits() > TABLE_MAX_QUBITS {
        return Err(CliError::Compute(Error::DimensionOverflow {
            qubits: params.qubits(),
            cap: TABLE_MAX_QUBITS,
        }));
    }
    Ok(())
}

pub fn run(command: Subcommand, config: &RunConfig) -> Result<RunOutput, CliError> {
    match command {
        Subcommand::Spectrum => spectrum(config).map(RunOutput::ok),
        Subcommand::Itinerary => itinerary_table(config).map(RunOutput::ok),
        Subcommand::Invariants => {
            require_table_size(&config.params)?;
            let report = holonomy_report(&config.params, config.steps, config.max_qubits)?;
            Ok(RunOutput { bytes: emit_report(&report, config.format), success: true })
        }
        Subcommand::Holonomy => holonomy_table(config).map(RunOutput::ok),
        Subcommand::Winding => winding_table(config).map(RunOutput::ok),
        Subcommand::SubsetSum => subset_sum_table(config).map(RunOutput::ok),
        Subcommand::Verify => verify(config),
    }
}

/// `lambda,m,theta` over the grid `λ_k = 2πk/steps`, `k = 0 … steps`, with
/// `θ = (2π/2ᴺ)(m + d_N λ/2π)` left unreduced.
fn spectrum(config: &RunConfig) -> Result<String, CliError> {
    let params = &config.params;
    require_table_size(params)?;
    let cycle = CycleSpec::new(config.steps)?;
    let mut ms: Vec<usize> = QuantumNumbers::all(params.qubits())
        .map(|n| principal_number(params, &n).reduced())
        .collect();
    ms.sort_unstable();
    let d = slope(params).to_f64().unwrap_or(f64::NAN);
    let scale = TAU / params.dim() as f64;
    let mut rows = Vec::new();
    for lambda in cycle.grid() {
        for &m in &ms {
            rows.push((lambda, m, scale * (m as f64 + d * lambda / TAU)));
        }
    }
    Ok(match config.format {
        Format::Csv => {
            let mut out = String::from("lambda,m,theta\n");
            for (l, m, t) in rows {
                let _ = writeln!(out, "{},{m},{}", fmt_f64(l), fmt_f64(t));
            }
            out
        }
        Format::Json => {
            let items: Vec<String> = rows
                .iter()
                .map(|(l, m, t)| format!("{{\"lambda\":{},\"m\":{m},\"theta\":{}}}", json_f64(*l), json_f64(*t)))
                .collect();
            format!("[{}]\n", items.join(","))
        }
    })
}

/// `block,step,bits,m`: one itinerary of `cycles` steps per cycle of `𝔖`,
/// each starting at the block's smallest `m`.
fn itinerary_table(config: &RunConfig) -> Result<String, CliError> {
    let params = &config.params;
    require_table_size(params)?;
    if config.cycles > ITINERARY_MAX_CYCLES {
        return Err(CliError::Compute(Error::InstanceTooLarge(format!(
            "itinerary of {} cycles exceeds {ITINERARY_MAX_CYCLES}",
            config.cycles
        ))));
    }
    params.require_nondegenerate()?;
    let by_m = crate::spectral::states_by_principal(params)?;
    let mut rows = Vec::new();
    for (block, cycle) in cycle_decompose(&m_shift(params)).iter().enumerate() {
        let path = itinerary(params, &by_m[cycle[0]], config.cycles)?;
        for (step, n) in path.iter().enumerate() {
            rows.push((block, step, n.to_string(), principal_number(params, n).reduced()));
        }
    }
    Ok(match config.format {
        Format::Csv => {
            let mut out = String::from("block,step,bits,m\n");
            for (b, s, bits, m) in rows {
                let _ = writeln!(out, "{b},{s},{bits},{m}");
            }
            out
        }
        Format::Json => {
            let items: Vec<String> = rows
                .iter()
                .map(|(b, s, bits, m)| {
                    format!("{{\"block\":{b},\"step\":{s},\"bits\":{},\"m\":{m}}}", json_str(bits))
                })
                .collect();
            format!("[{}]\n", items.join(","))
        }
    })
}

fn holonomy_table(config: &RunConfig) -> Result<String, CliError> {
    let params = &config.params;
    let circuit = HierarchicalCircuit::with_cap(params.clone(), config.max_qubits)?;
    let (numeric, trace) = holonomy_numeric_circuit(&circuit, config.steps)?;
    let analytic = params.require_all_odd().ok().map(|_| holonomy_analytic(params)).transpose()?;
    let mut table = LongTable::new();
    table.push("meta", "p", join(params.p(), ";"));
    table.push("meta", "steps", trace.steps());
    table.push("meta", "worst_overlap", fmt_f64(trace.worst_overlap));
    let mut entries = |name: &str, m: &crate::linalg::ComplexMatrix| {
        for col in 0..m.dim() {
            for row in 0..m.dim() {
                let z = m.get(row, col);
                if z.norm() > 0.5 {
                    table.push(name, format!("{row}:{col}.re"), fmt_f64(z.re));
                    table.push(name, format!("{row}:{col}.im"), fmt_f64(z.im));
                }
            }
        }
    };
    if let Some(a) = &analytic {
        entries("analytic", &a.matrix);
    }
    entries("numeric", &numeric.matrix);
    if let Some(a) = &analytic {
        table.push("deviation", "max_abs", fmt_f64(a.max_abs_diff(&numeric)));
    }
    Ok(table.render(config.format))
}

fn winding_table(config: &RunConfig) -> Result<String, CliError> {
    let params = &config.params;
    let circuit = HierarchicalCircuit::with_cap(params.clone(), config.max_qubits)?;
    let value = winding_quadrature(&circuit, config.steps)?;
    let analytic = winding_number_analytic(params);
    let mut table = LongTable::new();
    table.push("winding", "quadrature", fmt_f64(value));
    table.push("winding", "rounded", value.round() as i64);
    table.push("winding", "analytic", &analytic);
    table.push("winding", "sum_r", winding_sum(params));
    let converged = (value - value.round()).abs() <= 0.1;
    table.push("winding", "converged", converged);
    table.push("winding", "agree", converged && BigInt::from(value.round() as i64) == analytic);
    Ok(table.render(config.format))
}

fn subset_sum_table(config: &RunConfig) -> Result<String, CliError> {
    let params = &config.params;
    if params.qubits() > SUBSET_SUM_MAX_QUBITS {
        return Err(CliError::Compute(Error::DimensionOverflow {
            qubits: params.qubits(),
            cap: SUBSET_SUM_MAX_QUBITS,
        }));
    }
    let w = weights(params)?;
    let mut table = LongTable::new();
    for (j, wj) in w.iter().enumerate() {
        table.push("weight", format!("w{}", j + 1), wj);
    }
    let (mut brute_work, mut dp_work) = (0u64, 0u64);
    for m in 0..params.dim() as u64 {
        let solutions = decode(params, &BigInt::from(m), true);
        table.push("decode", m, join(&solutions, ";"));
        let instance = SubsetSumInstance::from_params(params, m, true)?;
        brute_work += solve_counted(&instance, Method::Brute)?.work;
        dp_work += solve_counted(&instance, Method::Dp)?.work;
    }
    table.push("work", "brute_subsets", brute_work);
    table.push("work", "dp_cells", dp_work);
    match spectral_gap(params) {
        Ok(gap) => {
            table.push("gap", "delta", fmt_f64(gap));
            table.push("gap", "adiabatic_time_scale", fmt_f64(adiabatic_time_scale(params)?));
        }
        Err(_) => table.push("gap", "delta", "degenerate"),
    }
    Ok(table.render(config.format))
}

/// Serializes a report. JSON keys: `n`, `p`, `d_N`, `degenerate`, `cycles`,
/// `sigma` (`{re, im}` objects), `gamma` (radians per cycle), `nu`.
pub fn emit_report(report: &HolonomyReport, format: Format) -> Vec<u8> {
    let cycles: Vec<String> = report.cycles.iter().map(|c| json_array(c)).collect();
    match format {
        Format::Json => {
            let sigma: Vec<String> = report
                .sigma
                .iter()
                .map(|z| format!("{{\"re\":{},\"im\":{}}}", json_f64(z.re), json_f64(z.im)))
                .collect();
            let gamma: Vec<String> = report.gamma_per_cycle.iter().map(|&g| json_f64(g)).collect();
            format!(
                "{{\"n\":{},\"p\":{},\"d_N\":{},\"degenerate\":{},\"cycles\":[{}],\"sigma\":[{}],\"gamma\":[{}],\"nu\":{}}}\n",
                report.params.len(),
                json_array(&report.params),
                report.d_n,
                report.degenerate,
                cycles.join(","),
                sigma.join(","),
                gamma.join(","),
                report.nu,
            )
            .into_bytes()
        }
        Format::Csv => {
            let mut table = LongTable::new();
            table.push("meta", "n", report.params.len());
            table.push("meta", "p", join(&report.params, ";"));
            table.push("meta", "d_N", &report.d_n);
            table.push("meta", "degenerate", report.degenerate);
            table.push("meta", "nu", &report.nu);
            for (k, c) in report.cycles.iter().enumerate() {
                table.push("cycle", k, join(c, ";"));
            }
            for (k, z) in report.sigma.iter().enumerate() {
                table.push("sigma", format!("{k}.re"), fmt_f64(z.re));
                table.push("sigma", format!("{k}.im"), fmt_f64(z.im));
            }
            for (k, g) in report.gamma_per_cycle.iter().enumerate() {
                table.push("gamma", k, fmt_f64(*g));
            }
            table.csv().into_bytes()
        }
    }
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value, CliError> {
    v.get(key).ok_or_else(|| CliError::Usage(format!("report is missing {key:?}")))
}

fn as_big(v: &Value) -> Result<BigInt, CliError> {
    v.as_number()
        .and_then(|n| n.to_string().parse().ok())
        .ok_or_else(|| CliError::Usage(format!("expected an integer, got {v}")))
}

fn as_f64(v: &Value) -> Result<f64, CliError> {
    v.as_f64().ok_or_else(|| CliError::Usage(format!("expected a number, got {v}")))
}

fn as_array(v: &Value) -> Result<&Vec<Value>, CliError> {
    v.as_array().ok_or_else(|| CliError::Usage(format!("expected an array, got {v}")))
}

fn as_usize(v: &Value) -> Result<usize, CliError> {
    as_big(v)?.to_usize().ok_or_else(|| CliError::Usage(format!("expected an index, got {v}")))
}

/// Inverse of [`emit_report`] for the JSON format.
pub fn parse_report(text: &str) -> Result<HolonomyReport, CliError> {
    let v: Value = serde_json::from_str(text).map_err(|e| CliError::Usage(e.to_string()))?;
    let params = as_array(field(&v, "p")?)?
        .iter()
        .map(|x| as_big(x)?.to_i64().ok_or_else(|| CliError::Usage("p out of range".into())))
        .collect::<Result<Vec<i64>, _>>()?;
    let cycles = as_array(field(&v, "cycles")?)?
        .iter()
        .map(|c| as_array(c)?.iter().map(as_usize).collect())
        .collect::<Result<Vec<Vec<usize>>, CliError>>()?;
    let size = cycles.iter().map(Vec::len).sum();
    let mut image = vec![0; size];
    for c in &cycles {
        for (i, &k) in c.iter().enumerate() {
            *image.get_mut(k).ok_or_else(|| CliError::Usage("cycle index out of range".into()))? =
                c[(i + 1) % c.len()];
        }
    }
    let sigma = as_array(field(&v, "sigma")?)?
        .iter()
        .map(|z| Ok(Complex64::new(as_f64(field(z, "re")?)?, as_f64(field(z, "im")?)?)))
        .collect::<Result<Vec<_>, CliError>>()?;
    let gamma_per_cycle =
        as_array(field(&v, "gamma")?)?.iter().map(as_f64).collect::<Result<Vec<_>, _>>()?;
    let n = as_usize(field(&v, "n")?)?;
    if n != params.len() {
        return Err(CliError::Usage(format!("n = {n} but p has {} entries", params.len())));
    }
    Ok(HolonomyReport {
        params,
        permutation: Permutation::new(image).map_err(CliError::Compute)?,
        sigma,
        cycles,
        gamma_per_cycle,
        nu: as_big(field(&v, "nu")?)?,
        d_n: as_big(field(&v, "d_N")?)?,
        degenerate: field(&v, "degenerate")?
            .as_bool()
            .ok_or_else(|| CliError::Usage("degenerate must be a boolean".into()))?,
    })
}

/// One named invariant check and its outcome.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    /// `None` when the check does not apply to this configuration.
    pub passed: Option<bool>,
    pub detail: String,
}

fn check(name: &'static str, passed: bool, detail: impl Into<String>) -> Check {
    Check { name, passed: Some(passed), detail: detail.into() }
}

fn skip(name: &'static str, why: &str) -> Check {
    Check { name, passed: None, detail: why.into() }
}

/// Runs every invariant that applies to `config.params` at default tolerances.
pub fn verify_checks(config: &RunConfig) -> Result<Vec<Check>, CliError> {
    let params = &config.params;
    require_table_size(params)?;
    let numeric = params.qubits() <= config.max_qubits;
    let nondegenerate = !params.degenerate_spectrum();
    let all_odd = params.require_all_odd().is_ok();
    let mut checks = Vec::new();

    let balance = QuantumNumbers::all(params.qubits()).all(|n| {
        let sr = sr_full(params, &n);
        principal_number(params, &sr.s).value()
            == &(principal_number(params, &n).value() + slope(params) - (sr.r << params.qubits()))
    });
    checks.push(check("balance", balance, "m(s) = m(n) + d_N - 2^N r for every n"));
    checks.push(check(
        "bijection",
        is_bijective(params) == nondegenerate,
        "n -> m mod 2^N is a bijection iff p_2..p_N are odd",
    ));
    checks.push(check("sum_rule", winding_sum(params) == slope(params), "sum of r(n) equals d_N"));

    if numeric {
        let lambda = 0.37;
        let u = build_un(lambda, params)?;
        let unitary = u.unitarity_deviation();
        checks.push(check("unitary", unitary <= 1e-10, format!("deviation {}", fmt_f64(unitary))));
        let mut numeric_angles: Vec<f64> = eig_unitary(&u, 1e-9)?
            .angles()
            .iter()
            .map(|a| a.rem_euclid(TAU))
            .collect();
        numeric_angles.sort_by(f64::total_cmp);
        let mut analytic: Vec<f64> = QuantumNumbers::all(params.qubits())
            .map(|n| eigenangle_n(params, &n, lambda).rem_euclid(TAU))
            .collect();
        analytic.sort_by(f64::total_cmp);
        let spectrum_err = numeric_angles
            .iter()
            .zip(&analytic)
            .map(|(a, b)| crate::linalg::circular_distance(*a, *b))
            .fold(0.0, f64::max);
        checks.push(check("spectrum", spectrum_err <= 1e-8, format!("max error {}", fmt_f64(spectrum_err))));
        let residual = QuantumNumbers::all(params.qubits())
            .map(|n| {
                let v = eigenvector_n(params, &n, lambda);
                let phase = Complex64::from_polar(1.0, eigenangle_n(params, &n, lambda));
                u.apply(&v)
                    .iter()
                    .zip(v.amplitudes())
                    .map(|(a, b)| (a - b * phase).norm_sqr())
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max);
        checks.push(check("eigenvectors", residual <= 1e-10, format!("max residual {}", fmt_f64(residual))));
    } else {
        for name in ["unitary", "spectrum", "eigenvectors"] {
            checks.push(skip(name, "above the numeric qubit cap"));
        }
    }

    if all_odd {
        let routes = holonomy_analytic_exact(params)? == holonomy_recursive_exact(params)?;
        checks.push(check("holonomy_recursion", routes, "product form equals element recursion"));
        checks.push(check("commutator", commutator_identity_holds(params)?, "[J_D, M] identity"));
        let gamma = (gamma_from_sigma(params)? - gamma_analytic(params)?).abs() < 1e-12;
        checks.push(check("gamma", gamma, "det sigma = (-1)^d_N"));
        let unique = params.qubits() <= SUBSET_SUM_MAX_QUBITS
            && (0..params.dim()).all(|m| decode(params, &BigInt::from(m), true).len() == 1);
        checks.push(check("modular_decode", unique, "one solution per residue"));
    } else {
        for name in ["holonomy_recursion", "commutator", "gamma", "modular_decode"] {
            checks.push(skip(name, "requires all-odd p"));
        }
    }

    if numeric && all_odd {
        let circuit = HierarchicalCircuit::with_cap(params.clone(), config.max_qubits)?;
        let (m, _) = holonomy_numeric_circuit(&circuit, config.steps)?;
        let err = m.max_abs_diff(&holonomy_analytic(params)?);
        checks.push(check("holonomy_numeric", err <= 1e-6, format!("max deviation {}", fmt_f64(err))));
    } else {
        checks.push(skip("holonomy_numeric", "requires all-odd p within the numeric cap"));
    }
    if numeric {
        let circuit = HierarchicalCircuit::with_cap(params.clone(), config.max_qubits)?;
        let value = winding_quadrature(&circuit, config.steps)?;
        let ok = (value - value.round()).abs() <= 0.1
            && BigInt::from(value.round() as i64) == winding_number_analytic(params);
        checks.push(check("winding", ok, format!("quadrature {}", fmt_f64(value))));
    } else {
        checks.push(skip("winding", "above the numeric qubit cap"));
    }
    if nondegenerate && numeric {
        let gap = spectral_gap(params)?;
        let u = build_un(0.37, params)?;
        let found = crate::linalg::min_circular_gap(eig_unitary(&u, 1e-9)?.angles());
        let ok = (found - gap).abs() <= 1e-10;
        checks.push(check("gap", ok, format!("numeric {} vs {}", fmt_f64(found), fmt_f64(gap))));
    } else {
        checks.push(skip("gap", "requires a nondegenerate spectrum within the numeric cap"));
    }
    Ok(checks)
}

fn verify(config: &RunConfig) -> Result<RunOutput, CliError> {
    let checks = verify_checks(config)?;
    let success = checks.iter().all(|c| c.passed != Some(false));
    let status = |c: &Check| match c.passed {
        Some(true) => "pass",
        Some(false) => "fail",
        None => "skip",
    };
    let text = match config.format {
        Format::Csv => {
            let mut out = String::from("check,status,detail\n");
            for c in &checks {
                let _ = writeln!(out, "{},{},{}", c.name, status(c), c.detail.replace(',', ";"));
            }
            out
        }
        Format::Json => {
            let items: Vec<String> = checks
                .iter()
                .map(|c| {
                    format!(
                        "{{\"check\":{},\"status\":{},\"detail\":{}}}",
                        json_str(c.name),
                        json_str(status(c)),
                        json_str(&c.detail)
                    )
                })
                .collect();
            format!("{{\"success\":{success},\"checks\":[{}]}}\n", items.join(","))
        }
    };
    Ok(RunOutput { bytes: text.into_bytes(), success })
}
