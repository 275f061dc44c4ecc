//! Scenario execution and CSV/JSON emission.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use nuccr_core::ccr::{ccr_mixed, ccr_pure, Component};
use nuccr_core::verify::{self, time_grid, VerifyOptions, VerifyReport};
use nuccr_core::{measures, pair, single, CcrReport, PhysParams};
use serde::Serialize;
use serde_json::json;

use crate::config::{PairQuantity, Scenario, ScenarioConfig, SingleQuantity};
use crate::CliError;

/// CCR rows whose residual exceeds this abort the run with exit code 1.
pub const RESIDUAL_LIMIT: f64 = 1e-8;

/// A rectangular block of numbers with named columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    fn new(columns: &[&'static str]) -> Self {
        Self { columns: columns.to_vec(), rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    /// Largest `|value|` over every column whose name starts with `residual`.
    pub fn worst_residual(&self) -> f64 {
        let idx: Vec<usize> =
            self.columns.iter().enumerate().filter(|(_, c)| c.starts_with("residual")).map(|(i, _)| i).collect();
        let mut worst = 0.0f64;
        for row in &self.rows {
            for &i in &idx {
                let r = row[i].abs();
                if r.is_nan() {
                    return f64::NAN;
                }
                worst = worst.max(r);
            }
        }
        worst
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| *c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }
}

/// Scientific notation with `precision` significant digits; never locale-dependent.
pub fn format_number(v: f64, precision: usize) -> String {
    if v == 0.0 {
        // avoid emitting "-0"
        return format!("{:.*e}", precision.saturating_sub(1), 0.0);
    }
    format!("{:.*e}", precision.saturating_sub(1), v)
}

pub fn render_csv(comment: &str, table: &Table, precision: usize) -> String {
    let mut out = String::new();
    out.push_str("# ");
    out.push_str(comment);
    out.push('\n');
    out.push_str(&table.columns.join(","));
    out.push('\n');
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(|&v| format_number(v, precision)).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

fn ccr_values(report: &CcrReport, order: &[Component]) -> Vec<f64> {
    let mut v: Vec<f64> = order.iter().map(|c| report.get(*c).unwrap_or(f64::NAN)).collect();
    v.push(report.residual);
    v
}

const PURE_ORDER: [Component; 3] = [Component::Coherence, Component::Predictability, Component::Entropy];
const MIXED_ORDER: [Component; 4] =
    [Component::ConditionalEntropy, Component::Predictability, Component::Coherence, Component::MutualInformation];

pub fn single_table(q: SingleQuantity, params: &PhysParams, times: &[f64]) -> Result<Table, CliError> {
    let mut table = match q {
        SingleQuantity::Purity => Table::new(&["t", "purity"]),
        SingleQuantity::Ccr => Table::new(&["t", "coherence", "predictability", "entropy", "residual"]),
        SingleQuantity::Survival => Table::new(&["t", "p_ee", "p_ee_standard", "p_ee_left"]),
        SingleQuantity::Entropy => Table::new(&["t", "entropy"]),
    };
    for &t in times {
        let mut row = vec![t];
        match q {
            SingleQuantity::Purity => row.push(single::flavor_purity_closed(t, params)),
            SingleQuantity::Ccr => {
                let state = single::build_state(t, params)?;
                row.extend(ccr_values(&ccr_pure(&state, &single::FLAVOR)?, &PURE_ORDER));
            }
            SingleQuantity::Survival => {
                row.push(single::survival_probability(t, params));
                row.push(single::survival_probability_standard(t, params));
                row.push(single::delta_coeffs(1, t, params)?.0.norm_sqr());
            }
            SingleQuantity::Entropy => row.push(single::flavor_entropy(t, params)?),
        }
        table.push(row);
    }
    Ok(table)
}

pub fn pair_table(q: PairQuantity, params: &PhysParams, times: &[f64]) -> Result<Table, CliError> {
    let mut table = match q {
        PairQuantity::SpinCcrGlobal => Table::new(&["t", "coherence", "predictability", "entropy", "residual"]),
        PairQuantity::SpinCcrParties => {
            Table::new(&["t", "conditional_entropy", "predictability", "coherence", "mutual_information", "residual"])
        }
        PairQuantity::Purity => Table::new(&["t", "purity", "purity_alt", "concurrence"]),
        PairQuantity::Amplitude => return Err(CliError::Usage("amplitude sweeps momentum, not time".into())),
    };
    for &t in times {
        let mut row = vec![t];
        match q {
            PairQuantity::SpinCcrGlobal => {
                let state = pair::evolve_pair_state(t, params)?;
                row.extend(ccr_values(&ccr_pure(&state, &pair::SPINS)?, &PURE_ORDER));
            }
            PairQuantity::SpinCcrParties => {
                let spins = pair::evolve_pair_state(t, params)?.reduced(&pair::SPINS)?;
                row.extend(ccr_values(&ccr_mixed(&spins, &[pair::NUBAR_SPIN])?, &MIXED_ORDER));
            }
            PairQuantity::Purity => {
                let spins = pair::spin_density_closed(t, params)?;
                row.push(spins.purity());
                row.push(pair::alt_spin_purity(t, params)?);
                row.push(measures::concurrence(&spins.to_density_matrix()?)?);
            }
            PairQuantity::Amplitude => unreachable!(),
        }
        table.push(row);
    }
    Ok(table)
}

/// `2|AB|` over `p/m1 ∈ [0, p_max]`.
pub fn amplitude_table(cfg: &ScenarioConfig, p_max: f64) -> Result<Table, CliError> {
    let mut table = Table::new(&["p_over_m1", "amplitude", "asymptote", "a", "b"]);
    for p in time_grid(p_max, cfg.steps) {
        let params = cfg.params(p)?;
        let ab = pair::pair_ab(&params)?;
        table.push(vec![p, pair::entanglement_amplitude(&params)?, pair::amplitude_asymptote(&params), ab.a, ab.b]);
    }
    Ok(table)
}

#[derive(Debug, Serialize)]
struct Sidecar<'a> {
    config: &'a ScenarioConfig,
    p_over_m1: Option<f64>,
    t_max: Option<f64>,
    axis_unit: &'static str,
    columns: &'a [&'static str],
    rows: usize,
    worst_residual: f64,
}

/// One emitted table.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub csv: PathBuf,
    pub sidecar: PathBuf,
    pub table: Table,
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    let mut f = fs::File::create(path).map_err(|e| io_err(path, e))?;
    f.write_all(contents.as_bytes()).map_err(|e| io_err(path, e))
}

fn emit(
    cfg: &ScenarioConfig,
    stem: &str,
    comment: &str,
    table: Table,
    p: Option<f64>,
    t_max: Option<f64>,
) -> Result<Output, CliError> {
    fs::create_dir_all(&cfg.out_path).map_err(|e| io_err(&cfg.out_path, e))?;
    let csv = cfg.out_path.join(format!("{stem}.csv"));
    let sidecar = cfg.out_path.join(format!("{stem}.json"));
    write_file(&csv, &render_csv(comment, &table, cfg.precision))?;
    let meta = Sidecar {
        config: cfg,
        p_over_m1: p,
        t_max,
        axis_unit: if p.is_some() { "1/m1" } else { "m1" },
        columns: &table.columns,
        rows: table.rows.len(),
        worst_residual: table.worst_residual(),
    };
    let mut json = serde_json::to_string_pretty(&meta).map_err(|e| CliError::Io(e.to_string()))?;
    json.push('\n');
    write_file(&sidecar, &json)?;
    Ok(Output { csv, sidecar, table })
}

fn params_comment(cfg: &ScenarioConfig) -> String {
    format!(
        "sin2_theta={} dm2_over_m1sq={} ml_over_m1={} steps={}",
        cfg.sin2_theta, cfg.dm2_over_m1sq, cfg.ml_over_m1, cfg.steps
    )
}

/// Runs a single or pair scenario, writing one CSV (plus sidecar) per momentum.
///
/// Files are written even when a residual check fails, so the offending rows
/// can be inspected; the error is returned afterwards.
pub fn run_scenario(cfg: &ScenarioConfig) -> Result<Vec<Output>, CliError> {
    let stem = cfg.scenario.stem();
    let mut outputs = Vec::new();
    if cfg.scenario == Scenario::Pair(PairQuantity::Amplitude) {
        let p_max = cfg.p_over_m1.iter().copied().fold(0.0, f64::max);
        if p_max <= 0.0 {
            return Err(CliError::Usage("amplitude sweep needs a positive --p-over-m1".into()));
        }
        let table = amplitude_table(cfg, p_max)?;
        let comment = format!("momentum p in units of m1, swept over [0, {p_max}]; {}", params_comment(cfg));
        outputs.push(emit(cfg, &stem, &comment, table, None, None)?);
        return Ok(outputs);
    }
    for &p in &cfg.p_over_m1 {
        let params = cfg.params(p)?;
        let t_max = cfg.t_max.unwrap_or_else(|| params.flavor_window());
        if !t_max.is_finite() {
            return Err(CliError::Usage("degenerate masses: pass --t-max explicitly".into()));
        }
        let times = time_grid(t_max, cfg.steps);
        let table = match cfg.scenario {
            Scenario::Single(q) => single_table(q, &params, &times)?,
            Scenario::Pair(q) => pair_table(q, &params, &times)?,
            Scenario::Verify => return Err(CliError::Usage("verify is not a scenario".into())),
        };
        let comment = format!("time t in units of 1/m1; p_over_m1={p} t_max={t_max}; {}", params_comment(cfg));
        outputs.push(emit(cfg, &format!("{stem}_p{p}"), &comment, table, Some(p), Some(t_max))?);
    }
    let worst =
        outputs.iter().map(|o| o.table.worst_residual()).fold(0.0, |a: f64, b| if b.is_nan() { b } else { a.max(b) });
    if worst.is_nan() || worst > RESIDUAL_LIMIT {
        return Err(CliError::Invariant(format!("CCR residual {worst:e} exceeds {RESIDUAL_LIMIT:e}")));
    }
    Ok(outputs)
}

pub fn verify_options(cfg: &ScenarioConfig) -> VerifyOptions {
    VerifyOptions {
        p_over_m1: cfg.p_over_m1.clone(),
        sin2_theta: cfg.sin2_theta,
        dm2_over_m1sq: cfg.dm2_over_m1sq,
        ml_over_m1: cfg.ml_over_m1,
        steps: cfg.steps,
        fault: cfg.fault,
    }
}

fn finite_or_null(v: f64) -> serde_json::Value {
    if v.is_finite() {
        json!(v)
    } else {
        serde_json::Value::Null
    }
}

pub fn report_json(report: &VerifyReport) -> serde_json::Value {
    let checks: Vec<_> = report
        .checks
        .iter()
        .map(|c| {
            json!({
                "name": c.name,
                "max_residual": finite_or_null(c.max_residual),
                "tolerance": c.tolerance,
                "pass": c.pass,
            })
        })
        .collect();
    let recon: Vec<_> = report
        .reconciliation
        .iter()
        .map(|(p, entries)| {
            let entries: Vec<_> = entries
                .iter()
                .map(|e| {
                    json!({
                        "quantity": e.quantity,
                        "alt": finite_or_null(e.alt),
                        "derived": finite_or_null(e.derived),
                        "brute": finite_or_null(e.brute),
                        "alt_deviation": finite_or_null(e.alt_deviation()),
                        "derived_deviation": finite_or_null(e.derived_deviation()),
                        "tolerance": e.tolerance,
                        "alt_agrees": e.alt_agrees(),
                        "derived_agrees": e.derived_agrees(),
                        "note": e.note,
                    })
                })
                .collect();
            json!({ "p_over_m1": p, "entries": entries })
        })
        .collect();
    json!({ "passed": report.passed(), "checks": checks, "reconciliation": recon })
}

/// Runs the invariant suite. The JSON is returned whether or not it passed.
pub fn run_verify(cfg: &ScenarioConfig) -> Result<(serde_json::Value, bool), CliError> {
    let report = verify::run(&verify_options(cfg))?;
    Ok((report_json(&report), report.passed()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format_is_fixed() {
        assert_eq!(format_number(1.0, 3), "1.00e0");
        assert_eq!(format_number(-0.0, 3), "0.00e0");
        assert_eq!(format_number(-1.25e-7, 2), "-1.2e-7");
        assert_eq!(format_number(12345.678, 12), "1.23456780000e4");
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new(&["t", "residual"]);
        t.push(vec![0.0, 1e-12]);
        t.push(vec![0.5, -3e-11]);
        let s = render_csv("time t in units of 1/m1", &t, 3);
        assert_eq!(s, "# time t in units of 1/m1\nt,residual\n0.00e0,1.00e-12\n5.00e-1,-3.00e-11\n");
        assert_eq!(t.worst_residual(), 3e-11);
        t.push(vec![1.0, f64::NAN]);
        assert!(t.worst_residual().is_nan());
    }
}
