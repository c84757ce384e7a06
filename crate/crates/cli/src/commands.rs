//! Subcommand bodies. Each returns its stdout text; notices go to the
//! caller as a separate list so they can be sent to stderr.

use crate::config::{AuxConfig, ModelConfig};
use crate::format::sig12;
use crate::{CliError, CliResult};
use keyregion::binary::{self, BinaryExampleParams, ExampleReport};
use keyregion::frontier::{brute_force_oracle, params_hash, trace_frontier, Coordinate, OracleConfig};
use keyregion::prob::{Mode, SystemModel};
use keyregion::regions::evaluate;
use keyregion::{Execution, SearchConfig};
use std::fmt::Write;
use std::path::Path;

pub const FRONTIER_HEADER: &str = "x_param,R_k,R_w,Delta,C,aux_id";

/// Loads a model, switched to `region` when given.
pub fn load_model(path: &Path, region: Option<Mode>) -> CliResult<SystemModel> {
    let model = ModelConfig::load(path)?.build()?;
    match region {
        Some(r) if r != model.mode() => model
            .with_mode(r)
            .map_err(|e| CliError::Mismatch(e.to_string())),
        _ => Ok(model),
    }
}

pub fn eval(config: &Path, aux: &Path) -> CliResult<String> {
    let model = load_model(config, None)?;
    let aux = AuxConfig::load(aux)?.build(&model)?;
    let ev = evaluate(&model, &aux).map_err(CliError::from_run)?;
    let p = ev.point;
    let mode = model.mode();
    let mut out = String::new();
    writeln!(out, "region {} ({})", mode.region_id(), mode.description()).unwrap();
    for (name, v) in [
        ("R_k", p.key_rate),
        ("R_w", p.storage_rate),
        ("Delta", p.leakage_rate),
        ("C", p.cost),
    ] {
        writeln!(out, "{name:<6}{}", sig12(v)).unwrap();
    }
    if ev.key_clamped {
        writeln!(out, "note: key expression was negative and is reported as 0").unwrap();
    }
    Ok(out)
}

/// Search flags for [`frontier`].
#[derive(Debug, Clone)]
pub struct FrontierOptions {
    pub search: SearchConfig,
    pub x_param: Coordinate,
    /// Enumerate the full grid instead of searching.
    pub oracle: bool,
}

impl Default for FrontierOptions {
    fn default() -> Self {
        Self {
            search: SearchConfig::default(),
            x_param: Coordinate::Leakage,
            oracle: false,
        }
    }
}

/// Frontier CSV and the search notices.
pub fn frontier(model: &SystemModel, opts: &FrontierOptions) -> CliResult<(String, Vec<String>)> {
    let s = &opts.search;
    let mode = model.mode();
    let front = if opts.oracle {
        let (bu, bv) = keyregion::cardinality_bounds(model, mode);
        let cfg = OracleConfig {
            card_a_use: s.card_a_use,
            card_u: s.card_u.unwrap_or(bu.min(2)),
            card_v: s.card_v.unwrap_or(bv.min(2)),
            step: s.step,
            cost_cap: s.cost_cap,
            execution: s.execution,
        };
        brute_force_oracle(model, mode, &cfg)
    } else {
        trace_frontier(model, mode, s)
    }
    .map_err(CliError::from_run)?;

    let mut out = String::from(FRONTIER_HEADER);
    out.push('\n');
    for c in &front.corners {
        let p = &c.point;
        writeln!(
            out,
            "{},{},{},{},{},{:016x}",
            sig12(opts.x_param.of(p)),
            sig12(p.key_rate),
            sig12(p.storage_rate),
            sig12(p.leakage_rate),
            sig12(p.cost),
            params_hash(&c.aux.flattened())
        )
        .unwrap();
    }
    Ok((out, front.notices))
}

fn report_text(report: &ExampleReport) -> String {
    let mut out = String::new();
    if report.custom {
        writeln!(out, "custom parameters (not the reference run): {:?}", report.params).unwrap();
    }
    if !report.precondition {
        writeln!(out, "convexity precondition fails; trade-off sweep skipped").unwrap();
    }
    for c in &report.checks {
        let verdict = match (c.passed(), report.custom) {
            (true, _) => "PASS",
            (false, true) => "DIFF",
            (false, false) => "FAIL",
        };
        let observed = c.observed.map_or("n/a".to_string(), sig12);
        writeln!(
            out,
            "{verdict} {}: observed {observed}, expected {} ± {}",
            c.name,
            sig12(c.expected),
            sig12(c.tolerance)
        )
        .unwrap();
    }
    if let Some(d) = report.sum_deviation {
        let verdict = if report.sum_ok() { "PASS" } else { "FAIL" };
        writeln!(out, "{verdict} R_k + Delta = H(X) over {} sweep points: max deviation {}", report.sweep.len(), sig12(d)).unwrap();
    }
    if let Some(m) = report.max_key {
        writeln!(out, "max key rate at x_bar = {}", sig12(m.x_bar)).unwrap();
    }
    out
}

/// Report text; `Err` carries the same text when the run fails.
pub fn verify_example(params: &BinaryExampleParams, resolution: f64, exec: Execution) -> CliResult<String> {
    let report = binary::reproduce_example(params, resolution, exec).map_err(|e| match e {
        keyregion::Error::Domain(_) => CliError::Config(e.to_string()),
        e => CliError::from_run(e),
    })?;
    let text = report_text(&report);
    if report.passed() {
        Ok(text)
    } else {
        Err(CliError::Verification(text))
    }
}

/// `x̄` sweep as CSV with the fixed storage rate and cost as comments.
pub fn tradeoff(params: &BinaryExampleParams, resolution: f64, exec: Execution) -> CliResult<String> {
    params.validate().map_err(|e| CliError::Config(e.to_string()))?;
    if !binary::convexity_precondition(params) {
        return Err(CliError::Verification(
            "convexity precondition fails for these parameters".into(),
        ));
    }
    let (storage, cost) = binary::fixed_rates(params).map_err(CliError::from_run)?;
    let rows = binary::tradeoff_sweep(params, resolution, exec).map_err(|e| match e {
        keyregion::Error::Domain(_) => CliError::Config(e.to_string()),
        e => CliError::from_run(e),
    })?;
    let mut out = String::new();
    writeln!(out, "# R_w = {}", sig12(storage)).unwrap();
    writeln!(out, "# C = {}", sig12(cost)).unwrap();
    writeln!(out, "x_bar,R_k,Delta").unwrap();
    for r in rows {
        writeln!(out, "{},{},{}", sig12(r.x_bar), sig12(r.key_rate), sig12(r.leakage_rate)).unwrap();
    }
    Ok(out)
}
