//! CSV rows, timings and the JSON summary of a run.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::{json, Value};

use kantlab_core::{InequalityParams, Verdict};

use crate::config::SCHEMA_VERSION;
use crate::error::HarnessError;
use crate::suite::{Outcome, SuiteRun};

pub const RESULTS_FILE: &str = "results.csv";
pub const TIMINGS_FILE: &str = "timings.csv";
pub const SUMMARY_FILE: &str = "summary.json";

pub fn schema_line() -> String {
    format!("# schema_version={SCHEMA_VERSION}\n")
}

pub fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::ExplicitConstant => "explicit",
        Verdict::Pointwise => "pointwise",
        Verdict::ConstantFree => "constant_free",
    }
}

const PARAM_COLUMNS: [&str; 12] = ["p", "q", "n_dim", "theta", "r", "alpha", "s", "k", "lambda", "c_level", "u", "t"];

fn param_values(p: &InequalityParams) -> [f64; 12] {
    [p.p, p.q, p.n_dim, p.theta, p.r, p.alpha, p.s, p.k, p.lambda, p.c_level, p.u, p.t]
}

fn num(x: f64) -> String {
    if x.is_nan() {
        String::new()
    } else {
        format!("{x:e}")
    }
}

/// Non-NaN parameters, by name.
pub fn param_map(p: &InequalityParams) -> BTreeMap<&'static str, Value> {
    PARAM_COLUMNS
        .iter()
        .zip(param_values(p))
        .filter(|(_, v)| !v.is_nan())
        .map(|(k, v)| (*k, json_num(v)))
        .collect()
}

/// JSON has no infinities; they are written as strings.
pub fn json_num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x.is_nan() {
        Value::Null
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

pub fn write_text(path: &Path, text: &[u8]) -> Result<(), HarnessError> {
    fs::write(path, text).map_err(|e| HarnessError::io(path, e))
}

pub fn ensure_dir(dir: &Path) -> Result<(), HarnessError> {
    fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))
}

/// CSV text with the schema line on top.
pub fn csv_with_schema<F>(header: &[&str], fill: F) -> Result<Vec<u8>, HarnessError>
where
    F: FnOnce(&mut csv::Writer<&mut Vec<u8>>) -> Result<(), HarnessError>,
{
    let mut buf = schema_line().into_bytes();
    {
        let mut w = csv::Writer::from_writer(&mut buf);
        w.write_record(header)?;
        fill(&mut w)?;
        w.flush().map_err(|e| HarnessError::io("<csv buffer>", e))?;
    }
    Ok(buf)
}

pub fn results_csv(run: &SuiteRun) -> Result<Vec<u8>, HarnessError> {
    let mut header = vec!["row", "check", "checker", "source", "case"];
    header.extend(PARAM_COLUMNS);
    header.extend(["grid_n", "lhs", "rhs", "ratio", "slack", "verdict", "tolerance", "pass", "notes"]);
    csv_with_schema(&header, |w| {
        for (i, row) in run.rows.iter().enumerate() {
            let mut rec = vec![i.to_string(), row.check.to_string(), row.checker.name().into(), row.source.clone()];
            rec.push(row.case.clone());
            match &row.outcome {
                Outcome::Report(r) => {
                    rec.extend(param_values(&r.params).map(num));
                    rec.push(r.grid_n.to_string());
                    rec.extend([r.lhs, r.rhs, r.ratio, r.slack].map(num));
                    rec.push(verdict_name(r.verdict).into());
                    rec.push(num(r.tolerance));
                    rec.push(r.pass().map_or(String::new(), |p| p.to_string()));
                    rec.push(r.notes.clone());
                }
                Outcome::Error { message, .. } => {
                    rec.extend(std::iter::repeat_n(String::new(), PARAM_COLUMNS.len() + 5));
                    rec.extend(["error".into(), String::new(), "false".into(), message.clone()]);
                }
            }
            w.write_record(&rec)?;
        }
        Ok(())
    })
}

pub fn timings_csv(run: &SuiteRun) -> Result<Vec<u8>, HarnessError> {
    csv_with_schema(&["row", "check", "checker", "case", "seconds"], |w| {
        for (i, row) in run.rows.iter().enumerate() {
            w.write_record([
                i.to_string(),
                row.check.to_string(),
                row.checker.name().to_string(),
                row.case.clone(),
                format!("{:.6}", row.seconds),
            ])?;
        }
        Ok(())
    })
}

#[derive(Serialize)]
pub struct Environment {
    pub kantlab_version: &'static str,
    pub os: &'static str,
    pub arch: &'static str,
    pub workers: usize,
    pub available_parallelism: usize,
}

impl Environment {
    pub fn current(workers: usize) -> Self {
        Environment {
            kantlab_version: env!("CARGO_PKG_VERSION"),
            os: std::env::consts::OS,
            arch: std::env::consts::ARCH,
            workers,
            available_parallelism: std::thread::available_parallelism().map_or(1, |n| n.get()),
        }
    }
}

pub fn summary_json(run: &SuiteRun, checks: usize, config: &str) -> Value {
    let row_ref = |i: usize| {
        let row = &run.rows[i];
        let mut v = json!({ "row": i, "case": row.case });
        if let Some(r) = row.report() {
            v["params"] = json!(param_map(&r.params));
            v["lhs"] = json_num(r.lhs);
            v["rhs"] = json_num(r.rhs);
            v["ratio"] = json_num(r.ratio);
            v["slack"] = json_num(r.slack);
        }
        v
    };
    let checks_json: Vec<Value> = run
        .summaries(checks)
        .iter()
        .map(|s| {
            json!({
                "check": s.check,
                "checker": s.checker.name(),
                "source": s.source,
                "verdict": s.verdict.map(verdict_name),
                "rows": s.rows,
                "failed": s.failed,
                "errors": s.errors,
                "sup_ratio": json_num(s.sup_ratio),
                "min_slack": json_num(s.min_slack),
                "argmax": s.argmax.map(row_ref),
            })
        })
        .collect();
    let failures: Vec<Value> = run.failures().map(|(i, _)| row_ref(i)).collect();
    let errors: Vec<Value> = run
        .errors()
        .map(|(i, row)| match &row.outcome {
            Outcome::Error { message, numerical } => {
                json!({ "row": i, "checker": row.checker.name(), "message": message, "numerical": numerical })
            }
            Outcome::Report(_) => unreachable!(),
        })
        .collect();
    json!({
        "schema_version": SCHEMA_VERSION,
        "command": "check",
        "config": config,
        "seed": run.seed,
        "rows": run.rows.len(),
        "exit_code": run.exit_code(),
        "checks": checks_json,
        "failures": failures,
        "errors": errors,
        "environment": Environment::current(run.workers),
    })
}

/// Writes results.csv, timings.csv and summary.json into `dir`.
pub fn write_run(dir: &Path, run: &SuiteRun, checks: usize, config: &str) -> Result<(), HarnessError> {
    ensure_dir(dir)?;
    write_text(&dir.join(RESULTS_FILE), &results_csv(run)?)?;
    write_text(&dir.join(TIMINGS_FILE), &timings_csv(run)?)?;
    let summary = serde_json::to_vec_pretty(&summary_json(run, checks, config))?;
    write_text(&dir.join(SUMMARY_FILE), &summary)
}

/// Plain-text table of a summary file.
pub fn render_summary(summary: &Value) -> Result<String, HarnessError> {
    let bad = || HarnessError::Config("summary: not a kantlab summary file".into());
    let version = summary.get("schema_version").and_then(Value::as_u64).ok_or_else(bad)?;
    if version != u64::from(SCHEMA_VERSION) {
        return Err(HarnessError::Config(format!("summary: unsupported schema_version {version}")));
    }
    let checks = summary.get("checks").and_then(Value::as_array).ok_or_else(bad)?;
    let text = |v: &Value| match v {
        Value::Null => "-".to_string(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    };
    let mut out = format!(
        "{:>5}  {:<22} {:<18} {:<13} {:>6} {:>6} {:>6}  {:<24} {}\n",
        "check", "checker", "source", "verdict", "rows", "failed", "errors", "sup_ratio", "min_slack"
    );
    for c in checks {
        out.push_str(&format!(
            "{:>5}  {:<22} {:<18} {:<13} {:>6} {:>6} {:>6}  {:<24} {}\n",
            text(&c["check"]),
            text(&c["checker"]),
            text(&c["source"]),
            text(&c["verdict"]),
            text(&c["rows"]),
            text(&c["failed"]),
            text(&c["errors"]),
            text(&c["sup_ratio"]),
            text(&c["min_slack"]),
        ));
    }
    let failures = summary.get("failures").and_then(Value::as_array).map_or(0, Vec::len);
    let errors = summary.get("errors").and_then(Value::as_array).map_or(0, Vec::len);
    out.push_str(&format!(
        "{} rows, {failures} failed, {errors} errors, exit code {}\n",
        text(&summary["rows"]),
        text(&summary["exit_code"])
    ));
    Ok(out)
}
