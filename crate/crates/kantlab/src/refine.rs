//! Family sups of every check across grid sizes.

use std::path::Path;

use serde_json::{json, Value};

use kantlab_core::Verdict;

use crate::config::{CheckerId, SpaceKindSpec, SuiteConfig, SCHEMA_VERSION};
use crate::error::HarnessError;
use crate::report::{csv_with_schema, ensure_dir, json_num, verdict_name, write_text};
use crate::suite::{run_suite, RunOptions};

pub const DEFAULT_REFINE_TOL: f64 = 0.02;
pub const REFINE_CSV: &str = "refine.csv";
pub const REFINE_JSON: &str = "refine.json";

#[derive(Debug, Clone)]
pub struct RefineLine {
    pub check: usize,
    pub checker: CheckerId,
    pub source: String,
    pub verdict: Option<Verdict>,
    /// One sup per grid size, NaN where every job errored.
    pub sups: Vec<f64>,
    pub failed: usize,
    pub errors: usize,
    /// |s_last − s_prev| / |s_prev| between the two finest grids.
    pub relative_move: f64,
    pub flagged: bool,
}

#[derive(Debug, Clone)]
pub struct RefineStudy {
    pub n_list: Vec<usize>,
    pub tolerance: f64,
    pub lines: Vec<RefineLine>,
    /// Exit code of the first run whose jobs errored (2 or 3), else 0.
    pub error_code: i32,
}

pub fn relative_move(prev: f64, last: f64) -> f64 {
    if prev == last {
        0.0
    } else if prev == 0.0 || !prev.is_finite() || !last.is_finite() {
        f64::INFINITY
    } else {
        (last - prev).abs() / prev.abs()
    }
}

/// The config with every space rebuilt at `n` nodes.
pub fn at_grid_size(cfg: &SuiteConfig, n: usize) -> SuiteConfig {
    let mut out = cfg.clone();
    for s in &mut out.spaces {
        s.n = n;
    }
    out
}

/// Runs the suite once per grid size; constant-free checks whose sup moves
/// more than the tolerance between the two largest sizes are flagged.
pub fn refine_study(cfg: &SuiteConfig, n_list: &[usize], opts: &RunOptions) -> Result<RefineStudy, HarnessError> {
    let mut sizes = n_list.to_vec();
    sizes.sort_unstable();
    sizes.dedup();
    if sizes.len() < 2 {
        return Err(HarnessError::Config("refine needs at least two distinct grid sizes".into()));
    }
    if cfg.spaces.iter().any(|s| s.kind == SpaceKindSpec::Circle) {
        if let Some(n) = sizes.iter().find(|n| *n % 2 == 1) {
            return Err(HarnessError::Config(format!("grid size {n} is odd but the config has a circle")));
        }
    }
    let tolerance = cfg.tolerances.refine.unwrap_or(DEFAULT_REFINE_TOL) * opts.tol_scale;
    let mut lines: Vec<RefineLine> = Vec::new();
    let mut error_code = 0;
    for (k, &n) in sizes.iter().enumerate() {
        let run = run_suite(&at_grid_size(cfg, n), opts)?;
        let code = run.exit_code();
        if error_code == 0 && code >= 2 {
            error_code = code;
        }
        for s in run.summaries(cfg.checks.len()) {
            if k == 0 {
                lines.push(RefineLine {
                    check: s.check,
                    checker: s.checker,
                    source: s.source.clone(),
                    verdict: s.verdict,
                    sups: Vec::with_capacity(sizes.len()),
                    failed: 0,
                    errors: 0,
                    relative_move: 0.0,
                    flagged: false,
                });
            }
            let line = lines.iter_mut().find(|l| l.check == s.check).expect("same checks at every size");
            line.sups.push(if s.errors == s.rows { f64::NAN } else { s.sup_ratio });
            line.failed += s.failed;
            line.errors += s.errors;
            line.verdict = line.verdict.or(s.verdict);
        }
    }
    for line in &mut lines {
        let m = line.sups.len();
        line.relative_move = relative_move(line.sups[m - 2], line.sups[m - 1]);
        line.flagged = line.verdict == Some(Verdict::ConstantFree) && !(line.relative_move <= tolerance);
    }
    Ok(RefineStudy { n_list: sizes, tolerance, lines, error_code })
}

impl RefineStudy {
    /// 0 when nothing is flagged and every explicit check passed at every size.
    pub fn exit_code(&self) -> i32 {
        if self.error_code != 0 {
            self.error_code
        } else if self.lines.iter().any(|l| l.flagged || l.failed > 0) {
            1
        } else {
            0
        }
    }

    pub fn csv(&self) -> Result<Vec<u8>, HarnessError> {
        let header = ["check", "checker", "source", "verdict", "n", "sup_ratio"];
        csv_with_schema(&header, |w| {
            for l in &self.lines {
                for (n, sup) in self.n_list.iter().zip(&l.sups) {
                    w.write_record([
                        l.check.to_string(),
                        l.checker.name().to_string(),
                        l.source.clone(),
                        l.verdict.map_or("error", verdict_name).to_string(),
                        n.to_string(),
                        format!("{sup:e}"),
                    ])?;
                }
            }
            Ok(())
        })
    }

    pub fn json(&self) -> Value {
        let lines: Vec<Value> = self
            .lines
            .iter()
            .map(|l| {
                json!({
                    "check": l.check,
                    "checker": l.checker.name(),
                    "source": l.source,
                    "verdict": l.verdict.map(verdict_name),
                    "sups": l.sups.iter().map(|s| json_num(*s)).collect::<Vec<_>>(),
                    "relative_move": json_num(l.relative_move),
                    "flagged": l.flagged,
                    "failed": l.failed,
                    "errors": l.errors,
                })
            })
            .collect();
        json!({
            "schema_version": SCHEMA_VERSION,
            "command": "refine",
            "n_list": self.n_list,
            "tolerance": self.tolerance,
            "exit_code": self.exit_code(),
            "checks": lines,
        })
    }

    pub fn write(&self, dir: &Path) -> Result<(), HarnessError> {
        ensure_dir(dir)?;
        write_text(&dir.join(REFINE_CSV), &self.csv()?)?;
        write_text(&dir.join(REFINE_JSON), &serde_json::to_vec_pretty(&self.json())?)
    }
}
