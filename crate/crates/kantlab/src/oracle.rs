//! Exact transport solvers against the LP oracle and Sinkhorn on random small measures.

use std::collections::BTreeMap;
use std::path::Path;

use rand::Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use kantlab_core::space::{build_circle, build_weighted_line, potentials, SpaceRef};
use kantlab_core::transport::{wasserstein, wp_lp_oracle, wp_sinkhorn};

use crate::config::SCHEMA_VERSION;
use crate::error::HarnessError;
use crate::random::case_rng;
use crate::report::{csv_with_schema, ensure_dir, write_text};
use crate::suite::pool;

pub const ORACLE_MAX_NODES: usize = 32;
pub const EXACT_ABS_TOL: f64 = 1e-6;
pub const SINKHORN_REL_TOL: f64 = 1e-3;
/// Every this many cases the two measures coincide.
pub const IDENTICAL_EVERY: usize = 20;
pub const ORACLE_CSV: &str = "oracle.csv";
pub const ORACLE_JSON: &str = "oracle.json";
pub const ORDERS: [f64; 2] = [1.0, 2.0];

#[derive(Debug, Clone)]
pub struct OracleCase {
    pub case: usize,
    pub circle: bool,
    pub n: usize,
    pub p: f64,
    pub identical: bool,
    pub exact: f64,
    pub lp: f64,
    pub sinkhorn: f64,
}

impl OracleCase {
    pub fn exact_vs_lp(&self) -> f64 {
        (self.exact - self.lp).abs()
    }

    pub fn sinkhorn_vs_lp(&self) -> f64 {
        (self.sinkhorn - self.lp).abs()
    }

    pub fn sinkhorn_vs_lp_rel(&self) -> f64 {
        if self.lp > 0.0 {
            self.sinkhorn_vs_lp() / self.lp
        } else {
            self.sinkhorn_vs_lp()
        }
    }

    pub fn exact_vs_sinkhorn(&self) -> f64 {
        (self.exact - self.sinkhorn).abs()
    }
}

/// Worst deviations over one group of cases.
#[derive(Debug, Clone, Copy, Default)]
pub struct Deviations {
    pub cases: usize,
    pub exact_vs_lp: f64,
    pub sinkhorn_vs_lp: f64,
    pub sinkhorn_vs_lp_rel: f64,
    pub exact_vs_sinkhorn: f64,
}

impl Deviations {
    fn add(&mut self, c: &OracleCase) {
        self.cases += 1;
        self.exact_vs_lp = self.exact_vs_lp.max(c.exact_vs_lp());
        self.sinkhorn_vs_lp = self.sinkhorn_vs_lp.max(c.sinkhorn_vs_lp());
        self.sinkhorn_vs_lp_rel = self.sinkhorn_vs_lp_rel.max(c.sinkhorn_vs_lp_rel());
        self.exact_vs_sinkhorn = self.exact_vs_sinkhorn.max(c.exact_vs_sinkhorn());
    }

    pub fn within_tolerance(&self) -> bool {
        self.exact_vs_lp <= EXACT_ABS_TOL && self.sinkhorn_vs_lp_rel <= SINKHORN_REL_TOL
    }

    fn json(&self) -> Value {
        json!({
            "cases": self.cases,
            "exact_vs_lp": self.exact_vs_lp,
            "sinkhorn_vs_lp": self.sinkhorn_vs_lp,
            "sinkhorn_vs_lp_rel": self.sinkhorn_vs_lp_rel,
            "exact_vs_sinkhorn": self.exact_vs_sinkhorn,
            "within_tolerance": self.within_tolerance(),
        })
    }
}

#[derive(Debug, Clone)]
pub struct OracleStudy {
    pub seed: u64,
    pub cases: Vec<OracleCase>,
}

fn masses(rng: &mut impl Rng, n: usize) -> Vec<f64> {
    let mut m: Vec<f64> = (0..n).map(|_| if rng.gen_bool(0.15) { 0.0 } else { rng.gen_range(0.0..1.0) }).collect();
    if m.iter().all(|v| *v == 0.0) {
        m[0] = 1.0;
    }
    let total: f64 = m.iter().sum();
    m.iter().map(|v| v / total).collect()
}

fn space_for(circle: bool, n: usize) -> kantlab_core::Result<SpaceRef> {
    if circle {
        build_circle(n)
    } else {
        build_weighted_line(n, 1.0, potentials::flat, 0.0)
    }
}

fn run_case(seed: u64, case: usize) -> kantlab_core::Result<Vec<OracleCase>> {
    let mut rng = case_rng(seed, 0, case);
    let n = 2 * rng.gen_range(4..=ORACLE_MAX_NODES / 2);
    let circle = case % 2 == 1;
    let space = space_for(circle, n)?;
    let alpha = masses(&mut rng, n);
    let identical = case.is_multiple_of(IDENTICAL_EVERY);
    let beta = if identical { alpha.clone() } else { masses(&mut rng, n) };
    ORDERS
        .iter()
        .map(|&p| {
            Ok(OracleCase {
                case,
                circle,
                n,
                p,
                identical,
                exact: wasserstein(p, &alpha, &beta, &space)?.value,
                lp: wp_lp_oracle(p, &alpha, &beta, &space)?.value,
                sinkhorn: wp_sinkhorn(p, &alpha, &beta, &space, &[])?.value,
            })
        })
        .collect()
}

/// Runs `cases` seeded cases, each at every order in [`ORDERS`].
pub fn oracle_crosscheck(seed: u64, cases: usize, workers: usize) -> Result<OracleStudy, HarnessError> {
    let per_case: Vec<kantlab_core::Result<Vec<OracleCase>>> =
        pool(workers)?.install(|| (0..cases).into_par_iter().map(|c| run_case(seed, c)).collect());
    let mut out = Vec::with_capacity(2 * cases);
    for r in per_case {
        out.extend(r?);
    }
    Ok(OracleStudy { seed, cases: out })
}

impl OracleStudy {
    /// Worst deviations per (space, p).
    pub fn groups(&self) -> BTreeMap<(&'static str, String), Deviations> {
        let mut groups: BTreeMap<(&'static str, String), Deviations> = BTreeMap::new();
        for c in &self.cases {
            let space = if c.circle { "circle" } else { "line" };
            groups.entry((space, c.p.to_string())).or_default().add(c);
        }
        groups
    }

    pub fn overall(&self) -> Deviations {
        let mut d = Deviations::default();
        self.cases.iter().for_each(|c| d.add(c));
        d
    }

    /// Largest value any method reports on identical measures.
    pub fn identical_max(&self) -> f64 {
        self.cases
            .iter()
            .filter(|c| c.identical)
            .map(|c| c.exact.max(c.lp).max(c.sinkhorn))
            .fold(0.0, f64::max)
    }

    pub fn exit_code(&self) -> i32 {
        if self.overall().within_tolerance() {
            0
        } else {
            1
        }
    }

    pub fn csv(&self) -> Result<Vec<u8>, HarnessError> {
        let header = ["case", "space", "n", "p", "identical", "exact", "lp", "sinkhorn"];
        csv_with_schema(&header, |w| {
            for c in &self.cases {
                w.write_record([
                    c.case.to_string(),
                    if c.circle { "circle" } else { "line" }.to_string(),
                    c.n.to_string(),
                    c.p.to_string(),
                    c.identical.to_string(),
                    format!("{:e}", c.exact),
                    format!("{:e}", c.lp),
                    format!("{:e}", c.sinkhorn),
                ])?;
            }
            Ok(())
        })
    }

    pub fn json(&self) -> Value {
        let groups: Vec<Value> = self
            .groups()
            .iter()
            .map(|((space, p), d)| {
                let mut v = d.json();
                v["space"] = json!(space);
                v["p"] = json!(p.parse::<f64>().unwrap_or(f64::NAN));
                v
            })
            .collect();
        json!({
            "schema_version": SCHEMA_VERSION,
            "command": "oracle",
            "seed": self.seed,
            "cases": self.cases.len() / ORDERS.len(),
            "tolerances": { "exact_vs_lp_abs": EXACT_ABS_TOL, "sinkhorn_vs_lp_rel": SINKHORN_REL_TOL },
            "groups": groups,
            "overall": self.overall().json(),
            "identical_max": self.identical_max(),
        })
    }

    pub fn write(&self, dir: &Path) -> Result<(), HarnessError> {
        ensure_dir(dir)?;
        write_text(&dir.join(ORACLE_CSV), &self.csv()?)?;
        write_text(&dir.join(ORACLE_JSON), &serde_json::to_vec_pretty(&self.json())?)
    }
}
