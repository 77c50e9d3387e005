//! Expands a config into (checker, density, parameter point) jobs, runs them
//! on a worker pool and merges the reports in job order.

use std::time::Instant;

use rayon::prelude::*;

use kantlab_core::inequality::{
    check_entropy_decay, check_entropy_regularization, check_gaussian_weak, check_gradient_bound, check_harnack,
    check_hll_general, check_hll_sqrt2, check_log_harnack, check_orlicz, check_reverse_isoperimetry,
    check_thm1_finite_n, check_thm1_infty, check_weak_type, default_t_grid, duality_gap_check, geometric_grid,
    lemma_gaussian_check, seq_bound_ratios, EntropyMode, SETTLE_TOL,
};
use kantlab_core::measure::Density;
use kantlab_core::{InequalityParams, InequalityReport, Verdict};

use crate::config::{CheckSpec, CheckerId, SuiteConfig};
use crate::error::HarnessError;
use crate::random;
use crate::world::World;

/// Random configurations per randomized check when the config gives none.
pub const DEFAULT_RANDOM_CONFIGS: usize = 100;

#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    /// 0 uses every available core.
    pub workers: usize,
    pub tol_scale: f64,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { workers: 0, tol_scale: 1.0 }
    }
}

/// One point of a check's parameter grid; unused entries stay NaN.
#[derive(Debug, Clone, Copy)]
pub struct GridPoint {
    pub p: f64,
    pub q: f64,
    pub n_dim: f64,
    pub t: f64,
    pub u: f64,
    pub c_level: f64,
    pub k: f64,
    pub a: f64,
    pub alpha: f64,
    pub k_max: usize,
}

impl Default for GridPoint {
    fn default() -> Self {
        GridPoint {
            p: f64::NAN,
            q: f64::NAN,
            n_dim: f64::NAN,
            t: f64::NAN,
            u: f64::NAN,
            c_level: f64::NAN,
            k: f64::NAN,
            a: f64::NAN,
            alpha: f64::NAN,
            k_max: 0,
        }
    }
}

fn expand(points: Vec<GridPoint>, values: &[f64], set: fn(&mut GridPoint, f64)) -> Vec<GridPoint> {
    points
        .iter()
        .flat_map(|pt| {
            values.iter().map(move |&v| {
                let mut next = *pt;
                set(&mut next, v);
                next
            })
        })
        .collect()
}

/// Row-major product of the grids the checker reads.
pub fn grid_points(c: &CheckSpec) -> Vec<GridPoint> {
    let mut pts = vec![GridPoint::default()];
    let mut axis = |values: &[f64], set: fn(&mut GridPoint, f64)| {
        pts = expand(std::mem::take(&mut pts), values, set);
    };
    match c.checker {
        CheckerId::Thm1FiniteN => {
            axis(&c.p, |g, v| g.p = v);
            axis(&c.q, |g, v| g.q = v);
            axis(&c.n_dim, |g, v| g.n_dim = v);
        }
        CheckerId::Thm1Infty | CheckerId::GradientBound => axis(&c.q, |g, v| g.q = v),
        CheckerId::WeakType | CheckerId::Orlicz => {
            axis(&c.q, |g, v| g.q = v);
            axis(&c.c_level, |g, v| g.c_level = v);
        }
        CheckerId::LemmaGaussian => {
            axis(&c.q, |g, v| g.q = v);
            axis(&c.t, |g, v| g.t = v);
        }
        CheckerId::GaussianWeak => {
            axis(&c.q, |g, v| g.q = v);
            axis(&c.u, |g, v| g.u = v);
        }
        CheckerId::EntropyCd0 | CheckerId::EntropyGauss | CheckerId::EntropyDecay => axis(&c.t, |g, v| g.t = v),
        CheckerId::EntropyNegk => {
            axis(&c.t, |g, v| g.t = v);
            axis(&c.k, |g, v| g.k = v);
        }
        CheckerId::SeqBound => {
            axis(&c.a, |g, v| g.a = v);
            axis(&c.alpha, |g, v| g.alpha = v);
            let k_max: Vec<f64> = c.k_max.iter().map(|k| *k as f64).collect();
            axis(&k_max, |g, v| g.k_max = v as usize);
        }
        _ => {}
    }
    pts
}

#[derive(Debug, Clone)]
pub enum Outcome {
    Report(InequalityReport),
    Error { message: String, numerical: bool },
}

#[derive(Debug, Clone)]
pub struct Row {
    pub check: usize,
    pub checker: CheckerId,
    /// Family id, or the space id of randomized and family-free checks.
    pub source: String,
    pub case: String,
    pub outcome: Outcome,
    pub seconds: f64,
}

impl Row {
    pub fn report(&self) -> Option<&InequalityReport> {
        match &self.outcome {
            Outcome::Report(r) => Some(r),
            Outcome::Error { .. } => None,
        }
    }

    pub fn failed(&self) -> bool {
        self.report().is_some_and(|r| !r.passed())
    }
}

struct Job<'a> {
    check: usize,
    spec: &'a CheckSpec,
    density: Option<usize>,
    case: usize,
    point: GridPoint,
}

fn t_grid(c: &CheckSpec) -> Vec<f64> {
    c.t_grid.map_or_else(default_t_grid, |g| geometric_grid(g.lo, g.hi, g.n))
}

fn seq_report(pt: &GridPoint) -> kantlab_core::Result<(InequalityReport, String)> {
    let ratios = seq_bound_ratios(pt.a, pt.alpha, pt.k_max)?;
    let k = ratios.len() - 1;
    let diff = if k == 0 { 0.0 } else { (ratios[k] - ratios[k - 1]).abs() };
    let c = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let params = InequalityParams { alpha: pt.alpha, ..Default::default() };
    let report = InequalityReport::explicit("seq_bound", diff, SETTLE_TOL, 0.0, params, pt.k_max)
        .with_notes(format!("C={c};limit={}", pt.a / (pt.a - 1.0)));
    Ok((report, format!("a={},alpha={},k_max={}", pt.a, pt.alpha, pt.k_max)))
}

fn run_job(cfg: &SuiteConfig, world: &World, job: &Job) -> kantlab_core::Result<(InequalityReport, String)> {
    let c = job.spec;
    let pt = &job.point;
    let density = |fam: &[Density]| fam[job.density.unwrap_or(0)].clone();
    let family = c.family.as_ref().map(|f| &world.families[f]);
    let operator = || {
        let space = match &c.family {
            Some(f) if c.checker.needs_family() => &cfg.family(f).expect("validated").space,
            _ => c.space.as_ref().expect("validated"),
        };
        &world.operators[space]
    };
    if c.checker == CheckerId::SeqBound {
        return seq_report(pt);
    }
    if c.checker == CheckerId::HopfLaxDuality {
        let space = &world.spaces[c.space.as_ref().expect("validated")];
        let mut rng = random::case_rng(cfg.seed, job.check, job.case);
        let d = random::duality_case(&mut rng, space, job.case);
        let f = Density::from_values(space, d.f)?;
        let r = duality_gap_check(&f, &d.phi, d.eps, d.p)?;
        return Ok((r, format!("cfg{}(eps={},p={})", job.case, d.eps, d.p)));
    }
    if c.checker.is_randomized() {
        let op = operator();
        let space = op.space();
        let mut rng = random::case_rng(cfg.seed, job.check, job.case);
        return match c.checker {
            CheckerId::Harnack => {
                let h = random::harnack_case(&mut rng, space);
                let r = check_harnack(op, &h.f, h.t, h.i, h.j)?;
                Ok((r, format!("cfg{}(t={},i={},j={})", job.case, h.t, h.i, h.j)))
            }
            CheckerId::LogHarnack => {
                let h = random::log_harnack_case(&mut rng, space);
                let r = check_log_harnack(op, &h.f, h.t, h.i, h.j)?;
                Ok((r, format!("cfg{}(t={},i={},j={})", job.case, h.t, h.i, h.j)))
            }
            CheckerId::ReverseIsoperimetry => {
                let (g, t) = random::isoperimetry_case(&mut rng, space);
                Ok((check_reverse_isoperimetry(op, &g, t)?, format!("cfg{}(t={t})", job.case)))
            }
            _ => unreachable!(),
        };
    }
    let f = density(family.expect("validated"));
    let r = match c.checker {
        CheckerId::HllSqrt2 => check_hll_sqrt2(&f)?,
        CheckerId::HllGeneral => check_hll_general(&f)?,
        CheckerId::Thm1FiniteN => check_thm1_finite_n(&f, pt.p, pt.q, pt.n_dim)?,
        CheckerId::Thm1Infty => check_thm1_infty(&f, pt.q)?,
        CheckerId::WeakType => check_weak_type(&f, pt.q, pt.c_level)?,
        CheckerId::Orlicz => check_orlicz(&f, pt.q, pt.c_level)?,
        CheckerId::LemmaGaussian => lemma_gaussian_check(operator(), &f, pt.q, pt.t)?,
        CheckerId::GaussianWeak => check_gaussian_weak(&f, pt.q, pt.u, &t_grid(c))?,
        CheckerId::EntropyCd0 => check_entropy_regularization(operator(), &f, pt.t, EntropyMode::CurvatureZero)?,
        CheckerId::EntropyGauss => check_entropy_regularization(operator(), &f, pt.t, EntropyMode::Gaussian)?,
        CheckerId::EntropyNegk => {
            check_entropy_regularization(operator(), &f, pt.t, EntropyMode::NegativeCurvature(pt.k))?
        }
        CheckerId::EntropyDecay => {
            let op = operator();
            check_entropy_decay(op, &f, pt.t, op.spectral_gap())?
        }
        CheckerId::GradientBound => {
            if !(pt.q > 1.0) {
                return Err(kantlab_core::Error::OutOfRange { name: "q", value: pt.q, expected: "> 1" });
            }
            check_gradient_bound(operator(), f.values(), &t_grid(c), pt.q / (pt.q - 1.0))?
        }
        _ => unreachable!("handled above"),
    };
    Ok((r, f.label().to_string()))
}

fn job_label(world: &World, job: &Job) -> String {
    match (job.density, &job.spec.family) {
        (Some(d), Some(f)) => world.families[f][d].label().to_string(),
        _ => format!("cfg{}", job.case),
    }
}

fn jobs<'a>(cfg: &'a SuiteConfig, world: &World) -> Vec<Job<'a>> {
    let mut out = Vec::new();
    for (check, spec) in cfg.checks.iter().enumerate() {
        let points = grid_points(spec);
        if spec.checker.is_randomized() {
            for case in 0..spec.configs.unwrap_or(DEFAULT_RANDOM_CONFIGS) {
                out.push(Job { check, spec, density: None, case, point: GridPoint::default() });
            }
        } else if let Some(fam) = spec.family.as_ref().filter(|_| spec.checker.needs_family()) {
            for density in 0..world.families[fam].len() {
                for point in &points {
                    out.push(Job { check, spec, density: Some(density), case: 0, point: *point });
                }
            }
        } else {
            for point in points {
                out.push(Job { check, spec, density: None, case: 0, point });
            }
        }
    }
    out
}

fn apply_tolerance(cfg: &SuiteConfig, opts: &RunOptions, mut r: InequalityReport) -> InequalityReport {
    let base = match r.verdict {
        Verdict::ExplicitConstant => cfg.tolerances.explicit,
        Verdict::Pointwise => cfg.tolerances.pointwise,
        Verdict::ConstantFree => None,
    };
    r.tolerance = base.unwrap_or(r.tolerance) * opts.tol_scale;
    r
}

fn source_of(spec: &CheckSpec) -> String {
    match (&spec.family, &spec.space) {
        (Some(f), _) if spec.checker.needs_family() => f.clone(),
        (_, Some(s)) => s.clone(),
        _ => String::new(),
    }
}

/// All rows of one suite run, in job order.
#[derive(Debug, Clone)]
pub struct SuiteRun {
    pub seed: u64,
    pub workers: usize,
    pub rows: Vec<Row>,
}

pub fn pool(workers: usize) -> Result<rayon::ThreadPool, HarnessError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| HarnessError::Config(format!("worker pool: {e}")))
}

pub fn run_suite(cfg: &SuiteConfig, opts: &RunOptions) -> Result<SuiteRun, HarnessError> {
    if !(opts.tol_scale > 0.0) {
        return Err(HarnessError::Config(format!("tol-scale must be > 0, got {}", opts.tol_scale)));
    }
    let workers = if opts.workers > 0 { opts.workers } else { cfg.workers };
    let pool = pool(workers)?;
    let world = pool.install(|| World::build(cfg))?;
    let jobs = jobs(cfg, &world);
    let rows = pool.install(|| {
        jobs.par_iter()
            .map(|job| {
                let start = Instant::now();
                let result = run_job(cfg, &world, job);
                let seconds = start.elapsed().as_secs_f64();
                let (outcome, case) = match result {
                    Ok((r, case)) => (Outcome::Report(apply_tolerance(cfg, opts, r)), case),
                    Err(e) => (
                        Outcome::Error { message: e.to_string(), numerical: e.is_numerical() },
                        job_label(&world, job),
                    ),
                };
                Row { check: job.check, checker: job.spec.checker, source: source_of(job.spec), case, outcome, seconds }
            })
            .collect()
    });
    Ok(SuiteRun { seed: cfg.seed, workers: pool.current_num_threads(), rows })
}

/// Family sup of one check.
#[derive(Debug, Clone)]
pub struct CheckSummary {
    pub check: usize,
    pub checker: CheckerId,
    pub source: String,
    pub rows: usize,
    pub failed: usize,
    pub errors: usize,
    pub sup_ratio: f64,
    pub min_slack: f64,
    /// Row index (into the run) of the sup.
    pub argmax: Option<usize>,
    pub verdict: Option<Verdict>,
}

impl SuiteRun {
    pub fn failures(&self) -> impl Iterator<Item = (usize, &Row)> {
        self.rows.iter().enumerate().filter(|(_, r)| r.failed())
    }

    pub fn errors(&self) -> impl Iterator<Item = (usize, &Row)> {
        self.rows.iter().enumerate().filter(|(_, r)| r.report().is_none())
    }

    /// 0 clean, 1 a check failed, 2 a job rejected its input, 3 a solver failed.
    pub fn exit_code(&self) -> i32 {
        let mut numerical = false;
        for (_, row) in self.errors() {
            if let Outcome::Error { numerical: false, .. } = row.outcome {
                return 2;
            }
            numerical = true;
        }
        if numerical {
            3
        } else if self.failures().next().is_some() {
            1
        } else {
            0
        }
    }

    pub fn summaries(&self, checks: usize) -> Vec<CheckSummary> {
        let mut out: Vec<CheckSummary> = Vec::with_capacity(checks);
        for (idx, row) in self.rows.iter().enumerate() {
            if out.last().is_none_or(|s| s.check != row.check) {
                out.push(CheckSummary {
                    check: row.check,
                    checker: row.checker,
                    source: row.source.clone(),
                    rows: 0,
                    failed: 0,
                    errors: 0,
                    sup_ratio: 0.0,
                    min_slack: f64::INFINITY,
                    argmax: None,
                    verdict: None,
                });
            }
            let s = out.last_mut().expect("pushed above");
            s.rows += 1;
            match row.report() {
                None => s.errors += 1,
                Some(r) => {
                    s.verdict = Some(r.verdict);
                    s.failed += usize::from(!r.passed());
                    s.min_slack = s.min_slack.min(r.slack);
                    if s.argmax.is_none() || r.ratio > s.sup_ratio {
                        s.sup_ratio = r.ratio.max(s.sup_ratio);
                        s.argmax = Some(idx);
                    }
                }
            }
        }
        out
    }
}
