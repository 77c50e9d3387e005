//! Entropic transport by log-domain Sinkhorn with ε-scaling.
//!
//! Each stage of the ε schedule runs a few Sinkhorn sweeps and then Newton
//! steps on the semi-dual, which stays fast where plain sweeps stall (plans
//! that nearly split into blocks at small ε).

use alloc::vec::Vec;

use super::{check_masses, check_order, pow_p, root_p, Diagnostics, Method, Plan, TransportResult};
use crate::error::{Error, Result};
use crate::linalg::{cholesky_solve, DenseMatrix};
use crate::space::Space1D;

/// Newton steps factor an m×m matrix, so the solver is meant for small grids.
pub const MAX_SINKHORN_NODES: usize = 512;
const SWEEPS_PER_STAGE: usize = 20;
const MAX_NEWTON_STEPS: usize = 100;
/// ℓ¹ row-marginal violation that ends a stage.
const MARGINAL_TOL: f64 = 1e-12;
/// Violation accepted at the last ε before rounding; larger means no convergence.
const FINAL_TOL: f64 = 1e-9;

/// Geometric ε schedule from `max_cost` down to `1e-7 · max_cost`, halving each stage.
pub fn default_schedule(max_cost: f64) -> Vec<f64> {
    let mut eps = max_cost.max(1e-12);
    let end = 1e-7 * eps;
    let mut out = Vec::new();
    while eps > end {
        out.push(eps);
        eps *= 0.5;
    }
    out.push(end);
    out
}

fn log_sum_exp(values: impl Iterator<Item = f64> + Clone) -> f64 {
    let top = values.clone().fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return top;
    }
    top + libm::log(values.map(|v| libm::exp(v - top)).sum::<f64>())
}

/// Entropic transport cost, driven to the unregularized optimum by ε-scaling.
///
/// `reg_schedule` must be positive and decreasing; an empty schedule uses
/// [`default_schedule`]. The plan of the last stage is rounded onto the exact
/// marginals and its cost is returned. The diagnostics carry the gap between
/// that cost and the dual value of the c-transformed potentials.
pub fn wp_sinkhorn(
    p: f64,
    alpha: &[f64],
    beta: &[f64],
    space: &Space1D,
    reg_schedule: &[f64],
) -> Result<TransportResult> {
    let n_all = space.len();
    if n_all > MAX_SINKHORN_NODES {
        return Err(Error::ProblemTooLarge { n: n_all, max: MAX_SINKHORN_NODES });
    }
    check_order(p)?;
    let total = check_masses(alpha, beta, space)?;
    if total == 0.0 {
        return Ok(TransportResult {
            value: 0.0,
            p,
            method: Method::Sinkhorn,
            plan: None,
            diagnostics: Diagnostics::default(),
        });
    }
    if reg_schedule.iter().any(|e| !(*e > 0.0))
        || reg_schedule.windows(2).any(|w| w[1] > w[0])
    {
        return Err(Error::Invalid("regularization schedule must be positive and decreasing".into()));
    }
    if alpha == beta {
        // the identity coupling is optimal; rounding would smear O(violation) mass over far pairs
        let entries = (0..n_all).filter(|&i| alpha[i] > 0.0).map(|i| (i, i, alpha[i])).collect();
        return Ok(TransportResult {
            value: 0.0,
            p,
            method: Method::Sinkhorn,
            plan: Some(Plan { n: n_all, entries }),
            diagnostics: Diagnostics::default(),
        });
    }

    // restrict to the supports
    let rows: Vec<usize> = (0..n_all).filter(|&i| alpha[i] > 0.0).collect();
    let cols: Vec<usize> = (0..n_all).filter(|&j| beta[j] > 0.0).collect();
    let (m, n) = (rows.len(), cols.len());
    let a: Vec<f64> = rows.iter().map(|&i| alpha[i] / total).collect();
    let b: Vec<f64> = cols.iter().map(|&j| beta[j] / total).collect();
    let log_a: Vec<f64> = a.iter().map(|x| libm::log(*x)).collect();
    let log_b: Vec<f64> = b.iter().map(|x| libm::log(*x)).collect();
    let mut cost = alloc::vec![0.0; m * n];
    for (r, &i) in rows.iter().enumerate() {
        for (c, &j) in cols.iter().enumerate() {
            cost[r * n + c] = pow_p(space.metric(i, j), p);
        }
    }
    let max_cost = cost.iter().copied().fold(0.0, f64::max);
    let schedule = if reg_schedule.is_empty() { default_schedule(max_cost) } else { reg_schedule.to_vec() };

    let problem = Entropic { cost: &cost, a: &a, b: &b, log_a: &log_a, log_b: &log_b };
    let mut f = alloc::vec![0.0; m];
    let mut iterations = 0;
    let mut violation = f64::INFINITY;
    let last = schedule.len() - 1;
    for (stage, &eps) in schedule.iter().enumerate() {
        for _ in 0..SWEEPS_PER_STAGE {
            let g = problem.soft_col(&f, eps);
            for r in 0..m {
                let row = &cost[r * n..(r + 1) * n];
                f[r] = -eps * log_sum_exp((0..n).map(|c| log_b[c] + (g[c] - row[c]) / eps));
            }
            iterations += 1;
        }
        violation = problem.newton(&mut f, eps, &mut iterations);
        if stage == last && !(violation <= FINAL_TOL) {
            return Err(Error::NoConvergence { solver: "sinkhorn", iterations, violation });
        }
    }

    let eps = schedule[last];
    let g = problem.soft_col(&f, eps);
    let mut plan = problem.plan(&f, &g, eps);
    round_to_marginals(&mut plan, &a, &b);
    let cost_ab: f64 = plan.iter().zip(&cost).map(|(x, c)| x * c).sum();
    let gap = (cost_ab - c_transform_dual(&cost, &f, &a, &b)).max(0.0);
    let value = cost_ab * total;
    let entries = (0..m)
        .flat_map(|r| (0..n).map(move |c| (r, c)))
        .filter_map(|(r, c)| {
            let x = plan[r * n + c] * total;
            (x > 0.0).then_some((rows[r], cols[c], x))
        })
        .collect();
    Ok(TransportResult {
        value: root_p(value, p),
        p,
        method: Method::Sinkhorn,
        plan: Some(Plan { n: n_all, entries }),
        diagnostics: Diagnostics { iterations, marginal_violation: violation, duality_gap: Some(gap * total) },
    })
}

struct Entropic<'a> {
    cost: &'a [f64],
    a: &'a [f64],
    b: &'a [f64],
    log_a: &'a [f64],
    log_b: &'a [f64],
}

impl Entropic<'_> {
    /// Column potential making the column marginals exact for the row potential `f`.
    fn soft_col(&self, f: &[f64], eps: f64) -> Vec<f64> {
        let (m, n) = (self.a.len(), self.b.len());
        (0..n)
            .map(|c| -eps * log_sum_exp((0..m).map(|r| self.log_a[r] + (f[r] - self.cost[r * n + c]) / eps)))
            .collect()
    }

    fn plan(&self, f: &[f64], g: &[f64], eps: f64) -> Vec<f64> {
        let (m, n) = (self.a.len(), self.b.len());
        let mut plan = alloc::vec![0.0; m * n];
        for r in 0..m {
            for c in 0..n {
                plan[r * n + c] =
                    libm::exp(self.log_a[r] + self.log_b[c] + (f[r] + g[c] - self.cost[r * n + c]) / eps);
            }
        }
        plan
    }

    fn row_violation(&self, f: &[f64], eps: f64) -> f64 {
        let n = self.b.len();
        let plan = self.plan(f, &self.soft_col(f, eps), eps);
        self.a.iter().enumerate().map(|(r, x)| libm::fabs(x - plan[r * n..(r + 1) * n].iter().sum::<f64>())).sum()
    }

    /// Concave semi-dual ⟨a, f⟩ + ⟨b, g(f)⟩.
    fn semi_dual(&self, f: &[f64], eps: f64) -> f64 {
        let g = self.soft_col(f, eps);
        dot(self.a, f) + dot(self.b, &g)
    }

    /// Damped Newton ascent on the semi-dual; returns the final ℓ¹ row violation.
    fn newton(&self, f: &mut [f64], eps: f64, iterations: &mut usize) -> f64 {
        let (m, n) = (self.a.len(), self.b.len());
        let mut violation = f64::INFINITY;
        let mut best = f64::INFINITY;
        let mut stalled = 0;
        for _ in 0..MAX_NEWTON_STEPS {
            let g = self.soft_col(f, eps);
            let plan = self.plan(f, &g, eps);
            let rows: Vec<f64> = (0..m).map(|r| plan[r * n..(r + 1) * n].iter().sum()).collect();
            let grad: Vec<f64> = self.a.iter().zip(&rows).map(|(x, y)| x - y).collect();
            violation = grad.iter().map(|v| libm::fabs(*v)).sum();
            if violation <= MARGINAL_TOL {
                break;
            }
            // at small ε rounding sets a floor above MARGINAL_TOL
            if violation < 0.5 * best {
                best = violation;
                stalled = 0;
            } else {
                stalled += 1;
                if stalled >= 3 && violation <= FINAL_TOL {
                    break;
                }
            }
            // minus the Hessian, plus a·aᵀ to remove the constant null direction
            let mut h = DenseMatrix::zeros(m);
            for i in 0..m {
                for j in i..m {
                    let s: f64 = (0..n).map(|c| plan[i * n + c] * plan[j * n + c] / self.b[c]).sum();
                    let diag = if i == j { rows[i] } else { 0.0 };
                    let v = (diag - s) / eps + self.a[i] * self.a[j];
                    h.set(i, j, v);
                    h.set(j, i, v);
                }
            }
            let Some(step) = regularized_solve(&mut h, &grad) else { break };
            let slope = dot(&grad, &step);
            let base = self.semi_dual(f, eps);
            let mut t = 1.0;
            let accepted = loop {
                let trial: Vec<f64> = f.iter().zip(&step).map(|(x, d)| x + t * d).collect();
                // near the optimum the objective stops resolving the ascent, the
                // marginal error still does
                if self.semi_dual(&trial, eps) >= base + 1e-4 * t * slope
                    || self.row_violation(&trial, eps) <= 0.5 * violation
                {
                    break Some(trial);
                }
                t *= 0.5;
                if t < 1e-10 {
                    break None;
                }
            };
            *iterations += 1;
            match accepted {
                Some(trial) => f.copy_from_slice(&trial),
                None => break,
            }
        }
        violation
    }
}

/// Cholesky solve with a growing ridge; blocks of the plan that have decoupled
/// in floating point leave the matrix singular.
fn regularized_solve(h: &mut DenseMatrix, rhs: &[f64]) -> Option<Vec<f64>> {
    let m = h.dim();
    let scale = (0..m).map(|i| h.get(i, i)).fold(0.0, f64::max);
    let mut ridge = 0.0;
    let mut added = 0.0;
    for _ in 0..12 {
        for i in 0..m {
            h.set(i, i, h.get(i, i) + ridge - added);
        }
        added = ridge;
        if let Ok(x) = cholesky_solve(h, rhs) {
            return Some(x);
        }
        ridge = if ridge == 0.0 { 1e-14 * scale } else { ridge * 100.0 };
    }
    None
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(u, v)| u * v).sum()
}

/// Dual value of the feasible pair (f^cc, f^c); a lower bound on the transport cost.
fn c_transform_dual(cost: &[f64], f: &[f64], a: &[f64], b: &[f64]) -> f64 {
    let (m, n) = (a.len(), b.len());
    let g: Vec<f64> =
        (0..n).map(|c| (0..m).map(|r| cost[r * n + c] - f[r]).fold(f64::INFINITY, f64::min)).collect();
    let f2: Vec<f64> =
        (0..m).map(|r| (0..n).map(|c| cost[r * n + c] - g[c]).fold(f64::INFINITY, f64::min)).collect();
    f2.iter().zip(a).map(|(x, w)| x * w).sum::<f64>() + g.iter().zip(b).map(|(x, w)| x * w).sum::<f64>()
}

/// Projects a nonnegative matrix onto the transport polytope: scale rows and
/// columns down to their targets, then add the rank-one residual correction.
fn round_to_marginals(plan: &mut [f64], a: &[f64], b: &[f64]) {
    let (m, n) = (a.len(), b.len());
    for r in 0..m {
        let s: f64 = plan[r * n..(r + 1) * n].iter().sum();
        if s > a[r] {
            let k = a[r] / s;
            plan[r * n..(r + 1) * n].iter_mut().for_each(|x| *x *= k);
        }
    }
    for c in 0..n {
        let s: f64 = (0..m).map(|r| plan[r * n + c]).sum();
        if s > b[c] {
            let k = b[c] / s;
            (0..m).for_each(|r| plan[r * n + c] *= k);
        }
    }
    let err_r: Vec<f64> =
        (0..m).map(|r| a[r] - plan[r * n..(r + 1) * n].iter().sum::<f64>()).collect();
    let err_c: Vec<f64> = (0..n).map(|c| b[c] - (0..m).map(|r| plan[r * n + c]).sum::<f64>()).collect();
    let mass: f64 = err_r.iter().sum();
    if mass > 0.0 {
        for r in 0..m {
            for c in 0..n {
                plan[r * n + c] += err_r[r].max(0.0) * err_c[c].max(0.0) / mass;
            }
        }
    }
}
