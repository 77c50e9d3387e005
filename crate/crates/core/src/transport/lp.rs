//! Dense transportation LP solved with the transportation simplex
//! (north-west corner start, u–v potentials, cycle pivots on the basis tree).

use alloc::collections::VecDeque;
use alloc::vec::Vec;

use super::{check_masses, check_order, pow_p, root_p, Diagnostics, Method, Plan, TransportResult};
use crate::error::{Error, Result};
use crate::space::Space1D;

/// Largest grid the dense oracle accepts.
pub const MAX_LP_NODES: usize = 64;

#[derive(Debug, Clone)]
pub struct TransportSolution {
    /// Basic cells with their flows (zero flows are kept: degenerate basis).
    pub flows: Vec<(usize, usize, f64)>,
    pub objective: f64,
    pub iterations: usize,
    /// Row and column potentials certifying optimality.
    pub potentials: (Vec<f64>, Vec<f64>),
}

/// Minimizes Σ c_ij x_ij subject to row sums `supply`, column sums `demand`, x ≥ 0.
///
/// `cost` is row-major with `supply.len()` rows. Totals must agree; the last
/// basic cell absorbs any rounding difference.
pub fn solve_transport(supply: &[f64], demand: &[f64], cost: &[f64]) -> Result<TransportSolution> {
    let m = supply.len();
    let n = demand.len();
    if m == 0 || n == 0 || cost.len() != m * n {
        return Err(Error::Invalid("transport problem has inconsistent shape".into()));
    }
    let c = |i: usize, j: usize| cost[i * n + j];
    let c_scale = cost.iter().fold(1.0_f64, |acc, v| acc.max(libm::fabs(*v)));
    let tol = 1e-12 * c_scale;

    // north-west corner: a staircase of m + n - 1 cells, zeros included
    let mut basis: Vec<(usize, usize)> = Vec::with_capacity(m + n - 1);
    let mut flow = alloc::vec![0.0; m * n];
    let mut in_basis = alloc::vec![false; m * n];
    {
        let (mut i, mut j) = (0, 0);
        let (mut ra, mut rb) = (supply[0], demand[0]);
        loop {
            let x = ra.min(rb).max(0.0);
            basis.push((i, j));
            in_basis[i * n + j] = true;
            flow[i * n + j] = x;
            if i == m - 1 && j == n - 1 {
                break;
            }
            if (ra <= rb && i < m - 1) || j == n - 1 {
                rb -= x;
                i += 1;
                ra = supply[i];
            } else {
                ra -= x;
                j += 1;
                rb = demand[j];
            }
        }
    }

    let nodes = m + n;
    let max_iter = 50 * nodes * nodes + 1000;
    let mut u = alloc::vec![0.0; m];
    let mut v = alloc::vec![0.0; n];
    let mut adj: Vec<Vec<usize>> = alloc::vec![Vec::new(); nodes];
    let mut parent: Vec<Option<usize>> = alloc::vec![None; nodes];
    let mut iterations = 0;

    loop {
        // tree adjacency: node i < m is a row, m + j is a column; entries are basis indices
        for a in &mut adj {
            a.clear();
        }
        for (e, &(i, j)) in basis.iter().enumerate() {
            adj[i].push(e);
            adj[m + j].push(e);
        }

        // potentials u_i + v_j = c_ij on the tree, u_0 = 0
        let mut known = alloc::vec![false; nodes];
        let mut queue = VecDeque::new();
        known[0] = true;
        u[0] = 0.0;
        queue.push_back(0);
        while let Some(node) = queue.pop_front() {
            for &e in &adj[node] {
                let (i, j) = basis[e];
                if node < m && !known[m + j] {
                    v[j] = c(i, j) - u[i];
                    known[m + j] = true;
                    queue.push_back(m + j);
                } else if node >= m && !known[i] {
                    u[i] = c(i, j) - v[j];
                    known[i] = true;
                    queue.push_back(i);
                }
            }
        }

        // entering cell: most negative reduced cost
        let mut best = -tol;
        let mut entering = None;
        for i in 0..m {
            for j in 0..n {
                if in_basis[i * n + j] {
                    continue;
                }
                let rc = c(i, j) - u[i] - v[j];
                if rc < best {
                    best = rc;
                    entering = Some((i, j));
                }
            }
        }
        let Some((ei, ej)) = entering else { break };
        iterations += 1;
        if iterations > max_iter {
            return Err(Error::NoConvergence {
                solver: "transport simplex",
                iterations,
                violation: -best,
            });
        }

        // tree path from column ej back to row ei
        for p in parent.iter_mut() {
            *p = None;
        }
        let mut seen = alloc::vec![false; nodes];
        seen[ei] = true;
        queue.clear();
        queue.push_back(ei);
        while let Some(node) = queue.pop_front() {
            if node == m + ej {
                break;
            }
            for &e in &adj[node] {
                let (i, j) = basis[e];
                let other = if node < m { m + j } else { i };
                if !seen[other] {
                    seen[other] = true;
                    parent[other] = Some(e);
                    queue.push_back(other);
                }
            }
        }
        let mut path = Vec::new();
        let mut node = m + ej;
        while node != ei {
            let e = parent[node].expect("basis is a spanning tree");
            path.push(e);
            let (i, j) = basis[e];
            node = if node < m { m + j } else { i };
        }

        // edges alternate −, +, −, ... starting next to the entering column
        let mut theta = f64::INFINITY;
        let mut leaving = 0;
        for (k, &e) in path.iter().enumerate() {
            if k % 2 == 0 {
                let (i, j) = basis[e];
                if flow[i * n + j] < theta {
                    theta = flow[i * n + j];
                    leaving = k;
                }
            }
        }
        for (k, &e) in path.iter().enumerate() {
            let (i, j) = basis[e];
            if k % 2 == 0 {
                flow[i * n + j] -= theta;
            } else {
                flow[i * n + j] += theta;
            }
        }
        let (li, lj) = basis[path[leaving]];
        flow[li * n + lj] = 0.0;
        in_basis[li * n + lj] = false;
        flow[ei * n + ej] = theta;
        in_basis[ei * n + ej] = true;
        basis[path[leaving]] = (ei, ej);
    }

    let flows: Vec<(usize, usize, f64)> =
        basis.iter().map(|&(i, j)| (i, j, flow[i * n + j].max(0.0))).collect();
    let objective = flows.iter().map(|&(i, j, x)| x * c(i, j)).sum();
    Ok(TransportSolution { flows, objective, iterations, potentials: (u, v) })
}

/// Exact W_p from the n×n transport LP with costs metric(i, j)^p (n ≤ 64).
pub fn wp_lp_oracle(p: f64, alpha: &[f64], beta: &[f64], space: &Space1D) -> Result<TransportResult> {
    let n = space.len();
    if n > MAX_LP_NODES {
        return Err(Error::ProblemTooLarge { n, max: MAX_LP_NODES });
    }
    check_order(p)?;
    check_masses(alpha, beta, space)?;
    let mut cost = alloc::vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            cost[i * n + j] = pow_p(space.metric(i, j), p);
        }
    }
    let sol = solve_transport(alpha, beta, &cost)?;
    let (u, v) = &sol.potentials;
    let dual: f64 = alpha.iter().zip(u).map(|(a, x)| a * x).sum::<f64>()
        + beta.iter().zip(v).map(|(b, y)| b * y).sum::<f64>();
    let entries: Vec<(usize, usize, f64)> = sol.flows.iter().copied().filter(|e| e.2 > 0.0).collect();
    let plan = Plan { n, entries };
    let rows = plan.row_sums();
    let cols = plan.col_sums();
    let violation = rows.iter().zip(alpha).map(|(r, a)| libm::fabs(r - a)).sum::<f64>()
        + cols.iter().zip(beta).map(|(c, b)| libm::fabs(c - b)).sum::<f64>();
    Ok(TransportResult {
        value: root_p(sol.objective, p),
        p,
        method: Method::LpOracle,
        plan: Some(plan),
        diagnostics: Diagnostics {
            iterations: sol.iterations,
            marginal_violation: violation,
            duality_gap: Some(sol.objective - dual),
        },
    })
}
