use alloc::vec::Vec;
use core::f64::consts::PI;

use super::{check_masses, check_order, pow_p, root_p, Method, TransportResult};
use crate::error::{Error, Result};
use crate::space::Space1D;

/// W_p on the circle.
///
/// The masses are lifted to periodic measures on ℝ and coupled monotonically
/// with a mass shift s: quantile t of α is paired with quantile t + s of β.
/// The cost is convex and piecewise linear in s, and its minimum is W_p^p.
/// For p = 1 the minimum has the closed form Σ|F_α − F_β − m|·Δθ with m the
/// median of the cumulative difference.
pub fn wp_circle(p: f64, alpha: &[f64], beta: &[f64], space: &Space1D) -> Result<TransportResult> {
    if !space.is_circle() {
        return Err(Error::WrongSpaceKind { expected: "circle" });
    }
    check_order(p)?;
    let total = check_masses(alpha, beta, space)?;
    if total == 0.0 {
        return Ok(TransportResult::exact(0.0, p, Method::CircleShift, None));
    }
    let value = if p == 1.0 {
        median_shift_cost(alpha, beta, space.spacing())
    } else {
        let a: Vec<f64> = alpha.iter().map(|m| m / total).collect();
        let b: Vec<f64> = beta.iter().map(|m| m / total).collect();
        root_p(total * min_shift_cost(&a, &b, space.nodes(), p), p)
    };
    Ok(TransportResult::exact(value, p, Method::CircleShift, None))
}

/// min_s Σ_i |F_i − s|·h where F is the cumulative difference through node i
/// (flux across the arc from node i to node i+1).
pub(crate) fn median_shift_cost(alpha: &[f64], beta: &[f64], h: f64) -> f64 {
    let mut cum = Vec::with_capacity(alpha.len());
    let mut acc = 0.0;
    for (a, b) in alpha.iter().zip(beta) {
        acc += a - b;
        cum.push(acc);
    }
    circular_flux_cost(cum, h)
}

pub(crate) fn circular_flux_cost(mut cum: Vec<f64>, h: f64) -> f64 {
    cum.sort_by(f64::total_cmp);
    let med = cum[cum.len() / 2];
    cum.iter().map(|c| libm::fabs(c - med)).sum::<f64>() * h
}

/// Cost of the shifted lifted monotone coupling, both masses of total one.
fn shifted_cost(a_cum: &[f64], b_cum: &[f64], nodes: &[f64], p: f64, shift: f64) -> f64 {
    let n = nodes.len();
    let mut period = libm::floor(shift);
    let frac = shift - period;
    // β atom whose quantile interval contains `frac`
    let mut j = b_cum[1..].partition_point(|&c| c <= frac).min(n - 1);
    let mut t = 0.0;
    let mut i = 0;
    let mut cost = 0.0;
    let mut guard = 0;
    while i < n && guard < 4 * n + 8 {
        guard += 1;
        let a_end = a_cum[i + 1];
        let b_end = b_cum[j + 1] + period - shift;
        let end = a_end.min(b_end);
        if end > t {
            let disp = nodes[i] - (nodes[j] + 2.0 * PI * period);
            cost += (end - t) * pow_p(libm::fabs(disp), p);
            t = end;
        }
        if a_end <= b_end {
            i += 1;
        } else {
            j += 1;
            if j == n {
                j = 0;
                period += 1.0;
            }
        }
    }
    cost
}

fn cumulative(m: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(m.len() + 1);
    out.push(0.0);
    let mut acc = 0.0;
    for v in m {
        acc += v;
        out.push(acc);
    }
    *out.last_mut().unwrap() = 1.0;
    out
}

fn min_shift_cost(a: &[f64], b: &[f64], nodes: &[f64], p: f64) -> f64 {
    let a_cum = cumulative(a);
    let b_cum = cumulative(b);
    let cost = |s: f64| shifted_cost(&a_cum, &b_cum, nodes, p, s);

    // golden-section search; the cost is convex in the shift
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let (mut lo, mut hi) = (-1.0_f64, 1.0_f64);
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let (mut f1, mut f2) = (cost(x1), cost(x2));
    let mut best = f1.min(f2).min(cost(0.0));
    while hi - lo > 1e-14 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = cost(x1);
            best = best.min(f1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = cost(x2);
            best = best.min(f2);
        }
    }
    best
}
