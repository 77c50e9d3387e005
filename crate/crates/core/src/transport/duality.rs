use alloc::vec::Vec;

use super::circle::circular_flux_cost;
use super::{check_order, pow_p, wasserstein_to_reference};
use crate::error::{Error, Result};
use crate::inequality::{InequalityReport, Verdict};
use crate::measure::{Density, SignedMeasure};
use crate::params::InequalityParams;
use crate::space::Space1D;

/// Kantorovich norm sup{∫φ dm : φ ∈ Lip₁} of a zero-mass signed measure.
///
/// On a line this is ∫|cumulative(m)| dx; on the circle the cumulative flux is
/// defined up to a constant, which is chosen to minimize the integral.
pub fn kantorovich_norm(m: &SignedMeasure) -> Result<f64> {
    let masses = m.node_masses();
    let scale: f64 = masses.iter().map(|x| libm::fabs(*x)).sum::<f64>().max(1.0);
    if libm::fabs(m.total_mass()) > 1e-10 * scale {
        return Err(Error::NonzeroTotalMass(m.total_mass()));
    }
    let space = m.space();
    let mut cum = Vec::with_capacity(masses.len());
    let mut acc = 0.0;
    for x in masses {
        acc += x;
        cum.push(acc);
    }
    if space.is_circle() {
        return Ok(circular_flux_cost(cum, space.spacing()));
    }
    let x = space.nodes();
    Ok((0..x.len() - 1).map(|i| libm::fabs(cum[i]) * (x[i + 1] - x[i])).sum())
}

/// Q_ε φ(x_i) = max_j [φ(x_j) − d(x_i, x_j)^p / ε], the sup taken over grid nodes.
pub fn hopf_lax(phi: &[f64], eps: f64, p: f64, space: &Space1D) -> Result<Vec<f64>> {
    if !(eps > 0.0) {
        return Err(Error::OutOfRange { name: "epsilon", value: eps, expected: "> 0" });
    }
    check_order(p)?;
    if phi.len() != space.len() {
        return Err(Error::Invalid(alloc::format!("expected {} values", space.len())));
    }
    if let Some(index) = phi.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { what: "phi", index });
    }
    let n = phi.len();
    Ok((0..n)
        .map(|i| {
            (0..n)
                .map(|j| phi[j] - pow_p(space.metric(i, j), p) / eps)
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .collect())
}

/// ∫φ f dμ ≤ W_p^p(fμ, μ)/ε + ∫Q_ε φ dμ.
pub fn duality_gap_check(f: &Density, phi: &[f64], eps: f64, p: f64) -> Result<InequalityReport> {
    let space = f.space();
    let q = hopf_lax(phi, eps, p, space)?;
    let lhs: f64 = phi.iter().zip(f.values()).zip(space.quad_weights()).map(|((a, b), w)| a * b * w).sum();
    let w = wasserstein_to_reference(f, p)?;
    let rhs = w.cost() / eps + space.integrate(&q);
    let params = InequalityParams { p, ..Default::default() };
    Ok(InequalityReport::new("hopf_lax_duality", lhs, rhs, Verdict::Pointwise, 1e-9, params, space.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::density_from_fn;
    use crate::space::{build_circle, build_weighted_line, potentials};

    #[test]
    fn norm_examples() {
        let s = build_weighted_line(5, 2.0, potentials::flat, 0.0).unwrap(); // nodes -2..2 step 1
        let zero = SignedMeasure::new(&s, alloc::vec![0.0; 5]).unwrap();
        assert_eq!(kantorovich_norm(&zero).unwrap(), 0.0);
        let dipole = SignedMeasure::new(&s, alloc::vec![0.0, 0.0, 1.0, -1.0, 0.0]).unwrap();
        assert!((kantorovich_norm(&dipole).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn circle_dipole_takes_short_arc() {
        let s = build_circle(8).unwrap();
        let mut m = alloc::vec![0.0; 8];
        m[1] = 1.0;
        m[7] = -1.0;
        let sm = SignedMeasure::new(&s, m).unwrap();
        assert!((kantorovich_norm(&sm).unwrap() - core::f64::consts::FRAC_PI_2).abs() < 1e-14);
    }

    #[test]
    fn hopf_lax_properties() {
        let s = build_circle(32).unwrap();
        let c = alloc::vec![3.5; 32];
        assert!(hopf_lax(&c, 0.3, 2.0, &s).unwrap().iter().all(|&v| v == 3.5));
        let phi: Vec<f64> = s.nodes().iter().map(|t| libm::sin(3.0 * t)).collect();
        let q0 = hopf_lax(&phi, 1e-9, 2.0, &s).unwrap();
        for (a, b) in q0.iter().zip(&phi) {
            assert!((a - b).abs() < 1e-6);
        }
        let q1 = hopf_lax(&phi, 0.1, 2.0, &s).unwrap();
        let q2 = hopf_lax(&phi, 0.5, 2.0, &s).unwrap();
        for i in 0..32 {
            assert!(q1[i] >= phi[i] && q2[i] >= q1[i]);
        }
        assert!(hopf_lax(&phi, 0.0, 2.0, &s).is_err());
    }

    #[test]
    fn hopf_lax_of_indicator() {
        // φ = M·1_F: Q_ε φ = M exactly where d(x, F)^p ≤ εM, else max(0, M − d^p/ε)
        let s = build_circle(64).unwrap();
        let big = 2.0;
        let eps = 0.05;
        let in_f = |i: usize| (20..28).contains(&i);
        let phi: Vec<f64> = (0..64).map(|i| if in_f(i) { big } else { 0.0 }).collect();
        let q = hopf_lax(&phi, eps, 2.0, &s).unwrap();
        for (i, &qi) in q.iter().enumerate() {
            let dist = (0..64).filter(|&j| in_f(j)).map(|j| s.metric(i, j)).fold(f64::INFINITY, f64::min);
            let expected = (big - dist * dist / eps).max(0.0);
            assert!((qi - expected).abs() < 1e-14);
            if dist * dist <= eps * big {
                assert!(qi > 0.0);
            }
            if in_f(i) {
                assert_eq!(qi, big);
            }
        }
    }

    #[test]
    fn duality_simple_cases() {
        let s = build_circle(64).unwrap();
        let f = density_from_fn(&s, |t| 1.0 + 0.7 * libm::cos(t)).unwrap();
        let zero = alloc::vec![0.0; 64];
        let r = duality_gap_check(&f, &zero, 0.2, 2.0).unwrap();
        assert_eq!(r.lhs, 0.0);
        assert!(r.pass().unwrap());
        let one = Density::uniform(&s);
        let phi: Vec<f64> = s.nodes().iter().map(|t| libm::cos(2.0 * t)).collect();
        let r = duality_gap_check(&one, &phi, 0.2, 2.0).unwrap();
        assert!(r.lhs <= r.rhs + 1e-12);
    }
}
