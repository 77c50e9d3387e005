//! Discrete gradients, weighted L^p norms, entropy and the integral
//! functionals appearing on the left-hand sides of the inequalities.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::measure::{tail_prob, Density};
use crate::space::Space1D;

pub use crate::params::InequalityParams;
pub use crate::special::isoperimetric_profile;

/// Derivative on the grid: central differences inside, periodic wrap on the
/// circle, second-order one-sided stencils at line endpoints.
pub fn gradient(f: &[f64], space: &Space1D) -> Vec<f64> {
    let n = f.len();
    assert!(n >= 3 && n == space.len(), "gradient needs n >= 3 values on the space");
    let h = space.spacing();
    let inv = 0.5 / h;
    let mut out = alloc::vec![0.0; n];
    for i in 1..n - 1 {
        out[i] = (f[i + 1] - f[i - 1]) * inv;
    }
    if space.is_circle() {
        out[0] = (f[1] - f[n - 1]) * inv;
        out[n - 1] = (f[0] - f[n - 2]) * inv;
    } else {
        out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) * inv;
        out[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) * inv;
    }
    out
}

/// ‖g‖_{L^p(μ)}; `p = f64::INFINITY` gives the max norm.
pub fn lp_norm(g: &[f64], p: f64, space: &Space1D) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::OutOfRange { name: "p", value: p, expected: "[1, inf]" });
    }
    if p == f64::INFINITY {
        return Ok(g.iter().fold(0.0, |m, v| m.max(libm::fabs(*v))));
    }
    let w = space.quad_weights();
    let s: f64 = if p == 1.0 {
        g.iter().zip(w).map(|(v, w)| libm::fabs(*v) * w).sum()
    } else if p == 2.0 {
        g.iter().zip(w).map(|(v, w)| v * v * w).sum()
    } else {
        g.iter().zip(w).map(|(v, w)| libm::pow(libm::fabs(*v), p) * w).sum()
    };
    Ok(if p == 1.0 {
        s
    } else if p == 2.0 {
        libm::sqrt(s)
    } else {
        libm::pow(s, 1.0 / p)
    })
}

/// Ent(f) = ∫ f log f dμ with 0 log 0 = 0.
pub fn entropy_of(values: &[f64], space: &Space1D) -> f64 {
    values
        .iter()
        .zip(space.quad_weights())
        .filter(|(v, _)| **v > 0.0)
        .map(|(v, w)| v * libm::log(*v) * w)
        .sum()
}

pub fn entropy(f: &Density) -> f64 {
    entropy_of(f.values(), f.space())
}

/// ∫ (f − C)₊^r (ln[1 + (f − C)₊])^α dμ.
pub fn orlicz_functional(f: &Density, c_level: f64, r: f64, alpha: f64) -> Result<f64> {
    if !(c_level >= 0.0) {
        return Err(Error::OutOfRange { name: "C", value: c_level, expected: ">= 0" });
    }
    if !(r >= 1.0) {
        return Err(Error::OutOfRange { name: "r", value: r, expected: ">= 1" });
    }
    if !(alpha >= 0.0) {
        return Err(Error::OutOfRange { name: "alpha", value: alpha, expected: ">= 0" });
    }
    Ok(f.values()
        .iter()
        .zip(f.space().quad_weights())
        .map(|(&v, w)| {
            let e = v - c_level;
            if e <= 0.0 {
                return 0.0;
            }
            let mut term = libm::pow(e, r);
            if alpha != 0.0 {
                term *= libm::pow(libm::log1p(e), alpha);
            }
            term * w
        })
        .sum())
}

/// Levels at which the weak-type supremum over u ≥ C is attained: the dyadic
/// levels C·2^k up to max f together with every node value of f above C.
pub fn weak_type_levels(f: &Density, c_level: f64) -> Vec<f64> {
    let top = f.max();
    let mut levels = Vec::new();
    let mut u = c_level;
    while u <= top {
        levels.push(u);
        u *= 2.0;
    }
    levels.extend(f.values().iter().copied().filter(|&v| v >= c_level));
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    levels
}

/// sup_{u ≥ C} u^{3/2} (ln u)^{1/2} μ(f ≥ u)^{(q+2)/(2q)}.
pub fn weak_type_functional(f: &Density, c_level: f64, q: f64) -> Result<f64> {
    if !(c_level >= 8.0_f64.max(core::f64::consts::E)) {
        return Err(Error::OutOfRange { name: "C", value: c_level, expected: ">= 8" });
    }
    if !(q >= 1.0) {
        return Err(Error::OutOfRange { name: "q", value: q, expected: ">= 1" });
    }
    let exponent = (q + 2.0) / (2.0 * q);
    Ok(weak_type_levels(f, c_level)
        .into_iter()
        .map(|u| {
            let tail = tail_prob(f, u);
            if tail <= 0.0 {
                0.0
            } else {
                libm::pow(u, 1.5) * libm::sqrt(libm::log(u)) * libm::pow(tail, exponent)
            }
        })
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::density_from_fn;
    use crate::space::{build_circle, build_gauss_line, build_weighted_line, potentials};
    use alloc::vec::Vec;

    #[test]
    fn gradient_exactness() {
        let c = build_circle(64).unwrap();
        assert!(gradient(&[2.0; 64], &c).iter().all(|&g| g == 0.0));
        let line = build_weighted_line(17, 2.0, potentials::flat, 0.0).unwrap();
        let x = line.nodes().to_vec();
        for g in gradient(&x, &line) {
            assert!((g - 1.0).abs() < 1e-13);
        }
        let x2: Vec<f64> = x.iter().map(|v| v * v).collect();
        for (g, v) in gradient(&x2, &line).iter().zip(&x) {
            assert!((g - 2.0 * v).abs() < 1e-12);
        }
    }

    #[test]
    fn gradient_of_sine() {
        let c = build_circle(512).unwrap();
        let f: Vec<f64> = c.nodes().iter().map(|t| libm::sin(*t)).collect();
        let err = gradient(&f, &c)
            .iter()
            .zip(c.nodes())
            .map(|(g, t)| libm::fabs(g - libm::cos(*t)))
            .fold(0.0, f64::max);
        assert!(err <= 1e-4);
    }

    #[test]
    fn norms() {
        let c = build_circle(256).unwrap();
        for p in [1.0, 1.5, 2.0, 7.0, f64::INFINITY] {
            assert!((lp_norm(&[-3.0; 256], p, &c).unwrap() - 3.0).abs() < 1e-13);
        }
        let g: Vec<f64> = c.nodes().iter().map(|t| libm::cos(*t)).collect();
        assert!((lp_norm(&g, 2.0, &c).unwrap() - libm::sqrt(0.5)).abs() < 1e-6);
        assert!(lp_norm(&g, 1.0, &c).unwrap() <= lp_norm(&g, 2.0, &c).unwrap());
        assert!(lp_norm(&g, 0.5, &c).is_err());
    }

    #[test]
    fn entropy_examples() {
        let c = build_circle(8).unwrap();
        assert_eq!(entropy(&Density::uniform(&c)), 0.0);
        let two_point = Density::from_values(&c, (0..8).map(|i| if i % 2 == 0 { 2.0 } else { 0.0 }).collect()).unwrap();
        assert!((entropy(&two_point) - core::f64::consts::LN_2).abs() < 1e-15);

        // KL(N(m,1) | N(0,1)) = m²/2
        let g = build_gauss_line(2048, 10.0).unwrap();
        for m in [0.3, 1.0] {
            let f = density_from_fn(&g, |x| libm::exp(m * x - 0.5 * m * m)).unwrap();
            assert!((entropy(&f) - 0.5 * m * m).abs() < 1e-4);
        }
    }

    #[test]
    fn orlicz_reduces_to_lr() {
        let c = build_circle(128).unwrap();
        let f = density_from_fn(&c, |t| 1.0 + 0.8 * libm::cos(t)).unwrap();
        let r = 1.7;
        let a = orlicz_functional(&f, 0.0, r, 0.0).unwrap();
        let b = libm::pow(lp_norm(f.values(), r, &c).unwrap(), r);
        assert!((a - b).abs() < 1e-12);
        assert_eq!(orlicz_functional(&Density::uniform(&c), 2.0, 1.5, 0.5).unwrap(), 0.0);
    }

    #[test]
    fn orlicz_two_level_density() {
        // f = 1 + Δ on a set A of measure 1/4, f = 1 − Δ/3 elsewhere; C = 1
        let c = build_circle(64).unwrap();
        let delta = 3.0;
        let f = Density::from_values(
            &c,
            (0..64).map(|i| if i < 16 { 1.0 + delta } else { 1.0 - delta / 3.0 }).collect(),
        )
        .unwrap();
        let (r, alpha) = (1.5, 0.6);
        let expected = 0.25 * libm::pow(delta, r) * libm::pow(libm::log(1.0 + delta), alpha);
        assert!((orlicz_functional(&f, 1.0, r, alpha).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn weak_type_two_level() {
        // f = 16 on 1/16 of the circle and 0 elsewhere: sup at u = 16
        let c = build_circle(64).unwrap();
        let f = Density::from_values(&c, (0..64).map(|i| if i < 4 { 16.0 } else { 0.0 }).collect()).unwrap();
        let q = 2.0;
        let expected = libm::pow(16.0, 1.5) * libm::sqrt(libm::log(16.0)) * libm::pow(1.0 / 16.0, 1.0);
        assert!((weak_type_functional(&f, 8.0, q).unwrap() - expected).abs() < 1e-12);
        assert_eq!(weak_type_functional(&f, 17.0, q).unwrap(), 0.0);
        let bounded = density_from_fn(&c, |t| 1.0 + 0.5 * libm::cos(t)).unwrap();
        assert_eq!(weak_type_functional(&bounded, 8.0, q).unwrap(), 0.0);
        assert!(weak_type_functional(&f, 4.0, q).is_err());
    }
}
