//! Standard normal special functions.

use crate::error::{Error, Result};
use core::f64::consts::{FRAC_1_SQRT_2, PI};

/// 1/√(2π)
pub const INV_SQRT_2PI: f64 = 0.398_942_280_401_432_7;

pub fn normal_pdf(x: f64) -> f64 {
    INV_SQRT_2PI * libm::exp(-0.5 * x * x)
}

pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

/// Upper tail 1 − Φ(x), accurate far into the tail.
pub fn normal_sf(x: f64) -> f64 {
    0.5 * libm::erfc(x * FRAC_1_SQRT_2)
}

/// Inverse of the standard normal distribution function.
///
/// Rational initial guess (Acklam) followed by one Halley step against
/// `erfc`, which brings the result to full double precision.
pub fn normal_quantile(u: f64) -> f64 {
    const A: [f64; 6] = [
        -3.969683028665376e+01,
        2.209460984245205e+02,
        -2.759285104469687e+02,
        1.38357751867269e+02,
        -3.066479806614716e+01,
        2.506628277459239e+00,
    ];
    const B: [f64; 5] = [
        -5.447609879822406e+01,
        1.615858368580409e+02,
        -1.556989798598866e+02,
        6.680131188771972e+01,
        -1.328068155288572e+01,
    ];
    const C: [f64; 6] = [
        -7.784894002430293e-03,
        -3.223964580411365e-01,
        -2.400758277161838e+00,
        -2.549732539343734e+00,
        4.374664141464968e+00,
        2.938163982698783e+00,
    ];
    const D: [f64; 4] = [
        7.784695709041462e-03,
        3.224671290700398e-01,
        2.445134137142996e+00,
        3.754408661907416e+00,
    ];
    const P_LOW: f64 = 0.02425;

    if u <= 0.0 {
        return f64::NEG_INFINITY;
    }
    if u >= 1.0 {
        return f64::INFINITY;
    }
    let x = if u < P_LOW {
        let q = libm::sqrt(-2.0 * libm::log(u));
        (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    } else if u <= 1.0 - P_LOW {
        let q = u - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        let q = libm::sqrt(-2.0 * libm::log(1.0 - u));
        -(((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
            / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
    };
    // Halley refinement; for the upper half work with the survival function
    // so the residual keeps its relative precision.
    let e = if x > 0.0 { (1.0 - u) - normal_sf(x) } else { normal_cdf(x) - u };
    let step = e * libm::sqrt(2.0 * PI) * libm::exp(0.5 * x * x);
    if !step.is_finite() {
        // the density underflows this deep in the tail
        return x;
    }
    x - step / (1.0 + 0.5 * x * step)
}

/// Gaussian isoperimetric profile I(u) = φ(Φ⁻¹(u)) on [0, 1].
pub fn isoperimetric_profile(u: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&u) || u.is_nan() {
        return Err(Error::OutOfRange { name: "u", value: u, expected: "[0, 1]" });
    }
    // evaluate on the lower half so that I(u) = I(1 − u) holds bit for bit
    let v = if u > 0.5 { 1.0 - u } else { u };
    if v == 0.0 {
        return Ok(0.0);
    }
    Ok(normal_pdf(normal_quantile(v)))
}

/// Absolute moment E|Z|^q = 2^{q/2} Γ((q+1)/2) / √π of a standard normal Z.
pub fn normal_abs_moment(q: f64) -> f64 {
    libm::exp(0.5 * q * core::f64::consts::LN_2 + libm::lgamma((q + 1.0) * 0.5))
        / libm::sqrt(PI)
}

/// Half-width needed so that the two discarded Gaussian tails weigh less than `tail`.
pub fn gaussian_half_width_for_tail(tail: f64) -> f64 {
    -normal_quantile(0.5 * tail)
}
