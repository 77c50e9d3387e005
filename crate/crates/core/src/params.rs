/// Exponents and constants of one inequality evaluation.
///
/// Unused fields stay NaN so that reports can tell "not applicable" from zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InequalityParams {
    pub p: f64,
    pub q: f64,
    /// Dimension parameter N (may be infinite).
    pub n_dim: f64,
    pub theta: f64,
    pub r: f64,
    pub alpha: f64,
    pub s: f64,
    /// Curvature constant K.
    pub k: f64,
    /// Log-Sobolev or spectral-gap constant.
    pub lambda: f64,
    /// Threshold C of truncated functionals.
    pub c_level: f64,
    /// Level u of tail probabilities.
    pub u: f64,
    /// Time t of semigroup-based checks.
    pub t: f64,
}

impl Default for InequalityParams {
    fn default() -> Self {
        InequalityParams {
            p: f64::NAN,
            q: f64::NAN,
            n_dim: f64::NAN,
            theta: f64::NAN,
            r: f64::NAN,
            alpha: f64::NAN,
            s: f64::NAN,
            k: f64::NAN,
            lambda: f64::NAN,
            c_level: f64::NAN,
            u: f64::NAN,
            t: f64::NAN,
        }
    }
}

impl InequalityParams {
    /// θ = 1 + 1/p + 1/N and r = pqθ/(p + q) for finite N.
    pub fn finite_dimension(p: f64, q: f64, n_dim: f64) -> Self {
        let theta = 1.0 + 1.0 / p + 1.0 / n_dim;
        InequalityParams { p, q, n_dim, theta, r: p * q * theta / (p + q), ..Default::default() }
    }

    /// r = 3q/(q+2), α = q/(q+2), s = 2q/(q+2) for the N = ∞ results.
    pub fn infinite_dimension(q: f64) -> Self {
        InequalityParams {
            p: 2.0,
            q,
            n_dim: f64::INFINITY,
            theta: 1.5,
            r: 3.0 * q / (q + 2.0),
            alpha: q / (q + 2.0),
            s: 2.0 * q / (q + 2.0),
            ..Default::default()
        }
    }

    /// Tail exponent 3/(2r) = (q+2)/(2q) of the weak-type bound.
    pub fn weak_exponent(&self) -> f64 {
        1.5 / self.r
    }

    pub fn with_t(mut self, t: f64) -> Self {
        self.t = t;
        self
    }

    pub fn with_c_level(mut self, c: f64) -> Self {
        self.c_level = c;
        self
    }

    pub fn with_u(mut self, u: f64) -> Self {
        self.u = u;
        self
    }

    pub fn with_k(mut self, k: f64) -> Self {
        self.k = k;
        self
    }

    pub fn with_lambda(mut self, lambda: f64) -> Self {
        self.lambda = lambda;
        self
    }

    pub fn with_p(mut self, p: f64) -> Self {
        self.p = p;
        self
    }

    pub fn with_q(mut self, q: f64) -> Self {
        self.q = q;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinite_dimension_exponents() {
        for &q in &[1.1, 1.5, 2.0] {
            let prm = InequalityParams::infinite_dimension(q);
            assert!((prm.r - 3.0 / (1.0 + 2.0 / q)).abs() < 1e-15);
            assert!((prm.weak_exponent() - (q + 2.0) / (2.0 * q)).abs() < 1e-15);
            assert!((prm.alpha * (1.0 + 2.0 / q) - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn finite_dimension_exponents() {
        let prm = InequalityParams::finite_dimension(2.0, 3.0, 4.0);
        assert!((prm.theta - 1.75).abs() < 1e-15);
        assert!((prm.r - 2.0 * 3.0 * 1.75 / 5.0).abs() < 1e-15);
    }
}
