//! Probability densities relative to μ, zero-mass signed measures and the
//! standard test-density families.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::space::{SpaceKind, SpaceRef};

/// Tolerance on μ(f) = 1 and on zero total mass.
pub const MASS_TOL: f64 = 1e-10;

/// Nonnegative f on the nodes with μ(f) = 1, standing for ν = fμ.
#[derive(Debug, Clone)]
pub struct Density {
    space: SpaceRef,
    values: Vec<f64>,
    label: String,
}

impl Density {
    /// Normalizes `values` on the grid. Rejects negative or non-finite samples.
    pub fn from_values(space: &SpaceRef, mut values: Vec<f64>) -> Result<Density> {
        if values.len() != space.len() {
            return Err(Error::Invalid(format!(
                "expected {} values, got {}",
                space.len(),
                values.len()
            )));
        }
        for (index, &v) in values.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite { what: "density sample", index });
            }
            if v < 0.0 {
                return Err(Error::NegativeValue { index, value: v });
            }
        }
        let total = space.integrate(&values);
        if !(total > 0.0) || !total.is_finite() {
            return Err(Error::NotNormalizable(total));
        }
        for v in &mut values {
            *v /= total;
        }
        Ok(Density { space: Arc::clone(space), values, label: String::new() })
    }

    /// The constant density f ≡ 1.
    pub fn uniform(space: &SpaceRef) -> Density {
        Density {
            space: Arc::clone(space),
            values: alloc::vec![1.0; space.len()],
            label: String::from("const"),
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Density {
        self.label = label.into();
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn space(&self) -> &SpaceRef {
        &self.space
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    /// Node masses f_i·w_i of ν = fμ.
    pub fn node_masses(&self) -> Vec<f64> {
        self.values.iter().zip(self.space.quad_weights()).map(|(f, w)| f * w).collect()
    }

    /// True when every value equals one up to `tol`.
    pub fn is_constant_one(&self, tol: f64) -> bool {
        self.values.iter().all(|v| libm::fabs(v - 1.0) <= tol)
    }

    /// Pushforward under a rotation by `shift` nodes (circle only).
    pub fn rotated(&self, shift: usize) -> Result<Density> {
        if !self.space.is_circle() {
            return Err(Error::WrongSpaceKind { expected: "circle" });
        }
        let n = self.values.len();
        let values = (0..n).map(|i| self.values[(i + n - shift % n) % n]).collect();
        Ok(Density { space: Arc::clone(&self.space), values, label: self.label.clone() })
    }
}

/// Samples g on the nodes and normalizes it to a density.
pub fn density_from_fn<G>(space: &SpaceRef, g: G) -> Result<Density>
where
    G: Fn(f64) -> f64,
{
    let values = space.nodes().iter().map(|&x| g(x)).collect();
    Density::from_values(space, values)
}

/// μ(f ≥ u), the closed upper level set measured on the grid.
pub fn tail_prob(f: &Density, u: f64) -> f64 {
    f.values
        .iter()
        .zip(f.space.quad_weights())
        .filter(|(&v, _)| v >= u)
        .map(|(_, w)| w)
        .sum()
}

/// Densities 1 + a·cos(kθ) on the circle, one per (amplitude, frequency) pair.
pub fn family_trig(space: &SpaceRef, amplitudes: &[f64], frequencies: &[u32]) -> Result<Vec<Density>> {
    if !space.is_circle() {
        return Err(Error::WrongSpaceKind { expected: "circle" });
    }
    let mut out = Vec::with_capacity(amplitudes.len() * frequencies.len());
    for &a in amplitudes {
        if !(libm::fabs(a) < 1.0) {
            return Err(Error::OutOfRange { name: "amplitude", value: a, expected: "|a| < 1" });
        }
        for &k in frequencies {
            let f = density_from_fn(space, |t| 1.0 + a * libm::cos(k as f64 * t))?;
            out.push(f.with_label(format!("trig(a={a},k={k})")));
        }
    }
    Ok(out)
}

/// Density of N(m, σ²) relative to N(0, 1) on the Gaussian line.
pub fn family_gaussian_ratio(space: &SpaceRef, means: &[f64], sigmas: &[f64]) -> Result<Vec<Density>> {
    if space.kind() != SpaceKind::GaussLine {
        return Err(Error::WrongSpaceKind { expected: "gauss_line" });
    }
    let half = space.truncation().unwrap_or(0.0) / 2.0;
    let mut out = Vec::with_capacity(means.len() * sigmas.len());
    for &m in means {
        if !(libm::fabs(m) <= half) {
            return Err(Error::OutOfRange { name: "mean", value: m, expected: "|m| <= L/2" });
        }
        for &sigma in sigmas {
            if !(sigma > 0.5 && sigma < 2.0) {
                return Err(Error::OutOfRange { name: "sigma", value: sigma, expected: "(0.5, 2)" });
            }
            let f = gaussian_target_density(space, m, sigma)?;
            out.push(f.with_label(format!("gauss_ratio(m={m},s={sigma})")));
        }
    }
    Ok(out)
}

/// Density of N(m, σ²) relative to μ on any line space, computed in the log
/// domain as exp(−(x−m)²/(2σ²) + V(x)) and normalized on the grid.
pub fn gaussian_target_density(space: &SpaceRef, mean: f64, sigma: f64) -> Result<Density> {
    if space.is_circle() {
        return Err(Error::WrongSpaceKind { expected: "line" });
    }
    let logs: Vec<f64> = space
        .nodes()
        .iter()
        .zip(space.potential())
        .map(|(&x, &v)| {
            let z = (x - mean) / sigma;
            -0.5 * z * z + v
        })
        .collect();
    let top = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Density::from_values(space, logs.iter().map(|l| libm::exp(l - top)).collect())
}

/// Gaussian bumps N(m, σ²) relative to μ on a line space (any potential).
pub fn family_gaussian_bumps(space: &SpaceRef, means: &[f64], sigmas: &[f64]) -> Result<Vec<Density>> {
    let mut out = Vec::with_capacity(means.len() * sigmas.len());
    for &m in means {
        for &sigma in sigmas {
            if !(sigma > 0.0) {
                return Err(Error::OutOfRange { name: "sigma", value: sigma, expected: "> 0" });
            }
            let f = gaussian_target_density(space, m, sigma)?;
            out.push(f.with_label(format!("bump(m={m},s={sigma})")));
        }
    }
    Ok(out)
}

/// Tall von Mises bumps exp(κ(cos(θ − π) − 1)) on the circle.
pub fn family_von_mises(space: &SpaceRef, concentrations: &[f64]) -> Result<Vec<Density>> {
    if !space.is_circle() {
        return Err(Error::WrongSpaceKind { expected: "circle" });
    }
    concentrations
        .iter()
        .map(|&kappa| {
            if !(kappa >= 0.0) {
                return Err(Error::OutOfRange { name: "kappa", value: kappa, expected: ">= 0" });
            }
            let f = density_from_fn(space, |t| {
                libm::exp(kappa * (libm::cos(t - core::f64::consts::PI) - 1.0))
            })?;
            Ok(f.with_label(format!("von_mises(k={kappa})")))
        })
        .collect()
}

/// Flat-topped bumps on the circle: ε + exp(−((θ−π)/w)^8), one per half-width w.
///
/// Their upper level sets have edges that are sharp relative to the plateau,
/// so tail probabilities converge quickly under grid refinement.
pub fn family_plateau(space: &SpaceRef, half_widths: &[f64], floor: f64) -> Result<Vec<Density>> {
    if !space.is_circle() {
        return Err(Error::WrongSpaceKind { expected: "circle" });
    }
    half_widths
        .iter()
        .map(|&w| {
            if !(w > 0.0 && w < core::f64::consts::PI) {
                return Err(Error::OutOfRange { name: "half_width", value: w, expected: "(0, pi)" });
            }
            let f = density_from_fn(space, |t| {
                let z = (t - core::f64::consts::PI) / w;
                let z2 = z * z;
                floor + libm::exp(-(z2 * z2) * (z2 * z2))
            })?;
            Ok(f.with_label(format!("plateau(w={w})")))
        })
        .collect()
}

/// Zero-mass signed measure on the nodes.
#[derive(Debug, Clone)]
pub struct SignedMeasure {
    space: SpaceRef,
    node_masses: Vec<f64>,
}

impl SignedMeasure {
    pub fn new(space: &SpaceRef, node_masses: Vec<f64>) -> Result<SignedMeasure> {
        if node_masses.len() != space.len() {
            return Err(Error::Invalid(format!(
                "expected {} masses, got {}",
                space.len(),
                node_masses.len()
            )));
        }
        let total: f64 = node_masses.iter().sum();
        let scale: f64 = node_masses.iter().map(|m| libm::fabs(*m)).sum::<f64>().max(1.0);
        if libm::fabs(total) > MASS_TOL * scale {
            return Err(Error::NonzeroTotalMass(total));
        }
        Ok(SignedMeasure { space: Arc::clone(space), node_masses })
    }

    pub fn space(&self) -> &SpaceRef {
        &self.space
    }

    pub fn node_masses(&self) -> &[f64] {
        &self.node_masses
    }

    pub fn total_mass(&self) -> f64 {
        self.node_masses.iter().sum()
    }

    /// Jordan decomposition (m⁺, m⁻) as nonnegative node masses.
    pub fn jordan(&self) -> (Vec<f64>, Vec<f64>) {
        let pos = self.node_masses.iter().map(|m| m.max(0.0)).collect();
        let neg = self.node_masses.iter().map(|m| (-m).max(0.0)).collect();
        (pos, neg)
    }
}

pub(crate) fn same_space(a: &SpaceRef, b: &SpaceRef) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// (f − g)μ for two densities on the same space.
pub fn signed_from_densities(f: &Density, g: &Density) -> Result<SignedMeasure> {
    if !same_space(&f.space, &g.space) {
        return Err(Error::SpaceMismatch);
    }
    let masses = f
        .values
        .iter()
        .zip(&g.values)
        .zip(f.space.quad_weights())
        .map(|((a, b), w)| (a - b) * w)
        .collect();
    SignedMeasure::new(&f.space, masses)
}
