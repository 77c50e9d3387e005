//! Seeded random configurations for the pointwise checkers.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use kantlab_core::space::Space1D;

/// Independent stream for configuration `case` of check `check`.
pub fn case_rng(seed: u64, check: usize, case: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(check as u64);
    rng.set_word_pos((case as u128) << 32);
    rng
}

/// 1 + amp·h/‖h‖_∞ for a random trigonometric polynomial h of degree 4.
pub fn random_trig(rng: &mut ChaCha8Rng, space: &Space1D, amp: f64) -> Vec<f64> {
    let coef: Vec<(f64, f64)> = (0..4).map(|_| (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    let raw: Vec<f64> = space
        .nodes()
        .iter()
        .map(|x| {
            coef.iter()
                .enumerate()
                .map(|(k, (a, b))| {
                    let w = (k + 1) as f64 * x;
                    a * w.cos() + b * w.sin()
                })
                .sum()
        })
        .collect();
    let top = raw.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-12);
    raw.iter().map(|v| 1.0 + amp * v / top).collect()
}

pub struct HarnackCase {
    pub f: Vec<f64>,
    pub t: f64,
    pub i: usize,
    pub j: usize,
}

/// Nonnegative f on the circle.
pub fn harnack_case(rng: &mut ChaCha8Rng, space: &Space1D) -> HarnackCase {
    let amp = rng.gen_range(0.0..0.99);
    let f = random_trig(rng, space, amp);
    let t = rng.gen_range(0.05..2.0);
    let n = space.len();
    HarnackCase { f, t, i: rng.gen_range(0..n), j: rng.gen_range(0..n) }
}

/// Positive g = exp(h) with a random smooth h.
pub fn log_harnack_case(rng: &mut ChaCha8Rng, space: &Space1D) -> HarnackCase {
    let amp = rng.gen_range(0.1..3.0);
    let g = random_trig(rng, space, amp).iter().map(|v| (v - 1.0).exp()).collect();
    let t = rng.gen_range(0.05..2.0);
    let n = space.len();
    HarnackCase { f: g, t, i: rng.gen_range(0..n), j: rng.gen_range(0..n) }
}

/// g with values in [0, 1], touching both ends.
pub fn isoperimetry_case(rng: &mut ChaCha8Rng, space: &Space1D) -> (Vec<f64>, f64) {
    let g = random_trig(rng, space, 1.0).iter().map(|v| 0.5 * v.clamp(0.0, 2.0)).collect();
    (g, rng.gen_range(0.05..2.0))
}

pub struct DualityCase {
    pub f: Vec<f64>,
    pub phi: Vec<f64>,
    pub eps: f64,
    pub p: f64,
}

pub fn duality_case(rng: &mut ChaCha8Rng, space: &Space1D, case: usize) -> DualityCase {
    let amp = rng.gen_range(0.0..0.95);
    let f = random_trig(rng, space, amp);
    let phi = (0..space.len()).map(|_| rng.gen_range(-2.0..2.0)).collect();
    let eps = rng.gen_range(0.05..5.0);
    DualityCase { f, phi, eps, p: [1.0, 1.5, 2.0][case % 3] }
}
