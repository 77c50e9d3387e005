use kantlab_core::measure::{family_gaussian_ratio, signed_from_densities, Density};
use kantlab_core::space::{build_circle, build_gauss_line, build_weighted_line, potentials, SpaceRef};
use kantlab_core::transport::{
    kantorovich_norm, wasserstein, wasserstein_to_reference, wp_lp_oracle, wp_sinkhorn, w1_line,
    wp_quantile_line,
};
use proptest::prelude::*;

fn normalized(raw: &[f64]) -> Vec<f64> {
    let t: f64 = raw.iter().sum();
    raw.iter().map(|v| v / t).collect()
}

fn space_for(circle: bool, n: usize) -> SpaceRef {
    if circle {
        build_circle(n).unwrap()
    } else {
        build_weighted_line(n, 3.0, potentials::flat, 0.0).unwrap()
    }
}

fn masses(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0f64..1.0, n).prop_map(|mut v| {
        v[0] += 0.05;
        normalized(&v)
    })
}

fn pair() -> impl Strategy<Value = (usize, Vec<f64>, Vec<f64>)> {
    (4usize..=12).prop_map(|k| 2 * k).prop_flat_map(|n| (Just(n), masses(n), masses(n)))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn exact_solvers_match_lp((n, a, b) in pair(), circle in any::<bool>(), p in prop::sample::select(vec![1.0, 1.5, 2.0])) {
        let s = space_for(circle, n);
        let exact = wasserstein(p, &a, &b, &s).unwrap().value;
        let lp = wp_lp_oracle(p, &a, &b, &s).unwrap().value;
        prop_assert!((exact - lp).abs() < 1e-6, "{exact} vs {lp}");
        if !circle {
            let q = wp_quantile_line(p, &a, &b, &s).unwrap().value;
            prop_assert!((q - lp).abs() < 1e-6);
        }
    }

    #[test]
    fn sinkhorn_tracks_lp((n, a, b) in pair(), circle in any::<bool>()) {
        let s = space_for(circle, n.clamp(8, 16));
        let (a, b) = (normalized(&a[..s.len()]), normalized(&b[..s.len()]));
        for p in [1.0, 2.0] {
            let lp = wp_lp_oracle(p, &a, &b, &s).unwrap().value;
            let sk = wp_sinkhorn(p, &a, &b, &s, &[]).unwrap().value;
            prop_assert!((sk - lp).abs() <= 1e-3 * lp.max(1e-9), "p={p}: {sk} vs {lp}");
        }
    }

    #[test]
    fn metric_axioms((n, a, b) in pair(), c in masses(24), circle in any::<bool>()) {
        let s = space_for(circle, n);
        let c = normalized(&c[..n]);
        for p in [1.0, 2.0] {
            let w = |x: &[f64], y: &[f64]| wasserstein(p, x, y, &s).unwrap().value;
            prop_assert!(w(&a, &a) < 1e-12);
            prop_assert!((w(&a, &b) - w(&b, &a)).abs() < 1e-12);
            prop_assert!(w(&a, &c) <= w(&a, &b) + w(&b, &c) + 1e-12);
        }
    }

    #[test]
    fn order_is_monotone((n, a, b) in pair(), circle in any::<bool>()) {
        let s = space_for(circle, n);
        let mut last = 0.0;
        for p in [1.0, 1.5, 2.0, 3.0] {
            let w = wasserstein(p, &a, &b, &s).unwrap().value;
            prop_assert!(w >= last - 1e-12, "p={p}");
            last = w;
        }
    }

    #[test]
    fn w1_is_the_kantorovich_norm((n, a, b) in pair(), circle in any::<bool>()) {
        let s = space_for(circle, n);
        let w = |v: &[f64]| v.iter().zip(s.quad_weights()).map(|(m, q)| m / q).collect::<Vec<f64>>();
        let f = Density::from_values(&s, w(&a)).unwrap();
        let g = Density::from_values(&s, w(&b)).unwrap();
        let norm = kantorovich_norm(&signed_from_densities(&f, &g).unwrap()).unwrap();
        let w1 = wasserstein(1.0, &f.node_masses(), &g.node_masses(), &s).unwrap().value;
        prop_assert!((norm - w1).abs() < 1e-10, "{norm} vs {w1}");
    }
}

#[test]
fn cdf_and_quantile_agree_at_p1() {
    let s = build_gauss_line(2048, 10.0).unwrap();
    let f = &family_gaussian_ratio(&s, &[0.7], &[1.3]).unwrap()[0];
    let a = w1_line(&f.node_masses(), s.quad_weights(), &s).unwrap().value;
    let b = wp_quantile_line(1.0, &f.node_masses(), s.quad_weights(), &s).unwrap().value;
    assert!((a - b).abs() < 1e-9);
}

#[test]
fn gaussian_w2_closed_form() {
    let s = build_gauss_line(2048, 10.0).unwrap();
    for m in [0.3, 0.5, 1.0] {
        for sigma in [0.8, 1.0, 1.2] {
            let f = &family_gaussian_ratio(&s, &[m], &[sigma]).unwrap()[0];
            let w2 = wasserstein_to_reference(f, 2.0).unwrap().value;
            let exact = f64::hypot(m, sigma - 1.0);
            assert!((w2 - exact).abs() <= 1e-3 * exact, "m={m} s={sigma}: {w2} vs {exact}");
        }
    }
}

#[test]
fn circle_rotation_by_a_node() {
    let s = build_circle(64).unwrap();
    let a: Vec<f64> = (0..64).map(|i| if i == 0 { 1.0 } else { 0.0 }).collect();
    let b: Vec<f64> = (0..64).map(|i| if i == 5 { 1.0 } else { 0.0 }).collect();
    let h = s.spacing();
    for p in [1.0, 2.0, 3.0] {
        assert!((wasserstein(p, &a, &b, &s).unwrap().value - 5.0 * h).abs() < 1e-12);
    }
    // antipodal mass goes the short way
    let c: Vec<f64> = (0..64).map(|i| if i == 40 { 1.0 } else { 0.0 }).collect();
    assert!((wasserstein(2.0, &a, &c, &s).unwrap().value - 24.0 * h).abs() < 1e-12);
}
