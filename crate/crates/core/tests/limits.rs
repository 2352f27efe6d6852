use geoenv_core::experiments::first_jump_times;
use geoenv_core::limits::{
    corner_rate, gamma_mixture_weights, gamma_survival, jump_survival, nu_density, nu_survival,
    sample_two_min, size_bias, Jump, Variant,
};
use geoenv_core::nu::nu_forward_sample;
use geoenv_core::stats::{ks_distance, EmpiricalDistribution};
use geoenv_core::StreamKey;
use proptest::prelude::*;

/// Composite Simpson rule on `[a, b]`.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let inner: f64 = (1..n)
        .map(|i| f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 })
        .sum();
    (f(a) + f(b) + inner) * h / 3.0
}

fn stated_survival(rho: f64, h: f64) -> f64 {
    let q = rho * (1.0 - rho);
    (1.0 + q * h / ((1.0 - rho).powi(2) + rho * rho)) * (1.0 + q * h) * (-h).exp()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn survival_is_the_stated_closed_form(rho in 0.01f64..0.99, h in 0.0f64..30.0) {
        prop_assert!((nu_survival(rho, h) - stated_survival(rho, h)).abs() < 1e-13);
    }

    #[test]
    fn density_normalises_and_integrates_to_survival(rho in 0.01f64..0.99, h in 0.0f64..10.0) {
        let total = simpson(|x| nu_density(rho, x), 0.0, 60.0, 6000);
        prop_assert!((total - 1.0).abs() < 1e-8);
        let tail = simpson(|x| nu_density(rho, x), h, 60.0, 6000);
        prop_assert!((tail - nu_survival(rho, h)).abs() < 1e-8);
    }

    #[test]
    fn moments_and_size_bias_agree_with_quadrature(rho in 0.01f64..0.99) {
        let sb = size_bias(rho).unwrap();
        let m1 = simpson(|x| x * nu_density(rho, x), 0.0, 60.0, 6000);
        let m2 = simpson(|x| x * x * nu_density(rho, x), 0.0, 60.0, 6000);
        prop_assert!((sb.mean_xi - m1).abs() < 1e-7);
        prop_assert!((sb.mean() - m2 / m1).abs() < 1e-7);
        let mass = simpson(|x| sb.density(x), 0.0, 60.0, 6000);
        prop_assert!((mass - 1.0).abs() < 1e-8);
    }

    #[test]
    fn gamma_mixture_reproduces_survival(rho in 0.01f64..0.99, h in 0.0f64..20.0) {
        let (p1, p2, p3) = gamma_mixture_weights(rho).unwrap();
        prop_assert!((p1 + p2 + p3 - 1.0).abs() < 1e-12);
        prop_assert!(p1 >= 0.0 && p2 >= 0.0 && p3 >= 0.0);
        let mix = p1 * gamma_survival(1, h) + p2 * gamma_survival(2, h) + p3 * gamma_survival(3, h);
        prop_assert!((mix - nu_survival(rho, h)).abs() < 1e-12);
    }

    #[test]
    fn jump_survivals_are_monotone(rho in 0.02f64..0.98, h in 0.0f64..15.0, dh in 0.0f64..3.0) {
        for v in [Variant::One, Variant::Two] {
            for j in [Jump::L10, Jump::L01] {
                let s0 = jump_survival(rho, v, j, h).unwrap();
                let s1 = jump_survival(rho, v, j, h + dh).unwrap();
                prop_assert!((0.0..=1.0).contains(&s0));
                prop_assert!(s1 <= s0 + 1e-12);
                prop_assert!((jump_survival(rho, v, j, 0.0).unwrap() - 1.0).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn diagonal_law_is_the_stated_gamma_mixture() {
    for h in [0.0f64, 0.3, 1.0, 2.5, 7.0] {
        let density = (0.25 + h / 2.0 + h * h / 8.0) * (-h).exp();
        assert!((nu_density(0.5, h) - density).abs() < 1e-14);
    }
    let (a, b, c) = gamma_mixture_weights(0.5).unwrap();
    assert!((a - 0.25).abs() < 1e-14 && (b - 0.5).abs() < 1e-14 && (c - 0.25).abs() < 1e-14);
}

#[test]
fn diagonal_corner_proportion() {
    assert!((corner_rate(0.5).unwrap() - 3.0 / 8.0).abs() < 1e-14);
}

#[test]
fn corner_rate_against_forward_sampler() {
    let rho = 0.3;
    let n = 20_000;
    let corners = (0..n)
        .filter(|&i| {
            nu_forward_sample(rho, 1, &StreamKey::new(3, i, "corner"))
                .unwrap()
                .is_corner()
        })
        .count();
    let frac = corners as f64 / n as f64;
    assert!((frac - corner_rate(rho).unwrap()).abs() < 0.015, "{frac}");
}

#[test]
fn jump_laws_against_conditioned_sampler() {
    let rho = 0.3;
    for v in [Variant::One, Variant::Two] {
        let (mut l10, mut l01) = (Vec::new(), Vec::new());
        for i in 0..20_000 {
            let (x, y) = first_jump_times(rho, v, &StreamKey::new(4, i, "jump")).unwrap();
            l10.push(x);
            l01.push(y);
        }
        for (xs, j) in [(l10, Jump::L10), (l01, Jump::L01)] {
            let e = EmpiricalDistribution::new(xs).unwrap();
            let d = ks_distance(&e, |h| 1.0 - jump_survival(rho, v, j, h).unwrap()).unwrap();
            assert!(d < 0.02, "{v} {j}: {d}");
        }
    }
}

#[test]
fn two_min_moments_match_diagonal_law() {
    let mut rng = StreamKey::new(8, 0, "two-min").rng();
    let n = 400_000;
    let xs: Vec<f64> = (0..n).map(|_| sample_two_min(&mut rng)).collect();
    let m1 = xs.iter().sum::<f64>() / n as f64;
    let m2 = xs.iter().map(|x| x * x).sum::<f64>() / n as f64;
    let sb = size_bias(0.5).unwrap();
    assert!((sb.mean_xi - 2.0).abs() < 1e-12);
    assert!((sb.mean() - 3.25).abs() < 1e-12);
    assert!((m1 - sb.mean_xi).abs() < 0.01, "{m1}");
    assert!((m2 / m1 - sb.mean()).abs() < 0.03, "{}", m2 / m1);
}
