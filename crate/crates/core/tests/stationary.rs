use geoenv_core::stationary::{
    chain_transitions, etabar_from_star, project_bernoulli, project_etabar_star, sample_psi,
    sample_sigma, sample_x_plus, sigma_from_drivers, x_minus_pmf, x_plus_pmf, ChainState,
    HalfLineDriver, Symbol,
};
use geoenv_core::stats::{tv_to_pmf, Counts};
use geoenv_core::StreamKey;
use proptest::prelude::*;

#[test]
fn bernoulli_projection_is_product_measure() {
    let (rho, l, n) = (0.3, 8i64, 20_000u32);
    let mut ones = vec![0u32; (2 * l + 1) as usize];
    let (mut both_near, mut both_across) = (0u32, 0u32);
    for i in 0..n {
        let sigma = sample_sigma(rho, l as usize, &StreamKey::new(21, i, "bern")).unwrap();
        let eta = project_bernoulli(&sigma).unwrap();
        assert_eq!(eta.get(0), Some(Symbol::Star));
        for x in (-l..=l).filter(|&x| x != 0) {
            ones[(x + l) as usize] += u32::from(eta.bit(x).unwrap());
        }
        both_near += u32::from(eta.bit(1).unwrap() & eta.bit(2).unwrap());
        both_across += u32::from(eta.bit(-1).unwrap() & eta.bit(1).unwrap());
    }
    for x in (-l..=l).filter(|&x| x != 0) {
        let f = ones[(x + l) as usize] as f64 / n as f64;
        assert!((f - rho).abs() < 0.015, "site {x}: {f}");
    }
    for c in [both_near, both_across] {
        assert!((c as f64 / n as f64 - rho * rho).abs() < 0.01);
    }
}

#[test]
fn x_plus_sampler_and_pmfs() {
    for rho in [0.3, 0.5, 0.7] {
        let total: f64 = (1..400).map(|k| x_plus_pmf(rho, k)).sum();
        assert!((total - 1.0).abs() < 1e-12);
        let minus: f64 = (1..400).map(|k| x_minus_pmf(rho, k)).sum();
        assert!((minus - 1.0).abs() < 1e-12);
        let mut rng = StreamKey::new(22, 0, format!("x+/{rho}")).rng();
        let mut counts = Counts::zeros(1);
        for _ in 0..100_000 {
            counts.add_growing(sample_x_plus(rho, &mut rng).unwrap() as usize);
        }
        let d = tv_to_pmf(&counts, |k| x_plus_pmf(rho, k as i64)).unwrap();
        assert!(d < 0.01, "{rho}: {d}");
    }
}

#[test]
fn pair_sample_has_the_pair() {
    for i in 0..50 {
        let psi = sample_psi(0.4, 12, &StreamKey::new(23, i, "psi")).unwrap();
        assert_eq!(psi.lo(), -12);
        assert_eq!(psi.hi(), 13);
        assert_eq!(psi.bit(0), Some(0));
        assert_eq!(psi.bit(1), Some(1));
        assert!((psi.lo()..=psi.hi()).all(|x| psi.bit(x).is_some()));
    }
}

fn drivers() -> impl Strategy<Value = (Vec<bool>, Vec<bool>, Vec<bool>, Vec<bool>)> {
    (1usize..30, 1usize..30).prop_flat_map(|(r, l)| {
        (
            prop::collection::vec(any::<bool>(), r),
            prop::collection::vec(any::<bool>(), r),
            prop::collection::vec(any::<bool>(), l),
            prop::collection::vec(any::<bool>(), l),
        )
    })
}

proptest! {
    #[test]
    fn projections_differ_exactly_at_stars((a1, a2, b1, b2) in drivers()) {
        let right = HalfLineDriver::from_bits(&a1, &a2).unwrap();
        let left = HalfLineDriver::from_bits(&b1, &b2).unwrap();
        let sigma = sigma_from_drivers(&right, &left);
        prop_assert_eq!(sigma.get(0), Some(Symbol::Star));
        let star = project_etabar_star(&sigma).unwrap();
        let bern = project_bernoulli(&sigma).unwrap();
        for x in (sigma.lo()..=sigma.hi()).filter(|&x| x != 0) {
            let s = sigma.get(x).unwrap();
            let (p, q) = (star.bit(x).unwrap(), bern.bit(x).unwrap());
            if s == Symbol::Star {
                prop_assert_ne!(p, q);
                prop_assert_eq!(p, u8::from(x > 0));
            } else {
                prop_assert_eq!(p, q);
                prop_assert_eq!(Some(p), s.bit());
            }
        }
        let eta = etabar_from_star(&star).unwrap();
        prop_assert_eq!(eta.bit(0), Some(0));
        prop_assert_eq!(eta.bit(1), Some(1));
        prop_assert_eq!(eta.hi(), star.hi() + 1);
    }

    #[test]
    fn chain_rows_are_distributions(r2 in 0u64..50, gap in 0u64..50, rho in 0.01f64..0.99) {
        let p = chain_transitions(ChainState { r1: r2 + gap, r2 }, rho).unwrap();
        prop_assert!(p.iter().all(|&x| x >= -1e-15));
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        if gap == 0 {
            // r1 >= r2 must survive the step.
            prop_assert!(p[2].abs() < 1e-15);
        }
    }
}
