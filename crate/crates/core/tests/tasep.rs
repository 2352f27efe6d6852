use geoenv_core::tasep::{lpp_clock_coupling_check, TasepState};
use geoenv_core::StreamKey;
use proptest::prelude::*;

#[test]
fn clock_coupling_is_exact_on_wide_windows() {
    for (i, rho) in [0.2, 0.5, 0.8].into_iter().enumerate() {
        let report = lpp_clock_coupling_check(rho, 200, 30.0, &StreamKey::new(31, i as u32, "coupling")).unwrap();
        assert!(report.pass, "{:?}", report.mismatches);
        assert!(report.swaps > 1000);
        assert!(report.pair_moves > 0);
    }
}

#[test]
fn first_pair_move_is_fair_at_half_density() {
    let n = 8000;
    let mut right = 0;
    for i in 0..n {
        let mut s = TasepState::init_bernoulli_pair(0.5, 30, &StreamKey::new(32, i, "first")).unwrap();
        s.evolve(10.0).unwrap();
        let m = s.pair_moves().first().expect("the pair moves by t = 10");
        assert_eq!(m.a + m.b, 1);
        right += usize::from(m.a == 1);
    }
    let f = right as f64 / n as f64;
    assert!((f - 0.5).abs() < 0.02, "{f}");
}

#[test]
fn bernoulli_density_is_preserved_away_from_the_pair() {
    let (rho, n) = (0.3, 3000u32);
    let mut ones = 0u32;
    for i in 0..n {
        let mut s = TasepState::init_bernoulli_pair(rho, 120, &StreamKey::new(33, i, "density")).unwrap();
        s.evolve(5.0).unwrap();
        ones += (-70..-50).map(|x| u32::from(s.occupied(x).unwrap())).sum::<u32>();
    }
    let f = ones as f64 / (20 * n) as f64;
    assert!((f - rho).abs() < 0.01, "{f}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn evolving_in_stages_changes_nothing(seed in any::<u64>(), rho in 0.1f64..0.9, t1 in 0.1f64..4.0, t2 in 0.1f64..4.0) {
        let key = StreamKey::new(seed, 0, "stages");
        let mut whole = TasepState::init_bernoulli_pair(rho, 60, &key).unwrap();
        whole.evolve(t1 + t2).unwrap();
        let mut staged = TasepState::init_bernoulli_pair(rho, 60, &key).unwrap();
        staged.evolve(t1).unwrap();
        staged.evolve(t1 + t2).unwrap();
        prop_assert_eq!(whole.events(), staged.events());
        prop_assert_eq!(whole.pair_labels(), staged.pair_labels());
        prop_assert_eq!(whole.pair_moves(), staged.pair_moves());
        let count = |s: &TasepState| (s.lo()..=s.hi()).filter(|&x| s.occupied(x) == Some(true)).count();
        prop_assert_eq!(count(&whole), count(&staged));
        let (a, b) = whole.pair_labels();
        prop_assert!(a >= 0 && b >= 0);
        prop_assert_eq!(whole.pair_moves().len() as i64, a + b);
    }
}
