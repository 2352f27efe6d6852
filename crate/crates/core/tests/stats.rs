use geoenv_core::stats::{
    batch_ci, ks_distance, ks_two_sample, tv_distance, tv_to_pmf, Counts, EmpiricalDistribution,
};
use geoenv_core::StreamKey;
use proptest::prelude::*;
use rand_distr::{Distribution, StandardNormal};

fn counts(len: usize) -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(0u64..50, len).prop_filter("non-empty", |c| c.iter().sum::<u64>() > 0)
}

fn pair() -> impl Strategy<Value = (Vec<u64>, Vec<u64>)> {
    (1usize..12).prop_flat_map(|n| (counts(n), counts(n)))
}

proptest! {
    #[test]
    fn tv_is_a_metric_on_frequencies((p, q) in pair()) {
        let (p, q) = (Counts::from_counts(p), Counts::from_counts(q));
        let d = tv_distance(&p, &q).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&d));
        prop_assert!((d - tv_distance(&q, &p).unwrap()).abs() < 1e-12);
        prop_assert!(tv_distance(&p, &p).unwrap().abs() < 1e-12);
        // Oracle: half the l1 distance between frequency vectors.
        let f = |c: &Counts, i: usize| c.as_slice()[i] as f64 / c.total() as f64;
        let l1: f64 = (0..p.alphabet()).map(|i| (f(&p, i) - f(&q, i)).abs()).sum();
        prop_assert!((d - l1 / 2.0).abs() < 1e-12);
    }

    #[test]
    fn ks_bounds_and_symmetry(a in prop::collection::vec(-5.0f64..5.0, 1..60),
                              b in prop::collection::vec(-5.0f64..5.0, 1..60)) {
        let ea = EmpiricalDistribution::new(a.clone()).unwrap();
        let eb = EmpiricalDistribution::new(b).unwrap();
        let d = ks_two_sample(&ea, &eb);
        prop_assert!((0.0..=1.0).contains(&d));
        prop_assert!((d - ks_two_sample(&eb, &ea)).abs() < 1e-12);
        prop_assert_eq!(ks_two_sample(&ea, &ea), 0.0);
        let one = ks_distance(&ea, |x| ((x + 5.0) / 10.0).clamp(0.0, 1.0)).unwrap();
        prop_assert!((0.0..=1.0).contains(&one));
        // Oracle: the supremum is attained at a sample point, from one side or the other.
        let n = a.len() as f64;
        let brute = a
            .iter()
            .map(|&x| {
                let f = ((x + 5.0) / 10.0).clamp(0.0, 1.0);
                let le = a.iter().filter(|&&y| y <= x).count() as f64 / n;
                let lt = a.iter().filter(|&&y| y < x).count() as f64 / n;
                (le - f).abs().max((lt - f).abs())
            })
            .fold(0.0, f64::max);
        prop_assert!((one - brute).abs() < 1e-12);
    }
}

#[test]
fn tv_needs_a_common_alphabet() {
    let p = Counts::from_counts(vec![1, 2]);
    let q = Counts::from_counts(vec![1, 2, 3]);
    assert!(tv_distance(&p, &q).is_err());
}

#[test]
fn single_point_against_uniform() {
    let e = EmpiricalDistribution::new(vec![0.5]).unwrap();
    assert!((ks_distance(&e, |x| x.clamp(0.0, 1.0)).unwrap() - 0.5).abs() < 1e-12);
}

#[test]
fn tv_of_a_biased_coin() {
    let c = Counts::from_counts(vec![60, 40]);
    assert!((tv_to_pmf(&c, |_| 0.5).unwrap() - 0.1).abs() < 1e-12);
}

#[test]
fn batch_interval_for_gaussian_noise() {
    let mut rng = StreamKey::new(11, 0, "gauss").rng();
    let xs: Vec<f64> = (0..1_000_000).map(|_| StandardNormal.sample(&mut rng)).collect();
    let (m, hw) = batch_ci(&xs, 20).unwrap();
    assert!(m.abs() < 4e-3, "{m}");
    let expected = 1.96e-3;
    assert!((hw / expected - 1.0).abs() < 0.25, "{hw}");
}
