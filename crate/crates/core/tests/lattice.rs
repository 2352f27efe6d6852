use geoenv_core::lattice::{corner_count, geodesic, passage_time, passage_time_star};
use geoenv_core::{LatticePath, Vertex, WeightSource, WeightWindow};
use proptest::prelude::*;

/// Best weight over every up-right path, by explicit enumeration.
fn enumerate(w: &WeightWindow, u: Vertex, v: Vertex) -> (f64, usize) {
    fn walk(w: &WeightWindow, at: Vertex, v: Vertex, acc: f64, best: &mut f64, count: &mut usize) {
        let acc = acc + w.weight(at.a, at.b);
        if at == v {
            *count += 1;
            *best = best.max(acc);
            return;
        }
        if at.a < v.a {
            walk(w, at.offset(1, 0), v, acc, best, count);
        }
        if at.b < v.b {
            walk(w, at.offset(0, 1), v, acc, best, count);
        }
    }
    let (mut best, mut count) = (f64::NEG_INFINITY, 0);
    walk(w, u, v, 0.0, &mut best, &mut count);
    (best, count)
}

fn binomial(n: u64, k: u64) -> usize {
    (1..=k).fold(1u64, |acc, i| acc * (n - k + i) / i) as usize
}

fn window() -> impl Strategy<Value = WeightWindow> {
    (1usize..=6, 1usize..=6, -3i64..3, -3i64..3).prop_flat_map(|(w, h, a, b)| {
        prop::collection::vec(0.01f64..5.0, w * h).prop_map(move |vals| {
            WeightWindow::from_fn(Vertex::new(a, b), (w, h), |x, y| {
                vals[((y - b) as usize) * w + (x - a) as usize]
            })
            .unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn passage_time_matches_enumeration(w in window()) {
        let u = w.origin();
        let v = w.corner();
        let (best, count) = enumerate(&w, u, v);
        let (dx, dy) = ((v.a - u.a) as u64, (v.b - u.b) as u64);
        prop_assert_eq!(count, binomial(dx + dy, dx));
        let t = passage_time(&w, u, v).unwrap();
        prop_assert!((t - best).abs() < 1e-9);
        let g = geodesic(&w, u, v).unwrap();
        prop_assert!((g.passage_time - best).abs() < 1e-9);
        prop_assert!((g.path.weight(&w) - best).abs() < 1e-9);
        prop_assert_eq!(g.path.first(), u);
        prop_assert_eq!(g.path.last(), v);
        prop_assert_eq!(g.path.len() as i64, v.d() - u.d() + 1);
        let star = passage_time_star(&w, u, v).unwrap();
        prop_assert!((star + w.weight(v.a, v.b) - t).abs() < 1e-9);
    }

    #[test]
    fn concatenation_is_dominated(w in window(), fx in 0.0f64..1.0, fy in 0.0f64..1.0) {
        let (u, v) = (w.origin(), w.corner());
        let mid = Vertex::new(
            u.a + ((v.a - u.a) as f64 * fx) as i64,
            u.b + ((v.b - u.b) as f64 * fy) as i64,
        );
        let whole = passage_time(&w, u, v).unwrap();
        let split = passage_time(&w, u, mid).unwrap() + passage_time(&w, mid, v).unwrap()
            - w.weight(mid.a, mid.b);
        prop_assert!(split <= whole + 1e-9);
    }

    #[test]
    fn corners_count_direction_changes(steps in prop::collection::vec(any::<bool>(), 0..40)) {
        let mut v = vec![Vertex::new(0, 0)];
        for &right in &steps {
            let last = *v.last().unwrap();
            v.push(if right { last.offset(1, 0) } else { last.offset(0, 1) });
        }
        let path = LatticePath::new(v).unwrap();
        let turns = steps.windows(2).filter(|s| s[0] != s[1]).count();
        prop_assert_eq!(corner_count(&path), turns);
    }
}

#[test]
fn non_up_right_paths_are_rejected() {
    let bad = vec![Vertex::new(0, 0), Vertex::new(1, 1)];
    assert!(LatticePath::new(bad).is_err());
    let back = vec![Vertex::new(0, 0), Vertex::new(1, 0), Vertex::new(0, 0)];
    assert!(LatticePath::new(back).is_err());
}
