use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};

use geoenv_core::busemann::{sample_busemann_box, SemiInfinite};
use geoenv_core::experiments::{finite_geodesic_run, phi_patterns};
use geoenv_core::lattice::{geodesic, Vertex};
use geoenv_core::nu::nu_forward_sample;
use geoenv_core::stationary::sample_psi;
use geoenv_core::tasep::TasepState;
use geoenv_core::StreamKey;

fn lpp(c: &mut Criterion) {
    let mut g = c.benchmark_group("geodesic");
    for n in [250i64, 1000] {
        g.throughput(Throughput::Elements(((n + 1) * (n + 1)) as u64));
        g.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            let field = StreamKey::new(1, 0, "bench").field();
            b.iter(|| geodesic(&field, Vertex::ORIGIN, Vertex::new(n, n)).unwrap().passage_time)
        });
    }
    g.finish();
    c.bench_function("finite_geodesic_run/rho0.3/n500", |b| {
        let mut r = 0;
        b.iter(|| {
            r += 1;
            finite_geodesic_run(0.3, 500, &StreamKey::new(1, r, "bench")).unwrap().corners
        })
    });
}

fn busemann(c: &mut Criterion) {
    c.bench_function("busemann_box/500", |b| {
        b.iter(|| sample_busemann_box(500, 0.5, &StreamKey::new(2, 0, "bench")).unwrap())
    });
    let mut g = c.benchmark_group("semi_infinite");
    g.sample_size(10);
    for r in [500usize, 2000] {
        g.bench_with_input(BenchmarkId::from_parameter(r), &r, |b, &r| {
            b.iter(|| SemiInfinite::new(0.5, r).run(&StreamKey::new(3, 0, "bench")).unwrap().center_weights.len())
        });
    }
    g.finish();
}

fn tasep(c: &mut Criterion) {
    c.bench_function("tasep/evolve/wd200/t50", |b| {
        let mut r = 0;
        b.iter(|| {
            r += 1;
            let mut s = TasepState::init_bernoulli_pair(0.5, 200, &StreamKey::new(4, r, "bench")).unwrap();
            s.evolve(50.0).unwrap().events
        })
    });
    c.bench_function("phi_patterns/t5-20-80", |b| {
        let mut r = 0;
        b.iter(|| {
            r += 1;
            phi_patterns(0.5, &[5.0, 20.0, 80.0], -3, 4, &StreamKey::new(5, r, "bench")).unwrap()
        })
    });
}

fn samplers(c: &mut Criterion) {
    c.bench_function("sample_psi/half200", |b| {
        let mut r = 0;
        b.iter(|| {
            r += 1;
            sample_psi(0.5, 200, &StreamKey::new(6, r, "bench")).unwrap().hi()
        })
    });
    for k in [1usize, 8] {
        c.bench_function(&format!("nu_forward_sample/k{k}"), |b| {
            let mut r = 0;
            b.iter(|| {
                r += 1;
                black_box(nu_forward_sample(0.4, k, &StreamKey::new(7, r, "bench")).unwrap().center_weight())
            })
        });
    }
}

criterion_group!(benches, lpp, busemann, tasep, samplers);
criterion_main!(benches);
