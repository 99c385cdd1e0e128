use criterion::{criterion_group, criterion_main, Criterion};
use qtwm_cli::spec::{Protocol, SweepSpec};
use qtwm_cli::sweep::run_sweep;

fn sweeps(c: &mut Criterion) {
    let spec =
        SweepSpec::new(Protocol::Case1, vec!["D2=0:1:41".parse().unwrap(), "p2=0:1:41".parse().unwrap()], vec![])
            .unwrap();
    let mut g = c.benchmark_group("sweep case1 41x41");
    g.sample_size(20);
    g.bench_function("1 worker", |b| b.iter(|| run_sweep(&spec, Some(1), 0).unwrap()));
    g.bench_function("default workers", |b| b.iter(|| run_sweep(&spec, None, 0).unwrap()));
    g.finish();
}

criterion_group!(benches, sweeps);
criterion_main!(benches);
