//! Parallel vs sequential throughput of the Szilard ensemble, plus the
//! matching metric on long shapes.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};

use thermocog::matching::{matching_metric, Shape};
use thermocog::szilard::{run_records_sequential, EngineConfig};
use thermocog::ThermalContext;

fn bench_ensemble(c: &mut Criterion) {
    let mut group = c.benchmark_group("szilard_ensemble");
    for &cycles in &[10_000u64, 100_000] {
        let config = EngineConfig::new(
            ThermalContext::new(300.0).unwrap(),
            0.1,
            cycles,
            42,
        )
        .unwrap();
        group.throughput(Throughput::Elements(cycles));
        group.bench_with_input(
            BenchmarkId::new("sequential", cycles),
            &config,
            |b, cfg| b.iter(|| run_records_sequential(cfg)),
        );
        #[cfg(feature = "parallel")]
        group.bench_with_input(BenchmarkId::new("parallel", cycles), &config, |b, cfg| {
            b.iter(|| thermocog::szilard::run_records(cfg))
        });
    }
    group.finish();
}

fn bench_matching(c: &mut Criterion) {
    let a: Shape = "0110100110010110011010011001011001101001100101100110100110010110"
        .parse()
        .unwrap();
    let b = a.complement();
    c.bench_function("matching_metric/len_64", |bench| {
        bench.iter(|| matching_metric(&a, &b).unwrap())
    });
}

criterion_group!(benches, bench_ensemble, bench_matching);
criterion_main!(benches);
