use std::hint::black_box;

use cliquebound::model::{build_matrix, sample_graph};
use cliquebound::rng::{CounterRng, Domain};
use cliquebound::ModelSpec;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};

fn sampling(c: &mut Criterion) {
    let mut group = c.benchmark_group("sample_graph");
    for n in [100, 500, 1000] {
        let m = build_matrix(&ModelSpec::constant(n, 0.5)).unwrap();
        group.throughput(Throughput::Elements((n * (n - 1) / 2) as u64));
        group.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| {
            let mut trial = 0;
            b.iter(|| {
                trial += 1;
                sample_graph(black_box(m), 7, trial)
            })
        });
    }
    group.finish();
}

fn philox(c: &mut Criterion) {
    let rng = CounterRng::new(7, Domain::Edges, 0);
    let mut group = c.benchmark_group("philox");
    group.throughput(Throughput::Elements(1024));
    group.bench_function("1024 blocks", |b| {
        b.iter(|| (0..1024u64).fold(0u32, |acc, i| acc ^ rng.block(black_box(i))[0]))
    });
    group.finish();
}

criterion_group!(benches, sampling, philox);
criterion_main!(benches);
