use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use mahlerk::asymptotics::convergence_study;
use mahlerk::laurent::parse_polynomial;
use mahlerk::measure::{mk_bruteforce_with, QuadratureConfig};
use mahlerk::Execution;

const POLYS: [&str; 3] = ["z+1", "z^5-1", "z^6+z^5-z^3+z+1"];

fn study(c: &mut Criterion) {
    let mut group = c.benchmark_group("convergence_study_k30");
    group.sample_size(10);
    for text in POLYS {
        let p = parse_polynomial(text).unwrap();
        for exec in [Execution::Sequential, Execution::Parallel] {
            let cfg = QuadratureConfig { execution: exec, ..Default::default() };
            group.bench_with_input(BenchmarkId::new(format!("{exec:?}"), text), &p, |b, p| {
                b.iter(|| convergence_study(black_box(p), 30, &cfg).unwrap())
            });
        }
    }
    group.finish();
}

fn bruteforce(c: &mut Criterion) {
    let mut group = c.benchmark_group("bruteforce_level10_k4");
    group.sample_size(10);
    for text in POLYS {
        let p = parse_polynomial(text).unwrap();
        for exec in [Execution::Sequential, Execution::Parallel] {
            group.bench_with_input(BenchmarkId::new(format!("{exec:?}"), text), &p, |b, p| {
                b.iter(|| mk_bruteforce_with(black_box(p), 4, 10, 1e-9, exec).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, study, bruteforce);
criterion_main!(benches);
