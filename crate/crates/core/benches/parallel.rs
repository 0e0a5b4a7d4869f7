use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use dowling_core::el_shelling::el_verify;
use dowling_core::exec;
use dowling_core::mobius_identities::cor34_exponential_check;
use dowling_core::perm_stats::{des_q_enumerate, DescentWord};
use dowling_core::structures::{Family, Guards};

type Workload<'a> = (&'static str, Box<dyn Fn() + 'a>);

fn workloads(c: &mut Criterion) {
    let g = Guards::default();
    let word: DescentWord = "abaabbab".parse().unwrap();
    let cases: Vec<Workload> = vec![
        (
            "des_q_enumerate/deg8",
            Box::new(|| {
                black_box(des_q_enumerate(&word).unwrap());
            }),
        ),
        (
            "mu_series/partition_n7",
            Box::new(|| {
                black_box(cor34_exponential_check(&Family::Partition, 7, &g).unwrap());
            }),
        ),
        (
            "el_verify/8_2_2",
            Box::new(|| {
                black_box(el_verify(8, 2, 2, &g).unwrap());
            }),
        ),
    ];
    let mut group = c.benchmark_group("parallel_vs_sequential");
    group.sample_size(10);
    for (name, run) in &cases {
        group.bench_function(BenchmarkId::new("parallel", name), |b| b.iter(run));
        group.bench_function(BenchmarkId::new("sequential", name), |b| {
            b.iter(|| exec::sequential(run))
        });
    }
    group.finish();
}

criterion_group!(benches, workloads);
criterion_main!(benches);
