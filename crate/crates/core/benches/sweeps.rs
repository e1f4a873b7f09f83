use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use partition_ops::bar::compare_with_e2;
use partition_ops::check::dual_confluence;
use partition_ops::free::{bm_basis, free_basis};
use partition_ops::par::Exec;
use partition_ops::Prime;

const MODES: [(&str, Exec); 2] = [("parallel", Exec::Parallel), ("sequential", Exec::Sequential)];

fn free_bases(c: &mut Criterion) {
    let mut g = c.benchmark_group("free_basis p=3 gens (1,1,2) w<=9");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| free_basis(Prime::three(), &[1, 1, 2], -25, 4, 9, exec))
        });
    }
    g.finish();
    let mut g = c.benchmark_group("bm_basis p=2 j=0 w<=16");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| bm_basis(Prime::two(), &[0], -30, 5, 16, exec))
        });
    }
    g.finish();
}

fn rewriting(c: &mut Criterion) {
    let mut g = c.benchmark_group("dual confluence p=2 |i|<=6");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| dual_confluence(Prime::two(), 6, 3, exec))
        });
    }
    g.finish();
}

fn bar(c: &mut Criterion) {
    let mut g = c.benchmark_group("bar oracle j=0 w<=4");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| compare_with_e2(0, 4, 0, 23, exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, free_bases, rewriting, bar);
criterion_main!(benches);
