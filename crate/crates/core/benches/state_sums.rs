//! State sums and weight tables on one worker thread versus the full pool.
//! Built without the `parallel` feature only the sequential path is measured.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use kgdf_core::corpus::default_corpus;
use kgdf_core::gdf::WeightTable;
use kgdf_core::state;

fn bench(c: &mut Criterion) {
    let corpus = default_corpus();
    let knots: Vec<_> = corpus.iter().filter(|e| ["cinquefoil", "six-one", "septafoil"].contains(&e.name.as_str())).collect();
    let modes: Vec<(&str, Option<usize>)> = if kgdf_core::par::is_parallel() {
        vec![("sequential", Some(1)), ("parallel", None)]
    } else {
        vec![("sequential", None)]
    };
    let mut group = c.benchmark_group("dk_state_sum");
    group.sample_size(10);
    for (mode, threads) in &modes {
        for e in &knots {
            group.bench_with_input(BenchmarkId::new(*mode, &e.name), &e.diagram, |b, g| {
                b.iter(|| in_pool(*threads, || state::dk_state_sum(g)))
            });
        }
    }
    group.finish();
    let mut group = c.benchmark_group("weight_table");
    group.sample_size(10);
    for (mode, threads) in &modes {
        group.bench_function(BenchmarkId::new(*mode, "order3"), |b| {
            b.iter(|| in_pool(*threads, || WeightTable::build(3).expect("table builds")))
        });
    }
    group.finish();
}

#[cfg(feature = "parallel")]
fn in_pool<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    match threads {
        Some(n) => rayon::ThreadPoolBuilder::new().num_threads(n).build().expect("pool builds").install(f),
        None => f(),
    }
}

#[cfg(not(feature = "parallel"))]
fn in_pool<R>(_threads: Option<usize>, f: impl FnOnce() -> R) -> R {
    f()
}

criterion_group!(benches, bench);
criterion_main!(benches);
