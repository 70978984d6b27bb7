use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use ndarray::Array2;
use rand::Rng;

use cuelens::features::extract;
use cuelens::learners::{train_forest, Dataset, ForestParams};
use cuelens::lingpipe::Analyzer;
use cuelens::rng::stream;
use cuelens::stats::{kde_fit, ovl};

const REVIEW: &str = "We came here for dinner on a Friday and the place was packed. \
The waiter was friendly, but our food took almost forty minutes to arrive! \
The steak was cooked perfectly and the mashed potatoes were creamy. \
I wouldn't order the soup again, it was bland and barely warm.";

fn text(c: &mut Criterion) {
    let analyzer = Analyzer::default();
    c.bench_function("analyze_review", |b| b.iter(|| analyzer.analyze(REVIEW).unwrap()));
    let doc = analyzer.analyze(REVIEW).unwrap();
    c.bench_function("extract_features", |b| b.iter(|| extract(&doc)));
}

fn noisy(n: usize, d: usize) -> Dataset {
    let mut rng = stream(7, &[]);
    let y: Vec<usize> = (0..n).map(|i| i % 2).collect();
    let x = Array2::from_shape_fn((n, d), |(i, j)| {
        let signal = if j == 0 { y[i] as f64 } else { 0.0 };
        signal + rng.random::<f64>()
    });
    Dataset::unnamed(x, y).unwrap()
}

fn forest(c: &mut Criterion) {
    let mut group = c.benchmark_group("train_forest");
    group.sample_size(20);
    for n_trees in [10, 100] {
        let data = noisy(110, 15);
        let params = ForestParams { n_trees, seed: 1, ..Default::default() };
        group.bench_with_input(BenchmarkId::from_parameter(n_trees), &params, |b, p| {
            b.iter(|| train_forest(&data, p).unwrap())
        });
    }
    group.finish();
}

fn overlap(c: &mut Criterion) {
    let mut rng = stream(3, &[]);
    let a: Vec<f64> = (0..55).map(|_| rng.random::<f64>()).collect();
    let b: Vec<f64> = (0..55).map(|_| rng.random::<f64>() + 0.5).collect();
    let (p, q) = (kde_fit(&a).unwrap(), kde_fit(&b).unwrap());
    c.bench_function("ovl_55_vs_55", |bench| bench.iter(|| ovl(&p, &q)));
}

criterion_group!(benches, text, forest, overlap);
criterion_main!(benches);
