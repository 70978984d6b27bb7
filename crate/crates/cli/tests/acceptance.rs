//! Exit criteria. Each test prints one `[PASS]` / `[FAIL]` line.
//!
//! Run alone with `cargo test -p cuelens-cli --test acceptance -- --nocapture`.

mod common;

use std::path::PathBuf;
use std::time::{Duration, Instant};

use ndarray::Array2;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Exp, Normal};
use statrs::distribution::{Continuous, ContinuousCDF, Normal as StatNormal};

use cuelens::evaluation::{run_experiment, Classifier};
use cuelens::features::ExtractOptions;
use cuelens::learners::{
    logistic_objective, mlp_objective, train_forest, train_tree, Activation, Dataset, ForestParams, MlpModel,
    TreeParams,
};
use cuelens::lingpipe::Analyzer;
use cuelens::rng::stream;
use cuelens::selection::{boruta, build_selection_report, rfe, BorutaParams, RfeOptions, RfeTrace, SelectionOptions, Zone};
use cuelens::stats::kde::integrate;
use cuelens::stats::{kde_fit, ovl_on_grid, spearman, DEFAULT_GRID_POINTS};
use cuelens::{Corpus, FeatureMatrix};

const SEED: u64 = 42;

fn verdict(id: &str, title: &str, ok: bool, detail: String) {
    println!("[{}] {id} {title}: {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "criterion {id} failed: {detail}");
}

fn gini_of(counts: [usize; 2]) -> f64 {
    let n = (counts[0] + counts[1]) as f64;
    if n == 0.0 {
        return 0.0;
    }
    let p = counts[1] as f64 / n;
    1.0 - p * p - (1.0 - p) * (1.0 - p)
}

fn random_dataset(seed: u64, n: usize, d: usize) -> Dataset {
    let mut rng = stream(seed, &[100]);
    let x = Array2::from_shape_fn((n, d), |_| (rng.random_range(0..8) as f64) / 4.0);
    let mut y: Vec<usize> = (0..n).map(|_| rng.random_range(0..2)).collect();
    y[0] = 0;
    y[1] = 1;
    Dataset::unnamed(x, y).unwrap()
}

#[test]
fn c1_ovl_closed_form() {
    let start = Instant::now();
    let unit = StatNormal::new(0.0, 1.0).unwrap();
    let shifted = StatNormal::new(1.0, 1.0).unwrap();
    let f = |x: f64| unit.pdf(x);
    let g = |x: f64| shifted.pdf(x);
    let value = ovl_on_grid(&f, &g, -10.0, 11.0, DEFAULT_GRID_POINTS);
    let expected = 2.0 * unit.cdf(-0.5);
    let elapsed = start.elapsed();
    let ok = (value - expected).abs() <= 0.005 && (expected - 0.6171).abs() < 5e-5 && elapsed < Duration::from_secs(1);
    verdict(
        "1",
        "OVL of N(0,1) and N(1,1)",
        ok,
        format!("{value:.6} vs 2*Phi(-0.5) = {expected:.6} (tol 0.005) in {elapsed:?}"),
    );
}

#[test]
fn c2_kde_normalization() {
    let mut rng = stream(SEED, &[2]);
    let mut worst: f64 = 0.0;
    for i in 0..50 {
        let n = rng.random_range(20..=200);
        let sample: Vec<f64> = match i % 3 {
            0 => Normal::new(rng.random_range(-5.0..5.0), rng.random_range(0.1..3.0)).unwrap().sample_iter(&mut rng).take(n).collect(),
            1 => Exp::new(rng.random_range(0.2..2.0)).unwrap().sample_iter(&mut rng).take(n).collect(),
            _ => (0..n).map(|_| (rng.random_range(0..5) as f64) + if rng.random::<bool>() { 0.0 } else { 10.0 }).collect(),
        };
        let kde = kde_fit(&sample).unwrap();
        let (lo, hi) = kde.support();
        let mass = integrate(&kde, lo, hi, DEFAULT_GRID_POINTS);
        worst = worst.max((mass - 1.0).abs());
    }
    verdict("2", "KDE normalization", worst <= 1e-3, format!("max |mass - 1| = {worst:.2e} over 50 samples (tol 1e-3)"));
}

#[test]
fn c3_tree_importance_decomposition() {
    let mut worst: f64 = 0.0;
    let mut trees = 0;
    for seed in 0..100u64 {
        let mut rng = stream(seed, &[3]);
        let n = rng.random_range(4..40);
        let d = rng.random_range(1..5);
        let data = random_dataset(seed, n, d);
        let depth = [None, Some(1), Some(2), Some(4)][seed as usize % 4];
        let mut grown = vec![train_tree(&data, &TreeParams { max_depth: depth, seed, ..Default::default() }).unwrap()];
        grown.extend(train_forest(&data, &ForestParams { n_trees: 3, seed, ..Default::default() }).unwrap().trees);
        for tree in &grown {
            let total = tree.nodes[0].n_samples() as f64;
            let lhs: f64 = tree
                .nodes
                .iter()
                .filter_map(|node| node.split.as_ref().map(|s| node.n_samples() as f64 / total * s.decrease))
                .sum();
            let rhs = gini_of(tree.nodes[0].counts)
                - tree.leaves().map(|l| l.n_samples() as f64 / total * gini_of(l.counts)).sum::<f64>();
            worst = worst.max((lhs - rhs).abs());
            trees += 1;
        }
    }
    verdict(
        "3",
        "tree importance decomposition",
        worst <= 1e-10,
        format!("max gap {worst:.2e} over {trees} trees from 100 datasets (tol 1e-10)"),
    );
}

fn central_difference<F: Fn(&[f64]) -> f64>(f: F, theta: &[f64], i: usize) -> f64 {
    let h = 1e-5;
    let mut plus = theta.to_vec();
    let mut minus = theta.to_vec();
    plus[i] += h;
    minus[i] -= h;
    (f(&plus) - f(&minus)) / (2.0 * h)
}

fn relative_error(analytic: &[f64], numeric: &[f64]) -> f64 {
    analytic
        .iter()
        .zip(numeric)
        .map(|(a, n)| (a - n).abs() / a.abs().max(n.abs()).max(1e-6))
        .fold(0.0, f64::max)
}

#[test]
fn c4_gradient_checks() {
    let (mut worst_lr, mut worst_mlp): (f64, f64) = (0.0, 0.0);
    for seed in 0..20u64 {
        let mut rng = stream(seed, &[4]);
        let n = rng.random_range(5..30);
        let d = rng.random_range(1..6);
        let data = random_dataset(seed, n, d);

        let theta: Vec<f64> = (0..=d).map(|_| rng.random_range(-1.0..1.0)).collect();
        let c = 10f64.powf(rng.random_range(-2.0..2.0));
        let (_, g) = logistic_objective(&data.x, &data.y, c, &theta);
        let num: Vec<f64> = (0..theta.len())
            .map(|i| central_difference(|t| logistic_objective(&data.x, &data.y, c, t).0, &theta, i))
            .collect();
        worst_lr = worst_lr.max(relative_error(&g, &num));

        let width = rng.random_range(1..7);
        let act = if rng.random::<bool>() { Activation::Tanh } else { Activation::Relu };
        let l2 = 10f64.powf(rng.random_range(-4.0..-1.0));
        let mut theta = MlpModel::init(d, width, act, seed).to_flat();
        theta.iter_mut().for_each(|t| *t += rng.random_range(-0.5..0.5));
        let (_, g) = mlp_objective(&data.x, &data.y, width, act, l2, &theta);
        let num: Vec<f64> = (0..theta.len())
            .map(|i| central_difference(|t| mlp_objective(&data.x, &data.y, width, act, l2, t).0, &theta, i))
            .collect();
        worst_mlp = worst_mlp.max(relative_error(&g, &num));
    }
    verdict(
        "4",
        "analytic gradients vs central differences",
        worst_lr < 1e-4 && worst_mlp < 1e-4,
        format!("max relative error LR {worst_lr:.2e}, MLP {worst_mlp:.2e} over 20 configurations each (tol 1e-4)"),
    );
}

fn nesting_violations(trace: &RfeTrace) -> usize {
    let d = trace.feature_names.len();
    let mut bad = usize::from(!trace.set(0).is_empty());
    for i in 0..=d {
        bad += usize::from(trace.set(i).len() != i);
        for j in i + 1..=d {
            bad += usize::from(!trace.set(i).iter().all(|f| trace.set(j).contains(f)));
        }
    }
    bad
}

#[test]
fn c5_rfe_nesting() {
    let mut traces = 0;
    let mut violations = 0;
    for seed in 0..20u64 {
        let mut rng = stream(seed, &[5]);
        let d = rng.random_range(2..8);
        let mut data = random_dataset(seed, 40, d);
        if seed % 4 == 0 {
            data.x.column_mut(d - 1).fill(1.0);
        }
        let trace = rfe(&data, 1, &RfeOptions { seed, ..Default::default() }).unwrap();
        violations += nesting_violations(&trace);
        traces += 1;
    }
    verdict("5", "RFE nesting", violations == 0, format!("{violations} violations over {traces} traces, every (i, j) pair checked"));
}

#[test]
fn c6_boruta_oracle() {
    let start = Instant::now();
    let n = 110;
    let mut good_runs = 0;
    let mut details = Vec::new();
    for seed in 0..10u64 {
        let mut rng = stream(seed, &[6]);
        let y: Vec<usize> = (0..n).map(|i| i % 2).collect();
        let copy: Vec<f64> = y.iter().map(|&c| c as f64).collect();
        let mut x = Array2::zeros((n, 10));
        for (i, v) in copy.iter().enumerate() {
            x[[i, 0]] = *v;
        }
        for j in 1..10 {
            let mut noise = copy.clone();
            noise.shuffle(&mut rng);
            for (i, v) in noise.into_iter().enumerate() {
                x[[i, j]] = v;
            }
        }
        let data = Dataset::unnamed(x, y).unwrap();
        let v = boruta(&data, &BorutaParams { n_iterations: 100, seed, ..Default::default() }).unwrap();
        let rejected = v[1..].iter().filter(|f| f.zone == Zone::NotRelevant).count();
        let ok = v[0].zone == Zone::Relevant && rejected >= 8;
        good_runs += usize::from(ok);
        details.push(format!("{}:{}/9", v[0].zone.as_str(), rejected));
    }
    let elapsed = start.elapsed();
    verdict(
        "6",
        "Boruta label copy vs permuted noise",
        good_runs >= 9 && elapsed < Duration::from_secs(120),
        format!("{good_runs}/10 runs correct [{}] in {elapsed:.1?}", details.join(" ")),
    );
}

fn dataset_path() -> PathBuf {
    std::env::var_os("CUELENS_DATASET")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../../data/restaurant_reviews.csv")))
}

fn restaurant_features(id: &str, title: &str) -> FeatureMatrix {
    let path = dataset_path();
    if !path.is_file() {
        verdict(id, title, false, format!("dataset not found at {}", path.display()));
    }
    let corpus = Corpus::load(&path).unwrap();
    FeatureMatrix::from_corpus(&corpus, &Analyzer::default(), ExtractOptions::default()).unwrap()
}

/// Published ordering, lowest overlap first.
const PUBLISHED_OVL: [(&str, f64); 15] = [
    ("pausality", 0.585425),
    ("n_typos", 0.630281),
    ("n_words", 0.646805),
    ("n_adjectives", 0.684258),
    ("redundancy", 0.701065),
    ("avg_sentence_length", 0.722965),
    ("n_passive_voice", 0.726593),
    ("n_clauses", 0.726634),
    ("n_verbs", 0.759618),
    ("lexical_diversity", 0.791875),
    ("avg_np_length", 0.831418),
    ("emotiveness", 0.872769),
    ("content_diversity", 0.895416),
    ("n_modal_verbs", 0.906333),
    ("avg_word_length", 0.911932),
];

const PUBLISHED_TOP5: [&str; 5] = ["redundancy", "pausality", "avg_sentence_length", "n_adjectives", "n_words"];

#[test]
fn c7_published_findings() {
    let title = "importance, overlap and ordering on the restaurant reviews";
    let m = restaurant_features("7", title);
    let data = Dataset::from_matrix(&m).unwrap();
    let rep = build_selection_report(&data, &SelectionOptions { seed: SEED, ..Default::default() }).unwrap();

    let top5: Vec<&str> = rep.by_importance().iter().take(5).map(|r| r.feature.as_str()).collect();
    let shared = top5.iter().filter(|f| PUBLISHED_TOP5.contains(f)).count();
    let rho_all = rep.rho_importance_ovl.as_ref().map_or(f64::NAN, |t| t.statistic);
    let rho_dense = rep.rho_importance_ovl_dense.as_ref().map_or(f64::NAN, |t| t.statistic);
    let ours: Vec<f64> = PUBLISHED_OVL.iter().map(|(f, _)| rep.row(f).unwrap().ovl).collect();
    let published: Vec<f64> = PUBLISHED_OVL.iter().map(|(_, v)| *v).collect();
    let ordering = spearman(&ours, &published).map_or(f64::NAN, |t| t.statistic);

    let a = shared >= 3;
    let b = rho_all < 0.0 && rho_dense < rho_all;
    let c = ordering >= 0.5;
    verdict(
        "7",
        title,
        a && b && c,
        format!(
            "(a) top-5 overlap {shared}/5 {top5:?}; (b) rho {rho_all:.3}, without sparse {rho_dense:.3}; (c) OVL ordering rho {ordering:.3}"
        ),
    );
}

#[test]
fn c8_classification_accuracy() {
    let title = "best 10-fold accuracy with at most 6 features";
    let start = Instant::now();
    let m = restaurant_features("8", title);
    let data = Dataset::from_matrix(&m).unwrap();
    let opts = SelectionOptions { seed: SEED, ..Default::default() };
    let trace = rfe(&data, 1, &opts.rfe_options()).unwrap();
    let grids: Vec<_> = Classifier::ALL.iter().map(|&c| (c, c.default_grid())).collect();
    let grid = run_experiment(&data, &trace.nested_sets(), &grids, 10, SEED).unwrap();
    let best = grid
        .cells
        .iter()
        .filter(|c| c.n_features <= 6)
        .max_by(|a, b| a.accuracy.total_cmp(&b.accuracy))
        .unwrap();
    let elapsed = start.elapsed();
    verdict(
        "8",
        title,
        best.accuracy >= 0.70 && elapsed < Duration::from_secs(600),
        format!(
            "{} with {} features: {:.4} (threshold 0.70) in {elapsed:.1?}",
            best.classifier.display_name(),
            best.n_features,
            best.accuracy
        ),
    );
}

#[test]
fn c9_run_all_is_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = common::write_corpus(dir.path(), 30);
    let mut snapshots = Vec::new();
    for run in ["a", "b"] {
        let out = dir.path().join(run);
        let o = common::cuelens(&["run-all", "--seed", "42", "--input", common::s(&corpus), "--outdir", common::s(&out)]);
        assert!(o.status.success(), "{}", common::stderr(&o));
        snapshots.push(common::snapshot(&out));
    }
    let files = snapshots[0].len();
    let differing: Vec<String> = snapshots[0]
        .iter()
        .zip(&snapshots[1])
        .filter(|(a, b)| a != b)
        .map(|(a, _)| a.0.display().to_string())
        .collect();
    let ok = snapshots[0].len() == snapshots[1].len() && differing.is_empty() && files > 20;
    verdict("9", "run-all determinism", ok, format!("{files} files compared, differing: {differing:?}"));
}
