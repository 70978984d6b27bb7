use std::fmt;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, Context};
use log::{info, warn};
use serde::{Deserialize, Serialize};

use cuelens::corpus::{import_delimited, ImportOptions};
use cuelens::evaluation::{run_experiment, Classifier, GridConfig};
use cuelens::features::ExtractOptions;
use cuelens::learners::ModelSpec;
use cuelens::lingpipe::{Analyzer, Lexicons, WordSet};
use cuelens::selection::{build_selection_report, rfe, BorutaParams, RfeTrace, SelectionOptions};
use cuelens::stats::{class_histogram, feature_stats_by_ovl, spearman_matrix, write_histogram_csv, FeatureStats, DEFAULT_BINS};
use cuelens::{Corpus, Dataset, FeatureMatrix};

use crate::artifacts::{self as art, path_in, read_json, write_json, write_with};
use crate::{report, ImportArgs, RunConfig};

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or unusable flag values.
    Usage(String),
    /// An artifact an earlier subcommand should have produced.
    Missing(String),
    Internal(anyhow::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Internal(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Missing(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
            CliError::Missing(m) => write!(f, "missing prerequisite {m}"),
            CliError::Internal(e) => write!(f, "{e:#}"),
        }
    }
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Internal(e)
    }
}

impl From<cuelens::Error> for CliError {
    fn from(e: cuelens::Error) -> Self {
        CliError::Internal(e.into())
    }
}

pub type CliResult<T = ()> = Result<T, CliError>;

/// Selection-independent per-feature statistics, ascending by OVL.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsFile {
    pub n_fake: usize,
    pub n_real: usize,
    pub histogram_bins: usize,
    pub features: Vec<FeatureStats>,
}

fn existing_file(path: &Path, flag: &str) -> CliResult<PathBuf> {
    if path.is_file() {
        Ok(path.to_path_buf())
    } else {
        Err(CliError::Usage(format!("{flag}: no such file: {}", path.display())))
    }
}

fn required_input(cfg: &RunConfig, command: &str) -> CliResult<PathBuf> {
    let path = cfg
        .input
        .as_deref()
        .ok_or_else(|| CliError::Usage(format!("--input is required for {command}")))?;
    existing_file(path, "--input")
}

fn require_artifact(outdir: &Path, name: &str, producer: &str) -> CliResult<PathBuf> {
    let p = path_in(outdir, name);
    if p.is_file() {
        Ok(p)
    } else {
        Err(CliError::Missing(format!("{} (run `{producer}` first)", p.display())))
    }
}

fn analyzer(cfg: &RunConfig) -> CliResult<Analyzer> {
    let mut lex = Lexicons::embedded();
    if let Some(p) = &cfg.dictionary {
        lex = lex.with_dictionary(WordSet::load(existing_file(p, "--dictionary")?)?);
    }
    if let Some(p) = &cfg.allowlist {
        lex = lex.with_allowlist(WordSet::load(existing_file(p, "--allowlist")?)?);
    }
    Ok(Analyzer::new(lex))
}

/// `--input` if given, else the extract output in the artifact directory.
fn features_source(cfg: &RunConfig) -> CliResult<PathBuf> {
    match &cfg.input {
        Some(p) => existing_file(p, "--input"),
        None => require_artifact(&cfg.outdir, art::FEATURES, "extract"),
    }
}

fn load_features(path: &Path) -> CliResult<FeatureMatrix> {
    Ok(FeatureMatrix::load(path).with_context(|| format!("reading {}", path.display()))?)
}

fn selection_options(cfg: &RunConfig) -> CliResult<SelectionOptions> {
    if cfg.boruta_iterations < 10 {
        return Err(CliError::Usage("--boruta-iterations must be at least 10".into()));
    }
    let defaults = SelectionOptions::default();
    Ok(SelectionOptions {
        seed: cfg.seed,
        boruta: BorutaParams { n_iterations: cfg.boruta_iterations, ..defaults.boruta.clone() },
        ..defaults
    })
}

fn grids(cfg: &RunConfig) -> CliResult<Vec<(Classifier, Vec<ModelSpec>)>> {
    let config = match &cfg.grid_config {
        Some(p) => {
            let text = std::fs::read_to_string(existing_file(p, "--grid-config")?)
                .map_err(|e| CliError::Usage(format!("--grid-config: {e}")))?;
            GridConfig::from_json(&text).map_err(|e| CliError::Usage(format!("--grid-config: {e}")))?
        }
        None => GridConfig::default(),
    };
    let mut chosen: Vec<Classifier> = Vec::new();
    for c in cfg.classifiers.clone().unwrap_or_else(|| Classifier::ALL.to_vec()) {
        if !chosen.contains(&c) {
            chosen.push(c);
        }
    }
    Ok(chosen.into_iter().map(|c| (c, config.grid_for(c))).collect())
}

fn print_feature_summary(m: &FeatureMatrix) {
    let fake = m.rows.iter().filter(|r| r.label == cuelens::Label::Fake).count();
    println!("{} reviews ({fake} fake, {} real)", m.n_rows(), m.n_rows() - fake);
    if m.n_rows() == 0 {
        return;
    }
    println!("{:<22} {:>10} {:>10} {:>10} {:>10}", "feature", "mean", "sd", "min", "max");
    for (j, name) in m.feature_names.iter().enumerate() {
        let col = m.column(j);
        let n = col.len() as f64;
        let mean = col.iter().sum::<f64>() / n;
        let sd = (col.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0)).sqrt();
        let min = col.iter().copied().fold(f64::INFINITY, f64::min);
        let max = col.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        println!("{name:<22} {mean:>10.4} {sd:>10.4} {min:>10.4} {max:>10.4}");
    }
}

pub fn extract(cfg: &RunConfig) -> CliResult {
    let input = required_input(cfg, "extract")?;
    extract_from(cfg, &input)
}

fn extract_from(cfg: &RunConfig, input: &Path) -> CliResult {
    let analyzer = analyzer(cfg)?;
    let corpus = Corpus::load(input).with_context(|| format!("reading {}", input.display()))?;
    if corpus.is_empty() {
        warn!("{} has no reviews; writing a header-only {}", input.display(), art::FEATURES);
    }
    let matrix = FeatureMatrix::from_corpus(&corpus, &analyzer, ExtractOptions::default())?;
    write_with(&path_in(&cfg.outdir, art::FEATURES), |w| matrix.write_csv(w))?;
    print_feature_summary(&matrix);
    Ok(())
}

pub fn stats(cfg: &RunConfig) -> CliResult {
    stats_from(cfg, &features_source(cfg)?)
}

fn stats_from(cfg: &RunConfig, features: &Path) -> CliResult {
    let m = load_features(features)?;
    let ranked = feature_stats_by_ovl(&m)?;
    let n_fake = m.rows.iter().filter(|r| r.label == cuelens::Label::Fake).count();
    let file = StatsFile {
        n_fake,
        n_real: m.n_rows() - n_fake,
        histogram_bins: DEFAULT_BINS,
        features: ranked,
    };
    let out = &cfg.outdir;
    write_json(&path_in(out, art::STATS_JSON), &file)?;
    write_with(&path_in(out, art::STATS_CSV), |w| {
        let mut wtr = csv::Writer::from_writer(w);
        wtr.write_record(["feature", "ovl", "scale", "kw_h", "kw_p"])?;
        for s in &file.features {
            wtr.write_record([
                s.feature.clone(),
                format!("{:.6}", s.ovl),
                s.scale.as_str().to_string(),
                format!("{:.6}", s.kw_h),
                format!("{:.6e}", s.kw_p),
            ])?;
        }
        wtr.flush().map_err(|e| cuelens::Error::Io { path: "stats.csv".into(), source: e })
    })?;

    for (j, name) in m.feature_names.iter().enumerate() {
        let (fake, real) = m.split_by_label(j);
        let bins = class_histogram(&fake, &real, DEFAULT_BINS)?;
        let path = out.join(art::HIST_DIR).join(format!("{name}.csv"));
        write_with(&path, |w| write_histogram_csv(&bins, w))?;
    }

    let rho = spearman_matrix(&m)?;
    write_with(&path_in(out, art::SPEARMAN), |w| {
        let mut wtr = csv::Writer::from_writer(w);
        let mut header = vec!["feature".to_string()];
        header.extend(m.feature_names.iter().cloned());
        wtr.write_record(&header)?;
        for (name, row) in m.feature_names.iter().zip(&rho) {
            let mut rec = vec![name.clone()];
            rec.extend(row.iter().map(|v| format!("{v:.6}")));
            wtr.write_record(&rec)?;
        }
        wtr.flush().map_err(|e| cuelens::Error::Io { path: "spearman_matrix.csv".into(), source: e })
    })?;

    println!("{:<22} {:>8} {:<10} {:>10}", "feature", "OVL", "scale", "KW p");
    for s in &file.features {
        println!("{:<22} {:>8.4} {:<10} {:>10.3e}", s.feature, s.ovl, s.scale.as_str(), s.kw_p);
    }
    Ok(())
}

pub fn select(cfg: &RunConfig) -> CliResult {
    select_from(cfg, &features_source(cfg)?)
}

fn select_from(cfg: &RunConfig, features: &Path) -> CliResult {
    let opts = selection_options(cfg)?;
    let data = Dataset::from_matrix(&load_features(features)?)?;
    info!("ranking {} features on {} reviews", data.n_features(), data.n_samples());
    let rep = build_selection_report(&data, &opts)?;
    let out = &cfg.outdir;
    write_json(&path_in(out, art::SELECTION_JSON), &rep)?;
    write_with(&path_in(out, art::SELECTION_CSV), |w| rep.write_csv(w))?;
    write_json(&path_in(out, art::RFE_TRACE), &rep.rfe)?;

    println!("{:<22} {:>10} {:>6} {:>6} {:<14}", "feature", "RF", "RFE", "hits", "Boruta");
    for r in rep.by_importance() {
        println!(
            "{:<22} {:>10.4} {:>6} {:>6} {:<14}",
            r.feature, r.rf_importance, r.rfe_first_iteration, r.boruta_hits, r.boruta_zone.as_str()
        );
    }
    if let Some(t) = &rep.rho_importance_ovl {
        println!("Spearman rho(importance, OVL) = {:.4}", t.statistic);
    }
    if let Some(t) = &rep.rho_importance_ovl_dense {
        println!("  without {}: {:.4}", rep.excluded_sparse.join(", "), t.statistic);
    }
    Ok(())
}

pub fn evaluate(cfg: &RunConfig) -> CliResult {
    evaluate_from(cfg, &features_source(cfg)?)
}

fn evaluate_from(cfg: &RunConfig, features: &Path) -> CliResult {
    if cfg.kfolds < 2 {
        return Err(CliError::Usage("--kfolds must be at least 2".into()));
    }
    let grids = grids(cfg)?;
    let data = Dataset::from_matrix(&load_features(features)?)?;
    let trace_path = path_in(&cfg.outdir, art::RFE_TRACE);
    let trace: RfeTrace = if trace_path.is_file() {
        let t: RfeTrace = read_json(&trace_path)?;
        let mut a = t.feature_names.clone();
        let mut b = data.feature_names.clone();
        a.sort();
        b.sort();
        if a != b {
            return Err(anyhow!("{} lists different features than the input; rerun select", trace_path.display()).into());
        }
        t
    } else {
        info!("no {}; running RFE", art::RFE_TRACE);
        let t = rfe(&data, 1, &selection_options(cfg)?.rfe_options())?;
        write_json(&trace_path, &t)?;
        t
    };

    let grid = run_experiment(&data, &trace.nested_sets(), &grids, cfg.kfolds, cfg.seed)?;
    let out = &cfg.outdir;
    write_with(&path_in(out, art::EVAL_GRID_CSV), |w| grid.write_grid_csv(w))?;
    write_with(&path_in(out, art::EVAL_MAX_CSV), |w| grid.write_max_csv(w))?;
    write_json(&path_in(out, art::EVAL_GRID_JSON), &grid)?;

    println!("{:<6} {:>10} {:>4} {:>10} {:>4}", "model", "max acc", "#", "max F1", "#");
    for s in &grid.summaries {
        println!(
            "{:<6} {:>10.4} {:>4} {:>10.4} {:>4}",
            s.classifier.display_name(),
            s.max_accuracy,
            s.accuracy_n_features,
            s.max_f1,
            s.f1_n_features
        );
    }
    Ok(())
}

pub fn report(cfg: &RunConfig) -> CliResult {
    let out = &cfg.outdir;
    let stats: StatsFile = read_json(&require_artifact(out, art::STATS_JSON, "stats")?)?;
    let selection = read_json(&require_artifact(out, art::SELECTION_JSON, "select")?)?;
    let grid = read_json(&require_artifact(out, art::EVAL_GRID_JSON, "evaluate")?)?;
    let rep = report::build(&stats, &selection, &grid);
    write_json(&path_in(out, art::REPORT_JSON), &rep)?;
    let md = report::render_markdown(&rep);
    art::write_atomic(&path_in(out, art::REPORT_MD), md.as_bytes())
        .map_err(|e| anyhow!("{}: {e}", art::REPORT_MD))?;
    println!("key features: {}", rep.key_features.intersection.join(", "));
    Ok(())
}

pub fn run_all(cfg: &RunConfig) -> CliResult {
    let input = required_input(cfg, "run-all")?;
    // a trace left over from an earlier run must not leak into this one
    let stale = path_in(&cfg.outdir, art::RFE_TRACE);
    if stale.is_file() {
        std::fs::remove_file(&stale).map_err(|e| anyhow!("{}: {e}", stale.display()))?;
    }
    let features = path_in(&cfg.outdir, art::FEATURES);
    extract_from(cfg, &input)?;
    stats_from(cfg, &features)?;
    select_from(cfg, &features)?;
    evaluate_from(cfg, &features)?;
    report(cfg)
}

pub fn import(cfg: &RunConfig, args: &ImportArgs) -> CliResult {
    let input = required_input(cfg, "import")?;
    if !args.delimiter.is_ascii() {
        return Err(CliError::Usage("--delimiter must be a single ASCII character".into()));
    }
    let opts = ImportOptions {
        delimiter: args.delimiter as u8,
        id_column: args.id_column.clone(),
        text_column: args.text_column.clone(),
        label_column: args.label_column.clone(),
        sentiment_column: args.sentiment_column.clone(),
        source_column: args.source_column.clone(),
        fake_values: args.fake_values.iter().map(|s| s.to_lowercase()).collect(),
        real_values: args.real_values.iter().map(|s| s.to_lowercase()).collect(),
    };
    let file = std::fs::File::open(&input).map_err(|e| anyhow!("{}: {e}", input.display()))?;
    let corpus = import_delimited(file, &opts)?;
    let output = args.output.clone().unwrap_or_else(|| path_in(&cfg.outdir, art::CORPUS));
    write_with(&output, |w| corpus.write_csv(w))?;
    let balance = corpus.class_balance();
    println!(
        "{} reviews ({} fake, {} real) -> {}",
        corpus.len(),
        balance[&cuelens::Label::Fake],
        balance[&cuelens::Label::Real],
        output.display()
    );
    Ok(())
}
