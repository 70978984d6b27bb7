mod common;

use std::fs;
use std::path::Path;

use common::{cuelens, s, stderr, write_corpus};
use cuelens::FeatureMatrix;

fn extract(dir: &Path, n: usize) {
    let corpus = write_corpus(dir, n);
    let out = dir.join("out");
    let o = cuelens(&["extract", "--input", s(&corpus), "--outdir", s(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
}

fn fast<'a>(cmd: &'a str, out: &'a str) -> Vec<&'a str> {
    vec![cmd, "--outdir", out, "--boruta-iterations", "10", "--kfolds", "3", "--classifiers", "dt,nb"]
}

#[test]
fn extract_writes_one_row_per_review_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    extract(dir.path(), 12);
    let path = dir.path().join("out/features.csv");
    let m = FeatureMatrix::load(&path).unwrap();
    assert_eq!(m.n_rows(), 24);
    assert_eq!(m.n_features(), 15);
    let mut again = Vec::new();
    m.write_csv(&mut again).unwrap();
    assert_eq!(again, fs::read(&path).unwrap());
}

#[test]
fn empty_corpus_gives_header_only_file() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("empty.csv");
    fs::write(&corpus, "id,text,label,sentiment,source\n").unwrap();
    let out = dir.path().join("out");
    let o = cuelens(&["extract", "--input", s(&corpus), "--outdir", s(&out)]);
    assert!(o.status.success());
    assert!(stderr(&o).contains("no reviews"));
    let text = fs::read_to_string(out.join("features.csv")).unwrap();
    assert_eq!(text.lines().count(), 1);
    assert!(text.starts_with("id,label,n_words"));
}

#[test]
fn bad_invocations_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = write_corpus(dir.path(), 3);
    let out = dir.path().join("out");
    let o = cuelens(&["extract", "--input", s(&corpus), "--outdir", s(&out), "--dictionary", "/no/such/words.txt"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--dictionary"));

    let o = cuelens(&["extract", "--outdir", s(&out)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--input"));

    let o = cuelens(&["evaluate", "--classifiers", "svm"]);
    assert_eq!(o.status.code(), Some(2));

    let o = cuelens(&["extract", "--input", s(&corpus), "--outdir", s(&out), "--allowlist", "/no/such/list"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--allowlist"));
}

#[test]
fn malformed_corpus_is_an_internal_error() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("bad.csv");
    fs::write(&corpus, "id,text,label,sentiment,source\nx,hello,maybe,,\n").unwrap();
    let o = cuelens(&["extract", "--input", s(&corpus), "--outdir", s(&dir.path().join("o"))]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn allowlist_removes_typos() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("c.csv");
    fs::write(&corpus, "id,text,label,sentiment,source\na,We loved Zorblatt.,fake,,\nb,Zorblatt was ok.,real,,\n").unwrap();
    let allow = dir.path().join("allow.txt");
    fs::write(&allow, "# proper nouns\nzorblatt\n").unwrap();
    let typos = |extra: &[&str]| {
        let out = dir.path().join("o");
        let mut args = vec!["extract", "--input", s(&corpus), "--outdir", s(&out)];
        args.extend_from_slice(extra);
        assert!(cuelens(&args).status.success());
        let m = FeatureMatrix::load(out.join("features.csv")).unwrap();
        m.column_by_name("n_typos").unwrap().iter().sum::<f64>()
    };
    assert_eq!(typos(&[]), 2.0);
    assert_eq!(typos(&["--allowlist", s(&allow)]), 0.0);
}

#[test]
fn stats_needs_features_then_reports_sorted_ovl_and_normalized_histograms() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = cuelens(&["stats", "--outdir", s(&out)]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("features.csv"));

    extract(dir.path(), 15);
    let o = cuelens(&["stats", "--outdir", s(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));

    let v: serde_json::Value = serde_json::from_slice(&fs::read(out.join("stats.json")).unwrap()).unwrap();
    let ovl: Vec<f64> = v["features"].as_array().unwrap().iter().map(|f| f["ovl"].as_f64().unwrap()).collect();
    assert_eq!(ovl.len(), 15);
    assert!(ovl.windows(2).all(|w| w[0] <= w[1]));

    let hist = fs::read_dir(out.join("hist")).unwrap().count();
    assert_eq!(hist, 15);
    for name in ["n_words", "redundancy", "n_typos"] {
        let mut rdr = csv::Reader::from_path(out.join("hist").join(format!("{name}.csv"))).unwrap();
        let h = rdr.headers().unwrap().clone();
        let col = |n: &str| h.iter().position(|x| x == n).unwrap();
        let (l, r, f, re) = (col("bin_left"), col("bin_right"), col("density_fake"), col("density_real"));
        let (mut sf, mut sr, mut rows) = (0.0, 0.0, 0);
        for rec in rdr.records() {
            let rec = rec.unwrap();
            let w: f64 = rec[r].parse::<f64>().unwrap() - rec[l].parse::<f64>().unwrap();
            sf += w * rec[f].parse::<f64>().unwrap();
            sr += w * rec[re].parse::<f64>().unwrap();
            rows += 1;
        }
        assert_eq!(rows, 20);
        assert!((sf - 1.0).abs() < 1e-6 && (sr - 1.0).abs() < 1e-6, "{name}: {sf} {sr}");
    }
    let rho = fs::read_to_string(out.join("spearman_matrix.csv")).unwrap();
    assert_eq!(rho.lines().count(), 16);
}

#[test]
fn duplicated_feature_gets_identical_ovl() {
    let dir = tempfile::tempdir().unwrap();
    extract(dir.path(), 10);
    let mut m = FeatureMatrix::load(dir.path().join("out/features.csv")).unwrap();
    m.feature_names.push("n_words_copy".into());
    for r in &mut m.rows {
        r.values.push(r.values[0]);
    }
    let dup = dir.path().join("dup.csv");
    let mut buf = Vec::new();
    m.write_csv(&mut buf).unwrap();
    fs::write(&dup, buf).unwrap();
    let out = dir.path().join("dup_out");
    assert!(cuelens(&["stats", "--input", s(&dup), "--outdir", s(&out)]).status.success());
    let v: serde_json::Value = serde_json::from_slice(&fs::read(out.join("stats.json")).unwrap()).unwrap();
    let find = |n: &str| v["features"].as_array().unwrap().iter().find(|f| f["feature"] == n).unwrap()["ovl"].as_f64().unwrap();
    assert_eq!(find("n_words"), find("n_words_copy"));
}

#[test]
fn select_report_shape_and_byte_identical_rerun() {
    let dir = tempfile::tempdir().unwrap();
    extract(dir.path(), 15);
    let out = dir.path().join("out");
    let o = cuelens(&["select", "--outdir", s(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let first = fs::read(out.join("selection_report.json")).unwrap();
    let v: serde_json::Value = serde_json::from_slice(&first).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 15);
    assert_eq!(v["boruta_iterations"], 100);
    assert!(v.get("rho_importance_ovl").is_some());
    assert!(v.get("rho_importance_ovl_dense").is_some());
    assert!(out.join("rfe_trace.json").is_file());
    assert_eq!(fs::read_to_string(out.join("selection_report.csv")).unwrap().lines().count(), 16);

    assert!(cuelens(&["select", "--outdir", s(&out)]).status.success());
    assert_eq!(fs::read(out.join("selection_report.json")).unwrap(), first);

    assert!(cuelens(&["select", "--outdir", s(&out), "--boruta-iterations", "20"]).status.success());
    let v: serde_json::Value = serde_json::from_slice(&fs::read(out.join("selection_report.json")).unwrap()).unwrap();
    assert_eq!(v["boruta_iterations"], 20);
}

#[test]
fn evaluate_restricts_classifiers_and_keeps_schema_across_seeds() {
    let dir = tempfile::tempdir().unwrap();
    extract(dir.path(), 12);
    let out = dir.path().join("out");
    let run = |seed: &str| {
        let mut args = fast("evaluate", s(&out));
        args.extend(["--seed", seed]);
        let o = cuelens(&args);
        assert!(o.status.success(), "{}", stderr(&o));
        let grid = fs::read_to_string(out.join("eval_grid.csv")).unwrap();
        let json: serde_json::Value = serde_json::from_slice(&fs::read(out.join("eval_grid.json")).unwrap()).unwrap();
        (grid, json)
    };
    let (grid, json) = run("1");
    // no trace existed, so evaluate computed one
    assert!(out.join("rfe_trace.json").is_file());
    let header = grid.lines().next().unwrap();
    assert_eq!(header, "n_features,DT_accuracy,DT_f1,NB_accuracy,NB_f1");
    assert_eq!(grid.lines().count(), 17);
    let max = fs::read_to_string(out.join("eval_max.csv")).unwrap();
    assert_eq!(max.lines().count(), 3);
    assert!(max.starts_with("classifier,max_accuracy,accuracy_n_features,max_f1,f1_n_features"));

    let (grid2, json2) = run("2");
    assert_eq!(grid2.lines().next().unwrap(), header);
    assert_ne!(json["folds"], json2["folds"]);
}

#[test]
fn grid_config_overrides_and_validation() {
    let dir = tempfile::tempdir().unwrap();
    extract(dir.path(), 10);
    let out = dir.path().join("out");
    let cfg = dir.path().join("grid.json");
    fs::write(&cfg, r#"{"dt": [{"kind": "decision_tree", "max_depth": 1}]}"#).unwrap();
    let mut args = fast("evaluate", s(&out));
    args.extend(["--grid-config", s(&cfg)]);
    let o = cuelens(&args);
    assert!(o.status.success(), "{}", stderr(&o));
    let json: serde_json::Value = serde_json::from_slice(&fs::read(out.join("eval_grid.json")).unwrap()).unwrap();
    let dt = json["cells"].as_array().unwrap().iter().find(|c| c["classifier"] == "dt").unwrap();
    assert_eq!(dt["search"].as_array().unwrap().len(), 1);

    let mut args = fast("evaluate", s(&out));
    args.extend(["--grid-config", "/no/such/grid.json"]);
    let o = cuelens(&args);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--grid-config"));

    fs::write(&cfg, r#"{"dt": []}"#).unwrap();
    let mut args = fast("evaluate", s(&out));
    args.extend(["--grid-config", s(&cfg)]);
    assert_eq!(cuelens(&args).status.code(), Some(2));
}

#[test]
fn report_requires_artifacts_and_is_idempotent() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    fs::create_dir_all(&out).unwrap();
    let o = cuelens(&["report", "--outdir", s(&out)]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("stats.json"));

    extract(dir.path(), 12);
    for cmd in ["stats", "select", "evaluate"] {
        let o = cuelens(&fast(cmd, s(&out)));
        assert!(o.status.success(), "{cmd}: {}", stderr(&o));
    }
    fs::remove_file(out.join("eval_grid.json")).unwrap();
    let o = cuelens(&["report", "--outdir", s(&out)]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("eval_grid.json"));

    assert!(cuelens(&fast("evaluate", s(&out))).status.success());
    assert!(cuelens(&["report", "--outdir", s(&out)]).status.success());
    let md = fs::read(out.join("report.md")).unwrap();
    let json = fs::read(out.join("report.json")).unwrap();
    assert!(cuelens(&["report", "--outdir", s(&out)]).status.success());
    assert_eq!(fs::read(out.join("report.md")).unwrap(), md);
    assert_eq!(fs::read(out.join("report.json")).unwrap(), json);

    let v: serde_json::Value = serde_json::from_slice(&json).unwrap();
    let k = &v["key_features"];
    let names = |key: &str| -> Vec<String> {
        k[key].as_array().unwrap().iter().map(|x| x.as_str().unwrap().to_string()).collect()
    };
    let expected: Vec<String> = names("rf_top3")
        .into_iter()
        .filter(|f| names("rfe_f3").contains(f) && names("kw_significant").contains(f))
        .collect();
    assert_eq!(names("intersection"), expected);
    let text = String::from_utf8(md).unwrap();
    assert!(text.contains("In all three"));
}

#[test]
fn import_maps_foreign_columns() {
    let dir = tempfile::tempdir().unwrap();
    let raw = dir.path().join("raw.tsv");
    fs::write(&raw, "Review\tClass\nGreat food!\tDeceptive\nWe had tacos.\tTruthful\n").unwrap();
    let out = dir.path().join("out");
    let o = cuelens(&["import", "--input", s(&raw), "--outdir", s(&out), "--delimiter", "\t"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let corpus = cuelens::Corpus::load(out.join("corpus.csv")).unwrap();
    assert_eq!(corpus.len(), 2);
    assert_eq!(corpus.reviews()[0].label, cuelens::Label::Fake);
}
