mod artifacts;
mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cuelens::evaluation::Classifier;

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Parser)]
#[command(name = "cuelens", version, about = "Linguistic deception cues for fake review detection")]
struct Cli {
    #[command(flatten)]
    config: RunConfig,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Corpus CSV for extract, import and run-all; an optional features CSV
    /// overriding <outdir>/features.csv for stats, select and evaluate.
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,

    /// Artifact directory, created if absent.
    #[arg(long, global = true, default_value = "artifacts")]
    pub outdir: PathBuf,

    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    /// Word list replacing the built-in spelling dictionary.
    #[arg(long, global = true)]
    pub dictionary: Option<PathBuf>,

    /// Words (one per line) never counted as typos.
    #[arg(long, global = true)]
    pub allowlist: Option<PathBuf>,

    /// JSON map from classifier key to a list of hyperparameter settings.
    #[arg(long, global = true)]
    pub grid_config: Option<PathBuf>,

    #[arg(long, global = true, default_value_t = 100)]
    pub boruta_iterations: usize,

    /// Comma-separated subset of dt,rf,lr,nb,mlp.
    #[arg(long, global = true, value_delimiter = ',', value_parser = parse_classifier)]
    pub classifiers: Option<Vec<Classifier>>,

    #[arg(long, global = true, default_value_t = 10)]
    pub kfolds: usize,
}

fn parse_classifier(s: &str) -> Result<Classifier, String> {
    s.parse().map_err(|e: cuelens::Error| e.to_string())
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Analyze every review and write features.csv.
    Extract,
    /// OVL and Kruskal-Wallis per feature, histograms and the Spearman matrix.
    Stats,
    /// Random-forest ranking, RFE, Boruta and the importance/OVL correlation.
    Select,
    /// Grid-searched cross-validation of each classifier on every RFE subset.
    Evaluate,
    /// Join earlier artifacts into report.md and report.json.
    Report,
    /// extract, stats, select, evaluate and report in sequence.
    RunAll,
    /// Convert a delimited file with arbitrary columns into a canonical corpus.
    Import(ImportArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ImportArgs {
    /// Destination; defaults to <outdir>/corpus.csv.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long, default_value = ",")]
    pub delimiter: char,
    #[arg(long)]
    pub id_column: Option<String>,
    #[arg(long)]
    pub text_column: Option<String>,
    #[arg(long)]
    pub label_column: Option<String>,
    #[arg(long)]
    pub sentiment_column: Option<String>,
    #[arg(long)]
    pub source_column: Option<String>,
    /// Extra label values meaning fake.
    #[arg(long, value_delimiter = ',')]
    pub fake_values: Vec<String>,
    /// Extra label values meaning real.
    #[arg(long, value_delimiter = ',')]
    pub real_values: Vec<String>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let cfg = &cli.config;
    let result = match &cli.command {
        Command::Extract => commands::extract(cfg),
        Command::Stats => commands::stats(cfg),
        Command::Select => commands::select(cfg),
        Command::Evaluate => commands::evaluate(cfg),
        Command::Report => commands::report(cfg),
        Command::RunAll => commands::run_all(cfg),
        Command::Import(args) => commands::import(cfg, args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn defaults() {
        let cli = Cli::try_parse_from(["cuelens", "select"]).unwrap();
        assert_eq!(cli.config.seed, DEFAULT_SEED);
        assert_eq!(cli.config.kfolds, 10);
        assert_eq!(cli.config.boruta_iterations, 100);
        assert!(cli.config.classifiers.is_none());
    }

    #[test]
    fn classifier_list() {
        let cli = Cli::try_parse_from(["cuelens", "evaluate", "--classifiers", "dt,NB"]).unwrap();
        assert_eq!(cli.config.classifiers, Some(vec![Classifier::Dt, Classifier::Nb]));
        assert!(Cli::try_parse_from(["cuelens", "evaluate", "--classifiers", "svm"]).is_err());
    }
}
