//! The `patchguard` command line.
//!
//! `--corpus` accepts either a corpus directory (one subdirectory per patch
//! with a `metadata.json`) or a matrix file written by `extract`.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use thiserror::Error;

use crate::corpus::{
    build_dataset, deduplicate, ingest_with_skips, prune_outliers, smote_minority, CorpusError, Dataset, SMOTE_K,
};
use crate::eval::{
    fisher_ranking, group_plan, kfold_plan, run_plan, top_k_features, write_outcomes, write_report_matrix,
    write_report_text, EvalConfig, EvalError, GroupKey,
};
use crate::features::matrix::Label;
use crate::features::{FeatureSchema, SCHEMA_VERSION};
use crate::learner::{feature_importance, label_for, predict_proba, train, Hyperparams, LearnerError, Model};

pub const DEFAULT_FOLDS: usize = 10;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Learner(#[from] LearnerError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("unknown schema version {0}")]
    UnknownSchema(String),
    #[error("schema mismatch: {0}")]
    SchemaMismatch(String),
    #[error("no patch could be extracted; {0} skipped")]
    NothingExtracted(usize),
    #[error("{0}")]
    Output(String),
}

impl CliError {
    /// The reader of our output went away, as in `patchguard catalog | head`.
    pub fn is_broken_pipe(&self) -> bool {
        matches!(self, CliError::Io { source, .. } if source.kind() == io::ErrorKind::BrokenPipe)
    }
}

#[derive(Debug, Parser)]
#[command(name = "patchguard", version, about = "Classify program-repair patches as overfitting or correct")]
pub struct Cli {
    /// More log output; repeat for debug messages.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Extract a feature matrix from a patch corpus.
    Extract {
        #[command(flatten)]
        input: InputArgs,
        /// Matrix CSV; a provenance sidecar is written next to it.
        #[arg(long)]
        out: PathBuf,
    },
    /// Prune, resample and train a model.
    Train {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        learn: LearnArgs,
        /// Model file (JSON).
        #[arg(long)]
        out: PathBuf,
    },
    /// Score patches with a trained model.
    Predict {
        #[command(flatten)]
        input: InputArgs,
        /// Model file written by `train`.
        #[arg(long)]
        model: PathBuf,
        /// Probability at or above which a patch is labelled overfitting.
        #[arg(long, default_value_t = EvalConfig::default().threshold)]
        threshold: f64,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run k-fold or leave-one-group-out evaluation.
    Evaluate {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        learn: LearnArgs,
        /// Probability at or above which a patch is labelled overfitting.
        #[arg(long, default_value_t = EvalConfig::default().threshold)]
        threshold: f64,
        #[arg(long, value_enum, default_value_t = Protocol::Kfold)]
        protocol: Protocol,
        /// Grouping for `--protocol group`.
        #[arg(long, value_enum, default_value_t = KeyArg::Project)]
        key: KeyArg,
        /// Number of folds.
        #[arg(long, default_value_t = DEFAULT_FOLDS)]
        k: usize,
        /// Directory for report.tsv, report.csv and outcomes.csv.
        #[arg(long)]
        out: PathBuf,
    },
    /// Rank features by split count in a model and by Fisher score on a corpus.
    Importance {
        #[command(flatten)]
        input: InputArgs,
        /// Model file written by `train`.
        #[arg(long)]
        model: PathBuf,
        /// Entries per ranking; all columns when absent.
        #[arg(long)]
        k: Option<usize>,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the features of a schema with their definitions.
    Catalog {
        /// Feature schema version.
        #[arg(long, default_value = SCHEMA_VERSION)]
        schema: String,
        /// Output file; standard output when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Corpus directory or extracted matrix file.
    #[arg(long)]
    pub corpus: PathBuf,
    /// Feature schema version.
    #[arg(long, default_value = SCHEMA_VERSION)]
    pub schema: String,
}

#[derive(Debug, Clone, Args)]
pub struct LearnArgs {
    #[arg(long, default_value_t = Hyperparams::default().seed)]
    pub seed: u64,
    #[arg(long, default_value_t = Hyperparams::default().rounds)]
    pub rounds: usize,
    #[arg(long, default_value_t = Hyperparams::default().learning_rate)]
    pub learning_rate: f64,
    #[arg(long, default_value_t = Hyperparams::default().max_depth)]
    pub max_depth: usize,
    /// Minimum split gain.
    #[arg(long, default_value_t = Hyperparams::default().min_split_gain)]
    pub gamma: f64,
    /// Rows outlied in at least this many columns are pruned; 0 disables.
    #[arg(long, default_value_t = EvalConfig::default().min_outlied)]
    pub min_outlied: usize,
    /// Keep only the best N columns by Fisher score.
    #[arg(long)]
    pub top_features: Option<usize>,
}

impl LearnArgs {
    pub fn hyperparams(&self) -> Hyperparams {
        Hyperparams {
            learning_rate: self.learning_rate,
            max_depth: self.max_depth,
            min_split_gain: self.gamma,
            rounds: self.rounds,
            seed: self.seed,
        }
    }

    pub fn eval_config(&self, threshold: f64) -> EvalConfig {
        EvalConfig {
            hp: self.hyperparams(),
            threshold,
            min_outlied: self.min_outlied,
            smote_k: SMOTE_K,
            top_k: self.top_features,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Protocol {
    Kfold,
    Group,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KeyArg {
    Tool,
    Project,
}

impl From<KeyArg> for GroupKey {
    fn from(k: KeyArg) -> GroupKey {
        match k {
            KeyArg::Tool => GroupKey::Tool,
            KeyArg::Project => GroupKey::Project,
        }
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Extract { input, out } => cmd_extract(&input, &out),
        Command::Train { input, learn, out } => cmd_train(&input, &learn, &out),
        Command::Predict { input, model, threshold, out } => cmd_predict(&input, &model, threshold, out.as_deref()),
        Command::Evaluate { input, learn, threshold, protocol, key, k, out } => {
            cmd_evaluate(&input, &learn.eval_config(threshold), protocol, key.into(), k, &out)
        }
        Command::Importance { input, model, k, out } => cmd_importance(&input, &model, k, out.as_deref()),
        Command::Catalog { schema, out } => cmd_catalog(&schema, out.as_deref()),
    }
}

fn schema(version: &str) -> Result<FeatureSchema, CliError> {
    FeatureSchema::for_version(version).ok_or_else(|| CliError::UnknownSchema(version.to_string()))
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path).map(BufWriter::new).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

/// A file, or standard output when no path is given.
fn output(path: Option<&Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match path {
        Some(p) => Box::new(create(p)?),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn finish(mut w: impl Write, path: Option<&Path>) -> Result<(), CliError> {
    w.flush().map_err(|source| CliError::Io { path: path.map_or_else(|| "<stdout>".into(), Path::to_path_buf), source })
}

/// Dedup, extract and encode a corpus directory. Patches that fail are
/// reported and left out.
pub fn extract_corpus(root: &Path, schema: &FeatureSchema) -> Result<(Dataset, usize), CliError> {
    let ingested = ingest_with_skips(root)?;
    let records = deduplicate(ingested.records);
    let (mut ds, skipped) = build_dataset(&records, schema);
    ds.provenance.deduplicated = true;
    let skipped = ingested.skipped.len() + skipped.len();
    if ds.is_empty() && skipped > 0 {
        return Err(CliError::NothingExtracted(skipped));
    }
    Ok((ds, skipped))
}

/// A matrix file or a corpus directory, checked against `--schema`.
pub fn load_input(input: &InputArgs) -> Result<Dataset, CliError> {
    let schema = schema(&input.schema)?;
    if input.corpus.is_dir() {
        let (ds, skipped) = extract_corpus(&input.corpus, &schema)?;
        if skipped > 0 {
            log::warn!("{skipped} patches skipped");
        }
        return Ok(ds);
    }
    if !input.corpus.exists() {
        return Err(CorpusError::CorpusNotFound(input.corpus.clone()).into());
    }
    let ds = Dataset::load(&input.corpus)?;
    if ds.schema_version != schema.version {
        return Err(CliError::SchemaMismatch(format!(
            "{} was extracted with schema {}, not {}",
            input.corpus.display(),
            ds.schema_version,
            schema.version
        )));
    }
    Ok(ds)
}

pub fn cmd_extract(input: &InputArgs, out: &Path) -> Result<(), CliError> {
    let schema = schema(&input.schema)?;
    let (ds, skipped) = extract_corpus(&input.corpus, &schema)?;
    ds.save(out)?;
    if skipped > 0 {
        log::warn!("extracted {} patches; {skipped} skipped", ds.len());
    } else {
        log::info!("extracted {} patches", ds.len());
    }
    Ok(())
}

/// Resamples unless the data cannot be resampled, which only warrants a
/// warning.
fn resample(ds: Dataset, seed: u64) -> Result<Dataset, CliError> {
    match smote_minority(&ds, SMOTE_K, seed) {
        Ok(r) => Ok(r),
        Err(e @ (CorpusError::SingleClass | CorpusError::TooFewMinority(_))) => {
            log::warn!("training without resampling: {e}");
            Ok(ds)
        }
        Err(e) => Err(e.into()),
    }
}

pub fn cmd_train(input: &InputArgs, learn: &LearnArgs, out: &Path) -> Result<(), CliError> {
    let mut ds = load_input(input)?;
    if learn.min_outlied > 0 {
        ds = prune_outliers(&ds, learn.min_outlied)?;
    }
    if let Some(k) = learn.top_features {
        ds = top_k_features(&ds, k)?.apply(&ds);
    }
    let originals = ds.clone();
    let hp = learn.hyperparams();
    let model = train(&resample(ds, hp.seed)?, &hp)?;
    model.save(out)?;
    let labels = originals.labels()?;
    let mut hits = 0;
    for (row, truth) in originals.rows.iter().zip(&labels) {
        hits += usize::from(label_for(predict_proba(&model, &row.values)?, 0.5) == *truth);
    }
    log::info!(
        "trained {} trees on {} rows; training accuracy {:.2}%",
        model.trees.len(),
        originals.len(),
        100.0 * hits as f64 / originals.len() as f64
    );
    Ok(())
}

/// Positions of the model's columns in the dataset.
fn column_map(model: &Model, ds: &Dataset) -> Result<Vec<usize>, CliError> {
    if model.schema_version != ds.schema_version {
        return Err(CliError::SchemaMismatch(format!(
            "model uses schema {}, data uses {}",
            model.schema_version, ds.schema_version
        )));
    }
    model
        .columns
        .iter()
        .map(|name| {
            ds.columns
                .iter()
                .position(|c| c == name)
                .ok_or_else(|| CliError::SchemaMismatch(format!("data has no column {name}")))
        })
        .collect()
}

#[derive(Serialize)]
struct Prediction<'a> {
    patch_id: &'a str,
    proba: f64,
    label: Label,
}

pub fn cmd_predict(input: &InputArgs, model: &Path, threshold: f64, out: Option<&Path>) -> Result<(), CliError> {
    let model = Model::load(model)?;
    let ds = load_input(input)?;
    let columns = column_map(&model, &ds)?;
    let csv_err = |e: csv::Error| match e.into_kind() {
        csv::ErrorKind::Io(source) => CliError::Io { path: out.map_or_else(|| "<stdout>".into(), Path::to_path_buf), source },
        other => CliError::Output(format!("{other:?}")),
    };
    let mut w = csv::Writer::from_writer(output(out)?);
    for row in &ds.rows {
        let x: Vec<f64> = columns.iter().map(|&c| row.values[c]).collect();
        let proba = predict_proba(&model, &x)?;
        let p = Prediction { patch_id: &row.patch_id, proba, label: label_for(proba, threshold) };
        w.serialize(p).map_err(csv_err)?;
    }
    w.flush().map_err(|e| csv_err(e.into()))
}

pub fn cmd_evaluate(
    input: &InputArgs,
    cfg: &EvalConfig,
    protocol: Protocol,
    key: GroupKey,
    k: usize,
    out: &Path,
) -> Result<(), CliError> {
    let ds = load_input(input)?;
    let (plan, key) = match protocol {
        Protocol::Kfold => (kfold_plan(&ds, k, cfg.hp.seed)?, GroupKey::Fold),
        Protocol::Group => (group_plan(&ds, key)?, key),
    };
    let report = run_plan(&ds, &plan, key, cfg)?;
    std::fs::create_dir_all(out).map_err(|source| CliError::Io { path: out.to_path_buf(), source })?;
    let text_path = out.join("report.tsv");
    let mut text = Vec::new();
    write_report_text(&mut text, &report)?;
    let mut w = create(&text_path)?;
    w.write_all(&text).map_err(|source| CliError::Io { path: text_path.clone(), source })?;
    finish(w, Some(&text_path))?;
    let matrix_path = out.join("report.csv");
    let mut w = create(&matrix_path)?;
    write_report_matrix(&mut w, &report)?;
    finish(w, Some(&matrix_path))?;
    let log_path = out.join("outcomes.csv");
    let mut w = create(&log_path)?;
    write_outcomes(&mut w, report.outcomes())?;
    finish(w, Some(&log_path))?;
    let mut stdout = io::stdout().lock();
    stdout.write_all(&text).map_err(|source| CliError::Io { path: "<stdout>".into(), source })
}

pub fn cmd_importance(input: &InputArgs, model: &Path, k: Option<usize>, out: Option<&Path>) -> Result<(), CliError> {
    let model = Model::load(model)?;
    let ds = load_input(input)?;
    let columns = column_map(&model, &ds)?;
    let ds = ds.select_columns(&columns);
    let limit = k.unwrap_or(model.columns.len());

    let mut counts = feature_importance(&model);
    // stable: equal counts keep column order
    counts.sort_by_key(|c| std::cmp::Reverse(c.1));
    let fisher = fisher_ranking(&ds)?;

    let mut w = output(out)?;
    let io_err = |source| CliError::Io { path: out.map_or_else(|| "<stdout>".into(), Path::to_path_buf), source };
    writeln!(w, "statistic\trank\tfeature\tvalue").map_err(io_err)?;
    for (rank, (name, count)) in counts.iter().take(limit).enumerate() {
        writeln!(w, "split_count\t{}\t{name}\t{count}", rank + 1).map_err(io_err)?;
    }
    for (rank, (c, score)) in fisher.iter().take(limit).enumerate() {
        writeln!(w, "fisher_score\t{}\t{}\t{score}", rank + 1, ds.columns[*c]).map_err(io_err)?;
    }
    finish(w, out)
}

pub fn cmd_catalog(version: &str, out: Option<&Path>) -> Result<(), CliError> {
    let schema = schema(version)?;
    let mut w = output(out)?;
    let io_err = |source| CliError::Io { path: out.map_or_else(|| "<stdout>".into(), Path::to_path_buf), source };
    writeln!(w, "name\tkind\tgroup\tvalues\tdefinition").map_err(io_err)?;
    for e in schema.catalog() {
        let kind = serde_json::to_value(e.kind).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default();
        let group = serde_json::to_value(e.group).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default();
        writeln!(w, "{}\t{kind}\t{group}\t{}\t{}", e.name, e.vocab.join(","), e.definition).map_err(io_err)?;
    }
    finish(w, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let cli = Cli::parse_from(["patchguard", "evaluate", "--corpus", "c", "--out", "o"]);
        let Command::Evaluate { input, learn, threshold, protocol, key, k, .. } = cli.command else {
            panic!("parsed the wrong command");
        };
        assert_eq!(input.schema, "1.0.0");
        let hp = learn.hyperparams();
        assert_eq!((hp.seed, hp.learning_rate, hp.max_depth, hp.min_split_gain), (42, 0.3, 6, 0.5));
        assert_eq!((threshold, k, learn.min_outlied), (0.5, 10, 15));
        assert_eq!((protocol, key), (Protocol::Kfold, KeyArg::Project));
    }

    #[test]
    fn rejects_unknown_key() {
        let parsed =
            Cli::try_parse_from(["patchguard", "evaluate", "--corpus", "c", "--out", "o", "--protocol", "group", "--key", "fold"]);
        assert!(parsed.is_err());
    }
}
