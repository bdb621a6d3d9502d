//! Command-line front end: feature caching, tagger training, CNN training
//! and evaluation, and method comparison.
//!
//! Exit codes: 0 success, 2 configuration or usage error, 3 I/O, parse or
//! data error, 4 numerical failure during training.

use std::fs;
use std::io::BufWriter;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use log::info;

use iwv_core::harness::{compare_methods, run_comparison, ExperimentConfig};
use iwv_core::iwv::{load_feature_cache, make_batch, save_feature_cache, FeatureConfig, FeatureExtractor};
use iwv_core::nn::{accuracy, load_checkpoint, save_checkpoint, train, CnnModel};
use iwv_core::pos::{load_tagged_corpus, train_tagger, write_codebook, TagSet, TrainOptions};
use iwv_core::{Error, Result};

#[derive(Parser)]
#[command(name = "iwv", version, about = "Improved word vectors for sentiment classification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Split {
    All,
    Train,
    Test,
}

#[derive(Subcommand)]
enum Command {
    /// Featurize the configured dataset and write a feature cache.
    BuildVectors {
        #[arg(long)]
        config: PathBuf,
        /// `word2vec`, `glove` or `iwv`.
        #[arg(long, default_value = "iwv")]
        method: String,
        /// Portion of a dataset with a predefined split.
        #[arg(long, value_enum, default_value_t = Split::All)]
        split: Split,
        /// Padded sentence length; defaults to the longest sentence.
        #[arg(long)]
        max_len: Option<usize>,
        #[arg(long)]
        out: PathBuf,
        /// Also write the POS codebook as `tag<TAB>values` lines.
        #[arg(long)]
        codebook: Option<PathBuf>,
    },
    /// Train the POS tagger on a `token<TAB>tag` treebank.
    TagTrain {
        #[arg(long)]
        treebank: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 5)]
        epochs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated tag set; defaults to the Penn Treebank tags.
        #[arg(long)]
        tags: Option<String>,
    },
    /// Train the CNN on a feature cache.
    Train {
        /// Experiment config supplying the hyperparameters.
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        features: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Accuracy of a checkpoint on a feature cache.
    Evaluate {
        #[arg(long)]
        checkpoint: PathBuf,
        #[arg(long)]
        features: PathBuf,
    },
    /// Cross-validated comparison of the configured methods.
    Compare {
        #[arg(long)]
        config: PathBuf,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn create(path: &PathBuf) -> Result<BufWriter<fs::File>> {
    fs::File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::from(e).context(path.display()))
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::BuildVectors {
            config,
            method,
            split,
            max_len,
            out,
            codebook,
        } => {
            let cfg = ExperimentConfig::load(&config)?;
            let stores = cfg.load_stores()?;
            let corpus = cfg.load_corpus()?;
            if let Some(path) = codebook {
                write_codebook(&stores.codebook, create(&path)?)?;
            }
            let ids: Vec<usize> = match (split, &corpus.predefined_split) {
                (Split::All, _) => (0..corpus.len()).collect(),
                (Split::Train, Some((train, _))) => train.clone(),
                (Split::Test, Some((_, test))) => test.clone(),
                (_, None) => {
                    return Err(Error::config(format!(
                        "{} has no predefined train/test split",
                        corpus.name
                    )))
                }
            };
            let extractor = FeatureExtractor::new(&stores, FeatureConfig::by_name(&method)?)?;
            let matrices = ids
                .iter()
                .map(|&i| {
                    extractor
                        .build(&corpus.sentences[i])
                        .map_err(|e| e.context(format!("sentence {i}")))
                })
                .collect::<Result<Vec<_>>>()?;
            let longest = matrices.iter().map(|m| m.rows()).max().unwrap_or(0);
            let max_len = max_len.unwrap_or(longest.max(cfg.cnn.max_width()));
            let batch = make_batch(&matrices, max_len)?;
            save_feature_cache(&batch, &out)?;
            info!(
                "{} sentences of width {} -> {}",
                batch.len(),
                batch.dim(),
                out.display()
            );
        }
        Command::TagTrain {
            treebank,
            out,
            epochs,
            seed,
            tags,
        } => {
            let corpus = load_tagged_corpus(&treebank)?;
            let tagset = match tags {
                Some(list) => TagSet::new(list.split(',').map(str::trim).filter(|t| !t.is_empty()))?,
                None => TagSet::penn_treebank(),
            };
            let model = train_tagger(&corpus, &tagset, TrainOptions { epochs, seed })?;
            model.save(create(&out)?)?;
            info!("tagger trained on {} sentences -> {}", corpus.len(), out.display());
        }
        Command::Train { config, features, out } => {
            let cfg = ExperimentConfig::load(&config)?;
            let batch = load_feature_cache(&features)?;
            let mut cnn = cfg.cnn.clone();
            cnn.input_dim = batch.dim();
            let (model, history) = train(CnnModel::init(cnn)?, &batch)?;
            save_checkpoint(&model, &out)?;
            if let Some(last) = history.epochs.last() {
                println!(
                    "epochs {}  loss {:.4}  training accuracy {:.4}{}",
                    last.epoch,
                    last.loss,
                    last.accuracy,
                    if history.stopped_early { "  (stopped early)" } else { "" }
                );
            }
        }
        Command::Evaluate { checkpoint, features } => {
            let model = load_checkpoint(&checkpoint)?;
            let batch = load_feature_cache(&features)?;
            println!("accuracy {:.4}", accuracy(&model, &batch)?);
        }
        Command::Compare { config } => {
            let cfg = ExperimentConfig::load(&config)?;
            let stores = cfg.load_stores()?;
            let corpus = cfg.load_corpus()?;
            let reports = run_comparison(&corpus, &cfg.methods, &stores, &cfg.cnn, &cfg.options)?;
            let table = compare_methods(&reports)?;
            print!("{}", table.to_text());
            fs::write(&cfg.report_csv, table.to_csv()?)
                .map_err(|e| Error::from(e).context(cfg.report_csv.display()))?;
            let detail = cfg.report_csv.with_extension("folds.csv");
            let mut body = String::new();
            for (i, r) in reports.iter().enumerate() {
                // keep only the first header line
                let csv = r.detail_csv();
                body.push_str(if i == 0 {
                    &csv
                } else {
                    csv.split_once('\n').map_or("", |(_, rest)| rest)
                });
            }
            fs::write(&detail, body).map_err(|e| Error::from(e).context(detail.display()))?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }
}
