//! Flat `key = value` experiment configuration.
//!
//! Blank lines and lines starting with `#` are ignored. Relative paths are
//! resolved against the directory holding the config file.
//!
//! | key | meaning | default |
//! |-----|---------|---------|
//! | `dataset` | `mr`, `cr` or `sst` | required |
//! | `data_dir` | directory with the dataset files | required |
//! | `w2v` | word2vec binary file (optionally gzipped) | empty table |
//! | `glove` | GloVe text file (optionally gzipped) | empty table |
//! | `embedding_dim` | base vector width when a table is absent | 300 |
//! | `tagger` | tagger model written by `tag-train` | required |
//! | `pos_dim` | POS vector width | 50 |
//! | `seed` | master seed for folds, training, OOV and POS vectors | 0 |
//! | `oov_seed`, `pos_seed` | override the master seed for one store | `seed` |
//! | `lexicon.<name>` | comma-separated files of one lexicon | none |
//! | `lexicon.<name>.columns` | `term-score` or `score-term` | `term-score` |
//! | `methods` | comma-separated `word2vec`, `glove`, `iwv` | all three |
//! | `runs`, `folds` | cross-validation protocol | 3, 10 |
//! | `filter_widths`, `feature_maps`, `dense_units`, `dropout`, `learning_rate`, `batch_size`, `epochs`, `patience`, `min_delta` | CNN hyperparameters | CNN defaults |
//! | `report_csv` | where to write the CSV table | `report.csv` |
//!
//! Lexicons keep the order in which their keys first appear.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use super::{load_dataset, ExperimentOptions, LabeledCorpus};
use crate::embeddings::{load_glove_text, load_word2vec_binary, EmbeddingTable, Source};
use crate::error::{Error, Result};
use crate::iwv::{FeatureConfig, FeatureStores};
use crate::lexicons::{Columns, LexiconSet, LexiconSource};
use crate::nn::CnnConfig;
use crate::pos::{build_pos_codebook, TaggerModel, DEFAULT_POS_DIM};

/// Ordered key-value pairs with the line each came from.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct KeyValues {
    entries: Vec<(String, String, usize)>,
}

impl KeyValues {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries: Vec<(String, String, usize)> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::config(format!("line {}: expected key = value", i + 1)))?;
            let key = key.trim();
            if key.is_empty() {
                return Err(Error::config(format!("line {}: empty key", i + 1)));
            }
            if let Some((_, _, first)) = entries.iter().find(|(k, _, _)| k == key) {
                return Err(Error::config(format!(
                    "line {}: key {key} already set on line {first}",
                    i + 1
                )));
            }
            entries.push((key.to_owned(), value.trim().to_owned(), i + 1));
        }
        Ok(KeyValues { entries })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _, _)| k == key)
            .map(|(_, v, _)| v.as_str())
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(k, _, _)| k.as_str())
    }

    fn line_of(&self, key: &str) -> usize {
        self.entries.iter().find(|(k, _, _)| k == key).map_or(0, |e| e.2)
    }

    pub fn parsed<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| Error::config(format!("line {}: cannot parse {key} = {v:?}", self.line_of(key)))),
        }
    }

    pub fn list<T: FromStr>(&self, key: &str) -> Result<Option<Vec<T>>> {
        match self.get(key) {
            None => Ok(None),
            Some(v) => split_list(v)
                .map(|item| {
                    item.parse().map_err(|_| {
                        Error::config(format!("line {}: cannot parse {item:?} in {key}", self.line_of(key)))
                    })
                })
                .collect::<Result<Vec<T>>>()
                .map(Some),
        }
    }
}

fn split_list(value: &str) -> impl Iterator<Item = &str> {
    value.split(',').map(str::trim).filter(|s| !s.is_empty())
}

const SCALAR_KEYS: [&str; 24] = [
    "dataset",
    "data_dir",
    "w2v",
    "glove",
    "embedding_dim",
    "tagger",
    "pos_dim",
    "seed",
    "oov_seed",
    "pos_seed",
    "methods",
    "runs",
    "folds",
    "filter_widths",
    "feature_maps",
    "dense_units",
    "dropout",
    "learning_rate",
    "batch_size",
    "epochs",
    "patience",
    "min_delta",
    "report_csv",
    "classes",
];

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub dataset: String,
    pub data_dir: PathBuf,
    pub w2v: Option<PathBuf>,
    pub glove: Option<PathBuf>,
    pub embedding_dim: usize,
    pub tagger: PathBuf,
    pub pos_dim: usize,
    pub oov_seed: u64,
    pub pos_seed: u64,
    pub lexicons: Vec<LexiconSource>,
    pub methods: Vec<FeatureConfig>,
    pub options: ExperimentOptions,
    pub cnn: CnnConfig,
    pub report_csv: PathBuf,
}

impl ExperimentConfig {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::from(e).context(path.display().to_string()))?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        Self::parse(&text, base)
    }

    pub fn parse(text: &str, base_dir: &Path) -> Result<Self> {
        let kv = KeyValues::parse(text)?;
        let resolve = |p: &str| -> PathBuf {
            let p = Path::new(p);
            if p.is_absolute() {
                p.to_path_buf()
            } else {
                base_dir.join(p)
            }
        };
        let required = |key: &str| -> Result<&str> {
            kv.get(key)
                .ok_or_else(|| Error::config(format!("missing required key {key}")))
        };

        let mut lexicons: Vec<LexiconSource> = Vec::new();
        for key in kv.keys() {
            if SCALAR_KEYS.contains(&key) {
                continue;
            }
            let Some(rest) = key.strip_prefix("lexicon.") else {
                return Err(Error::config(format!("line {}: unknown key {key}", kv.line_of(key))));
            };
            let (name, is_columns) = match rest.strip_suffix(".columns") {
                Some(name) => (name, true),
                None => (rest, false),
            };
            if name.is_empty() {
                return Err(Error::config(format!(
                    "line {}: lexicon key without a name",
                    kv.line_of(key)
                )));
            }
            let idx = match lexicons.iter().position(|l| l.name == name) {
                Some(i) => i,
                None => {
                    lexicons.push(LexiconSource {
                        name: name.to_owned(),
                        paths: Vec::new(),
                        columns: Columns::default(),
                    });
                    lexicons.len() - 1
                }
            };
            let value = kv.get(key).unwrap_or_default();
            if is_columns {
                lexicons[idx].columns = match value {
                    "term-score" => Columns::TermScore,
                    "score-term" => Columns::ScoreTerm,
                    other => {
                        return Err(Error::config(format!(
                            "line {}: columns must be term-score or score-term, got {other:?}",
                            kv.line_of(key)
                        )))
                    }
                };
            } else {
                lexicons[idx].paths = split_list(value).map(resolve).collect();
            }
        }
        if let Some(l) = lexicons.iter().find(|l| l.paths.is_empty()) {
            return Err(Error::config(format!("lexicon {} has no files", l.name)));
        }

        let methods = match kv.get("methods") {
            None => vec![FeatureConfig::word2vec(), FeatureConfig::glove(), FeatureConfig::iwv()],
            Some(v) => split_list(v).map(FeatureConfig::by_name).collect::<Result<Vec<_>>>()?,
        };
        if methods.is_empty() {
            return Err(Error::config("methods lists no method"));
        }

        let seed: u64 = kv.parsed("seed")?.unwrap_or(0);
        let defaults = CnnConfig::default();
        let cnn = CnnConfig {
            filter_widths: kv.list("filter_widths")?.unwrap_or(defaults.filter_widths),
            feature_maps: kv.parsed("feature_maps")?.unwrap_or(defaults.feature_maps),
            dense_units: kv.parsed("dense_units")?.unwrap_or(defaults.dense_units),
            input_dim: defaults.input_dim,
            classes: kv.parsed("classes")?.unwrap_or(defaults.classes),
            dropout_rate: kv.parsed("dropout")?.unwrap_or(defaults.dropout_rate),
            learning_rate: kv.parsed("learning_rate")?.unwrap_or(defaults.learning_rate),
            batch_size: kv.parsed("batch_size")?.unwrap_or(defaults.batch_size),
            epochs: kv.parsed("epochs")?.unwrap_or(defaults.epochs),
            seed,
            patience: kv.parsed("patience")?.unwrap_or(defaults.patience),
            min_delta: kv.parsed("min_delta")?.unwrap_or(defaults.min_delta),
        };
        cnn.validate()?;

        let options = ExperimentOptions {
            runs: kv.parsed("runs")?.unwrap_or(3),
            folds: kv.parsed("folds")?.unwrap_or(10),
            seed,
        };
        if options.runs == 0 {
            return Err(Error::config("runs must be positive"));
        }

        Ok(ExperimentConfig {
            dataset: required("dataset")?.to_owned(),
            data_dir: resolve(required("data_dir")?),
            w2v: kv.get("w2v").map(resolve),
            glove: kv.get("glove").map(resolve),
            embedding_dim: kv.parsed("embedding_dim")?.unwrap_or(300),
            tagger: resolve(required("tagger")?),
            pos_dim: kv.parsed("pos_dim")?.unwrap_or(DEFAULT_POS_DIM),
            oov_seed: kv.parsed("oov_seed")?.unwrap_or(seed),
            pos_seed: kv.parsed("pos_seed")?.unwrap_or(seed),
            lexicons,
            methods,
            options,
            cnn,
            report_csv: resolve(kv.get("report_csv").unwrap_or("report.csv")),
        })
    }

    /// Load embeddings, tagger, POS codebook and lexicons.
    pub fn load_stores(&self) -> Result<FeatureStores> {
        let w2v = match &self.w2v {
            Some(p) => load_word2vec_binary(p).map_err(|e| e.context(p.display().to_string()))?,
            None => EmbeddingTable::empty(self.embedding_dim, Source::Word2Vec),
        };
        let glove = match &self.glove {
            Some(p) => load_glove_text(p).map_err(|e| e.context(p.display().to_string()))?,
            None => EmbeddingTable::empty(w2v.dim(), Source::GloVe),
        };
        let file =
            fs::File::open(&self.tagger).map_err(|e| Error::from(e).context(self.tagger.display().to_string()))?;
        let tagger = TaggerModel::load(std::io::BufReader::new(file))?;
        let codebook = build_pos_codebook(tagger.tagset(), self.pos_dim, self.pos_seed)?;
        let lexicons = LexiconSet::load(&self.lexicons)?;
        FeatureStores::new(w2v, glove, tagger, codebook, lexicons, self.oov_seed)
    }

    pub fn load_corpus(&self) -> Result<LabeledCorpus> {
        load_dataset(&self.dataset, &self.data_dir)
    }
}
