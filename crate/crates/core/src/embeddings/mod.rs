//! Pre-trained embedding tables and the base-vector lookup chain.
//!
//! Tokens are resolved against Word2Vec first, then GloVe. Tokens missing
//! from every table receive a frozen random vector that depends only on the
//! token and a global seed.

mod glove;
pub(crate) mod io;
mod word2vec;

use std::collections::HashMap;

use rand::Rng;

use crate::error::{Error, Result};
use crate::seed::keyed_rng;

pub use glove::{load_glove_text, read_glove_text};
pub use word2vec::{load_word2vec_binary, read_word2vec_binary, write_word2vec_binary};

/// Half-width of the uniform range used for out-of-vocabulary vectors.
pub const OOV_RANGE: f64 = 0.25;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Source {
    Word2Vec,
    GloVe,
}

impl Source {
    pub fn label(self) -> &'static str {
        match self {
            Source::Word2Vec => "w2v",
            Source::GloVe => "glove",
        }
    }
}

/// Immutable token → vector map with a fixed dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingTable {
    dim: usize,
    source: Source,
    words: Vec<String>,
    index: HashMap<String, usize>,
    data: Vec<f32>,
}

impl EmbeddingTable {
    pub fn empty(dim: usize, source: Source) -> Self {
        EmbeddingTable {
            dim,
            source,
            words: Vec::new(),
            index: HashMap::new(),
            data: Vec::new(),
        }
    }

    /// Build a table from `(token, vector)` pairs. Later duplicates replace
    /// earlier ones.
    pub fn from_entries<I, S>(dim: usize, source: Source, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, Vec<f32>)>,
        S: Into<String>,
    {
        if dim == 0 {
            return Err(Error::config("embedding dimension must be positive"));
        }
        let mut table = EmbeddingTable::empty(dim, source);
        for (word, vector) in entries {
            if vector.len() != dim {
                return Err(Error::data(format!(
                    "vector of length {} in a table of dimension {dim}",
                    vector.len()
                )));
            }
            table.insert(word.into(), &vector);
        }
        Ok(table)
    }

    pub(crate) fn with_capacity(dim: usize, source: Source, capacity: usize) -> Self {
        EmbeddingTable {
            dim,
            source,
            words: Vec::with_capacity(capacity),
            index: HashMap::with_capacity(capacity),
            data: Vec::with_capacity(capacity.saturating_mul(dim)),
        }
    }

    pub(crate) fn insert(&mut self, word: String, vector: &[f32]) {
        debug_assert_eq!(vector.len(), self.dim);
        if let Some(&slot) = self.index.get(&word) {
            log::warn!(
                "duplicate token {word:?} in {} table; keeping the last occurrence",
                self.source.label()
            );
            self.data[slot * self.dim..(slot + 1) * self.dim].copy_from_slice(vector);
        } else {
            self.index.insert(word.clone(), self.words.len());
            self.words.push(word);
            self.data.extend_from_slice(vector);
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn source(&self) -> Source {
        self.source
    }

    pub fn source_label(&self) -> &'static str {
        self.source.label()
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn get(&self, token: &str) -> Option<&[f32]> {
        self.index
            .get(token)
            .map(|&i| &self.data[i * self.dim..(i + 1) * self.dim])
    }

    pub fn contains(&self, token: &str) -> bool {
        self.index.contains_key(token)
    }

    /// Entries in first-insertion order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &[f32])> {
        self.words
            .iter()
            .zip(self.data.chunks_exact(self.dim.max(1)))
            .map(|(w, v)| (w.as_str(), v))
    }

    /// Verbatim lookup, then lowercased.
    fn resolve(&self, token: &str) -> Option<&[f32]> {
        self.get(token).or_else(|| {
            let lower = token.to_lowercase();
            if lower != token {
                self.get(&lower)
            } else {
                None
            }
        })
    }
}

/// Where a base vector came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    FromW2V,
    FromGloVe,
    RandomOov,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BaseVector {
    pub values: Vec<f64>,
    pub provenance: Provenance,
}

/// Frozen random vector for a token absent from every table. Components are
/// uniform in `[-0.25, 0.25]` and depend only on `(token, dim, seed)`.
pub fn oov_vector(token: &str, dim: usize, global_seed: u64) -> Vec<f64> {
    let mut rng = keyed_rng(global_seed, &format!("oov:{token}"));
    (0..dim).map(|_| rng.gen_range(-OOV_RANGE..=OOV_RANGE)).collect()
}

/// Ordered list of tables consulted for base vectors.
#[derive(Clone, Debug)]
pub struct EmbeddingChain<'a> {
    tables: Vec<&'a EmbeddingTable>,
    dim: usize,
    seed: u64,
}

impl<'a> EmbeddingChain<'a> {
    pub fn new(tables: Vec<&'a EmbeddingTable>, seed: u64) -> Result<Self> {
        let first = tables
            .first()
            .ok_or_else(|| Error::config("embedding chain needs at least one table"))?;
        let dim = first.dim();
        if let Some(bad) = tables.iter().find(|t| t.dim() != dim) {
            return Err(Error::config(format!(
                "embedding dimension mismatch: {} table has dim {}, {} table has dim {dim}",
                bad.source_label(),
                bad.dim(),
                first.source_label()
            )));
        }
        Ok(EmbeddingChain { tables, dim, seed })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lookup(&self, token: &str) -> BaseVector {
        for table in &self.tables {
            if let Some(v) = table.resolve(token) {
                return BaseVector {
                    values: v.iter().map(|&x| x as f64).collect(),
                    provenance: match table.source() {
                        Source::Word2Vec => Provenance::FromW2V,
                        Source::GloVe => Provenance::FromGloVe,
                    },
                };
            }
        }
        BaseVector {
            values: oov_vector(token, self.dim, self.seed),
            provenance: Provenance::RandomOov,
        }
    }
}

/// Word2Vec first, then GloVe, then a random OOV vector.
pub fn lookup_chain(token: &str, w2v: &EmbeddingTable, glove: &EmbeddingTable, global_seed: u64) -> Result<BaseVector> {
    Ok(EmbeddingChain::new(vec![w2v, glove], global_seed)?.lookup(token))
}
