use crate::embeddings::{EmbeddingChain, EmbeddingTable, Provenance};
use crate::error::{Error, Result};
use crate::lexicons::LexiconSet;
use crate::pos::{PosCodebook, TaggerModel};

/// A tokenized sentence with an optional class id (0 negative, 1 positive).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sentence {
    pub tokens: Vec<String>,
    pub label: Option<u8>,
}

impl Sentence {
    pub fn new(tokens: Vec<String>, label: Option<u8>) -> Self {
        Sentence { tokens, label }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowProvenance {
    pub base: Option<Provenance>,
    pub tag: Option<String>,
    pub lexicon_hits: u64,
}

/// Row-major `rows × dim` feature matrix for one sentence.
#[derive(Clone, Debug, PartialEq)]
pub struct IwvMatrix {
    dim: usize,
    data: Vec<f64>,
    provenance: Vec<RowProvenance>,
    label: Option<u8>,
}

impl IwvMatrix {
    pub fn from_rows(dim: usize, data: Vec<f64>, label: Option<u8>) -> Result<Self> {
        if dim == 0 || !data.len().is_multiple_of(dim) {
            return Err(Error::Shape(format!(
                "{} values do not form rows of width {dim}",
                data.len()
            )));
        }
        let n = data.len() / dim;
        Ok(IwvMatrix {
            dim,
            data,
            provenance: vec![
                RowProvenance {
                    base: None,
                    tag: None,
                    lexicon_hits: 0
                };
                n
            ],
            label,
        })
    }

    pub fn rows(&self) -> usize {
        self.provenance.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn provenance(&self) -> &[RowProvenance] {
        &self.provenance
    }

    pub fn label(&self) -> Option<u8> {
        self.label
    }
}

/// Which tables feed the base slice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BaseTables {
    Word2Vec,
    GloVe,
    /// Word2Vec first, then GloVe.
    Chain,
}

/// Which slices make up a row, and the label reported for the method.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeatureConfig {
    pub label: String,
    pub base: Option<BaseTables>,
    pub pos: bool,
    pub lexicon: bool,
}

impl FeatureConfig {
    pub fn word2vec() -> Self {
        FeatureConfig {
            label: "Word2Vec".into(),
            base: Some(BaseTables::Word2Vec),
            pos: false,
            lexicon: false,
        }
    }

    pub fn glove() -> Self {
        FeatureConfig {
            label: "GloVe".into(),
            base: Some(BaseTables::GloVe),
            pos: false,
            lexicon: false,
        }
    }

    pub fn iwv() -> Self {
        FeatureConfig {
            label: "IWV".into(),
            base: Some(BaseTables::Chain),
            pos: true,
            lexicon: true,
        }
    }

    /// Parse `word2vec`, `glove` or `iwv` (case-insensitive).
    pub fn by_name(name: &str) -> Result<Self> {
        match name.to_ascii_lowercase().as_str() {
            "word2vec" | "w2v" => Ok(Self::word2vec()),
            "glove" => Ok(Self::glove()),
            "iwv" => Ok(Self::iwv()),
            other => Err(Error::config(format!("unknown feature method {other:?}"))),
        }
    }
}

/// Everything needed to featurize a sentence.
#[derive(Clone, Debug)]
pub struct FeatureStores {
    pub w2v: EmbeddingTable,
    pub glove: EmbeddingTable,
    pub tagger: TaggerModel,
    pub codebook: PosCodebook,
    pub lexicons: LexiconSet,
    /// Seed for out-of-vocabulary vectors.
    pub seed: u64,
}

impl FeatureStores {
    pub fn new(
        w2v: EmbeddingTable,
        glove: EmbeddingTable,
        tagger: TaggerModel,
        codebook: PosCodebook,
        lexicons: LexiconSet,
        seed: u64,
    ) -> Result<Self> {
        if w2v.dim() != glove.dim() {
            return Err(Error::config(format!(
                "word2vec dim {} differs from GloVe dim {}",
                w2v.dim(),
                glove.dim()
            )));
        }
        if tagger.tagset() != codebook.tagset() {
            return Err(Error::config("tagger and POS codebook use different tag sets"));
        }
        Ok(FeatureStores {
            w2v,
            glove,
            tagger,
            codebook,
            lexicons,
            seed,
        })
    }
}

/// Featurizer bound to one [`FeatureConfig`].
pub struct FeatureExtractor<'a> {
    config: FeatureConfig,
    chain: Option<EmbeddingChain<'a>>,
    pos: Option<(&'a TaggerModel, &'a PosCodebook)>,
    lexicons: Option<&'a LexiconSet>,
}

impl<'a> FeatureExtractor<'a> {
    pub fn new(stores: &'a FeatureStores, config: FeatureConfig) -> Result<Self> {
        let chain = match config.base {
            None => None,
            Some(BaseTables::Word2Vec) => Some(EmbeddingChain::new(vec![&stores.w2v], stores.seed)?),
            Some(BaseTables::GloVe) => Some(EmbeddingChain::new(vec![&stores.glove], stores.seed)?),
            Some(BaseTables::Chain) => Some(EmbeddingChain::new(vec![&stores.w2v, &stores.glove], stores.seed)?),
        };
        let pos = config.pos.then_some((&stores.tagger, &stores.codebook));
        let lexicons = config.lexicon.then_some(&stores.lexicons);
        Self::from_parts(config, chain, pos, lexicons)
    }

    fn from_parts(
        config: FeatureConfig,
        chain: Option<EmbeddingChain<'a>>,
        pos: Option<(&'a TaggerModel, &'a PosCodebook)>,
        lexicons: Option<&'a LexiconSet>,
    ) -> Result<Self> {
        if let Some((tagger, codebook)) = pos {
            if tagger.tagset() != codebook.tagset() {
                return Err(Error::config("tagger and POS codebook use different tag sets"));
            }
        }
        let extractor = FeatureExtractor {
            config,
            chain,
            pos,
            lexicons,
        };
        if extractor.dim() == 0 {
            return Err(Error::config("feature configuration selects no slices"));
        }
        Ok(extractor)
    }

    pub fn config(&self) -> &FeatureConfig {
        &self.config
    }

    /// Row width: base + POS + lexicon slots.
    pub fn dim(&self) -> usize {
        self.chain.as_ref().map_or(0, EmbeddingChain::dim)
            + self.pos.map_or(0, |(_, codebook)| codebook.dim())
            + self.lexicons.map_or(0, LexiconSet::len)
    }

    pub fn build(&self, sentence: &Sentence) -> Result<IwvMatrix> {
        if sentence.is_empty() {
            return Err(Error::data("cannot build features for an empty sentence"));
        }
        let dim = self.dim();
        // tags depend on the whole sentence, so they are computed once up front
        let tags = self.pos.map(|(tagger, _)| tagger.tag(&sentence.tokens));
        let mut data = Vec::with_capacity(sentence.len() * dim);
        let mut provenance = Vec::with_capacity(sentence.len());
        for (i, token) in sentence.tokens.iter().enumerate() {
            let mut row = RowProvenance {
                base: None,
                tag: None,
                lexicon_hits: 0,
            };
            if let Some(chain) = &self.chain {
                let base = chain.lookup(token);
                data.extend_from_slice(&base.values);
                row.base = Some(base.provenance);
            }
            if let (Some(tags), Some((_, codebook))) = (&tags, self.pos) {
                data.extend_from_slice(codebook.vector(&tags[i])?);
                row.tag = Some(tags[i].clone());
            }
            if let Some(lexicons) = self.lexicons {
                data.extend(lexicons.feature(token));
                row.lexicon_hits = lexicons.hits(token);
            }
            provenance.push(row);
        }
        debug_assert_eq!(data.len(), sentence.len() * dim);
        Ok(IwvMatrix {
            dim,
            data,
            provenance,
            label: sentence.label,
        })
    }
}

/// Full improved-word-vector matrix: Word2Vec/GloVe/random base, POS vector
/// and lexicon scores for every token.
pub fn build_iwv(
    sentence: &Sentence,
    w2v: &EmbeddingTable,
    glove: &EmbeddingTable,
    tagger: &TaggerModel,
    codebook: &PosCodebook,
    lexicons: &LexiconSet,
    seed: u64,
) -> Result<IwvMatrix> {
    let chain = EmbeddingChain::new(vec![w2v, glove], seed)?;
    FeatureExtractor::from_parts(
        FeatureConfig::iwv(),
        Some(chain),
        Some((tagger, codebook)),
        Some(lexicons),
    )?
    .build(sentence)
}
