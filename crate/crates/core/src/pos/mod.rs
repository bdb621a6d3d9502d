//! Part-of-speech features: a tag set, a frozen per-tag vector codebook and
//! an averaged-perceptron tagger that assigns one tag per token.

mod codebook;
mod conll;
mod tagger;
mod tagset;

pub use codebook::{build_pos_codebook, read_codebook, write_codebook, PosCodebook, DEFAULT_POS_DIM};
pub use conll::{load_tagged_corpus, read_tagged_corpus, TaggedSentence};
pub use tagger::{tag_sentence, train_tagger, TaggerModel, TrainOptions};
pub use tagset::TagSet;
