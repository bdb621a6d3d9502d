//! Improved word vectors: per-token concatenation of a base embedding, a POS
//! vector and the lexicon feature, plus batching and the feature cache file.

mod batch;
mod export;
mod features;
mod tokenize;

pub use batch::{make_batch, PaddedBatch};
pub use export::{load_feature_cache, read_feature_cache, save_feature_cache, write_feature_cache};
pub use features::{
    build_iwv, BaseTables, FeatureConfig, FeatureExtractor, FeatureStores, IwvMatrix, RowProvenance, Sentence,
};
pub use tokenize::tokenize;
