//! Improved word vectors for sentence-level sentiment classification.
//!
//! Each token is represented by the concatenation of a pre-trained
//! embedding (Word2Vec, falling back to GloVe, falling back to a frozen
//! random vector), a constant vector for its part-of-speech tag, and one
//! normalized score per sentiment lexicon. The [`nn`] module provides the
//! convolutional classifier used to evaluate those vectors and [`harness`]
//! runs the cross-validation protocol that compares feature configurations.

pub mod embeddings;
pub mod error;
pub mod harness;
pub mod iwv;
pub mod lexicons;
pub mod nn;
pub mod pos;
pub mod seed;

pub use error::{Error, ParseError, Result};
