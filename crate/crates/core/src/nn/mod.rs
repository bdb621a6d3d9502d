//! The sentence classifier: parallel 1-D convolution banks over the token
//! axis, max-over-time pooling, dropout, a ReLU dense layer and a softmax
//! output, trained with hand-derived gradients and Adam.

mod adam;
mod checkpoint;
mod config;
mod model;
mod tensor;
mod train;

pub use adam::Adam;
pub use checkpoint::{load_checkpoint, read_checkpoint, save_checkpoint, write_checkpoint, CHECKPOINT_VERSION};
pub use config::CnnConfig;
pub use model::{CnnModel, Params};
pub use tensor::Tensor;
pub use train::{accuracy, train, EpochStats, MatrixSet, TrainHistory, TrainingData};
