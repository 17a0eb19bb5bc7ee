//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by validation and by the segmentation pipeline.
#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    /// A feature matrix entry is NaN or infinite.
    #[error("non-finite feature entry at frame {frame}, component {component}")]
    NonFiniteEntry { frame: usize, component: usize },
    /// A feature row is all zeros; cosine similarity is undefined for it.
    #[error("feature row {0} is the zero vector")]
    ZeroRow(usize),
    /// Fewer than two frames.
    #[error("sequence too short: {0} frame(s), need at least 2")]
    TooShort(usize),
    /// Input rows (or matrix size) disagree with the stated dimensions.
    #[error("ragged or mis-sized input: expected {expected} values, got {got}")]
    ShapeMismatch { expected: usize, got: usize },
    /// A label is outside `0..num_phases`.
    #[error("label {label} at frame {frame} exceeds phase count {num_phases}")]
    LabelOutOfRange {
        frame: usize,
        label: usize,
        num_phases: usize,
    },
    /// Empty label sequence or zero phase count.
    #[error("labels and phase count must be nonempty")]
    EmptyLabels,
    /// Invalid hyperparameter value.
    #[error("hyperparameter {name} = {value} outside its valid range")]
    InvalidHyperparameter { name: &'static str, value: f64 },

    /// Two timestamps share a frame index.
    #[error("duplicate timestamp frame {0}")]
    DuplicateFrame(usize),
    /// A timestamp frame index is not within the video.
    #[error("timestamp frame {frame} out of range for {frames} frames")]
    FrameOutOfRange { frame: usize, frames: usize },

    /// An edge weight is zero or negative.
    #[error("non-positive edge weight at index {0}")]
    NonPositiveWeight(usize),
    /// Matrix/vector sizes disagree.
    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: &'static str },
    /// A prior entry is negative or non-finite.
    #[error("invalid prior value at phase {phase}, frame {frame}")]
    InvalidPrior { phase: usize, frame: usize },
    /// The sum-to-one correction was already applied.
    #[error("probability matrix is already corrected")]
    AlreadyCorrected,

    /// A phase has too few feature vectors to fit a covariance.
    #[error("phase {phase} has {count} sample(s); need at least 2")]
    InsufficientSamples { phase: usize, count: usize },
    /// The shrunk covariance is still not positive definite.
    #[error("covariance of phase {0} not positive definite after shrinkage")]
    NonPsdAfterShrinkage(usize),
    /// No videos supplied for fitting.
    #[error("dataset is empty")]
    EmptyDataset,

    /// Prediction and ground truth have different lengths.
    #[error("length mismatch: prediction has {pred} frames, ground truth {gt}")]
    LengthMismatch { pred: usize, gt: usize },
    /// Nothing to evaluate.
    #[error("no (prediction, ground-truth) pairs to evaluate")]
    EmptyEvaluation,
    /// Invalid synthetic-data configuration.
    #[error("invalid synthesis config: {0}")]
    InvalidConfig(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
