//! Temporal segmentation of frame-feature sequences by random walks on a
//! chain graph.
//!
//! A video is modeled as a path graph whose vertices are frames and whose
//! edge weights come from the cosine similarity of neighboring frame
//! features. Per-phase label evidence enters as a prior vector `z`, and the
//! per-frame phase scores `x` solve the regularized system
//! `(L + gamma*I) x = gamma * z` built from the graph Laplacian `L`. Frames
//! are labeled by the arg-max score across phases.
//!
//! Two supervision modes produce the priors:
//! - [`timestamp`]: a handful of labeled frames per phase of the test video,
//! - [`fewshot`]: Gaussian class models plus a temporal phase histogram
//!   fitted on a small fully-labeled dataset.
//!
//! [`metrics`] implements frame accuracy and segmental F1, and [`synth`]
//! provides a synthetic clustered-sequence generator together with the
//! brute-force oracles used to verify the solver and the metrics.
//!
//! The crate is `no_std`-compatible (requires `alloc`); the `std` feature is
//! on by default.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod error;
pub mod fewshot;
pub mod graph;
pub mod metrics;
pub mod solver;
pub mod synth;
pub mod timestamp;
pub mod types;

pub use error::{Error, Result};
pub use graph::WeightConvention;
pub use types::{
    FeatureSequence, Hyperparameters, LabelSequence, PriorMatrix, ProbabilityMatrix, TimestampSet,
};
