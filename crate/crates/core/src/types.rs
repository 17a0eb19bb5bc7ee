//! Domain types shared by every stage of the pipeline.
//!
//! All types validate their invariants on construction and are immutable
//! afterwards, so values can be freely shared across threads.

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// A `T x M` matrix of per-frame feature vectors for one video, row-major.
///
/// Every row is finite and nonzero (cosine similarity is undefined for a
/// zero vector), and there are at least two frames.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureSequence {
    frames: usize,
    dim: usize,
    data: Vec<f64>,
}

impl FeatureSequence {
    /// Validates and wraps a row-major `frames x dim` matrix.
    pub fn new(data: Vec<f64>, frames: usize, dim: usize) -> Result<Self> {
        if frames < 2 {
            return Err(Error::TooShort(frames));
        }
        if dim == 0 || data.len() != frames * dim {
            return Err(Error::ShapeMismatch {
                expected: frames * dim,
                got: data.len(),
            });
        }
        for t in 0..frames {
            let row = &data[t * dim..(t + 1) * dim];
            if let Some(m) = row.iter().position(|v| !v.is_finite()) {
                return Err(Error::NonFiniteEntry {
                    frame: t,
                    component: m,
                });
            }
            if row.iter().all(|&v| v == 0.0) {
                return Err(Error::ZeroRow(t));
            }
        }
        Ok(Self { frames, dim, data })
    }

    /// Validates a matrix given as one `Vec` per frame; rows must be rectangular.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let frames = rows.len();
        let dim = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::ShapeMismatch {
                expected: dim,
                got: bad.len(),
            });
        }
        let mut data = Vec::with_capacity(frames * dim);
        for row in &rows {
            data.extend_from_slice(row);
        }
        Self::new(data, frames, dim)
    }

    pub fn frames(&self) -> usize {
        self.frames
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Feature vector of frame `t`.
    pub fn row(&self, t: usize) -> &[f64] {
        &self.data[t * self.dim..(t + 1) * self.dim]
    }

    /// Row-major backing storage.
    pub fn data(&self) -> &[f64] {
        &self.data
    }
}

/// A length-`T` vector of phase ids in `0..num_phases`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelSequence {
    labels: Vec<usize>,
    num_phases: usize,
}

impl LabelSequence {
    pub fn new(labels: Vec<usize>, num_phases: usize) -> Result<Self> {
        if labels.is_empty() || num_phases == 0 {
            return Err(Error::EmptyLabels);
        }
        if let Some((frame, &label)) = labels.iter().enumerate().find(|(_, &l)| l >= num_phases) {
            return Err(Error::LabelOutOfRange {
                frame,
                label,
                num_phases,
            });
        }
        Ok(Self { labels, num_phases })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn num_phases(&self) -> usize {
        self.num_phases
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }
}

/// Sparse per-phase frame annotations: `(frame, phase)` pairs.
///
/// Frame indices are unique and phases lie in `0..num_phases`. A phase may
/// have no entry at all: real videos can lack some of the global phases, and
/// sampling skips those rather than failing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimestampSet {
    entries: Vec<(usize, usize)>,
    num_phases: usize,
}

impl TimestampSet {
    pub fn new(mut entries: Vec<(usize, usize)>, num_phases: usize) -> Result<Self> {
        if num_phases == 0 {
            return Err(Error::EmptyLabels);
        }
        for &(frame, phase) in &entries {
            if phase >= num_phases {
                return Err(Error::LabelOutOfRange {
                    frame,
                    label: phase,
                    num_phases,
                });
            }
        }
        entries.sort_unstable();
        if let Some(w) = entries.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::DuplicateFrame(w[0].0));
        }
        Ok(Self {
            entries,
            num_phases,
        })
    }

    /// Entries sorted by frame index.
    pub fn entries(&self) -> &[(usize, usize)] {
        &self.entries
    }

    pub fn num_phases(&self) -> usize {
        self.num_phases
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// An `S x T` matrix of nonnegative prior values, row-major by phase.
#[derive(Debug, Clone, PartialEq)]
pub struct PriorMatrix {
    num_phases: usize,
    frames: usize,
    values: Vec<f64>,
}

impl PriorMatrix {
    pub fn new(values: Vec<f64>, num_phases: usize, frames: usize) -> Result<Self> {
        if num_phases == 0 || frames == 0 || values.len() != num_phases * frames {
            return Err(Error::ShapeMismatch {
                expected: num_phases * frames,
                got: values.len(),
            });
        }
        if let Some(bad) = values.iter().position(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidPrior {
                phase: bad / frames,
                frame: bad % frames,
            });
        }
        Ok(Self {
            num_phases,
            frames,
            values,
        })
    }

    pub fn num_phases(&self) -> usize {
        self.num_phases
    }

    pub fn frames(&self) -> usize {
        self.frames
    }

    /// Prior row of phase `s`.
    pub fn row(&self, s: usize) -> &[f64] {
        &self.values[s * self.frames..(s + 1) * self.frames]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Elementwise product with another prior of the same shape.
    pub fn hadamard(&self, other: &PriorMatrix) -> Result<PriorMatrix> {
        if self.num_phases != other.num_phases || self.frames != other.frames {
            return Err(Error::DimensionMismatch {
                context: "prior matrices must share shape for a product",
            });
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .collect();
        PriorMatrix::new(values, self.num_phases, self.frames)
    }
}

/// Solved per-phase scores, `S x T` row-major.
///
/// `corrected` records whether the per-frame sum-to-one shift has been
/// applied; corrected matrices have every frame column summing to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityMatrix {
    num_phases: usize,
    frames: usize,
    values: Vec<f64>,
    corrected: bool,
}

impl ProbabilityMatrix {
    pub(crate) fn from_solver(
        values: Vec<f64>,
        num_phases: usize,
        frames: usize,
        corrected: bool,
    ) -> Self {
        debug_assert_eq!(values.len(), num_phases * frames);
        debug_assert!(values.iter().all(|v| v.is_finite()));
        Self {
            num_phases,
            frames,
            values,
            corrected,
        }
    }

    pub fn num_phases(&self) -> usize {
        self.num_phases
    }

    pub fn frames(&self) -> usize {
        self.frames
    }

    pub fn corrected(&self) -> bool {
        self.corrected
    }

    /// Score row of phase `s`.
    pub fn row(&self, s: usize) -> &[f64] {
        &self.values[s * self.frames..(s + 1) * self.frames]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Scores of one frame across phases.
    pub fn column(&self, t: usize) -> impl Iterator<Item = f64> + '_ {
        (0..self.num_phases).map(move |s| self.values[s * self.frames + t])
    }
}

/// The three tuned scalars of the method.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hyperparameters {
    beta: f64,
    gamma: f64,
    alpha: f64,
}

impl Hyperparameters {
    /// Requires `beta > 0`, `gamma > 0` and `alpha` in the open interval (0, 1).
    pub fn new(beta: f64, gamma: f64, alpha: f64) -> Result<Self> {
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::InvalidHyperparameter {
                name: "beta",
                value: beta,
            });
        }
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(Error::InvalidHyperparameter {
                name: "gamma",
                value: gamma,
            });
        }
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidHyperparameter {
                name: "alpha",
                value: alpha,
            });
        }
        Ok(Self { beta, gamma, alpha })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

impl Default for Hyperparameters {
    /// Midpoints of the tuning grid: `beta = 5`, `gamma = 1e-3`, `alpha = 0.5`.
    fn default() -> Self {
        Self {
            beta: 5.0,
            gamma: 1e-3,
            alpha: 0.5,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn feature_sequence_accepts_well_formed_input() {
        let seq = FeatureSequence::new(vec![1.0; 6], 2, 3).unwrap();
        assert_eq!(seq.frames(), 2);
        assert_eq!(seq.dim(), 3);
        assert_eq!(seq.row(1), &[1.0, 1.0, 1.0]);
    }

    #[test]
    fn feature_sequence_rejects_nan() {
        let err = FeatureSequence::new(vec![1.0, f64::NAN, 1.0, 1.0], 2, 2).unwrap_err();
        assert_eq!(
            err,
            Error::NonFiniteEntry {
                frame: 0,
                component: 1
            }
        );
    }

    #[test]
    fn feature_sequence_rejects_zero_row() {
        let err = FeatureSequence::new(vec![1.0, 2.0, 0.0, 0.0], 2, 2).unwrap_err();
        assert_eq!(err, Error::ZeroRow(1));
    }

    #[test]
    fn feature_sequence_rejects_single_frame() {
        assert_eq!(
            FeatureSequence::new(vec![1.0, 2.0], 1, 2).unwrap_err(),
            Error::TooShort(1)
        );
    }

    #[test]
    fn feature_sequence_rejects_ragged_rows() {
        let err = FeatureSequence::from_rows(vec![vec![1.0, 2.0], vec![3.0]]).unwrap_err();
        assert!(matches!(err, Error::ShapeMismatch { .. }));
    }

    #[test]
    fn labels_reject_out_of_range_phase() {
        let err = LabelSequence::new(vec![0, 3], 3).unwrap_err();
        assert_eq!(
            err,
            Error::LabelOutOfRange {
                frame: 1,
                label: 3,
                num_phases: 3
            }
        );
    }

    #[test]
    fn timestamps_reject_duplicate_frames() {
        let err = TimestampSet::new(vec![(4, 0), (4, 1)], 2).unwrap_err();
        assert_eq!(err, Error::DuplicateFrame(4));
    }

    #[test]
    fn timestamps_sorted_by_frame() {
        let ts = TimestampSet::new(vec![(9, 1), (2, 0)], 2).unwrap();
        assert_eq!(ts.entries(), &[(2, 0), (9, 1)]);
    }

    #[test]
    fn prior_rejects_negative_values() {
        let err = PriorMatrix::new(vec![0.0, -1.0], 1, 2).unwrap_err();
        assert_eq!(err, Error::InvalidPrior { phase: 0, frame: 1 });
    }

    #[test]
    fn hyperparameters_validate_ranges() {
        assert!(Hyperparameters::new(5.0, 1e-3, 0.5).is_ok());
        assert!(Hyperparameters::new(0.0, 1e-3, 0.5).is_err());
        assert!(Hyperparameters::new(5.0, -1.0, 0.5).is_err());
        assert!(Hyperparameters::new(5.0, 1e-3, 1.0).is_err());
        assert!(Hyperparameters::new(5.0, 1e-3, 0.0).is_err());
    }
}
