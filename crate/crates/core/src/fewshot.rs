//! Few-shot supervision: a spatial prior from per-phase Gaussian models and
//! a temporal prior from a binarized phase histogram, fitted on a small
//! fully-labeled dataset. The per-frame prior is their elementwise product.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::types::{FeatureSequence, LabelSequence, PriorMatrix};

/// Per-phase multivariate Gaussians fitted from labeled feature clusters.
///
/// Covariances are stored as estimated; the shrinkage `epsilon` is added to
/// the diagonal at factorization time, and the Cholesky factors of the
/// shrunk covariances are kept for density evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianPhaseModel {
    dim: usize,
    epsilon: f64,
    phases: Vec<PhaseGaussian>,
}

#[derive(Debug, Clone, PartialEq)]
struct PhaseGaussian {
    mean: Vec<f64>,
    /// Unbiased sample covariance, `dim x dim` row-major.
    cov: Vec<f64>,
    /// Cluster size used for the fit.
    count: usize,
    /// Lower Cholesky factor of `cov + epsilon*I`, row-major.
    chol: Vec<f64>,
    /// `log det(cov + epsilon*I)`.
    log_det: f64,
}

impl GaussianPhaseModel {
    /// Rebuilds a model from stored parameters, refactorizing each phase.
    ///
    /// `parts` holds `(mean, row-major covariance, cluster size)` per phase.
    pub fn from_parts(
        dim: usize,
        epsilon: f64,
        parts: Vec<(Vec<f64>, Vec<f64>, usize)>,
    ) -> Result<Self> {
        if dim == 0 || parts.is_empty() {
            return Err(Error::EmptyDataset);
        }
        if !(epsilon >= 0.0) || !epsilon.is_finite() {
            return Err(Error::InvalidHyperparameter {
                name: "epsilon",
                value: epsilon,
            });
        }
        let mut phases = Vec::with_capacity(parts.len());
        for (s, (mean, cov, count)) in parts.into_iter().enumerate() {
            if mean.len() != dim || cov.len() != dim * dim {
                return Err(Error::DimensionMismatch {
                    context: "Gaussian parameter sizes vs. feature dimension",
                });
            }
            if count < 2 {
                return Err(Error::InsufficientSamples { phase: s, count });
            }
            let (chol, log_det) =
                cholesky_shrunk(&cov, dim, epsilon).ok_or(Error::NonPsdAfterShrinkage(s))?;
            phases.push(PhaseGaussian {
                mean,
                cov,
                count,
                chol,
                log_det,
            });
        }
        Ok(Self {
            dim,
            epsilon,
            phases,
        })
    }

    pub fn num_phases(&self) -> usize {
        self.phases.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn mean(&self, phase: usize) -> &[f64] {
        &self.phases[phase].mean
    }

    /// Unbiased covariance of `phase` (without shrinkage), row-major.
    pub fn covariance(&self, phase: usize) -> &[f64] {
        &self.phases[phase].cov
    }

    pub fn count(&self, phase: usize) -> usize {
        self.phases[phase].count
    }

    /// Log density of `frame` under `phase`'s shrunk Gaussian.
    pub fn log_density(&self, phase: usize, frame: &[f64]) -> f64 {
        let g = &self.phases[phase];
        let m = self.dim;
        // Forward-substitute L y = (frame - mean); the quadratic form is |y|^2.
        let mut y = vec![0.0; m];
        for i in 0..m {
            let mut acc = frame[i] - g.mean[i];
            for k in 0..i {
                acc -= g.chol[i * m + k] * y[k];
            }
            y[i] = acc / g.chol[i * m + i];
        }
        let quad: f64 = y.iter().map(|v| v * v).sum();
        let ln_2pi = (2.0 * core::f64::consts::PI).ln();
        -0.5 * (m as f64 * ln_2pi + g.log_det + quad)
    }
}

/// Lower Cholesky factor and log-determinant of `cov + epsilon*I`.
fn cholesky_shrunk(cov: &[f64], m: usize, epsilon: f64) -> Option<(Vec<f64>, f64)> {
    let mut l = vec![0.0; m * m];
    let mut log_det = 0.0;
    for j in 0..m {
        for i in j..m {
            let mut acc = cov[i * m + j];
            if i == j {
                acc += epsilon;
            }
            for k in 0..j {
                acc -= l[i * m + k] * l[j * m + k];
            }
            if i == j {
                if !(acc > 0.0) || !acc.is_finite() {
                    return None;
                }
                l[j * m + j] = acc.sqrt();
                log_det += acc.ln();
            } else {
                l[i * m + j] = acc / l[j * m + j];
            }
        }
    }
    Some((l, log_det))
}

/// Fits per-phase means and unbiased covariances from labeled videos.
///
/// Every phase in `0..num_phases` must contribute at least two feature
/// vectors somewhere in the dataset. When `epsilon` is `None` the shrinkage
/// defaults to `1e-3` times the mean diagonal variance across phases.
pub fn fit_gaussians(
    dataset: &[(FeatureSequence, LabelSequence)],
    num_phases: usize,
    epsilon: Option<f64>,
) -> Result<GaussianPhaseModel> {
    if dataset.is_empty() || num_phases == 0 {
        return Err(Error::EmptyDataset);
    }
    let dim = dataset[0].0.dim();
    for (features, labels) in dataset {
        if features.dim() != dim || features.frames() != labels.len() {
            return Err(Error::DimensionMismatch {
                context: "dataset features vs. labels",
            });
        }
        if let Some((frame, &label)) = labels
            .labels()
            .iter()
            .enumerate()
            .find(|(_, &l)| l >= num_phases)
        {
            return Err(Error::LabelOutOfRange {
                frame,
                label,
                num_phases,
            });
        }
    }

    let mut counts = vec![0usize; num_phases];
    let mut means = vec![0.0; num_phases * dim];
    for (features, labels) in dataset {
        for (t, &s) in labels.labels().iter().enumerate() {
            counts[s] += 1;
            for (j, v) in features.row(t).iter().enumerate() {
                means[s * dim + j] += v;
            }
        }
    }
    for (s, &count) in counts.iter().enumerate() {
        if count < 2 {
            return Err(Error::InsufficientSamples { phase: s, count });
        }
        for j in 0..dim {
            means[s * dim + j] /= count as f64;
        }
    }

    let mut covs = vec![0.0; num_phases * dim * dim];
    let mut diff = vec![0.0; dim];
    for (features, labels) in dataset {
        for (t, &s) in labels.labels().iter().enumerate() {
            let row = features.row(t);
            for j in 0..dim {
                diff[j] = row[j] - means[s * dim + j];
            }
            let cov = &mut covs[s * dim * dim..(s + 1) * dim * dim];
            for i in 0..dim {
                for j in 0..=i {
                    cov[i * dim + j] += diff[i] * diff[j];
                }
            }
        }
    }
    for s in 0..num_phases {
        let denom = (counts[s] - 1) as f64;
        let cov = &mut covs[s * dim * dim..(s + 1) * dim * dim];
        for i in 0..dim {
            for j in 0..=i {
                cov[i * dim + j] /= denom;
                cov[j * dim + i] = cov[i * dim + j];
            }
        }
    }

    let epsilon = match epsilon {
        Some(e) => e,
        None => {
            let mean_variance: f64 = (0..num_phases)
                .map(|s| {
                    (0..dim)
                        .map(|i| covs[s * dim * dim + i * dim + i])
                        .sum::<f64>()
                        / dim as f64
                })
                .sum::<f64>()
                / num_phases as f64;
            1e-3 * mean_variance
        }
    };

    let parts = (0..num_phases)
        .map(|s| {
            (
                means[s * dim..(s + 1) * dim].to_vec(),
                covs[s * dim * dim..(s + 1) * dim * dim].to_vec(),
                counts[s],
            )
        })
        .collect();
    GaussianPhaseModel::from_parts(dim, epsilon, parts)
}

/// Evaluates the per-phase Gaussian densities of every frame.
///
/// With `normalize_per_frame` each frame column is divided by its sum
/// (computed stably in log space), yielding posterior-like weights under a
/// uniform class prior; otherwise raw densities are returned.
pub fn spatial_prior(
    model: &GaussianPhaseModel,
    features: &FeatureSequence,
    normalize_per_frame: bool,
) -> Result<PriorMatrix> {
    if features.dim() != model.dim() {
        return Err(Error::DimensionMismatch {
            context: "feature dimension vs. Gaussian model dimension",
        });
    }
    let num_phases = model.num_phases();
    let frames = features.frames();
    let mut log_u = vec![0.0; num_phases * frames];
    for s in 0..num_phases {
        for t in 0..frames {
            log_u[s * frames + t] = model.log_density(s, features.row(t));
        }
    }
    let mut values = vec![0.0; num_phases * frames];
    if normalize_per_frame {
        for t in 0..frames {
            let max = (0..num_phases)
                .map(|s| log_u[s * frames + t])
                .fold(f64::NEG_INFINITY, f64::max);
            let mut total = 0.0;
            for s in 0..num_phases {
                let e = (log_u[s * frames + t] - max).exp();
                values[s * frames + t] = e;
                total += e;
            }
            for s in 0..num_phases {
                values[s * frames + t] /= total;
            }
        }
    } else {
        for (v, lu) in values.iter_mut().zip(&log_u) {
            *v = lu.exp();
        }
    }
    PriorMatrix::new(values, num_phases, frames)
}

/// Time-normalized phase frequencies: an `n_x x S` matrix whose time-bin
/// rows each sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct TemporalHistogram {
    n_x: usize,
    num_phases: usize,
    /// Row-major by time-bin.
    bins: Vec<f64>,
}

impl TemporalHistogram {
    /// Wraps stored bin values, checking shape, nonnegativity, and that
    /// every time-bin row sums to one.
    pub fn from_bins(bins: Vec<f64>, n_x: usize, num_phases: usize) -> Result<Self> {
        if n_x == 0 || num_phases == 0 || bins.len() != n_x * num_phases {
            return Err(Error::ShapeMismatch {
                expected: n_x * num_phases,
                got: bins.len(),
            });
        }
        if bins.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidConfig("histogram entries must be >= 0"));
        }
        for i in 0..n_x {
            let sum: f64 = bins[i * num_phases..(i + 1) * num_phases].iter().sum();
            if (sum - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidConfig("histogram time-bins must sum to 1"));
            }
        }
        Ok(Self {
            n_x,
            num_phases,
            bins,
        })
    }

    pub fn n_x(&self) -> usize {
        self.n_x
    }

    pub fn num_phases(&self) -> usize {
        self.num_phases
    }

    /// Phase distribution of time-bin `i`.
    pub fn bin_row(&self, i: usize) -> &[f64] {
        &self.bins[i * self.num_phases..(i + 1) * self.num_phases]
    }

    pub fn bins(&self) -> &[f64] {
        &self.bins
    }

    /// Largest bin value of `phase` across time-bins.
    pub fn max_of_phase(&self, phase: usize) -> f64 {
        (0..self.n_x)
            .map(|i| self.bins[i * self.num_phases + phase])
            .fold(0.0, f64::max)
    }
}

/// Time-bin of frame `t` in a `frames`-long video, proportional quantization.
fn time_bin(t: usize, frames: usize, n_x: usize) -> usize {
    ((t * n_x) / frames).min(n_x - 1)
}

/// Builds the averaged, per-bin-normalized phase histogram of a dataset.
///
/// The number of time-bins equals the length of the shortest video. Each
/// video contributes raw per-bin phase counts; counts are averaged across
/// videos and every time-bin is then normalized to sum one.
pub fn fit_histogram(
    label_sequences: &[LabelSequence],
    num_phases: usize,
) -> Result<TemporalHistogram> {
    if label_sequences.is_empty() || num_phases == 0 {
        return Err(Error::EmptyDataset);
    }
    for labels in label_sequences {
        if let Some((frame, &label)) = labels
            .labels()
            .iter()
            .enumerate()
            .find(|(_, &l)| l >= num_phases)
        {
            return Err(Error::LabelOutOfRange {
                frame,
                label,
                num_phases,
            });
        }
    }
    let n_x = label_sequences.iter().map(LabelSequence::len).min().unwrap();
    let mut bins = vec![0.0; n_x * num_phases];
    for labels in label_sequences {
        let frames = labels.len();
        for (t, &s) in labels.labels().iter().enumerate() {
            bins[time_bin(t, frames, n_x) * num_phases + s] += 1.0;
        }
    }
    let n_videos = label_sequences.len() as f64;
    for v in bins.iter_mut() {
        *v /= n_videos;
    }
    for i in 0..n_x {
        let row = &mut bins[i * num_phases..(i + 1) * num_phases];
        let sum: f64 = row.iter().sum();
        for v in row.iter_mut() {
            *v /= sum;
        }
    }
    TemporalHistogram::from_bins(bins, n_x, num_phases)
}

/// Binary temporal prior: frame `t` admits phase `s` iff its time-bin value
/// reaches the per-phase threshold `alpha * max_i H[i][s]`.
pub fn temporal_prior(
    hist: &TemporalHistogram,
    frames: usize,
    alpha: f64,
) -> Result<PriorMatrix> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidHyperparameter {
            name: "alpha",
            value: alpha,
        });
    }
    if frames == 0 {
        return Err(Error::EmptyLabels);
    }
    let num_phases = hist.num_phases();
    let thresholds: Vec<f64> = (0..num_phases)
        .map(|s| alpha * hist.max_of_phase(s))
        .collect();
    let mut values = vec![0.0; num_phases * frames];
    for t in 0..frames {
        let row = hist.bin_row(time_bin(t, frames, hist.n_x()));
        for s in 0..num_phases {
            if row[s] >= thresholds[s] {
                values[s * frames + t] = 1.0;
            }
        }
    }
    PriorMatrix::new(values, num_phases, frames)
}

/// Complete few-shot prior model: Gaussians, histogram, and the binarization
/// threshold coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct FewShotModel {
    gaussians: GaussianPhaseModel,
    histogram: TemporalHistogram,
    alpha: f64,
}

impl FewShotModel {
    pub fn new(
        gaussians: GaussianPhaseModel,
        histogram: TemporalHistogram,
        alpha: f64,
    ) -> Result<Self> {
        if gaussians.num_phases() != histogram.num_phases() {
            return Err(Error::DimensionMismatch {
                context: "Gaussian phase count vs. histogram phase count",
            });
        }
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidHyperparameter {
                name: "alpha",
                value: alpha,
            });
        }
        Ok(Self {
            gaussians,
            histogram,
            alpha,
        })
    }

    pub fn gaussians(&self) -> &GaussianPhaseModel {
        &self.gaussians
    }

    pub fn histogram(&self) -> &TemporalHistogram {
        &self.histogram
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn num_phases(&self) -> usize {
        self.gaussians.num_phases()
    }
}

/// Spatial-temporal prior `z = u * v` (elementwise) for one test video,
/// using per-frame-normalized spatial densities.
pub fn fewshot_prior(model: &FewShotModel, features: &FeatureSequence) -> Result<PriorMatrix> {
    fewshot_prior_with(model, features, true)
}

/// As [`fewshot_prior`], with explicit control over spatial normalization.
pub fn fewshot_prior_with(
    model: &FewShotModel,
    features: &FeatureSequence,
    normalize_per_frame: bool,
) -> Result<PriorMatrix> {
    let u = spatial_prior(model.gaussians(), features, normalize_per_frame)?;
    let v = temporal_prior(model.histogram(), features.frames(), model.alpha())?;
    u.hadamard(&v)
}
