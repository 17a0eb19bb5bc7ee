//! Synthetic clustered-sequence generator and brute-force verification
//! oracles.
//!
//! Videos are ordered phase segments with Gaussian feature clusters. The
//! phase means are a dataset-level property derived from the config seed
//! alone (mirroring a fixed feature extractor), so every video of one
//! config shares them; durations, lengths and noise are per-video.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{LogNormal, StandardNormal};

use crate::error::{Error, Result};
use crate::graph::TridiagonalMatrix;
use crate::types::{FeatureSequence, LabelSequence};

/// Generator settings.
///
/// `separation` is the pairwise distance between phase means in units of the
/// per-coordinate noise std `noise_sigma`. `duration_log_sigma` is the shape
/// parameter of the log-normal phase-duration draw (0 gives equal durations).
#[derive(Debug, Clone, PartialEq)]
pub struct SynthConfig {
    pub num_phases: usize,
    pub dim: usize,
    pub num_videos: usize,
    pub len_range: (usize, usize),
    pub separation: f64,
    pub noise_sigma: f64,
    pub duration_log_sigma: f64,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            num_phases: 7,
            dim: 16,
            num_videos: 10,
            len_range: (1900, 2100),
            separation: 6.0,
            noise_sigma: 1.0,
            duration_log_sigma: 0.15,
            seed: 0,
        }
    }
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        if self.num_phases < 2 {
            return Err(Error::InvalidConfig("need at least 2 phases"));
        }
        if self.dim < 2 {
            return Err(Error::InvalidConfig("need feature dimension >= 2"));
        }
        if self.dim < self.num_phases {
            return Err(Error::InvalidConfig(
                "orthogonal mean placement needs dim >= num_phases",
            ));
        }
        if self.num_videos == 0 {
            return Err(Error::InvalidConfig("need at least one video"));
        }
        if self.len_range.0 < self.num_phases || self.len_range.1 < self.len_range.0 {
            return Err(Error::InvalidConfig(
                "length range must satisfy num_phases <= t_min <= t_max",
            ));
        }
        if !(self.separation >= 0.0) || !self.separation.is_finite() {
            return Err(Error::InvalidConfig("separation must be >= 0"));
        }
        if !(self.noise_sigma > 0.0) || !self.noise_sigma.is_finite() {
            return Err(Error::InvalidConfig("noise sigma must be > 0"));
        }
        if !(self.duration_log_sigma >= 0.0) || !self.duration_log_sigma.is_finite() {
            return Err(Error::InvalidConfig("duration log-sigma must be >= 0"));
        }
        Ok(())
    }
}

/// Dedicated RNG stream; `domain` separates dataset-level from per-video use.
fn stream(cfg_seed: u64, stream_id: u64, domain: u8) -> ChaCha8Rng {
    let mut seed = [0u8; 32];
    seed[0..8].copy_from_slice(&cfg_seed.to_le_bytes());
    seed[8..16].copy_from_slice(&stream_id.to_le_bytes());
    seed[16] = domain;
    ChaCha8Rng::from_seed(seed)
}

/// Phase means (`S x dim`, row-major): random orthonormal directions scaled
/// so every pair of means is `separation * noise_sigma` apart. Derived from
/// `cfg.seed` only.
pub fn phase_means(cfg: &SynthConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    let s = cfg.num_phases;
    let m = cfg.dim;
    let mut rng = stream(cfg.seed, 0, 1);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(s);
    while basis.len() < s {
        let mut v: Vec<f64> = (0..m).map(|_| rng.sample(StandardNormal)).collect();
        for q in &basis {
            let dot: f64 = v.iter().zip(q).map(|(a, b)| a * b).sum();
            for (vi, qi) in v.iter_mut().zip(q) {
                *vi -= dot * qi;
            }
        }
        let norm: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm < 1e-8 {
            continue; // redraw a (numerically) dependent direction
        }
        for vi in v.iter_mut() {
            *vi /= norm;
        }
        basis.push(v);
    }
    // |a*e_i - a*e_j| = a*sqrt(2) for orthonormal e, so scale by delta/sqrt(2).
    let scale = cfg.separation * cfg.noise_sigma / core::f64::consts::SQRT_2;
    let mut means = vec![0.0; s * m];
    for (i, q) in basis.iter().enumerate() {
        for (j, &qj) in q.iter().enumerate() {
            means[i * m + j] = scale * qj;
        }
    }
    Ok(means)
}

/// Splits `total` into `parts` positive integers proportional to `raw`,
/// largest remainders first.
fn proportional_durations(raw: &[f64], total: usize) -> Vec<usize> {
    let parts = raw.len();
    let sum: f64 = raw.iter().sum();
    let spare = total - parts;
    let mut durations = vec![1usize; parts];
    let mut remainders: Vec<(f64, usize)> = Vec::with_capacity(parts);
    let mut assigned = 0;
    for (i, &r) in raw.iter().enumerate() {
        let target = r / sum * spare as f64;
        let floor = target as usize;
        durations[i] += floor;
        assigned += floor;
        remainders.push((target - floor as f64, i));
    }
    remainders.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(&b.1)));
    for &(_, i) in remainders.iter().take(spare - assigned) {
        durations[i] += 1;
    }
    durations
}

/// Generates one video: phases `0..S-1` once each in order with log-normal
/// durations summing to a length drawn from `len_range`, and per-frame
/// features sampled from the phase's isotropic Gaussian.
///
/// Deterministic in `(cfg.seed, video_seed)`.
pub fn generate_video(
    cfg: &SynthConfig,
    video_seed: u64,
) -> Result<(FeatureSequence, LabelSequence)> {
    let means = phase_means(cfg)?;
    let s = cfg.num_phases;
    let m = cfg.dim;
    let mut rng = stream(cfg.seed, video_seed, 0);

    let frames = rng.random_range(cfg.len_range.0..=cfg.len_range.1);
    let raw: Vec<f64> = if cfg.duration_log_sigma > 0.0 {
        let dist = LogNormal::new(0.0, cfg.duration_log_sigma)
            .map_err(|_| Error::InvalidConfig("invalid duration distribution"))?;
        (0..s).map(|_| rng.sample(dist)).collect()
    } else {
        vec![1.0; s]
    };
    let durations = proportional_durations(&raw, frames);

    let mut labels = Vec::with_capacity(frames);
    for (phase, &d) in durations.iter().enumerate() {
        labels.extend(core::iter::repeat(phase).take(d));
    }
    let mut data = Vec::with_capacity(frames * m);
    for &phase in &labels {
        let mean = &means[phase * m..(phase + 1) * m];
        for &mu in mean {
            let noise: f64 = rng.sample(StandardNormal);
            data.push(mu + cfg.noise_sigma * noise);
        }
    }
    Ok((
        FeatureSequence::new(data, frames, m)?,
        LabelSequence::new(labels, s)?,
    ))
}

/// Generates `cfg.num_videos` videos with video seeds `0..N`.
pub fn generate_dataset(cfg: &SynthConfig) -> Result<Vec<(FeatureSequence, LabelSequence)>> {
    (0..cfg.num_videos as u64)
        .map(|v| generate_video(cfg, v))
        .collect()
}

/// Verification oracle: solves `(L + gamma*I) x = gamma * z` by dense LU
/// with partial pivoting on the assembled matrix. O(T^3); intended for
/// small systems in tests.
pub fn dense_solve_oracle(laplacian: &TridiagonalMatrix, gamma: f64, z: &[f64]) -> Vec<f64> {
    let n = laplacian.dim();
    assert_eq!(z.len(), n);
    let mut a = vec![0.0; n * n];
    for i in 0..n {
        a[i * n + i] = laplacian.diag()[i] + gamma;
        if i + 1 < n {
            a[i * n + i + 1] = laplacian.off()[i];
            a[(i + 1) * n + i] = laplacian.off()[i];
        }
    }
    let mut b: Vec<f64> = z.iter().map(|v| gamma * v).collect();

    for col in 0..n {
        let mut pivot_row = col;
        let mut pivot_abs = a[col * n + col].abs();
        for row in col + 1..n {
            let v = a[row * n + col].abs();
            if v > pivot_abs {
                pivot_abs = v;
                pivot_row = row;
            }
        }
        assert!(pivot_abs > 0.0, "singular system in dense oracle");
        if pivot_row != col {
            for j in 0..n {
                a.swap(col * n + j, pivot_row * n + j);
            }
            b.swap(col, pivot_row);
        }
        for row in col + 1..n {
            let factor = a[row * n + col] / a[col * n + col];
            if factor == 0.0 {
                continue;
            }
            a[row * n + col] = 0.0;
            for j in col + 1..n {
                a[row * n + j] -= factor * a[col * n + j];
            }
            b[row] -= factor * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut acc = b[i];
        for j in i + 1..n {
            acc -= a[i * n + j] * x[j];
        }
        x[i] = acc / a[i * n + i];
    }
    x
}

/// Verification oracle for segmental F1: segments found by naive scanning,
/// IoU by counting frames one at a time, precision/recall/F1 recomputed from
/// first principles. Same matching rule, independent code path.
pub fn f1_bruteforce_oracle(pred: &LabelSequence, gt: &LabelSequence, tau: f64) -> f64 {
    assert_eq!(pred.len(), gt.len());
    let naive_segments = |ls: &[usize]| -> Vec<(usize, usize, usize)> {
        let mut out: Vec<(usize, usize, usize)> = Vec::new();
        for (t, &l) in ls.iter().enumerate() {
            match out.last_mut() {
                Some(seg) if seg.0 == l && seg.2 == t => seg.2 = t + 1,
                _ => out.push((l, t, t + 1)),
            }
        }
        out
    };
    let p_segs = naive_segments(pred.labels());
    let g_segs = naive_segments(gt.labels());
    let frames = pred.len();

    let mut used = vec![false; g_segs.len()];
    let mut tp = 0usize;
    for &(pc, ps, pe) in &p_segs {
        let mut best_iou = -1.0;
        let mut best = None;
        for (i, &(gc, gs, ge)) in g_segs.iter().enumerate() {
            if used[i] || gc != pc {
                continue;
            }
            let mut inter = 0usize;
            let mut union = 0usize;
            for t in 0..frames {
                let in_p = t >= ps && t < pe;
                let in_g = t >= gs && t < ge;
                if in_p && in_g {
                    inter += 1;
                }
                if in_p || in_g {
                    union += 1;
                }
            }
            let iou = inter as f64 / union as f64;
            if iou > best_iou {
                best_iou = iou;
                best = Some(i);
            }
        }
        if let Some(i) = best {
            if best_iou >= tau {
                tp += 1;
                used[i] = true;
            }
        }
    }
    let fp = p_segs.len() - tp;
    let fn_ = g_segs.len() - tp;
    let precision = if tp + fp > 0 {
        tp as f64 / (tp + fp) as f64
    } else {
        0.0
    };
    let recall = if tp + fn_ > 0 {
        tp as f64 / (tp + fn_) as f64
    } else {
        0.0
    };
    if precision + recall == 0.0 {
        0.0
    } else {
        200.0 * precision * recall / (precision + recall)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_laplacian;
    use alloc::vec;

    fn small_cfg() -> SynthConfig {
        SynthConfig {
            num_phases: 3,
            dim: 4,
            num_videos: 2,
            len_range: (30, 40),
            separation: 5.0,
            noise_sigma: 1.0,
            duration_log_sigma: 0.2,
            seed: 42,
        }
    }

    #[test]
    fn config_validation() {
        assert!(SynthConfig::default().validate().is_ok());
        let mut c = small_cfg();
        c.dim = 2; // fewer dims than phases
        assert!(c.validate().is_err());
        let mut c = small_cfg();
        c.len_range = (2, 40);
        assert!(c.validate().is_err());
        let mut c = small_cfg();
        c.noise_sigma = 0.0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn means_are_equidistant() {
        let cfg = small_cfg();
        let means = phase_means(&cfg).unwrap();
        let m = cfg.dim;
        let expected = cfg.separation * cfg.noise_sigma;
        for i in 0..cfg.num_phases {
            for j in i + 1..cfg.num_phases {
                let d: f64 = (0..m)
                    .map(|k| (means[i * m + k] - means[j * m + k]).powi(2))
                    .sum::<f64>()
                    .sqrt();
                assert!((d - expected).abs() <= 1e-9, "pair ({i},{j}): {d}");
            }
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let cfg = small_cfg();
        let a = generate_video(&cfg, 3).unwrap();
        let b = generate_video(&cfg, 3).unwrap();
        assert_eq!(a, b);
        let c = generate_video(&cfg, 4).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn labels_are_monotone_and_cover_all_phases() {
        let cfg = small_cfg();
        for v in 0..5 {
            let (features, labels) = generate_video(&cfg, v).unwrap();
            assert_eq!(features.frames(), labels.len());
            let ls = labels.labels();
            assert_eq!(ls[0], 0);
            assert_eq!(*ls.last().unwrap(), cfg.num_phases - 1);
            for w in ls.windows(2) {
                assert!(w[1] == w[0] || w[1] == w[0] + 1);
            }
            let t = labels.len();
            assert!(t >= cfg.len_range.0 && t <= cfg.len_range.1);
        }
    }

    #[test]
    fn equal_durations_when_log_sigma_is_zero() {
        let mut cfg = small_cfg();
        cfg.duration_log_sigma = 0.0;
        cfg.len_range = (30, 30);
        let (_, labels) = generate_video(&cfg, 0).unwrap();
        for phase in 0..3 {
            let count = labels.labels().iter().filter(|&&l| l == phase).count();
            assert_eq!(count, 10);
        }
    }

    #[test]
    fn tight_length_budget_still_covers_phases() {
        let mut cfg = small_cfg();
        cfg.len_range = (3, 3);
        cfg.duration_log_sigma = 1.5;
        for v in 0..20 {
            let (_, labels) = generate_video(&cfg, v).unwrap();
            assert_eq!(labels.len(), 3);
            assert_eq!(labels.labels(), &[0, 1, 2]);
        }
    }

    #[test]
    fn huge_separation_separates_consecutive_cosines() {
        let mut cfg = small_cfg();
        cfg.num_phases = 2;
        cfg.separation = 100.0;
        cfg.len_range = (10, 10);
        let (features, labels) = generate_video(&cfg, 0).unwrap();
        let cos = |a: &[f64], b: &[f64]| -> f64 {
            let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
            let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
            let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
            dot / (na * nb)
        };
        for t in 0..9 {
            let c = cos(features.row(t), features.row(t + 1));
            if labels.labels()[t] == labels.labels()[t + 1] {
                assert!(c > 0.9, "within-phase cosine {c}");
            } else {
                assert!(c < 0.5, "cross-boundary cosine {c}");
            }
        }
    }

    #[test]
    fn dense_oracle_scalar_system() {
        // Empty weight list: the 1x1 zero Laplacian of a single vertex.
        let lap = build_laplacian(&[]).unwrap();
        let x = dense_solve_oracle(&lap, 2.5, &[0.7]);
        assert_eq!(x, vec![0.7]);
    }

    #[test]
    fn dense_oracle_constant_rhs() {
        let lap = build_laplacian(&[1.0, 3.0, 0.5]).unwrap();
        let x = dense_solve_oracle(&lap, 1e-2, &[2.0; 4]);
        for v in x {
            assert!((v - 2.0).abs() <= 1e-10);
        }
    }

    #[test]
    fn bruteforce_f1_basics() {
        let gt = LabelSequence::new(vec![0, 0, 1, 1], 2).unwrap();
        assert_eq!(f1_bruteforce_oracle(&gt, &gt, 0.5), 100.0);
        let pred = LabelSequence::new(vec![1, 1, 0, 0], 2).unwrap();
        // Both segments exist in both sequences but never overlap.
        assert_eq!(f1_bruteforce_oracle(&pred, &gt, 0.5), 0.0);
    }

    #[test]
    fn bruteforce_f1_worked_example() {
        let pred = LabelSequence::new(vec![0, 0, 0, 1, 1, 1, 1, 1, 1, 1], 2).unwrap();
        let gt = LabelSequence::new(vec![0, 0, 0, 0, 0, 1, 1, 1, 1, 1], 2).unwrap();
        assert_eq!(f1_bruteforce_oracle(&pred, &gt, 0.5), 100.0);
        assert_eq!(f1_bruteforce_oracle(&pred, &gt, 0.7), 50.0);
    }
}
