//! Evaluation: frame-wise accuracy and segmental F1 at overlap thresholds.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::types::LabelSequence;

/// A maximal constant-phase run `[start, end)` of a label sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Segment {
    pub phase: usize,
    pub start: usize,
    pub end: usize,
}

impl Segment {
    fn len(&self) -> usize {
        self.end - self.start
    }

    /// Intersection-over-union with another segment.
    fn iou(&self, other: &Segment) -> f64 {
        let inter = self.end.min(other.end).saturating_sub(self.start.max(other.start));
        let union = self.len() + other.len() - inter;
        inter as f64 / union as f64
    }
}

/// Run-length decomposition: maximal constant runs in temporal order.
pub fn segments_of(labels: &LabelSequence) -> Vec<Segment> {
    let ls = labels.labels();
    let mut segments = Vec::new();
    let mut start = 0;
    for t in 1..=ls.len() {
        if t == ls.len() || ls[t] != ls[t - 1] {
            segments.push(Segment {
                phase: ls[start],
                start,
                end: t,
            });
            start = t;
        }
    }
    segments
}

fn check_lengths(pred: &LabelSequence, gt: &LabelSequence) -> Result<()> {
    if pred.len() != gt.len() {
        return Err(Error::LengthMismatch {
            pred: pred.len(),
            gt: gt.len(),
        });
    }
    Ok(())
}

/// Fraction of frames where prediction equals ground truth.
pub fn frame_accuracy(pred: &LabelSequence, gt: &LabelSequence) -> Result<f64> {
    check_lengths(pred, gt)?;
    let correct = pred
        .labels()
        .iter()
        .zip(gt.labels())
        .filter(|(a, b)| a == b)
        .count();
    Ok(correct as f64 / pred.len() as f64)
}

/// Segmental F1 at overlap threshold `tau`, on a 0..=100 scale.
///
/// Predicted segments are processed in temporal order. Each one takes the
/// highest-IoU unconsumed ground-truth segment of the same phase; if that
/// IoU reaches `tau` the pair is a true positive and the ground-truth
/// segment is consumed, otherwise the prediction is a false positive.
/// Unconsumed ground-truth segments are false negatives.
pub fn segmental_f1(pred: &LabelSequence, gt: &LabelSequence, tau: f64) -> Result<f64> {
    check_lengths(pred, gt)?;
    if !(tau > 0.0 && tau <= 1.0) {
        return Err(Error::InvalidHyperparameter {
            name: "overlap",
            value: tau,
        });
    }
    let pred_segments = segments_of(pred);
    let gt_segments = segments_of(gt);
    let mut consumed = alloc::vec![false; gt_segments.len()];
    let mut tp = 0usize;
    for p in &pred_segments {
        let mut best_iou = -1.0;
        let mut best = None;
        for (i, g) in gt_segments.iter().enumerate() {
            if consumed[i] || g.phase != p.phase {
                continue;
            }
            let iou = p.iou(g);
            if iou > best_iou {
                best_iou = iou;
                best = Some(i);
            }
        }
        if let Some(i) = best {
            if best_iou >= tau {
                tp += 1;
                consumed[i] = true;
            }
        }
    }
    let fp = pred_segments.len() - tp;
    let fn_ = gt_segments.len() - tp;
    Ok(f1_from_counts(tp, fp, fn_))
}

pub(crate) fn f1_from_counts(tp: usize, fp: usize, fn_: usize) -> f64 {
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

/// Metrics of a single (prediction, ground-truth) pair.
#[derive(Debug, Clone, PartialEq)]
pub struct VideoMetrics {
    pub accuracy: f64,
    /// `(tau, F1)` pairs, ascending in `tau`.
    pub f1: Vec<(f64, f64)>,
}

/// Batch evaluation report: unweighted per-video means.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    /// Mean of per-video frame accuracies, in [0, 1].
    pub accuracy: f64,
    /// Mean segmental F1 per threshold, `(tau, F1)` ascending in `tau`,
    /// each F1 in [0, 100].
    pub f1: Vec<(f64, f64)>,
    pub per_video: Vec<VideoMetrics>,
}

/// Evaluates aligned prediction/ground-truth lists at the given overlap
/// thresholds, averaging per-video metrics with equal weight.
///
/// Mean F1 must be non-increasing as the threshold grows; that is asserted
/// on every call.
pub fn evaluate(
    preds: &[LabelSequence],
    gts: &[LabelSequence],
    thresholds: &[f64],
) -> Result<EvalReport> {
    if preds.is_empty() || gts.is_empty() {
        return Err(Error::EmptyEvaluation);
    }
    if preds.len() != gts.len() {
        return Err(Error::DimensionMismatch {
            context: "number of prediction vs. ground-truth sequences",
        });
    }
    let mut taus = thresholds.to_vec();
    taus.sort_by(|a, b| a.partial_cmp(b).expect("thresholds must not be NaN"));
    taus.dedup();

    let mut per_video = Vec::with_capacity(preds.len());
    for (pred, gt) in preds.iter().zip(gts) {
        let accuracy = frame_accuracy(pred, gt)?;
        let mut f1 = Vec::with_capacity(taus.len());
        for &tau in &taus {
            f1.push((tau, segmental_f1(pred, gt, tau)?));
        }
        per_video.push(VideoMetrics { accuracy, f1 });
    }

    let n = per_video.len() as f64;
    let accuracy = per_video.iter().map(|v| v.accuracy).sum::<f64>() / n;
    let f1: Vec<(f64, f64)> = taus
        .iter()
        .enumerate()
        .map(|(i, &tau)| {
            (
                tau,
                per_video.iter().map(|v| v.f1[i].1).sum::<f64>() / n,
            )
        })
        .collect();
    for pair in f1.windows(2) {
        assert!(
            pair[0].1 >= pair[1].1,
            "segmental F1 must not increase with the overlap threshold: \
             F1@{} = {} < F1@{} = {}",
            pair[0].0,
            pair[0].1,
            pair[1].0,
            pair[1].1
        );
    }
    Ok(EvalReport {
        accuracy,
        f1,
        per_video,
    })
}
