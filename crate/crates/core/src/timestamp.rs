//! Sparse timestamp supervision: indicator priors from a handful of labeled
//! frames, and the sampling helper that simulates such annotations from
//! ground truth.

use alloc::vec;
use alloc::vec::Vec;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::types::{LabelSequence, PriorMatrix, TimestampSet};

/// Builds the `S x T` indicator prior: `z[s][t] = 1` iff frame `t` carries a
/// timestamp of phase `s`, else 0.
pub fn timestamp_prior(ts: &TimestampSet, frames: usize) -> Result<PriorMatrix> {
    let num_phases = ts.num_phases();
    let mut values = vec![0.0; num_phases * frames];
    for &(frame, phase) in ts.entries() {
        if frame >= frames {
            return Err(Error::FrameOutOfRange { frame, frames });
        }
        values[phase * frames + frame] = 1.0;
    }
    PriorMatrix::new(values, num_phases, frames)
}

/// Draws up to `k` timestamp frames per phase, uniformly without replacement
/// from that phase's frames, deterministically from `seed`.
///
/// Phases with no frame in the video are skipped; their ids are returned as
/// the warning list alongside the set.
pub fn sample_timestamps(
    labels: &LabelSequence,
    k: usize,
    seed: u64,
) -> Result<(TimestampSet, Vec<usize>)> {
    if k == 0 {
        return Err(Error::InvalidHyperparameter {
            name: "k",
            value: 0.0,
        });
    }
    let num_phases = labels.num_phases();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut entries = Vec::new();
    let mut skipped = Vec::new();
    for phase in 0..num_phases {
        let frames_of_phase: Vec<usize> = labels
            .labels()
            .iter()
            .enumerate()
            .filter(|(_, &l)| l == phase)
            .map(|(t, _)| t)
            .collect();
        if frames_of_phase.is_empty() {
            skipped.push(phase);
            continue;
        }
        let take = k.min(frames_of_phase.len());
        let mut chosen: Vec<usize> = rand::seq::index::sample(&mut rng, frames_of_phase.len(), take)
            .iter()
            .map(|i| frames_of_phase[i])
            .collect();
        chosen.sort_unstable();
        entries.extend(chosen.into_iter().map(|t| (t, phase)));
    }
    Ok((TimestampSet::new(entries, num_phases)?, skipped))
}
