//! Per-phase linear solves `(L + gamma*I) x = gamma * z`, the per-frame
//! sum-to-one correction, and arg-max decoding.
//!
//! `L + gamma*I` is strictly diagonally dominant and symmetric positive
//! definite for any `gamma > 0`, so a direct tridiagonal factorization
//! (Thomas elimination) is unconditionally stable and O(T) per phase. The
//! factorization is computed once and reused across the S phase solves.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::TridiagonalMatrix;
use crate::types::{LabelSequence, PriorMatrix, ProbabilityMatrix};

/// LDL^T factorization of `L + gamma*I` for a tridiagonal `L`.
struct ShiftedFactor {
    /// Pivots of the eliminated diagonal.
    pivot: Vec<f64>,
    /// Row multipliers `off[i] / pivot[i]`.
    mult: Vec<f64>,
    /// Original off-diagonal, needed in back substitution.
    off: Vec<f64>,
}

impl ShiftedFactor {
    fn new(laplacian: &TridiagonalMatrix, gamma: f64) -> Self {
        let n = laplacian.dim();
        let diag = laplacian.diag();
        let off = laplacian.off();
        let mut pivot = vec![0.0; n];
        let mut mult = vec![0.0; n.saturating_sub(1)];
        pivot[0] = diag[0] + gamma;
        for i in 1..n {
            let m = off[i - 1] / pivot[i - 1];
            mult[i - 1] = m;
            pivot[i] = diag[i] + gamma - m * off[i - 1];
            // Strict diagonal dominance keeps every pivot >= gamma.
            debug_assert!(pivot[i] > 0.0);
        }
        Self {
            pivot,
            mult,
            off: off.to_vec(),
        }
    }

    /// Solves `(L + gamma*I) x = b`.
    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.pivot.len();
        let mut x = vec![0.0; n];
        x[0] = b[0];
        for i in 1..n {
            x[i] = b[i] - self.mult[i - 1] * x[i - 1];
        }
        x[n - 1] /= self.pivot[n - 1];
        for i in (0..n - 1).rev() {
            x[i] = (x[i] - self.off[i] * x[i + 1]) / self.pivot[i];
        }
        x
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::InvalidHyperparameter {
            name: "gamma",
            value: gamma,
        });
    }
    Ok(())
}

fn check_prior_row(row: &[f64]) -> Result<()> {
    if let Some(t) = row.iter().position(|v| !v.is_finite() || *v < 0.0) {
        return Err(Error::InvalidPrior { phase: 0, frame: t });
    }
    Ok(())
}

/// Solves `(L + gamma*I) x = gamma * z` for one phase.
pub fn solve_phase(
    laplacian: &TridiagonalMatrix,
    gamma: f64,
    prior_row: &[f64],
) -> Result<Vec<f64>> {
    check_gamma(gamma)?;
    if prior_row.len() != laplacian.dim() {
        return Err(Error::DimensionMismatch {
            context: "prior row length vs. Laplacian dimension",
        });
    }
    check_prior_row(prior_row)?;
    let factor = ShiftedFactor::new(laplacian, gamma);
    let rhs: Vec<f64> = prior_row.iter().map(|z| gamma * z).collect();
    Ok(factor.solve(&rhs))
}

/// Solves all S phases against a shared factorization.
///
/// Row `s` of the result equals `solve_phase(laplacian, gamma, priors.row(s))`
/// bit for bit; phases are independent.
pub fn solve_all_phases(
    laplacian: &TridiagonalMatrix,
    gamma: f64,
    priors: &PriorMatrix,
) -> Result<ProbabilityMatrix> {
    check_gamma(gamma)?;
    let frames = laplacian.dim();
    if priors.frames() != frames {
        return Err(Error::DimensionMismatch {
            context: "prior frame count vs. Laplacian dimension",
        });
    }
    let factor = ShiftedFactor::new(laplacian, gamma);
    let num_phases = priors.num_phases();
    let mut values = Vec::with_capacity(num_phases * frames);
    for s in 0..num_phases {
        let rhs: Vec<f64> = priors.row(s).iter().map(|z| gamma * z).collect();
        values.extend_from_slice(&factor.solve(&rhs));
    }
    Ok(ProbabilityMatrix::from_solver(
        values, num_phases, frames, false,
    ))
}

/// Adds the per-frame constant `mu_t = (1 - sum_s x_t^s) / S` to every phase
/// so each frame column sums to one.
///
/// Entries may become negative; only the sum is restored. Adding one constant
/// per column leaves the per-frame arg-max unchanged.
pub fn apply_correction(probs: ProbabilityMatrix) -> Result<ProbabilityMatrix> {
    if probs.corrected() {
        return Err(Error::AlreadyCorrected);
    }
    let num_phases = probs.num_phases();
    let frames = probs.frames();
    let mut values = probs.values().to_vec();
    for t in 0..frames {
        let sum: f64 = (0..num_phases).map(|s| values[s * frames + t]).sum();
        let mu = (1.0 - sum) / num_phases as f64;
        for s in 0..num_phases {
            values[s * frames + t] += mu;
        }
    }
    Ok(ProbabilityMatrix::from_solver(
        values, num_phases, frames, true,
    ))
}

/// Per-frame arg-max over phases; ties go to the smallest phase index.
pub fn decode(probs: &ProbabilityMatrix) -> LabelSequence {
    let frames = probs.frames();
    let num_phases = probs.num_phases();
    let values = probs.values();
    let mut labels = Vec::with_capacity(frames);
    for t in 0..frames {
        let mut best = 0;
        let mut best_value = values[t];
        for s in 1..num_phases {
            let v = values[s * frames + t];
            if v > best_value {
                best = s;
                best_value = v;
            }
        }
        labels.push(best);
    }
    LabelSequence::new(labels, num_phases).expect("decoded labels are in range by construction")
}
