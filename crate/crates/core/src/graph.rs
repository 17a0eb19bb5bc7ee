//! Chain graph over consecutive frames: edge weights, degrees, and the
//! tridiagonal graph Laplacian.

use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::types::FeatureSequence;

/// How cosine similarity maps to an edge weight.
///
/// `Cosine` is the literal formula `w = exp(-beta * cos(f_i, f_j))`, which
/// assigns *smaller* weights to more similar neighbors. `Distance` uses the
/// cosine distance instead, `w = exp(-beta * (1 - cos(f_i, f_j)))`, so that
/// similar neighbors are strongly coupled — the usual random-walker
/// semantics. Both are exposed; `Cosine` is the default.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WeightConvention {
    #[default]
    Cosine,
    Distance,
}

/// Per-frame path graph: `T-1` positive edge weights plus vertex degrees.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainGraph {
    edge_weights: Vec<f64>,
    degrees: Vec<f64>,
}

impl ChainGraph {
    /// Builds the graph from consecutive-frame cosine similarities.
    pub fn from_features(
        features: &FeatureSequence,
        beta: f64,
        convention: WeightConvention,
    ) -> Result<Self> {
        Self::from_weights(edge_weights(features, beta, convention)?)
    }

    /// Wraps precomputed edge weights, checking positivity.
    pub fn from_weights(edge_weights: Vec<f64>) -> Result<Self> {
        if edge_weights.is_empty() {
            return Err(Error::TooShort(1));
        }
        validate_weights(&edge_weights)?;
        let degrees = degrees_of(&edge_weights);
        Ok(Self {
            edge_weights,
            degrees,
        })
    }

    pub fn frames(&self) -> usize {
        self.edge_weights.len() + 1
    }

    /// Weight of the edge between frames `i` and `i+1`.
    pub fn edge_weights(&self) -> &[f64] {
        &self.edge_weights
    }

    pub fn degrees(&self) -> &[f64] {
        &self.degrees
    }

    /// The graph Laplacian `L = D - W` of this chain.
    pub fn laplacian(&self) -> TridiagonalMatrix {
        TridiagonalMatrix {
            diag: self.degrees.clone(),
            off: self.edge_weights.iter().map(|w| -w).collect(),
        }
    }
}

/// Symmetric tridiagonal matrix: main diagonal plus one (shared) off-diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalMatrix {
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl TridiagonalMatrix {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    /// Sub-/super-diagonal (the matrix is symmetric).
    pub fn off(&self) -> &[f64] {
        &self.off
    }

    /// Matrix-vector product.
    pub fn mul(&self, x: &[f64]) -> Result<Vec<f64>> {
        let n = self.dim();
        if x.len() != n {
            return Err(Error::DimensionMismatch {
                context: "tridiagonal matvec operand length",
            });
        }
        let mut y = vec![0.0; n];
        for i in 0..n {
            let mut acc = self.diag[i] * x[i];
            if i > 0 {
                acc += self.off[i - 1] * x[i - 1];
            }
            if i + 1 < n {
                acc += self.off[i] * x[i + 1];
            }
            y[i] = acc;
        }
        Ok(y)
    }
}

/// Cosine-derived weights of the `T-1` consecutive-frame edges.
///
/// All outputs are finite and strictly positive for finite `beta`.
pub fn edge_weights(
    features: &FeatureSequence,
    beta: f64,
    convention: WeightConvention,
) -> Result<Vec<f64>> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::InvalidHyperparameter {
            name: "beta",
            value: beta,
        });
    }
    let t = features.frames();
    let norms: Vec<f64> = (0..t)
        .map(|i| features.row(i).iter().map(|v| v * v).sum::<f64>().sqrt())
        .collect();
    let mut weights = Vec::with_capacity(t - 1);
    for i in 0..t - 1 {
        let a = features.row(i);
        let b = features.row(i + 1);
        let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
        let cos = dot / (norms[i] * norms[i + 1]);
        let exponent = match convention {
            WeightConvention::Cosine => -beta * cos,
            WeightConvention::Distance => -beta * (1.0 - cos),
        };
        weights.push(exponent.exp());
    }
    Ok(weights)
}

/// Assembles the tridiagonal Laplacian from positive edge weights.
///
/// `weights.len() + 1` is the number of frames; an empty slice yields the
/// 1x1 zero Laplacian of a single-vertex graph.
pub fn build_laplacian(weights: &[f64]) -> Result<TridiagonalMatrix> {
    validate_weights(weights)?;
    Ok(TridiagonalMatrix {
        diag: degrees_of(weights),
        off: weights.iter().map(|w| -w).collect(),
    })
}

fn validate_weights(weights: &[f64]) -> Result<()> {
    if let Some(i) = weights.iter().position(|w| !(*w > 0.0) || !w.is_finite()) {
        return Err(Error::NonPositiveWeight(i));
    }
    Ok(())
}

fn degrees_of(weights: &[f64]) -> Vec<f64> {
    let t = weights.len() + 1;
    let mut degrees = vec![0.0; t];
    for (i, w) in weights.iter().enumerate() {
        degrees[i] += w;
        degrees[i + 1] += w;
    }
    degrees
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn features_with_cosines(cosines: &[f64]) -> FeatureSequence {
        // Chain of 2-d unit vectors with prescribed consecutive cosines.
        let mut angle = 0.0_f64;
        let mut rows = vec![vec![1.0, 0.0]];
        for &c in cosines {
            angle += c.acos();
            rows.push(vec![angle.cos(), angle.sin()]);
        }
        FeatureSequence::from_rows(rows).unwrap()
    }

    #[test]
    fn identical_vectors_cosine_convention() {
        let f = FeatureSequence::from_rows(vec![vec![3.0, 4.0], vec![3.0, 4.0]]).unwrap();
        let w = edge_weights(&f, 2.0, WeightConvention::Cosine).unwrap();
        assert!((w[0] - (-2.0_f64).exp()).abs() < 1e-15);
        assert!((w[0] - 0.1353352832366127).abs() < 1e-12);
    }

    #[test]
    fn orthogonal_vectors_cosine_convention() {
        let f = FeatureSequence::from_rows(vec![vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        for beta in [0.5, 2.0, 10.0] {
            let w = edge_weights(&f, beta, WeightConvention::Cosine).unwrap();
            assert_eq!(w[0], 1.0);
        }
    }

    #[test]
    fn identical_vectors_distance_convention() {
        let f = FeatureSequence::from_rows(vec![vec![1.0, 2.0], vec![1.0, 2.0]]).unwrap();
        let w = edge_weights(&f, 2.0, WeightConvention::Distance).unwrap();
        assert_eq!(w[0], 1.0);
    }

    #[test]
    fn weights_strictly_positive_both_conventions() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let rows: Vec<Vec<f64>> = (0..100)
            .map(|_| (0..5).map(|_| rng.random_range(-1.0..1.0)).collect())
            .collect();
        let f = FeatureSequence::from_rows(rows).unwrap();
        for conv in [WeightConvention::Cosine, WeightConvention::Distance] {
            for beta in [1.0, 5.0, 10.0] {
                let w = edge_weights(&f, beta, conv).unwrap();
                assert!(w.iter().all(|v| *v > 0.0 && v.is_finite()));
            }
        }
    }

    #[test]
    fn distance_convention_monotone_in_cosine() {
        let f = features_with_cosines(&[0.1, 0.5, 0.9]);
        let w = edge_weights(&f, 3.0, WeightConvention::Distance).unwrap();
        assert!(w[0] < w[1] && w[1] < w[2]);
    }

    #[test]
    fn laplacian_from_two_weights() {
        let lap = build_laplacian(&[1.0, 2.0]).unwrap();
        assert_eq!(lap.diag(), &[1.0, 3.0, 2.0]);
        assert_eq!(lap.off(), &[-1.0, -2.0]);
    }

    #[test]
    fn laplacian_single_edge() {
        let w = 0.37;
        let lap = build_laplacian(&[w]).unwrap();
        assert_eq!(lap.diag(), &[w, w]);
        assert_eq!(lap.off(), &[-w]);
    }

    #[test]
    fn laplacian_rejects_nonpositive_weight() {
        assert_eq!(
            build_laplacian(&[1.0, 0.0]).unwrap_err(),
            Error::NonPositiveWeight(1)
        );
        assert_eq!(
            build_laplacian(&[-2.0]).unwrap_err(),
            Error::NonPositiveWeight(0)
        );
    }

    #[test]
    fn laplacian_rows_sum_to_zero() {
        // Checked by assembling dense rows, independent of the degree formula.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let weights: Vec<f64> = (0..49).map(|_| rng.random_range(0.01..10.0)).collect();
        let lap = build_laplacian(&weights).unwrap();
        let n = lap.dim();
        for i in 0..n {
            let mut row = vec![0.0; n];
            row[i] = lap.diag()[i];
            if i > 0 {
                row[i - 1] = lap.off()[i - 1];
            }
            if i + 1 < n {
                row[i + 1] = lap.off()[i];
            }
            let sum: f64 = row.iter().sum();
            assert!(sum.abs() <= 1e-12, "row {i} sums to {sum}");
        }
    }

    #[test]
    fn laplacian_annihilates_constant_vector() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let weights: Vec<f64> = (0..99).map(|_| rng.random_range(0.01..5.0)).collect();
        let lap = build_laplacian(&weights).unwrap();
        let ones = vec![1.0; lap.dim()];
        let y = lap.mul(&ones).unwrap();
        assert!(y.iter().all(|v| v.abs() <= 1e-10));
    }

    #[test]
    fn laplacian_positive_semidefinite() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let weights: Vec<f64> = (0..30).map(|_| rng.random_range(0.01..5.0)).collect();
        let lap = build_laplacian(&weights).unwrap();
        for _ in 0..200 {
            let v: Vec<f64> = (0..lap.dim()).map(|_| rng.random_range(-1.0..1.0)).collect();
            let lv = lap.mul(&v).unwrap();
            let quad: f64 = v.iter().zip(&lv).map(|(a, b)| a * b).sum();
            assert!(quad >= -1e-10, "v'Lv = {quad}");
        }
    }

    #[test]
    fn chain_graph_degree_structure() {
        let g = ChainGraph::from_weights(vec![1.0, 2.0, 4.0]).unwrap();
        assert_eq!(g.frames(), 4);
        assert_eq!(g.degrees(), &[1.0, 3.0, 6.0, 4.0]);
    }
}
