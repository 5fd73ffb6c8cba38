//! The trained SVDD artifact.

use ndarray::Array2;

use crate::config::Criterion;
use crate::error::{Error, Result};
use crate::kernel;

/// Duality position of a training point, derived from its coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Position {
    /// alpha = 0: strictly inside the description.
    Inside,
    /// 0 < alpha < C: on the decision surface.
    Boundary,
    /// alpha = C: outside the description.
    Outside,
}

impl Position {
    pub fn name(self) -> &'static str {
        match self {
            Position::Inside => "inside",
            Position::Boundary => "boundary",
            Position::Outside => "outside",
        }
    }
}

/// How a model was obtained; carried along for reporting and persistence.
#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    pub criterion: Criterion,
    pub delta: f64,
    pub outlier_fraction: f64,
    pub n_train: usize,
    pub converged: bool,
    pub kkt_violation: f64,
    pub iterations: usize,
    pub seed: Option<u64>,
}

/// A trained data description: the support vectors, their coefficients, the
/// bandwidth, and the squared threshold radius.
///
/// Immutable after construction; scoring is read-only and thread safe.
#[derive(Debug, Clone, PartialEq)]
pub struct SvddModel {
    support_vectors: Array2<f64>,
    alphas: Vec<f64>,
    bandwidth: f64,
    penalty: f64,
    threshold: f64,
    sv_self_term: f64,
    position_tags: Vec<Position>,
    data_min: Vec<f64>,
    data_max: Vec<f64>,
    provenance: Provenance,
}

impl SvddModel {
    /// Assembles a model from raw parts, checking the structural invariants.
    ///
    /// `position_tags` is per training point for freshly trained models and
    /// empty for models restored from disk (the tags are training
    /// diagnostics, not needed for scoring).
    #[allow(clippy::too_many_arguments)]
    pub fn from_parts(
        support_vectors: Array2<f64>,
        alphas: Vec<f64>,
        bandwidth: f64,
        penalty: f64,
        threshold: f64,
        sv_self_term: f64,
        position_tags: Vec<Position>,
        data_min: Vec<f64>,
        data_max: Vec<f64>,
        provenance: Provenance,
    ) -> Result<Self> {
        if support_vectors.nrows() == 0 || support_vectors.ncols() == 0 {
            return Err(Error::EmptyData("model has no support vectors"));
        }
        if alphas.len() != support_vectors.nrows() {
            return Err(Error::DimensionMismatch {
                expected: support_vectors.nrows(),
                got: alphas.len(),
            });
        }
        if !(bandwidth > 0.0 && bandwidth.is_finite()) {
            return Err(Error::BadBandwidth(bandwidth));
        }
        if !(penalty > 0.0) || !(threshold >= 0.0) || !threshold.is_finite() {
            return Err(Error::BadConfig(format!(
                "penalty {penalty} and threshold {threshold} must be positive and nonnegative"
            )));
        }
        if alphas.iter().any(|&a| !(a > 0.0) || a > penalty + 1e-12) {
            return Err(Error::BadConfig(
                "support vector coefficients must lie in (0, C]".into(),
            ));
        }
        if data_min.len() != support_vectors.ncols() || data_max.len() != support_vectors.ncols() {
            return Err(Error::DimensionMismatch {
                expected: support_vectors.ncols(),
                got: data_min.len(),
            });
        }
        Ok(Self {
            support_vectors,
            alphas,
            bandwidth,
            penalty,
            threshold,
            sv_self_term,
            position_tags,
            data_min,
            data_max,
            provenance,
        })
    }

    /// Squared kernel-space distance from `z` to the description center:
    /// `1 - 2 sum_i alpha_i K(x_i, z) + sum_ij alpha_i alpha_j K(x_i, x_j)`,
    /// clamped at zero from below.
    pub fn distance2(&self, z: &[f64]) -> Result<f64> {
        if z.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: z.len(),
            });
        }
        Ok(distance2_raw(
            self.sv_slice(),
            self.dim(),
            &self.alphas,
            self.bandwidth,
            self.sv_self_term,
            z,
        ))
    }

    pub fn support_vectors(&self) -> &Array2<f64> {
        &self.support_vectors
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    pub fn penalty(&self) -> f64 {
        self.penalty
    }

    /// Squared threshold radius R^2.
    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    /// Cached `sum_ij alpha_i alpha_j K(x_i, x_j)` over the support vectors.
    pub fn sv_self_term(&self) -> f64 {
        self.sv_self_term
    }

    /// Training-point duality positions; empty on models restored from disk.
    pub fn position_tags(&self) -> &[Position] {
        &self.position_tags
    }

    /// Per-column minima of the training data.
    pub fn data_min(&self) -> &[f64] {
        &self.data_min
    }

    /// Per-column maxima of the training data.
    pub fn data_max(&self) -> &[f64] {
        &self.data_max
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn dim(&self) -> usize {
        self.support_vectors.ncols()
    }

    pub fn n_support_vectors(&self) -> usize {
        self.support_vectors.nrows()
    }

    pub(crate) fn sv_slice(&self) -> &[f64] {
        self.support_vectors
            .as_slice()
            .expect("support vectors are standard layout")
    }
}

/// Scoring kernel shared by training (threshold computation) and the public
/// [`SvddModel::distance2`], so both produce bit-identical values.
pub(crate) fn distance2_raw(
    svs: &[f64],
    dim: usize,
    alphas: &[f64],
    bandwidth: f64,
    sv_self_term: f64,
    z: &[f64],
) -> f64 {
    let mut weighted = 0.0;
    for (i, &a) in alphas.iter().enumerate() {
        weighted += a * kernel::gaussian(&svs[i * dim..(i + 1) * dim], z, bandwidth);
    }
    (1.0 - 2.0 * weighted + sv_self_term).max(0.0)
}
