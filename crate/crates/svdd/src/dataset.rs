//! Validated training/scoring data.

use ndarray::{Array2, ArrayView1};

use crate::error::{Error, Result};

/// Ground-truth mark attached to an observation, used only for evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Label {
    Inlier,
    Outlier,
}

/// An N x p matrix of observations with optional per-row repeat counts and
/// optional ground-truth labels.
///
/// All constructors validate; a `Dataset` that exists is well formed. The
/// type is immutable after construction and safe to share across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    x: Array2<f64>,
    weights: Option<Vec<u64>>,
    labels: Option<Vec<Label>>,
}

impl Dataset {
    /// Builds a dataset from row vectors, rejecting ragged or non-finite input.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptyData("no rows"));
        }
        let p = rows[0].len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != p {
                return Err(Error::RaggedRows {
                    row: i,
                    expected: p,
                    got: row.len(),
                });
            }
        }
        let n = rows.len();
        let flat: Vec<f64> = rows.into_iter().flatten().collect();
        let x = Array2::from_shape_vec((n, p), flat).expect("shape checked above");
        Self::from_array(x)
    }

    /// Builds a dataset from an already rectangular matrix.
    pub fn from_array(x: Array2<f64>) -> Result<Self> {
        if x.nrows() == 0 {
            return Err(Error::EmptyData("no rows"));
        }
        if x.ncols() == 0 {
            return Err(Error::EmptyData("no columns"));
        }
        for (i, row) in x.rows().into_iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if !v.is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(Self {
            x,
            weights: None,
            labels: None,
        })
    }

    /// Attaches repeat counts, one per row.
    pub fn with_weights(mut self, weights: Vec<u64>) -> Result<Self> {
        if weights.len() != self.n() {
            return Err(Error::BadWeights {
                row: weights.len().min(self.n()),
                value: f64::NAN,
            });
        }
        if let Some(i) = weights.iter().position(|&w| w == 0) {
            return Err(Error::BadWeights {
                row: i,
                value: 0.0,
            });
        }
        self.weights = Some(weights);
        Ok(self)
    }

    /// Attaches repeat counts given as reals, rejecting fractional or
    /// sub-unit values.
    pub fn with_weights_f64(self, weights: Vec<f64>) -> Result<Self> {
        let mut parsed = Vec::with_capacity(weights.len());
        for (i, &w) in weights.iter().enumerate() {
            if !w.is_finite() || w < 1.0 || w.fract() != 0.0 {
                return Err(Error::BadWeights { row: i, value: w });
            }
            parsed.push(w as u64);
        }
        self.with_weights(parsed)
    }

    /// Attaches ground-truth labels, one per row.
    pub fn with_labels(mut self, labels: Vec<Label>) -> Result<Self> {
        if labels.len() != self.n() {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                got: labels.len(),
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    /// Re-checks every invariant. Constructors already validate, so this is
    /// an identity pass for any live value.
    pub fn validate(&self) -> Result<()> {
        let rebuilt = Self::from_array(self.x.clone())?;
        let rebuilt = match &self.weights {
            Some(w) => rebuilt.with_weights(w.clone())?,
            None => rebuilt,
        };
        match &self.labels {
            Some(l) => {
                rebuilt.with_labels(l.clone())?;
            }
            None => {}
        }
        Ok(())
    }

    /// Number of observations.
    pub fn n(&self) -> usize {
        self.x.nrows()
    }

    /// Number of coordinates per observation.
    pub fn dim(&self) -> usize {
        self.x.ncols()
    }

    pub fn x(&self) -> &Array2<f64> {
        &self.x
    }

    pub fn row(&self, i: usize) -> ArrayView1<'_, f64> {
        self.x.row(i)
    }

    /// Row-major contiguous view of all coordinates.
    pub fn as_slice(&self) -> &[f64] {
        self.x.as_slice().expect("dataset matrices are standard layout")
    }

    pub fn weights(&self) -> Option<&[u64]> {
        self.weights.as_deref()
    }

    pub fn labels(&self) -> Option<&[Label]> {
        self.labels.as_deref()
    }

    /// Per-column minima and maxima of the observations.
    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        let p = self.dim();
        let mut min = vec![f64::INFINITY; p];
        let mut max = vec![f64::NEG_INFINITY; p];
        for row in self.x.rows() {
            for (j, &v) in row.iter().enumerate() {
                min[j] = min[j].min(v);
                max[j] = max[j].max(v);
            }
        }
        (min, max)
    }
}
