//! Bandwidth and training configuration.

use crate::bandwidth;
use crate::dataset::Dataset;
use crate::error::{Error, Result};

/// Default tolerance factor for the mean/median criteria: sqrt(2) * 1e-6.
pub const DEFAULT_DELTA: f64 = std::f64::consts::SQRT_2 * 1e-6;

/// Default pairwise-KKT tolerance for the dual solver.
pub const DEFAULT_KKT_TOLERANCE: f64 = 1e-6;

/// How the Gaussian bandwidth is chosen at training time.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Criterion {
    /// s = sqrt(mean squared pairwise distance / ln((N-1)/delta^2)).
    Mean,
    /// s = median pairwise distance / sqrt(ln((N-1)/delta^2)).
    Median,
    /// s = median pairwise distance / sqrt(2).
    Median2,
    /// Caller-supplied bandwidth.
    Fixed,
}

impl Criterion {
    pub fn name(self) -> &'static str {
        match self {
            Criterion::Mean => "mean",
            Criterion::Median => "median",
            Criterion::Median2 => "median2",
            Criterion::Fixed => "fixed",
        }
    }
}

/// Bandwidth selection settings: criterion, tolerance factor delta, and the
/// sampling controls for the approximate median.
#[derive(Debug, Clone, PartialEq)]
pub struct BandwidthConfig {
    pub criterion: Criterion,
    pub delta: f64,
    pub fixed_value: Option<f64>,
    /// Subsample size for the approximate median criterion. `None` means
    /// exact up to [`bandwidth::EXACT_MEDIAN_LIMIT`] rows, then automatic
    /// subsampling with [`bandwidth::DEFAULT_MEDIAN_SAMPLE`].
    pub median_sample_size: Option<usize>,
    pub seed: Option<u64>,
}

impl BandwidthConfig {
    pub fn mean() -> Self {
        Self::with_criterion(Criterion::Mean)
    }

    pub fn median() -> Self {
        Self::with_criterion(Criterion::Median)
    }

    pub fn median2() -> Self {
        Self::with_criterion(Criterion::Median2)
    }

    pub fn fixed(s: f64) -> Self {
        Self {
            fixed_value: Some(s),
            ..Self::with_criterion(Criterion::Fixed)
        }
    }

    fn with_criterion(criterion: Criterion) -> Self {
        Self {
            criterion,
            delta: DEFAULT_DELTA,
            fixed_value: None,
            median_sample_size: None,
            seed: None,
        }
    }

    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = delta;
        self
    }

    pub fn with_sample(mut self, sample: Option<usize>) -> Self {
        self.median_sample_size = sample;
        self
    }

    pub fn with_seed(mut self, seed: Option<u64>) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::BadConfig(format!(
                "delta must lie in (0, 1), got {}",
                self.delta
            )));
        }
        if self.criterion == Criterion::Fixed {
            match self.fixed_value {
                Some(s) if s > 0.0 && s.is_finite() => {}
                other => {
                    return Err(Error::BadConfig(format!(
                        "fixed criterion requires a positive bandwidth, got {other:?}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Computes the bandwidth this configuration selects for `data`.
    ///
    /// The mean criterion switches to the weighted formula when the dataset
    /// carries repeat counts; with all weights equal the two agree exactly.
    pub fn resolve(&self, data: &Dataset) -> Result<f64> {
        self.validate()?;
        match self.criterion {
            Criterion::Mean => {
                if data.weights().is_some() {
                    bandwidth::weighted_mean_criterion(data, self.delta)
                } else {
                    bandwidth::mean_criterion(data, self.delta)
                }
            }
            Criterion::Median => {
                bandwidth::median_criterion(data, self.delta, self.median_sample_size, self.seed)
            }
            Criterion::Median2 => bandwidth::median2_criterion(data),
            Criterion::Fixed => Ok(self.fixed_value.expect("validated above")),
        }
    }
}

/// Training settings for an SVDD model.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    /// Expected outlier fraction f in (0, 1]; the box bound is C = 1/(N f).
    pub outlier_fraction: f64,
    pub kkt_tolerance: f64,
    /// Pair-update budget for the solver; `None` means 100 * N.
    pub max_iterations: Option<usize>,
    pub bandwidth: BandwidthConfig,
}

impl TrainConfig {
    pub fn new(outlier_fraction: f64, bandwidth: BandwidthConfig) -> Self {
        Self {
            outlier_fraction,
            kkt_tolerance: DEFAULT_KKT_TOLERANCE,
            max_iterations: None,
            bandwidth,
        }
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.kkt_tolerance = tol;
        self
    }

    pub fn with_max_iterations(mut self, max_iter: Option<usize>) -> Self {
        self.max_iterations = max_iter;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.outlier_fraction > 0.0 && self.outlier_fraction <= 1.0) {
            return Err(Error::BadConfig(format!(
                "outlier fraction must lie in (0, 1], got {}",
                self.outlier_fraction
            )));
        }
        if !(self.kkt_tolerance > 0.0 && self.kkt_tolerance.is_finite()) {
            return Err(Error::BadConfig(format!(
                "kkt tolerance must be positive, got {}",
                self.kkt_tolerance
            )));
        }
        if self.max_iterations == Some(0) {
            return Err(Error::BadConfig("max iterations must be positive".into()));
        }
        self.bandwidth.validate()
    }
}
