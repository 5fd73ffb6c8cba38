//! Unsupervised Gaussian bandwidth selection.
//!
//! The mean criterion picks the smallest s for which the kernel matrix is
//! guaranteed to sit at Frobenius distance at least `delta * sqrt(N)` from
//! the identity; it reduces to a closed form in the column variances and
//! costs O(Np). The median criterion replaces the mean squared pairwise
//! distance with the median and needs the actual distance multiset, so it
//! supports seeded subsampling for large N. The median2 criterion is the
//! classical `median / sqrt(2)` baseline.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dataset::Dataset;
use crate::error::{Error, Result};

/// Largest N for which the median criterion enumerates all C(N,2) pairs
/// by default (about 2M distances).
pub const EXACT_MEDIAN_LIMIT: usize = 2000;

/// Subsample size used automatically above [`EXACT_MEDIAN_LIMIT`].
pub const DEFAULT_MEDIAN_SAMPLE: usize = 2000;

/// Seed used for automatic median subsampling when the caller gives none.
pub const DEFAULT_MEDIAN_SEED: u64 = 0;

/// Summary statistics of the pairwise-distance multiset, computed by brute
/// force. Intended for diagnostics on moderate N; the criteria below use
/// cheaper paths.
#[derive(Debug, Clone, PartialEq)]
pub struct PairwiseStats {
    /// Mean of squared pairwise distances.
    pub mean_sq_dist: f64,
    /// Median of pairwise distances.
    pub median_dist: f64,
    /// Number of unordered pairs, C(N,2).
    pub n_pairs: usize,
}

impl PairwiseStats {
    /// O(N^2 p) enumeration of all pairs.
    pub fn exact(data: &Dataset) -> Result<Self> {
        let n = data.n();
        require_at_least(2, n)?;
        let mut distances = all_pairwise_distances(data, None);
        let n_pairs = distances.len();
        let mean_sq_dist = distances.iter().map(|d| d * d).sum::<f64>() / n_pairs as f64;
        let median_dist = median_in_place(&mut distances);
        Ok(Self {
            mean_sq_dist,
            median_dist,
            n_pairs,
        })
    }
}

/// Mean squared pairwise distance via the variance identity
/// `D^2 = 2N/(N-1) * sum_j var_j`, one pass over the data.
///
/// `var_j` are population column variances (divisor N). Matches the
/// O(N^2) pairwise mean exactly up to rounding.
pub fn mean_sq_pairwise_closed_form(data: &Dataset) -> Result<f64> {
    let n = data.n();
    require_at_least(2, n)?;
    let variance_sum = column_variance_sum(data);
    Ok(2.0 * n as f64 / (n as f64 - 1.0) * variance_sum)
}

/// Mean criterion: `s = sqrt(D^2 / ln((N-1)/delta^2))` with `D^2` the mean
/// squared pairwise distance.
pub fn mean_criterion(data: &Dataset, delta: f64) -> Result<f64> {
    let mean_sq = mean_sq_pairwise_closed_form(data)?;
    if mean_sq <= 0.0 {
        return Err(Error::DegenerateData("all observations are identical"));
    }
    let ln = log_term(data.n(), delta)?;
    Ok((mean_sq / ln).sqrt())
}

/// Median criterion: `s = median pairwise distance / sqrt(ln((N-1)/delta^2))`.
///
/// The median is exact over all C(N,2) pairs when `sample` is absent and
/// N <= [`EXACT_MEDIAN_LIMIT`], or when `sample == N`. Otherwise it is taken
/// over a seeded subsample of the rows. The log term always uses the full N.
pub fn median_criterion(
    data: &Dataset,
    delta: f64,
    sample: Option<usize>,
    seed: Option<u64>,
) -> Result<f64> {
    let n = data.n();
    require_at_least(2, n)?;
    if let Some(m) = sample {
        if m < 2 || m > n {
            return Err(Error::BadConfig(format!(
                "median sample size must lie in [2, {n}], got {m}"
            )));
        }
    }
    let effective = match sample {
        Some(m) => Some(m).filter(|&m| m < n),
        None if n > EXACT_MEDIAN_LIMIT => Some(DEFAULT_MEDIAN_SAMPLE),
        None => None,
    };
    let median = match effective {
        None => median_pairwise_distance(data, None),
        Some(m) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.unwrap_or(DEFAULT_MEDIAN_SEED));
            let picked = rand::seq::index::sample(&mut rng, n, m).into_vec();
            median_pairwise_distance(data, Some(&picked))
        }
    };
    if median <= 0.0 {
        return Err(Error::DegenerateData("median pairwise distance is zero"));
    }
    let ln = log_term(n, delta)?;
    Ok(median / ln.sqrt())
}

/// Median2 criterion: `s = median pairwise distance / sqrt(2)`.
pub fn median2_criterion(data: &Dataset) -> Result<f64> {
    let n = data.n();
    require_at_least(2, n)?;
    let median = median_pairwise_distance(data, None);
    if median <= 0.0 {
        return Err(Error::DegenerateData("median pairwise distance is zero"));
    }
    Ok(median / std::f64::consts::SQRT_2)
}

/// Mean criterion for data with repeat counts:
/// `s = sqrt(W^2 * sum_j var_j / (Q * ln(2Q/(delta^2 M))))` with
/// `W = sum w_i`, `M = sum w_i^2`, `Q = (W^2 - M)/2` and `var_j` the
/// weighted population column variances. Equals [`mean_criterion`] when all
/// weights are equal.
pub fn weighted_mean_criterion(data: &Dataset, delta: f64) -> Result<f64> {
    check_delta(delta)?;
    let weights = data.weights().ok_or(Error::MissingWeights)?;
    let n = data.n();
    require_at_least(2, n)?;
    let p = data.dim();
    let xs = data.as_slice();

    let w_total: f64 = weights.iter().map(|&w| w as f64).sum();
    let m_total: f64 = weights.iter().map(|&w| (w as f64) * (w as f64)).sum();
    let q = (w_total * w_total - m_total) / 2.0;

    let mut means = vec![0.0; p];
    for (i, &w) in weights.iter().enumerate() {
        let row = &xs[i * p..(i + 1) * p];
        for (j, &v) in row.iter().enumerate() {
            means[j] += w as f64 * v;
        }
    }
    for mj in &mut means {
        *mj /= w_total;
    }
    let mut variance_sum = 0.0;
    for (i, &w) in weights.iter().enumerate() {
        let row = &xs[i * p..(i + 1) * p];
        for (j, &v) in row.iter().enumerate() {
            let d = v - means[j];
            variance_sum += w as f64 * d * d;
        }
    }
    variance_sum /= w_total;

    if variance_sum <= 0.0 {
        return Err(Error::DegenerateData("all observations are identical"));
    }
    let arg = 2.0 * q / (delta * delta * m_total);
    if arg <= 1.0 {
        return Err(Error::LogDomain { arg });
    }
    Ok((w_total * w_total * variance_sum / (q * arg.ln())).sqrt())
}

/// `ln((n-1)/delta^2)`, the shared denominator of the mean and median
/// criteria.
pub fn log_term(n: usize, delta: f64) -> Result<f64> {
    check_delta(delta)?;
    let arg = (n as f64 - 1.0) / (delta * delta);
    if arg <= 1.0 {
        return Err(Error::LogDomain { arg });
    }
    Ok(arg.ln())
}

fn check_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::BadConfig(format!(
            "delta must lie in (0, 1), got {delta}"
        )));
    }
    Ok(())
}

fn require_at_least(needed: usize, got: usize) -> Result<()> {
    if got < needed {
        return Err(Error::TooFewPoints { needed, got });
    }
    Ok(())
}

fn column_variance_sum(data: &Dataset) -> f64 {
    let n = data.n();
    let p = data.dim();
    let xs = data.as_slice();
    let mut means = vec![0.0; p];
    for i in 0..n {
        for j in 0..p {
            means[j] += xs[i * p + j];
        }
    }
    for mj in &mut means {
        *mj /= n as f64;
    }
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..p {
            let d = xs[i * p + j] - means[j];
            sum += d * d;
        }
    }
    sum / n as f64
}

/// Euclidean distances for all unordered pairs, by direct subtraction.
/// `rows` restricts the enumeration to a subset of row indices.
fn all_pairwise_distances(data: &Dataset, rows: Option<&[usize]>) -> Vec<f64> {
    let p = data.dim();
    let xs = data.as_slice();
    let idx: Vec<usize> = match rows {
        Some(r) => r.to_vec(),
        None => (0..data.n()).collect(),
    };
    let m = idx.len();
    let mut out = Vec::with_capacity(m * (m - 1) / 2);
    for a in 0..m {
        let ra = &xs[idx[a] * p..idx[a] * p + p];
        for b in (a + 1)..m {
            let rb = &xs[idx[b] * p..idx[b] * p + p];
            let mut sq = 0.0;
            for j in 0..p {
                let d = ra[j] - rb[j];
                sq += d * d;
            }
            out.push(sq.sqrt());
        }
    }
    out
}

fn median_pairwise_distance(data: &Dataset, rows: Option<&[usize]>) -> f64 {
    let mut distances = all_pairwise_distances(data, rows);
    median_in_place(&mut distances)
}

/// Median by selection; for an even count, the mean of the two middle order
/// statistics.
fn median_in_place(values: &mut [f64]) -> f64 {
    let m = values.len();
    assert!(m > 0, "median of an empty multiset");
    let mid = m / 2;
    let (_, upper, _) = values.select_nth_unstable_by(mid, f64::total_cmp);
    let upper = *upper;
    if m % 2 == 1 {
        upper
    } else {
        let lower = values[..mid]
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        0.5 * (lower + upper)
    }
}
