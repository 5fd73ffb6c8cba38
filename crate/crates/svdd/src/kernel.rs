//! Gaussian kernel evaluation and dense kernel matrices.

use ndarray::Array2;
use rayon::prelude::*;

use crate::dataset::Dataset;
use crate::error::{Error, Result};

/// Largest N for which a dense kernel matrix is materialized.
pub const MAX_KERNEL_ROWS: usize = 20_000;

/// Squared Euclidean distance by direct subtraction.
#[inline]
pub fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut sq = 0.0;
    for (x, y) in a.iter().zip(b) {
        let d = x - y;
        sq += d * d;
    }
    sq
}

/// `K(a, b) = exp(-||a - b||^2 / (2 s^2))`.
#[inline]
pub fn gaussian(a: &[f64], b: &[f64], s: f64) -> f64 {
    (-squared_distance(a, b) / (2.0 * s * s)).exp()
}

/// Dense N x N Gaussian kernel matrix with an exact unit diagonal.
///
/// Rows are filled in parallel; the output is identical regardless of the
/// thread count.
pub fn kernel_matrix(data: &Dataset, s: f64) -> Result<Array2<f64>> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::BadBandwidth(s));
    }
    let n = data.n();
    if n > MAX_KERNEL_ROWS {
        return Err(Error::KernelTooLarge {
            n,
            max: MAX_KERNEL_ROWS,
        });
    }
    let p = data.dim();
    let xs = data.as_slice();
    let mut k = Array2::<f64>::zeros((n, n));
    let flat = k.as_slice_mut().expect("freshly allocated matrix");
    flat.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
        let xi = &xs[i * p..(i + 1) * p];
        for (j, out) in row.iter_mut().enumerate() {
            if i == j {
                *out = 1.0;
            } else {
                *out = gaussian(xi, &xs[j * p..(j + 1) * p], s);
            }
        }
    });
    Ok(k)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_point_kernel_is_identity() {
        let d = Dataset::from_rows(vec![vec![5.0, -2.0]]).unwrap();
        let k = kernel_matrix(&d, 0.37).unwrap();
        assert_eq!(k.shape(), &[1, 1]);
        assert_eq!(k[(0, 0)], 1.0);
    }

    #[test]
    fn unit_distance_off_diagonal() {
        let d = Dataset::from_rows(vec![vec![0.0], vec![1.0]]).unwrap();
        let k = kernel_matrix(&d, 1.0).unwrap();
        let expected = (-0.5f64).exp();
        assert!((k[(0, 1)] - expected).abs() < 1e-15);
        assert_eq!(k[(0, 1)], k[(1, 0)]);
    }

    #[test]
    fn huge_bandwidth_flattens_the_matrix() {
        let d = Dataset::from_rows(vec![vec![0.0, 0.0], vec![3.0, 4.0], vec![-2.0, 1.0]]).unwrap();
        let k = kernel_matrix(&d, 1e12).unwrap();
        for v in k.iter() {
            assert!((v - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn rejects_bad_bandwidth() {
        let d = Dataset::from_rows(vec![vec![0.0], vec![1.0]]).unwrap();
        assert!(matches!(
            kernel_matrix(&d, 0.0),
            Err(Error::BadBandwidth(_))
        ));
        assert!(matches!(
            kernel_matrix(&d, f64::NAN),
            Err(Error::BadBandwidth(_))
        ));
        assert!(matches!(
            kernel_matrix(&d, f64::INFINITY),
            Err(Error::BadBandwidth(_))
        ));
    }
}
