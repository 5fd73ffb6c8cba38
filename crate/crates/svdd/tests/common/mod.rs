//! Independent oracles for the integration tests. Everything here computes
//! expected values by definition-level brute force, deliberately avoiding
//! the code paths under test.

#![allow(dead_code)]

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use svdd::Dataset;

/// Mean of squared pairwise distances by the O(N^2 p) double loop, with
/// direct subtraction per coordinate.
pub fn brute_mean_sq_pairwise(rows: &[Vec<f64>]) -> f64 {
    let n = rows.len();
    assert!(n >= 2);
    let mut total = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            total += rows[i]
                .iter()
                .zip(&rows[j])
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>();
        }
    }
    total / (n * (n - 1) / 2) as f64
}

/// All pairwise Euclidean distances, i < j.
pub fn brute_pairwise_distances(rows: &[Vec<f64>]) -> Vec<f64> {
    let n = rows.len();
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            let sq: f64 = rows[i]
                .iter()
                .zip(&rows[j])
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            out.push(sq.sqrt());
        }
    }
    out
}

/// Median by full sort; even counts average the two middle order statistics.
pub fn median_by_sort(values: &[f64]) -> f64 {
    assert!(!values.is_empty());
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let m = sorted.len();
    if m % 2 == 1 {
        sorted[m / 2]
    } else {
        0.5 * (sorted[m / 2 - 1] + sorted[m / 2])
    }
}

/// `alpha' K alpha` by the definition-level double loop.
pub fn quadratic_form(k: &ndarray::Array2<f64>, alphas: &[f64]) -> f64 {
    let n = alphas.len();
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            total += alphas[i] * alphas[j] * k[(i, j)];
        }
    }
    total
}

/// Euclidean projection onto `{sum a = 1, 0 <= a <= c}` by bisection on the
/// shift parameter.
pub fn project_simplex_box(v: &[f64], c: f64) -> Vec<f64> {
    let mass = |tau: f64| -> f64 { v.iter().map(|&vi| (vi - tau).clamp(0.0, c)).sum() };
    let mut lo = v.iter().copied().fold(f64::INFINITY, f64::min) - c;
    let mut hi = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mass(mid) >= 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let tau = 0.5 * (lo + hi);
    v.iter().map(|&vi| (vi - tau).clamp(0.0, c)).collect()
}

/// Projected-gradient reference solver for `min alpha' K alpha` on the
/// simplex-with-box, with Nesterov acceleration and a monotone restart.
/// Fixed step 1/(2 ||K||_F), which is at most 1/L for L = 2 lambda_max(K).
/// Stops once the best objective has plateaued (no 1e-14 improvement over a
/// 5000-iteration window) or after `max_iter` iterations.
pub fn projected_gradient_solve(k: &ndarray::Array2<f64>, c: f64, max_iter: usize) -> Vec<f64> {
    let n = k.nrows();
    let frob: f64 = k.iter().map(|x| x * x).sum::<f64>().sqrt();
    let step = 1.0 / (2.0 * frob);
    let mut alpha = vec![1.0 / n as f64; n];
    let mut momentum_point = alpha.clone();
    let mut t = 1.0f64;
    let mut best = quadratic_form(k, &alpha);
    let mut last_improvement_at = 0usize;
    let mut best_at_window = best;
    for it in 0..max_iter {
        let mut grad = vec![0.0; n];
        for i in 0..n {
            let mut g = 0.0;
            for j in 0..n {
                g += k[(i, j)] * momentum_point[j];
            }
            grad[i] = 2.0 * g;
        }
        let proposal: Vec<f64> = momentum_point
            .iter()
            .zip(&grad)
            .map(|(&a, &g)| a - step * g)
            .collect();
        let next = project_simplex_box(&proposal, c);
        let f_next = quadratic_form(k, &next);
        if f_next > best {
            momentum_point = alpha.clone();
            t = 1.0;
        } else {
            let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
            momentum_point = next
                .iter()
                .zip(&alpha)
                .map(|(a, prev)| a + (t - 1.0) / t_next * (a - prev))
                .collect();
            t = t_next;
            alpha = next;
            best = f_next;
        }
        if it - last_improvement_at >= 5000 {
            if best_at_window - best < 1e-14 {
                break;
            }
            last_improvement_at = it;
            best_at_window = best;
        }
    }
    alpha
}

/// Winding-number membership test, written independently of the crate's
/// crossing-parity implementation.
pub fn winding_number_contains(vertices: &[[f64; 2]], z: [f64; 2]) -> bool {
    let n = vertices.len();
    let mut angle_total = 0.0;
    for i in 0..n {
        let a = vertices[i];
        let b = vertices[(i + 1) % n];
        let v1 = [a[0] - z[0], a[1] - z[1]];
        let v2 = [b[0] - z[0], b[1] - z[1]];
        let cross = v1[0] * v2[1] - v1[1] * v2[0];
        let dot = v1[0] * v2[0] + v1[1] * v2[1];
        angle_total += cross.atan2(dot);
    }
    angle_total.abs() > std::f64::consts::PI
}

/// Distance from a point to a segment; used to skip near-edge points when
/// comparing membership oracles.
pub fn distance_to_segment(a: [f64; 2], b: [f64; 2], z: [f64; 2]) -> f64 {
    let ab = [b[0] - a[0], b[1] - a[1]];
    let az = [z[0] - a[0], z[1] - a[1]];
    let len_sq = ab[0] * ab[0] + ab[1] * ab[1];
    let t = if len_sq == 0.0 {
        0.0
    } else {
        ((az[0] * ab[0] + az[1] * ab[1]) / len_sq).clamp(0.0, 1.0)
    };
    let proj = [a[0] + t * ab[0], a[1] + t * ab[1]];
    ((z[0] - proj[0]).powi(2) + (z[1] - proj[1]).powi(2)).sqrt()
}

pub fn min_edge_distance(vertices: &[[f64; 2]], z: [f64; 2]) -> f64 {
    let n = vertices.len();
    (0..n)
        .map(|i| distance_to_segment(vertices[i], vertices[(i + 1) % n], z))
        .fold(f64::INFINITY, f64::min)
}

/// Shoelace polygon area.
pub fn shoelace_area(vertices: &[[f64; 2]]) -> f64 {
    let n = vertices.len();
    let mut twice = 0.0;
    for i in 0..n {
        let a = vertices[i];
        let b = vertices[(i + 1) % n];
        twice += a[0] * b[1] - a[1] * b[0];
    }
    twice.abs() / 2.0
}

/// Seeded uniform cloud in `[-scale, scale]^p`.
pub fn uniform_rows(n: usize, p: usize, scale: f64, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| (0..p).map(|_| rng.random_range(-scale..scale)).collect())
        .collect()
}

pub fn uniform_dataset(n: usize, p: usize, scale: f64, seed: u64) -> Dataset {
    Dataset::from_rows(uniform_rows(n, p, scale, seed)).unwrap()
}

pub fn relative_error(actual: f64, expected: f64) -> f64 {
    if expected == 0.0 {
        actual.abs()
    } else {
        ((actual - expected) / expected).abs()
    }
}
