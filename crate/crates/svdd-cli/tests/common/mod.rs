//! Oracles for the acceptance suite: definition-level brute force and an
//! independent first-order QP solver, none sharing code with the paths
//! under test.

#![allow(dead_code)]

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use svdd::ndarray::Array2;
use svdd::Dataset;

pub fn uniform_rows(n: usize, p: usize, scale: f64, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| (0..p).map(|_| rng.random_range(-scale..scale)).collect())
        .collect()
}

pub fn uniform_dataset(n: usize, p: usize, scale: f64, seed: u64) -> Dataset {
    Dataset::from_rows(uniform_rows(n, p, scale, seed)).unwrap()
}

/// Mean squared pairwise distance by the O(N^2 p) double loop.
pub fn brute_mean_sq_pairwise(rows: &[Vec<f64>]) -> f64 {
    let n = rows.len();
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

/// Weighted-criterion value computed from the physically expanded multiset.
pub fn expansion_oracle(rows: &[Vec<f64>], weights: &[u64], delta: f64) -> f64 {
    let mut expanded: Vec<Vec<f64>> = Vec::new();
    for (row, &w) in rows.iter().zip(weights) {
        for _ in 0..w {
            expanded.push(row.clone());
        }
    }
    let w_total = expanded.len() as f64;
    let m_total: f64 = weights.iter().map(|&w| (w * w) as f64).sum();
    let q = (w_total * w_total - m_total) / 2.0;
    let p = expanded[0].len();
    let mut means = vec![0.0; p];
    for row in &expanded {
        for (j, &v) in row.iter().enumerate() {
            means[j] += v;
        }
    }
    for m in &mut means {
        *m /= w_total;
    }
    let mut var_sum = 0.0;
    for row in &expanded {
        for (j, &v) in row.iter().enumerate() {
            var_sum += (v - means[j]) * (v - means[j]);
        }
    }
    var_sum /= w_total;
    (w_total * w_total * var_sum / (q * (2.0 * q / (delta * delta * m_total)).ln())).sqrt()
}

pub fn quadratic_form(k: &Array2<f64>, alphas: &[f64]) -> f64 {
    let n = alphas.len();
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            total += alphas[i] * alphas[j] * k[(i, j)];
        }
    }
    total
}

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

/// Accelerated projected gradient (FISTA with monotone restart) for
/// `min alpha' K alpha` on the simplex-with-box; step 1/(2 ||K||_F) <= 1/L.
pub fn projected_gradient_solve(k: &Array2<f64>, c: f64, max_iter: usize) -> Vec<f64> {
    let n = k.nrows();
    let frob: f64 = k.iter().map(|x| x * x).sum::<f64>().sqrt();
    let step = 1.0 / (2.0 * frob);
    let mut alpha = vec![1.0 / n as f64; n];
    let mut momentum_point = alpha.clone();
    let mut t = 1.0f64;
    let mut best = quadratic_form(k, &alpha);
    let mut window_anchor = 0usize;
    let mut best_at_anchor = best;
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
        if it - window_anchor >= 5000 {
            if best_at_anchor - best < 1e-14 {
                break;
            }
            window_anchor = it;
            best_at_anchor = best;
        }
    }
    alpha
}

pub fn relative_error(actual: f64, expected: f64) -> f64 {
    if expected == 0.0 {
        actual.abs()
    } else {
        ((actual - expected) / expected).abs()
    }
}

pub fn median_of(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let m = sorted.len();
    if m % 2 == 1 {
        sorted[m / 2]
    } else {
        0.5 * (sorted[m / 2 - 1] + sorted[m / 2])
    }
}
