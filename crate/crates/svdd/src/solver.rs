//! Dual QP solver and model training.
//!
//! The dual is `max sum_i alpha_i K(x_i,x_i) - sum_ij alpha_i alpha_j
//! K(x_i,x_j)` over the simplex-with-box `{sum alpha = 1, 0 <= alpha <= C}`.
//! With a unit kernel diagonal this is equivalent to minimizing
//! `alpha' K alpha`, which is solved by pairwise coordinate descent. Each
//! step picks the steepest donor among `{alpha > 0}` and pairs it with the
//! receiver giving the largest second-order decrease, then moves mass
//! between the two in closed form, keeping the iterate feasible exactly.
//! Convergence is measured by the most-violating pair: the gradient gap
//! between the steepest donor and the steepest receiver.

use ndarray::Array2;

use crate::config::TrainConfig;
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::kernel::kernel_matrix;
use crate::model::{distance2_raw, Position, Provenance, SvddModel};

/// Denominator guard for the pair step; below this the two points are
/// numerically duplicates and the step degenerates to a full mass transfer.
const CURVATURE_GUARD: f64 = 1e-12;

/// Result of the dual solve.
#[derive(Debug, Clone, PartialEq)]
pub struct DualSolution {
    /// Coefficients, feasible by construction: `sum = 1`, `0 <= a_i <= C`.
    pub alphas: Vec<f64>,
    /// Dual objective `1 - alpha' K alpha`.
    pub objective: f64,
    /// Pair updates performed.
    pub iterations: usize,
    /// Whether the violation dropped to `tol` within the budget.
    pub converged: bool,
    /// Pairwise KKT violation at exit.
    pub kkt_violation: f64,
}

/// Solves the dual for a precomputed kernel matrix.
///
/// The KKT violation of an iterate is `max_{a_j > 0} g_j - min_{a_i < C} g_i`
/// with `g = 2 K alpha`; at the optimum it is nonpositive. Running past the
/// iteration budget is not an error and is reported via `converged`.
pub fn solve_dual(k: &Array2<f64>, c: f64, tol: f64, max_iter: usize) -> Result<DualSolution> {
    let n = k.nrows();
    if n == 0 || k.ncols() != n {
        return Err(Error::EmptyData("kernel matrix is empty or not square"));
    }
    if !(c > 0.0) || (n as f64) * c < 1.0 {
        return Err(Error::Infeasible(n as f64 * c));
    }
    if !(tol > 0.0) {
        return Err(Error::BadConfig(format!(
            "solver tolerance must be positive, got {tol}"
        )));
    }
    let kf = k.as_slice().expect("kernel matrices are standard layout");

    // Uniform start, adjusted so the sum is exactly 1.
    let mut alphas = vec![1.0 / n as f64; n];
    let tail: f64 = alphas[1..].iter().sum();
    alphas[0] = 1.0 - tail;

    // g = 2 K alpha, maintained incrementally.
    let mut g: Vec<f64> = (0..n)
        .map(|i| {
            let row = &kf[i * n..(i + 1) * n];
            2.0 * row.iter().zip(&alphas).map(|(kij, aj)| kij * aj).sum::<f64>()
        })
        .collect();

    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_iter {
        let Some((_, j, violation)) = most_violating_pair(&alphas, &g, c) else {
            converged = true;
            break;
        };
        if violation <= tol {
            converged = true;
            break;
        }
        let row_j = &kf[j * n..(j + 1) * n];
        let i = second_order_receiver(&alphas, &g, c, j, row_j)
            .expect("a receiver exists whenever the violation is positive");

        let mass = alphas[i] + alphas[j];
        let lo = (mass - c).max(0.0);
        let hi = c.min(mass);
        let eta = kf[i * n + i] + kf[j * n + j] - 2.0 * kf[i * n + j];
        let new_ai = if eta < CURVATURE_GUARD {
            // Duplicate points: the objective is flat along the pair, so
            // move everything to the lower-gradient coordinate.
            hi
        } else {
            (alphas[i] + (g[j] - g[i]) / (2.0 * eta)).clamp(lo, hi)
        };
        let step = new_ai - alphas[i];
        alphas[i] = new_ai;
        alphas[j] = (mass - new_ai).clamp(0.0, c);

        let row_i = &kf[i * n..(i + 1) * n];
        for ((gv, ki), kj) in g.iter_mut().zip(row_i).zip(row_j) {
            *gv += 2.0 * step * (ki - kj);
        }
        iterations += 1;
    }

    let kkt_violation = most_violating_pair(&alphas, &g, c)
        .map(|(_, _, v)| v.max(0.0))
        .unwrap_or(0.0);
    let objective = 1.0 - quadratic_form(kf, n, &alphas);
    Ok(DualSolution {
        alphas,
        objective,
        iterations,
        converged,
        kkt_violation,
    })
}

/// Receiver paired with donor `j`: among `{a_i < C, g_i < g_j}` the
/// coordinate maximizing the second-order decrease `(g_j - g_i)^2 / eta`.
/// The gradient gap alone zigzags badly when kernel columns are nearly
/// collinear; weighting by the pair curvature fixes that.
fn second_order_receiver(
    alphas: &[f64],
    g: &[f64],
    c: f64,
    j: usize,
    row_j: &[f64],
) -> Option<usize> {
    let gj = g[j];
    let mut best: Option<(usize, f64)> = None;
    for (idx, (&a, &gv)) in alphas.iter().zip(g).enumerate() {
        if idx == j || a >= c || gv >= gj {
            continue;
        }
        let gap = gj - gv;
        let eta = (2.0 - 2.0 * row_j[idx]).max(CURVATURE_GUARD);
        let score = gap * gap / eta;
        if best.is_none_or(|(_, s)| score > s) {
            best = Some((idx, score));
        }
    }
    best.map(|(idx, _)| idx)
}

/// Most violating pair: the steepest-ascent receiver among `{a < C}` and the
/// steepest donor among `{a > 0}`. `None` when either set is empty or the
/// two coincide (both mean the iterate cannot be improved).
fn most_violating_pair(alphas: &[f64], g: &[f64], c: f64) -> Option<(usize, usize, f64)> {
    let mut i_best: Option<usize> = None;
    let mut j_best: Option<usize> = None;
    for (idx, (&a, &gv)) in alphas.iter().zip(g).enumerate() {
        if a < c && i_best.is_none_or(|i| gv < g[i]) {
            i_best = Some(idx);
        }
        if a > 0.0 && j_best.is_none_or(|j| gv > g[j]) {
            j_best = Some(idx);
        }
    }
    match (i_best, j_best) {
        (Some(i), Some(j)) if i != j => Some((i, j, g[j] - g[i])),
        _ => None,
    }
}

fn quadratic_form(kf: &[f64], n: usize, alphas: &[f64]) -> f64 {
    let mut total = 0.0;
    for (i, &ai) in alphas.iter().enumerate() {
        if ai == 0.0 {
            continue;
        }
        let row = &kf[i * n..(i + 1) * n];
        let mut inner = 0.0;
        for (kij, &aj) in row.iter().zip(alphas) {
            inner += kij * aj;
        }
        total += ai * inner;
    }
    total
}

/// Trains an SVDD model: resolves the bandwidth, solves the dual, extracts
/// support vectors, tags every training point, and fixes the threshold R^2.
///
/// R^2 is the average of the squared kernel distance over all boundary
/// support vectors; at the optimum it is the same for each of them up to the
/// solver tolerance. When no coefficient lies strictly between the bounds,
/// the threshold falls back to the largest distance among points not tagged
/// outside; if there is no such point either, training fails.
pub fn train(data: &Dataset, config: &TrainConfig) -> Result<SvddModel> {
    config.validate()?;
    let n = data.n();
    let bandwidth = config.bandwidth.resolve(data)?;
    let penalty = 1.0 / (n as f64 * config.outlier_fraction);
    let k = kernel_matrix(data, bandwidth)?;
    let max_iter = config.max_iterations.unwrap_or(100 * n);
    let solution = solve_dual(&k, penalty, config.kkt_tolerance, max_iter)?;
    let tol = config.kkt_tolerance;

    let position_tags: Vec<Position> = solution
        .alphas
        .iter()
        .map(|&a| {
            if a <= tol {
                Position::Inside
            } else if a > penalty - tol {
                Position::Outside
            } else {
                Position::Boundary
            }
        })
        .collect();

    let sv_indices: Vec<usize> = (0..n).filter(|&i| solution.alphas[i] > tol).collect();
    if sv_indices.is_empty() {
        return Err(Error::NoBoundarySv);
    }
    let p = data.dim();
    let xs = data.as_slice();
    let mut sv_flat = Vec::with_capacity(sv_indices.len() * p);
    let mut sv_alphas = Vec::with_capacity(sv_indices.len());
    for &i in &sv_indices {
        sv_flat.extend_from_slice(&xs[i * p..(i + 1) * p]);
        sv_alphas.push(solution.alphas[i]);
    }
    let support_vectors =
        Array2::from_shape_vec((sv_indices.len(), p), sv_flat).expect("shape by construction");
    let svs = support_vectors
        .as_slice()
        .expect("standard layout by construction");

    let kf = k.as_slice().expect("kernel matrices are standard layout");
    let mut sv_self_term = 0.0;
    for &i in &sv_indices {
        for &j in &sv_indices {
            sv_self_term += solution.alphas[i] * solution.alphas[j] * kf[i * n + j];
        }
    }

    let dist2_of = |train_idx: usize| {
        distance2_raw(
            svs,
            p,
            &sv_alphas,
            bandwidth,
            sv_self_term,
            &xs[train_idx * p..(train_idx + 1) * p],
        )
    };

    let boundary: Vec<usize> = (0..n)
        .filter(|&i| position_tags[i] == Position::Boundary)
        .collect();
    let threshold = if !boundary.is_empty() {
        boundary.iter().map(|&i| dist2_of(i)).sum::<f64>() / boundary.len() as f64
    } else {
        // Degenerate solve (for example C = 1/N puts every alpha at the
        // ceiling): anchor the radius on the farthest non-outside point.
        (0..n)
            .filter(|&i| position_tags[i] != Position::Outside)
            .map(dist2_of)
            .fold(None, |acc: Option<f64>, d| Some(acc.map_or(d, |m| m.max(d))))
            .ok_or(Error::NoBoundarySv)?
    };

    let (data_min, data_max) = data.bounding_box();
    SvddModel::from_parts(
        support_vectors,
        sv_alphas,
        bandwidth,
        penalty,
        threshold,
        sv_self_term,
        position_tags,
        data_min,
        data_max,
        Provenance {
            criterion: config.bandwidth.criterion,
            delta: config.bandwidth.delta,
            outlier_fraction: config.outlier_fraction,
            n_train: n,
            converged: solution.converged,
            kkt_violation: solution.kkt_violation,
            iterations: solution.iterations,
            seed: config.bandwidth.seed,
        },
    )
}
