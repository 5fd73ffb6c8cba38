//! F1 scoring against labels and cross-validation bandwidth search.

use rayon::prelude::*;

use crate::bandwidth;
use crate::config::{BandwidthConfig, TrainConfig};
use crate::dataset::{Dataset, Label};
use crate::error::{Error, Result};
use crate::model::SvddModel;
use crate::solver::train;

/// Confusion-matrix tallies for one scored batch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ConfusionCounts {
    pub true_positives: usize,
    pub false_positives: usize,
    pub false_negatives: usize,
    pub true_negatives: usize,
}

impl ConfusionCounts {
    pub fn total(&self) -> usize {
        self.true_positives + self.false_positives + self.false_negatives + self.true_negatives
    }

    /// F1 = 2TP / (2TP + FN + FP); zero when the denominator vanishes.
    pub fn f1(&self) -> f64 {
        let denom = 2 * self.true_positives + self.false_negatives + self.false_positives;
        if denom == 0 {
            0.0
        } else {
            2.0 * self.true_positives as f64 / denom as f64
        }
    }
}

/// Free-function spelling of [`ConfusionCounts::f1`].
pub fn f1_score(counts: &ConfusionCounts) -> f64 {
    counts.f1()
}

/// Scores `labeled` with the model and cross-tabulates the predictions
/// against the ground truth, with `positive` naming the class counted as
/// positive.
pub fn evaluate_model(
    model: &SvddModel,
    labeled: &Dataset,
    positive: Label,
) -> Result<(ConfusionCounts, f64)> {
    let labels = labeled.labels().ok_or(Error::MissingLabels)?;
    let report = model.classify(labeled)?;
    let mut counts = ConfusionCounts::default();
    for (pt, &truth) in report.points.iter().zip(labels) {
        let predicted = if pt.is_outlier {
            Label::Outlier
        } else {
            Label::Inlier
        };
        match (predicted == positive, truth == positive) {
            (true, true) => counts.true_positives += 1,
            (true, false) => counts.false_positives += 1,
            (false, true) => counts.false_negatives += 1,
            (false, false) => counts.true_negatives += 1,
        }
    }
    let f1 = counts.f1();
    Ok((counts, f1))
}

/// Outcome of a bandwidth grid search.
#[derive(Debug, Clone, PartialEq)]
pub struct BandwidthSearchResult {
    /// One (s, F1) entry per grid point, in grid order. A bandwidth whose
    /// training failed records F1 = -1 and is excluded from the argmax.
    pub trace: Vec<(f64, f64)>,
    pub best_s: f64,
    pub best_f1: f64,
}

/// Trains one model per bandwidth in `s_grid` (same outlier fraction `f`),
/// evaluates each on `eval`, and returns the full trace plus the best
/// bandwidth, breaking F1 ties toward the smaller s.
pub fn bandwidth_grid_search(
    train_data: &Dataset,
    eval: &Dataset,
    s_grid: &[f64],
    f: f64,
    positive: Label,
) -> Result<BandwidthSearchResult> {
    if s_grid.is_empty() {
        return Err(Error::BadParams("bandwidth grid is empty".into()));
    }
    if eval.labels().is_none() {
        return Err(Error::MissingLabels);
    }
    if train_data.dim() != eval.dim() {
        return Err(Error::DimensionMismatch {
            expected: train_data.dim(),
            got: eval.dim(),
        });
    }
    let trace: Vec<(f64, f64)> = s_grid
        .par_iter()
        .map(|&s| {
            let config = TrainConfig::new(f, BandwidthConfig::fixed(s));
            let f1 = train(train_data, &config)
                .and_then(|model| evaluate_model(&model, eval, positive))
                .map(|(_, f1)| f1)
                .unwrap_or(-1.0);
            (s, f1)
        })
        .collect();

    let mut best: Option<(f64, f64)> = None;
    for &(s, f1) in &trace {
        if f1 < 0.0 {
            continue;
        }
        best = match best {
            None => Some((s, f1)),
            Some((bs, bf)) if f1 > bf || (f1 == bf && s < bs) => Some((s, f1)),
            keep => keep,
        };
    }
    let (best_s, best_f1) = best.ok_or(Error::AllFailed)?;
    Ok(BandwidthSearchResult {
        trace,
        best_s,
        best_f1,
    })
}

/// Default search grid: 20 logarithmically spaced bandwidths spanning
/// [s/10, s*10] around the mean-criterion s, plus the exact mean-criterion
/// value itself so the criterion is always one of the candidates.
pub fn default_s_grid(train_data: &Dataset, delta: f64) -> Result<Vec<f64>> {
    let s_mean = bandwidth::mean_criterion(train_data, delta)?;
    let mut grid = log_spaced(s_mean / 10.0, s_mean * 10.0, 20);
    grid.push(s_mean);
    Ok(grid)
}

/// `count` logarithmically spaced values from `lo` to `hi` inclusive.
pub fn log_spaced(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    assert!(lo > 0.0 && hi > lo && count >= 2);
    let (llo, lhi) = (lo.ln(), hi.ln());
    (0..count)
        .map(|i| (llo + (lhi - llo) * i as f64 / (count - 1) as f64).exp())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::train;

    #[test]
    fn f1_trivial_cases() {
        let perfect = ConfusionCounts {
            true_positives: 5,
            ..Default::default()
        };
        assert_eq!(perfect.f1(), 1.0);

        let mixed = ConfusionCounts {
            true_positives: 2,
            false_negatives: 1,
            false_positives: 1,
            true_negatives: 0,
        };
        assert!((mixed.f1() - 4.0 / 6.0).abs() < 1e-15);

        assert_eq!(ConfusionCounts::default().f1(), 0.0);
    }

    fn two_point_model() -> SvddModel {
        let data = Dataset::from_rows(vec![vec![0.0, 0.0], vec![1.0, 0.0]]).unwrap();
        train(&data, &TrainConfig::new(0.5, BandwidthConfig::fixed(1.0))).unwrap()
    }

    #[test]
    fn evaluate_requires_labels() {
        let model = two_point_model();
        let unlabeled = Dataset::from_rows(vec![vec![0.0, 0.0]]).unwrap();
        assert_eq!(
            evaluate_model(&model, &unlabeled, Label::Inlier).unwrap_err(),
            Error::MissingLabels
        );
    }

    #[test]
    fn boundary_sv_and_far_point_split_cleanly() {
        let model = two_point_model();
        let batch = Dataset::from_rows(vec![vec![0.0, 0.0], vec![50.0, 50.0]])
            .unwrap()
            .with_labels(vec![Label::Inlier, Label::Outlier])
            .unwrap();
        let (counts, f1) = evaluate_model(&model, &batch, Label::Inlier).unwrap();
        assert_eq!(counts.true_positives, 1);
        assert_eq!(counts.false_positives, 0);
        assert_eq!(counts.false_negatives, 0);
        assert_eq!(counts.true_negatives, 1);
        assert_eq!(f1, 1.0);
    }

    #[test]
    fn all_inlier_predictions_against_all_outlier_labels() {
        let model = two_point_model();
        let batch = Dataset::from_rows(vec![vec![0.0, 0.0], vec![1.0, 0.0]])
            .unwrap()
            .with_labels(vec![Label::Outlier, Label::Outlier])
            .unwrap();
        let (_, f1) = evaluate_model(&model, &batch, Label::Outlier).unwrap();
        assert_eq!(f1, 0.0);
    }

    #[test]
    fn single_point_grid_returns_it() {
        let data = Dataset::from_rows(vec![vec![0.0, 0.0], vec![1.0, 0.0]]).unwrap();
        let eval = Dataset::from_rows(vec![vec![0.5, 0.0], vec![9.0, 9.0]])
            .unwrap()
            .with_labels(vec![Label::Inlier, Label::Outlier])
            .unwrap();
        let result = bandwidth_grid_search(&data, &eval, &[0.8], 0.5, Label::Inlier).unwrap();
        assert_eq!(result.best_s, 0.8);
        assert_eq!(result.trace.len(), 1);
    }

    #[test]
    fn f1_ties_break_toward_smaller_s() {
        let data = Dataset::from_rows(vec![vec![0.0, 0.0], vec![1.0, 0.0]]).unwrap();
        let eval = Dataset::from_rows(vec![vec![0.5, 0.0], vec![9.0, 9.0]])
            .unwrap()
            .with_labels(vec![Label::Inlier, Label::Outlier])
            .unwrap();
        // Both bandwidths classify the midpoint inside and the far point
        // outside, so the F1s tie and the smaller s must win.
        let result = bandwidth_grid_search(&data, &eval, &[1.2, 0.8], 0.5, Label::Inlier).unwrap();
        assert_eq!(result.trace.len(), 2);
        assert_eq!(result.trace[0].1, result.trace[1].1);
        assert_eq!(result.best_s, 0.8);
    }

    #[test]
    fn failed_grid_points_are_excluded() {
        let data = Dataset::from_rows(vec![vec![0.0, 0.0], vec![1.0, 0.0]]).unwrap();
        let eval = Dataset::from_rows(vec![vec![0.5, 0.0]])
            .unwrap()
            .with_labels(vec![Label::Inlier])
            .unwrap();
        let result =
            bandwidth_grid_search(&data, &eval, &[f64::INFINITY, 1.0], 0.5, Label::Inlier).unwrap();
        assert_eq!(result.trace[0].1, -1.0);
        assert_eq!(result.best_s, 1.0);

        let err = bandwidth_grid_search(&data, &eval, &[f64::INFINITY], 0.5, Label::Inlier)
            .unwrap_err();
        assert_eq!(err, Error::AllFailed);
    }

    #[test]
    fn default_grid_contains_the_mean_criterion() {
        let rows: Vec<Vec<f64>> = (0..30)
            .map(|i| vec![(i as f64 * 0.61).sin(), (i as f64 * 0.37).cos()])
            .collect();
        let data = Dataset::from_rows(rows).unwrap();
        let delta = crate::config::DEFAULT_DELTA;
        let s_mean = bandwidth::mean_criterion(&data, delta).unwrap();
        let grid = default_s_grid(&data, delta).unwrap();
        assert_eq!(grid.len(), 21);
        assert!(grid.contains(&s_mean));
    }
}
