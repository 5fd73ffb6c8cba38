//! Batch scoring and 2-D grid export.

use rayon::prelude::*;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::model::SvddModel;

/// Grid resolution used when none is given (one axis; the grid is square).
pub const DEFAULT_GRID_RESOLUTION: usize = 200;

/// A rectangular scoring window with a fixed per-axis resolution.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub resolution: usize,
}

impl GridSpec {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64, resolution: usize) -> Result<Self> {
        if !(x_min < x_max && y_min < y_max)
            || ![x_min, x_max, y_min, y_max].iter().all(|v| v.is_finite())
        {
            return Err(Error::BadParams(format!(
                "grid window [{x_min}, {x_max}] x [{y_min}, {y_max}] is not a rectangle"
            )));
        }
        if resolution < 2 {
            return Err(Error::BadParams(format!(
                "grid resolution must be at least 2, got {resolution}"
            )));
        }
        Ok(Self {
            x_min,
            x_max,
            y_min,
            y_max,
            resolution,
        })
    }

    /// Exact bounding rectangle of a 2-D point set.
    pub fn bounding_box(points: &[[f64; 2]], resolution: usize) -> Result<Self> {
        let (min, max) = points_extent(points)?;
        Self::new(min[0], max[0], min[1], max[1], resolution)
    }

    /// Bounding rectangle expanded by 10% of the extent per side. A
    /// degenerate axis is padded by 10% of the widest axis instead (or by
    /// 0.1 if both collapse), so the window is always a proper rectangle.
    pub fn around(min: [f64; 2], max: [f64; 2], resolution: usize) -> Result<Self> {
        let extent_x = max[0] - min[0];
        let extent_y = max[1] - min[1];
        let widest = extent_x.max(extent_y).max(1.0);
        let pad = |extent: f64| {
            if extent > 0.0 {
                0.1 * extent
            } else {
                0.1 * widest
            }
        };
        let (px, py) = (pad(extent_x), pad(extent_y));
        Self::new(
            min[0] - px,
            max[0] + px,
            min[1] - py,
            max[1] + py,
            resolution,
        )
    }

    /// Cell-center coordinate along x for column `i`.
    pub fn x_at(&self, i: usize) -> f64 {
        self.x_min + (i as f64 + 0.5) * (self.x_max - self.x_min) / self.resolution as f64
    }

    /// Cell-center coordinate along y for row `j`.
    pub fn y_at(&self, j: usize) -> f64 {
        self.y_min + (j as f64 + 0.5) * (self.y_max - self.y_min) / self.resolution as f64
    }

    /// Cell centers in output order: y outer ascending, x inner ascending.
    pub fn centers(&self) -> Vec<[f64; 2]> {
        let r = self.resolution;
        let mut out = Vec::with_capacity(r * r);
        for j in 0..r {
            for i in 0..r {
                out.push([self.x_at(i), self.y_at(j)]);
            }
        }
        out
    }
}

fn points_extent(points: &[[f64; 2]]) -> Result<([f64; 2], [f64; 2])> {
    if points.is_empty() {
        return Err(Error::EmptyData("no points for a bounding box"));
    }
    let mut min = [f64::INFINITY; 2];
    let mut max = [f64::NEG_INFINITY; 2];
    for p in points {
        for k in 0..2 {
            min[k] = min[k].min(p[k]);
            max[k] = max[k].max(p[k]);
        }
    }
    Ok((min, max))
}

/// Score of a single observation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoredPoint {
    pub dist2: f64,
    pub is_outlier: bool,
}

/// Batch scoring result. A point is an outlier iff its squared distance
/// strictly exceeds the threshold; ties score as inliers.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreReport {
    pub threshold: f64,
    pub points: Vec<ScoredPoint>,
}

/// One scored cell of a 2-D grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridCell {
    pub x: f64,
    pub y: f64,
    pub dist2: f64,
    pub is_inlier: bool,
}

impl SvddModel {
    /// Scores every row of `batch` against the model threshold.
    pub fn classify(&self, batch: &Dataset) -> Result<ScoreReport> {
        if batch.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: batch.dim(),
            });
        }
        let p = self.dim();
        let xs = batch.as_slice();
        let threshold = self.threshold();
        let points: Vec<ScoredPoint> = (0..batch.n())
            .into_par_iter()
            .map(|i| {
                let dist2 = self
                    .distance2(&xs[i * p..(i + 1) * p])
                    .expect("dimension checked above");
                ScoredPoint {
                    dist2,
                    is_outlier: dist2 > threshold,
                }
            })
            .collect();
        Ok(ScoreReport { threshold, points })
    }

    /// Scores the cell centers of a 2-D window, row-major with y outermost.
    pub fn score_grid(&self, spec: &GridSpec) -> Result<Vec<GridCell>> {
        if self.dim() != 2 {
            return Err(Error::NotTwoDimensional(self.dim()));
        }
        let threshold = self.threshold();
        let cells: Vec<GridCell> = spec
            .centers()
            .into_par_iter()
            .map(|[x, y]| {
                let dist2 = self.distance2(&[x, y]).expect("model is 2-D");
                GridCell {
                    x,
                    y,
                    dist2,
                    is_inlier: dist2 <= threshold,
                }
            })
            .collect();
        Ok(cells)
    }
}

/// Scores an empty batch gracefully: classify of a zero-row dataset cannot
/// exist (datasets are nonempty), so the CLI maps "no rows" to an empty
/// report via this helper.
pub fn empty_report(threshold: f64) -> ScoreReport {
    ScoreReport {
        threshold,
        points: Vec::new(),
    }
}
