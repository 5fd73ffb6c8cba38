//! The random-polygon evaluation study: trains SVDD on polygon interiors at
//! the mean/median criterion bandwidths, compares their F1 against the best
//! bandwidth found by grid search on ground-truth grid labels, and
//! aggregates the F1 ratios per vertex count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bandwidth;
use crate::config::DEFAULT_DELTA;
use crate::dataset::{Dataset, Label};
use crate::error::{Error, Result};
use crate::evaluation::{bandwidth_grid_search, log_spaced};
use crate::polygon::{label_grid, PolygonInstance};
use crate::scoring::GridSpec;

/// Settings for a simulation run. `paper_scale` reproduces the study design
/// (vertex counts 5..=30, 20 polygons each, 600 interior points);
/// `desk_scale` is a fast spot check of the same pipeline.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationParams {
    pub vertex_counts: Vec<usize>,
    pub polygons_per_count: usize,
    pub n_sample: usize,
    pub outlier_fraction: f64,
    pub s_grid_size: usize,
    pub seed: u64,
    pub r_min: f64,
    pub r_max: f64,
    pub grid_resolution: usize,
}

impl SimulationParams {
    pub fn new(vertex_counts: Vec<usize>, polygons_per_count: usize, n_sample: usize, seed: u64) -> Self {
        Self {
            vertex_counts,
            polygons_per_count,
            n_sample,
            outlier_fraction: 0.001,
            s_grid_size: 30,
            seed,
            r_min: 3.0,
            r_max: 5.0,
            grid_resolution: 200,
        }
    }

    pub fn paper_scale(seed: u64) -> Self {
        Self::new((5..=30).collect(), 20, 600, seed)
    }

    pub fn desk_scale(seed: u64) -> Self {
        Self::new(vec![5, 15, 30], 5, 300, seed)
    }

    pub fn validate(&self) -> Result<()> {
        if self.vertex_counts.is_empty() || self.vertex_counts.iter().any(|&v| v < 3) {
            return Err(Error::BadParams(
                "vertex counts must be nonempty and at least 3".into(),
            ));
        }
        if self.polygons_per_count < 1 {
            return Err(Error::BadParams("polygons per count must be positive".into()));
        }
        if self.n_sample < 2 {
            return Err(Error::BadParams(
                "interior sample size must be at least 2".into(),
            ));
        }
        if !(self.outlier_fraction > 0.0 && self.outlier_fraction <= 1.0) {
            return Err(Error::BadParams(format!(
                "outlier fraction must lie in (0, 1], got {}",
                self.outlier_fraction
            )));
        }
        if self.s_grid_size < 2 {
            return Err(Error::BadParams("bandwidth grid size must be at least 2".into()));
        }
        if !(self.r_min > 0.0 && self.r_min <= self.r_max) {
            return Err(Error::BadParams(format!(
                "radius interval [{}, {}] must satisfy 0 < r_min <= r_max",
                self.r_min, self.r_max
            )));
        }
        if self.grid_resolution < 2 {
            return Err(Error::BadParams("grid resolution must be at least 2".into()));
        }
        Ok(())
    }
}

/// Per-polygon outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct PolygonRecord {
    pub n_vertices: usize,
    pub seed: u64,
    pub s_mean: f64,
    pub s_median: f64,
    /// Bandwidth attaining the best F1 in the search grid.
    pub s_best: f64,
    pub f_mean: f64,
    pub f_median: f64,
    pub f_max: f64,
    pub ratio_mean: f64,
    pub ratio_median: f64,
}

/// Distribution summary of one ratio over the polygons of a vertex count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RatioStats {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
    pub mean: f64,
}

impl RatioStats {
    /// Quartiles by linear interpolation of the order statistics.
    pub fn from_values(values: &[f64]) -> Self {
        assert!(!values.is_empty());
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        Self {
            min: sorted[0],
            q1: quantile(&sorted, 0.25),
            median: quantile(&sorted, 0.5),
            q3: quantile(&sorted, 0.75),
            max: sorted[sorted.len() - 1],
            mean: sorted.iter().sum::<f64>() / sorted.len() as f64,
        }
    }
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * q;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Ratio summaries for every polygon of one vertex count.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexAggregate {
    pub n_vertices: usize,
    pub n_polygons: usize,
    pub n_excluded: usize,
    pub ratio_mean: RatioStats,
    pub ratio_median: RatioStats,
}

/// A polygon whose pipeline failed, kept out of the aggregates.
#[derive(Debug, Clone, PartialEq)]
pub struct Exclusion {
    pub n_vertices: usize,
    pub seed: u64,
    pub reason: String,
}

/// Full study outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationReport {
    pub records: Vec<PolygonRecord>,
    pub aggregates: Vec<VertexAggregate>,
    pub exclusions: Vec<Exclusion>,
}

/// Runs the full pipeline for one polygon and its interior sample: criterion
/// bandwidths, ground-truth grid labels, and the F1 grid search. The search
/// grid is `s_grid_size` log-spaced bandwidths over [s_mean/10, s_mean*10]
/// plus the two criterion values, so the ratios cannot exceed 1.
pub fn simulate_polygon(
    poly: &PolygonInstance,
    sample: &Dataset,
    outlier_fraction: f64,
    s_grid_size: usize,
    grid_resolution: usize,
) -> Result<PolygonRecord> {
    let s_mean = bandwidth::mean_criterion(sample, DEFAULT_DELTA)?;
    let s_median = bandwidth::median_criterion(sample, DEFAULT_DELTA, None, None)?;

    let spec = GridSpec::bounding_box(poly.vertices(), grid_resolution)?;
    let cells = label_grid(poly, &spec);
    let rows: Vec<Vec<f64>> = cells.iter().map(|c| vec![c.x, c.y]).collect();
    let labels: Vec<Label> = cells
        .iter()
        .map(|c| if c.inside { Label::Inlier } else { Label::Outlier })
        .collect();
    let labeled = Dataset::from_rows(rows)?.with_labels(labels)?;

    let mut grid = log_spaced(s_mean / 10.0, s_mean * 10.0, s_grid_size);
    grid.push(s_mean);
    grid.push(s_median);
    let search = bandwidth_grid_search(sample, &labeled, &grid, outlier_fraction, Label::Inlier)?;

    let f_mean = search.trace[s_grid_size].1;
    let f_median = search.trace[s_grid_size + 1].1;
    if f_mean < 0.0 || f_median < 0.0 {
        return Err(Error::BadParams(
            "criterion bandwidth failed to train on this polygon".into(),
        ));
    }
    let f_max = search.best_f1;
    if f_max <= 0.0 {
        return Err(Error::DegenerateData(
            "no bandwidth in the grid classified any grid point correctly",
        ));
    }
    Ok(PolygonRecord {
        n_vertices: poly.n_vertices(),
        seed: poly.seed(),
        s_mean,
        s_median,
        s_best: search.best_s,
        f_mean,
        f_median,
        f_max,
        ratio_mean: f_mean / f_max,
        ratio_median: f_median / f_max,
    })
}

/// Runs the study over all vertex counts. Per-polygon seeds are derived from
/// the master seed as `seed + k` with `k` the global polygon index, and each
/// polygon's vertex draw and interior sample consume one ChaCha8 stream
/// seeded with that value, so the run is reproducible bit for bit. Polygons
/// are processed in parallel; results merge in generation order.
pub fn run_simulation(params: &SimulationParams) -> Result<SimulationReport> {
    params.validate()?;
    let mut jobs = Vec::new();
    let mut k: u64 = 0;
    for &n_vertices in &params.vertex_counts {
        for _ in 0..params.polygons_per_count {
            let seed_k = params.seed.wrapping_add(k);
            let mut rng = ChaCha8Rng::seed_from_u64(seed_k);
            let poly = PolygonInstance::generate_with(
                n_vertices,
                params.r_min,
                params.r_max,
                seed_k,
                &mut rng,
            )?;
            let sample = poly.sample_interior_with(params.n_sample, &mut rng);
            jobs.push((poly, sample));
            k += 1;
        }
    }

    let outcomes: Vec<(usize, u64, Result<PolygonRecord>)> = jobs
        .par_iter()
        .map(|(poly, sample)| {
            let record = simulate_polygon(
                poly,
                sample,
                params.outlier_fraction,
                params.s_grid_size,
                params.grid_resolution,
            );
            (poly.n_vertices(), poly.seed(), record)
        })
        .collect();

    let mut records = Vec::new();
    let mut exclusions = Vec::new();
    for (n_vertices, seed, outcome) in outcomes {
        match outcome {
            Ok(record) => records.push(record),
            Err(err) => exclusions.push(Exclusion {
                n_vertices,
                seed,
                reason: err.to_string(),
            }),
        }
    }

    let mut aggregates = Vec::new();
    for &n_vertices in &params.vertex_counts {
        let included: Vec<&PolygonRecord> = records
            .iter()
            .filter(|r| r.n_vertices == n_vertices)
            .collect();
        let n_excluded = exclusions
            .iter()
            .filter(|e| e.n_vertices == n_vertices)
            .count();
        if included.is_empty() {
            continue;
        }
        let mean_ratios: Vec<f64> = included.iter().map(|r| r.ratio_mean).collect();
        let median_ratios: Vec<f64> = included.iter().map(|r| r.ratio_median).collect();
        aggregates.push(VertexAggregate {
            n_vertices,
            n_polygons: included.len(),
            n_excluded,
            ratio_mean: RatioStats::from_values(&mean_ratios),
            ratio_median: RatioStats::from_values(&median_ratios),
        });
    }

    Ok(SimulationReport {
        records,
        aggregates,
        exclusions,
    })
}
