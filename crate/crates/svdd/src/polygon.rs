//! Random star-shaped polygons, point-in-polygon tests, interior sampling,
//! and grid ground-truth labeling.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::scoring::GridSpec;

/// A simple polygon that is star-shaped with respect to the origin: its
/// vertices are `r_k (cos a_k, sin a_k)` with strictly increasing angles in
/// `(0, 2pi)` and positive radii.
#[derive(Debug, Clone, PartialEq)]
pub struct PolygonInstance {
    vertices: Vec<[f64; 2]>,
    n_vertices: usize,
    r_min: f64,
    r_max: f64,
    seed: u64,
}

impl PolygonInstance {
    /// Draws a random instance: vertex angles are the order statistics of n
    /// uniforms on `(0, 2pi)`, radii are iid uniform on `[r_min, r_max]`.
    /// Deterministic for a fixed seed.
    ///
    /// The angle set is redrawn until every circular gap between consecutive
    /// angles is below pi. That conditioning keeps the origin strictly
    /// interior, which is what makes the sorted-angle construction simple
    /// and star-shaped; with a gap above pi the origin falls outside and
    /// radius zigzags can self-intersect. Small vertex counts need a few
    /// redraws (3/4 of raw triangles fail), large ones almost never.
    pub fn generate(n_vertices: usize, r_min: f64, r_max: f64, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::generate_with(n_vertices, r_min, r_max, seed, &mut rng)
    }

    pub(crate) fn generate_with(
        n_vertices: usize,
        r_min: f64,
        r_max: f64,
        seed: u64,
        rng: &mut ChaCha8Rng,
    ) -> Result<Self> {
        if n_vertices < 3 {
            return Err(Error::BadParams(format!(
                "a polygon needs at least 3 vertices, got {n_vertices}"
            )));
        }
        if !(r_min > 0.0 && r_min <= r_max && r_max.is_finite()) {
            return Err(Error::BadParams(format!(
                "radius interval [{r_min}, {r_max}] must satisfy 0 < r_min <= r_max"
            )));
        }
        let mut angles: Vec<f64>;
        loop {
            angles = (0..n_vertices)
                .map(|_| rng.random_range(0.0..std::f64::consts::TAU))
                .collect();
            angles.sort_by(f64::total_cmp);
            let wrap_gap = std::f64::consts::TAU - (angles[n_vertices - 1] - angles[0]);
            let max_gap = angles
                .windows(2)
                .map(|w| w[1] - w[0])
                .fold(wrap_gap, f64::max);
            if max_gap < std::f64::consts::PI {
                break;
            }
        }
        let radii: Vec<f64> = (0..n_vertices)
            .map(|_| {
                if r_min == r_max {
                    r_min
                } else {
                    rng.random_range(r_min..=r_max)
                }
            })
            .collect();
        let vertices = angles
            .iter()
            .zip(&radii)
            .map(|(&a, &r)| [r * a.cos(), r * a.sin()])
            .collect();
        Ok(Self {
            vertices,
            n_vertices,
            r_min,
            r_max,
            seed,
        })
    }

    /// Builds an instance from explicit vertices, which must already be in
    /// strictly increasing angular order around the origin with positive
    /// radii (the star-shape construction).
    pub fn from_vertices(vertices: Vec<[f64; 2]>) -> Result<Self> {
        if vertices.len() < 3 {
            return Err(Error::BadParams(format!(
                "a polygon needs at least 3 vertices, got {}",
                vertices.len()
            )));
        }
        let mut r_min = f64::INFINITY;
        let mut r_max: f64 = 0.0;
        let mut prev_angle = f64::NEG_INFINITY;
        for v in &vertices {
            let r = (v[0] * v[0] + v[1] * v[1]).sqrt();
            if !(r > 0.0) || !r.is_finite() {
                return Err(Error::BadParams(
                    "every vertex must have a positive finite radius".into(),
                ));
            }
            let angle = v[1].atan2(v[0]).rem_euclid(std::f64::consts::TAU);
            if angle <= prev_angle {
                return Err(Error::BadParams(
                    "vertex angles must be strictly increasing around the origin".into(),
                ));
            }
            prev_angle = angle;
            r_min = r_min.min(r);
            r_max = r_max.max(r);
        }
        let n_vertices = vertices.len();
        Ok(Self {
            vertices,
            n_vertices,
            r_min,
            r_max,
            seed: 0,
        })
    }

    pub fn vertices(&self) -> &[[f64; 2]] {
        &self.vertices
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn r_min(&self) -> f64 {
        self.r_min
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn bounding_box(&self) -> ([f64; 2], [f64; 2]) {
        let mut min = [f64::INFINITY; 2];
        let mut max = [f64::NEG_INFINITY; 2];
        for v in &self.vertices {
            for k in 0..2 {
                min[k] = min[k].min(v[k]);
                max[k] = max[k].max(v[k]);
            }
        }
        (min, max)
    }

    /// Even-odd (ray crossing) membership test; a point exactly on an edge
    /// counts as inside.
    pub fn contains(&self, z: [f64; 2]) -> bool {
        let v = &self.vertices;
        let n = v.len();
        let mut inside = false;
        let mut j = n - 1;
        for i in 0..n {
            if on_segment(v[j], v[i], z) {
                return true;
            }
            let (a, b) = (v[j], v[i]);
            if (b[1] > z[1]) != (a[1] > z[1]) {
                let x_cross = a[0] + (z[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
                if z[0] < x_cross {
                    inside = !inside;
                }
            }
            j = i;
        }
        inside
    }

    /// Uniform interior sample by rejection from the bounding box;
    /// deterministic for a fixed seed.
    pub fn sample_interior(&self, n: usize, seed: u64) -> Dataset {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.sample_interior_with(n, &mut rng)
    }

    pub(crate) fn sample_interior_with(&self, n: usize, rng: &mut ChaCha8Rng) -> Dataset {
        assert!(n >= 1, "interior sample size must be positive");
        let (min, max) = self.bounding_box();
        let mut rows = Vec::with_capacity(n);
        while rows.len() < n {
            let x = rng.random_range(min[0]..max[0]);
            let y = rng.random_range(min[1]..max[1]);
            if self.contains([x, y]) {
                rows.push(vec![x, y]);
            }
        }
        Dataset::from_rows(rows).expect("sampled rows are finite and rectangular")
    }
}

fn on_segment(a: [f64; 2], b: [f64; 2], z: [f64; 2]) -> bool {
    let cross = (b[0] - a[0]) * (z[1] - a[1]) - (b[1] - a[1]) * (z[0] - a[0]);
    if cross != 0.0 {
        return false;
    }
    (a[0].min(b[0])..=a[0].max(b[0])).contains(&z[0])
        && (a[1].min(b[1])..=a[1].max(b[1])).contains(&z[1])
}

/// One ground-truth-labeled grid cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LabeledCell {
    pub x: f64,
    pub y: f64,
    pub inside: bool,
}

/// Labels the cell centers of `spec` by polygon membership, in the same
/// row-major, y-outer ordering as grid scoring.
pub fn label_grid(poly: &PolygonInstance, spec: &GridSpec) -> Vec<LabeledCell> {
    spec.centers()
        .into_iter()
        .map(|[x, y]| LabeledCell {
            x,
            y,
            inside: poly.contains([x, y]),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_radius_interval_inscribes_the_circle() {
        let poly = PolygonInstance::generate(3, 1.0, 1.0, 11).unwrap();
        assert_eq!(poly.n_vertices(), 3);
        for v in poly.vertices() {
            let r = (v[0] * v[0] + v[1] * v[1]).sqrt();
            assert!((r - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn pentagon_radii_stay_in_range() {
        let poly = PolygonInstance::generate(5, 3.0, 5.0, 4).unwrap();
        for v in poly.vertices() {
            let r = (v[0] * v[0] + v[1] * v[1]).sqrt();
            assert!((3.0..=5.0).contains(&r));
        }
    }

    #[test]
    fn generation_is_deterministic_and_sorted() {
        let a = PolygonInstance::generate(12, 3.0, 5.0, 99).unwrap();
        let b = PolygonInstance::generate(12, 3.0, 5.0, 99).unwrap();
        assert_eq!(a, b);
        let mut prev = f64::NEG_INFINITY;
        for v in a.vertices() {
            let angle = v[1].atan2(v[0]).rem_euclid(std::f64::consts::TAU);
            assert!(angle > prev);
            prev = angle;
        }
    }

    #[test]
    fn bad_params_are_rejected() {
        assert!(PolygonInstance::generate(2, 1.0, 2.0, 0).is_err());
        assert!(PolygonInstance::generate(5, 0.0, 2.0, 0).is_err());
        assert!(PolygonInstance::generate(5, 3.0, 2.0, 0).is_err());
    }

    #[test]
    fn origin_is_inside_and_far_points_are_not() {
        let poly = PolygonInstance::generate(9, 3.0, 5.0, 21).unwrap();
        assert!(poly.contains([0.0, 0.0]));
        assert!(!poly.contains([10.0, 10.0]));
        assert!(!poly.contains([-6.0, 0.1]));
    }

    #[test]
    fn edge_points_count_as_inside() {
        let square = PolygonInstance::from_vertices(vec![
            [1.0, 1.0],
            [-1.0, 1.0],
            [-1.0, -1.0],
            [1.0, -1.0],
        ])
        .unwrap();
        assert!(square.contains([1.0, 0.0]));
        assert!(square.contains([0.0, 1.0]));
        assert!(square.contains([1.0, 1.0]));
        assert!(!square.contains([1.0 + 1e-9, 0.0]));
    }

    #[test]
    fn from_vertices_requires_angular_order() {
        let err = PolygonInstance::from_vertices(vec![
            [1.0, 1.0],
            [1.0, -1.0],
            [-1.0, 1.0],
        ])
        .unwrap_err();
        assert!(matches!(err, Error::BadParams(_)));
    }

    #[test]
    fn interior_samples_lie_inside_and_are_deterministic() {
        let poly = PolygonInstance::generate(7, 3.0, 5.0, 5).unwrap();
        let a = poly.sample_interior(600, 17);
        let b = poly.sample_interior(600, 17);
        assert_eq!(a, b);
        assert_eq!(a.n(), 600);
        for row in a.x().rows() {
            assert!(poly.contains([row[0], row[1]]));
        }
    }

    #[test]
    fn grid_labels_follow_the_scoring_order() {
        let poly = PolygonInstance::generate(6, 3.0, 5.0, 2).unwrap();
        let (min, max) = poly.bounding_box();
        let spec = GridSpec::new(min[0], max[0], min[1], max[1], 200).unwrap();
        let cells = label_grid(&poly, &spec);
        assert_eq!(cells.len(), 40_000);
        assert_eq!(cells[0].x, spec.x_at(0));
        assert_eq!(cells[0].y, spec.y_at(0));
        assert_eq!(cells[199].x, spec.x_at(199));
        assert_eq!(cells[200].y, spec.y_at(1));
    }

    #[test]
    fn grid_window_strictly_inside_is_all_inside() {
        let triangle = PolygonInstance::from_vertices(vec![
            [100.0, 1.0],
            [-100.0, 100.0],
            [-100.0, -100.0],
        ])
        .unwrap();
        let spec = GridSpec::new(-1.0, 1.0, -0.5, 0.5, 20).unwrap();
        assert!(label_grid(&triangle, &spec).iter().all(|c| c.inside));
    }
}
