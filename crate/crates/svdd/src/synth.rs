//! Seeded synthetic 2-D data generators for tests, demos, and evaluation.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dataset::Dataset;

/// Crescent-shaped cloud: points along a circular arc with radial jitter.
pub fn banana(n: usize, seed: u64) -> Dataset {
    assert!(n >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows = (0..n)
        .map(|_| {
            let t: f64 = rng.random_range(-2.2..2.2);
            let r = 3.0 + rng.random_range(-0.35..0.35);
            vec![r * t.sin(), r * t.cos() - 2.0]
        })
        .collect();
    Dataset::from_rows(rows).expect("generated rows are finite")
}

/// Two round Gaussian-ish clusters separated along x.
pub fn two_clusters(n_per_cluster: usize, separation: f64, seed: u64) -> Dataset {
    assert!(n_per_cluster >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(2 * n_per_cluster);
    for c in 0..2 {
        let center_x = if c == 0 { 0.0 } else { separation };
        for _ in 0..n_per_cluster {
            // sum of uniforms: light-tailed, bounded jitter
            let jx: f64 = (0..4).map(|_| rng.random_range(-0.5..0.5)).sum();
            let jy: f64 = (0..4).map(|_| rng.random_range(-0.5..0.5)).sum();
            rows.push(vec![center_x + jx, jy]);
        }
    }
    Dataset::from_rows(rows).expect("generated rows are finite")
}

/// Uniform points on a rectangular ring between 1.5 and 2.5 data diameters
/// away from the bounding box of `reference`; far enough that any sound
/// description scores them as outliers.
pub fn far_frame(reference: &Dataset, n: usize, seed: u64) -> Dataset {
    assert!(n >= 1);
    let (min, max) = reference.bounding_box();
    assert_eq!(min.len(), 2, "far_frame expects 2-D reference data");
    let diameter = ((max[0] - min[0]).powi(2) + (max[1] - min[1]).powi(2))
        .sqrt()
        .max(1e-9);
    let center = [(min[0] + max[0]) / 2.0, (min[1] + max[1]) / 2.0];
    let inner = 1.5 * diameter;
    let outer = 2.5 * diameter;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::with_capacity(n);
    while rows.len() < n {
        let x: f64 = rng.random_range(-outer..outer);
        let y: f64 = rng.random_range(-outer..outer);
        if x.abs().max(y.abs()) >= inner {
            rows.push(vec![center[0] + x, center[1] + y]);
        }
    }
    Dataset::from_rows(rows).expect("generated rows are finite")
}
