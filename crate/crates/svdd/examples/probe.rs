use svdd::*;
fn main() {
    for n_train in [300usize, 500, 700] {
        for crit in [BandwidthConfig::mean(), BandwidthConfig::median()] {
            let name = crit.criterion.name();
            let mut worst_in: f64 = 1.0;
            for seed in [41u64, 141, 241, 341, 441, 541, 641] {
                let train_data = synth::banana(n_train, seed);
                let held = synth::banana(200, seed + 1);
                let model = train(&train_data, &TrainConfig::new(0.001, crit.clone())).unwrap();
                let inl = model.classify(&held).unwrap().points.iter().filter(|p| !p.is_outlier).count() as f64 / 200.0;
                worst_in = worst_in.min(inl);
            }
            println!("banana n{n_train} {name}: worst inlier {worst_in:.3}");
        }
    }
    for n_per in [150usize, 250, 350] {
        for crit in [BandwidthConfig::mean(), BandwidthConfig::median()] {
            let name = crit.criterion.name();
            let mut worst_in: f64 = 1.0;
            for seed in [43u64, 143, 243, 343, 443] {
                let train_data = synth::two_clusters(n_per, 8.0, seed);
                let held = synth::two_clusters(100, 8.0, seed + 1);
                let model = train(&train_data, &TrainConfig::new(0.001, crit.clone())).unwrap();
                let inl = model.classify(&held).unwrap().points.iter().filter(|p| !p.is_outlier).count() as f64 / held.n() as f64;
                worst_in = worst_in.min(inl);
            }
            println!("two_clusters n_per{n_per} {name}: worst inlier {worst_in:.3}");
        }
    }
}
