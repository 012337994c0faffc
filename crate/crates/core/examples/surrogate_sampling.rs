//! The rollout samplers in isolation: volume-uniform ball draws, and the
//! logistic direction/step-length models fitted on a synthetic history in
//! which only steps toward +x of moderate length succeed.

use cmcts::sampling::{hypersphere_offset, HypersphereConfig};
use cmcts::surrogate::{
    direction_features, distance_cdf, optimize_direction, rbf_centers, rbf_features, sample_step_size,
    train_logistic, DirectionModel, DistanceModel, TrainConfig,
};
use cmcts::RandomStream;
use rand::Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = RandomStream::new(3);
    let r_max = 0.2;

    for d in [1, 2, 5, 30] {
        let n = 20_000;
        let inner = (0..n)
            .filter(|_| {
                let o = hypersphere_offset(d, &HypersphereConfig::volume(r_max), &mut rng);
                o.iter().map(|v| v * v).sum::<f64>().sqrt() <= 0.5 * r_max
            })
            .count();
        println!("d = {d:>2}: P(r <= r_max/2) = {:.4} (volume law {:.4})", inner as f64 / n as f64, 0.5f64.powi(d as i32));
    }

    let dim = 4;
    let mut deltas = Vec::new();
    let mut labels = Vec::new();
    for _ in 0..400 {
        let delta: Vec<f64> = (0..dim).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect();
        let r = r_max * rng.random::<f64>();
        labels.push(delta[0] > 0.0 && (0.3 * r_max..0.7 * r_max).contains(&r));
        deltas.push((delta, r));
    }
    let centers = rbf_centers(8, r_max);
    let dir_x: Vec<Vec<f64>> = deltas.iter().map(|(d, _)| direction_features(d)).collect();
    let dist_x: Vec<Vec<f64>> = deltas.iter().map(|(_, r)| rbf_features(*r, &centers)).collect();
    let cfg = TrainConfig { iterations: 2000, ..TrainConfig::default() };
    let dir = DirectionModel { model: train_logistic(&dir_x, &labels, &cfg)?.model };
    let dist = DistanceModel { model: train_logistic(&dist_x, &labels, &cfg)?.model, centers };

    println!("direction weights {:?}", dir.model.weights.iter().map(|w| format!("{w:.2}")).collect::<Vec<_>>());
    let u = optimize_direction(&dir, &mut rng, 40);
    println!("hill-climbed direction {u:?}, p = {:.3}", dir.probability(&u));

    let cdf = distance_cdf(&dist, r_max, 256);
    let mut hist = [0usize; 10];
    for _ in 0..10_000 {
        let r = sample_step_size(&cdf, &mut rng);
        hist[((r / r_max * 10.0) as usize).min(9)] += 1;
    }
    // The step features are unit-width bumps, nearly flat across a window
    // this small, so the fitted step law stays close to uniform.
    println!("step-length histogram over [0, r_max] in tenths:");
    for (i, h) in hist.iter().enumerate() {
        println!("  {:.2}-{:.2} {:>5} {}", i as f64 / 10.0, (i + 1) as f64 / 10.0, h, "#".repeat(h / 50));
    }
    Ok(())
}
