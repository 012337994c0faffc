//! The two-phase protocol step by step: a global batch, the top candidates,
//! then local stages whose windows grow or shrink with each seed's progress.
//!
//!     cargo run --release --example adaptive_windows -- [F1..F23] [seed]

use cmcts::orchestrator::{prune, resolve_target, run_global_batch, run_local_stage, select_top, RunLog, Seed};
use cmcts::{make_benchmark, BenchmarkId, Budget, Objective, OptimizerConfig, RandomStream};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let id: BenchmarkId = args.next().as_deref().unwrap_or("F16").parse()?;
    let seed: u64 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(4);
    let f = make_benchmark(id);

    let mut cfg = OptimizerConfig::default();
    cfg.global.iterations_per_tree = Some(30);
    let rng = RandomStream::new(seed);
    let mut log = RunLog::new(Budget::new(200_000), false);

    let candidates = run_global_batch(&f, &cfg, &mut log, &rng)?;
    let root_best = log.records.iter().take(cfg.global.tree_count).map(|r| r.value).fold(f64::INFINITY, f64::min);
    println!("global batch: {} evals, best LHS root {root_best:.6}", log.records.len());
    let top = select_top(&candidates, cfg.local.seed_count);
    for c in &top {
        println!("  tree {:>2}: value {:.6}, decay {:.4}, window {:.4}", c.tree, c.value, c.decay, c.final_window);
    }

    let mut seeds: Vec<Seed> = top.iter().map(Seed::from).collect();
    for stage in 0..cfg.local.stages {
        let best = seeds.iter().map(|s| s.value).fold(f64::INFINITY, f64::min);
        let target = resolve_target(f.known_min(), best, root_best);
        seeds = run_local_stage(&f, seeds, &cfg, 50, target, &mut log, &rng.split(100 + stage as u64))?;
        println!("stage {stage}: target {target:.6}");
        for s in &seeds {
            println!("  origin {:>2}: value {:.8}, window {:.3e}, improved {}", s.origin, s.value, s.window, s.improved);
        }
        seeds = prune(seeds);
    }
    let best = seeds.iter().min_by(|a, b| a.value.total_cmp(&b.value)).unwrap();
    println!("best {:.8} at {:?} after {} evals", best.value, f.space().denormalize(&best.point)?, log.records.len());
    Ok(())
}
