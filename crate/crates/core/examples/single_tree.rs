//! One search tree driven by hand: select, expand, backpropagate, then a
//! dump of the nodes with their depth-scaled windows.
//!
//!     cargo run --release --example single_tree -- [iterations] [hypersphere|logistic]

use cmcts::space::Evaluator;
use cmcts::tree::{window_scale, Tree, TreeConfig};
use cmcts::{make_benchmark, BenchmarkId, Budget, Kernel, Objective, RandomStream};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let iterations: usize = args.next().map(|s| s.parse()).transpose()?.unwrap_or(40);
    let kernel = match args.next().as_deref() {
        Some("logistic") => Kernel::Logistic,
        _ => Kernel::Hypersphere,
    };

    let f = make_benchmark(BenchmarkId::F17);
    let mut eval = Evaluator::new(&f, Budget::new(10_000), false);
    let mut rng = RandomStream::new(9);
    let root = vec![0.15, 0.85];
    let value = eval.eval_unit(&root, &mut rng)?;

    let cfg = TreeConfig {
        exploration: 0.5,
        decay: 0.08,
        scale: 0.5,
        max_depth: Some(12),
        ..TreeConfig::default()
    };
    println!("window radius by depth: {:?}", (0..6).map(|d| format!("{:.4}", window_scale(d, cfg.decay, cfg.scale))).collect::<Vec<_>>());

    let mut tree = Tree::new(root, value, cfg, kernel, Default::default())?;
    for i in 0..iterations {
        let path = tree.select();
        let child = tree.iterate(&mut eval, &mut rng)?;
        if i % 10 == 0 {
            println!("iter {i:>3}: path {path:?} -> {child:?}, best {:.6}", tree.best().value);
        }
    }
    let best = tree.best();
    let p = f.space().denormalize(&best.point)?;
    println!("{} nodes, {} evals, best {:.6} at {p:?} (depth {})", tree.len(), eval.budget().used(), best.value, best.depth);
    println!("{}", tree.dump());
    Ok(())
}
