use cmcts::orchestrator::{
    adapt_window, optimize, prune, resolve_target, run_global_batch, run_local_stage, select_top, Candidate,
    RunLog, Seed,
};
use cmcts::tree::window_scale;
use cmcts::{make_benchmark, BenchmarkId, Budget, Objective, OptimizerConfig, RandomStream};

fn candidate(value: f64, tree: usize) -> Candidate {
    Candidate {
        point: vec![0.5],
        value,
        decay: 0.05 + 0.001 * tree as f64,
        final_window: 0.1 * (tree + 1) as f64,
        tree,
    }
}

fn seed(value: f64, origin: usize, improved: bool) -> Seed {
    Seed {
        point: vec![0.5, 0.5],
        value,
        decay: 0.07,
        window: 0.2,
        origin,
        improved,
    }
}

fn small_config() -> OptimizerConfig {
    let mut cfg = OptimizerConfig::default();
    cfg.global.tree_count = 6;
    cfg.global.iterations_per_tree = Some(15);
    cfg.local.seed_count = 3;
    cfg.local.stages = 3;
    cfg.local.iterations_per_stage = Some(20);
    cfg
}

#[test]
fn adapt_window_examples() {
    assert_eq!(adapt_window(0.4, 3.0, 3.0, 0.0, 1.0, 1e-9, 0.5), 0.2);
    assert_eq!(adapt_window(0.4, 3.0, 0.0, 0.0, 1.0, 1e-9, 0.5), 0.4);
    let half = adapt_window(1.0, 10.0, 5.0, 0.0, 1.0, 1e-15, 0.7);
    assert!((half - 0.5).abs() < 1e-12);
    // worse values also take the decay branch
    assert_eq!(adapt_window(0.4, 3.0, 4.0, 0.0, 1.0, 1e-9, 0.7), 0.4 * 0.7);
}

#[test]
fn select_top_examples() {
    let c = vec![candidate(3.0, 0), candidate(1.0, 1), candidate(2.0, 2)];
    let top = select_top(&c, 1);
    assert_eq!(top.len(), 1);
    assert_eq!(top[0].value, 1.0);
    let top = select_top(&c, 2);
    assert_eq!(top.iter().map(|c| c.value).collect::<Vec<_>>(), vec![1.0, 2.0]);
    assert_eq!(select_top(&c, 10).len(), 3);
    let seeds: Vec<Seed> = top.iter().map(Seed::from).collect();
    assert_eq!(seeds[0].decay, c[1].decay);
    assert_eq!(seeds[0].window, c[1].final_window);
    assert_eq!(seeds[1].origin, 2);
}

#[test]
fn select_top_breaks_ties_by_tree_index() {
    let c = vec![candidate(1.0, 4), candidate(1.0, 2), candidate(1.0, 3)];
    let top = select_top(&c, 2);
    assert_eq!(top.iter().map(|c| c.tree).collect::<Vec<_>>(), vec![2, 3]);
}

#[test]
fn prune_examples() {
    let all = vec![seed(3.0, 0, true), seed(1.0, 1, true), seed(2.0, 2, true)];
    assert_eq!(prune(all).len(), 3);
    let none = vec![seed(3.0, 0, false), seed(1.0, 1, false), seed(2.0, 2, false)];
    let kept = prune(none);
    assert_eq!(kept.len(), 1);
    assert_eq!(kept[0].value, 1.0);
    let mixed = vec![seed(3.0, 0, true), seed(1.0, 1, false), seed(2.0, 2, false)];
    let kept = prune(mixed);
    assert_eq!(kept.iter().map(|s| s.origin).collect::<Vec<_>>(), vec![0, 1]);
}

#[test]
fn single_tree_without_iterations_returns_its_root() {
    let f = make_benchmark(BenchmarkId::F9);
    let mut cfg = OptimizerConfig::default();
    cfg.global.tree_count = 1;
    cfg.global.iterations_per_tree = Some(0);
    let mut log = RunLog::new(Budget::new(100), false);
    let c = run_global_batch(&f, &cfg, &mut log, &RandomStream::new(4)).unwrap();
    assert_eq!(c.len(), 1);
    assert_eq!(log.records.len(), 1);
    assert_eq!(c[0].value, log.records[0].value);
    assert_eq!(c[0].final_window, window_scale(0, c[0].decay, cfg.global.scale));
}

#[test]
fn candidates_carry_the_tree_parameters() {
    let f = make_benchmark(BenchmarkId::F10);
    let cfg = small_config();
    let mut log = RunLog::new(Budget::new(10_000), false);
    let c = run_global_batch(&f, &cfg, &mut log, &RandomStream::new(8)).unwrap();
    assert_eq!(c.len(), cfg.global.tree_count);
    for (i, cand) in c.iter().enumerate() {
        assert_eq!(cand.tree, i);
        assert!(cand.decay >= 0.05 && cand.decay <= 0.1);
        let depth = (0..=cfg.global.max_depth)
            .find(|&d| window_scale(d, cand.decay, cfg.global.scale) == cand.final_window);
        assert!(depth.is_some(), "final window is not a depth-scaled window");
    }
    assert_eq!(log.records.len(), log.budget.used());
}

#[test]
fn global_batch_improves_on_lhs_roots_for_the_sphere() {
    let f = make_benchmark(BenchmarkId::F1);
    let mut cfg = OptimizerConfig::default();
    cfg.global.iterations_per_tree = Some(200);
    let mut wins = 0;
    for s in 0..100 {
        let mut log = RunLog::new(Budget::new(1_000_000), false);
        let c = run_global_batch(&f, &cfg, &mut log, &RandomStream::new(1000 + s)).unwrap();
        let roots = log.records[..cfg.global.tree_count]
            .iter()
            .map(|r| r.value)
            .fold(f64::INFINITY, f64::min);
        let best = c.iter().map(|c| c.value).fold(f64::INFINITY, f64::min);
        if best < roots {
            wins += 1;
        }
    }
    assert!(wins >= 95, "{wins}/100");
}

#[test]
fn zero_iteration_stage_only_decays_windows() {
    let f = make_benchmark(BenchmarkId::F16);
    let cfg = OptimizerConfig::default();
    let seeds = vec![seed(0.5, 0, true), seed(0.2, 1, true)];
    let mut log = RunLog::new(Budget::new(100), false);
    let out = run_local_stage(&f, seeds.clone(), &cfg, 0, -1.0316, &mut log, &RandomStream::new(1)).unwrap();
    assert_eq!(log.records.len(), 0);
    for (a, b) in seeds.iter().zip(&out) {
        assert_eq!(b.point, a.point);
        assert_eq!(b.value, a.value);
        assert_eq!(b.window, a.window * cfg.local.delta);
        assert!(!b.improved);
    }
}

#[test]
fn seed_at_target_is_left_alone() {
    let f = make_benchmark(BenchmarkId::F16);
    let cfg = OptimizerConfig::default();
    let seeds = vec![seed(-1.0316, 0, true)];
    let mut log = RunLog::new(Budget::new(1000), false);
    let out = run_local_stage(&f, seeds.clone(), &cfg, 50, -1.0316, &mut log, &RandomStream::new(1)).unwrap();
    assert_eq!(out, seeds);
    assert_eq!(log.budget.used(), 0);
}

#[test]
fn stagnating_seed_contracts_geometrically() {
    // a constant objective never improves
    struct Flat(cmcts::SearchSpace);
    impl Objective for Flat {
        fn space(&self) -> &cmcts::SearchSpace {
            &self.0
        }
        fn known_min(&self) -> Option<f64> {
            None
        }
        fn evaluate(&self, _: &[f64], _: &mut RandomStream) -> f64 {
            1.0
        }
    }
    let f = Flat(cmcts::SearchSpace::uniform(2, -1.0, 1.0).unwrap());
    let cfg = OptimizerConfig::default();
    let mut seeds = vec![seed(1.0, 0, true)];
    let b0 = seeds[0].window;
    let mut log = RunLog::new(Budget::new(100_000), false);
    for s in 1..=4 {
        seeds = prune(run_local_stage(&f, seeds, &cfg, 10, 0.5, &mut log, &RandomStream::new(s)).unwrap());
        let mut expected = b0;
        for _ in 0..s {
            expected *= cfg.local.delta;
        }
        assert_eq!(seeds.len(), 1);
        assert_eq!(seeds[0].window, expected);
    }
}

#[test]
fn local_stages_finish_the_six_hump_camel() {
    let f = make_benchmark(BenchmarkId::F16);
    let mut cfg = OptimizerConfig::default();
    cfg.local.iterations_per_stage = Some(500);
    let target = -1.0316;
    let mut finals = Vec::new();
    for s in 0..10u64 {
        let mut rng = RandomStream::new(s);
        // a point within 0.1 (problem units) of the optimum
        let offset = cmcts::sampling::hypersphere_offset(2, &cmcts::sampling::HypersphereConfig::volume(0.1), &mut rng);
        let start: Vec<f64> = [0.0898, -0.7126].iter().zip(&offset).map(|(x, o)| x + o).collect();
        let point = f.space().normalize(&start).unwrap();
        let value = f.evaluate(&start, &mut rng);
        // window matched to the 0.1 distance bound (0.01 of the range)
        let mut seeds = vec![Seed {
            point,
            value,
            decay: 0.075,
            window: 0.01,
            origin: 0,
            improved: true,
        }];
        let mut log = RunLog::new(Budget::new(1_000_000), false);
        for stage in 0..3 {
            let stage_rng = RandomStream::new(s).split(100 + stage);
            let best = seeds.iter().map(|s| s.value).fold(f64::INFINITY, f64::min);
            let f_target = resolve_target(Some(target), best, value);
            seeds = prune(run_local_stage(&f, seeds, &cfg, 500, f_target, &mut log, &stage_rng).unwrap());
            assert!(seeds.iter().all(|s| s.window > 0.0));
        }
        let best = seeds.iter().map(|s| s.value).fold(f64::INFINITY, f64::min);
        finals.push(best);
    }
    let hits = finals.iter().filter(|b| (*b - target).abs() <= 1e-4).count();
    assert!(hits >= 9, "{hits}/10: {finals:?}");
}

#[test]
fn target_above_a_seed_is_a_contract_violation() {
    let f = make_benchmark(BenchmarkId::F16);
    let mut log = RunLog::new(Budget::new(100), false);
    let err = run_local_stage(
        &f,
        vec![seed(-1.0, 0, true)],
        &OptimizerConfig::default(),
        5,
        -0.5,
        &mut log,
        &RandomStream::new(0),
    )
    .unwrap_err();
    assert!(matches!(err, cmcts::Error::Contract(_)));
}

#[test]
fn resolved_targets_never_exceed_the_best() {
    assert_eq!(resolve_target(Some(-1.0316), -1.0, 5.0), -1.0316);
    let t = resolve_target(Some(-1.0316), -1.03162, 5.0);
    assert!(t < -1.03162);
    assert!((t - (-1.03162 - 0.1 * (5.0 + 1.03162))).abs() < 1e-12);
    let t = resolve_target(None, 2.0, 2.0);
    assert!(t < 2.0);
}

#[test]
fn roots_only_budget_returns_the_best_root() {
    let f = make_benchmark(BenchmarkId::F2);
    let cfg = OptimizerConfig::default();
    let r = optimize(&f, cfg.global.tree_count, &cfg, &RandomStream::new(2), false).unwrap();
    assert_eq!(r.evals_used, cfg.global.tree_count);
    let best = r.evaluations.iter().map(|e| e.value).fold(f64::INFINITY, f64::min);
    assert_eq!(r.best_value, best);
    assert!(optimize(&f, cfg.global.tree_count - 1, &cfg, &RandomStream::new(2), false).is_err());
}

#[test]
fn budget_and_trace_accounting() {
    for id in [BenchmarkId::F5, BenchmarkId::F15, BenchmarkId::F21] {
        let f = make_benchmark(id);
        let r = optimize(&f, 3_000, &OptimizerConfig::default(), &RandomStream::new(6), true).unwrap();
        assert_eq!(r.trace.len(), r.evals_used);
        assert_eq!(r.evaluations.len(), r.evals_used);
        assert!(r.evals_used <= 3_000);
        assert!(r.trace.windows(2).all(|w| w[1] <= w[0]));
        assert_eq!(*r.trace.last().unwrap(), r.best_value);
        let mut noise = RandomStream::new(0);
        assert_eq!(f.evaluate(&r.best_point, &mut noise), r.best_value);
        assert!(f.space().contains(&r.best_point));
    }
}

#[test]
fn target_stops_the_run_early() {
    let f = make_benchmark(BenchmarkId::F1);
    let r = optimize(&f, 50_000, &OptimizerConfig::default(), &RandomStream::new(1), false).unwrap();
    assert!(r.best_value <= 1e-12);
    assert!(r.evals_used < 50_000);
}

#[test]
fn serial_and_parallel_runs_are_bit_identical() {
    for (id, kernel) in [
        (BenchmarkId::F7, cmcts::Kernel::Logistic),
        (BenchmarkId::F20, cmcts::Kernel::Logistic),
        (BenchmarkId::F9, cmcts::Kernel::Hypersphere),
    ] {
        let f = make_benchmark(id);
        let mut cfg = OptimizerConfig::with_kernel(kernel);
        let serial = optimize(&f, 8_000, &cfg, &RandomStream::new(12), true).unwrap();
        cfg.parallel = true;
        let parallel = optimize(&f, 8_000, &cfg, &RandomStream::new(12), true).unwrap();
        assert_eq!(serial.trace, parallel.trace);
        assert_eq!(serial.evaluations, parallel.evaluations);
        assert_eq!(serial.best_point, parallel.best_point);
    }
}

#[test]
fn invalid_configs_are_rejected() {
    let f = make_benchmark(BenchmarkId::F16);
    let mut cfg = OptimizerConfig::default();
    cfg.local.delta = 1.0;
    assert!(optimize(&f, 1000, &cfg, &RandomStream::new(0), false).is_err());
    let mut cfg = OptimizerConfig::default();
    cfg.global.c_large = 10.0 * cfg.global.c_base;
    assert!(optimize(&f, 1000, &cfg, &RandomStream::new(0), false).is_err());
    let mut cfg = OptimizerConfig::default();
    cfg.local.c_local = 1e-3;
    assert!(optimize(&f, 1000, &cfg, &RandomStream::new(0), false).is_err());
}
