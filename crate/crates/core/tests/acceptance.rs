//! Exit-gate checks. Each criterion prints one PASS/FAIL line; the process
//! fails if any criterion fails.

use std::process::{Command, ExitCode};
use std::time::Instant;

use rand::Rng;

use cmcts::benchmarks::benchmark_value;
use cmcts::harness::{execute, run_experiment, ExperimentSpec, TrialRecord};
use cmcts::orchestrator::adapt_window;
use cmcts::sampling::{hypersphere_offset, lhs_sample, HypersphereConfig};
use cmcts::space::Evaluator;
use cmcts::surrogate::{distance_cdf, rbf_centers, sample_step_size, DistanceModel, LogisticModel};
use cmcts::tree::{ucb_score, Tree, TreeConfig};
use cmcts::{make_benchmark, optimize, BenchmarkId, Budget, Kernel, OptimizerConfig, RandomStream};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

// Criterion 1
const WELDED_BEAM: ([f64; 4], f64, f64) = ([0.204508, 3.273933, 9.046498, 0.205730], 1.697958, 1e-5);
const PRESSURE_VESSEL: ([f64; 4], f64, f64) = ([0.779536, 0.385230, 40.332212, 199.959890], 5898.135917, 1e-3);

// Criterion 2
const MINIMA_TOL: f64 = 1e-6;
const F8_TOL: f64 = 1e-1;
const DIXON_SZEGO_TOL: f64 = 1e-3;

// Criterion 3
const DESK_BUDGET: usize = 20_000;
const DESK_TRIALS: usize = 10;
const DESK_TOL: f64 = 1e-3;
const DESK_REQUIRED: usize = 8;
const F14_TARGET: f64 = 0.998004;

// Criterion 4
const F1_BUDGET: usize = 100_000;
const F1_TRIALS: usize = 10;
const F1_THRESHOLD: f64 = 1e-6;
const F1_REQUIRED: usize = 8;

// Criterion 5
const SWEEP_BUDGET: usize = 50_000;
const SWEEP_TRIALS: usize = 10;
const SWEEP_REQUIRED: usize = 20;

// Criterion 6
const RADIAL_SAMPLES: usize = 100_000;
const RADIAL_KS: f64 = 0.01;
const GRADIENT_REL_TOL: f64 = 1e-5;
const STEP_SAMPLES: usize = 10_000;
const STEP_KS: f64 = 0.02;
const PROPERTY_SECONDS: f64 = 120.0;

fn cli_eval(problem: &str, x: &[f64]) -> Result<serde_json::Value, String> {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_cmcts"));
    cmd.arg("eval").arg(problem);
    for v in x {
        cmd.arg(v.to_string());
    }
    let out = cmd.output().map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(String::from_utf8_lossy(&out.stderr).into_owned());
    }
    serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())
}

fn golden_designs() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, (x, want, tol)) in [("welded_beam", WELDED_BEAM), ("pressure_vessel", PRESSURE_VESSEL)] {
        match cli_eval(name, &x) {
            Ok(report) => {
                let value = report["value"].as_f64().unwrap_or(f64::NAN);
                let feasible = report["feasible"] == true;
                let gap = (value - want).abs();
                pass &= gap <= tol && feasible;
                parts.push(format!("{name} {value:.6} (gap {gap:.2e}, tol {tol:.0e}, feasible {feasible})"));
            }
            Err(e) => {
                pass = false;
                parts.push(format!("{name}: {e}"));
            }
        }
    }
    outcome(pass, parts.join("; "))
}

fn minimizer(id: BenchmarkId) -> Vec<f64> {
    use BenchmarkId::*;
    match id {
        F5 => vec![1.0; 30],
        F8 => vec![420.968_746; 30],
        F12 => vec![-1.0; 30],
        F13 => vec![1.0; 30],
        F19 => vec![0.114_614, 0.555_649, 0.852_547],
        F20 => vec![0.201_69, 0.150_011, 0.476_874, 0.275_332, 0.311_652, 0.657_3],
        F21 | F22 => vec![4.0; 4],
        F23 => vec![4.000_746_531, 4.000_592_935, 3.999_663_399, 3.999_509_686],
        _ => vec![0.0; 30],
    }
}

fn benchmark_minima() -> Outcome {
    use BenchmarkId::*;
    let ids = [F1, F2, F3, F4, F5, F6, F7, F8, F9, F10, F11, F12, F13, F19, F20, F21, F22, F23];
    let mut failures = Vec::new();
    let mut worst_scalable: f64 = 0.0;
    for id in ids {
        let x = minimizer(id);
        // F7 at the noise floor
        let noise = (id == F7).then_some(0.0);
        let value = benchmark_value(id, &x, noise).expect("valid point");
        let fmin = make_benchmark(id).fmin();
        let tol = match id {
            F8 => F8_TOL,
            F19 | F20 | F21 | F22 | F23 => DIXON_SZEGO_TOL,
            _ => MINIMA_TOL,
        };
        let gap = (value - fmin).abs();
        if id.is_scalable() && id != F8 {
            worst_scalable = worst_scalable.max(gap);
        }
        if !(gap <= tol) {
            failures.push(format!("{id} {value:.6} vs {fmin} (gap {gap:.2e} > {tol:.0e})"));
        }
    }
    let detail = if failures.is_empty() {
        format!("all 18 minima within tolerance; worst F1-F13 gap {worst_scalable:.2e}")
    } else {
        format!("worst F1-F13 gap {worst_scalable:.2e}; failing: {}", failures.join(", "))
    };
    outcome(failures.is_empty(), detail)
}

fn sweep(problems: &[&str], optimizers: &[&str], trials: usize, budget: usize, seed: u64) -> Vec<TrialRecord> {
    let spec = ExperimentSpec {
        problems: problems.iter().map(|s| s.to_string()).collect(),
        optimizers: optimizers.iter().map(|s| s.to_string()).collect(),
        trials,
        budget: Some(budget),
        master_seed: seed,
        ..ExperimentSpec::default()
    };
    execute(&spec).expect("sweep runs").trials
}

fn desk_convergence() -> Outcome {
    let problems = ["F14", "F16", "F17", "F18", "F19"];
    let trials = sweep(&problems, &["mcts_logistic"], DESK_TRIALS, DESK_BUDGET, 1);
    let mut pass = true;
    let mut parts = Vec::new();
    for name in problems {
        let id: BenchmarkId = name.parse().unwrap();
        let target = if id == BenchmarkId::F14 { F14_TARGET } else { make_benchmark(id).fmin() };
        let finals: Vec<f64> = trials
            .iter()
            .filter(|t| t.problem.to_string() == name)
            .map(|t| t.result.best_value)
            .collect();
        let hits = finals.iter().filter(|v| **v <= target + DESK_TOL).count();
        let worst = finals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        pass &= hits >= DESK_REQUIRED;
        parts.push(format!("{name} {hits}/{DESK_TRIALS} (worst {worst:.6})"));
    }
    outcome(pass, parts.join(", "))
}

fn f1_convergence() -> Outcome {
    let trials = sweep(&["F1"], &["mcts_logistic"], F1_TRIALS, F1_BUDGET, 1);
    let hits = trials.iter().filter(|t| t.result.best_value <= F1_THRESHOLD).count();
    let worst = trials.iter().map(|t| t.result.best_value).fold(f64::NEG_INFINITY, f64::max);
    outcome(
        hits >= F1_REQUIRED,
        format!("{hits}/{F1_TRIALS} trials <= {F1_THRESHOLD:.0e} (worst {worst:.3e})"),
    )
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(|a, b| a.total_cmp(b));
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

fn dominance_over_random() -> Outcome {
    let names: Vec<String> = BenchmarkId::ALL.iter().map(|id| id.to_string()).collect();
    let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    let trials = sweep(&refs, &["mcts_logistic", "random"], SWEEP_TRIALS, SWEEP_BUDGET, 1);
    let mut wins = 0;
    let mut losses = Vec::new();
    for name in &names {
        let finals = |opt: &str| -> Vec<f64> {
            trials
                .iter()
                .filter(|t| &t.problem.to_string() == name && t.optimizer.id() == opt)
                .map(|t| t.result.best_value)
                .collect()
        };
        let (m, r) = (median(finals("mcts_logistic")), median(finals("random")));
        if m < r {
            wins += 1;
        } else {
            losses.push(format!("{name} ({m:.4e} vs {r:.4e})"));
        }
    }
    let detail = if losses.is_empty() {
        format!("{wins}/23 benchmarks")
    } else {
        format!("{wins}/23 benchmarks; not better on {}", losses.join(", "))
    };
    outcome(wins >= SWEEP_REQUIRED, detail)
}

fn ks_statistic(mut samples: Vec<f64>, cdf: impl Fn(f64) -> f64) -> f64 {
    samples.sort_by(|a, b| a.total_cmp(b));
    let n = samples.len() as f64;
    samples
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

fn radial_law() -> Result<String, String> {
    let mut worst: f64 = 0.0;
    for d in [1usize, 2, 5, 30] {
        let r_max = 0.3;
        let mut rng = RandomStream::new(40 + d as u64);
        let radii: Vec<f64> = (0..RADIAL_SAMPLES)
            .map(|_| {
                let o = hypersphere_offset(d, &HypersphereConfig::volume(r_max), &mut rng);
                o.iter().map(|v| v * v).sum::<f64>().sqrt() / r_max
            })
            .collect();
        let ks = ks_statistic(radii, |t| t.clamp(0.0, 1.0).powi(d as i32));
        worst = worst.max(ks);
        if !(ks < RADIAL_KS) {
            return Err(format!("radial KS {ks:.4} at d={d}"));
        }
    }
    Ok(format!("radial KS max {worst:.4}"))
}

fn lhs_occupancy() -> Result<String, String> {
    for (n, d) in [(7, 3), (50, 30), (200, 4)] {
        let pts = lhs_sample(n, d, &mut RandomStream::new(n as u64)).map_err(|e| e.to_string())?;
        for j in 0..d {
            let mut count = vec![0; n];
            for p in &pts {
                count[((p[j] * n as f64) as usize).min(n - 1)] += 1;
            }
            if count.iter().any(|c| *c != 1) {
                return Err(format!("LHS n={n} d={d} column {j}"));
            }
        }
    }
    Ok("LHS exact".into())
}

fn gradient_check() -> Result<String, String> {
    let mut rng = RandomStream::new(5);
    let mut worst: f64 = 0.0;
    for _ in 0..20 {
        let dim = 6;
        let x: Vec<Vec<f64>> = (0..40)
            .map(|_| (0..dim).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect())
            .collect();
        let y: Vec<bool> = (0..40).map(|_| rng.random::<f64>() < 0.4).collect();
        let model = LogisticModel {
            weights: (0..dim).map(|_| rng.random::<f64>() * 4.0 - 2.0).collect(),
            bias: rng.random::<f64>() - 0.5,
        };
        let l2 = 1e-3;
        let g = model.gradient(&x, &y, l2);
        let h = 1e-6;
        let fd: Vec<f64> = (0..=dim)
            .map(|i| {
                let (mut up, mut down) = (model.clone(), model.clone());
                if i < dim {
                    up.weights[i] += h;
                    down.weights[i] -= h;
                } else {
                    up.bias += h;
                    down.bias -= h;
                }
                (up.loss(&x, &y, l2) - down.loss(&x, &y, l2)) / (2.0 * h)
            })
            .collect();
        let diff = g.iter().zip(&fd).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
        let norm = fd.iter().map(|v| v * v).sum::<f64>().sqrt();
        worst = worst.max(diff / norm);
    }
    if worst < GRADIENT_REL_TOL {
        Ok(format!("gradient rel err {worst:.1e}"))
    } else {
        Err(format!("gradient rel err {worst:.1e}"))
    }
}

fn step_sampler() -> Result<String, String> {
    let r_max = 0.2;
    let model = DistanceModel {
        model: LogisticModel {
            weights: vec![2.0, -1.0, 3.0, 0.5, -2.5, 1.0, 0.0, -1.5],
            bias: -0.5,
        },
        centers: rbf_centers(8, r_max),
    };
    let cdf = distance_cdf(&model, r_max, 256);
    // target by fine Simpson quadrature of the success density
    let m = 20_000;
    let h = r_max / m as f64;
    let dens: Vec<f64> = (0..=m).map(|i| model.probability(i as f64 * h)).collect();
    let mut target = vec![0.0; m / 2 + 1];
    for k in 1..=m / 2 {
        let i = 2 * k;
        target[k] = target[k - 1] + h / 3.0 * (dens[i - 2] + 4.0 * dens[i - 1] + dens[i]);
    }
    let total = target[m / 2];
    let target_cdf = |r: f64| {
        let pos = (r / (2.0 * h)).clamp(0.0, (m / 2) as f64);
        let k = (pos as usize).min(m / 2 - 1);
        let t = pos - k as f64;
        (target[k] + t * (target[k + 1] - target[k])) / total
    };
    let mut rng = RandomStream::new(77);
    let draws: Vec<f64> = (0..STEP_SAMPLES).map(|_| sample_step_size(&cdf, &mut rng)).collect();
    let ks = ks_statistic(draws, target_cdf);
    if ks < STEP_KS {
        Ok(format!("step KS {ks:.4}"))
    } else {
        Err(format!("step KS {ks:.4}"))
    }
}

fn ucb_checks() -> Result<String, String> {
    if ucb_score(-1e9, 0.0, 10.0, 1.0) != f64::INFINITY {
        return Err("unvisited arm not forced".into());
    }
    let f = make_benchmark(BenchmarkId::F17);
    for seed in 0..20u64 {
        let run = || {
            let mut eval = Evaluator::new(&f, Budget::new(5_000), false);
            let mut rng = RandomStream::new(seed);
            let root = vec![0.2, 0.8];
            let v = eval.eval_unit(&root, &mut rng).unwrap();
            let cfg = TreeConfig {
                exploration: 1.0,
                max_depth: Some(8),
                ..TreeConfig::default()
            };
            let mut tree = Tree::new(root, v, cfg, Kernel::Logistic, Default::default()).unwrap();
            let mut best = Vec::new();
            for _ in 0..60 {
                tree.iterate(&mut eval, &mut rng).unwrap();
                best.push(tree.best().value);
            }
            (tree, best)
        };
        let (tree, best) = run();
        let (again, _) = run();
        if tree.dump() != again.dump() {
            return Err(format!("seed {seed}: selection not deterministic"));
        }
        if best.windows(2).any(|w| w[1] > w[0]) {
            return Err(format!("seed {seed}: best-so-far increased"));
        }
        let nodes = tree.nodes();
        let terminal: u64 = nodes
            .iter()
            .map(|n| n.visits - n.children.iter().map(|&c| nodes[c].visits).sum::<u64>())
            .sum();
        if terminal != nodes[0].visits || nodes[0].visits != tree.backprops() {
            return Err(format!("seed {seed}: visit conservation"));
        }
    }
    Ok("UCB ok".into())
}

fn window_fixed_points() -> Result<String, String> {
    for (b, f, t, delta) in [(0.3, 5.0, 1.0, 0.7), (1e-4, -2.0, -9.0, 0.5), (0.01, 0.0, -1e-3, 0.9)] {
        if adapt_window(b, f, f, t, 1.0, 1e-9, delta) != b * delta {
            return Err("decay fixed point".into());
        }
        if adapt_window(b, f, t, t, 1.0, 1e-9, delta) != b {
            return Err("ratio-1 fixed point".into());
        }
    }
    Ok("window fixed points exact".into())
}

fn concurrency_identity() -> Result<String, String> {
    let f = make_benchmark(BenchmarkId::F17);
    let mut cfg = OptimizerConfig::default();
    let serial = optimize(&f, 6_000, &cfg, &RandomStream::new(3), true).map_err(|e| e.to_string())?;
    cfg.parallel = true;
    let parallel = optimize(&f, 6_000, &cfg, &RandomStream::new(3), true).map_err(|e| e.to_string())?;
    if serial.evaluations == parallel.evaluations && serial.best_point == parallel.best_point {
        Ok("serial == concurrent".into())
    } else {
        Err("serial and concurrent runs differ".into())
    }
}

fn property_suites() -> Outcome {
    let start = Instant::now();
    let checks: [fn() -> Result<String, String>; 7] = [
        radial_law,
        lhs_occupancy,
        gradient_check,
        step_sampler,
        ucb_checks,
        window_fixed_points,
        concurrency_identity,
    ];
    let mut pass = true;
    let mut parts = Vec::new();
    for check in checks {
        match check() {
            Ok(s) => parts.push(s),
            Err(s) => {
                pass = false;
                parts.push(format!("FAILED {s}"));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    pass &= secs < PROPERTY_SECONDS;
    parts.push(format!("{secs:.1}s"));
    outcome(pass, parts.join(", "))
}

fn determinism() -> Outcome {
    let dirs = [tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap()];
    let mut bytes = Vec::new();
    for dir in &dirs {
        let spec = ExperimentSpec {
            problems: vec!["F7".into(), "F17".into(), "pressure_vessel".into()],
            optimizers: vec!["mcts_logistic".into(), "mcts_hypersphere".into(), "random".into(), "pso".into()],
            trials: 2,
            budget: Some(3_000),
            master_seed: 2024,
            out_dir: dir.path().to_path_buf(),
            ..ExperimentSpec::default()
        };
        run_experiment(&spec).expect("harness run");
        bytes.push(std::fs::read(dir.path().join("summary.json")).unwrap());
    }
    outcome(bytes[0] == bytes[1], format!("summary.json {} bytes", bytes[0].len()))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("1 golden designs", golden_designs),
        ("2 benchmark minima", benchmark_minima),
        ("3 desk-scale convergence", desk_convergence),
        ("4 F1 convergence", f1_convergence),
        ("5 dominance over random", dominance_over_random),
        ("6 property suites", property_suites),
        ("7 determinism", determinism),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (name, run) in criteria {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let o = run();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        println!("{verdict} criterion {name}: {} [{:.0}s]", o.detail, start.elapsed().as_secs_f64());
        failed += usize::from(!o.pass);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
