//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs every criterion by default; pass criterion numbers as arguments to
//! run a subset (`cargo test --test acceptance -- 3 7`).

mod common;

use std::time::{Duration, Instant};

use layoutgen::datasets::{community_corpus, split, CommunityParams};
use layoutgen::graph::{bfs_bandwidth, bfs_order, graph_to_sequence, random_bfs_order, sequence_to_graph, BfsSequence};
use layoutgen::layout::{build_visibility_graph, VisibilityConfig};
use layoutgen::model::{
    forward_teacher_forced, load_checkpoint, loss_and_grad, prepare_hyperparams, read_checkpoint, sample_graphs,
    save_checkpoint, train, write_checkpoint, GrnnHyperparams, GrnnModel, TrainConfig,
};
use layoutgen::nn::Params;
use layoutgen::stats::{clustering_coefficients, degree_histogram, evaluate_sets, mmd_squared_raw, orbit_counts, EvalConfig, Kernel};
use layoutgen::{Exec, Graph, NodeOrdering};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn within(limit: Duration, start: Instant, detail: String) -> Outcome {
    let t = start.elapsed();
    check(t < limit, format!("{detail}; {:.1}s of {}s allowed", t.as_secs_f64(), limit.as_secs()))
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn round_trip() -> Outcome {
    let start = Instant::now();
    let mut r = rng(1);
    let mut bad = 0;
    for _ in 0..500 {
        let n = r.gen_range(1..=40);
        let g = common::connected_er(n, 0.2, &mut r);
        let order = random_bfs_order(&g, &mut r);
        let m = bfs_bandwidth(&g, &order).map_err(|e| e.to_string())?.max(1);
        let s = graph_to_sequence(&g, &order, m).map_err(|e| e.to_string())?;
        if sequence_to_graph(&s).ok() != Some(common::relabel_oracle(&g, order.perm())) {
            bad += 1;
        }
    }
    if bad > 0 {
        return Err(format!("{bad} of 500 graphs did not round-trip"));
    }
    within(Duration::from_secs(5), start, "500/500 exact".into())
}

fn star_many_to_one() -> Outcome {
    let g = Graph::star(6);
    let mut leaves: Vec<usize> = (1..=6).collect();
    let mut first: Option<BfsSequence> = None;
    let mut perms = 0;
    let mut distinct = 1;
    // Lexicographic enumeration of all 720 leaf orders.
    loop {
        let mut pi = vec![0];
        pi.extend(&leaves);
        let order = bfs_order(&g, &NodeOrdering::new(pi).unwrap()).unwrap();
        let s = graph_to_sequence(&g, &order, 6).unwrap();
        match &first {
            None => first = Some(s),
            Some(f) if *f != s => distinct += 1,
            _ => {}
        }
        perms += 1;
        let Some(i) = (0..5).rev().find(|&i| leaves[i] < leaves[i + 1]) else { break };
        let j = (i + 1..6).rev().find(|&j| leaves[j] > leaves[i]).unwrap();
        leaves.swap(i, j);
        leaves[i + 1..].reverse();
    }
    check(perms == 720 && distinct == 1, format!("{perms} permutations, {distinct} distinct sequence(s)"))
}

/// Summed BCE recomputed from the teacher-forced probabilities.
fn reference_loss(model: &GrnnModel, s: &BfsSequence) -> f64 {
    let p = forward_teacher_forced(model, s, true).unwrap();
    (0..p.probs.len())
        .filter(|&i| p.mask[i])
        .map(|i| {
            let (q, y) = (p.probs[i], p.targets[i]);
            -(y * q.ln() + (1.0 - y) * (1.0 - q).ln())
        })
        .sum()
}

fn perturbed(model: &GrnnModel, mut index: usize, delta: f64) -> GrnnModel {
    let mut m = model.clone();
    for t in m.params.tensors_mut() {
        if index < t.len() {
            t[index] += delta;
            break;
        }
        index -= t.len();
    }
    m
}

fn gradient_check() -> Outcome {
    const H: f64 = 1e-5;
    // Below this magnitude the central difference itself is dominated by
    // rounding (about eps·|L|/H ≈ 1e-10), so it floors the denominator.
    const FLOOR: f64 = 1e-5;
    let start = Instant::now();
    let hp = GrnnHyperparams {
        m: 3,
        graph_layers: 4,
        graph_hidden: 8,
        edge_layers: 4,
        edge_hidden: 4,
        head_hidden: 3,
        n_max: 4,
    };
    let model = GrnnModel::init(hp, 5).map_err(|e| e.to_string())?;
    let g = Graph::new(4, [(0, 1), (0, 2), (1, 2), (2, 3)]).unwrap();
    let s = graph_to_sequence(&g, &NodeOrdering::identity(4), 3).unwrap();
    let (_, _, grads) = loss_and_grad(&model, &s, true).map_err(|e| e.to_string())?;
    let analytic = grads.tensors().concat();
    let (mut worst, mut worst_abs) = (0.0f64, 0.0f64);
    for (i, &a) in analytic.iter().enumerate() {
        let numeric = (reference_loss(&perturbed(&model, i, H), &s) - reference_loss(&perturbed(&model, i, -H), &s)) / (2.0 * H);
        let err = (a - numeric).abs();
        worst_abs = worst_abs.max(err);
        worst = worst.max(err / a.abs().max(numeric.abs()).max(FLOOR));
    }
    let detail = format!(
        "{} parameters, max relative error {worst:.2e} (max absolute {worst_abs:.2e})",
        analytic.len()
    );
    if worst >= 1e-4 {
        return Err(detail);
    }
    within(Duration::from_secs(60), start, detail)
}

fn memorize_triangle() -> Outcome {
    let start = Instant::now();
    let corpus = vec![Graph::complete(3); 32];
    let hp = GrnnHyperparams {
        m: 2,
        graph_layers: 2,
        graph_hidden: 32,
        edge_layers: 2,
        edge_hidden: 16,
        head_hidden: 8,
        n_max: 3,
    };
    let model = GrnnModel::init(hp, 1).map_err(|e| e.to_string())?;
    let cfg = TrainConfig { epochs: 500, seed: 2, ..Default::default() };
    let model = train(model, &corpus, cfg, |_, _, _| {}).map_err(|e| e.to_string())?;
    // Every BFS ordering of K3 yields the same sequence.
    let s = graph_to_sequence(&corpus[0], &NodeOrdering::identity(3), 2).unwrap();
    let (sum, count) = forward_teacher_forced(&model, &s, true).map_err(|e| e.to_string())?.loss_sum();
    let loss = sum / count as f64;
    let hits = sample_graphs(&model, 100, 3, Exec::Parallel).iter().filter(|g| **g == corpus[0]).count();
    let detail = format!("loss {loss:.4}, {hits}/100 samples are K3");
    if loss >= 0.05 || hits < 95 {
        return Err(detail);
    }
    within(Duration::from_secs(120), start, detail)
}

fn community_experiment() -> Outcome {
    let start = Instant::now();
    let corpus = community_corpus(&CommunityParams::default(), 42, Exec::Parallel).map_err(|e| e.to_string())?;
    let mut r = rng(7);
    let (train_set, test_set) = split(&corpus, 0.7, &mut r).map_err(|e| e.to_string())?;
    let (m, n_max) = prepare_hyperparams(&train_set, None, None, 10, &mut r);
    let model = GrnnModel::init(GrnnHyperparams::new(m, n_max), 1).map_err(|e| e.to_string())?;
    let eval = EvalConfig::default();
    let untrained = sample_graphs(&model, 150, 5, Exec::Parallel);
    let baseline = evaluate_sets(&test_set, &untrained, &eval).map_err(|e| e.to_string())?;
    let cfg = TrainConfig { epochs: 300, seed: 2, ..Default::default() };
    let model = train(model, &train_set, cfg, |_, _, _| {}).map_err(|e| e.to_string())?;
    let samples = sample_graphs(&model, 150, 5, Exec::Parallel);
    let report = evaluate_sets(&test_set, &samples, &eval).map_err(|e| e.to_string())?;
    let (d, d0) = (report.degree.value, baseline.degree.value);
    let detail = format!(
        "m={m}, degree {d:.6} (untrained {d0:.6}), clustering {:.6}, orbit {:.6}",
        report.clustering.value, report.orbit.value
    );
    if d > 0.1 || d > d0 / 3.0 {
        return Err(detail);
    }
    within(Duration::from_secs(3600), start, detail)
}

/// EMD kernel value computed from cumulative sums.
fn emd_kernel(x: &[f64], y: &[f64], sigma: f64) -> f64 {
    let (mut cx, mut cy, mut d) = (0.0, 0.0, 0.0);
    for i in 0..x.len().max(y.len()) {
        cx += x.get(i).copied().unwrap_or(0.0);
        cy += y.get(i).copied().unwrap_or(0.0);
        d += f64::abs(cx - cy);
    }
    (-d * d / (2.0 * sigma * sigma)).exp()
}

fn random_histogram(r: &mut ChaCha8Rng) -> Vec<f64> {
    let len = r.gen_range(1..=12);
    let mut w: Vec<f64> = (0..len).map(|_| r.gen_range(0..10) as f64).collect();
    w[r.gen_range(0..len)] += 1.0;
    let total: f64 = w.iter().sum();
    w.iter().map(|x| x / total).collect()
}

fn mmd_properties() -> Outcome {
    let mut r = rng(6);
    let (mut self_worst, mut single_worst, mut sym_worst) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..100 {
        let sigma = r.gen_range(0.05..3.0);
        let kernel = Kernel::GaussianEmd { sigma, bin_width: 1.0 };
        let xs: Vec<Vec<f64>> = (0..r.gen_range(1..=12)).map(|_| random_histogram(&mut r)).collect();
        let ys: Vec<Vec<f64>> = (0..r.gen_range(1..=12)).map(|_| random_histogram(&mut r)).collect();
        let mmd = |a: &[Vec<f64>], b: &[Vec<f64>], k: &Kernel| mmd_squared_raw(a, b, k, Exec::Parallel).unwrap();
        self_worst = self_worst.max(mmd(&xs, &xs, &kernel).abs());
        sym_worst = sym_worst.max((mmd(&xs, &ys, &kernel) - mmd(&ys, &xs, &kernel)).abs());
        let single = mmd(&xs[..1], &ys[..1], &kernel);
        single_worst = single_worst.max((single - (2.0 - 2.0 * emd_kernel(&xs[0], &ys[0], sigma))).abs());

        let vecs = |r: &mut ChaCha8Rng| -> Vec<Vec<f64>> {
            (0..r.gen_range(1..=8)).map(|_| (0..15).map(|_| r.gen_range(0.0..60.0)).collect()).collect()
        };
        let (va, vb) = (vecs(&mut r), vecs(&mut r));
        let euclid = Kernel::GaussianEuclidean { sigma: 30.0 };
        self_worst = self_worst.max(mmd(&va, &va, &euclid).abs());
        sym_worst = sym_worst.max((mmd(&va, &vb, &euclid) - mmd(&vb, &va, &euclid)).abs());
        let d2: f64 = va[0].iter().zip(&vb[0]).map(|(a, b)| (a - b) * (a - b)).sum();
        let direct = 2.0 - 2.0 * (-d2 / 1800.0).exp();
        single_worst = single_worst.max((mmd(&va[..1], &vb[..1], &euclid) - direct).abs());
    }
    check(
        self_worst <= 1e-12 && single_worst <= 1e-12 && sym_worst <= 1e-12,
        format!("self {self_worst:.1e}, singleton {single_worst:.1e}, symmetry {sym_worst:.1e} over 100 sets per kernel"),
    )
}

fn orbit_oracle() -> Outcome {
    let start = Instant::now();
    let mut r = rng(8);
    let mut bad = 0;
    for _ in 0..50 {
        let n = r.gen_range(1..=20);
        let g = common::random_graph(n, r.gen_range(0.05..0.7), &mut r);
        let fast: Vec<[u64; 15]> = orbit_counts(&g);
        if fast != common::orbit_oracle(&g) {
            bad += 1;
        }
    }
    if bad > 0 {
        return Err(format!("{bad} of 50 graphs differ"));
    }
    within(Duration::from_secs(30), start, "50/50 exact".into())
}

fn visibility_oracle() -> Outcome {
    let start = Instant::now();
    let mut r = rng(9);
    let (mut bad, mut edges) = (0, 0);
    for _ in 0..200 {
        let boxes = r.gen_range(5..=40);
        let page = common::random_page(boxes, &mut r);
        let g = build_visibility_graph(&page, &VisibilityConfig::default()).map_err(|e| e.to_string())?;
        edges += g.edge_count();
        if g.edges() != common::visibility_oracle(&page, 0.25).as_slice() {
            bad += 1;
        }
    }
    if bad > 0 {
        return Err(format!("{bad} of 200 pages differ"));
    }
    within(Duration::from_secs(30), start, format!("200/200 exact, {edges} edges total"))
}

fn checkpoint_determinism() -> Outcome {
    let mut r = rng(10);
    let dir = std::env::temp_dir().join(format!("layoutgen-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let mut failures = Vec::new();
    for trial in 0..20 {
        let hp = GrnnHyperparams {
            m: r.gen_range(1..=6),
            graph_layers: r.gen_range(1..=4),
            graph_hidden: *[8, 16, 32].choose(&mut r).unwrap(),
            edge_layers: r.gen_range(1..=4),
            edge_hidden: *[4, 8, 16].choose(&mut r).unwrap(),
            head_hidden: r.gen_range(2..=8),
            n_max: r.gen_range(2..=15),
        };
        let model = GrnnModel::init(hp, r.gen()).map_err(|e| e.to_string())?;
        let path = dir.join(format!("{trial}.grnn"));
        save_checkpoint(&model, &path).map_err(|e| e.to_string())?;
        let loaded = load_checkpoint(&path).map_err(|e| e.to_string())?;
        let again = read_checkpoint(&write_checkpoint(&loaded).unwrap()).unwrap();
        let bits = |m: &GrnnModel| -> Vec<u64> { m.params.tensors().concat().iter().map(|x| x.to_bits()).collect() };
        let seed = r.gen();
        let same_params = bits(&model) == bits(&loaded) && bits(&loaded) == bits(&again) && loaded.hp == model.hp;
        let same_samples = sample_graphs(&model, 10, seed, Exec::Parallel) == sample_graphs(&loaded, 10, seed, Exec::Parallel);
        if !(same_params && same_samples) {
            failures.push(trial);
        }
    }
    let _ = std::fs::remove_dir_all(&dir);
    check(failures.is_empty(), format!("20 trials, failing {failures:?}"))
}

fn descriptor_oracle() -> Outcome {
    let mut r = rng(11);
    let mut bad = 0;
    for _ in 0..100 {
        let n = r.gen_range(1..=50);
        let g = common::random_graph(n, r.gen_range(0.0..0.9), &mut r);
        let degrees = common::degree_oracle(&g);
        let hist = degree_histogram(&g).map_err(|e| e.to_string())?;
        let hist_ok = hist.len() == degrees.iter().max().unwrap() + 1
            && hist
                .iter()
                .enumerate()
                .all(|(d, &h)| h == degrees.iter().filter(|&&x| x == d).count() as f64 / n as f64);
        if !(g.degrees() == degrees && hist_ok && clustering_coefficients(&g) == common::clustering_oracle(&g)) {
            bad += 1;
        }
    }
    check(bad == 0, format!("{} of 100 graphs exact", 100 - bad))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("sequence round trip", round_trip),
        ("BFS many-to-one on K1,6", star_many_to_one),
        ("gradient check", gradient_check),
        ("K3 memorization", memorize_triangle),
        ("community experiment", community_experiment),
        ("MMD properties", mmd_properties),
        ("orbit oracle", orbit_oracle),
        ("visibility oracle", visibility_oracle),
        ("checkpoint determinism", checkpoint_determinism),
        ("clustering and degree oracle", descriptor_oracle),
    ];
    let selected: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let id = i + 1;
        if !selected.is_empty() && !selected.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS [{id:>2}] {name}: {detail} ({secs:.1}s)"),
            Err(detail) => {
                failed += 1;
                println!("FAIL [{id:>2}] {name}: {detail} ({secs:.1}s)");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
