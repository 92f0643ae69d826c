use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{anyhow, bail, Context, Result};
use log::{error, info, warn};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use layoutgen::datasets::{community_corpus, er_corpus, CommunityParams};
use layoutgen::io::{load_corpus, provenance, render, save_corpus, write_corpus, RenderFormat};
use layoutgen::layout::{build_visibility_graph, load_page, VisibilityConfig};
use layoutgen::model::{
    init_model, load_checkpoint, prepare_hyperparams, sample_graphs, save_checkpoint, train, GrnnHyperparams,
    TrainConfig,
};
use layoutgen::nn::LrSchedule;
use layoutgen::stats::{evaluate_sets, EvalConfig, OrbitAggregation};
use layoutgen::{Exec, Graph};

use crate::config::Config;
use crate::{Cli, Command, EvalArgs, ExtractArgs, RenderArgs, SampleArgs, SynthArgs, TrainArgs};

/// Exit status for a failed command: 2 for numeric failures, 1 otherwise.
pub fn exit_code(e: &anyhow::Error) -> u8 {
    let numeric = e
        .chain()
        .filter_map(|c| c.downcast_ref::<layoutgen::Error>())
        .any(layoutgen::Error::is_numeric);
    if numeric {
        2
    } else {
        1
    }
}

/// A gap limit: a fraction, or `none` for no limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gap(pub Option<f64>);

impl FromStr for Gap {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s.eq_ignore_ascii_case("none") {
            return Ok(Gap(None));
        }
        match s.parse::<f64>() {
            Ok(v) if v > 0.0 => Ok(Gap(Some(v))),
            _ => Err(format!("expected a positive number or 'none', got '{s}'")),
        }
    }
}

impl<'de> Deserialize<'de> for Gap {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Word(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(v) if v > 0.0 => Ok(Gap(Some(v))),
            Repr::Num(v) => Err(serde::de::Error::custom(format!("gap {v} must be positive"))),
            Repr::Word(w) => w.parse().map_err(serde::de::Error::custom),
        }
    }
}

struct Ctx {
    cfg: Config,
    seed: u64,
}

pub fn run(cli: Cli) -> Result<()> {
    let cfg = Config::load(cli.config.as_deref())?;
    let seed = match cli.seed {
        Some(s) => s,
        None => cfg.global("seed")?.unwrap_or(0),
    };
    let threads = match cli.threads {
        Some(t) => Some(t),
        None => cfg.global("threads")?,
    };
    if let Some(t) = threads {
        if t == 0 {
            bail!("--threads must be at least 1");
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .context("cannot configure the thread pool")?;
    }
    let ctx = Ctx { cfg, seed };
    match cli.command {
        Command::Extract(a) => extract(&ctx, a),
        Command::Synth(a) => synth(&ctx, a),
        Command::Train(a) => train_cmd(&ctx, a),
        Command::Sample(a) => sample(&ctx, a),
        Command::Eval(a) => eval(&ctx, a),
        Command::Render(a) => render_cmd(&ctx, a),
    }
}

fn read_corpus(path: &Path) -> Result<Vec<Graph>> {
    load_corpus(path).with_context(|| format!("cannot load corpus {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn annotation_files(input: &Path) -> Result<Vec<PathBuf>> {
    if input.is_file() {
        return Ok(vec![input.to_path_buf()]);
    }
    let entries = std::fs::read_dir(input).with_context(|| format!("cannot read directory {}", input.display()))?;
    let mut files = Vec::new();
    for entry in entries {
        let path = entry?.path();
        if path.is_file() && path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

fn extract(ctx: &Ctx, a: ExtractArgs) -> Result<()> {
    let input: PathBuf = ctx.cfg.require(a.input, "extract", "input")?;
    let out: PathBuf = ctx.cfg.require(a.out, "extract", "out")?;
    let defaults = VisibilityConfig::default();
    let vis = VisibilityConfig {
        max_vertical_gap: ctx.cfg.pick(a.max_vertical_gap, "extract", "max_vertical_gap")?.map_or(defaults.max_vertical_gap, |g| g.0),
        max_horizontal_gap: ctx.cfg.pick(a.max_horizontal_gap, "extract", "max_horizontal_gap")?.map_or(defaults.max_horizontal_gap, |g| g.0),
    };
    let files = annotation_files(&input)?;
    if files.is_empty() {
        warn!("no annotation files found in {}", input.display());
    }
    let results = layoutgen::par::map(Exec::Parallel, &files, |f| {
        load_page(f).and_then(|page| build_visibility_graph(&page, &vis))
    });
    let mut graphs = Vec::new();
    let mut comments = vec![provenance(ctx.seed)];
    let mut failed = 0;
    for (f, r) in files.iter().zip(results) {
        match r {
            Ok(g) => {
                comments.push(format!("graph {}: {}", graphs.len(), f.display()));
                graphs.push(g);
            }
            Err(e) => {
                failed += 1;
                error!("{}: {e}", f.display());
            }
        }
    }
    save_corpus(&out, &graphs, &comments).with_context(|| format!("cannot write {}", out.display()))?;
    info!("wrote {} graphs to {}", graphs.len(), out.display());
    if failed > 0 {
        bail!("{failed} of {} annotation files failed", files.len());
    }
    Ok(())
}

fn synth(ctx: &Ctx, a: SynthArgs) -> Result<()> {
    let c = &ctx.cfg;
    let kind: String = c.pick_or(a.kind, "synth", "kind", "community".into())?;
    let out: PathBuf = c.require(a.out, "synth", "out")?;
    let (graphs, desc) = match kind.as_str() {
        "community" => {
            let d = CommunityParams::default();
            let p = CommunityParams {
                num_graphs: c.pick_or(a.count, "synth", "count", d.num_graphs)?,
                size_lo: c.pick_or(a.size_lo, "synth", "size_lo", d.size_lo)?,
                size_hi: c.pick_or(a.size_hi, "synth", "size_hi", d.size_hi)?,
                p_intra: c.pick_or(a.p_intra, "synth", "p_intra", d.p_intra)?,
                inter_edges: c.pick_or(a.inter_edges, "synth", "inter_edges", d.inter_edges)?,
            };
            let desc = format!(
                "kind=community count={} size_lo={} size_hi={} p_intra={} inter_edges={}",
                p.num_graphs, p.size_lo, p.size_hi, p.p_intra, p.inter_edges
            );
            (community_corpus(&p, ctx.seed, Exec::Parallel)?, desc)
        }
        "er" => {
            let count = c.pick_or(a.count, "synth", "count", 100)?;
            let n: usize = c.require(a.n, "synth", "n")?;
            let p: f64 = c.require(a.p, "synth", "p")?;
            (er_corpus(count, n, p, ctx.seed, Exec::Parallel)?, format!("kind=er count={count} n={n} p={p}"))
        }
        other => bail!("unknown --kind '{other}' (community, er)"),
    };
    save_corpus(&out, &graphs, &[provenance(ctx.seed), desc]).with_context(|| format!("cannot write {}", out.display()))?;
    info!("wrote {} graphs to {}", graphs.len(), out.display());
    Ok(())
}

fn train_cmd(ctx: &Ctx, a: TrainArgs) -> Result<()> {
    let c = &ctx.cfg;
    let corpus_path: PathBuf = c.require(a.corpus, "train", "corpus")?;
    let out: PathBuf = c.require(a.out, "train", "out")?;
    let log_path: Option<PathBuf> = c.pick(a.log, "train", "log")?;
    let corpus = read_corpus(&corpus_path)?;
    if corpus.is_empty() {
        bail!("corpus {} is empty", corpus_path.display());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    rng.set_stream(1);
    let (m, n_max) = prepare_hyperparams(&corpus, c.pick(a.m, "train", "m")?, c.pick(a.n_max, "train", "n_max")?, 10, &mut rng);
    let d = GrnnHyperparams::new(m, n_max);
    let hp = GrnnHyperparams {
        graph_layers: c.pick_or(a.graph_layers, "train", "graph_layers", d.graph_layers)?,
        graph_hidden: c.pick_or(a.graph_hidden, "train", "graph_hidden", d.graph_hidden)?,
        edge_layers: c.pick_or(a.edge_layers, "train", "edge_layers", d.edge_layers)?,
        edge_hidden: c.pick_or(a.edge_hidden, "train", "edge_hidden", d.edge_hidden)?,
        head_hidden: c.pick_or(a.head_hidden, "train", "head_hidden", d.head_hidden)?,
        ..d
    };
    let ds = LrSchedule::default();
    let dt = TrainConfig::default();
    let tc = TrainConfig {
        batch_size: c.pick_or(a.batch_size, "train", "batch_size", dt.batch_size)?,
        schedule: LrSchedule {
            base_lr: c.pick_or(a.lr, "train", "lr", ds.base_lr)?,
            factor: c.pick_or(a.lr_decay, "train", "lr_decay", ds.factor)?,
            every: c.pick_or(a.lr_every, "train", "lr_every", ds.every)?,
        },
        epochs: c.pick_or(a.epochs, "train", "epochs", dt.epochs)?,
        seed: ctx.seed,
        exec: Exec::Parallel,
        ..dt
    };
    let model = init_model(hp, ctx.seed)?;
    info!(
        "training on {} graphs: m={m} n_max={n_max} params={} epochs={}",
        corpus.len(),
        model.param_count(),
        tc.epochs
    );
    let mut log_text = format!("# {}\n", provenance(ctx.seed));
    if log_path.is_none() {
        emit(None, &log_text)?;
    }
    let model = train(model, &corpus, tc, |epoch, lr, loss| {
        let line = format!("epoch={epoch} lr={lr:.8} loss={loss:.9}\n");
        if log_path.is_none() {
            print!("{line}");
        } else {
            info!("{}", line.trim_end());
        }
        log_text.push_str(&line);
    })?;
    if let Some(p) = &log_path {
        emit(Some(p), &log_text)?;
    }
    save_checkpoint(&model, &out).with_context(|| format!("cannot write {}", out.display()))?;
    info!("wrote checkpoint {}", out.display());
    Ok(())
}

fn sample(ctx: &Ctx, a: SampleArgs) -> Result<()> {
    let c = &ctx.cfg;
    let ckpt: PathBuf = c.require(a.checkpoint, "sample", "checkpoint")?;
    let count: usize = c.require(a.count, "sample", "count")?;
    let out: Option<PathBuf> = c.pick(a.out, "sample", "out")?;
    let model = load_checkpoint(&ckpt).with_context(|| format!("cannot load checkpoint {}", ckpt.display()))?;
    let graphs = sample_graphs(&model, count, ctx.seed, Exec::Parallel);
    let comments = [provenance(ctx.seed), format!("checkpoint={} count={count}", ckpt.display())];
    emit(out.as_deref(), &write_corpus(&graphs, &comments))
}

fn eval(ctx: &Ctx, a: EvalArgs) -> Result<()> {
    let c = &ctx.cfg;
    let test: PathBuf = c.require(a.test, "eval", "test")?;
    let generated: PathBuf = c.require(a.generated, "eval", "generated")?;
    let out: Option<PathBuf> = c.pick(a.out, "eval", "out")?;
    let json = a.json || c.pick(None, "eval", "json")?.unwrap_or(false);
    let d = EvalConfig::default();
    let aggregation = match c.pick(a.orbit_aggregation, "eval", "orbit_aggregation")?.as_deref() {
        None | Some("graph") => OrbitAggregation::GraphMean,
        Some("node") => OrbitAggregation::NodeLevel,
        Some(other) => bail!("unknown orbit aggregation '{other}' (graph, node)"),
    };
    let ec = EvalConfig {
        degree_sigma: c.pick_or(a.degree_sigma, "eval", "degree_sigma", d.degree_sigma)?,
        clustering_sigma: c.pick_or(a.clustering_sigma, "eval", "clustering_sigma", d.clustering_sigma)?,
        clustering_bins: c.pick_or(a.clustering_bins, "eval", "clustering_bins", d.clustering_bins)?,
        orbit_sigma: c.pick_or(a.orbit_sigma, "eval", "orbit_sigma", d.orbit_sigma)?,
        orbit_aggregation: aggregation,
        exec: Exec::Parallel,
    };
    let a_set = read_corpus(&test)?;
    let b_set = read_corpus(&generated)?;
    let report = evaluate_sets(&a_set, &b_set, &ec)
        .with_context(|| format!("cannot compare {} with {}", test.display(), generated.display()))?;
    let mut text = format!("# {}\n", provenance(ctx.seed));
    text.push_str(&report.to_lines());
    if json {
        let block = serde_json::json!({
            "tool": layoutgen::VERSION,
            "seed": ctx.seed,
            "test": test.display().to_string(),
            "generated": generated.display().to_string(),
            "report": report,
        });
        text.push_str(&serde_json::to_string_pretty(&block)?);
        text.push('\n');
    }
    emit(None, &text)?;
    if let Some(p) = &out {
        emit(Some(p), &text)?;
    }
    Ok(())
}

fn render_cmd(ctx: &Ctx, a: RenderArgs) -> Result<()> {
    let c = &ctx.cfg;
    let corpus_path: PathBuf = c.require(a.corpus, "render", "corpus")?;
    let index: usize = c.pick_or(a.index, "render", "index", 0)?;
    let format: String = c.pick_or(a.format, "render", "format", "dot".into())?;
    let out: Option<PathBuf> = c.pick(a.out, "render", "out")?;
    let format: RenderFormat = format.parse()?;
    let corpus = read_corpus(&corpus_path)?;
    let g = corpus
        .get(index)
        .ok_or_else(|| anyhow!("index {index} out of range: {} has {} graphs", corpus_path.display(), corpus.len()))?;
    emit(out.as_deref(), &render(g, format, ctx.seed))
}
