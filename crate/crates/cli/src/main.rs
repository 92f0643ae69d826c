//! `layoutgen` command-line tool.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "layoutgen", version, about = "Document layout graphs: extraction, generation and evaluation")]
pub struct Cli {
    /// Master seed for every random choice.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// JSON file with default values; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Convert page annotations into a visibility-graph corpus.
    Extract(ExtractArgs),
    /// Generate a synthetic corpus.
    Synth(SynthArgs),
    /// Train a generator on a corpus and write a checkpoint.
    Train(TrainArgs),
    /// Draw graphs from a checkpoint.
    Sample(SampleArgs),
    /// Compare two corpora with degree, clustering and orbit MMD.
    Eval(EvalArgs),
    /// Draw one graph of a corpus as dot, graphml or svg.
    Render(RenderArgs),
}

#[derive(Args, Debug)]
pub struct ExtractArgs {
    /// Directory of annotation files (or a single file).
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Largest vertical gap as a fraction of page height, or "none".
    #[arg(long)]
    pub max_vertical_gap: Option<commands::Gap>,
    /// Largest horizontal gap as a fraction of page width, or "none".
    #[arg(long)]
    pub max_horizontal_gap: Option<commands::Gap>,
}

#[derive(Args, Debug)]
pub struct SynthArgs {
    /// community or er
    #[arg(long)]
    pub kind: Option<String>,
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long)]
    pub size_lo: Option<usize>,
    #[arg(long)]
    pub size_hi: Option<usize>,
    #[arg(long)]
    pub p_intra: Option<f64>,
    #[arg(long)]
    pub inter_edges: Option<usize>,
    /// Node count for er graphs.
    #[arg(long)]
    pub n: Option<usize>,
    /// Edge probability for er graphs.
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct TrainArgs {
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    /// Checkpoint to write.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Loss log file; lines go to stdout when absent.
    #[arg(long)]
    pub log: Option<PathBuf>,
    #[arg(long)]
    pub epochs: Option<u32>,
    #[arg(long)]
    pub batch_size: Option<usize>,
    #[arg(long)]
    pub lr: Option<f64>,
    /// Learning-rate multiplier applied every `lr_every` epochs.
    #[arg(long)]
    pub lr_decay: Option<f64>,
    #[arg(long)]
    pub lr_every: Option<u32>,
    /// Truncation width; estimated from the corpus when absent.
    #[arg(long)]
    pub m: Option<usize>,
    /// Node limit for sampling; the largest corpus graph when absent.
    #[arg(long)]
    pub n_max: Option<usize>,
    #[arg(long)]
    pub graph_layers: Option<usize>,
    #[arg(long)]
    pub graph_hidden: Option<usize>,
    #[arg(long)]
    pub edge_layers: Option<usize>,
    #[arg(long)]
    pub edge_hidden: Option<usize>,
    #[arg(long)]
    pub head_hidden: Option<usize>,
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    #[arg(long)]
    pub count: Option<usize>,
    /// Corpus to write; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    /// Reference corpus.
    #[arg(long)]
    pub test: Option<PathBuf>,
    /// Generated corpus.
    #[arg(long)]
    pub generated: Option<PathBuf>,
    /// Also write the report here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Append a JSON block to the report.
    #[arg(long)]
    pub json: bool,
    #[arg(long)]
    pub degree_sigma: Option<f64>,
    #[arg(long)]
    pub clustering_sigma: Option<f64>,
    #[arg(long)]
    pub clustering_bins: Option<usize>,
    #[arg(long)]
    pub orbit_sigma: Option<f64>,
    /// graph (mean orbit vector per graph) or node
    #[arg(long)]
    pub orbit_aggregation: Option<String>,
}

#[derive(Args, Debug)]
pub struct RenderArgs {
    #[arg(long)]
    pub corpus: Option<PathBuf>,
    #[arg(long)]
    pub index: Option<usize>,
    /// dot, graphml or svg
    #[arg(long)]
    pub format: Option<String>,
    /// Drawing to write; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            log::error!("{e:#}");
            ExitCode::from(commands::exit_code(&e))
        }
    }
}
