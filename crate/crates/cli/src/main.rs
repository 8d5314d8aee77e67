use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::Parser;
use osmvc_cli::{load_dataset, run_pipeline, write_outputs};
use osmvc_core::pipeline::PipelineConfig;
use osmvc_core::solver::ProblemConfig;

/// Multi-view clustering with anchor transition probabilities.
#[derive(Debug, Parser)]
#[command(name = "osmvc", version)]
struct Args {
    /// Dataset manifest (JSON).
    #[arg(long)]
    data: PathBuf,
    /// Cluster count; overrides the manifest.
    #[arg(long)]
    clusters: Option<usize>,
    /// Anchors as a fraction of the sample count.
    #[arg(long, default_value_t = 0.1)]
    anchor_rate: f64,
    /// Absolute anchor count; overrides --anchor-rate.
    #[arg(long)]
    anchors: Option<usize>,
    /// Neighbours per sample in the anchor graph.
    #[arg(long, default_value_t = 5)]
    knn: usize,
    #[arg(long, default_value_t = 100.0)]
    lambda1: f64,
    #[arg(long, default_value_t = 100.0)]
    lambda2: f64,
    /// Schatten exponent in (0, 1].
    #[arg(long, default_value_t = 0.8)]
    p: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long, default_value_t = 200)]
    max_iter: usize,
    /// Skip per-view min-max scaling.
    #[arg(long)]
    no_normalize: bool,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(args: Args) -> anyhow::Result<()> {
    let data = load_dataset(&args.data).context("loading dataset")?;
    let cfg = PipelineConfig {
        problem: ProblemConfig {
            lambda1: args.lambda1,
            lambda2: args.lambda2,
            p: args.p,
            tol: args.tol,
            max_iter: args.max_iter,
            seed: args.seed,
            ..ProblemConfig::default()
        },
        anchor_rate: args.anchor_rate,
        anchors: args.anchors,
        knn: args.knn,
        normalize: !args.no_normalize,
    };
    let (report, result) = run_pipeline(&data, args.clusters, &cfg).context("clustering")?;
    write_outputs(&args.out, &result, &report).context("writing outputs")?;
    eprintln!(
        "{}: n={} V={} m={} iterations={} converged={}",
        report.dataset, report.samples, report.views, report.anchors, report.iterations, report.converged
    );
    if let Some(m) = report.metrics {
        eprintln!("acc={:.4} nmi={:.4} purity={:.4}", m.acc, m.nmi, m.purity);
    }
    Ok(())
}
